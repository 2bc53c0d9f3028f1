//! Exact rationals as used by the interval models, with the `num/den` text
//! form used in configs and reports.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Built with overflow checks on in every profile, so an overflow aborts
/// rather than wrapping.
pub type Rational = Ratio<i128>;

pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("bad rational {text:?}"));
    match text.split_once('/') {
        Some((num, den)) => {
            let num: i128 = num.trim().parse().map_err(|_| bad())?;
            let den: i128 = den.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            Ok(Rational::new(num, den))
        }
        None => Ok(Rational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// `num/den`, or just `num` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}
