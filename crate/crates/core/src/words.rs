//! Enumeration of composition words and the evaluation budget.
//!
//! Words are stored outermost map first: `[i_1, .., i_k]` denotes
//! `f_{i_1} o .. o f_{i_k}`. Word indices enumerate words in lexicographic
//! order, so the least failing index is the lexicographically least failure.

use crate::error::{Error, Result};

/// Cap on the number of evaluations an exhaustive check may perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u128);

impl Budget {
    pub const DEFAULT: Budget = Budget(10_000_000);

    pub fn check(self, required: u128) -> Result<()> {
        if required > self.0 {
            Err(Error::Budget {
                required,
                cap: self.0,
            })
        } else {
            Ok(())
        }
    }

    /// `n^k`, refusing counts over the cap (or beyond `u128`).
    pub fn words(self, n: usize, k: usize) -> Result<u128> {
        let count = word_count(n, k).ok_or(Error::Budget {
            required: u128::MAX,
            cap: self.0,
        })?;
        self.check(count)?;
        Ok(count)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

pub fn word_count(n: usize, k: usize) -> Option<u128> {
    (n as u128).checked_pow(u32::try_from(k).ok()?)
}

/// The `index`-th word of length `k` over `{0, .., n-1}` in lexicographic order.
pub fn word_at(n: usize, k: usize, mut index: u128) -> Vec<usize> {
    let mut word = vec![0; k];
    for slot in word.iter_mut().rev() {
        *slot = (index % n as u128) as usize;
        index /= n as u128;
    }
    word
}

/// All words of length `k`, lexicographically.
pub fn words(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = word_count(n, k).unwrap_or(0);
    (0..count).map(move |i| word_at(n, k, i))
}
