//! Static SVG of the composition images, one row per depth.
//!
//! A ball `B_r(c)` of the universe is drawn through the Monna map
//! `m(sum d_j t^j) = sum_{j >= 0} d_j p^(-j-1)` as the interval
//! `[m(c), m(c) + p^-r)`. Tails below index 0 are shared by the whole
//! universe and are dropped. Positions are exact integers over `p^N`, so the
//! output depends only on the config and the depth.

use std::fmt::Write as _;

use valued_ifs::words::{word_count, words};
use valued_ifs::{Ball, Budget};

use crate::config::{LoadedConfig, RunConfig};
use crate::CliError;

const LEFT: f64 = 90.0;
const TOP: f64 = 50.0;
const PLOT_WIDTH: f64 = 800.0;
const ROW: f64 = 30.0;
const BAR: f64 = 20.0;
/// More bars than this make an unreadable figure.
pub const MAX_BARS: u128 = 1 << 16;

/// `(m(c) p^N, p^(N-r))` for the ball's interval.
fn monna_span(b: &Ball) -> (u128, u128) {
    let ctx = b.context();
    let (p, n) = (ctx.p() as u128, ctx.precision());
    let start = (0..n as i32).fold(0u128, |acc, j| acc * p + b.center().digit(j) as u128);
    let width = p.pow(n - b.radius().max(0) as u32);
    (start, width)
}

pub fn render(loaded: &LoadedConfig, depth: usize, budget: Budget) -> Result<String, CliError> {
    let RunConfig::Ball(c) = &loaded.config else {
        return Err(CliError::Config("render needs a ball-model config".into()));
    };
    let setup = c.setup()?;
    let (ifs, universe) = (&setup.ifs, &setup.universe);
    let total: u128 = (0..=depth)
        .map(|d| word_count(ifs.len(), d).unwrap_or(u128::MAX))
        .fold(0u128, u128::saturating_add);
    budget.check(total)?;
    if total > MAX_BARS {
        return Err(CliError::Config(format!(
            "depth {depth} needs {total} bars, more than {MAX_BARS}"
        )));
    }
    let ctx = setup.ctx;
    let scale = (ctx.p() as u128).pow(ctx.precision()) as f64;
    let height = TOP + ROW * (depth + 1) as f64 + 20.0;
    let width = LEFT + PLOT_WIDTH + 30.0;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let title = format!(
        "{} system, p = {}, N = {}, {}, universe {}",
        ifs.kind(),
        ctx.p(),
        ctx.precision(),
        ctx.mode(),
        universe
    );
    let _ = writeln!(svg, "<title>{}</title>", escape(&title));
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{LEFT:.0}" y="25" font-family="monospace" font-size="13">{}</text>"#,
        escape(&title)
    );
    for d in 0..=depth {
        let y = TOP + ROW * d as f64;
        let _ = writeln!(
            svg,
            r#"<text x="10" y="{:.1}" font-family="monospace" font-size="12">depth {d}</text>"#,
            y + BAR * 0.75
        );
        let _ = writeln!(svg, r#"<g fill="steelblue" stroke="white" stroke-width="0.5">"#);
        for word in words(ifs.len(), d) {
            let image = ifs.compose_ball(&word, universe)?;
            let (start, span) = monna_span(&image);
            let x = LEFT + PLOT_WIDTH * start as f64 / scale;
            let w = PLOT_WIDTH * span as f64 / scale;
            let _ = writeln!(
                svg,
                r#"<rect x="{x:.3}" y="{y:.1}" width="{w:.3}" height="{BAR:.1}"/>"#
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
