//! Integer citation distributions that reproduce given reference values.
//!
//! Used to build fixture corpora whose `e` and `T` (with the default three
//! CSS scores) match a target table. For each window the distribution has
//! three tiers, listed by ascending rank:
//!
//! * a low tier with every value below the mean,
//! * a middle tier at `ceil(mean)`, retained by the first truncation only,
//! * a top tier of [`TOP_GROUP`] articles whose mean is the threshold.
//!
//! Articles keep their rank across windows, so a valid result is
//! non-decreasing per article as the window grows. The realized mean is
//! `round(n * e) / n` and the realized threshold `round(10 * T) / 10`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metrics::{css_scores, CitationWindow, DEFAULT_CSS_K};

/// Number of articles carrying the threshold.
pub const TOP_GROUP: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowTarget {
    pub window: CitationWindow,
    pub mean: f64,
    pub threshold: f64,
}

/// Counts per target window; `result[w][i]` is article `i`'s count in the
/// `w`-th window. Targets must have strictly ascending windows.
pub fn calibrated_counts(n: usize, targets: &[WindowTarget]) -> Result<Vec<Vec<u64>>> {
    if targets.is_empty() {
        return Err(Error::InfeasibleTarget("no target windows".into()));
    }
    if targets.windows(2).any(|w| w[0].window >= w[1].window) {
        return Err(Error::InfeasibleTarget(
            "target windows must be strictly ascending".into(),
        ));
    }
    let per_window = targets
        .iter()
        .map(|t| window_counts(n, t))
        .collect::<Result<Vec<_>>>()?;
    for (pair, next) in per_window.windows(2).zip(targets.iter().skip(1)) {
        if pair[0].iter().zip(&pair[1]).any(|(a, b)| a > b) {
            return Err(Error::InfeasibleTarget(format!(
                "counts would decrease for some article when moving to the {}-year window",
                next.window
            )));
        }
    }
    Ok(per_window)
}

fn window_counts(n: usize, target: &WindowTarget) -> Result<Vec<u64>> {
    let infeasible = |why: &str| {
        Err(Error::InfeasibleTarget(format!(
            "{}-year window, n={n}, e={}, T={}: {why}",
            target.window, target.mean, target.threshold
        )))
    };
    if !(target.mean >= 0.0 && target.threshold >= target.mean && target.threshold.is_finite()) {
        return infeasible("need 0 <= e <= T");
    }
    if n <= TOP_GROUP {
        return infeasible("needs more articles than the top tier");
    }
    let total = libm::round(n as f64 * target.mean) as u64;
    let top_sum = libm::round(TOP_GROUP as f64 * target.threshold) as u64;
    if total == 0 {
        if top_sum == 0 {
            return Ok(vec![0; n]);
        }
        return infeasible("a zero mean forces a zero threshold");
    }
    let (n64, a64) = (n as u64, TOP_GROUP as u64);
    let mid = total.div_ceil(n64);
    let max_low = mid - 1;
    let top_min = top_sum / a64;
    if top_sum <= mid * a64 {
        return infeasible("threshold too close to the mean");
    }
    for m in 0..=(n64 - a64) {
        let Some(rest) = total.checked_sub(top_sum + m * mid) else {
            break;
        };
        let low = n64 - a64 - m;
        // second score must not exceed the smallest top value
        if rest > low * max_low || m * mid + top_sum > top_min * (m + a64) {
            continue;
        }
        let (q, rem) = rest
            .checked_div(low)
            .map_or((0, 0), |q| (q, rest % low));
        let top_extra = (top_sum - top_min * a64) as usize;
        let mut counts = Vec::with_capacity(n);
        counts.extend(core::iter::repeat_n(q, (low - rem) as usize));
        counts.extend(core::iter::repeat_n(q + 1, rem as usize));
        counts.extend(core::iter::repeat_n(mid, m as usize));
        counts.extend(core::iter::repeat_n(top_min, TOP_GROUP - top_extra));
        counts.extend(core::iter::repeat_n(top_min + 1, top_extra));

        let css = css_scores(&counts, DEFAULT_CSS_K)?;
        let want_e = total as f64 / n as f64;
        let want_t = top_sum as f64 / TOP_GROUP as f64;
        if (css.scores()[0] - want_e).abs() > 1e-9 || (css.threshold() - want_t).abs() > 1e-9 {
            return infeasible("construction check failed");
        }
        return Ok(counts);
    }
    infeasible("no tier sizes satisfy the constraints")
}

/// Splits one article's cumulative window counts into per-year citations.
/// The first window's count is spread evenly over its years; each later
/// window adds its increment in the years it extends past the previous one.
pub fn yearly_citations(
    year: i32,
    windows: &[CitationWindow],
    cumulative: &[u64],
) -> Vec<(i32, u64)> {
    let mut out = Vec::new();
    let mut covered = 0u32;
    let mut previous = 0u64;
    for (window, &count) in windows.iter().zip(cumulative) {
        let span = window.length_years() - covered;
        let increment = count - previous;
        let (base, extra) = (increment / u64::from(span), increment % u64::from(span));
        for offset in 0..span {
            let value = base + u64::from(u64::from(offset) >= u64::from(span) - extra);
            if value > 0 {
                out.push((year + (covered + offset) as i32, value));
            }
        }
        covered = window.length_years();
        previous = count;
    }
    out
}
