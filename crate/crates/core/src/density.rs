//! Window densities, the finite upper-Banach-density surrogate, and the
//! exhaustive integer-shift analog of shifting by an ultrafilter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{serde_q, Q};
use crate::setmodel::{materialize, ExactSet, SetSpec, Window, WindowedSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    #[serde(with = "serde_q")]
    pub value: Q,
    pub window_length: usize,
    pub achieving_window: Window,
}

/// `|S| / |window|`.
pub fn window_density(s: &WindowedSet) -> Q {
    Q::new(s.count() as i64, s.window().len() as i64)
}

/// Exact density of a periodic-plus-finite spec.
pub fn exact_density(spec: &SetSpec) -> Option<Q> {
    ExactSet::of(spec).map(|e| e.density())
}

/// Maximum of `|S ∩ W| / L` over all length-`L` subwindows `W`, with the
/// leftmost maximizer.
pub fn banach_density_est(s: &WindowedSet, len: usize) -> Result<DensityReport> {
    let w = s.window();
    if len < 1 || len > w.len() {
        return Err(Error::OutOfRange(format!(
            "subwindow length {len} not in 1..={}",
            w.len()
        )));
    }
    let at = |i: usize| s.contains_or_false(w.lo() + i as i64) as usize;
    let mut count: usize = (0..len).map(at).sum();
    let (mut best, mut best_start) = (count, 0usize);
    for start in 1..=w.len() - len {
        count = count + at(start + len - 1) - at(start - 1);
        if count > best {
            best = count;
            best_start = start;
        }
    }
    let lo = w.lo() + best_start as i64;
    Ok(DensityReport {
        value: Q::new(best as i64, len as i64),
        window_length: len,
        achieving_window: Window::new(lo, lo + len as i64 - 1)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftWitness {
    pub n: i64,
    #[serde(with = "serde_q")]
    pub value: Q,
}

fn preferred(n: i64, over: i64) -> bool {
    n.abs() < over.abs() || (n.abs() == over.abs() && n > over)
}

/// The shift `n ∈ shift_range` maximizing the density on `eval_window` of
/// `{k : k ∈ B, k + n ∈ A}`, i.e. of `(A − n) ∩ B`. Ties go to the smallest
/// `|n|`, then to the positive one.
pub fn best_shift(a: &SetSpec, b: &SetSpec, shift_range: Window, eval_window: Window) -> Result<ShiftWitness> {
    let wide = eval_window.widened(-shift_range.lo(), shift_range.hi())?;
    let a_wide = materialize(a, wide)?;
    let b_eval = materialize(b, eval_window)?;
    best_shift_windowed(&a_wide, &b_eval, shift_range)
}

/// `best_shift` on materialized sets. Membership of `k + n` outside
/// `a.window()` counts as absent.
pub fn best_shift_windowed(a: &WindowedSet, b: &WindowedSet, shift_range: Window) -> Result<ShiftWitness> {
    let eval = b.window();
    let mut best: Option<(usize, i64)> = None;
    for n in shift_range.iter() {
        // Index of k + n in a is (k - eval.lo) + (eval.lo + n - a.lo).
        let offset = (eval.lo() + n - a.window().lo()) as isize;
        let count = b.bits().and_count_shifted(a.bits(), offset);
        best = match best {
            Some((c, m)) if c > count || (c == count && !preferred(n, m)) => Some((c, m)),
            _ => Some((count, n)),
        };
    }
    let (count, n) = best.expect("window is nonempty");
    Ok(ShiftWitness {
        n,
        value: Q::new(count as i64, eval.len() as i64),
    })
}
