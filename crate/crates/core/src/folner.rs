//! Greedy maximal families of pairwise disjoint translates `C − i`, the
//! `m ≤ ⌊1/d⌋` bound, and verification that the translates `(C − C) + i_k`
//! cover a test window.
//!
//! `C − i` and `C − j` meet exactly when `i − j ∈ C − C`, so admitting a
//! shift only needs membership in the difference set.

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::density::window_density;
use crate::error::{Error, Result};
use crate::real::{serde_opt_q, Q};
use crate::setmodel::{diff_set, materialize, Bits, ExactSet, SetSpec, Window, WindowedSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerReport {
    pub shifts: Vec<i64>,
    pub m: usize,
    /// `⌊1/d⌋`, absent when `d = 0`.
    #[serde(with = "serde_opt_q")]
    pub bound: Option<Q>,
    pub cover_verified: bool,
    /// Window on which disjointness (windowed input) or covering was decided.
    #[serde(skip)]
    pub core_window: Option<Window>,
    /// Density used for the bound.
    #[serde(skip)]
    pub density: Option<Q>,
    /// True when disjointness was decided on a finite core window rather
    /// than exactly on residues.
    #[serde(skip)]
    pub window_approximate: bool,
}

fn floor_inverse(d: Q) -> Option<Q> {
    (!d.is_zero()).then(|| d.recip().floor())
}

fn exact_form(c: &SetSpec) -> Result<ExactSet> {
    c.validate()?;
    ExactSet::of(c).ok_or_else(|| Error::NotPeriodicClass(c.to_string()))
}

fn exact_difference(e: &ExactSet) -> Result<ExactSet> {
    e.diff(e)
        .ok_or_else(|| Error::NotPeriodicClass("difference period too large".into()))
}

/// Default covering test window `[−10·P, 10·P]` for period `P`.
pub fn default_test_window(period: i64) -> Window {
    Window::new(-10 * period, 10 * period).expect("valid window")
}

/// Scan `shift_range` upward, admitting `i` iff `C − i` misses every
/// previously admitted translate. `C` must have an exact periodic-plus-finite
/// form; covering is then checked on [`default_test_window`].
pub fn greedy_disjoint_shifts(c: &SetSpec, shift_range: Window) -> Result<FolnerReport> {
    let e = exact_form(c)?;
    if e.is_empty() {
        return Err(Error::EmptySet);
    }
    let cc = exact_difference(&e)?;
    let mut shifts: Vec<i64> = Vec::new();
    for i in shift_range.iter() {
        if shifts.iter().all(|&j| !cc.contains(i - j)) {
            shifts.push(i);
        }
    }
    let test = default_test_window(e.period());
    let cover_verified = first_uncovered_exact(&cc, &shifts, test).is_none();
    let d = e.density();
    Ok(FolnerReport {
        m: shifts.len(),
        shifts,
        bound: floor_inverse(d),
        cover_verified,
        core_window: Some(test),
        density: Some(d),
        window_approximate: false,
    })
}

/// Greedy family for a materialized set: disjointness of `C − i` and
/// `C − j` is decided on `core` only, using members of `s` inside its window.
pub fn greedy_disjoint_shifts_windowed(s: &WindowedSet, core: Window, shift_range: Window) -> Result<FolnerReport> {
    let restricted = s.restrict(core)?;
    if restricted.is_empty() {
        return Err(Error::EmptySet);
    }
    let base = (core.lo() - s.window().lo()) as isize;
    let translate = |i: i64| {
        let mut t = Bits::new(core.len());
        t.or_shifted(s.bits(), -(base + i as isize));
        t
    };
    let mut used = Bits::new(core.len());
    let mut shifts = Vec::new();
    for i in shift_range.iter() {
        let t = translate(i);
        if t.and_count_shifted(&used, 0) == 0 {
            used.or_assign(&t);
            shifts.push(i);
        }
    }
    let cc = diff_set(s, s)?;
    let cover_verified = core
        .iter()
        .all(|n| shifts.iter().any(|&i| cc.contains_or_false(n - i)));
    let d = window_density(&restricted);
    Ok(FolnerReport {
        m: shifts.len(),
        shifts,
        bound: floor_inverse(d),
        cover_verified,
        core_window: Some(core),
        density: Some(d),
        window_approximate: true,
    })
}

fn first_uncovered_exact(cc: &ExactSet, shifts: &[i64], test: Window) -> Option<i64> {
    test.iter().find(|&n| !shifts.iter().any(|&i| cc.contains(n - i)))
}

/// Outcome of a covering check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cover {
    pub covered: bool,
    pub first_miss: Option<i64>,
    /// False when `C − C` was only under-approximated; a `covered` result is
    /// still sound, a miss may be spurious.
    pub exact: bool,
}

/// Whether every `n` in `test_window` lies in some `(C − C) + i_k`.
pub fn verify_cc_cover(c: &SetSpec, shifts: &[i64], test_window: Window) -> Result<bool> {
    Ok(cc_cover(c, shifts, test_window)?.covered)
}

pub fn cc_cover(c: &SetSpec, shifts: &[i64], test_window: Window) -> Result<Cover> {
    if shifts.is_empty() {
        return Err(Error::EmptyList);
    }
    c.validate()?;
    if let Some(e) = ExactSet::of(c) {
        if let Some(cc) = e.diff(&e) {
            let miss = first_uncovered_exact(&cc, shifts, test_window);
            return Ok(Cover { covered: miss.is_none(), first_miss: miss, exact: true });
        }
    }
    let (lo, hi) = (*shifts.iter().min().unwrap(), *shifts.iter().max().unwrap());
    let need = Window::new(test_window.lo() - hi, test_window.hi() - lo)?;
    let cc = materialize(&SetSpec::diff(c.clone(), c.clone()), need)?;
    let miss = test_window
        .iter()
        .find(|&n| !shifts.iter().any(|&i| cc.contains_or_false(n - i)));
    Ok(Cover { covered: miss.is_none(), first_miss: miss, exact: !cc.is_approximate() })
}

/// `⌊1/d⌋` as an integer, when `d > 0`.
pub fn bound_as_int(report: &FolnerReport) -> Option<usize> {
    report.bound.and_then(|b| b.to_integer().to_usize())
}
