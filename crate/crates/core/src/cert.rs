//! Independent re-checking of emitted certificates.
//!
//! The checkers here share no code with the searches that produce the
//! certificates: every claim is re-verified by direct scanning.

use std::collections::HashSet;

use num_traits::Zero;
use thiserror::Error;

use crate::folner::FolnerReport;
use crate::jin::JinReport;
use crate::lattice::{LatticeCertificate, LatticeSet};
use crate::real::Q;
use crate::setmodel::{diff_set, materialize, ExactSet, SetSpec, Window, WindowedSet};
use crate::structure::PwsCertificate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckFailure {
    #[error("certificate window {claimed} does not match the set window {actual}")]
    WindowMismatch { claimed: String, actual: String },
    #[error("interval {0} is not inside the window")]
    IntervalOutside(String),
    #[error("intervals are not sorted and pairwise disjoint")]
    IntervalOrder,
    #[error("{point} has no member within distance {k}")]
    Uncovered { point: String, k: u64 },
    #[error("{0}")]
    Claim(String),
    #[error("cannot evaluate inputs: {0}")]
    Input(String),
}

fn claim(msg: impl Into<String>) -> CheckFailure {
    CheckFailure::Claim(msg.into())
}

fn input(e: impl std::fmt::Display) -> CheckFailure {
    CheckFailure::Input(e.to_string())
}

pub type CheckResult = std::result::Result<(), CheckFailure>;

/// Every point of every interval lies within `k` of a member of `s`.
pub fn check_pws(s: &WindowedSet, cert: &PwsCertificate) -> CheckResult {
    let win = s.window();
    if cert.window != win {
        return Err(CheckFailure::WindowMismatch {
            claimed: cert.window.to_string(),
            actual: win.to_string(),
        });
    }
    for pair in cert.intervals.windows(2) {
        if pair[0].hi() >= pair[1].lo() {
            return Err(CheckFailure::IntervalOrder);
        }
    }
    let k = cert.k as i64;
    for iv in &cert.intervals {
        if !win.contains_window(iv) {
            return Err(CheckFailure::IntervalOutside(iv.to_string()));
        }
        for n in iv.iter() {
            let lo = (n - k).max(win.lo());
            let hi = (n + k).min(win.hi());
            if !(lo..=hi).any(|m| s.contains(m).unwrap_or(false)) {
                return Err(CheckFailure::Uncovered { point: n.to_string(), k: cert.k });
            }
        }
    }
    Ok(())
}

/// Every point of every listed cube lies within L∞ distance `k` of a member.
pub fn check_lattice(s: &LatticeSet, cert: &LatticeCertificate) -> CheckResult {
    let bbox = s.bbox();
    if &cert.window != bbox {
        return Err(CheckFailure::WindowMismatch {
            claimed: cert.window.to_string(),
            actual: bbox.to_string(),
        });
    }
    let k = cert.k as i64;
    for cube in &cert.intervals {
        if !bbox.contains_box(cube) {
            return Err(CheckFailure::IntervalOutside(cube.to_string()));
        }
        for p in cube.points() {
            let dims = p
                .iter()
                .zip(bbox.dims())
                .map(|(&x, w)| Window::new((x - k).max(w.lo()), (x + k).min(w.hi())))
                .collect::<Result<Vec<_>, _>>()
                .map_err(input)?;
            let hood = crate::lattice::GridBox::new(dims).map_err(input)?;
            if !hood.points().any(|q| s.contains(&q).unwrap_or(false)) {
                return Err(CheckFailure::Uncovered { point: format!("{p:?}"), k: cert.k });
            }
        }
    }
    Ok(())
}

/// `x ∈ A − B` by searching for a witness `b` directly.
fn is_difference(a: &WindowedSet, b: &WindowedSet, x: i64) -> bool {
    b.members().any(|y| a.contains_or_false(x + y))
}

/// Re-derives a Jin report from the two specs: the certificate against the
/// recomputed `A − B`, the claimed shift density by direct count, and every
/// successful probe by witness search.
pub fn check_jin(a: &SetSpec, b: &SetSpec, report: &JinReport) -> CheckResult {
    let ma = materialize(a, report.window).map_err(input)?;
    let mb = materialize(b, report.window).map_err(input)?;
    let p = diff_set(&ma, &mb).map_err(input)?;
    if p.window() != report.diff_window {
        return Err(CheckFailure::WindowMismatch {
            claimed: report.diff_window.to_string(),
            actual: p.window().to_string(),
        });
    }
    if let Some(cert) = &report.certificate {
        check_pws(&p, cert)?;
    }
    let n = report.shift.n;
    if !report.shift.range.contains(n) {
        return Err(claim(format!("shift {n} outside its range {}", report.shift.range)));
    }
    let count = report
        .window
        .iter()
        .filter(|&k| mb.contains_or_false(k) && ma.contains_or_false(k + n))
        .count();
    if Q::new(count as i64, report.window.len() as i64) != report.shift.value {
        return Err(claim(format!("shift density for n = {n} is {count}/{}", report.window.len())));
    }
    for probe in &report.probes {
        let Some(t) = probe.t else { continue };
        if probe.set.is_empty() {
            return Err(claim(format!("probe {} has a translate but no set", probe.seed)));
        }
        for &f in &probe.set {
            if !is_difference(&ma, &mb, f + n) {
                return Err(claim(format!("probe element {f} is not in (A - {n}) - B")));
            }
            if !is_difference(&ma, &mb, t + f) {
                return Err(claim(format!("{t} + {f} is not in A - B")));
            }
        }
    }
    Ok(())
}

/// Re-checks a Følner report for a periodic-plus-finite spec: ordering,
/// the bound `⌊1/d⌋`, pairwise disjointness of the translates and the
/// claimed covering of `test_window`, all from residues enumerated directly.
pub fn check_folner(c: &SetSpec, report: &FolnerReport, test_window: Window) -> CheckResult {
    let e = ExactSet::of(c).ok_or_else(|| input("spec has no exact periodic form"))?;
    let period = e.period();
    let one_period = materialize(c, Window::new(0, period - 1).map_err(input)?).map_err(input)?;
    let extras: Vec<i64> = e.extras().iter().copied().collect();
    let residues: Vec<i64> = one_period.members().filter(|x| !extras.contains(x)).collect();
    let contains = |x: i64| residues.binary_search(&x.rem_euclid(period)).is_ok() || extras.binary_search(&x).is_ok();

    if report.m != report.shifts.len() {
        return Err(claim(format!("m = {} but {} shifts listed", report.m, report.shifts.len())));
    }
    if report.shifts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(claim("shifts are not strictly increasing"));
    }
    let d = Q::new(residues.len() as i64, period);
    let bound = (!d.is_zero()).then(|| d.recip().floor());
    if bound != report.bound {
        return Err(claim(format!("bound should be {bound:?}")));
    }
    if let Some(b) = bound {
        if Q::from_integer(report.m as i64) > b {
            return Err(claim(format!("m = {} exceeds 1/d", report.m)));
        }
    }

    let mut periodic_diffs = HashSet::new();
    for &r1 in &residues {
        for &r2 in &residues {
            periodic_diffs.insert((r1 - r2).rem_euclid(period));
        }
    }
    let in_cc = |x: i64| {
        periodic_diffs.contains(&x.rem_euclid(period))
            || extras.iter().any(|&f| contains(f + x) || contains(f - x))
    };
    for (ix, &i) in report.shifts.iter().enumerate() {
        for &j in &report.shifts[ix + 1..] {
            if in_cc(i - j) {
                return Err(claim(format!("translates C - {i} and C - {j} intersect")));
            }
        }
    }
    if report.shifts.is_empty() {
        return Err(claim("no shifts"));
    }
    let covered = test_window
        .iter()
        .all(|n| report.shifts.iter().any(|&i| in_cc(n - i)));
    if covered != report.cover_verified {
        return Err(claim(format!("cover_verified should be {covered}")));
    }
    Ok(())
}
