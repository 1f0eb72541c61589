//! Bohr sets `{k : ‖(k - shift)·α_i‖ < ε for all i}`: membership, piecewise
//! Bohr containment, the C−C ⊇ U∖N check and exponential-sum frequency hints.
//!
//! Distances `‖x‖` to the nearest integer are computed exactly: rational
//! frequencies with integer arithmetic, float frequencies from their exact
//! binary expansion `m·2^-s`. When every frequency and ε are rational the
//! comparison with ε is exact as well. Otherwise the comparison is done in
//! floating point and a point is a member only if `‖kα‖ < ε - BOHR_TOLERANCE`,
//! so membership within 1e-12 of the boundary is decided as "out".

use num_integer::Integer;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::density::banach_density_est;
use crate::error::{Error, Result};
use crate::real::{serde_q, Real, Q};
use crate::setmodel::{materialize, SetSpec, Window, WindowedSet};

pub const BOHR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct BohrSpec {
    freqs: Vec<Real>,
    eps: Real,
    shift: i64,
}

impl BohrSpec {
    pub fn new(freqs: Vec<Real>, eps: Real, shift: i64) -> Result<Self> {
        if freqs.is_empty() {
            return Err(Error::OutOfRange("bohr needs at least one frequency".into()));
        }
        for a in &freqs {
            let x = a.to_f64();
            let ok = match a {
                Real::Rational(q) => *q >= Q::from_integer(0) && *q < Q::from_integer(1),
                Real::Float(_) => a.is_finite() && (0.0..1.0).contains(&x),
            };
            if !ok {
                return Err(Error::OutOfRange(format!("frequency {a} not in [0,1)")));
            }
        }
        let ok = match eps {
            Real::Rational(q) => q > Q::from_integer(0) && q <= Q::new(1, 2),
            Real::Float(x) => x.is_finite() && x > 0.0 && x <= 0.5,
        };
        if !ok {
            return Err(Error::OutOfRange(format!("radius {eps} not in (0,1/2]")));
        }
        Ok(BohrSpec { freqs, eps, shift })
    }

    /// Bohr_0 set (no translate).
    pub fn zero(freqs: Vec<Real>, eps: Real) -> Result<Self> {
        BohrSpec::new(freqs, eps, 0)
    }

    pub fn freqs(&self) -> &[Real] {
        &self.freqs
    }

    pub fn eps(&self) -> Real {
        self.eps
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn with_shift(&self, shift: i64) -> BohrSpec {
        BohrSpec {
            shift,
            ..self.clone()
        }
    }

    /// `lcm` of the frequency denominators when every frequency is rational.
    /// The set is then periodic with this period.
    pub fn rational_period(&self) -> Option<i64> {
        self.freqs.iter().try_fold(1i64, |acc, a| {
            let q = a.as_rational()?;
            acc.checked_mul(*q.denom() / acc.gcd(q.denom()))
        })
    }

    pub fn contains(&self, k: i64) -> bool {
        bohr_member(k, self)
    }
}

/// Distance from `x` to the nearest integer, for `x = n·α`.
#[derive(Debug, Clone, Copy)]
enum Dist {
    /// `num / den`, exact.
    Exact { num: i128, den: i128 },
    Approx(f64),
}

fn dist_times(n: i128, alpha: &Real) -> Dist {
    match alpha {
        Real::Rational(q) => {
            let (p, d) = (*q.numer() as i128, *q.denom() as i128);
            let r = (n.rem_euclid(d) * p).rem_euclid(d);
            Dist::Exact {
                num: r.min(d - r),
                den: d,
            }
        }
        Real::Float(a) => float_dist(n, *a),
    }
}

fn float_dist(n: i128, a: f64) -> Dist {
    if a == 0.0 || n == 0 {
        return Dist::Exact { num: 0, den: 1 };
    }
    let bits = a.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut m, mut e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let tz = m.trailing_zeros();
    m >>= tz;
    e += tz as i32;
    let s = -e;
    if s <= 0 {
        // Integral α; cannot happen for α in [0,1) except 0.
        return Dist::Exact { num: 0, den: 1 };
    }
    if s <= 120 {
        // |n| < 2^65 and m < 2^53, so the product fits in i128.
        let modulus: i128 = 1 << s;
        let r = (n * m as i128).rem_euclid(modulus);
        let d = r.min(modulus - r);
        return Dist::Approx(d as f64 / modulus as f64);
    }
    // α < 2^-67: n·α is far below 1/2.
    Dist::Approx((n.unsigned_abs() as f64) * a)
}

/// `true` iff `‖(k - shift)·α_i‖ < ε` for every frequency.
pub fn bohr_member(k: i64, spec: &BohrSpec) -> bool {
    let n = k as i128 - spec.shift as i128;
    let exact_eps = spec.eps.as_rational();
    let eps_f = spec.eps.to_f64();
    spec.freqs.iter().all(|a| match (dist_times(n, a), exact_eps) {
        (Dist::Exact { num, den }, Some(e)) => num * (*e.denom() as i128) < (*e.numer() as i128) * den,
        (Dist::Exact { num, den }, None) => (num as f64 / den as f64) < eps_f - BOHR_TOLERANCE,
        (Dist::Approx(x), _) => x < eps_f - BOHR_TOLERANCE,
    })
}

/// Whether `P ⊇ U ∩ (I_1 ∪ … ∪ I_r)` for the Bohr set `U` of `spec`.
pub fn piecewise_bohr_check(p: &WindowedSet, spec: &BohrSpec, intervals: &[Window]) -> Result<bool> {
    Ok(first_piecewise_violation(p, spec, intervals)?.is_none())
}

/// The first Bohr member inside the intervals that is missing from `p`.
pub fn first_piecewise_violation(p: &WindowedSet, spec: &BohrSpec, intervals: &[Window]) -> Result<Option<i64>> {
    for iv in intervals {
        if !p.window().contains_window(iv) {
            let n = if iv.lo() < p.window().lo() { iv.lo() } else { iv.hi() };
            return Err(Error::OutsideWindow { n, window: p.window() });
        }
    }
    for iv in intervals {
        for n in iv.iter() {
            if spec.contains(n) && !p.contains(n)? {
                return Ok(Some(n));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FolnerBohrOutcome {
    pub pass: bool,
    /// Banach density estimate of `N_obs` at `L = ⌈|window| / 10⌉`.
    #[serde(with = "serde_q")]
    pub exceptional_density: Q,
    pub exceptional_count: usize,
    pub approximate: bool,
}

/// Checks `C − C ⊇ U ∖ N` on `window` with `U` the Bohr set of `spec`: the
/// exceptional set `N_obs = {n ∈ U : n ∉ C − C}` must have density estimate
/// at most `null_tolerance`.
pub fn folner_bohr_check(c: &SetSpec, spec: &BohrSpec, window: Window, null_tolerance: Q) -> Result<FolnerBohrOutcome> {
    let cc = materialize(&SetSpec::diff(c.clone(), c.clone()), window)?;
    let exceptional = WindowedSet::from_fn(window, |n| spec.contains(n) && !cc.contains_or_false(n));
    let len = window.len().div_ceil(10);
    let est = banach_density_est(&exceptional, len)?;
    Ok(FolnerBohrOutcome {
        pass: est.value <= null_tolerance,
        exceptional_density: est.value,
        exceptional_count: exceptional.count(),
        approximate: cc.is_approximate(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralHint {
    pub frequency: Q,
    pub magnitude: f64,
}

/// `|Σ_{x∈S} e^{2πi x j/G}| / |S|` for `j = 1..G−1`, largest first.
///
/// Magnitudes of `j` and `G − j` are equal for a real indicator and are
/// stored once, so conjugate pairs tie exactly. Ties (magnitudes equal to
/// 1e-9) are broken by the smaller `‖j/G‖`, then by the smaller `j`, which
/// keeps each pair `(α, 1 − α)` adjacent.
pub fn spectral_hints(s: &WindowedSet, grid_size: usize, top: usize) -> Result<Vec<SpectralHint>> {
    if grid_size < 2 || top < 1 {
        return Err(Error::OutOfRange("need grid_size >= 2 and top >= 1".into()));
    }
    let total = s.count();
    if total == 0 {
        return Err(Error::EmptySet);
    }
    let g = grid_size as i64;
    let mut buf = vec![Complex::new(0.0f64, 0.0); grid_size];
    for x in s.members() {
        buf[x.rem_euclid(g) as usize].re += 1.0;
    }
    FftPlanner::new().plan_fft_forward(grid_size).process(&mut buf);
    let mag = |j: usize| buf[j.min(grid_size - j)].norm() / total as f64;
    let mut hints: Vec<(i64, usize, usize, f64)> = (1..grid_size)
        .map(|j| {
            let m = mag(j);
            ((m * 1e9).round() as i64, j.min(grid_size - j), j, m)
        })
        .collect();
    hints.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    Ok(hints
        .into_iter()
        .take(top)
        .map(|(_, _, j, m)| SpectralHint { frequency: Q::new(j as i64, g), magnitude: m })
        .collect())
}

/// `frequency,magnitude` CSV, header first.
pub fn spectral_csv(hints: &[SpectralHint]) -> String {
    let mut out = String::from("frequency,magnitude\n");
    for h in hints {
        out.push_str(&format!("{}/{},{:.12}\n", h.frequency.numer(), h.frequency.denom(), h.magnitude));
    }
    out
}
