//! Desk-scale check that `A − B` is piecewise syndetic when `A` and `B` have
//! positive density, together with the translate mechanism: every finite
//! subset of `(A − n*) − B` has a translate inside `A − B`.
//!
//! The shift `n*` is the best finite witness from
//! [`best_shift_windowed`](crate::density::best_shift_windowed); the syndetic
//! core sampled by the probes is `C − C` with `C = (A − n*) ∩ B`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::density::{banach_density_est, best_shift_windowed};
use crate::error::{Error, Result};
use crate::real::{serde_q, Q};
use crate::rng::{keyed, KeyedStream};
use crate::setmodel::{diff_set, materialize, ExactSet, SetSpec, Window, WindowedSet};
use crate::structure::{pws_certificate, PwsCertificate};

/// Smallest `t ∈ search` with `t + F ⊆ P`. Shifts `t` for which some
/// `t + f` leaves `P.window()` are skipped.
pub fn find_translate(p: &WindowedSet, f: &[i64], search: Window) -> Result<Option<i64>> {
    let (Some(&fmin), Some(&fmax)) = (f.iter().min(), f.iter().max()) else {
        return Err(Error::EmptyList);
    };
    let w = p.window();
    let lo = search.lo().max(w.lo() - fmin);
    let hi = search.hi().min(w.hi() - fmax);
    Ok((lo..=hi).find(|&t| f.iter().all(|&x| p.contains_or_false(t + x))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct JinOptions {
    pub probes: usize,
    pub seed: u64,
    /// Shifts searched for `n*` are `[-r, r]`. Defaults to the lcm of the
    /// periods for exact inputs and 1000 otherwise, capped at a quarter of
    /// the window.
    pub shift_radius: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftRecord {
    pub n: i64,
    #[serde(with = "serde_q")]
    pub value: Q,
    pub range: Window,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub seed: u64,
    pub set: Vec<i64>,
    pub t: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Densities {
    #[serde(with = "serde_q")]
    pub a: Q,
    #[serde(with = "serde_q")]
    pub b: Q,
    /// Exact periodic densities, or Banach estimates at `L = ⌈|window|/10⌉`.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JinReport {
    pub densities: Densities,
    pub window: Window,
    pub diff_window: Window,
    /// Some operand was itself an under-approximation.
    pub approximate: bool,
    pub shift: ShiftRecord,
    pub certificate: Option<PwsCertificate>,
    pub probes: Vec<ProbeRecord>,
}

impl JinReport {
    pub fn probes_succeeded(&self) -> bool {
        self.probes.iter().all(|p| p.t.is_some())
    }

    pub fn success(&self) -> bool {
        self.certificate.is_some() && self.probes_succeeded()
    }
}

fn densities(a: &SetSpec, b: &SetSpec, ma: &WindowedSet, mb: &WindowedSet) -> Result<(Densities, Option<i64>)> {
    if let (Some(ea), Some(eb)) = (ExactSet::of(a), ExactSet::of(b)) {
        let lcm = ea.period().checked_mul(eb.period() / ea.period().gcd(&eb.period()));
        return Ok((Densities { a: ea.density(), b: eb.density(), exact: true }, lcm));
    }
    let len = ma.window().len().div_ceil(10);
    Ok((
        Densities {
            a: banach_density_est(ma, len)?.value,
            b: banach_density_est(mb, len)?.value,
            exact: false,
        },
        None,
    ))
}

/// Probe sets: sizes 2..=8, diameter at most `diameter`, drawn from `C − C`
/// through random pairs of members of `C` (sorted).
fn sample_probe(core: &[i64], seed: u64, diameter: i64) -> Vec<i64> {
    let mut rng = KeyedStream::new(seed);
    let size = 2 + rng.below(7) as usize;
    let pick = |rng: &mut KeyedStream| core[rng.below(core.len() as u64) as usize];
    let f0 = pick(&mut rng) - pick(&mut rng);
    let mut set = vec![f0];
    let mut attempts = 0;
    while set.len() < size && attempts < 8 * size {
        attempts += 1;
        let c2 = pick(&mut rng);
        // c1 ∈ C ∩ [c2 + f0, c2 + f0 + diameter] keeps f = c1 - c2 within range.
        let lo = core.partition_point(|&x| x < c2 + f0);
        let hi = core.partition_point(|&x| x <= c2 + f0 + diameter);
        if lo < hi {
            let c1 = core[lo + rng.below((hi - lo) as u64) as usize];
            set.push(c1 - c2);
        }
    }
    set.sort_unstable();
    set.dedup();
    set
}

/// Materializes `A`, `B` on `window`, forms `A − B`, searches for a
/// piecewise-syndeticity certificate and runs translate probes.
pub fn jin_experiment(
    a: &SetSpec,
    b: &SetSpec,
    window: Window,
    k_max: u64,
    l_min: usize,
    opts: &JinOptions,
) -> Result<JinReport> {
    let ma = materialize(a, window)?;
    let mb = materialize(b, window)?;
    let p = diff_set(&ma, &mb)?;
    let certificate = pws_certificate(&p, k_max, l_min)?;
    let (densities, lcm) = densities(a, b, &ma, &mb)?;

    let quarter = (window.len() / 4) as i64;
    let radius = opts.shift_radius.unwrap_or(lcm.unwrap_or(1000)).clamp(0, quarter);
    let range = Window::new(-radius, radius)?;
    let witness = best_shift_windowed(&ma, &mb, range)?;

    let core: Vec<i64> = mb
        .members()
        .filter(|&k| ma.contains_or_false(k + witness.n))
        .collect();
    let probes = (0..opts.probes)
        .map(|i| {
            let seed = keyed(opts.seed, i as i64);
            if core.is_empty() {
                return Ok(ProbeRecord { seed, set: vec![], t: None });
            }
            let set = sample_probe(&core, seed, quarter);
            let t = find_translate(&p, &set, p.window())?;
            Ok(ProbeRecord { seed, set, t })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(JinReport {
        densities,
        window,
        diff_window: p.window(),
        approximate: ma.is_approximate() || mb.is_approximate(),
        shift: ShiftRecord { n: witness.n, value: witness.value, range },
        certificate,
        probes,
    })
}

/// A demonstration pair, not drawn from any reference: `A = B` is a union of
/// intervals `[2^(2^j), 2^(2^j) + 2^(2^(j-1))]` for `j = 1..=levels`. Its
/// difference set contains a long interval around 0 but is separated by
/// ever larger gaps elsewhere, so it is piecewise syndetic on the window
/// without being syndetic there.
pub fn gapped_interval_family(levels: u32) -> Result<SetSpec> {
    if !(1..=5).contains(&levels) {
        return Err(Error::OutOfRange("levels must be in 1..=5".into()));
    }
    let points = (1..=levels).flat_map(|j| {
        let start = 1i64 << (1u32 << j);
        let len = 1i64 << (1u32 << (j - 1));
        start..=start + len
    });
    SetSpec::explicit(points)
}
