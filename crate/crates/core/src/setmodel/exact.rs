//! Exact normal form for sets that are a periodic set plus finitely many
//! extra points. The class contains Periodic, AP, Explicit and rational Bohr
//! specs and is closed under union, intersection, shift and difference, so
//! every such combination has an exact, finitely described value.

use std::collections::BTreeSet;

use num_integer::Integer;

use super::bits::Bits;
use super::spec::SetSpec;
use super::window::{Window, WindowedSet};
use crate::real::Q;

/// Periods above this are treated as not exactly representable.
pub const MAX_EXACT_PERIOD: i64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactSet {
    period: i64,
    residues: Bits,
    /// Points outside the periodic part.
    extras: BTreeSet<i64>,
}

impl ExactSet {
    pub fn periodic(period: i64, residues: impl IntoIterator<Item = i64>) -> ExactSet {
        assert!(period >= 1);
        let mut bits = Bits::new(period as usize);
        for r in residues {
            bits.set(r.rem_euclid(period) as usize);
        }
        ExactSet { period, residues: bits, extras: BTreeSet::new() }
    }

    pub fn finite(points: impl IntoIterator<Item = i64>) -> ExactSet {
        ExactSet { period: 1, residues: Bits::new(1), extras: points.into_iter().collect() }
    }

    /// Exact form of `spec`, when it lies in the periodic-plus-finite class
    /// with a period of at most [`MAX_EXACT_PERIOD`].
    pub fn of(spec: &SetSpec) -> Option<ExactSet> {
        match spec {
            SetSpec::Periodic { period, residues } => {
                (*period <= MAX_EXACT_PERIOD).then(|| ExactSet::periodic(*period, residues.iter().copied()))
            }
            SetSpec::Ap { start, step } => {
                (*step <= MAX_EXACT_PERIOD).then(|| ExactSet::periodic(*step, [*start]))
            }
            SetSpec::Explicit(v) => Some(ExactSet::finite(v.iter().copied())),
            SetSpec::Bohr(b) => {
                let p = b.rational_period().filter(|&p| p <= MAX_EXACT_PERIOD)?;
                Some(ExactSet::periodic(p, (0..p).filter(|&r| b.contains(r))))
            }
            SetSpec::Random { .. } => None,
            SetSpec::Union(a, b) => ExactSet::of(a)?.union(&ExactSet::of(b)?),
            SetSpec::Intersect(a, b) => ExactSet::of(a)?.intersect(&ExactSet::of(b)?),
            SetSpec::Shift(a, m) => Some(ExactSet::of(a)?.shift(*m)),
            SetSpec::Diff(a, b) => ExactSet::of(a)?.diff(&ExactSet::of(b)?),
        }
    }

    pub fn period(&self) -> i64 {
        self.period
    }

    pub fn residues(&self) -> impl Iterator<Item = i64> + '_ {
        self.residues.iter_ones().map(|r| r as i64)
    }

    pub fn residue_count(&self) -> usize {
        self.residues.count_ones()
    }

    pub fn extras(&self) -> &BTreeSet<i64> {
        &self.extras
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.extras.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        !self.residues.any()
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.extras.is_empty()
    }

    /// Density of the periodic part; finite extras have density zero.
    pub fn density(&self) -> Q {
        Q::new(self.residue_count() as i64, self.period)
    }

    #[inline]
    pub fn contains(&self, n: i64) -> bool {
        self.residues.get(n.rem_euclid(self.period) as usize) || self.extras.contains(&n)
    }

    pub fn materialize(&self, window: Window) -> WindowedSet {
        let p = self.period;
        let mut r = window.lo().rem_euclid(p) as usize;
        let bits = Bits::from_fn(window.len(), |_| {
            let hit = self.residues.get(r);
            r += 1;
            if r == p as usize {
                r = 0;
            }
            hit
        });
        let mut out = WindowedSet::from_bits(window, bits, false);
        for &x in self.extras.range(window.lo()..=window.hi()) {
            out.insert(x).expect("inside window");
        }
        out
    }

    fn lifted(&self, period: i64) -> Bits {
        let p = self.period as usize;
        Bits::from_fn(period as usize, |i| self.residues.get(i % p))
    }

    fn common_period(&self, other: &ExactSet) -> Option<i64> {
        let l = self.period.lcm(&other.period);
        (l <= MAX_EXACT_PERIOD).then_some(l)
    }

    fn with_extras(period: i64, residues: Bits, extras: impl IntoIterator<Item = i64>) -> ExactSet {
        let mut out = ExactSet { period, residues, extras: BTreeSet::new() };
        let extras: BTreeSet<i64> = extras
            .into_iter()
            .filter(|&x| !out.residues.get(x.rem_euclid(period) as usize))
            .collect();
        out.extras = extras;
        out
    }

    pub fn union(&self, other: &ExactSet) -> Option<ExactSet> {
        let l = self.common_period(other)?;
        let mut bits = self.lifted(l);
        bits.or_assign(&other.lifted(l));
        let extras = self.extras.iter().chain(&other.extras).copied().collect::<Vec<_>>();
        Some(ExactSet::with_extras(l, bits, extras))
    }

    pub fn intersect(&self, other: &ExactSet) -> Option<ExactSet> {
        let l = self.common_period(other)?;
        let mut bits = self.lifted(l);
        bits.and_assign(&other.lifted(l));
        let extras = self
            .extras
            .iter()
            .filter(|&&x| other.contains(x))
            .chain(other.extras.iter().filter(|&&x| self.contains(x)))
            .copied()
            .collect::<Vec<_>>();
        Some(ExactSet::with_extras(l, bits, extras))
    }

    pub fn shift(&self, m: i64) -> ExactSet {
        let p = self.period;
        let bits = Bits::from_fn(p as usize, |r| self.residues.get((r as i64 - m).rem_euclid(p) as usize));
        ExactSet { period: p, residues: bits, extras: self.extras.iter().map(|x| x + m).collect() }
    }

    /// `{a - b : a ∈ self, b ∈ other}`.
    pub fn diff(&self, other: &ExactSet) -> Option<ExactSet> {
        let l = self.common_period(other)?;
        let lu = l as usize;
        let a = self.lifted(l);
        let b = other.lifted(l);
        let doubled = |x: &Bits| {
            let mut d = Bits::new(2 * lu);
            d.or_range(0, x, 0, lu);
            d.or_range(lu, x, 0, lu);
            d
        };
        let mut out = Bits::new(lu);
        if a.any() {
            // periodic(a) - periodic(b) and periodic(a) - extras(b):
            // x is a difference iff x + s ∈ a (mod l) for some subtrahend s.
            let ad = doubled(&a);
            let subtrahends: BTreeSet<usize> = b
                .iter_ones()
                .chain(other.extras.iter().map(|&f| f.rem_euclid(l) as usize))
                .collect();
            for s in subtrahends {
                out.or_range(0, &ad, s, lu);
            }
        }
        if b.any() && !self.extras.is_empty() {
            // extras(a) - periodic(b): x is a difference iff f - x ∈ b (mod l).
            let rev = Bits::from_fn(lu, |y| b.get((lu - y) % lu));
            let rd = doubled(&rev);
            let minuends: BTreeSet<usize> = self.extras.iter().map(|&f| (-f).rem_euclid(l) as usize).collect();
            for s in minuends {
                out.or_range(0, &rd, s, lu);
            }
        }
        let finite: Vec<i64> = self
            .extras
            .iter()
            .flat_map(|&x| other.extras.iter().map(move |&y| x - y))
            .collect();
        Some(ExactSet::with_extras(l, out, finite))
    }
}
