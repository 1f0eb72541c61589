use std::fmt;

use crate::bohr::BohrSpec;
use crate::error::{Error, Result};
use crate::real::{Real, Q};

/// Symbolic description of a subset of Z.
#[derive(Debug, Clone, PartialEq)]
pub enum SetSpec {
    /// `{n : n mod period ∈ residues}`; residues sorted, distinct, in `0..period`.
    Periodic { period: i64, residues: Vec<i64> },
    /// Two-sided progression `start + step·Z`.
    Ap { start: i64, step: i64 },
    Bohr(BohrSpec),
    /// Independent Bernoulli(density) membership keyed by `(seed, n)`.
    Random { density: Real, seed: u64 },
    /// Finite set; sorted and distinct.
    Explicit(Vec<i64>),
    Union(Box<SetSpec>, Box<SetSpec>),
    Intersect(Box<SetSpec>, Box<SetSpec>),
    /// `{n + by : n ∈ inner}`.
    Shift(Box<SetSpec>, i64),
    /// `{a - b : a ∈ left, b ∈ right}`.
    Diff(Box<SetSpec>, Box<SetSpec>),
}

impl SetSpec {
    pub fn periodic(period: i64, residues: impl IntoIterator<Item = i64>) -> Result<SetSpec> {
        if period < 1 {
            return Err(Error::OutOfRange(format!("period must be >= 1, got {period}")));
        }
        let mut residues: Vec<i64> = residues.into_iter().map(|r| r.rem_euclid(period)).collect();
        residues.sort_unstable();
        residues.dedup();
        if residues.is_empty() {
            return Err(Error::OutOfRange("residue list must be nonempty".into()));
        }
        Ok(SetSpec::Periodic { period, residues })
    }

    pub fn ap(start: i64, step: i64) -> Result<SetSpec> {
        if step < 1 {
            return Err(Error::OutOfRange(format!("step must be >= 1, got {step}")));
        }
        Ok(SetSpec::Ap { start, step })
    }

    pub fn random(density: Real, seed: u64) -> Result<SetSpec> {
        let x = density.to_f64();
        if !density.is_finite() || !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfRange(format!("density {density} not in [0,1]")));
        }
        if let Real::Rational(q) = density {
            if q < Q::from_integer(0) || q > Q::from_integer(1) {
                return Err(Error::OutOfRange(format!("density {density} not in [0,1]")));
            }
        }
        Ok(SetSpec::Random { density, seed })
    }

    pub fn explicit(members: impl IntoIterator<Item = i64>) -> Result<SetSpec> {
        let mut v: Vec<i64> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(Error::OutOfRange("explicit list must be nonempty".into()));
        }
        Ok(SetSpec::Explicit(v))
    }

    pub fn all() -> SetSpec {
        SetSpec::Periodic {
            period: 1,
            residues: vec![0],
        }
    }

    pub fn union(a: SetSpec, b: SetSpec) -> SetSpec {
        SetSpec::Union(Box::new(a), Box::new(b))
    }

    pub fn intersect(a: SetSpec, b: SetSpec) -> SetSpec {
        SetSpec::Intersect(Box::new(a), Box::new(b))
    }

    pub fn shift(a: SetSpec, by: i64) -> SetSpec {
        SetSpec::Shift(Box::new(a), by)
    }

    pub fn diff(a: SetSpec, b: SetSpec) -> SetSpec {
        SetSpec::Diff(Box::new(a), Box::new(b))
    }

    /// Re-checks every constructor invariant, for ASTs built by hand.
    pub fn validate(&self) -> Result<()> {
        match self {
            SetSpec::Periodic { period, residues } => {
                let norm = SetSpec::periodic(*period, residues.iter().copied())?;
                if &norm != self {
                    return Err(Error::OutOfRange("residues not reduced and sorted".into()));
                }
                Ok(())
            }
            SetSpec::Ap { start, step } => SetSpec::ap(*start, *step).map(drop),
            SetSpec::Bohr(b) => BohrSpec::new(b.freqs().to_vec(), b.eps(), b.shift()).map(drop),
            SetSpec::Random { density, seed } => SetSpec::random(*density, *seed).map(drop),
            SetSpec::Explicit(v) => {
                if v.is_empty() || v.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::OutOfRange("explicit list not sorted and distinct".into()));
                }
                Ok(())
            }
            SetSpec::Union(a, b) | SetSpec::Intersect(a, b) | SetSpec::Diff(a, b) => {
                a.validate()?;
                b.validate()
            }
            SetSpec::Shift(a, _) => a.validate(),
        }
    }

    /// True when the AST contains a `random(...)` leaf.
    pub fn uses_random(&self) -> bool {
        match self {
            SetSpec::Random { .. } => true,
            SetSpec::Union(a, b) | SetSpec::Intersect(a, b) | SetSpec::Diff(a, b) => {
                a.uses_random() || b.uses_random()
            }
            SetSpec::Shift(a, _) => a.uses_random(),
            _ => false,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SetSpec::Union(a, b) | SetSpec::Intersect(a, b) | SetSpec::Diff(a, b) => {
                1 + a.depth().max(b.depth())
            }
            SetSpec::Shift(a, _) => 1 + a.depth(),
            _ => 1,
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Canonical DSL text; `parse(&s.to_string())` reproduces `s`.
impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Periodic { period, residues } => write!(f, "periodic({period};{})", join(residues)),
            SetSpec::Ap { start, step } => write!(f, "ap({start};{step})"),
            SetSpec::Bohr(b) => {
                write!(f, "bohr({};{}", join(b.freqs()), b.eps())?;
                if b.shift() != 0 {
                    write!(f, ";{}", b.shift())?;
                }
                f.write_str(")")
            }
            SetSpec::Random { density, seed } => write!(f, "random({density};{seed})"),
            SetSpec::Explicit(v) => write!(f, "explicit({})", join(v)),
            SetSpec::Union(a, b) => write!(f, "union({a}, {b})"),
            SetSpec::Intersect(a, b) => write!(f, "intersect({a}, {b})"),
            SetSpec::Shift(a, n) => write!(f, "shift({a};{n})"),
            SetSpec::Diff(a, b) => write!(f, "diff({a}, {b})"),
        }
    }
}

pub fn format(spec: &SetSpec) -> String {
    spec.to_string()
}
