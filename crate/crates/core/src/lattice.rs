//! Sets in `Z^d` (`d ≤ 4`) over axis-aligned boxes: cube densities,
//! difference sets and piecewise syndeticity with `K = [−k, k]^d`.
//!
//! Storage is row-major with the last coordinate contiguous.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{serde_q, Q};
use crate::setmodel::{materialize, Bits, SetSpec, Window};

pub const MAX_DIM: usize = 4;

/// Product of inclusive per-axis intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Window>", into = "Vec<Window>")]
pub struct GridBox {
    dims: Vec<Window>,
}

impl TryFrom<Vec<Window>> for GridBox {
    type Error = Error;

    fn try_from(dims: Vec<Window>) -> Result<Self> {
        GridBox::new(dims)
    }
}

impl From<GridBox> for Vec<Window> {
    fn from(b: GridBox) -> Self {
        b.dims
    }
}

impl GridBox {
    pub fn new(dims: Vec<Window>) -> Result<Self> {
        if dims.is_empty() || dims.len() > MAX_DIM {
            return Err(Error::Dimension(format!("dimension {} not in 1..={MAX_DIM}", dims.len())));
        }
        let b = GridBox { dims };
        if b.dims.iter().try_fold(1usize, |v, w| v.checked_mul(w.len())).is_none_or(|v| v > 1 << 32) {
            return Err(Error::OutOfRange("box volume too large".into()));
        }
        Ok(b)
    }

    /// The cube `[lo_j, lo_j + side − 1]` in every axis.
    pub fn cube(lo: &[i64], side: usize) -> Result<Self> {
        GridBox::new(
            lo.iter()
                .map(|&l| Window::new(l, l + side as i64 - 1))
                .collect::<Result<_>>()?,
        )
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[Window] {
        &self.dims
    }

    pub fn volume(&self) -> usize {
        self.dims.iter().map(|w| w.len()).product()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.dim() && self.dims.iter().zip(p).all(|(w, &x)| w.contains(x))
    }

    pub fn contains_box(&self, other: &GridBox) -> bool {
        self.dim() == other.dim() && self.dims.iter().zip(&other.dims).all(|(a, b)| a.contains_window(b))
    }

    fn shape(&self) -> Vec<usize> {
        self.dims.iter().map(|w| w.len()).collect()
    }

    fn index(&self, p: &[i64]) -> usize {
        self.dims
            .iter()
            .zip(p)
            .fold(0, |acc, (w, &x)| acc * w.len() + (x - w.lo()) as usize)
    }

    fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut p = vec![0; self.dim()];
        for j in (0..self.dim()).rev() {
            let n = self.dims[j].len();
            p[j] = self.dims[j].lo() + (idx % n) as i64;
            idx /= n;
        }
        p
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.volume()).map(|i| self.point(i))
    }
}

impl fmt::Display for GridBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|w| format!("{}:{}", w.lo(), w.hi())).collect();
        f.write_str(&parts.join(","))
    }
}

/// `"lo:hi,lo:hi,..."`.
impl FromStr for GridBox {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GridBox::new(s.split(',').map(str::parse).collect::<Result<_>>()?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSet {
    bbox: GridBox,
    bits: Bits,
    approximate: bool,
}

impl LatticeSet {
    pub fn from_fn(bbox: GridBox, mut f: impl FnMut(&[i64]) -> bool) -> Self {
        let bits = Bits::from_fn(bbox.volume(), |i| f(&bbox.point(i)));
        LatticeSet { bbox, bits, approximate: false }
    }

    pub fn from_points<'a>(bbox: GridBox, points: impl IntoIterator<Item = &'a [i64]>) -> Result<Self> {
        let mut bits = Bits::new(bbox.volume());
        for p in points {
            if !bbox.contains(p) {
                return Err(Error::Dimension(format!("point {p:?} outside box {bbox}")));
            }
            bits.set(bbox.index(p));
        }
        Ok(LatticeSet { bbox, bits, approximate: false })
    }

    /// `S_1 × … × S_d`, one spec per axis.
    pub fn product(specs: &[SetSpec], bbox: GridBox) -> Result<Self> {
        if specs.len() != bbox.dim() {
            return Err(Error::Dimension(format!("{} specs for a {}-dimensional box", specs.len(), bbox.dim())));
        }
        let axes = specs
            .iter()
            .zip(bbox.dims())
            .map(|(s, &w)| materialize(s, w))
            .collect::<Result<Vec<_>>>()?;
        let approximate = axes.iter().any(|a| a.is_approximate());
        let mut out = LatticeSet::from_fn(bbox, |p| axes.iter().zip(p).all(|(a, &x)| a.contains_or_false(x)));
        out.approximate = approximate;
        Ok(out)
    }

    /// Periodic in each axis: `x ∈ S` iff `(x_j mod periods_j)_j` is one of
    /// the residue points.
    pub fn periodic(periods: &[i64], residues: &[Vec<i64>], bbox: GridBox) -> Result<Self> {
        if periods.len() != bbox.dim() || residues.iter().any(|r| r.len() != periods.len()) {
            return Err(Error::Dimension("period and residue dimensions must match the box".into()));
        }
        if periods.iter().any(|&p| p < 1) || residues.is_empty() {
            return Err(Error::OutOfRange("periods must be >= 1 and residues nonempty".into()));
        }
        let reduce = |p: &[i64]| -> Vec<i64> { p.iter().zip(periods).map(|(x, m)| x.rem_euclid(*m)).collect() };
        let set: std::collections::HashSet<Vec<i64>> = residues.iter().map(|r| reduce(r)).collect();
        Ok(LatticeSet::from_fn(bbox, |p| set.contains(&reduce(p))))
    }

    pub fn bbox(&self) -> &GridBox {
        &self.bbox
    }

    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    pub fn contains(&self, p: &[i64]) -> Result<bool> {
        if !self.bbox.contains(p) {
            return Err(Error::Dimension(format!("point {p:?} outside box {}", self.bbox)));
        }
        Ok(self.bits.get(self.bbox.index(p)))
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.any()
    }

    pub fn members(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        self.bits.iter_ones().map(|i| self.bbox.point(i))
    }

    /// `{−x : x ∈ S}`.
    pub fn negated(&self) -> LatticeSet {
        let dims = self.bbox.dims.iter().map(|w| Window::new(-w.hi(), -w.lo()).expect("valid")).collect();
        LatticeSet { bbox: GridBox { dims }, bits: self.bits.reversed(), approximate: self.approximate }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDensity {
    #[serde(with = "serde_q")]
    pub value: Q,
    pub cube: GridBox,
}

/// Inclusive prefix sums over the box, shape `(n_j + 1)`.
fn prefix_sums(shape: &[usize], at: impl Fn(usize) -> bool) -> (Vec<u32>, Vec<usize>) {
    let ext: Vec<usize> = shape.iter().map(|n| n + 1).collect();
    let mut strides = vec![1usize; ext.len()];
    for j in (0..ext.len().saturating_sub(1)).rev() {
        strides[j] = strides[j + 1] * ext[j + 1];
    }
    let total: usize = ext.iter().product();
    let mut ps = vec![0u32; total];
    let vol: usize = shape.iter().product();
    let mut coord = vec![0usize; shape.len()];
    for i in 0..vol {
        if at(i) {
            let idx: usize = coord.iter().zip(&strides).map(|(c, s)| (c + 1) * s).sum();
            ps[idx] = 1;
        }
        for j in (0..shape.len()).rev() {
            coord[j] += 1;
            if coord[j] < shape[j] {
                break;
            }
            coord[j] = 0;
        }
    }
    for (j, &s) in strides.iter().enumerate() {
        for idx in 0..total {
            if (idx / s) % ext[j] > 0 {
                ps[idx] += ps[idx - s];
            }
        }
    }
    (ps, strides)
}

fn cube_sum(ps: &[u32], strides: &[usize], corner: &[usize], side: usize) -> u32 {
    let d = corner.len();
    let mut total: i64 = 0;
    for mask in 0..1usize << d {
        let mut idx = 0;
        for j in 0..d {
            let c = if mask >> j & 1 == 1 { corner[j] } else { corner[j] + side };
            idx += c * strides[j];
        }
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        total += sign * ps[idx] as i64;
    }
    total as u32
}

fn corners(shape: &[usize], side: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    let span: Vec<usize> = shape.iter().map(|n| n + 1 - side).collect();
    let count: usize = span.iter().product();
    (0..count).map(move |mut i| {
        let mut c = vec![0; span.len()];
        for j in (0..span.len()).rev() {
            c[j] = i % span[j];
            i /= span[j];
        }
        c
    })
}

/// Maximum of `|S ∩ cube| / L^d` over all axis-aligned `L^d` subcubes.
pub fn banach_density_est_d(s: &LatticeSet, side: usize) -> Result<LatticeDensity> {
    let shape = s.bbox.shape();
    if side < 1 || shape.iter().any(|&n| n < side) {
        return Err(Error::OutOfRange(format!("cube side {side} does not fit in box {}", s.bbox)));
    }
    let (ps, strides) = prefix_sums(&shape, |i| s.bits.get(i));
    let mut best: Option<(u32, Vec<usize>)> = None;
    for c in corners(&shape, side) {
        let v = cube_sum(&ps, &strides, &c, side);
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, c));
        }
    }
    let (v, c) = best.expect("at least one cube");
    let lo: Vec<i64> = c.iter().zip(s.bbox.dims()).map(|(&o, w)| w.lo() + o as i64).collect();
    Ok(LatticeDensity {
        value: Q::new(v as i64, side.pow(shape.len() as u32) as i64),
        cube: GridBox::cube(&lo, side)?,
    })
}

/// `{a + c}` for `a ∈ big`, `c ∈ small`, iterating over the smaller set.
fn sumset(x: &LatticeSet, y: &LatticeSet) -> Result<LatticeSet> {
    let (big, small) = if x.count() >= y.count() { (x, y) } else { (y, x) };
    let dims = big
        .bbox
        .dims
        .iter()
        .zip(&small.bbox.dims)
        .map(|(a, b)| Window::new(a.lo() + b.lo(), a.hi() + b.hi()))
        .collect::<Result<Vec<_>>>()?;
    let rbox = GridBox::new(dims)?;
    let mut bits = Bits::new(rbox.volume());
    let d = rbox.dim();
    let row_len = big.bbox.dims[d - 1].len();
    let rows = big.bbox.volume() / row_len;
    let row_points: Vec<Vec<i64>> = (0..rows).map(|r| big.bbox.point(r * row_len)).collect();
    for c in small.members() {
        for (r, start) in row_points.iter().enumerate() {
            let target: Vec<i64> = start.iter().zip(&c).map(|(a, b)| a + b).collect();
            bits.or_range(rbox.index(&target), &big.bits, r * row_len, row_len);
        }
    }
    Ok(LatticeSet { bbox: rbox, bits, approximate: x.approximate || y.approximate })
}

/// `A − B` on the box `A.box − B.box`.
pub fn diff_set_d(a: &LatticeSet, b: &LatticeSet) -> Result<LatticeSet> {
    if a.bbox.dim() != b.bbox.dim() {
        return Err(Error::Dimension("operands have different dimensions".into()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    sumset(a, &b.negated())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCertificate {
    pub k: u64,
    pub intervals: Vec<GridBox>,
    pub window: GridBox,
}

/// One step of dilation by `[−1, 1]^d` inside the box.
fn dilate_once(cur: &[bool], shape: &[usize]) -> Vec<bool> {
    let mut out = cur.to_vec();
    let mut stride = 1;
    for j in (0..shape.len()).rev() {
        let src = out.clone();
        let n = shape[j];
        for (i, slot) in out.iter_mut().enumerate() {
            let c = (i / stride) % n;
            if (c > 0 && src[i - stride]) || (c + 1 < n && src[i + stride]) {
                *slot = true;
            }
        }
        stride *= n;
    }
    out
}

/// Smallest `k ≤ k_max` such that `S + [−k, k]^d` contains an
/// `L_min^d` cube inside the box; the certificate lists the first such cube
/// in row-major corner order.
pub fn pws_certificate_d(s: &LatticeSet, k_max: u64, l_min: usize) -> Result<Option<LatticeCertificate>> {
    if l_min < 1 {
        return Err(Error::OutOfRange("cube side must be >= 1".into()));
    }
    let shape = s.bbox.shape();
    if s.is_empty() || shape.iter().any(|&n| n < l_min) {
        return Ok(None);
    }
    let full = l_min.pow(shape.len() as u32) as u32;
    let mut cur: Vec<bool> = (0..s.bbox.volume()).map(|i| s.bits.get(i)).collect();
    for k in 0..=k_max {
        if k > 0 {
            let next = dilate_once(&cur, &shape);
            if next == cur {
                break;
            }
            cur = next;
        }
        let (ps, strides) = prefix_sums(&shape, |i| cur[i]);
        if let Some(c) = corners(&shape, l_min).find(|c| cube_sum(&ps, &strides, c, l_min) == full) {
            let lo: Vec<i64> = c.iter().zip(s.bbox.dims()).map(|(&o, w)| w.lo() + o as i64).collect();
            return Ok(Some(LatticeCertificate {
                k,
                intervals: vec![GridBox::cube(&lo, l_min)?],
                window: s.bbox.clone(),
            }));
        }
    }
    Ok(None)
}
