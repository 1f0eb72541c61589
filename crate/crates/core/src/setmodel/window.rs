use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bits::Bits;
use crate::error::{Error, Result};

/// Inclusive integer interval `{lo, ..., hi}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Window {
    lo: i64,
    hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi || (hi as i128 - lo as i128) >= u32::MAX as i128 {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Window { lo, hi })
    }

    #[inline]
    pub fn lo(&self) -> i64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> i64 {
        self.hi
    }

    #[inline]
    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize + 1
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn shifted(&self, m: i64) -> Window {
        Window {
            lo: self.lo + m,
            hi: self.hi + m,
        }
    }

    /// Grow by `left` on the low side and `right` on the high side.
    pub fn widened(&self, left: i64, right: i64) -> Result<Window> {
        Window::new(self.lo - left, self.hi + right)
    }

    pub fn intersect(&self, other: &Window) -> Option<Window> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Window { lo, hi })
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    #[inline]
    pub(crate) fn index(&self, n: i64) -> usize {
        (n - self.lo) as usize
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// `"lo:hi"`.
impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Syntax {
            pos: 0,
            msg: format!("expected window \"lo:hi\", got {s:?}"),
        };
        let (a, b) = s.trim().split_once(':').ok_or_else(bad)?;
        let lo = a.trim().parse().map_err(|_| bad())?;
        let hi = b.trim().parse().map_err(|_| bad())?;
        Window::new(lo, hi)
    }
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[i64; 2]>::deserialize(d)?;
        Window::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// A set materialized over a finite window.
///
/// `approximate` marks an under-approximation: every member is genuine, but
/// some true members may be missing (see `materialize`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowedSet {
    window: Window,
    bits: Bits,
    approximate: bool,
}

impl WindowedSet {
    pub fn empty(window: Window) -> Self {
        WindowedSet {
            window,
            bits: Bits::new(window.len()),
            approximate: false,
        }
    }

    pub fn full(window: Window) -> Self {
        WindowedSet {
            window,
            bits: Bits::ones(window.len()),
            approximate: false,
        }
    }

    pub fn from_fn(window: Window, mut f: impl FnMut(i64) -> bool) -> Self {
        let bits = Bits::from_fn(window.len(), |i| f(window.lo + i as i64));
        WindowedSet {
            window,
            bits,
            approximate: false,
        }
    }

    /// Members outside `window` are ignored.
    pub fn from_members(window: Window, members: impl IntoIterator<Item = i64>) -> Self {
        let mut s = WindowedSet::empty(window);
        for n in members {
            if window.contains(n) {
                s.bits.set(window.index(n));
            }
        }
        s
    }

    pub(crate) fn from_bits(window: Window, bits: Bits, approximate: bool) -> Self {
        debug_assert_eq!(bits.len(), window.len());
        WindowedSet {
            window,
            bits,
            approximate,
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub(crate) fn bits(&self) -> &Bits {
        &self.bits
    }

    pub fn is_approximate(&self) -> bool {
        self.approximate
    }

    pub(crate) fn set_approximate(&mut self, approximate: bool) {
        self.approximate = approximate;
    }

    pub fn contains(&self, n: i64) -> Result<bool> {
        if !self.window.contains(n) {
            return Err(Error::OutsideWindow {
                n,
                window: self.window,
            });
        }
        Ok(self.bits.get(self.window.index(n)))
    }

    /// Membership with positions outside the window reading as absent.
    #[inline]
    pub(crate) fn contains_or_false(&self, n: i64) -> bool {
        self.window.contains(n) && self.bits.get(self.window.index(n))
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.any()
    }

    pub fn members(&self) -> impl Iterator<Item = i64> + '_ {
        let lo = self.window.lo;
        self.bits.iter_ones().map(move |i| lo + i as i64)
    }

    pub fn insert(&mut self, n: i64) -> Result<()> {
        if !self.window.contains(n) {
            return Err(Error::OutsideWindow {
                n,
                window: self.window,
            });
        }
        self.bits.set(self.window.index(n));
        Ok(())
    }

    pub fn remove(&mut self, n: i64) -> Result<()> {
        if !self.window.contains(n) {
            return Err(Error::OutsideWindow {
                n,
                window: self.window,
            });
        }
        self.bits.clear(self.window.index(n));
        Ok(())
    }

    /// Restriction to a subwindow.
    pub fn restrict(&self, sub: Window) -> Result<WindowedSet> {
        if !self.window.contains_window(&sub) {
            return Err(Error::OutsideWindow {
                n: if sub.lo < self.window.lo { sub.lo } else { sub.hi },
                window: self.window,
            });
        }
        Ok(WindowedSet {
            window: sub,
            bits: self.bits.slice(self.window.index(sub.lo), sub.len()),
            approximate: self.approximate,
        })
    }

    /// The same set relabeled by `n -> n + m`.
    pub fn shifted(&self, m: i64) -> WindowedSet {
        WindowedSet {
            window: self.window.shifted(m),
            bits: self.bits.clone(),
            approximate: self.approximate,
        }
    }

    pub fn union(&self, other: &WindowedSet) -> Result<WindowedSet> {
        self.same_window(other)?;
        let mut bits = self.bits.clone();
        bits.or_assign(&other.bits);
        Ok(WindowedSet::from_bits(
            self.window,
            bits,
            self.approximate || other.approximate,
        ))
    }

    pub fn intersect(&self, other: &WindowedSet) -> Result<WindowedSet> {
        self.same_window(other)?;
        let mut bits = self.bits.clone();
        bits.and_assign(&other.bits);
        Ok(WindowedSet::from_bits(
            self.window,
            bits,
            self.approximate || other.approximate,
        ))
    }

    /// Pointwise `self ⊆ other` on a common window.
    pub fn is_subset(&self, other: &WindowedSet) -> Result<bool> {
        self.same_window(other)?;
        let mut bits = self.bits.clone();
        bits.and_assign(&other.bits);
        Ok(bits == self.bits)
    }

    fn same_window(&self, other: &WindowedSet) -> Result<()> {
        if self.window != other.window {
            return Err(Error::Dimension(format!(
                "windows differ: {} vs {}",
                self.window, other.window
            )));
        }
        Ok(())
    }
}
