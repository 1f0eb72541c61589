//! Syndeticity and piecewise syndeticity on a finite window.
//!
//! Distances are window-internal: the distance from `n` to `S` only looks at
//! members inside `S.window()`, so gaps near the window edges can look wider
//! than they are in the full set. Certificates stay sound under that rule.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::setmodel::{Window, WindowedSet};

/// Witness that `S + {-k, ..., k}` contains every listed interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PwsCertificate {
    pub k: u64,
    pub intervals: Vec<Window>,
    pub window: Window,
}

/// Distance from each window position to the nearest member inside the
/// window; `None` when the set is empty.
pub(crate) fn distances(s: &WindowedSet) -> Option<Vec<u64>> {
    if s.is_empty() {
        return None;
    }
    let n = s.window().len();
    let lo = s.window().lo();
    let mut d = vec![u64::MAX; n];
    let mut last: Option<usize> = None;
    for (i, slot) in d.iter_mut().enumerate() {
        if s.contains_or_false(lo + i as i64) {
            last = Some(i);
        }
        if let Some(j) = last {
            *slot = (i - j) as u64;
        }
    }
    let mut next: Option<usize> = None;
    for i in (0..n).rev() {
        if s.contains_or_false(lo + i as i64) {
            next = Some(i);
        }
        if let Some(j) = next {
            d[i] = d[i].min((j - i) as u64);
        }
    }
    Some(d)
}

/// Least `k` with `S − {−k, …, k}` covering `S.window()`.
pub fn min_gap_bound(s: &WindowedSet) -> Result<u64> {
    let d = distances(s).ok_or(Error::EmptySet)?;
    Ok(d.into_iter().max().unwrap_or(0))
}

/// Smallest `k ≤ k_max` for which `S + [−k, k]` contains an interval of
/// length at least `l_min`, with every maximal such interval listed.
pub fn pws_certificate(s: &WindowedSet, k_max: u64, l_min: usize) -> Result<Option<PwsCertificate>> {
    if l_min < 1 {
        return Err(Error::OutOfRange("minimum interval length must be >= 1".into()));
    }
    let Some(d) = distances(s) else {
        return Ok(None);
    };
    if l_min > d.len() {
        return Ok(None);
    }
    // Smallest achievable k = min over length-l_min windows of the max distance.
    let mut deque: VecDeque<usize> = VecDeque::new();
    let mut best = u64::MAX;
    for i in 0..d.len() {
        while deque.back().is_some_and(|&j| d[j] <= d[i]) {
            deque.pop_back();
        }
        deque.push_back(i);
        if deque[0] + l_min <= i {
            deque.pop_front();
        }
        if i + 1 >= l_min {
            best = best.min(d[deque[0]]);
        }
    }
    if best > k_max {
        return Ok(None);
    }
    let k = best;
    let lo = s.window().lo();
    let mut intervals = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..=d.len() {
        let covered = i < d.len() && d[i] <= k;
        match (covered, start) {
            (true, None) => start = Some(i),
            (false, Some(a)) => {
                if i - a >= l_min {
                    intervals.push(Window::new(lo + a as i64, lo + i as i64 - 1)?);
                }
                start = None;
            }
            _ => {}
        }
    }
    Ok(Some(PwsCertificate {
        k,
        intervals,
        window: s.window(),
    }))
}
