//! Fixed-length bitset with word-parallel shifted OR/AND used by the
//! difference-set and shift scans.

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Bits[{}; {} ones]", self.len, self.count_ones())
    }
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits {
            len,
            words: vec![u64::MAX; len.div_ceil(64)],
        };
        b.clear_tail();
        b
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut b = Bits::new(len);
        for i in 0..len {
            if f(i) {
                b.set(i);
            }
        }
        b
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn any(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// Bit-reversed copy: `out[i] = self[len - 1 - i]`.
    pub fn reversed(&self) -> Bits {
        let mut out = Bits::new(self.len);
        for i in self.iter_ones() {
            out.set(self.len - 1 - i);
        }
        out
    }

    pub fn or_assign(&mut self, other: &Bits) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and_assign(&mut self, other: &Bits) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// 64 bits starting at bit position `pos`; positions outside `0..len`
    /// read as zero.
    #[inline]
    pub fn word_at(&self, pos: isize) -> u64 {
        if pos >= self.len as isize || pos <= -64 {
            return 0;
        }
        let q = pos.div_euclid(64);
        let r = pos.rem_euclid(64) as u32;
        let w = |j: isize| -> u64 {
            if j < 0 || j as usize >= self.words.len() {
                0
            } else {
                self.words[j as usize]
            }
        };
        if r == 0 {
            w(q)
        } else {
            (w(q) >> r) | (w(q + 1) << (64 - r))
        }
    }

    /// `self[i] |= src[i - offset]` for every `i`.
    pub fn or_shifted(&mut self, src: &Bits, offset: isize) {
        let lo = offset.max(0);
        let hi = (offset + src.len as isize).min(self.len as isize);
        if lo >= hi {
            return;
        }
        let first = lo as usize / 64;
        let last = (hi as usize - 1) / 64;
        for wi in first..=last {
            self.words[wi] |= src.word_at(wi as isize * 64 - offset);
        }
        self.clear_tail();
    }

    /// `self[dst + j] |= src[src_off + j]` for `j in 0..len`.
    pub fn or_range(&mut self, dst: usize, src: &Bits, src_off: usize, len: usize) {
        assert!(dst + len <= self.len && src_off + len <= src.len);
        let mut j = 0;
        while j < len {
            let take = (len - j).min(64);
            let mut v = src.word_at((src_off + j) as isize);
            if take < 64 {
                v &= (1u64 << take) - 1;
            }
            let d = dst + j;
            let (q, r) = (d / 64, d % 64);
            self.words[q] |= v << r;
            if r != 0 && q + 1 < self.words.len() {
                self.words[q + 1] |= v >> (64 - r);
            }
            j += take;
        }
        self.clear_tail();
    }

    /// Number of `i` with `self[i] && other[i + offset]`.
    pub fn and_count_shifted(&self, other: &Bits, offset: isize) -> usize {
        self.words
            .iter()
            .enumerate()
            .map(|(wi, &w)| (w & other.word_at(wi as isize * 64 + offset)).count_ones() as usize)
            .sum()
    }

    /// Bits `start..start + len` as a new set.
    pub fn slice(&self, start: usize, len: usize) -> Bits {
        assert!(start + len <= self.len);
        let mut out = Bits::new(len);
        for (wi, w) in out.words.iter_mut().enumerate() {
            *w = self.word_at((start + wi * 64) as isize);
        }
        out.clear_tail();
        out
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}
