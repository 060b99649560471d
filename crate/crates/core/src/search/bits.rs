//! Fixed-capacity bitset over candidate indices.

pub const WORDS: usize = 8;
pub const CAPACITY: usize = WORDS * 64;

#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub struct Bits([u64; WORDS]);

impl Bits {
    #[inline]
    pub fn zero() -> Self {
        Bits([0; WORDS])
    }

    /// Indices `lo..hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        let mut b = Bits::zero();
        for i in lo..hi {
            b.set(i);
        }
        b
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn and(&self, o: &Bits) -> Bits {
        let mut r = *self;
        for w in 0..WORDS {
            r.0[w] &= o.0[w];
        }
        r
    }

    #[inline]
    pub fn or_assign(&mut self, o: &Bits) {
        for w in 0..WORDS {
            self.0[w] |= o.0[w];
        }
    }

    #[inline]
    pub fn and_not_assign(&mut self, o: &Bits) {
        for w in 0..WORDS {
            self.0[w] &= !o.0[w];
        }
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn count_and(&self, o: &Bits) -> usize {
        (0..WORDS).map(|w| (self.0[w] & o.0[w]).count_ones() as usize).sum()
    }

    /// Smallest set index `>= from`.
    #[inline]
    pub fn next_from(&self, from: usize) -> Option<usize> {
        if from >= CAPACITY {
            return None;
        }
        let mut w = from >> 6;
        let mut word = self.0[w] & (u64::MAX << (from & 63));
        loop {
            if word != 0 {
                return Some((w << 6) + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == WORDS {
                return None;
            }
            word = self.0[w];
        }
    }

    pub fn iter_from(&self, from: usize) -> impl Iterator<Item = usize> + '_ {
        let mut cur = from;
        std::iter::from_fn(move || {
            let i = self.next_from(cur)?;
            cur = i + 1;
            Some(i)
        })
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter_from(0)).finish()
    }
}
