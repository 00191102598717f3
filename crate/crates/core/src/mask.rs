//! Fixed-width vertex masks for the search routines (at most 256 vertices).

use std::fmt;

pub const MASK_WORDS: usize = 4;
pub const MASK_BITS: usize = MASK_WORDS * 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Mask([u64; MASK_WORDS]);

impl Mask {
    pub const EMPTY: Mask = Mask([0; MASK_WORDS]);

    /// Mask with bits `0..n` set.
    pub fn full(n: usize) -> Mask {
        assert!(n <= MASK_BITS);
        let mut m = Mask::EMPTY;
        for (w, word) in m.0.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = !0;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        m
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Mask {
        let mut m = Mask::EMPTY;
        for v in it {
            m.insert(v);
        }
        m
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0[v >> 6] |= 1 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0[v >> 6] &= !(1 << (v & 63));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.0[v >> 6] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn and(&self, o: &Mask) -> Mask {
        let mut r = *self;
        for i in 0..MASK_WORDS {
            r.0[i] &= o.0[i];
        }
        r
    }

    #[inline]
    pub fn or(&self, o: &Mask) -> Mask {
        let mut r = *self;
        for i in 0..MASK_WORDS {
            r.0[i] |= o.0[i];
        }
        r
    }

    #[inline]
    pub fn minus(&self, o: &Mask) -> Mask {
        let mut r = *self;
        for i in 0..MASK_WORDS {
            r.0[i] &= !o.0[i];
        }
        r
    }

    #[inline]
    pub fn intersects(&self, o: &Mask) -> bool {
        (0..MASK_WORDS).any(|i| self.0[i] & o.0[i] != 0)
    }

    #[inline]
    pub fn is_subset(&self, o: &Mask) -> bool {
        (0..MASK_WORDS).all(|i| self.0[i] & !o.0[i] == 0)
    }

    #[inline]
    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> MaskIter {
        MaskIter {
            words: self.0,
            word: 0,
        }
    }
}

pub struct MaskIter {
    words: [u64; MASK_WORDS],
    word: usize,
}

impl Iterator for MaskIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.word < MASK_WORDS {
            let w = self.words[self.word];
            if w != 0 {
                self.words[self.word] = w & (w - 1);
                return Some(self.word * 64 + w.trailing_zeros() as usize);
            }
            self.word += 1;
        }
        None
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn full_mask_boundaries() {
        for n in [0, 1, 63, 64, 65, 128, 200, 256] {
            assert_eq!(Mask::full(n).len(), n);
            assert_eq!(Mask::full(n).iter().last(), n.checked_sub(1));
        }
    }

    proptest! {
        #[test]
        fn behaves_like_a_set(a in proptest::collection::vec(0usize..256, 0..60),
                              b in proptest::collection::vec(0usize..256, 0..60)) {
            let (ma, mb) = (Mask::from_iter(a.iter().copied()), Mask::from_iter(b.iter().copied()));
            let (sa, sb): (BTreeSet<_>, BTreeSet<_>) = (a.into_iter().collect(), b.into_iter().collect());
            prop_assert_eq!(ma.iter().collect::<Vec<_>>(), sa.iter().copied().collect::<Vec<_>>());
            prop_assert_eq!(ma.and(&mb).len(), sa.intersection(&sb).count());
            prop_assert_eq!(ma.or(&mb).len(), sa.union(&sb).count());
            prop_assert_eq!(ma.minus(&mb).len(), sa.difference(&sb).count());
            prop_assert_eq!(ma.is_subset(&mb), sa.is_subset(&sb));
            prop_assert_eq!(ma.first(), sa.iter().next().copied());
        }
    }
}
