//! Element bitmasks over a group's id range, word-parallel.

use std::fmt;

/// Fixed-universe bitmask. All set operations assume both operands were
/// created with the same universe size.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask {
    len: usize,
    words: Vec<u64>,
}

impl Mask {
    pub fn empty(len: usize) -> Self {
        Mask {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut m = Mask::empty(len);
        for i in 0..len {
            m.set(i);
        }
        m
    }

    pub fn singleton(len: usize, i: usize) -> Self {
        let mut m = Mask::empty(len);
        m.set(i);
        m
    }

    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &Mask) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Mask) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union(&self, other: &Mask) -> Mask {
        let mut m = self.clone();
        m.union_with(other);
        m
    }

    pub fn intersection(&self, other: &Mask) -> Mask {
        let mut m = self.clone();
        m.intersect_with(other);
        m
    }

    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// True iff some bit of `self` is missing from `other`.
    pub fn has_bit_outside(&self, other: &Mask) -> bool {
        !self.is_subset_of(other)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Lowercase hex of the words, low word first; used for canonical keys.
    pub fn hex_key(&self) -> String {
        self.words
            .iter()
            .map(|w| format!("{w:016x}"))
            .collect::<Vec<_>>()
            .join("")
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mask{{")?;
        for (k, i) in self.iter_ones().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basics() {
        let mut m = Mask::empty(70);
        assert!(m.is_empty());
        m.set(0);
        m.set(69);
        assert_eq!(m.count(), 2);
        assert!(m.get(69));
        assert_eq!(m.iter_ones().collect::<Vec<_>>(), vec![0, 69]);
        m.clear(69);
        assert_eq!(m.count(), 1);
    }

    #[test]
    fn full_and_subset() {
        let f = Mask::full(130);
        assert_eq!(f.count(), 130);
        let s = Mask::singleton(130, 128);
        assert!(s.is_subset_of(&f));
        assert!(!f.is_subset_of(&s));
    }

    proptest! {
        #[test]
        fn union_contains_both(xs in proptest::collection::vec(0usize..100, 0..20),
                               ys in proptest::collection::vec(0usize..100, 0..20)) {
            let mut a = Mask::empty(100);
            let mut b = Mask::empty(100);
            for &x in &xs { a.set(x); }
            for &y in &ys { b.set(y); }
            let u = a.union(&b);
            prop_assert!(a.is_subset_of(&u));
            prop_assert!(b.is_subset_of(&u));
            let i = a.intersection(&b);
            prop_assert!(i.is_subset_of(&a));
            prop_assert!(i.is_subset_of(&b));
            prop_assert_eq!(u.count() + i.count(), a.count() + b.count());
        }
    }
}
