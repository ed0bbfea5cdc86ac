//! Fixed-width bitmask over point ids.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub};

const WORDS: usize = 5;

/// Number of ids a [`Mask`] can hold; enough for PG(2,16) (273 points).
pub const CAPACITY: usize = WORDS * 64;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask([u64; WORDS]);

impl Mask {
    pub const EMPTY: Mask = Mask([0; WORDS]);

    /// Mask with bits `0..n` set.
    pub fn full(n: usize) -> Mask {
        assert!(n <= CAPACITY);
        let mut m = Mask::EMPTY;
        for (w, word) in m.0.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        m
    }

    pub fn single(id: usize) -> Mask {
        let mut m = Mask::EMPTY;
        m.insert(id);
        m
    }

    pub fn contains(&self, id: usize) -> bool {
        id < CAPACITY && self.0[id / 64] >> (id % 64) & 1 == 1
    }

    pub fn insert(&mut self, id: usize) {
        self.0[id / 64] |= 1 << (id % 64);
    }

    pub fn remove(&mut self, id: usize) {
        self.0[id / 64] &= !(1 << (id % 64));
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn intersects(&self, other: &Mask) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &Mask) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    /// Smallest id in the mask.
    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Ids in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    /// Low 128 bits; `None` if any higher bit is set.
    pub fn to_u128(&self) -> Option<u128> {
        if self.0[2..].iter().any(|&w| w != 0) {
            return None;
        }
        Some(self.0[0] as u128 | (self.0[1] as u128) << 64)
    }

    pub fn from_u128(bits: u128) -> Mask {
        let mut m = Mask::EMPTY;
        m.0[0] = bits as u64;
        m.0[1] = (bits >> 64) as u64;
        m
    }
}

impl FromIterator<usize> for Mask {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut m = Mask::EMPTY;
        for id in iter {
            m.insert(id);
        }
        m
    }
}

impl BitAnd for Mask {
    type Output = Mask;
    fn bitand(mut self, rhs: Mask) -> Mask {
        self &= rhs;
        self
    }
}

impl BitAndAssign for Mask {
    fn bitand_assign(&mut self, rhs: Mask) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a &= b;
        }
    }
}

impl BitOr for Mask {
    type Output = Mask;
    fn bitor(mut self, rhs: Mask) -> Mask {
        self |= rhs;
        self
    }
}

impl BitOrAssign for Mask {
    fn bitor_assign(&mut self, rhs: Mask) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a |= b;
        }
    }
}

/// Set difference.
impl Sub for Mask {
    type Output = Mask;
    fn sub(mut self, rhs: Mask) -> Mask {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a &= !b;
        }
        self
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
