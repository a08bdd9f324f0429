use std::fmt;

use crate::error::{Error, Result};

/// Largest base monoid whose subsets fit in a [`SubsetId`].
pub const MAX_BASE: usize = 64;

/// A non-empty subset of a base monoid of at most 64 elements, as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetId {
    bits: u64,
    base_size: u8,
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl SubsetId {
    pub fn new(base_size: usize, bits: u64) -> Result<Self> {
        if base_size == 0 || base_size > MAX_BASE {
            return Err(Error::SizeLimitExceeded {
                what: "subset base",
                required: base_size,
                limit: MAX_BASE,
            });
        }
        if bits == 0 {
            return Err(Error::PreconditionViolated("empty subset".into()));
        }
        if bits & !full_mask(base_size) != 0 {
            return Err(Error::PreconditionViolated(format!(
                "mask {bits:#b} has elements outside 0..{base_size}"
            )));
        }
        Ok(Self {
            bits,
            base_size: base_size as u8,
        })
    }

    /// Panics on an empty or out-of-range set; for internal use where the
    /// mask is non-empty by construction.
    pub(crate) fn from_bits(base_size: usize, bits: u64) -> Self {
        debug_assert!(bits != 0 && bits & !full_mask(base_size) == 0);
        Self {
            bits,
            base_size: base_size as u8,
        }
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(
        base_size: usize,
        elems: I,
    ) -> Result<Self> {
        let mut bits = 0u64;
        for e in elems {
            if e >= base_size {
                return Err(Error::PreconditionViolated(format!(
                    "element {e} outside 0..{base_size}"
                )));
            }
            bits |= 1 << e;
        }
        Self::new(base_size, bits)
    }

    pub fn singleton(base_size: usize, a: usize) -> Self {
        Self::from_bits(base_size, 1 << a)
    }

    /// `{a, b}`, which has one element when `a == b`.
    pub fn pair(base_size: usize, a: usize, b: usize) -> Self {
        Self::from_bits(base_size, (1 << a) | (1 << b))
    }

    /// Parses the literal syntax `0,3` (whitespace tolerated).
    pub fn parse(base_size: usize, text: &str) -> Result<Self> {
        let elems = text
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line: 1,
                    message: format!("bad subset element `{t}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_elements(base_size, elems)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn base_size(self) -> usize {
        self.base_size as usize
    }

    pub fn contains(self, a: usize) -> bool {
        a < 64 && self.bits >> a & 1 == 1
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn is_subset_of(self, other: SubsetId) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(self, other: SubsetId) -> SubsetId {
        Self::from_bits(self.base_size(), self.bits | other.bits)
    }

    /// `self \ other`, or `None` when nothing is left.
    pub fn difference(self, other: SubsetId) -> Option<SubsetId> {
        let bits = self.bits & !other.bits;
        (bits != 0).then(|| Self::from_bits(self.base_size(), bits))
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// Image under an element map, `{f(x) : x in self}`.
    pub fn image(self, f: &[usize]) -> SubsetId {
        let bits = self.iter().fold(0u64, |acc, x| acc | 1 << f[x]);
        Self::from_bits(f.len(), bits)
    }
}

impl fmt::Display for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Iterates the non-empty submasks of `mask` in increasing order.
pub(crate) fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    // enumerate k in 1..2^popcount and deposit its bits into mask positions
    let positions: Vec<u32> = {
        let mut m = mask;
        let mut v = Vec::new();
        while m != 0 {
            v.push(m.trailing_zeros());
            m &= m - 1;
        }
        v
    };
    let count = 1u64 << positions.len();
    (1..count).map(move |k| {
        positions
            .iter()
            .enumerate()
            .filter(|(i, _)| k >> i & 1 == 1)
            .fold(0u64, |acc, (_, &p)| acc | 1 << p)
    })
}
