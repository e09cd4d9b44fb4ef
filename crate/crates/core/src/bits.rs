//! Fixed-width bit vectors.
//!
//! Position 0 is the least significant bit, written `b_1` in rule text; the
//! textual form prints the most significant bit first, so the integer 3 at
//! width 4 reads `0011`.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use smallvec::{smallvec, SmallVec};

use crate::{Error, Result};

pub(crate) type Words = SmallVec<[u64; 1]>;

pub(crate) const fn word_count(width: usize) -> usize {
    width.div_ceil(64)
}

/// Mask of the valid bits in the last word of a `width`-bit value.
pub(crate) fn tail_mask(width: usize) -> u64 {
    match width % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

pub(crate) fn full_words(width: usize) -> Words {
    let n = word_count(width);
    let mut words: Words = smallvec![u64::MAX; n];
    if let Some(last) = words.last_mut() {
        *last &= tail_mask(width);
    }
    words
}

/// One observation's binary encoding.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    width: usize,
    words: Words,
}

impl BitVector {
    pub fn zeros(width: usize) -> Self {
        Self { width, words: smallvec![0; word_count(width)] }
    }

    /// Builds a vector from the low `width` bits of `value`.
    pub fn from_u64(value: u64, width: usize) -> Self {
        let mut bv = Self::zeros(width);
        if width > 0 {
            bv.words[0] = if width >= 64 { value } else { value & tail_mask(width) };
        }
        bv
    }

    pub(crate) fn from_words(width: usize, words: Words) -> Self {
        debug_assert_eq!(words.len(), word_count(width));
        Self { width, words }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, position: usize) -> bool {
        assert!(position < self.width, "bit position {position} out of range");
        self.words[position / 64] >> (position % 64) & 1 == 1
    }

    pub fn set(&mut self, position: usize, bit: bool) {
        assert!(position < self.width, "bit position {position} out of range");
        let mask = 1u64 << (position % 64);
        if bit {
            self.words[position / 64] |= mask;
        } else {
            self.words[position / 64] &= !mask;
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// The value as an unsigned integer, if it fits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.words.iter().skip(1).any(|&w| w != 0) {
            return None;
        }
        Some(self.words.first().copied().unwrap_or(0))
    }

    /// Writes `other` into positions `offset..offset + other.width()`.
    pub fn splice(&mut self, offset: usize, other: &BitVector) {
        for p in 0..other.width {
            self.set(offset + p, other.get(p));
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let width = text.len();
        let mut bv = Self::zeros(width);
        for (i, ch) in text.bytes().enumerate() {
            match ch {
                b'0' => {}
                b'1' => bv.set(width - 1 - i, true),
                _ => return Err(Error::InvalidBits(text.into())),
            }
        }
        Ok(bv)
    }

    pub fn to_text(&self) -> String {
        (0..self.width).rev().map(|p| if self.get(p) { '1' } else { '0' }).collect()
    }
}

impl Ord for BitVector {
    /// Unsigned numeric order, which is also the textual order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}
