//! Ternary cubes and covers.
//!
//! A [`Cube`] is a pair of words: `care` marks the fixed positions and
//! `value` holds their polarity. `value` is always zero where `care` is zero,
//! so equal cubes compare and hash equal. Text form uses one character per
//! position from `{0, 1, -}` with the most significant position first, as in
//! PLA cube lines.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use smallvec::smallvec;

use crate::bits::{full_words, word_count, BitVector, Words};
use crate::problem::CoverCost;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Literal {
    Zero,
    One,
    Free,
}

impl Literal {
    pub fn as_char(self) -> char {
        match self {
            Literal::Zero => '0',
            Literal::One => '1',
            Literal::Free => '-',
        }
    }

    /// Rank in the textual order `-` < `0` < `1`.
    fn rank(self) -> u8 {
        match self {
            Literal::Free => 0,
            Literal::Zero => 1,
            Literal::One => 2,
        }
    }
}

fn check_width(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::WidthMismatch { expected, found })
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cube {
    width: usize,
    care: Words,
    value: Words,
}

impl Cube {
    /// The cube with every position free.
    pub fn universe(width: usize) -> Self {
        let n = word_count(width);
        Self { width, care: smallvec![0; n], value: smallvec![0; n] }
    }

    pub fn from_minterm(minterm: &BitVector) -> Self {
        Self {
            width: minterm.width(),
            care: full_words(minterm.width()),
            value: minterm.words().into(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let width = text.len();
        let mut cube = Self::universe(width);
        for (i, ch) in text.bytes().enumerate() {
            let lit = match ch {
                b'0' => Literal::Zero,
                b'1' => Literal::One,
                b'-' => Literal::Free,
                _ => return Err(Error::InvalidCube(text.into())),
            };
            cube.set_literal(width - 1 - i, lit);
        }
        Ok(cube)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub(crate) fn care_words(&self) -> &[u64] {
        &self.care
    }

    pub(crate) fn value_words(&self) -> &[u64] {
        &self.value
    }

    pub fn literal(&self, position: usize) -> Literal {
        assert!(position < self.width, "position {position} out of range");
        let (w, b) = (position / 64, position % 64);
        match (self.care[w] >> b & 1, self.value[w] >> b & 1) {
            (0, _) => Literal::Free,
            (_, 0) => Literal::Zero,
            _ => Literal::One,
        }
    }

    pub fn set_literal(&mut self, position: usize, literal: Literal) {
        assert!(position < self.width, "position {position} out of range");
        let (w, mask) = (position / 64, 1u64 << (position % 64));
        match literal {
            Literal::Free => {
                self.care[w] &= !mask;
                self.value[w] &= !mask;
            }
            Literal::Zero => {
                self.care[w] |= mask;
                self.value[w] &= !mask;
            }
            Literal::One => {
                self.care[w] |= mask;
                self.value[w] |= mask;
            }
        }
    }

    pub fn with_literal(mut self, position: usize, literal: Literal) -> Self {
        self.set_literal(position, literal);
        self
    }

    /// Number of fixed positions.
    pub fn literal_count(&self) -> usize {
        self.care.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn free_count(&self) -> usize {
        self.width - self.literal_count()
    }

    pub fn is_minterm(&self) -> bool {
        self.free_count() == 0
    }

    pub fn is_universe(&self) -> bool {
        self.care.iter().all(|&w| w == 0)
    }

    /// `2^free`, saturating at `u128::MAX`.
    pub fn count_minterms(&self) -> u128 {
        let free = self.free_count();
        if free >= 128 {
            u128::MAX
        } else {
            1u128 << free
        }
    }

    pub fn cared_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(|&p| self.care[p / 64] >> (p % 64) & 1 == 1)
    }

    pub fn free_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(|&p| self.care[p / 64] >> (p % 64) & 1 == 0)
    }

    /// The minterm obtained by setting every free position to 0.
    pub fn low_minterm(&self) -> BitVector {
        BitVector::from_words(self.width, self.value.clone())
    }

    /// Every minterm of the cube in ascending order. Only sensible for
    /// cubes with few free positions.
    pub fn minterms(&self) -> impl Iterator<Item = BitVector> + '_ {
        let free: Vec<usize> = self.free_positions().collect();
        assert!(free.len() < 64, "too many free positions to enumerate");
        (0u64..1 << free.len()).map(move |k| {
            let mut m = self.low_minterm();
            for (i, &p) in free.iter().enumerate() {
                if k >> i & 1 == 1 {
                    m.set(p, true);
                }
            }
            m
        })
    }

    pub fn contains(&self, minterm: &BitVector) -> Result<bool> {
        check_width(self.width, minterm.width())?;
        Ok(self.contains_bits(minterm))
    }

    pub(crate) fn contains_bits(&self, minterm: &BitVector) -> bool {
        self.care
            .iter()
            .zip(&self.value)
            .zip(minterm.words())
            .all(|((c, v), m)| m & c == *v)
    }

    /// True iff every minterm of `other` is a minterm of `self`.
    pub fn subsumes(&self, other: &Cube) -> Result<bool> {
        check_width(self.width, other.width)?;
        Ok(self.subsumes_unchecked(other))
    }

    pub(crate) fn subsumes_unchecked(&self, other: &Cube) -> bool {
        (0..self.care.len()).all(|i| {
            let c = self.care[i];
            c & !other.care[i] == 0 && other.value[i] & c == self.value[i]
        })
    }

    pub fn intersects(&self, other: &Cube) -> Result<bool> {
        check_width(self.width, other.width)?;
        Ok(self.intersects_unchecked(other))
    }

    pub(crate) fn intersects_unchecked(&self, other: &Cube) -> bool {
        (0..self.care.len())
            .all(|i| (self.value[i] ^ other.value[i]) & self.care[i] & other.care[i] == 0)
    }

    /// Smallest cube containing both.
    pub fn supercube(&self, other: &Cube) -> Result<Cube> {
        check_width(self.width, other.width)?;
        let mut out = self.clone();
        for i in 0..out.care.len() {
            let keep = self.care[i] & other.care[i] & !(self.value[i] ^ other.value[i]);
            out.care[i] = keep;
            out.value[i] = self.value[i] & keep;
        }
        Ok(out)
    }

    /// Splits `self \ {minterm}` into pairwise disjoint cubes.
    ///
    /// Free positions are split in ascending order: piece `i` agrees with the
    /// minterm on the first `i` free positions and disagrees on the next.
    pub fn sharp(&self, minterm: &BitVector) -> Result<Cover> {
        check_width(self.width, minterm.width())?;
        let mut out = Cover::new(self.width);
        if !self.contains_bits(minterm) {
            out.insert_unchecked(self.clone());
            return Ok(out);
        }
        let mut prefix = self.clone();
        for p in self.free_positions() {
            let bit = minterm.get(p);
            let (same, other) = if bit {
                (Literal::One, Literal::Zero)
            } else {
                (Literal::Zero, Literal::One)
            };
            out.insert_unchecked(prefix.clone().with_literal(p, other));
            prefix.set_literal(p, same);
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        (0..self.width).rev().map(|p| self.literal(p).as_char()).collect()
    }
}

impl Ord for Cube {
    /// Textual order of the cube strings, where `-` < `0` < `1`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.width.cmp(&other.width).then_with(|| {
            for i in (0..self.care.len()).rev() {
                let diff =
                    (self.care[i] ^ other.care[i]) | (self.value[i] ^ other.value[i]);
                if diff != 0 {
                    let p = i * 64 + 63 - diff.leading_zeros() as usize;
                    return self.literal(p).rank().cmp(&other.literal(p).rank());
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Cube {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cube({self})")
    }
}

/// A sum of products over a fixed width. Cubes are kept deduplicated and in
/// textual order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cover {
    width: usize,
    cubes: BTreeSet<Cube>,
}

impl Cover {
    pub fn new(width: usize) -> Self {
        Self { width, cubes: BTreeSet::new() }
    }

    pub fn from_cubes(width: usize, cubes: impl IntoIterator<Item = Cube>) -> Result<Self> {
        let mut cover = Self::new(width);
        for cube in cubes {
            cover.insert(cube)?;
        }
        Ok(cover)
    }

    pub(crate) fn from_cubes_unchecked(width: usize, cubes: impl IntoIterator<Item = Cube>) -> Self {
        let cubes: BTreeSet<Cube> = cubes.into_iter().collect();
        debug_assert!(cubes.iter().all(|c| c.width == width));
        Self { width, cubes }
    }

    /// Parses cube strings such as `["1---", "-1--"]`.
    pub fn parse<'a>(width: usize, texts: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        Self::from_cubes(width, texts.into_iter().map(Cube::parse).collect::<Result<Vec<_>>>()?)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Returns false if the cube was already present.
    pub fn insert(&mut self, cube: Cube) -> Result<bool> {
        check_width(self.width, cube.width)?;
        Ok(self.cubes.insert(cube))
    }

    pub(crate) fn insert_unchecked(&mut self, cube: Cube) -> bool {
        self.cubes.insert(cube)
    }

    pub fn remove(&mut self, cube: &Cube) -> bool {
        self.cubes.remove(cube)
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Cube> + ExactSizeIterator {
        self.cubes.iter()
    }

    pub fn contains_cube(&self, cube: &Cube) -> bool {
        self.cubes.contains(cube)
    }

    pub fn eval(&self, minterm: &BitVector) -> Result<bool> {
        check_width(self.width, minterm.width())?;
        Ok(self.eval_unchecked(minterm))
    }

    pub(crate) fn eval_unchecked(&self, minterm: &BitVector) -> bool {
        self.cubes.iter().any(|c| c.contains_bits(minterm))
    }

    pub fn cost(&self) -> CoverCost {
        CoverCost {
            cube_count: self.cubes.len(),
            literal_count: self.cubes.iter().map(Cube::literal_count).sum(),
        }
    }

    /// Drops every cube contained in another cube of the cover.
    pub fn remove_subsumed(&self) -> Cover {
        let cubes: Vec<&Cube> = self.cubes.iter().collect();
        let kept = cubes.iter().enumerate().filter(|(i, c)| {
            !cubes
                .iter()
                .enumerate()
                .any(|(j, d)| j != *i && d.subsumes_unchecked(c) && (!c.subsumes_unchecked(d) || j < *i))
        });
        Self::from_cubes_unchecked(self.width, kept.map(|(_, c)| (*c).clone()))
    }

    /// True iff the union of the cubes is the whole space.
    pub fn is_tautology(&self) -> bool {
        tautology(self.cubes.iter().cloned().collect(), self.width)
    }

    /// True iff every minterm of `cube` is covered by the union of the cover.
    pub fn covers_cube(&self, cube: &Cube) -> Result<bool> {
        check_width(self.width, cube.width)?;
        let cofactor: Vec<Cube> = self
            .cubes
            .iter()
            .filter(|c| c.intersects_unchecked(cube))
            .map(|c| {
                let mut out = c.clone();
                for i in 0..out.care.len() {
                    out.care[i] &= !cube.care[i];
                    out.value[i] &= !cube.care[i];
                }
                out
            })
            .collect();
        Ok(tautology(cofactor, self.width))
    }

    pub fn into_vec(self) -> Vec<Cube> {
        self.cubes.into_iter().collect()
    }
}

impl fmt::Debug for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.cubes.iter().map(|c| c.to_text())).finish()
    }
}

impl<'a> IntoIterator for &'a Cover {
    type Item = &'a Cube;
    type IntoIter = alloc::collections::btree_set::Iter<'a, Cube>;

    fn into_iter(self) -> Self::IntoIter {
        self.cubes.iter()
    }
}

fn tautology(cubes: Vec<Cube>, width: usize) -> bool {
    if cubes.iter().any(Cube::is_universe) {
        return true;
    }
    if cubes.is_empty() {
        return false;
    }
    // most frequently cared position
    let mut counts = alloc::vec![(0usize, 0usize); width];
    for c in &cubes {
        for p in c.cared_positions() {
            match c.literal(p) {
                Literal::Zero => counts[p].0 += 1,
                _ => counts[p].1 += 1,
            }
        }
    }
    let (p, &(zeros, ones)) = counts
        .iter()
        .enumerate()
        .max_by_key(|(p, (z, o))| (z + o, core::cmp::Reverse(*p)))
        .expect("width > 0 when a cube is not universal");
    if zeros == 0 || ones == 0 {
        // unate in p: only the cubes free in p can cover the opposite half
        let rest = cubes.into_iter().filter(|c| c.literal(p) == Literal::Free).collect();
        return tautology(rest, width);
    }
    [Literal::Zero, Literal::One].into_iter().all(|half| {
        let part = cubes
            .iter()
            .filter(|c| {
                let l = c.literal(p);
                l == Literal::Free || l == half
            })
            .map(|c| c.clone().with_literal(p, Literal::Free))
            .collect();
        tautology(part, width)
    })
}
