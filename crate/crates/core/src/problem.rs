use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::cube::{Cover, Cube};
use crate::{BitVector, Error, Result};

/// An incompletely specified single-output function given by its observed
/// on-set and off-set. Every other minterm is a don't-care.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimizationProblem {
    width: usize,
    on: Vec<BitVector>,
    off: Vec<BitVector>,
}

impl MinimizationProblem {
    pub fn new(
        width: usize,
        on: impl IntoIterator<Item = BitVector>,
        off: impl IntoIterator<Item = BitVector>,
    ) -> Result<Self> {
        if width == 0 {
            return Err(Error::ZeroWidth);
        }
        let collect = |items: &mut dyn Iterator<Item = BitVector>| -> Result<Vec<BitVector>> {
            let mut v = Vec::new();
            for m in items {
                if m.width() != width {
                    return Err(Error::WidthMismatch { expected: width, found: m.width() });
                }
                v.push(m);
            }
            v.sort_unstable();
            v.dedup();
            Ok(v)
        };
        let on = collect(&mut on.into_iter())?;
        let off = collect(&mut off.into_iter())?;
        if let Some(m) = on.iter().find(|m| off.binary_search(m).is_ok()) {
            return Err(Error::OnOffOverlap(m.to_text()));
        }
        Ok(Self { width, on, off })
    }

    /// Builds a problem from minterm indices; only for widths up to 64.
    pub fn from_indices(
        width: usize,
        on: impl IntoIterator<Item = u64>,
        off: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        assert!(width <= 64, "from_indices supports widths up to 64");
        Self::new(
            width,
            on.into_iter().map(|i| BitVector::from_u64(i, width)),
            off.into_iter().map(|i| BitVector::from_u64(i, width)),
        )
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// On-set minterms in ascending order.
    pub fn on(&self) -> &[BitVector] {
        &self.on
    }

    /// Off-set minterms in ascending order.
    pub fn off(&self) -> &[BitVector] {
        &self.off
    }

    pub fn is_on(&self, m: &BitVector) -> bool {
        self.on.binary_search(m).is_ok()
    }

    pub fn is_off(&self, m: &BitVector) -> bool {
        self.off.binary_search(m).is_ok()
    }

    /// True iff the cover is 1 on every on minterm and 0 on every off minterm.
    pub fn is_satisfied_by(&self, cover: &Cover) -> bool {
        cover.width() == self.width
            && self.on.iter().all(|m| cover.eval_unchecked(m))
            && !self.off.iter().any(|m| cover.eval_unchecked(m))
    }

    pub(crate) fn on_cubes(&self) -> Vec<Cube> {
        self.on.iter().map(Cube::from_minterm).collect()
    }
}

/// Cost of a cover: cube count first, literal count as the tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CoverCost {
    pub cube_count: usize,
    pub literal_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Engine {
    Exact,
    #[default]
    Heuristic,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Exact => "exact",
            Engine::Heuristic => "heuristic",
        })
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Engine::Exact),
            "heuristic" => Ok(Engine::Heuristic),
            other => Err(Error::InvalidConfig(alloc::format!("unknown engine {other:?}"))),
        }
    }
}

/// The first off minterm inside `cube`, by linear scan.
pub(crate) fn off_hit<'a>(cube: &Cube, off: &'a [BitVector]) -> Option<&'a BitVector> {
    off.iter().find(|m| cube.contains_bits(m))
}

pub(crate) fn off_hit_error(cube: &Cube, minterm: &BitVector) -> Error {
    Error::CubeIntersectsOff { cube: cube.to_text(), minterm: minterm.to_text() }
}

#[cfg(test)]
pub(crate) fn texts<'a>(cubes: impl IntoIterator<Item = &'a Cube>) -> Vec<alloc::string::String> {
    cubes.into_iter().map(Cube::to_text).collect()
}
