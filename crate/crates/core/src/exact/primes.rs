use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use super::ExactLimits;
use crate::cube::{Cube, Literal};
use crate::error::Limit;
use crate::problem::{off_hit, off_hit_error};
use crate::{BitVector, Error, Result};

/// Off-set membership with memoized disjointness for small cubes.
pub(crate) struct OffIndex<'a> {
    off: &'a [BitVector],
    memo: HashMap<Cube, bool>,
}

impl<'a> OffIndex<'a> {
    pub(crate) fn new(off: &'a [BitVector]) -> Self {
        debug_assert!(off.windows(2).all(|w| w[0] < w[1]));
        Self { off, memo: HashMap::new() }
    }

    pub(crate) fn is_disjoint(&mut self, cube: &Cube) -> bool {
        if self.off.is_empty() {
            return true;
        }
        let free = cube.free_count();
        if free == 0 {
            return self.off.binary_search(&cube.low_minterm()).is_err();
        }
        // enumerating 2^free minterms only pays off against a larger off-set
        if free >= 63 || (1usize << free) >= self.off.len() {
            return off_hit(cube, self.off).is_none();
        }
        if let Some(&known) = self.memo.get(cube) {
            return known;
        }
        let p = cube.free_positions().last().expect("free > 0");
        let low = cube.clone().with_literal(p, Literal::Zero);
        let high = cube.clone().with_literal(p, Literal::One);
        let disjoint = self.is_disjoint(&low) && self.is_disjoint(&high);
        self.memo.insert(cube.clone(), disjoint);
        disjoint
    }
}

/// All prime implicants containing at least one of `items`.
///
/// Expansion is breadth-first from the items: every cared position is freed
/// in turn, children that meet the off-set are dropped and visited cubes are
/// deduplicated. Any off-disjoint cube containing an item is reachable this
/// way, so every prime is found; a cube is prime when none of its children
/// survives.
pub(crate) fn primes_of_items(
    items: &[Cube],
    off: &[BitVector],
    limits: &ExactLimits,
) -> Result<Vec<Cube>> {
    let mut index = OffIndex::new(off);
    let mut visited: HashSet<Cube> = HashSet::new();
    let mut frontier: Vec<Cube> = Vec::new();
    for item in items {
        if !index.is_disjoint(item) {
            let hit = off_hit(item, off).expect("item meets the off-set");
            return Err(off_hit_error(item, hit));
        }
        if visited.insert(item.clone()) {
            frontier.push(item.clone());
        }
    }
    let mut primes = Vec::new();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for cube in frontier {
            let mut prime = true;
            let cared: Vec<usize> = cube.cared_positions().collect();
            for p in cared {
                let child = cube.clone().with_literal(p, Literal::Free);
                if visited.contains(&child) {
                    // only off-disjoint cubes are ever visited
                    prime = false;
                    continue;
                }
                let flipped = match cube.literal(p) {
                    Literal::Zero => cube.clone().with_literal(p, Literal::One),
                    _ => cube.clone().with_literal(p, Literal::Zero),
                };
                if index.is_disjoint(&flipped) {
                    prime = false;
                    visited.insert(child.clone());
                    if visited.len() > limits.max_implicants {
                        return Err(Error::ExactIntractable {
                            limit: Limit::Implicants,
                            ceiling: limits.max_implicants,
                        });
                    }
                    next.push(child);
                }
            }
            if prime {
                primes.push(cube);
                if primes.len() > limits.max_primes {
                    return Err(Error::ExactIntractable {
                        limit: Limit::Primes,
                        ceiling: limits.max_primes,
                    });
                }
            }
        }
        frontier = next;
    }
    primes.sort_unstable();
    Ok(primes)
}
