//! Iterative two-level minimization: expand, irredundant, reduce, repeated
//! until the cover cost stops improving.
//!
//! The off-set is the explicit list of observed off minterms; the complement
//! is never computed. Internally every phase works on "items": cubes of the
//! on side that must each end up inside a single cube of the cover. Observed
//! on minterms are items, and so are cubes of a previously committed cover
//! when a model is updated incrementally.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::bits::Words;
use crate::cube::{Cover, Cube, Literal};
use crate::problem::off_hit_error;
use crate::{BitVector, CoverCost, Error, MinimizationProblem, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeuristicConfig {
    /// Upper bound on reduce / expand / irredundant rounds after the first
    /// expansion.
    pub max_iterations: usize,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        Self { max_iterations: 100 }
    }
}

/// Snapshot of the improvement loop after one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopState {
    pub cover: Cover,
    pub cost: CoverCost,
    pub iteration: usize,
}

/// Makes every cube prime against the off-set and drops cubes that end up
/// inside another.
///
/// Cubes are processed largest first (ties in textual order); a cube already
/// inside an expanded cube is skipped. Each cube keeps a smallest set of its
/// literals found greedily on the blocking matrix: for each off minterm, the
/// literals on which it disagrees with the cube. The greedy pass keeps the
/// literal that separates the most remaining off minterms (lowest position
/// on ties), then drops any kept literal that turned out unnecessary, so the
/// result is prime.
pub fn expand(cover: &Cover, off: &[BitVector]) -> Result<Cover> {
    check_minterms(cover.width(), off)?;
    let cubes = expand_cubes(cover.iter().cloned().collect(), off)?;
    Ok(Cover::from_cubes_unchecked(cover.width(), cubes))
}

/// Keeps relatively essential cubes, then greedily adds the cube covering
/// the most still-uncovered on minterms (textual order on ties), then drops
/// any selected cube that became redundant.
pub fn irredundant(cover: &Cover, on: &[BitVector]) -> Result<Cover> {
    check_minterms(cover.width(), on)?;
    let items: Vec<Cube> = on.iter().map(Cube::from_minterm).collect();
    let cubes = irredundant_cubes(cover.iter().cloned().collect(), &items)?;
    Ok(Cover::from_cubes_unchecked(cover.width(), cubes))
}

/// Shrinks each cube, largest first then textual order, to the smallest cube
/// containing the on minterms no other current cube covers. Cubes left with
/// nothing to cover are dropped.
pub fn reduce(cover: &Cover, on: &[BitVector]) -> Result<Cover> {
    check_minterms(cover.width(), on)?;
    let items: Vec<Cube> = on.iter().map(Cube::from_minterm).collect();
    let cubes = reduce_cubes(cover.iter().cloned().collect(), &items)?;
    Ok(Cover::from_cubes_unchecked(cover.width(), cubes))
}

pub fn minimize_heuristic(problem: &MinimizationProblem, config: &HeuristicConfig) -> Result<Cover> {
    Ok(minimize_heuristic_traced(problem, config)?.0)
}

/// Like [`minimize_heuristic`], also returning the state after the initial
/// expansion and after every later round.
pub fn minimize_heuristic_traced(
    problem: &MinimizationProblem,
    config: &HeuristicConfig,
) -> Result<(Cover, Vec<LoopState>)> {
    minimize_items(problem.width(), &problem.on_cubes(), problem.off(), &[], config)
}

/// The improvement loop over on-side items, optionally warm-started from
/// off-disjoint `seed` cubes.
pub(crate) fn minimize_items(
    width: usize,
    items: &[Cube],
    off: &[BitVector],
    seed: &[Cube],
    config: &HeuristicConfig,
) -> Result<(Cover, Vec<LoopState>)> {
    let mut start: Vec<Cube> = seed.to_vec();
    start.extend(items.iter().filter(|i| !seed.iter().any(|s| s.subsumes_unchecked(i))).cloned());
    start.sort_unstable();
    start.dedup();

    let mut best = irredundant_cubes(expand_cubes(start, off)?, items)?;
    let mut best_cost = cost_of(&best);
    let mut trace = vec![LoopState {
        cover: Cover::from_cubes_unchecked(width, best.iter().cloned()),
        cost: best_cost,
        iteration: 0,
    }];
    for iteration in 1..=config.max_iterations {
        let reduced = reduce_cubes(best.clone(), items)?;
        let next = irredundant_cubes(expand_cubes(reduced, off)?, items)?;
        let cost = cost_of(&next);
        trace.push(LoopState {
            cover: Cover::from_cubes_unchecked(width, next.iter().cloned()),
            cost,
            iteration,
        });
        if cost < best_cost {
            best = next;
            best_cost = cost;
        } else {
            break;
        }
    }
    Ok((Cover::from_cubes_unchecked(width, best), trace))
}

fn cost_of(cubes: &[Cube]) -> CoverCost {
    CoverCost {
        cube_count: cubes.len(),
        literal_count: cubes.iter().map(Cube::literal_count).sum(),
    }
}

fn check_minterms(width: usize, minterms: &[BitVector]) -> Result<()> {
    match minterms.iter().find(|m| m.width() != width) {
        Some(m) => Err(Error::WidthMismatch { expected: width, found: m.width() }),
        None => Ok(()),
    }
}

/// Largest first, then textual.
fn size_order(cubes: &mut [Cube]) {
    cubes.sort_by(|a, b| Reverse(a.free_count()).cmp(&Reverse(b.free_count())).then_with(|| a.cmp(b)));
}

pub(crate) fn expand_cubes(mut cubes: Vec<Cube>, off: &[BitVector]) -> Result<Vec<Cube>> {
    size_order(&mut cubes);
    let mut out: Vec<Cube> = Vec::new();
    for cube in cubes {
        if out.iter().any(|e| e.subsumes_unchecked(&cube)) {
            continue;
        }
        out.push(expand_cube(&cube, off)?);
    }
    let mut kept: Vec<Cube> = out
        .iter()
        .enumerate()
        .filter(|(i, c)| {
            !out.iter().enumerate().any(|(j, d)| {
                j != *i && d.subsumes_unchecked(c) && (!c.subsumes_unchecked(d) || j < *i)
            })
        })
        .map(|(_, c)| c.clone())
        .collect();
    kept.sort_unstable();
    Ok(kept)
}

fn expand_cube(cube: &Cube, off: &[BitVector]) -> Result<Cube> {
    let care = cube.care_words();
    let value = cube.value_words();
    let mut rows: Vec<Words> = Vec::with_capacity(off.len());
    for m in off {
        let diff: Words = care
            .iter()
            .zip(value)
            .zip(m.words())
            .map(|((c, v), w)| c & (v ^ w))
            .collect();
        if diff.iter().all(|&d| d == 0) {
            return Err(off_hit_error(cube, m));
        }
        rows.push(diff);
    }

    let width = cube.width();
    let mut keep: Vec<usize> = Vec::new();
    let mut uncovered: Vec<&Words> = rows.iter().collect();
    let mut counts = vec![0usize; width];
    while !uncovered.is_empty() {
        counts.iter_mut().for_each(|c| *c = 0);
        for row in &uncovered {
            for_each_bit(row, |p| counts[p] += 1);
        }
        let (p, _) = counts
            .iter()
            .enumerate()
            .max_by_key(|(p, n)| (**n, Reverse(*p)))
            .expect("width > 0 when an off row is uncovered");
        keep.push(p);
        uncovered.retain(|row| !has_bit(row, p));
    }

    // drop kept literals that every off row can do without
    keep.sort_unstable();
    let mut i = 0;
    while i < keep.len() {
        let p = keep[i];
        let needed = rows.iter().any(|row| {
            has_bit(row, p) && !keep.iter().any(|&q| q != p && has_bit(row, q))
        });
        if needed {
            i += 1;
        } else {
            keep.remove(i);
        }
    }

    let mut out = cube.clone();
    for p in cube.cared_positions() {
        if keep.binary_search(&p).is_err() {
            out.set_literal(p, Literal::Free);
        }
    }
    Ok(out)
}

fn has_bit(words: &[u64], p: usize) -> bool {
    words[p / 64] >> (p % 64) & 1 == 1
}

fn for_each_bit(words: &[u64], mut f: impl FnMut(usize)) {
    for (i, &w) in words.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            f(i * 64 + b);
            w &= w - 1;
        }
    }
}

/// For each item, the indices of the cubes containing it.
fn containers(cubes: &[Cube], items: &[Cube]) -> Result<Vec<Vec<usize>>> {
    items
        .iter()
        .map(|item| {
            let holders: Vec<usize> =
                (0..cubes.len()).filter(|&j| cubes[j].subsumes_unchecked(item)).collect();
            if holders.is_empty() {
                Err(Error::Uncovered(item.to_text()))
            } else {
                Ok(holders)
            }
        })
        .collect()
}

pub(crate) fn irredundant_cubes(mut cubes: Vec<Cube>, items: &[Cube]) -> Result<Vec<Cube>> {
    cubes.sort_unstable();
    cubes.dedup();
    let holders = containers(&cubes, items)?;
    let mut selected = vec![false; cubes.len()];
    for h in &holders {
        if let [only] = h[..] {
            selected[only] = true;
        }
    }
    let essential = selected.clone();
    let mut uncovered: Vec<usize> =
        (0..items.len()).filter(|&i| !holders[i].iter().any(|&j| selected[j])).collect();
    while !uncovered.is_empty() {
        let mut gain = vec![0usize; cubes.len()];
        for &i in &uncovered {
            for &j in &holders[i] {
                gain[j] += 1;
            }
        }
        let pick = (0..cubes.len())
            .max_by_key(|&j| (gain[j], Reverse(j)))
            .expect("uncovered items have holders");
        selected[pick] = true;
        uncovered.retain(|&i| !holders[i].contains(&pick));
    }
    // a greedy pick may have been made redundant by later picks
    for j in 0..cubes.len() {
        if !selected[j] || essential[j] {
            continue;
        }
        let redundant = holders
            .iter()
            .filter(|h| h.contains(&j))
            .all(|h| h.iter().any(|&k| k != j && selected[k]));
        if redundant {
            selected[j] = false;
        }
    }
    Ok(cubes.into_iter().zip(selected).filter(|(_, s)| *s).map(|(c, _)| c).collect())
}

pub(crate) fn reduce_cubes(mut cubes: Vec<Cube>, items: &[Cube]) -> Result<Vec<Cube>> {
    size_order(&mut cubes);
    containers(&cubes, items)?;
    let mut current: Vec<Option<Cube>> = cubes.into_iter().map(Some).collect();
    for i in 0..current.len() {
        let cube = current[i].clone().expect("processed once");
        let mut shrunk: Option<Cube> = None;
        for item in items {
            if !cube.subsumes_unchecked(item) {
                continue;
            }
            let elsewhere = current
                .iter()
                .enumerate()
                .any(|(j, c)| j != i && c.as_ref().is_some_and(|c| c.subsumes_unchecked(item)));
            if !elsewhere {
                shrunk = Some(match shrunk {
                    None => item.clone(),
                    Some(s) => s.supercube(item)?,
                });
            }
        }
        current[i] = shrunk;
    }
    let mut out: Vec<Cube> = current.into_iter().flatten().collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
