//! Exact two-level minimization: every prime implicant, then a minimum-cost
//! unate cover of the on-set.
//!
//! The don't-care set is the complement of the observed on and off minterms
//! and is never materialized. Primes are grown from the on-set instead (see
//! [`prime_implicants`]).

mod covering;
mod primes;

use alloc::vec::Vec;

use crate::cube::{Cover, Cube};
use crate::{BitVector, Error, MinimizationProblem, Result};


/// Resource ceilings for the exact engine. Exceeding one returns
/// [`Error::ExactIntractable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactLimits {
    pub max_primes: usize,
    /// Off-disjoint cubes visited while growing primes.
    pub max_implicants: usize,
    /// Branch-and-bound nodes in the covering search.
    pub max_nodes: usize,
}

impl Default for ExactLimits {
    fn default() -> Self {
        Self { max_primes: 200_000, max_implicants: 4_000_000, max_nodes: 1_000_000 }
    }
}

pub fn prime_implicants(problem: &MinimizationProblem, limits: &ExactLimits) -> Result<Cover> {
    let primes = primes::primes_of_items(&problem.on_cubes(), problem.off(), limits)?;
    Ok(Cover::from_cubes_unchecked(problem.width(), primes))
}

/// Primes that are the only prime covering some on minterm.
pub fn essential_primes(primes: &Cover, on: &[BitVector]) -> Result<Cover> {
    let items: Vec<Cube> = on.iter().map(Cube::from_minterm).collect();
    let columns: Vec<Cube> = primes.iter().cloned().collect();
    let rows = incidence(&columns, &items, primes.width())?;
    let mut out = Cover::new(primes.width());
    for row in rows {
        if let [only] = row[..] {
            out.insert_unchecked(columns[only as usize].clone());
        }
    }
    Ok(out)
}

/// Minimum-cost subset of `primes` covering every on minterm: fewest cubes,
/// then fewest literals, then textually smallest.
pub fn unate_cover(primes: &Cover, on: &[BitVector], limits: &ExactLimits) -> Result<Cover> {
    let items: Vec<Cube> = on.iter().map(Cube::from_minterm).collect();
    let columns: Vec<Cube> = primes.iter().cloned().collect();
    cover_items(primes.width(), &columns, &items, limits)
}

pub fn minimize_exact(problem: &MinimizationProblem, limits: &ExactLimits) -> Result<Cover> {
    minimize_items(problem.width(), &problem.on_cubes(), problem.off(), limits)
}

/// Exact minimization where each on-side item must sit inside a single cube
/// of the result. For minterm items this is plain exact minimization; cube
/// items come from previously committed covers.
pub(crate) fn minimize_items(
    width: usize,
    items: &[Cube],
    off: &[BitVector],
    limits: &ExactLimits,
) -> Result<Cover> {
    if items.is_empty() {
        return Ok(Cover::new(width));
    }
    let primes = primes::primes_of_items(items, off, limits)?;
    cover_items(width, &primes, items, limits)
}

fn cover_items(width: usize, columns: &[Cube], items: &[Cube], limits: &ExactLimits) -> Result<Cover> {
    if items.is_empty() {
        return Ok(Cover::new(width));
    }
    let rows = incidence(columns, items, width)?;
    let costs: Vec<u64> = columns.iter().map(|c| covering::column_cost(c.literal_count())).collect();
    let solution = covering::Solver::new(&costs, limits.max_nodes).solve(rows)?;
    Ok(Cover::from_cubes_unchecked(
        width,
        solution.columns.iter().map(|&c| columns[c as usize].clone()),
    ))
}

/// For every item, the sorted indices of the columns containing it.
fn incidence(columns: &[Cube], items: &[Cube], width: usize) -> Result<Vec<Vec<u32>>> {
    for c in columns.iter().chain(items) {
        if c.width() != width {
            return Err(Error::WidthMismatch { expected: width, found: c.width() });
        }
    }
    let mut rows: Vec<Vec<u32>> = alloc::vec![Vec::new(); items.len()];
    let all_minterms = items.iter().all(Cube::is_minterm);
    let mut sorted: Vec<(BitVector, usize)> = Vec::new();
    if all_minterms {
        sorted = items.iter().enumerate().map(|(i, c)| (c.low_minterm(), i)).collect();
        sorted.sort_unstable();
    }
    for (j, col) in columns.iter().enumerate() {
        let free = col.free_count();
        // enumerate the column's minterms when that beats scanning every item
        let probes = usize::BITS - items.len().leading_zeros();
        if all_minterms && free < 32 && (1usize << free).saturating_mul(probes as usize) <= items.len() {
            for m in col.minterms() {
                let start = sorted.partition_point(|(s, _)| *s < m);
                for (s, i) in &sorted[start..] {
                    if *s != m {
                        break;
                    }
                    rows[*i].push(j as u32);
                }
            }
        } else {
            for (i, item) in items.iter().enumerate() {
                if col.subsumes_unchecked(item) {
                    rows[i].push(j as u32);
                }
            }
        }
    }
    for (row, item) in rows.iter_mut().zip(items) {
        if row.is_empty() {
            return Err(Error::Uncovered(item.to_text()));
        }
        row.sort_unstable();
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::texts;

    fn xlt4() -> MinimizationProblem {
        MinimizationProblem::from_indices(4, 4..16, 0..4).unwrap()
    }

    fn minterms(texts: &[&str]) -> Vec<BitVector> {
        texts.iter().map(|t| BitVector::parse(t).unwrap()).collect()
    }

    #[test]
    fn primes_of_the_threshold_example() {
        let primes = prime_implicants(&xlt4(), &ExactLimits::default()).unwrap();
        assert_eq!(texts(&primes), ["-1--", "1---"]);
    }

    #[test]
    fn primes_of_small_examples() {
        let empty = MinimizationProblem::from_indices(3, [], [0, 1]).unwrap();
        assert!(prime_implicants(&empty, &ExactLimits::default()).unwrap().is_empty());
        let p = MinimizationProblem::new(2, minterms(&["10", "11"]), minterms(&["00"])).unwrap();
        assert_eq!(texts(&prime_implicants(&p, &ExactLimits::default()).unwrap()), ["-1", "1-"]);
    }

    #[test]
    fn essential_examples() {
        let primes = Cover::parse(2, ["1-", "-1"]).unwrap();
        let ess = essential_primes(&primes, &minterms(&["10", "11"])).unwrap();
        assert_eq!(texts(&ess), ["1-"]);
        assert!(essential_primes(&primes, &minterms(&["11"])).unwrap().is_empty());
        let single = Cover::parse(2, ["--"]).unwrap();
        assert_eq!(texts(&essential_primes(&single, &minterms(&["00", "11"])).unwrap()), ["--"]);
        assert!(matches!(
            essential_primes(&primes, &minterms(&["00"])),
            Err(Error::Uncovered(_))
        ));
    }

    #[test]
    fn unate_cover_examples() {
        let limits = ExactLimits::default();
        let primes = Cover::parse(2, ["1-", "-1"]).unwrap();
        assert_eq!(texts(&unate_cover(&primes, &minterms(&["10", "11"]), &limits).unwrap()), ["1-"]);
        assert!(unate_cover(&primes, &[], &limits).unwrap().is_empty());
        let x = xlt4();
        let both = unate_cover(&prime_implicants(&x, &limits).unwrap(), x.on(), &limits).unwrap();
        assert_eq!(texts(&both), ["-1--", "1---"]);
        assert!(unate_cover(&primes, &minterms(&["00"]), &limits).is_err());
    }

    #[test]
    fn minimize_examples() {
        let limits = ExactLimits::default();
        assert_eq!(texts(&minimize_exact(&xlt4(), &limits).unwrap()), ["-1--", "1---"]);
        let all = MinimizationProblem::from_indices(3, 0..8, []).unwrap();
        assert_eq!(texts(&minimize_exact(&all, &limits).unwrap()), ["---"]);
        let parity = MinimizationProblem::new(
            3,
            minterms(&["000", "011", "101", "110"]),
            minterms(&["001", "010", "100", "111"]),
        )
        .unwrap();
        let cover = minimize_exact(&parity, &limits).unwrap();
        assert_eq!(texts(&cover), ["000", "011", "101", "110"]);
    }

    #[test]
    fn prime_ceiling_trips() {
        let limits = ExactLimits { max_primes: 1, ..Default::default() };
        assert!(matches!(
            minimize_exact(&xlt4(), &limits),
            Err(Error::ExactIntractable { limit: crate::Limit::Primes, .. })
        ));
    }

    #[test]
    fn cube_items_stay_whole() {
        // item `1-0` must land inside one cube even though `1-1` is off
        let items = [Cube::parse("1-0").unwrap(), Cube::parse("011").unwrap()];
        let off = minterms(&["101", "111"]);
        let cover = minimize_items(3, &items, &off, &ExactLimits::default()).unwrap();
        for item in &items {
            assert!(cover.iter().any(|c| c.subsumes(item).unwrap()));
        }
        for m in &off {
            assert!(!cover.eval(m).unwrap());
        }
    }
}

