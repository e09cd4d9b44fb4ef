//! Branch-and-bound unate covering.
//!
//! Rows are on-set items, columns are primes. Columns are identified by their
//! rank in textual cube order, so comparing sorted column lists compares
//! covers in textual order, which is how ties between equal-cost optima are
//! broken.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Limit;
use crate::{Error, Result};

/// Packs (cube count, literal count) so that integer order is the
/// lexicographic cost order.
pub(crate) fn column_cost(literals: usize) -> u64 {
    (1u64 << 32) | literals as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Solution {
    pub cost: u64,
    pub columns: Vec<u32>,
}

/// A cover and its cost.
type Found = Option<(u64, Vec<u32>)>;

pub(crate) struct Solver<'a> {
    costs: &'a [u64],
    nodes: usize,
    max_nodes: usize,
    /// Stop at the first cover within the bound instead of the cheapest.
    any_within: bool,
}

impl<'a> Solver<'a> {
    pub(crate) fn new(costs: &'a [u64], max_nodes: usize) -> Self {
        Self { costs, nodes: 0, max_nodes, any_within: false }
    }

    /// Minimum-cost set of columns hitting every row, smallest in sorted
    /// column order among equal costs. Each row lists the columns covering
    /// it, sorted ascending.
    ///
    /// The optimal cost is found first; the tie-break search then runs with
    /// that exact bound, guided by the optimal cover already found.
    pub(crate) fn solve(&mut self, rows: Vec<Vec<u32>>) -> Result<Solution> {
        let (cost, witness) =
            self.min_cost(rows.clone(), greedy_cost(&rows, self.costs))?.expect("the greedy cover bounds the optimum");
        let columns = self.first_cover(rows, cost, Some(witness))?.expect("a cover of optimal cost exists");
        Ok(Solution { cost, columns })
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::ExactIntractable { limit: Limit::Nodes, ceiling: self.max_nodes });
        }
        Ok(())
    }

    fn fixed_cost(&self, columns: &[u32]) -> u64 {
        columns.iter().map(|&c| self.costs[c as usize]).sum()
    }

    /// Cheapest cover not above `bound`, if any, with its cost.
    fn min_cost(&mut self, mut rows: Vec<Vec<u32>>, bound: u64) -> Result<Found> {
        self.tick()?;
        let mut chosen = Vec::new();
        reduce(&mut rows, &mut chosen, self.costs);
        let fixed = self.fixed_cost(&chosen);
        if fixed > bound {
            return Ok(None);
        }
        if rows.is_empty() {
            return Ok(Some((fixed, chosen)));
        }
        let bound = bound - fixed;
        let components = split_components(rows);
        let rest = if components.len() > 1 {
            // budgets for later components depend on true minima here
            let saved = core::mem::replace(&mut self.any_within, false);
            let split = self.min_cost_split(components, bound);
            self.any_within = saved;
            split?
        } else {
            let rows = components.into_iter().next().expect("one component");
            self.branch_cost(rows, bound)?
        };
        Ok(rest.map(|(cost, cols)| {
            chosen.extend(cols);
            (cost + fixed, chosen)
        }))
    }

    fn min_cost_split(&mut self, components: Vec<Vec<Vec<u32>>>, bound: u64) -> Result<Found> {
        let lbs: Vec<u64> = components.iter().map(|c| lower_bound(c, self.costs)).collect();
        let mut pending: u64 = lbs.iter().sum();
        let mut spent = 0;
        let mut columns = Vec::new();
        for (rows, lb) in components.into_iter().zip(lbs) {
            pending -= lb;
            let Some(budget) = bound.checked_sub(spent + pending) else {
                return Ok(None);
            };
            match self.min_cost(rows, budget)? {
                Some((c, cols)) => {
                    spent += c;
                    columns.extend(cols);
                }
                None => return Ok(None),
            }
        }
        Ok(Some((spent, columns)))
    }

    fn branch_cost(&mut self, mut rows: Vec<Vec<u32>>, mut bound: u64) -> Result<Found> {
        if lower_bound(&rows, self.costs) > bound {
            return Ok(None);
        }
        match lagrangian_fixing(&mut rows, self.costs, bound) {
            Fixing::Infeasible => return Ok(None),
            Fixing::Removed => return self.min_cost(rows, bound),
            Fixing::Unchanged => {}
        }
        let pivot = rows
            .iter()
            .enumerate()
            .min_by_key(|(i, r)| (r.len(), *i))
            .map(|(i, _)| i)
            .expect("rows non-empty");
        let by_column = column_index(&rows);
        let mut candidates = rows[pivot].clone();
        candidates.sort_by_key(|&c| (core::cmp::Reverse(by_column[c as usize].len()), self.costs[c as usize], c));
        // later siblings exclude the columns tried before them
        let mut rows = rows;
        let mut best = None;
        for col in candidates {
            if let Some(budget) = bound.checked_sub(self.costs[col as usize]) {
                let residual: Vec<Vec<u32>> = rows.iter().filter(|r| r.binary_search(&col).is_err()).cloned().collect();
                if let Some((sub, mut cols)) = self.min_cost(residual, budget)? {
                    let cost = sub + self.costs[col as usize];
                    cols.push(col);
                    best = Some((cost, cols));
                    if self.any_within {
                        break;
                    }
                    match cost.checked_sub(1) {
                        Some(b) => bound = b,
                        None => break,
                    }
                }
            }
            if !exclude(&mut rows, col) || lower_bound(&rows, self.costs) > bound {
                break;
            }
        }
        Ok(best)
    }

    /// The first cover in sorted column order whose cost is at most
    /// `bound`. Meant to be called with `bound` equal to the optimum, so
    /// every cover it can find is optimal. `witness`, when given, is some
    /// cover within the bound.
    fn first_cover(&mut self, mut rows: Vec<Vec<u32>>, bound: u64, witness: Option<Vec<u32>>) -> Result<Option<Vec<u32>>> {
        self.tick()?;
        let mut chosen = Vec::new();
        reduce(&mut rows, &mut chosen, self.costs);
        let fixed = self.fixed_cost(&chosen);
        if fixed > bound {
            return Ok(None);
        }
        let bound = bound - fixed;
        let mut tail = Vec::new();
        if !rows.is_empty() {
            let components = split_components(rows);
            if components.len() > 1 {
                // Optimal per component; the union of per-component first
                // covers is the first cover of the whole.
                let mut found = Vec::with_capacity(components.len());
                for c in &components {
                    match self.min_cost(c.clone(), bound)? {
                        Some(f) => found.push(f),
                        None => return Ok(None),
                    }
                }
                if found.iter().map(|f| f.0).sum::<u64>() > bound {
                    return Ok(None);
                }
                for (rows, (cost, cols)) in components.into_iter().zip(found) {
                    match self.first_cover(rows, cost, Some(cols))? {
                        Some(cols) => tail.extend(cols),
                        None => return Ok(None),
                    }
                }
            } else {
                let rows = components.into_iter().next().expect("one component");
                let witness = witness.and_then(|w| self.still_covers(&rows, w, bound));
                match self.branch_first(rows, bound, witness)? {
                    Some(cols) => tail = cols,
                    None => return Ok(None),
                }
            }
        }
        chosen.extend(tail);
        chosen.sort_unstable();
        Ok(Some(chosen))
    }

    /// The part of `witness` that still matters for `rows`, if it covers
    /// them within `bound`.
    fn still_covers(&self, rows: &[Vec<u32>], mut witness: Vec<u32>, bound: u64) -> Option<Vec<u32>> {
        witness.sort_unstable();
        witness.retain(|c| rows.iter().any(|r| r.binary_search(c).is_ok()));
        let covers = rows.iter().all(|r| r.iter().any(|c| witness.binary_search(c).is_ok()));
        (covers && self.fixed_cost(&witness) <= bound).then_some(witness)
    }

    /// Takes the smallest remaining column if an optimal cover still
    /// contains it, otherwise drops it, so covers are met in sorted column
    /// order.
    fn branch_first(&mut self, mut rows: Vec<Vec<u32>>, bound: u64, mut witness: Option<Vec<u32>>) -> Result<Option<Vec<u32>>> {
        loop {
            let col = rows.iter().map(|r| r[0]).min().expect("rows non-empty");
            if let Some(budget) = bound.checked_sub(self.costs[col as usize]) {
                let residual: Vec<Vec<u32>> =
                    rows.iter().filter(|r| r.binary_search(&col).is_err()).cloned().collect();
                let rest = match witness.as_ref().and_then(|w| w.binary_search(&col).ok()) {
                    Some(i) => {
                        let mut w = witness.take().expect("witness present");
                        w.remove(i);
                        Some(w)
                    }
                    None if residual.is_empty() => Some(Vec::new()),
                    None => {
                        let saved = core::mem::replace(&mut self.any_within, true);
                        let found = self.min_cost(residual.clone(), budget);
                        self.any_within = saved;
                        found?.map(|(_, cols)| cols)
                    }
                };
                if let Some(rest) = rest {
                    let mut cols =
                        self.first_cover(residual, budget, Some(rest))?.expect("a cover within the budget exists");
                    cols.push(col);
                    cols.sort_unstable();
                    return Ok(Some(cols));
                }
            }
            if !exclude(&mut rows, col) {
                return Ok(None);
            }
            let mut chosen = Vec::new();
            reduce(&mut rows, &mut chosen, self.costs);
            if !chosen.is_empty() || rows.is_empty() {
                // essentials appeared; let the general step handle them
                let fixed = self.fixed_cost(&chosen);
                let Some(rest) = bound.checked_sub(fixed) else {
                    return Ok(None);
                };
                if rows.is_empty() {
                    chosen.sort_unstable();
                    return Ok(Some(chosen));
                }
                return Ok(self.first_cover(rows, rest, witness)?.map(|mut cols| {
                    cols.extend(chosen);
                    cols.sort_unstable();
                    cols
                }));
            }
            witness = witness.and_then(|w| self.still_covers(&rows, w, bound));
            if witness.is_none() && lower_bound(&rows, self.costs) > bound {
                return Ok(None);
            }
        }
    }
}

/// Removes `col` from every row; false if some row is left empty.
fn exclude(rows: &mut [Vec<u32>], col: u32) -> bool {
    for r in rows.iter_mut() {
        if let Ok(i) = r.binary_search(&col) {
            r.remove(i);
            if r.is_empty() {
                return false;
            }
        }
    }
    true
}

/// Cost of covering greedily by most new rows per column, lowest id on ties.
fn greedy_cost(rows: &[Vec<u32>], costs: &[u64]) -> u64 {
    let by_column = column_index(rows);
    let mut covered = vec![false; rows.len()];
    let mut left = rows.len();
    let mut total = 0;
    while left > 0 {
        let (col, gain) = by_column
            .iter()
            .enumerate()
            .map(|(c, rs)| (c, rs.iter().filter(|&&r| !covered[r as usize]).count()))
            .max_by_key(|&(c, gain)| (gain, core::cmp::Reverse(c)))
            .expect("columns exist");
        debug_assert!(gain > 0);
        for &r in &by_column[col] {
            if !covered[r as usize] {
                covered[r as usize] = true;
                left -= 1;
            }
        }
        total += costs[col];
    }
    total
}

/// Essential columns, row dominance and column dominance until nothing
/// changes. Selected columns are appended to `chosen`.
fn reduce(rows: &mut Vec<Vec<u32>>, chosen: &mut Vec<u32>, costs: &[u64]) {
    loop {
        let mut changed = false;

        // essentials
        let essentials: Vec<u32> = rows.iter().filter(|r| r.len() == 1).map(|r| r[0]).collect();
        if !essentials.is_empty() {
            let mut essentials = essentials;
            essentials.sort_unstable();
            essentials.dedup();
            rows.retain(|r| !r.iter().any(|c| essentials.binary_search(c).is_ok()));
            chosen.extend(essentials);
            changed = true;
        }
        if rows.is_empty() {
            return;
        }

        // row dominance: a row whose columns include all of another row's
        // columns is covered whenever the smaller row is
        rows.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        rows.dedup();
        let by_column = column_index(rows);
        let mut dropped = vec![false; rows.len()];
        for i in 0..rows.len() {
            if dropped[i] {
                continue;
            }
            let small = &rows[i];
            let anchor = small
                .iter()
                .min_by_key(|c| by_column[**c as usize].len())
                .expect("rows are non-empty");
            for &j in &by_column[*anchor as usize] {
                let j = j as usize;
                if j != i && !dropped[j] && rows[j].len() > small.len() && is_subset(small, &rows[j]) {
                    dropped[j] = true;
                    changed = true;
                }
            }
        }
        if changed {
            let mut k = 0;
            rows.retain(|_| {
                k += 1;
                !dropped[k - 1]
            });
        }

        // column dominance: drop j when some k covers a superset of j's rows
        // and is cheaper, or equally cheap and earlier in textual order
        let by_column = column_index(rows);
        let mut removed: Vec<u32> = Vec::new();
        for (j, rows_j) in by_column.iter().enumerate() {
            if rows_j.is_empty() {
                continue;
            }
            let j = j as u32;
            let dominated = rows[rows_j[0] as usize].iter().any(|&k| {
                k != j
                    && (costs[k as usize], k) < (costs[j as usize], j)
                    && is_subset(rows_j, &by_column[k as usize])
            });
            if dominated {
                removed.push(j);
            }
        }
        if !removed.is_empty() {
            for r in rows.iter_mut() {
                r.retain(|c| removed.binary_search(c).is_err());
            }
            changed = true;
        }

        if !changed {
            return;
        }
    }
}

/// For each column id, the indices of the rows it covers, stored flat.
struct ColumnIndex {
    starts: Vec<u32>,
    rows: Vec<u32>,
}

impl ColumnIndex {
    fn len(&self) -> usize {
        self.starts.len() - 1
    }

    fn iter(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.len()).map(|c| &self[c])
    }
}

impl core::ops::Index<usize> for ColumnIndex {
    type Output = [u32];

    fn index(&self, c: usize) -> &[u32] {
        &self.rows[self.starts[c] as usize..self.starts[c + 1] as usize]
    }
}

fn column_index(rows: &[Vec<u32>]) -> ColumnIndex {
    let max = rows.iter().flat_map(|r| r.iter()).copied().max().map_or(0, |m| m as usize + 1);
    let mut starts = vec![0u32; max + 1];
    for r in rows {
        for &c in r {
            starts[c as usize + 1] += 1;
        }
    }
    for c in 0..max {
        starts[c + 1] += starts[c];
    }
    let mut fill = starts.clone();
    let mut flat = vec![0u32; starts[max] as usize];
    for (i, r) in rows.iter().enumerate() {
        for &c in r {
            flat[fill[c as usize] as usize] = i as u32;
            fill[c as usize] += 1;
        }
    }
    ColumnIndex { starts, rows: flat }
}

fn is_subset(small: &[u32], large: &[u32]) -> bool {
    let mut it = large.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// The larger of two dual-feasible bounds: a greedy set of pairwise
/// column-disjoint rows, each charged its cheapest column, and a greedy dual
/// that charges every row the least slack left among its columns.
fn lower_bound(rows: &[Vec<u32>], costs: &[u64]) -> u64 {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| (rows[i].len(), i));
    let max = rows.iter().flat_map(|r| r.iter()).copied().max().map_or(0, |m| m as usize + 1);
    let mut used = vec![false; max];
    let mut slack: Vec<u64> = costs[..max.min(costs.len())].to_vec();
    let mut disjoint = 0;
    let mut dual = 0;
    for i in order {
        let row = &rows[i];
        if !row.iter().any(|&c| used[c as usize]) {
            disjoint += row.iter().map(|&c| costs[c as usize]).min().unwrap_or(0);
            for &c in row {
                used[c as usize] = true;
            }
        }
        let charge = row.iter().map(|&c| slack[c as usize]).min().unwrap_or(0);
        dual += charge;
        for &c in row {
            slack[c as usize] -= charge;
        }
    }
    disjoint.max(dual)
}

enum Fixing {
    Infeasible,
    Removed,
    Unchanged,
}

const LAGRANGIAN_MIN_ROWS: usize = 6;
const LAGRANGIAN_ITERATIONS: usize = 100;

/// Lagrangian bounds on the covering LP, first on cube counts alone, where
/// the bound rounds up, then on the full cost when the cube count is tight.
/// Prunes when a bound exceeds `bound`, and otherwise drops every column
/// whose inclusion alone would push a bound past it.
fn lagrangian_fixing(rows: &mut [Vec<u32>], costs: &[u64], bound: u64) -> Fixing {
    if rows.len() < LAGRANGIAN_MIN_ROWS {
        return Fixing::Unchanged;
    }
    let by_column = column_index(rows);
    let columns: Vec<usize> = (0..by_column.len()).filter(|&c| !by_column[c].is_empty()).collect();
    let cubes = (bound >> 32) as f64;
    let mut removed: Vec<u32> = Vec::new();

    let Some((value, reduced)) = subgradient(rows, &by_column, &columns, |_| 1.0, cubes) else {
        return Fixing::Infeasible;
    };
    let exceeds = |x: f64| ceil(x - 1e-6) > cubes;
    if exceeds(value) {
        return Fixing::Infeasible;
    }
    removed.extend(columns.iter().filter(|&&c| exceeds(value + reduced[c].max(0.0))).map(|&c| c as u32));

    if ceil(value - 1e-6) == cubes {
        // Costs as reals `cubes + literals / scale`; no cover within `bound`
        // can trade a cube for literals at this scale.
        let max_literals = columns.iter().map(|&c| costs[c] & 0xffff_ffff).max().unwrap_or(0);
        let scale = (cubes + 1.0) * max_literals as f64 + 1.0;
        let real = |c: u64| (c >> 32) as f64 + (c & 0xffff_ffff) as f64 / scale;
        let target = real(bound);
        let tolerance = 1e-9 * (1.0 + target);
        let Some((value, reduced)) = subgradient(rows, &by_column, &columns, |c| real(costs[c]), target) else {
            return Fixing::Infeasible;
        };
        if value > target + tolerance {
            return Fixing::Infeasible;
        }
        removed.extend(
            columns.iter().filter(|&&c| value + reduced[c].max(0.0) > target + tolerance).map(|&c| c as u32),
        );
    }

    if removed.is_empty() {
        return Fixing::Unchanged;
    }
    removed.sort_unstable();
    for r in rows.iter_mut() {
        r.retain(|c| removed.binary_search(c).is_err());
        if r.is_empty() {
            return Fixing::Infeasible;
        }
    }
    Fixing::Removed
}

/// Best Lagrangian value found and the reduced costs that gave it. `None`
/// once the value provably exceeds `target` by a margin the callers would
/// prune on anyway.
fn subgradient(
    rows: &[Vec<u32>],
    by_column: &ColumnIndex,
    columns: &[usize],
    cost: impl Fn(usize) -> f64,
    target: f64,
) -> Option<(f64, Vec<f64>)> {
    let mut u: Vec<f64> = rows
        .iter()
        .map(|r| r.iter().map(|&c| cost(c as usize) / by_column[c as usize].len() as f64).fold(f64::MAX, f64::min))
        .collect();
    let mut reduced = vec![0.0; by_column.len()];
    let mut best = f64::MIN;
    let mut best_reduced = reduced.clone();
    let mut step = 2.0;
    let mut stale = 0;
    let mut gradient = vec![0i64; rows.len()];
    for _ in 0..LAGRANGIAN_ITERATIONS {
        let mut value: f64 = u.iter().sum();
        for &c in columns {
            let rc = cost(c) - by_column[c].iter().map(|&i| u[i as usize]).sum::<f64>();
            reduced[c] = rc;
            if rc < 0.0 {
                value += rc;
            }
        }
        if value > best {
            best = value;
            best_reduced.copy_from_slice(&reduced);
            stale = 0;
        } else {
            stale += 1;
            if stale >= 10 {
                step /= 2.0;
                stale = 0;
            }
        }
        if best > target + 1.0 {
            return None;
        }
        let mut norm = 0i64;
        for (i, r) in rows.iter().enumerate() {
            let hits = r.iter().filter(|&&c| reduced[c as usize] < 0.0).count() as i64;
            gradient[i] = 1 - hits;
            norm += gradient[i] * gradient[i];
        }
        if norm == 0 {
            break;
        }
        let length = step * (target + 1.0 - value).max(1e-3) / norm as f64;
        for (ui, &g) in u.iter_mut().zip(&gradient) {
            *ui = (*ui + length * g as f64).max(0.0);
        }
    }
    Some((best, best_reduced))
}

fn ceil(x: f64) -> f64 {
    let t = x as i64 as f64;
    if t < x { t + 1.0 } else { t }
}

/// Splits rows into groups that share no column. Groups are ordered by
/// their smallest column.
fn split_components(rows: Vec<Vec<u32>>) -> Vec<Vec<Vec<u32>>> {
    let max = rows.iter().flat_map(|r| r.iter()).copied().max().map_or(0, |m| m as usize + 1);
    let mut parent: Vec<usize> = (0..max).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for r in &rows {
        let mut first = find(&mut parent, r[0] as usize);
        for &c in &r[1..] {
            let root = find(&mut parent, c as usize);
            if root != first {
                let (lo, hi) = if root < first { (root, first) } else { (first, root) };
                parent[hi] = lo;
                first = lo;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Vec<u32>>)> = Vec::new();
    for r in rows {
        let root = find(&mut parent, r[0] as usize);
        match groups.iter_mut().find(|(g, _)| *g == root) {
            Some((_, members)) => members.push(r),
            None => groups.push((root, vec![r])),
        }
    }
    groups.sort_by_key(|(root, _)| *root);
    groups.into_iter().map(|(_, g)| g).collect()
}
