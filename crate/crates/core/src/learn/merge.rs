use alloc::vec::Vec;

use super::{build_sets, minimize, ConflictPolicy, LabeledBits, MinimizerConfig, RuleSet, TrainStats};
use crate::binarize::BinarizationSchema;
use crate::cube::{Cover, Cube};
use crate::{heuristic, BitVector, Engine, Error, MinimizationProblem, Result};

/// One independently minimized part: its cover plus the care sets it was
/// computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct PartSummary {
    pub cover: Cover,
    pub on: Vec<BitVector>,
    pub off: Vec<BitVector>,
    pub stats: TrainStats,
}

impl PartSummary {
    pub fn width(&self) -> usize {
        self.cover.width()
    }
}

/// Resolves and minimizes one part on its own.
pub fn summarize_part(
    rows: &[LabeledBits],
    width: usize,
    policy: ConflictPolicy,
    minimizer: &MinimizerConfig,
) -> Result<PartSummary> {
    let problem = build_sets(rows, width, policy)?;
    let cover = minimize(&problem, minimizer)?;
    let mut stats = TrainStats::default();
    for row in rows {
        if row.label {
            stats.class1_rows += row.multiplicity;
        } else {
            stats.class0_rows += row.multiplicity;
        }
    }
    Ok(PartSummary { cover, on: problem.on().to_vec(), off: problem.off().to_vec(), stats })
}

/// The care sets of the union of all parts. Each part's resolved label
/// counts as one vote when parts disagree.
pub fn merge_problem(parts: &[PartSummary], policy: ConflictPolicy) -> Result<MinimizationProblem> {
    let width = common_width(parts)?;
    let votes: Vec<LabeledBits> = parts
        .iter()
        .flat_map(|p| {
            let on = p.on.iter().map(|m| LabeledBits::new(m.clone(), true));
            on.chain(p.off.iter().map(|m| LabeledBits::new(m.clone(), false)))
        })
        .collect();
    build_sets(&votes, width, policy)
}

fn common_width(parts: &[PartSummary]) -> Result<usize> {
    let first = parts.first().ok_or_else(|| Error::InvalidConfig("merge needs at least one part".into()))?;
    let width = first.width();
    for p in parts {
        if p.width() != width {
            return Err(Error::WidthMismatch { expected: width, found: p.width() });
        }
        if let Some(m) = p.on.iter().chain(&p.off).find(|m| m.width() != width) {
            return Err(Error::WidthMismatch { expected: width, found: m.width() });
        }
    }
    Ok(width)
}

/// Splits every cube around the off minterms it contains.
pub(crate) fn repair(cubes: impl IntoIterator<Item = Cube>, off: &[BitVector]) -> Result<Vec<Cube>> {
    let mut out = Vec::new();
    for cube in cubes {
        let mut pieces = alloc::vec![cube];
        for m in off {
            if !pieces.iter().any(|p| p.contains_bits(m)) {
                continue;
            }
            let mut next = Vec::with_capacity(pieces.len() + 1);
            for p in pieces {
                next.extend(p.sharp(m)?.into_vec());
            }
            pieces = next;
        }
        out.extend(pieces);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Minimizes the union of the parts. The heuristic engine starts from the
/// part covers, repaired against the global off-set; the exact engine solves
/// the global problem directly.
pub fn merge_fit(
    parts: &[PartSummary],
    schema: BinarizationSchema,
    minimizer: &MinimizerConfig,
    policy: ConflictPolicy,
) -> Result<RuleSet> {
    let problem = merge_problem(parts, policy)?;
    if problem.width() != schema.total_width() {
        return Err(Error::WidthMismatch { expected: schema.total_width(), found: problem.width() });
    }
    let cover = match minimizer.engine {
        Engine::Exact => minimize(&problem, minimizer)?,
        Engine::Heuristic => {
            let seed = repair(parts.iter().flat_map(|p| p.cover.iter().cloned()), problem.off())?;
            heuristic::minimize_items(problem.width(), &problem.on_cubes(), problem.off(), &seed, &minimizer.heuristic)?.0
        }
    };
    let stats = parts.iter().fold(TrainStats::default(), |acc, p| acc + p.stats);
    RuleSet::new(cover, schema, minimizer.engine, policy, stats)
}
