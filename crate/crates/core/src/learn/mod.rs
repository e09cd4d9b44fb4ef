//! The classifier: observed rows become an on-set and an off-set, the
//! class-1 region is minimized, and the cubes are the rules. Class 0 is the
//! default for every pattern no cube covers.

mod merge;
mod rules;
mod stream;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::binarize::{infer_schema, BinarizationSchema, BinarizeConfig, Table};
use crate::cube::Cover;
use crate::exact::{self, ExactLimits};
use crate::heuristic::{self, HeuristicConfig};
use crate::{BitVector, Engine, Error, MinimizationProblem, Result};

pub use merge::{merge_fit, merge_problem, summarize_part, PartSummary};
pub use rules::{explain_rules, parse_rules, rules_to_text};
pub use stream::{update, StreamState};

/// One distinct observed pattern with its label and how often it was seen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledBits {
    pub bits: BitVector,
    pub label: bool,
    pub multiplicity: u64,
}

impl LabeledBits {
    pub fn new(bits: BitVector, label: bool) -> Self {
        Self { bits, label, multiplicity: 1 }
    }
}

/// How a pattern observed with both labels is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ConflictPolicy {
    Error,
    /// The label with the larger count wins; a tie leaves the pattern as a
    /// don't-care.
    #[default]
    Majority,
    /// Class 1 iff the class-1 fraction is at least the threshold, in (0, 1].
    Threshold(f64),
    /// Any class-1 observation makes the pattern class 1.
    PreferPositive,
}

impl ConflictPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ConflictPolicy::Threshold(f) if !(f > 0.0 && f <= 1.0) => {
                Err(Error::InvalidConfig(format!("threshold {f} is outside (0, 1]")))
            }
            _ => Ok(()),
        }
    }

    /// `Some(label)` for a care pattern, `None` for a don't-care.
    fn resolve(&self, bits: &BitVector, zeros: u64, ones: u64) -> Result<Option<bool>> {
        if zeros == 0 || ones == 0 {
            return Ok(Some(ones > 0));
        }
        match *self {
            ConflictPolicy::Error => Err(Error::Conflict(bits.to_text())),
            ConflictPolicy::Majority => Ok(match ones.cmp(&zeros) {
                core::cmp::Ordering::Greater => Some(true),
                core::cmp::Ordering::Less => Some(false),
                core::cmp::Ordering::Equal => None,
            }),
            ConflictPolicy::Threshold(f) => Ok(Some(ones as f64 / (ones + zeros) as f64 >= f)),
            ConflictPolicy::PreferPositive => Ok(Some(true)),
        }
    }
}

impl fmt::Display for ConflictPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConflictPolicy::Error => f.write_str("error"),
            ConflictPolicy::Majority => f.write_str("majority"),
            ConflictPolicy::Threshold(t) => write!(f, "threshold:{t}"),
            ConflictPolicy::PreferPositive => f.write_str("prefer-positive"),
        }
    }
}

impl FromStr for ConflictPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let policy = match s {
            "error" => ConflictPolicy::Error,
            "majority" => ConflictPolicy::Majority,
            "prefer-positive" => ConflictPolicy::PreferPositive,
            other => match other.strip_prefix("threshold:").map(str::parse::<f64>) {
                Some(Ok(f)) => ConflictPolicy::Threshold(f),
                _ => return Err(Error::InvalidConfig(format!("unknown conflict policy {other:?}"))),
            },
        };
        policy.validate()?;
        Ok(policy)
    }
}

/// Splits observed patterns into on and off sets. Patterns never observed,
/// and ties under the majority policy, are left as don't-cares.
pub fn build_sets(rows: &[LabeledBits], width: usize, policy: ConflictPolicy) -> Result<MinimizationProblem> {
    policy.validate()?;
    let mut counts: BTreeMap<&BitVector, (u64, u64)> = BTreeMap::new();
    for row in rows {
        if row.bits.width() != width {
            return Err(Error::WidthMismatch { expected: width, found: row.bits.width() });
        }
        let entry = counts.entry(&row.bits).or_default();
        if row.label {
            entry.1 += row.multiplicity;
        } else {
            entry.0 += row.multiplicity;
        }
    }
    let mut on = Vec::new();
    let mut off = Vec::new();
    for (bits, (zeros, ones)) in counts {
        match policy.resolve(bits, zeros, ones)? {
            Some(true) => on.push(bits.clone()),
            Some(false) => off.push(bits.clone()),
            None => {}
        }
    }
    MinimizationProblem::new(width, on, off)
}

/// Engine choice plus the knobs of both engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MinimizerConfig {
    pub engine: Engine,
    pub exact: ExactLimits,
    pub heuristic: HeuristicConfig,
}

impl MinimizerConfig {
    pub fn with_engine(engine: Engine) -> Self {
        Self { engine, ..Default::default() }
    }
}

pub fn minimize(problem: &MinimizationProblem, config: &MinimizerConfig) -> Result<Cover> {
    match config.engine {
        Engine::Exact => exact::minimize_exact(problem, &config.exact),
        Engine::Heuristic => heuristic::minimize_heuristic(problem, &config.heuristic),
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FitConfig {
    pub binarize: BinarizeConfig,
    pub minimizer: MinimizerConfig,
    pub policy: ConflictPolicy,
}

/// Training row counts per class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrainStats {
    pub class0_rows: u64,
    pub class1_rows: u64,
}

impl core::ops::Add for TrainStats {
    type Output = TrainStats;

    fn add(self, other: TrainStats) -> TrainStats {
        TrainStats {
            class0_rows: self.class0_rows + other.class0_rows,
            class1_rows: self.class1_rows + other.class1_rows,
        }
    }
}

/// A deployable classifier: the class-1 cover plus everything needed to
/// encode raw rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSet {
    pub cover: Cover,
    pub schema: BinarizationSchema,
    pub engine: Engine,
    pub policy: ConflictPolicy,
    pub stats: TrainStats,
}

impl RuleSet {
    pub fn new(
        cover: Cover,
        schema: BinarizationSchema,
        engine: Engine,
        policy: ConflictPolicy,
        stats: TrainStats,
    ) -> Result<Self> {
        if cover.width() != schema.total_width() {
            return Err(Error::WidthMismatch { expected: schema.total_width(), found: cover.width() });
        }
        Ok(Self { cover, schema, engine, policy, stats })
    }

    /// Always 0: only the class-1 region is modelled.
    pub fn default_class(&self) -> bool {
        false
    }

    pub fn predict_bits(&self, bits: &BitVector) -> Result<bool> {
        self.cover.eval(bits)
    }

    pub fn predict(&self, header: &[alloc::string::String], row: &[alloc::string::String]) -> Result<bool> {
        self.predict_bits(&self.schema.encode_row(header, row)?)
    }

    pub fn predict_table(&self, table: &Table) -> Result<Vec<bool>> {
        let encoder = self.schema.row_encoder(&table.header)?;
        table.rows.iter().map(|row| self.cover.eval(&encoder.encode(row)?)).collect()
    }
}

/// Encodes a labelled table under `schema`.
pub fn encode_table(table: &Table, schema: &BinarizationSchema) -> Result<(Vec<LabeledBits>, TrainStats)> {
    let labels = table.labels(schema.label_column())?;
    let encoder = schema.row_encoder(&table.header)?;
    let mut stats = TrainStats::default();
    let rows = table
        .rows
        .iter()
        .zip(labels)
        .map(|(row, label)| {
            if label {
                stats.class1_rows += 1;
            } else {
                stats.class0_rows += 1;
            }
            Ok(LabeledBits::new(encoder.encode(row)?, label))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, stats))
}

pub fn fit(table: &Table, config: &FitConfig) -> Result<RuleSet> {
    let schema = infer_schema(table, &config.binarize)?;
    fit_with_schema(table, schema, config)
}

pub fn fit_with_schema(table: &Table, schema: BinarizationSchema, config: &FitConfig) -> Result<RuleSet> {
    let (rows, stats) = encode_table(table, &schema)?;
    let problem = build_sets(&rows, schema.total_width(), config.policy)?;
    let cover = minimize(&problem, &config.minimizer)?;
    RuleSet::new(cover, schema, config.minimizer.engine, config.policy, stats)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Metrics {
    pub true_positive: u64,
    pub false_positive: u64,
    pub true_negative: u64,
    pub false_negative: u64,
}

impl Metrics {
    pub fn total(&self) -> u64 {
        self.true_positive + self.false_positive + self.true_negative + self.false_negative
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.true_positive + self.true_negative, self.total())
    }

    /// 0 when nothing was predicted positive.
    pub fn precision(&self) -> f64 {
        ratio(self.true_positive, self.true_positive + self.false_positive)
    }

    /// 0 when there are no positive rows.
    pub fn recall(&self) -> f64 {
        ratio(self.true_positive, self.true_positive + self.false_negative)
    }

    pub fn record(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.true_positive += 1,
            (true, false) => self.false_positive += 1,
            (false, false) => self.true_negative += 1,
            (false, true) => self.false_negative += 1,
        }
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn evaluate(ruleset: &RuleSet, table: &Table) -> Result<Metrics> {
    if table.rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    let labels = table.labels(ruleset.schema.label_column())?;
    let predictions = ruleset.predict_table(table)?;
    let mut metrics = Metrics::default();
    for (p, a) in predictions.into_iter().zip(labels) {
        metrics.record(p, a);
    }
    Ok(metrics)
}
