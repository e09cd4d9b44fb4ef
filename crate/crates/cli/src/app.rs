use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::thread;

use clap::{Args, Parser, Subcommand};
use logiclearn_core::binarize::{infer_schema, BinarizationSchema, BinarizeConfig, CutStrategy, Encoding, Table};
use logiclearn_core::exact::ExactLimits;
use logiclearn_core::heuristic::HeuristicConfig;
use logiclearn_core::learn::{
    self, build_sets, encode_table, explain_rules, merge_fit, rules_to_text, summarize_part, ConflictPolicy,
    MinimizerConfig, PartSummary, StreamState,
};
use logiclearn_core::synth::{generate_planted, PlantedSpec};
use logiclearn_core::{Cube, Engine};

use crate::config::Config;
use crate::dataset::{read_table, write_table};
use crate::error::{CliError, Result, EXIT_OK, EXIT_USAGE};
use crate::model::{read_model, write_model};
use crate::pla::{read_pla, write_pla_cover, write_pla_cubes, write_pla_problem, DEFAULT_EXPANSION_LIMIT};
use crate::schema_text::{read_schema, write_schema};

const CONFIG_KEYS: &[&str] = &[
    "delimiter",
    "label",
    "levels",
    "encoding",
    "cuts",
    "missing-category",
    "policy",
    "engine",
    "max-primes",
    "max-implicants",
    "max-nodes",
    "max-iterations",
    "max-expansion",
    "parts",
];

#[derive(Parser)]
#[command(name = "logiclearn", version, about = "Learn readable classification rules by two-level logic minimization")]
struct Cli {
    /// File of `key = value` defaults; keys are long flag names and flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a dataset as bits and write the resolved on/off sets as PLA.
    Binarize {
        #[command(flatten)]
        io: DataIo,
        #[command(flatten)]
        encode: EncodeOpts,
        #[arg(long)]
        policy: Option<ConflictPolicy>,
        /// Also write the schema used.
        #[arg(long, value_name = "FILE")]
        schema_out: Option<PathBuf>,
    },
    /// Minimize the on-set of a PLA file and write the cover as PLA.
    Minimize {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[command(flatten)]
        min: MinimizeOpts,
        /// Largest number of minterms the input may expand to.
        #[arg(long)]
        max_expansion: Option<u128>,
    },
    /// Train a model on a labelled dataset.
    Fit {
        #[command(flatten)]
        io: DataIo,
        #[command(flatten)]
        encode: EncodeOpts,
        #[command(flatten)]
        min: MinimizeOpts,
        #[arg(long)]
        policy: Option<ConflictPolicy>,
        /// Split rows into this many contiguous parts, minimize them in
        /// parallel and merge.
        #[arg(long)]
        parts: Option<usize>,
        /// Print the rules to stdout (needs --out for the model).
        #[arg(long)]
        rules: bool,
        /// Print the rules in terms of raw feature values (needs --out).
        #[arg(long)]
        explain: bool,
    },
    /// Append a `prediction` column to a dataset.
    Predict {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[command(flatten)]
        io: DataIo,
    },
    /// Score a model on a labelled dataset.
    Eval {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[command(flatten)]
        io: DataIo,
    },
    /// Train on several datasets independently and merge the results.
    Merge {
        /// One dataset per part.
        #[arg(long = "in", value_name = "FILE", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long)]
        delimiter: Option<Delimiter>,
        #[command(flatten)]
        encode: EncodeOpts,
        #[command(flatten)]
        min: MinimizeOpts,
        #[arg(long)]
        policy: Option<ConflictPolicy>,
    },
    /// Fold batches into a persisted cover and off-set, then write a model.
    Stream {
        /// Fixed schema shared by every batch.
        #[arg(long, value_name = "FILE")]
        schema: PathBuf,
        /// State file (PLA); read if present, rewritten afterwards.
        #[arg(long, value_name = "FILE")]
        state: Option<PathBuf>,
        /// Batches, applied in order.
        #[arg(long = "in", value_name = "FILE", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long)]
        delimiter: Option<Delimiter>,
        #[command(flatten)]
        min: MinimizeOpts,
        #[arg(long)]
        policy: Option<ConflictPolicy>,
    },
    /// Generate a dataset with planted class-1 rules.
    Gen {
        #[arg(long, required = true)]
        seed: u64,
        /// Planted cube over f1..fW, f1 leftmost; repeatable.
        #[arg(long, value_name = "CUBE", required = true)]
        planted: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        rows: usize,
        #[arg(long, default_value_t = 0.02)]
        class1_fraction: f64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long)]
        delimiter: Option<Delimiter>,
    },
}

#[derive(Args)]
struct DataIo {
    /// Dataset path, or `-` for stdin.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Field delimiter: one ASCII character or `tab`.
    #[arg(long)]
    delimiter: Option<Delimiter>,
}

#[derive(Args)]
struct EncodeOpts {
    /// Use this schema instead of inferring one.
    #[arg(long, value_name = "FILE")]
    schema: Option<PathBuf>,
    #[arg(long)]
    label: Option<String>,
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    encoding: Option<Encoding>,
    #[arg(long)]
    cuts: Option<CutStrategy>,
    #[arg(long)]
    missing_category: bool,
}

#[derive(Args)]
struct MinimizeOpts {
    #[arg(long)]
    engine: Option<Engine>,
    #[arg(long)]
    max_primes: Option<usize>,
    #[arg(long)]
    max_implicants: Option<usize>,
    #[arg(long)]
    max_nodes: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
struct Delimiter(u8);

impl FromStr for Delimiter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "tab" | "\\t" | "\t" => Ok(Delimiter(b'\t')),
            _ if s.len() == 1 && s.is_ascii() => Ok(Delimiter(s.as_bytes()[0])),
            _ => Err(format!("delimiter must be one ASCII character or `tab`, not {s:?}")),
        }
    }
}

/// Runs the tool on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => Config::parse(&read_text(path)?)?,
        None => Config::default(),
    };
    config.check_keys(CONFIG_KEYS)?;
    match cli.command {
        Command::Binarize { io, encode, policy, schema_out } => {
            let table = load_table(&io.input, delimiter(&config, io.delimiter)?)?;
            let schema = schema_for(&config, &encode, &table)?;
            let policy = config.pick_or(policy, "policy", ConflictPolicy::default())?;
            let (rows, _) = encode_table(&table, &schema)?;
            let problem = build_sets(&rows, schema.total_width(), policy)?;
            if let Some(path) = schema_out {
                write_text(Some(&path), &write_schema(&schema))?;
            }
            write_text(io.out.as_deref(), &write_pla_problem(&problem, Some(&bit_labels(&schema))))
        }
        Command::Minimize { input, out, min, max_expansion } => {
            let file = read_pla(&read_text(&input)?)?;
            let limit = config.pick_or(max_expansion, "max-expansion", DEFAULT_EXPANSION_LIMIT)?;
            let problem = file.to_problem(limit)?;
            let cover = learn::minimize(&problem, &minimizer(&config, &min)?)?;
            write_text(out.as_deref(), &write_pla_cover(&cover, file.input_labels.as_deref()))
        }
        Command::Fit { io, encode, min, policy, parts, rules, explain } => {
            if (rules || explain) && io.out.is_none() {
                return Err(CliError::Usage("--rules and --explain print to stdout, so the model needs --out".into()));
            }
            let table = load_table(&io.input, delimiter(&config, io.delimiter)?)?;
            let schema = schema_for(&config, &encode, &table)?;
            let policy = config.pick_or(policy, "policy", ConflictPolicy::default())?;
            let minimizer = minimizer(&config, &min)?;
            let parts = config.pick_or(parts, "parts", 1)?;
            if parts == 0 {
                return Err(CliError::Usage("--parts must be positive".into()));
            }
            let ruleset = if parts == 1 {
                let (rows, stats) = encode_table(&table, &schema)?;
                let problem = build_sets(&rows, schema.total_width(), policy)?;
                let cover = learn::minimize(&problem, &minimizer)?;
                learn::RuleSet::new(cover, schema, minimizer.engine, policy, stats)?
            } else {
                let chunk = table.rows.len().div_ceil(parts).max(1);
                let tables: Vec<Table> = table
                    .rows
                    .chunks(chunk)
                    .map(|rows| Table { header: table.header.clone(), rows: rows.to_vec() })
                    .collect();
                let summaries = summarize_parallel(&tables, &schema, policy, &minimizer)?;
                merge_fit(&summaries, schema, &minimizer, policy)?
            };
            write_text(io.out.as_deref(), &write_model(&ruleset))?;
            let mut lines = Vec::new();
            if rules {
                lines.extend(rules_to_text(&ruleset));
            }
            if explain {
                lines.extend(explain_rules(&ruleset));
            }
            if !lines.is_empty() {
                write_text(None, &(lines.join("\n") + "\n"))?;
            }
            Ok(())
        }
        Command::Predict { model, io } => {
            let ruleset = read_model(&read_text(&model)?)?;
            let mut table = load_table(&io.input, delimiter(&config, io.delimiter)?)?;
            let predictions = ruleset.predict_table(&table)?;
            table.header.push("prediction".into());
            for (row, p) in table.rows.iter_mut().zip(predictions) {
                row.push(u8::from(p).to_string());
            }
            let mut buf = Vec::new();
            write_table(&mut buf, &table, delimiter(&config, io.delimiter)?)?;
            write_bytes(io.out.as_deref(), &buf)
        }
        Command::Eval { model, io } => {
            let ruleset = read_model(&read_text(&model)?)?;
            let table = load_table(&io.input, delimiter(&config, io.delimiter)?)?;
            let m = learn::evaluate(&ruleset, &table)?;
            let text = format!(
                "rows={}\naccuracy={}\nprecision={}\nrecall={}\ntrue_positive={}\nfalse_positive={}\ntrue_negative={}\nfalse_negative={}\n",
                m.total(),
                m.accuracy(),
                m.precision(),
                m.recall(),
                m.true_positive,
                m.false_positive,
                m.true_negative,
                m.false_negative
            );
            write_text(io.out.as_deref(), &text)
        }
        Command::Merge { inputs, out, delimiter: delim, encode, min, policy } => {
            let delim = delimiter(&config, delim)?;
            let tables = inputs.iter().map(|p| load_table(p, delim)).collect::<Result<Vec<_>>>()?;
            let schema = match &encode.schema {
                Some(_) => schema_for(&config, &encode, &tables[0])?,
                None => {
                    let header = &tables[0].header;
                    if let Some(t) = tables.iter().find(|t| t.header != *header) {
                        return Err(CliError::Data(format!("parts have different headers: {:?} and {:?}", header, t.header)));
                    }
                    let all = Table { header: header.clone(), rows: tables.iter().flat_map(|t| t.rows.clone()).collect() };
                    schema_for(&config, &encode, &all)?
                }
            };
            let policy = config.pick_or(policy, "policy", ConflictPolicy::default())?;
            let minimizer = minimizer(&config, &min)?;
            let summaries = summarize_parallel(&tables, &schema, policy, &minimizer)?;
            let ruleset = merge_fit(&summaries, schema, &minimizer, policy)?;
            write_text(out.as_deref(), &write_model(&ruleset))
        }
        Command::Stream { schema, state, inputs, out, delimiter: delim, min, policy } => {
            let delim = delimiter(&config, delim)?;
            let schema = read_schema(&read_text(&schema)?, 1)?;
            let policy = config.pick_or(policy, "policy", ConflictPolicy::default())?;
            let minimizer = minimizer(&config, &min)?;
            let width = schema.total_width();
            let mut current = match &state {
                Some(path) if path.exists() => load_state(path, width)?,
                _ => StreamState::new(width),
            };
            let mut stats = learn::TrainStats::default();
            for path in &inputs {
                let (rows, batch) = encode_table(&load_table(path, delim)?, &schema)?;
                current = learn::update(&current, &rows, &minimizer, policy)?;
                stats = stats + batch;
            }
            if let Some(path) = &state {
                let text = write_pla_cubes(
                    width,
                    current.cover.iter().cloned(),
                    current.off.iter().map(Cube::from_minterm),
                    Some(&bit_labels(&schema)),
                );
                write_text(Some(path), &text)?;
            }
            let ruleset = learn::RuleSet::new(current.cover, schema, minimizer.engine, policy, stats)?;
            write_text(out.as_deref(), &write_model(&ruleset))
        }
        Command::Gen { seed, planted, rows, class1_fraction, out, delimiter: delim } => {
            let rules = planted.iter().map(|t| Cube::parse(t)).collect::<std::result::Result<Vec<_>, _>>()?;
            let width = rules[0].width();
            let spec = PlantedSpec { width, rules, n_rows: rows, class1_fraction, seed };
            let table = generate_planted(&spec)?;
            let mut buf = Vec::new();
            write_table(&mut buf, &table, delimiter(&config, delim)?)?;
            write_bytes(out.as_deref(), &buf)
        }
    }
}

fn delimiter(config: &Config, flag: Option<Delimiter>) -> Result<u8> {
    Ok(config.pick_or(flag, "delimiter", Delimiter(b','))?.0)
}

fn schema_for(config: &Config, opts: &EncodeOpts, table: &Table) -> Result<BinarizationSchema> {
    if let Some(path) = &opts.schema {
        return read_schema(&read_text(path)?, 1);
    }
    let defaults = BinarizeConfig::default();
    let binarize = BinarizeConfig {
        levels: config.pick_or(opts.levels, "levels", defaults.levels)?,
        encoding: config.pick_or(opts.encoding, "encoding", defaults.encoding)?,
        label_column: config.pick_or(opts.label.clone(), "label", defaults.label_column)?,
        cuts: config.pick_or(opts.cuts, "cuts", defaults.cuts)?,
        missing_category: config.flag(opts.missing_category, "missing-category")?,
    };
    Ok(infer_schema(table, &binarize)?)
}

fn minimizer(config: &Config, opts: &MinimizeOpts) -> Result<MinimizerConfig> {
    let exact = ExactLimits::default();
    let heuristic = HeuristicConfig::default();
    Ok(MinimizerConfig {
        engine: config.pick_or(opts.engine, "engine", Engine::default())?,
        exact: ExactLimits {
            max_primes: config.pick_or(opts.max_primes, "max-primes", exact.max_primes)?,
            max_implicants: config.pick_or(opts.max_implicants, "max-implicants", exact.max_implicants)?,
            max_nodes: config.pick_or(opts.max_nodes, "max-nodes", exact.max_nodes)?,
        },
        heuristic: HeuristicConfig {
            max_iterations: config.pick_or(opts.max_iterations, "max-iterations", heuristic.max_iterations)?,
        },
    })
}

/// Minimizes every part on its own thread; results keep part order.
fn summarize_parallel(
    tables: &[Table],
    schema: &BinarizationSchema,
    policy: ConflictPolicy,
    minimizer: &MinimizerConfig,
) -> Result<Vec<PartSummary>> {
    thread::scope(|scope| {
        let handles: Vec<_> = tables
            .iter()
            .map(|table| {
                scope.spawn(move || -> Result<PartSummary> {
                    let (rows, _) = encode_table(table, schema)?;
                    let mut part = summarize_part(&rows, schema.total_width(), policy, minimizer)?;
                    part.stats = encode_table(table, schema)?.1;
                    Ok(part)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("part worker panicked")).collect()
    })
}

fn load_state(path: &Path, width: usize) -> Result<StreamState> {
    let file = read_pla(&read_text(path)?)?;
    if file.width != width {
        return Err(CliError::Data(format!("state has width {}, schema has {width}", file.width)));
    }
    let mut off = Vec::with_capacity(file.off.len());
    for cube in &file.off {
        if !cube.is_minterm() {
            return Err(CliError::Data(format!("state off line {cube} is not a minterm")));
        }
        off.push(cube.low_minterm());
    }
    off.sort_unstable();
    Ok(StreamState { cover: file.on_cover()?, off })
}

fn bit_labels(schema: &BinarizationSchema) -> Vec<String> {
    (0..schema.total_width()).rev().map(|p| schema.bit_label(p).expect("position in range")).collect()
}

fn load_table(path: &Path, delimiter: u8) -> Result<Table> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(|e| CliError::io(path, e))?;
        return read_table(buf.as_slice(), delimiter);
    }
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_table(io::BufReader::new(file), delimiter)
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    write_bytes(path, text.as_bytes())
}

fn write_bytes(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
