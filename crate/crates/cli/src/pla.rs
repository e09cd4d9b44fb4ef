//! Single-output Berkeley PLA files.

use std::fmt::Write as _;

use logiclearn_core::{BitVector, Cover, Cube, MinimizationProblem};

use crate::error::{CliError, Result};

/// Largest number of minterms a file may expand to when read as a problem.
pub const DEFAULT_EXPANSION_LIMIT: u128 = 1 << 22;

/// The cube lines of a PLA file, not yet expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaFile {
    pub width: usize,
    pub input_labels: Option<Vec<String>>,
    pub output_label: Option<String>,
    /// Cubes with output `1`.
    pub on: Vec<Cube>,
    /// Cubes with output `0`.
    pub off: Vec<Cube>,
}

impl PlaFile {
    /// Expands every line to minterms. `-` lines were already dropped.
    pub fn to_problem(&self, limit: u128) -> Result<MinimizationProblem> {
        let total: u128 = self.on.iter().chain(&self.off).map(Cube::count_minterms).fold(0, u128::saturating_add);
        if total > limit {
            return Err(CliError::Data(format!("cube lines expand to {total} minterms, above the limit of {limit}")));
        }
        let expand = |cubes: &[Cube]| -> Vec<BitVector> { cubes.iter().flat_map(|c| c.minterms().collect::<Vec<_>>()).collect() };
        Ok(MinimizationProblem::new(self.width, expand(&self.on), expand(&self.off))?)
    }

    /// The on lines as a cover.
    pub fn on_cover(&self) -> Result<Cover> {
        Ok(Cover::from_cubes(self.width, self.on.iter().cloned())?)
    }
}

pub fn read_pla(text: &str) -> Result<PlaFile> {
    let mut width: Option<usize> = None;
    let mut input_labels = None;
    let mut output_label = None;
    let mut declared: Option<(usize, usize)> = None;
    let mut lines_seen = 0usize;
    let mut on = Vec::new();
    let mut off = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(directive) = line.strip_prefix('.') {
            let mut parts = directive.split_whitespace();
            let key = parts.next().unwrap_or("");
            let args: Vec<&str> = parts.collect();
            match key {
                "i" => {
                    if width.is_some() {
                        return Err(CliError::format(n, "repeated .i"));
                    }
                    width = Some(single_number(&args, n, ".i")?);
                }
                "o" => {
                    let outputs = single_number(&args, n, ".o")?;
                    if outputs != 1 {
                        return Err(CliError::format(n, format!("{outputs} outputs; only single-output files are supported")));
                    }
                }
                "ilb" => input_labels = Some(args.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
                "ob" => match args.as_slice() {
                    [label] => output_label = Some(label.to_string()),
                    _ => return Err(CliError::format(n, "expected one output label")),
                },
                "p" => declared = Some((single_number(&args, n, ".p")?, n)),
                "type" => match args.as_slice() {
                    ["f" | "fr" | "fd" | "fdr"] => {}
                    _ => return Err(CliError::format(n, format!("unsupported .type {}", args.join(" ")))),
                },
                "e" | "end" => break,
                other => return Err(CliError::format(n, format!("unknown directive .{other}"))),
            }
            continue;
        }
        let w = width.ok_or_else(|| CliError::format(n, "cube line before .i"))?;
        let compact: String = line.split_whitespace().collect();
        if compact.len() != w + 1 {
            return Err(CliError::format(n, format!("expected {w} inputs and 1 output, found {:?}", line)));
        }
        let (input, output) = compact.split_at(w);
        let cube = Cube::parse(input).map_err(|_| CliError::format(n, format!("bad character in {input:?}")))?;
        lines_seen += 1;
        match output {
            "1" => on.push(cube),
            "0" => off.push(cube),
            "-" | "2" => {}
            other => return Err(CliError::format(n, format!("bad output {other:?}"))),
        }
    }
    let width = width.ok_or_else(|| CliError::format(0, "missing .i"))?;
    if let Some((p, n)) = declared {
        if p != lines_seen {
            return Err(CliError::format(n, format!(".p declares {p} cubes but the file has {lines_seen}")));
        }
    }
    if let Some(labels) = &input_labels {
        if labels.len() != width {
            return Err(CliError::Data(format!(".ilb names {} inputs, .i declares {width}", labels.len())));
        }
    }
    Ok(PlaFile { width, input_labels, output_label, on, off })
}

fn single_number(args: &[&str], line: usize, what: &str) -> Result<usize> {
    match args {
        [value] => value.parse().map_err(|_| CliError::format(line, format!("{what} needs a number, found {value:?}"))),
        _ => Err(CliError::format(line, format!("{what} needs exactly one number"))),
    }
}

/// Labels without whitespace, as `.ilb` needs.
fn label_token(label: &str) -> String {
    label.split_whitespace().collect::<Vec<_>>().join("_")
}

fn header(out: &mut String, width: usize, labels: Option<&[String]>, count: usize) {
    writeln!(out, ".i {width}").unwrap();
    out.push_str(".o 1\n");
    if let Some(labels) = labels {
        let tokens: Vec<String> = labels.iter().map(|l| label_token(l)).collect();
        writeln!(out, ".ilb {}", tokens.join(" ")).unwrap();
    }
    out.push_str(".type fr\n");
    writeln!(out, ".p {count}").unwrap();
}

/// Cover cubes as output-1 lines in textual order.
pub fn write_pla_cover(cover: &Cover, labels: Option<&[String]>) -> String {
    let mut out = String::new();
    header(&mut out, cover.width(), labels, cover.len());
    for cube in cover {
        writeln!(out, "{cube} 1").unwrap();
    }
    out.push_str(".e\n");
    out
}

/// On minterms as output-1 lines, then off minterms as output-0 lines, each
/// in ascending order.
pub fn write_pla_problem(problem: &MinimizationProblem, labels: Option<&[String]>) -> String {
    write_pla_cubes(problem.width(), problem.on().iter().map(Cube::from_minterm), problem.off().iter().map(Cube::from_minterm), labels)
}

/// Arbitrary on and off cubes, each group sorted textually.
pub fn write_pla_cubes(
    width: usize,
    on: impl IntoIterator<Item = Cube>,
    off: impl IntoIterator<Item = Cube>,
    labels: Option<&[String]>,
) -> String {
    let mut on: Vec<Cube> = on.into_iter().collect();
    let mut off: Vec<Cube> = off.into_iter().collect();
    on.sort_unstable();
    off.sort_unstable();
    let mut out = String::new();
    header(&mut out, width, labels, on.len() + off.len());
    for cube in &on {
        writeln!(out, "{cube} 1").unwrap();
    }
    for cube in &off {
        writeln!(out, "{cube} 0").unwrap();
    }
    out.push_str(".e\n");
    out
}
