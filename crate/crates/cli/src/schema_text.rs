//! Schema text: a `label<TAB>name` line, then one line per feature:
//!
//! ```text
//! name<TAB>kind<TAB>encoding<TAB>offset<TAB>width<TAB>params
//! ```
//!
//! `kind` is `binary`, `categorical` or `numeric`, with a `+missing` suffix
//! when the feature reserves a level for empty fields. `params` holds the
//! categories or cut points, comma separated. Names and categories escape
//! `\`, `,`, `#`, tab and newlines with a backslash.

use std::fmt::Write as _;

use logiclearn_core::binarize::{BinarizationSchema, Encoding, FeatureKind, FeatureSpec};

use crate::error::{CliError, Result};

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            ',' => out.push_str("\\,"),
            '#' => out.push_str("\\#"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

/// Splits on unescaped commas and undoes [`escape`] in each piece.
fn split_escaped(text: &str, line: usize) -> Result<Vec<String>> {
    let mut items = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars();
    while let Some(ch) = chars.next() {
        match ch {
            '\\' => match chars.next() {
                Some('t') => current.push('\t'),
                Some('n') => current.push('\n'),
                Some('r') => current.push('\r'),
                Some(c @ ('\\' | ',' | '#')) => current.push(c),
                _ => return Err(CliError::format(line, "bad escape")),
            },
            ',' => items.push(std::mem::take(&mut current)),
            c => current.push(c),
        }
    }
    items.push(current);
    Ok(items)
}

fn unescape(text: &str, line: usize) -> Result<String> {
    let mut parts = split_escaped(text, line)?;
    if parts.len() != 1 {
        return Err(CliError::format(line, "unescaped comma in name"));
    }
    Ok(parts.remove(0))
}

pub fn write_schema(schema: &BinarizationSchema) -> String {
    let mut out = String::new();
    writeln!(out, "label\t{}", escape(schema.label_column())).unwrap();
    for f in schema.features() {
        let (kind, params) = match &f.kind {
            FeatureKind::Binary => ("binary", String::new()),
            FeatureKind::Categorical { categories } => {
                ("categorical", categories.iter().map(|c| escape(c)).collect::<Vec<_>>().join(","))
            }
            FeatureKind::Numeric { cuts } => ("numeric", cuts.iter().map(f64::to_string).collect::<Vec<_>>().join(",")),
        };
        let suffix = if f.missing { "+missing" } else { "" };
        writeln!(out, "{}\t{kind}{suffix}\t{}\t{}\t{}\t{params}", escape(&f.name), f.encoding, f.bit_offset, f.bit_width).unwrap();
    }
    out
}

/// Parses schema text. `first_line` is the file line number of `text`'s
/// first line, for messages.
pub fn read_schema(text: &str, first_line: usize) -> Result<BinarizationSchema> {
    let mut label = None;
    let mut features = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let n = first_line + i;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            ["label", name] => {
                if label.is_some() {
                    return Err(CliError::format(n, "repeated label line"));
                }
                label = Some(unescape(name, n)?);
            }
            [name, kind, encoding, offset, width, params] => {
                let (kind, missing) = match kind.strip_suffix("+missing") {
                    Some(k) => (k, true),
                    None => (*kind, false),
                };
                let kind = match kind {
                    "binary" if params.is_empty() => FeatureKind::Binary,
                    "categorical" => FeatureKind::Categorical {
                        categories: if params.is_empty() { Vec::new() } else { split_escaped(params, n)? },
                    },
                    "numeric" => FeatureKind::Numeric {
                        cuts: if params.is_empty() {
                            Vec::new()
                        } else {
                            params
                                .split(',')
                                .map(|c| c.parse::<f64>().map_err(|_| CliError::format(n, format!("bad cut {c:?}"))))
                                .collect::<Result<_>>()?
                        },
                    },
                    other => return Err(CliError::format(n, format!("unknown feature kind {other:?}"))),
                };
                let parsed: Encoding =
                    encoding.parse().map_err(|_| CliError::format(n, format!("unknown encoding {encoding:?}")))?;
                let mut spec = FeatureSpec::new(unescape(name, n)?, kind, parsed, missing)?;
                if spec.encoding != parsed {
                    return Err(CliError::format(n, "binary features use level-binary encoding"));
                }
                spec.bit_offset = offset.parse().map_err(|_| CliError::format(n, format!("bad offset {offset:?}")))?;
                let width: usize = width.parse().map_err(|_| CliError::format(n, format!("bad width {width:?}")))?;
                if width != spec.bit_width {
                    return Err(CliError::format(n, format!("width {width} does not match the encoding ({})", spec.bit_width)));
                }
                features.push(spec);
            }
            _ => return Err(CliError::format(n, "expected 6 tab-separated fields")),
        }
    }
    let label = label.ok_or_else(|| CliError::format(first_line, "missing label line"))?;
    Ok(BinarizationSchema::from_laid_out(features, label)?)
}
