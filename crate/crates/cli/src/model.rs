//! Model text: schema, cover and metadata sections.
//!
//! ```text
//! #schema
//! <schema text>
//! #cover
//! <PLA>
//! #meta
//! key=value
//! ```

use std::collections::BTreeMap;

use logiclearn_core::learn::{RuleSet, TrainStats};

use crate::error::{CliError, Result};
use crate::pla::{read_pla, write_pla_cover};
use crate::schema_text::{read_schema, write_schema};

pub fn write_model(ruleset: &RuleSet) -> String {
    let mut out = String::from("#schema\n");
    out.push_str(&write_schema(&ruleset.schema));
    out.push_str("#cover\n");
    out.push_str(&write_pla_cover(&ruleset.cover, None));
    out.push_str("#meta\n");
    out.push_str(&format!("engine={}\n", ruleset.engine));
    out.push_str(&format!("policy={}\n", ruleset.policy));
    out.push_str("default_class=0\n");
    out.push_str(&format!("class0_rows={}\n", ruleset.stats.class0_rows));
    out.push_str(&format!("class1_rows={}\n", ruleset.stats.class1_rows));
    out
}

pub fn read_model(text: &str) -> Result<RuleSet> {
    let mut sections: BTreeMap<&str, (usize, String)> = BTreeMap::new();
    let mut current: Option<&str> = None;
    for (i, line) in text.lines().enumerate() {
        match line {
            "#schema" | "#cover" | "#meta" => {
                if sections.insert(line, (i + 2, String::new())).is_some() {
                    return Err(CliError::format(i + 1, format!("repeated section {line}")));
                }
                current = Some(line);
            }
            _ => match current {
                Some(name) => {
                    let body = &mut sections.get_mut(name).expect("section exists").1;
                    body.push_str(line);
                    body.push('\n');
                }
                None if line.trim().is_empty() => {}
                None => return Err(CliError::format(i + 1, "text before the first section")),
            },
        }
    }
    let section = |name: &str| sections.get(name).ok_or_else(|| CliError::Data(format!("model is missing the {name} section")));

    let (schema_line, schema_text) = section("#schema")?;
    let schema = read_schema(schema_text, *schema_line)?;
    let (cover_line, cover_text) = section("#cover")?;
    let pla = read_pla(cover_text).map_err(|e| match e {
        CliError::Format { line, message } => CliError::format(line + cover_line - 1, message),
        other => other,
    })?;
    if !pla.off.is_empty() {
        return Err(CliError::Data("model cover has output-0 lines".into()));
    }
    let cover = pla.on_cover()?;

    let (meta_line, meta_text) = section("#meta")?;
    let mut meta = BTreeMap::new();
    for (i, line) in meta_text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::format(meta_line + i, "expected key=value"))?;
        meta.insert(k.trim(), v.trim());
    }
    let get = |key: &str| meta.get(key).copied().ok_or_else(|| CliError::Data(format!("model meta is missing {key}")));
    let count = |key: &str| -> Result<u64> {
        get(key)?.parse().map_err(|_| CliError::Data(format!("model meta {key} is not a count")))
    };
    if get("default_class")? != "0" {
        return Err(CliError::Data("only default class 0 is supported".into()));
    }
    let stats = TrainStats { class0_rows: count("class0_rows")?, class1_rows: count("class1_rows")? };
    Ok(RuleSet::new(cover, schema, get("engine")?.parse()?, get("policy")?.parse()?, stats)?)
}
