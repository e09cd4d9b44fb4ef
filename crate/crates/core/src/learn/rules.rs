use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Reverse;

use super::RuleSet;
use crate::binarize::BinarizationSchema;
use crate::cube::{Cover, Cube, Literal};
use crate::{Error, Result};

const ALWAYS_ZERO: &str = "always class 0";
const THEN: &str = " THEN class 1";

/// Largest cubes first, then textual order.
fn rule_order(cover: &Cover) -> Vec<&Cube> {
    let mut cubes: Vec<&Cube> = cover.iter().collect();
    cubes.sort_by_key(|c| (Reverse(c.count_minterms()), *c));
    cubes
}

/// Cared positions from the most significant down.
fn literals(cube: &Cube) -> impl Iterator<Item = (usize, bool)> + '_ {
    (0..cube.width()).rev().filter_map(|p| match cube.literal(p) {
        Literal::Zero => Some((p, false)),
        Literal::One => Some((p, true)),
        Literal::Free => None,
    })
}

fn render(cover: &Cover, mut condition: impl FnMut(usize, bool) -> String) -> Vec<String> {
    if cover.is_empty() {
        return alloc::vec![String::from(ALWAYS_ZERO)];
    }
    rule_order(cover)
        .into_iter()
        .map(|cube| {
            let conditions: Vec<String> = literals(cube).map(|(p, v)| condition(p, v)).collect();
            if conditions.is_empty() {
                format!("IF TRUE{THEN}")
            } else {
                format!("IF {}{THEN}", conditions.join(" AND "))
            }
        })
        .collect()
}

/// One `IF label=v AND ... THEN class 1` line per cube, or a single
/// `always class 0` line for the empty cover. [`parse_rules`] inverts it.
pub fn rules_to_text(ruleset: &RuleSet) -> Vec<String> {
    render(&ruleset.cover, |p, v| {
        let label = ruleset.schema.bit_label(p).expect("cover width matches schema");
        format!("{label}={}", u8::from(v))
    })
}

/// Like [`rules_to_text`] but with each condition spelled out in terms of the
/// raw feature values. Meant for reading, not parsing.
pub fn explain_rules(ruleset: &RuleSet) -> Vec<String> {
    render(&ruleset.cover, |p, v| {
        let text = ruleset.schema.describe_bit(p).expect("cover width matches schema");
        if v {
            format!("({text})")
        } else {
            format!("NOT ({text})")
        }
    })
}

/// Rebuilds a cover from the output of [`rules_to_text`].
pub fn parse_rules<S: AsRef<str>>(schema: &BinarizationSchema, lines: &[S]) -> Result<Cover> {
    let width = schema.total_width();
    let positions: BTreeMap<String, usize> = (0..width)
        .map(|p| schema.bit_label(p).map(|l| (l, p)))
        .collect::<Result<_>>()?;
    let mut cover = Cover::new(width);
    for line in lines {
        let line = line.as_ref().trim();
        if line.is_empty() || line == ALWAYS_ZERO {
            continue;
        }
        let body = line
            .strip_prefix("IF ")
            .and_then(|l| l.strip_suffix(THEN))
            .ok_or_else(|| Error::RuleParse(String::from(line)))?;
        let mut cube = Cube::universe(width);
        if body != "TRUE" {
            for condition in body.split(" AND ") {
                let (label, value) = condition.rsplit_once('=').ok_or_else(|| Error::RuleParse(String::from(line)))?;
                let p = *positions.get(label).ok_or_else(|| Error::RuleParse(String::from(line)))?;
                let literal = match value {
                    "0" => Literal::Zero,
                    "1" => Literal::One,
                    _ => return Err(Error::RuleParse(String::from(line))),
                };
                if cube.literal(p) != Literal::Free {
                    return Err(Error::RuleParse(String::from(line)));
                }
                cube.set_literal(p, literal);
            }
        }
        cover.insert_unchecked(cube);
    }
    Ok(cover)
}
