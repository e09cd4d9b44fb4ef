//! Turning raw table rows into bit vectors, and bit positions back into
//! readable conditions.
//!
//! Each feature occupies a contiguous block of bits. The first feature of the
//! schema takes the most significant block, so cube text reads left to right
//! in column order. Within a level-binary block the level code is plain
//! unsigned binary, most significant bit first.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{BitVector, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureKind {
    /// A 0/1 column, encoded as itself in one bit.
    Binary,
    Categorical { categories: Vec<String> },
    /// Strictly ascending cut points; `cuts.len() + 1` levels.
    Numeric { cuts: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Encoding {
    #[default]
    LevelBinary,
    OneHot,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::LevelBinary => "level-binary",
            Encoding::OneHot => "one-hot",
        })
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "level-binary" => Ok(Encoding::LevelBinary),
            "one-hot" => Ok(Encoding::OneHot),
            other => Err(Error::InvalidConfig(format!("unknown encoding {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CutStrategy {
    /// Equal-frequency cuts at the `k / levels` quantiles (linear
    /// interpolation between order statistics).
    #[default]
    Quantile,
    /// Equal-width cuts between the observed minimum and maximum.
    EqualWidth,
}

impl FromStr for CutStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantile" => Ok(CutStrategy::Quantile),
            "equal-width" => Ok(CutStrategy::EqualWidth),
            other => Err(Error::InvalidConfig(format!("unknown cut strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
    pub encoding: Encoding,
    pub bit_offset: usize,
    pub bit_width: usize,
    /// Reserves one extra trailing level (or category) for empty fields.
    pub missing: bool,
}

impl FeatureSpec {
    /// Builds a spec with the bit width implied by kind and encoding. The
    /// offset is assigned when the spec is placed in a schema.
    pub fn new(name: impl Into<String>, kind: FeatureKind, encoding: Encoding, missing: bool) -> Result<Self> {
        let name = name.into();
        let encoding = if kind == FeatureKind::Binary && !missing { Encoding::LevelBinary } else { encoding };
        match &kind {
            FeatureKind::Numeric { cuts } => {
                if cuts.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(core::cmp::Ordering::Less)) || cuts.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidSchema(format!("feature {name:?}: cuts must be finite and strictly ascending")));
                }
            }
            FeatureKind::Categorical { categories } => {
                if categories.is_empty() && !missing {
                    return Err(Error::EmptyFeature(name));
                }
                let mut sorted: Vec<&String> = categories.iter().collect();
                sorted.sort();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::InvalidSchema(format!("feature {name:?}: duplicate category")));
                }
            }
            FeatureKind::Binary if missing => {
                return Err(Error::InvalidSchema(format!(
                    "feature {name:?}: binary features cannot reserve a missing level"
                )));
            }
            FeatureKind::Binary => {}
        }
        let mut spec = Self { name, kind, encoding, bit_offset: 0, bit_width: 0, missing };
        spec.bit_width = spec.implied_width();
        Ok(spec)
    }

    /// Number of distinct level codes, including the missing level.
    pub fn levels(&self) -> usize {
        let base = match &self.kind {
            FeatureKind::Binary => 2,
            FeatureKind::Categorical { categories } => categories.len(),
            FeatureKind::Numeric { cuts } => cuts.len() + 1,
        };
        base + usize::from(self.missing)
    }

    fn implied_width(&self) -> usize {
        match (&self.kind, self.encoding) {
            (FeatureKind::Binary, _) => 1,
            (_, Encoding::LevelBinary) => level_bits(self.levels()),
            (_, Encoding::OneHot) => self.levels(),
        }
    }

    /// Level code of a raw field value.
    pub fn level_of(&self, raw: &str) -> Result<usize> {
        let value = raw.trim();
        if value.is_empty() {
            return if self.missing {
                Ok(self.levels() - 1)
            } else {
                Err(Error::MissingValue { column: self.name.clone() })
            };
        }
        match &self.kind {
            FeatureKind::Binary => match parse_number(value) {
                Some(0.0) => Ok(0),
                Some(1.0) => Ok(1),
                Some(_) => Err(Error::UnseenCategory { feature: self.name.clone(), value: value.into() }),
                None => Err(Error::NotNumeric { feature: self.name.clone(), value: value.into() }),
            },
            FeatureKind::Categorical { categories } => categories
                .iter()
                .position(|c| c == value)
                .ok_or_else(|| Error::UnseenCategory { feature: self.name.clone(), value: value.into() }),
            FeatureKind::Numeric { cuts } => match parse_number(value) {
                Some(v) => Ok(discretize(v, cuts)),
                None => Err(Error::NotNumeric { feature: self.name.clone(), value: value.into() }),
            },
        }
    }

    /// Bit pattern of a level code under this feature's encoding.
    pub fn encode_level(&self, level: usize) -> Result<BitVector> {
        match (&self.kind, self.encoding) {
            (FeatureKind::Binary, _) | (_, Encoding::LevelBinary) => encode_integer(level as u64, self.bit_width),
            (_, Encoding::OneHot) => one_hot(level, self.bit_width),
        }
    }

    /// Short name of one bit of this feature, used in rule text.
    fn bit_label(&self, local: usize) -> String {
        match (&self.kind, self.encoding) {
            (FeatureKind::Binary, _) => self.name.clone(),
            (_, Encoding::LevelBinary) => format!("{}.b_{}", self.name, local + 1),
            (FeatureKind::Categorical { categories }, Encoding::OneHot) => match categories.get(local) {
                Some(c) => format!("{}[{}]", self.name, c),
                None => format!("{}[<missing>]", self.name),
            },
            (FeatureKind::Numeric { .. }, Encoding::OneHot) => {
                if self.missing && local + 1 == self.levels() {
                    format!("{}[<missing>]", self.name)
                } else {
                    format!("{}[L{}]", self.name, local)
                }
            }
        }
    }

    fn describe_level(&self, level: usize) -> String {
        if self.missing && level + 1 == self.levels() {
            return format!("{} is missing", self.name);
        }
        match &self.kind {
            FeatureKind::Binary => format!("{} = {}", self.name, level),
            FeatureKind::Categorical { categories } => format!("{} = {}", self.name, categories[level]),
            FeatureKind::Numeric { cuts } => match (level.checked_sub(1).map(|i| cuts[i]), cuts.get(level)) {
                (None, None) => format!("{} is any value", self.name),
                (None, Some(hi)) => format!("{} < {}", self.name, hi),
                (Some(lo), None) => format!("{} >= {}", self.name, lo),
                (Some(lo), Some(hi)) => format!("{} <= {} < {}", lo, self.name, hi),
            },
        }
    }

    fn describe(&self, local: usize) -> String {
        match (&self.kind, self.encoding) {
            (FeatureKind::Binary, _) => format!("{} = 1", self.name),
            (_, Encoding::OneHot) => self.describe_level(local),
            (_, Encoding::LevelBinary) => {
                let with_bit: Vec<usize> = (0..self.levels()).filter(|l| l >> local & 1 == 1).collect();
                let mut text = format!("bit {} of {}'s level (levels {}", local + 1, self.name, level_runs(&with_bit));
                if let FeatureKind::Categorical { categories } = &self.kind {
                    let names: Vec<&str> = with_bit
                        .iter()
                        .map(|&l| categories.get(l).map_or("<missing>", String::as_str))
                        .collect();
                    text.push_str(": ");
                    text.push_str(&names.join(", "));
                }
                text.push(')');
                text
            }
        }
    }
}

/// `ceil(log2(levels))`, at least 1.
pub fn level_bits(levels: usize) -> usize {
    if levels <= 2 {
        1
    } else {
        (usize::BITS - (levels - 1).leading_zeros()) as usize
    }
}

fn parse_number(text: &str) -> Option<f64> {
    text.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn level_runs(levels: &[usize]) -> String {
    if levels.is_empty() {
        return String::from("none");
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < levels.len() {
        let mut j = i;
        while j + 1 < levels.len() && levels[j + 1] == levels[j] + 1 {
            j += 1;
        }
        parts.push(if j == i { levels[i].to_string() } else { format!("{}..{}", levels[i], levels[j]) });
        i = j + 1;
    }
    parts.join(",")
}

/// Number of cuts less than or equal to `value`: a value equal to a cut
/// belongs to the higher level. Values outside the trained range clamp to
/// the first or last level.
pub fn discretize(value: f64, cuts: &[f64]) -> usize {
    cuts.partition_point(|&c| c <= value)
}

/// Unsigned binary code of `level` in `width` bits.
pub fn encode_integer(level: u64, width: usize) -> Result<BitVector> {
    if width < 64 && level >> width != 0 {
        return Err(Error::LevelOutOfRange { level, width });
    }
    Ok(BitVector::from_u64(level, width))
}

/// `cardinality` bits with only bit `index` set (position 0 = least
/// significant).
pub fn one_hot(index: usize, cardinality: usize) -> Result<BitVector> {
    if index >= cardinality {
        return Err(Error::IndexOutOfRange { index, cardinality });
    }
    let mut bv = BitVector::zeros(cardinality);
    bv.set(index, true);
    Ok(bv)
}

/// A raw delimited table: header plus rows of text fields.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != header.len() {
                return Err(Error::RowLength { row: i, expected: header.len(), found: row.len() });
            }
        }
        Ok(Self { header, rows })
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Labels of the named column; every value must be `0` or `1`.
    pub fn labels(&self, column: &str) -> Result<Vec<bool>> {
        let idx = self.column_index(column).ok_or_else(|| Error::UnknownLabelColumn(column.into()))?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                parse_label(&row[idx]).ok_or_else(|| Error::NonBinaryLabel { row: i, value: row[idx].clone() })
            })
            .collect()
    }
}

pub fn parse_label(text: &str) -> Option<bool> {
    match text.trim() {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinarizeConfig {
    /// Levels per numeric feature (before deduplicating tied cuts).
    pub levels: usize,
    pub encoding: Encoding,
    pub label_column: String,
    pub cuts: CutStrategy,
    /// Map empty fields to an extra level instead of rejecting them.
    pub missing_category: bool,
}

impl Default for BinarizeConfig {
    fn default() -> Self {
        Self {
            levels: 4,
            encoding: Encoding::LevelBinary,
            label_column: String::from("label"),
            cuts: CutStrategy::Quantile,
            missing_category: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinarizationSchema {
    features: Vec<FeatureSpec>,
    total_width: usize,
    label_column: String,
}

impl BinarizationSchema {
    /// Lays features out with the first one in the most significant bits.
    pub fn new(mut features: Vec<FeatureSpec>, label_column: impl Into<String>) -> Result<Self> {
        let total_width: usize = features.iter().map(|f| f.bit_width).sum();
        let mut end = total_width;
        for f in &mut features {
            end -= f.bit_width;
            f.bit_offset = end;
        }
        Self::from_laid_out(features, label_column.into())
    }

    /// Accepts features with offsets already assigned, checking that the
    /// blocks tile the bit range exactly.
    pub fn from_laid_out(features: Vec<FeatureSpec>, label_column: String) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::InvalidSchema("no features".into()));
        }
        let mut names: Vec<&str> = features.iter().map(|f| f.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateFeature(w[0].into()));
        }
        if features.iter().any(|f| f.name == label_column) {
            return Err(Error::InvalidSchema(format!("label column {label_column:?} is also a feature")));
        }
        for f in &features {
            if f.bit_width != f.implied_width() || f.bit_width == 0 {
                return Err(Error::InvalidSchema(format!(
                    "feature {:?}: width {} does not match its encoding",
                    f.name, f.bit_width
                )));
            }
        }
        let mut blocks: Vec<(usize, usize)> = features.iter().map(|f| (f.bit_offset, f.bit_width)).collect();
        blocks.sort_unstable();
        let mut next = 0;
        for (offset, width) in blocks {
            if offset != next {
                return Err(Error::InvalidSchema("bit offsets are not contiguous".into()));
            }
            next += width;
        }
        Ok(Self { features, total_width: next, label_column })
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn total_width(&self) -> usize {
        self.total_width
    }

    pub fn label_column(&self) -> &str {
        &self.label_column
    }

    pub fn feature(&self, name: &str) -> Option<&FeatureSpec> {
        self.features.iter().find(|f| f.name == name)
    }

    fn locate(&self, position: usize) -> Result<(&FeatureSpec, usize)> {
        self.features
            .iter()
            .find(|f| (f.bit_offset..f.bit_offset + f.bit_width).contains(&position))
            .map(|f| (f, position - f.bit_offset))
            .ok_or(Error::PositionOutOfRange { position, width: self.total_width })
    }

    /// Readable meaning of one bit position.
    pub fn describe_bit(&self, position: usize) -> Result<String> {
        let (feature, local) = self.locate(position)?;
        Ok(feature.describe(local))
    }

    /// Compact, unique name of one bit position, as used in rule text.
    pub fn bit_label(&self, position: usize) -> Result<String> {
        let (feature, local) = self.locate(position)?;
        Ok(feature.bit_label(local))
    }

    /// Binds feature names to the columns of `header`.
    pub fn row_encoder(&self, header: &[String]) -> Result<RowEncoder<'_>> {
        let columns = self
            .features
            .iter()
            .map(|f| header.iter().position(|h| *h == f.name).ok_or_else(|| Error::MissingColumn(f.name.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(RowEncoder { schema: self, columns })
    }

    pub fn encode_row(&self, header: &[String], row: &[String]) -> Result<BitVector> {
        self.row_encoder(header)?.encode(row)
    }
}

pub struct RowEncoder<'a> {
    schema: &'a BinarizationSchema,
    columns: Vec<usize>,
}

impl RowEncoder<'_> {
    pub fn encode(&self, row: &[String]) -> Result<BitVector> {
        let mut out = BitVector::zeros(self.schema.total_width);
        for (feature, &col) in self.schema.features.iter().zip(&self.columns) {
            let raw = row.get(col).ok_or_else(|| Error::MissingValue { column: feature.name.clone() })?;
            let bits = feature.encode_level(feature.level_of(raw)?)?;
            out.splice(feature.bit_offset, &bits);
        }
        Ok(out)
    }
}

/// Derives a schema covering every non-label column of the table.
///
/// Columns whose values are all numbers in {0, 1} become binary features;
/// other all-numeric columns are discretized into `config.levels` levels;
/// anything else is categorical with categories in sorted order.
pub fn infer_schema(table: &Table, config: &BinarizeConfig) -> Result<BinarizationSchema> {
    if table.rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    if config.levels == 0 {
        return Err(Error::InvalidConfig("levels must be positive".into()));
    }
    let label_idx = table
        .column_index(&config.label_column)
        .ok_or_else(|| Error::UnknownLabelColumn(config.label_column.clone()))?;
    table.labels(&config.label_column)?;

    let mut features = Vec::new();
    for (col, name) in table.header.iter().enumerate() {
        if col == label_idx {
            continue;
        }
        let raw: Vec<&str> = table.rows.iter().map(|r| r[col].trim()).collect();
        let missing = raw.iter().any(|v| v.is_empty());
        if missing && !config.missing_category {
            return Err(Error::MissingValue { column: name.clone() });
        }
        let present: Vec<&str> = raw.into_iter().filter(|v| !v.is_empty()).collect();
        if present.is_empty() {
            return Err(Error::EmptyFeature(name.clone()));
        }
        let numbers: Option<Vec<f64>> = present.iter().map(|v| parse_number(v)).collect();
        let kind = match numbers {
            Some(values) if values.iter().all(|&v| v == 0.0 || v == 1.0) && !missing => FeatureKind::Binary,
            Some(values) => FeatureKind::Numeric { cuts: compute_cuts(values, config.levels, config.cuts) },
            None => {
                let mut categories: Vec<String> = present.iter().map(|s| String::from(*s)).collect();
                categories.sort();
                categories.dedup();
                FeatureKind::Categorical { categories }
            }
        };
        features.push(FeatureSpec::new(name.clone(), kind, config.encoding, missing)?);
    }
    if features.is_empty() {
        return Err(Error::InvalidSchema("table has no feature columns".into()));
    }
    BinarizationSchema::new(features, config.label_column.clone())
}

/// Cut points for `levels` levels. Cuts that would leave the first level
/// empty or repeat an earlier cut are dropped.
pub fn compute_cuts(mut values: Vec<f64>, levels: usize, strategy: CutStrategy) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    let (min, max) = (values[0], values[n - 1]);
    let mut cuts: Vec<f64> = Vec::new();
    for k in 1..levels {
        let q = k as f64 / levels as f64;
        let cut = match strategy {
            CutStrategy::Quantile => {
                let pos = q * (n - 1) as f64;
                let lo = pos as usize;
                let frac = pos - lo as f64;
                match values.get(lo + 1) {
                    Some(&next) if frac > 0.0 => values[lo] + frac * (next - values[lo]),
                    _ => values[lo],
                }
            }
            CutStrategy::EqualWidth => min + (max - min) * q,
        };
        if cut > min && cuts.last().map_or(true, |&last| cut > last) {
            cuts.push(cut);
        }
    }
    cuts
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn strings(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| String::from(*s)).collect()
    }

    fn table(header: &[&str], rows: &[&[&str]]) -> Table {
        Table::new(strings(header), rows.iter().map(|r| strings(r)).collect()).unwrap()
    }

    fn config(levels: usize, label: &str) -> BinarizeConfig {
        BinarizeConfig { levels, label_column: label.into(), ..Default::default() }
    }

    #[test]
    fn sixteen_levels_take_four_bits() {
        let rows: Vec<Vec<String>> = (0..16).map(|x| vec![x.to_string(), u8::from(x >= 4).to_string()]).collect();
        let t = Table::new(strings(&["x", "y"]), rows).unwrap();
        let schema = infer_schema(&t, &config(16, "y")).unwrap();
        let x = &schema.features()[0];
        assert_eq!(x.bit_width, 4);
        assert_eq!(x.levels(), 16);
        for v in 0..16 {
            assert_eq!(x.level_of(&v.to_string()).unwrap(), v);
        }
        assert_eq!(schema.encode_row(&t.header, &t.rows[3]).unwrap().to_text(), "0011");
    }

    #[test]
    fn binary_columns_stay_one_bit() {
        let t = table(&["f", "y"], &[&["0", "1"], &["1", "0"]]);
        let schema = infer_schema(&t, &config(4, "y")).unwrap();
        assert_eq!(schema.features()[0].kind, FeatureKind::Binary);
        assert_eq!(schema.total_width(), 1);
    }

    #[test]
    fn quantile_cuts_on_eight_values() {
        // order statistics 1..8, positions q * 7: 1.75, 3.5, 5.25
        let cuts = compute_cuts((1..=8).map(f64::from).collect(), 4, CutStrategy::Quantile);
        assert_eq!(cuts, vec![2.75, 4.5, 6.25]);
        let levels: Vec<usize> = (1..=8).map(|v| discretize(f64::from(v), &cuts)).collect();
        assert_eq!(levels, vec![0, 0, 1, 1, 2, 2, 3, 3]);
        let rows: Vec<Vec<String>> = (1..=8).map(|v| vec![v.to_string(), String::from("0")]).collect();
        let schema = infer_schema(&Table::new(strings(&["v", "y"]), rows).unwrap(), &config(4, "y")).unwrap();
        assert_eq!(schema.features()[0].bit_width, 2);
        assert_eq!(schema.features()[0].kind, FeatureKind::Numeric { cuts });
    }

    #[test]
    fn equal_width_cuts() {
        let cuts = compute_cuts(vec![0.0, 10.0, 3.0], 4, CutStrategy::EqualWidth);
        assert_eq!(cuts, vec![2.5, 5.0, 7.5]);
        assert!(compute_cuts(vec![5.0, 5.0], 4, CutStrategy::EqualWidth).is_empty());
    }

    #[test]
    fn discretize_boundaries() {
        let cuts = [10.0, 20.0];
        assert_eq!(discretize(-5.0, &cuts), 0);
        assert_eq!(discretize(15.0, &cuts), 1);
        assert_eq!(discretize(20.0, &cuts), 2);
        let got: Vec<usize> = [9.0, 10.0, 11.0, 19.0, 20.0, 21.0].iter().map(|&v| discretize(v, &cuts)).collect();
        assert_eq!(got, vec![0, 1, 1, 1, 2, 2]);
    }

    #[test]
    fn integer_codes() {
        assert_eq!(encode_integer(3, 4).unwrap().to_text(), "0011");
        assert_eq!(encode_integer(0, 4).unwrap().to_text(), "0000");
        assert_eq!(encode_integer(15, 4).unwrap().to_text(), "1111");
        assert!(matches!(encode_integer(16, 4), Err(Error::LevelOutOfRange { level: 16, width: 4 })));
    }

    #[test]
    fn one_hot_codes() {
        assert_eq!(one_hot(2, 4).unwrap().to_text(), "0100");
        assert_eq!(one_hot(0, 1).unwrap().to_text(), "1");
        assert_eq!(one_hot(3, 4).unwrap().to_text(), "1000");
        assert!(one_hot(4, 4).is_err());
    }

    #[test]
    fn mixed_row_concatenates_blocks() {
        let num = FeatureSpec::new("n", FeatureKind::Numeric { cuts: vec![1.0, 2.0, 3.0] }, Encoding::LevelBinary, false).unwrap();
        let cat = FeatureSpec::new(
            "c",
            FeatureKind::Categorical { categories: strings(&["a", "b", "c"]) },
            Encoding::OneHot,
            false,
        )
        .unwrap();
        let schema = BinarizationSchema::new(vec![num, cat], "y").unwrap();
        assert_eq!(schema.features()[0].bit_offset, 3);
        assert_eq!(schema.features()[1].bit_offset, 0);
        let bits = schema.encode_row(&strings(&["n", "c"]), &strings(&["2.5", "b"])).unwrap();
        assert_eq!(bits.to_text(), "10010");
    }

    #[test]
    fn all_zero_binary_row() {
        let t = table(&["a", "b", "c", "y"], &[&["0", "1", "0", "1"], &["0", "0", "0", "0"]]);
        let schema = infer_schema(&t, &config(4, "y")).unwrap();
        assert_eq!(schema.encode_row(&t.header, &t.rows[1]).unwrap().to_text(), "000");
        assert_eq!(schema.encode_row(&t.header, &t.rows[0]).unwrap().to_text(), "010");
    }

    #[test]
    fn encode_errors() {
        let t = table(&["color", "x", "y"], &[&["red", "1.5", "1"], &["blue", "2.5", "0"]]);
        let schema = infer_schema(&t, &config(2, "y")).unwrap();
        let h = strings(&["color", "x"]);
        assert!(matches!(schema.encode_row(&h, &strings(&["green", "1"])), Err(Error::UnseenCategory { .. })));
        assert!(matches!(schema.encode_row(&h, &strings(&["red", "abc"])), Err(Error::NotNumeric { .. })));
        assert!(matches!(schema.encode_row(&h, &strings(&["red", ""])), Err(Error::MissingValue { .. })));
        assert!(matches!(schema.encode_row(&strings(&["x"]), &strings(&["1"])), Err(Error::MissingColumn(_))));
        // beyond the trained range clamps
        assert_eq!(schema.encode_row(&h, &strings(&["red", "1e9"])).unwrap(), schema.encode_row(&h, &strings(&["red", "2.5"])).unwrap());
    }

    #[test]
    fn infer_errors() {
        let t = table(&["a", "y"], &[&["1", "2"]]);
        assert!(matches!(infer_schema(&t, &config(2, "y")), Err(Error::NonBinaryLabel { row: 0, .. })));
        assert!(matches!(infer_schema(&t, &config(2, "z")), Err(Error::UnknownLabelColumn(_))));
        let empty = Table::new(strings(&["a", "y"]), vec![]).unwrap();
        assert!(matches!(infer_schema(&empty, &config(2, "y")), Err(Error::EmptyTable)));
        let missing = table(&["a", "y"], &[&["", "1"], &["3", "0"]]);
        assert!(matches!(infer_schema(&missing, &config(2, "y")), Err(Error::MissingValue { .. })));
        let blank = table(&["a", "y"], &[&["", "1"]]);
        let cfg = BinarizeConfig { missing_category: true, ..config(2, "y") };
        assert!(matches!(infer_schema(&blank, &cfg), Err(Error::EmptyFeature(_))));
    }

    #[test]
    fn missing_category_gets_its_own_level() {
        let t = table(&["c", "y"], &[&["red", "1"], &["", "0"], &["blue", "0"]]);
        let cfg = BinarizeConfig { missing_category: true, encoding: Encoding::OneHot, ..config(2, "y") };
        let schema = infer_schema(&t, &cfg).unwrap();
        let f = &schema.features()[0];
        assert_eq!(f.bit_width, 3);
        assert_eq!(schema.encode_row(&t.header, &t.rows[1]).unwrap().to_text(), "100");
        assert_eq!(schema.describe_bit(2).unwrap(), "c is missing");
    }

    #[test]
    fn describe_bits() {
        let color = FeatureSpec::new(
            "color",
            FeatureKind::Categorical { categories: strings(&["blue", "red"]) },
            Encoding::OneHot,
            false,
        )
        .unwrap();
        let cuts: Vec<f64> = (1..16).map(f64::from).collect();
        let x = FeatureSpec::new("x", FeatureKind::Numeric { cuts }, Encoding::LevelBinary, false).unwrap();
        let schema = BinarizationSchema::new(vec![x, color], "y").unwrap();
        assert_eq!(schema.describe_bit(1).unwrap(), "color = red");
        // levels with the top bit of a 4-bit code set
        assert_eq!(schema.describe_bit(5).unwrap(), "bit 4 of x's level (levels 8..15)");
        assert_eq!(schema.describe_bit(2).unwrap(), "bit 1 of x's level (levels 1,3,5,7,9,11,13,15)");
        assert!(matches!(schema.describe_bit(6), Err(Error::PositionOutOfRange { position: 6, width: 6 })));
        assert_eq!(schema.bit_label(5).unwrap(), "x.b_4");
        assert_eq!(schema.bit_label(1).unwrap(), "color[red]");
    }

    #[test]
    fn schema_validation() {
        let a = FeatureSpec::new("a", FeatureKind::Binary, Encoding::OneHot, false).unwrap();
        assert_eq!(a.bit_width, 1);
        assert!(matches!(
            BinarizationSchema::new(vec![a.clone(), a.clone()], "y"),
            Err(Error::DuplicateFeature(_))
        ));
        let mut gap = a.clone();
        gap.bit_offset = 3;
        assert!(BinarizationSchema::from_laid_out(vec![gap], "y".into()).is_err());
        assert!(FeatureSpec::new("n", FeatureKind::Numeric { cuts: vec![2.0, 1.0] }, Encoding::OneHot, false).is_err());
    }
}
