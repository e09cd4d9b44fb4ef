//! Seeded generators with known ground truth, and brute-force oracles for
//! small widths.
//!
//! All randomness comes from [`Rng`]: ChaCha8 as implemented by
//! `rand_chacha`, keyed through `SeedableRng::seed_from_u64`. Derived draws
//! are fixed here so other implementations can replay them:
//!
//! * bits: `next_u64`, low bit first;
//! * `index(n)`: Lemire's multiply-shift with rejection;
//! * `unit()`: `(next_u64 >> 11) * 2^-53`;
//! * shuffles: Fisher-Yates from the last element down, swapping `i` with
//!   `index(i + 1)`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binarize::Table;
use crate::bits::word_count;
use crate::cube::{Cover, Cube, Literal};
use crate::learn::LabeledBits;
use crate::{BitVector, Error, MinimizationProblem, Result};

/// Widest problem the brute-force oracles accept.
pub const ORACLE_MAX_WIDTH: usize = 8;

/// Widest problem [`random_instance`] enumerates.
pub const ENUMERATE_MAX_WIDTH: usize = 24;

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let mut m = u128::from(self.next_u64()) * u128::from(n);
        if (m as u64) < n {
            let threshold = n.wrapping_neg() % n;
            while (m as u64) < threshold {
                m = u128::from(self.next_u64()) * u128::from(n);
            }
        }
        (m >> 64) as u64
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    pub fn bits(&mut self, width: usize) -> BitVector {
        let mut words: Vec<u64> = (0..word_count(width)).map(|_| self.next_u64()).collect();
        if let Some(last) = words.last_mut() {
            let tail = width % 64;
            if tail != 0 {
                *last &= (1u64 << tail) - 1;
            }
        }
        BitVector::from_words(width, words.into_iter().collect())
    }

    /// A uniform minterm of `cube`.
    pub fn minterm_in(&mut self, cube: &Cube) -> BitVector {
        let mut m = cube.low_minterm();
        for p in cube.free_positions() {
            if self.next_u64() & 1 == 1 {
                m.set(p, true);
            }
        }
        m
    }
}

/// Class-1 rows fall inside the planted cubes, class-0 rows anywhere else.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSpec {
    pub width: usize,
    pub rules: Vec<Cube>,
    pub n_rows: usize,
    pub class1_fraction: f64,
    pub seed: u64,
}

impl PlantedSpec {
    pub fn class1_rows(&self) -> usize {
        (self.n_rows as f64 * self.class1_fraction + 0.5) as usize
    }
}

/// Generates the labelled patterns of `spec` in shuffled order.
///
/// Class-1 rows pick a planted cube uniformly and then a uniform minterm in
/// it. Class-0 rows are uniform minterms outside every planted cube, drawn
/// by rejection.
pub fn generate_planted_bits(spec: &PlantedSpec) -> Result<Vec<LabeledBits>> {
    if spec.width == 0 {
        return Err(Error::ZeroWidth);
    }
    if !(0.0..=1.0).contains(&spec.class1_fraction) {
        return Err(Error::InvalidConfig(format!("class-1 fraction {} is outside [0, 1]", spec.class1_fraction)));
    }
    let rules = Cover::from_cubes(spec.width, spec.rules.iter().cloned())?;
    let n1 = spec.class1_rows();
    let n0 = spec.n_rows - n1;
    if n1 > 0 && rules.is_empty() {
        return Err(Error::InvalidConfig("class-1 rows requested without planted cubes".into()));
    }
    if n0 > 0 && rules.is_tautology() {
        return Err(Error::PlantedCoversSpace);
    }
    let mut rng = Rng::new(spec.seed);
    let mut rows = Vec::with_capacity(spec.n_rows);
    for _ in 0..n1 {
        let cube = &spec.rules[rng.index(spec.rules.len() as u64) as usize];
        rows.push(LabeledBits::new(rng.minterm_in(cube), true));
    }
    while rows.len() < spec.n_rows {
        let m = rng.bits(spec.width);
        if !rules.eval_unchecked(&m) {
            rows.push(LabeledBits::new(m, false));
        }
    }
    rng.shuffle(&mut rows);
    Ok(rows)
}

/// [`generate_planted_bits`] as a raw table with columns `f1..fW` and `y`;
/// `f1` is the most significant position.
pub fn generate_planted(spec: &PlantedSpec) -> Result<Table> {
    let rows = generate_planted_bits(spec)?;
    let mut header: Vec<String> = (1..=spec.width).map(|i| format!("f{i}")).collect();
    header.push(String::from("y"));
    let rows = rows
        .into_iter()
        .map(|r| {
            let mut row: Vec<String> = (0..spec.width).rev().map(|p| u8::from(r.bits.get(p)).to_string()).collect();
            row.push(u8::from(r.label).to_string());
            row
        })
        .collect();
    Table::new(header, rows)
}

/// Every minterm is on with probability `on_fraction`, off with probability
/// `off_fraction`, and a don't-care otherwise.
pub fn random_instance(width: usize, on_fraction: f64, off_fraction: f64, seed: u64) -> Result<MinimizationProblem> {
    if width > ENUMERATE_MAX_WIDTH {
        return Err(Error::InvalidConfig(format!("width {width} exceeds {ENUMERATE_MAX_WIDTH} for enumeration")));
    }
    let valid = |f: f64| (0.0..=1.0).contains(&f);
    if !valid(on_fraction) || !valid(off_fraction) || on_fraction + off_fraction > 1.0 {
        return Err(Error::InvalidConfig(format!("fractions {on_fraction} and {off_fraction} are invalid")));
    }
    let mut rng = Rng::new(seed);
    let mut on = Vec::new();
    let mut off = Vec::new();
    for x in 0..1u64 << width {
        let u = rng.unit();
        if u < on_fraction {
            on.push(BitVector::from_u64(x, width));
        } else if u < on_fraction + off_fraction {
            off.push(BitVector::from_u64(x, width));
        }
    }
    MinimizationProblem::new(width, on, off)
}

/// Exactly `n_on` on and `n_off` off minterms, distinct and uniform.
pub fn sampled_instance(width: usize, n_on: usize, n_off: usize, seed: u64) -> Result<MinimizationProblem> {
    if width == 0 {
        return Err(Error::ZeroWidth);
    }
    let space = if width >= 64 { u128::MAX } else { 1u128 << width };
    if (n_on + n_off) as u128 > space {
        return Err(Error::InvalidConfig(format!("{} minterms do not fit in width {width}", n_on + n_off)));
    }
    let mut rng = Rng::new(seed);
    let mut seen = BTreeSet::new();
    let mut draw = |n: usize| {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let m = rng.bits(width);
            if seen.insert(m.clone()) {
                out.push(m);
            }
        }
        out
    };
    let on = draw(n_on);
    let off = draw(n_off);
    MinimizationProblem::new(width, on, off)
}

/// Minterm sets of width ≤ 8 as 256-bit masks.
type Mask = [u64; 4];

fn mask_of(minterms: &[BitVector]) -> Mask {
    let mut mask = [0u64; 4];
    for m in minterms {
        let x = m.to_u64().expect("oracle width") as usize;
        mask[x / 64] |= 1 << (x % 64);
    }
    mask
}

fn and(a: &Mask, b: &Mask) -> Mask {
    [a[0] & b[0], a[1] & b[1], a[2] & b[2], a[3] & b[3]]
}

fn is_zero(a: &Mask) -> bool {
    a.iter().all(|w| *w == 0)
}

/// An oracle cube: `care` and `value` bits over at most eight positions.
#[derive(Clone, Copy)]
struct Small {
    care: u32,
    value: u32,
}

impl Small {
    fn mask(self, width: usize) -> Mask {
        let mut mask = [0u64; 4];
        for x in 0..1u32 << width {
            if x & self.care == self.value {
                mask[(x / 64) as usize] |= 1 << (x % 64);
            }
        }
        mask
    }

    fn to_cube(self, width: usize) -> Cube {
        let mut cube = Cube::universe(width);
        for p in 0..width {
            if self.care >> p & 1 == 1 {
                let lit = if self.value >> p & 1 == 1 { Literal::One } else { Literal::Zero };
                cube.set_literal(p, lit);
            }
        }
        cube
    }
}

/// All 3^width cubes.
fn all_cubes(width: usize) -> impl Iterator<Item = Small> {
    (0..1u32 << width).flat_map(move |care| {
        // Values range over the subsets of `care`.
        let mut value = 0u32;
        let mut done = false;
        core::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = Small { care, value };
            value = (value.wrapping_sub(care)) & care;
            done = value == 0;
            Some(out)
        })
    })
}

fn guard(problem: &MinimizationProblem) -> Result<()> {
    if problem.width() > ORACLE_MAX_WIDTH {
        return Err(Error::OracleWidth { width: problem.width(), max: ORACLE_MAX_WIDTH });
    }
    Ok(())
}

/// Off-disjoint cubes touching the on-set from which no position can be
/// freed, found by checking the definition on every cube.
fn primes_by_definition(problem: &MinimizationProblem) -> Vec<(Small, Mask)> {
    let width = problem.width();
    let on = mask_of(problem.on());
    let off = mask_of(problem.off());
    let disjoint = |c: Small| is_zero(&and(&c.mask(width), &off));
    all_cubes(width)
        .filter_map(|c| {
            let mask = c.mask(width);
            if !is_zero(&and(&mask, &off)) || is_zero(&and(&mask, &on)) {
                return None;
            }
            let enlargeable = (0..width)
                .filter(|p| c.care >> p & 1 == 1)
                .any(|p| disjoint(Small { care: c.care & !(1 << p), value: c.value & !(1 << p) }));
            (!enlargeable).then_some((c, mask))
        })
        .collect()
}

pub fn oracle_primes(problem: &MinimizationProblem) -> Result<Cover> {
    guard(problem)?;
    let width = problem.width();
    Ok(Cover::from_cubes_unchecked(width, primes_by_definition(problem).into_iter().map(|(c, _)| c.to_cube(width))))
}

/// The smallest number of cubes covering the on-set without touching the
/// off-set, with one cover achieving it.
///
/// Any cover can swap each cube for a prime containing it, so the search
/// runs over the primes found by [`oracle_primes`]. It tries sizes 0, 1, 2,
/// ... and at each size branches on the cubes covering the lowest uncovered
/// on minterm.
pub fn brute_min_cover(problem: &MinimizationProblem) -> Result<(usize, Cover)> {
    guard(problem)?;
    let width = problem.width();
    let on = mask_of(problem.on());
    let primes = primes_by_definition(problem);
    let mut chosen = Vec::new();
    for k in 0..=problem.on().len() {
        if search(&primes, on, k, &mut chosen) {
            let cover = Cover::from_cubes_unchecked(width, chosen.iter().map(|&i| primes[i].0.to_cube(width)));
            return Ok((k, cover));
        }
    }
    unreachable!("the on minterms themselves are a cover")
}

fn search(primes: &[(Small, Mask)], uncovered: Mask, budget: usize, chosen: &mut Vec<usize>) -> bool {
    let Some(word) = uncovered.iter().position(|w| *w != 0) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    let bit = uncovered[word].trailing_zeros();
    for (i, (_, mask)) in primes.iter().enumerate() {
        if mask[word] >> bit & 1 == 0 {
            continue;
        }
        chosen.push(i);
        let rest = [
            uncovered[0] & !mask[0],
            uncovered[1] & !mask[1],
            uncovered[2] & !mask[2],
            uncovered[3] & !mask[3],
        ];
        if search(primes, rest, budget - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}
