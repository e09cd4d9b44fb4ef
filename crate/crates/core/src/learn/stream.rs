use alloc::vec::Vec;

use super::merge::repair;
use super::{build_sets, ConflictPolicy, LabeledBits, MinimizerConfig};
use crate::cube::{Cover, Cube};
use crate::{exact, heuristic, BitVector, Engine, Error, Result};

/// What survives between batches: the committed cover and every off minterm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamState {
    pub cover: Cover,
    pub off: Vec<BitVector>,
}

impl StreamState {
    pub fn new(width: usize) -> Self {
        Self { cover: Cover::new(width), off: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.cover.width()
    }
}

/// Folds a batch into the state. The previous cover is treated as committed
/// class-1 territory, minus whatever the new off minterms cut out of it.
/// Earlier off minterms take part in conflict resolution as single votes.
pub fn update(
    state: &StreamState,
    batch: &[LabeledBits],
    minimizer: &MinimizerConfig,
    policy: ConflictPolicy,
) -> Result<StreamState> {
    let width = state.width();
    if let Some(m) = state.off.iter().find(|m| m.width() != width) {
        return Err(Error::WidthMismatch { expected: width, found: m.width() });
    }
    let mut votes: Vec<LabeledBits> = state.off.iter().map(|m| LabeledBits::new(m.clone(), false)).collect();
    votes.extend(batch.iter().cloned());
    let problem = build_sets(&votes, width, policy)?;
    let off = problem.off();

    let seed = repair(state.cover.iter().cloned(), off)?;
    let mut items = seed.clone();
    items.extend(problem.on().iter().map(Cube::from_minterm));
    items.sort_unstable();
    items.dedup();

    let cover = match minimizer.engine {
        Engine::Exact => exact::minimize_items(width, &items, off, &minimizer.exact)?,
        Engine::Heuristic => heuristic::minimize_items(width, &items, off, &seed, &minimizer.heuristic)?.0,
    };
    Ok(StreamState { cover, off: off.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binarize::infer_schema;
    use crate::learn::tests::{threshold_config, threshold_table};
    use crate::learn::{encode_table, fit};
    use crate::problem::texts;

    fn bits(s: &str) -> BitVector {
        BitVector::parse(s).unwrap()
    }

    #[test]
    fn empty_batch_keeps_state() {
        for engine in [Engine::Exact, Engine::Heuristic] {
            let minimizer = MinimizerConfig::with_engine(engine);
            let state = StreamState {
                cover: Cover::parse(3, ["--1", "1--"]).unwrap(),
                off: alloc::vec![bits("000"), bits("010")],
            };
            assert_eq!(update(&state, &[], &minimizer, ConflictPolicy::Majority).unwrap(), state);
        }
    }

    #[test]
    fn halves_stream_to_the_whole() {
        for engine in [Engine::Exact, Engine::Heuristic] {
            let config = threshold_config(engine);
            let table = threshold_table();
            let schema = infer_schema(&table, &config.binarize).unwrap();
            let (rows, _) = encode_table(&table, &schema).unwrap();
            let mut state = StreamState::new(4);
            for half in rows.chunks(8) {
                state = update(&state, half, &config.minimizer, config.policy).unwrap();
            }
            let whole = fit(&table, &config).unwrap();
            for x in 0..16u64 {
                let m = BitVector::from_u64(x, 4);
                assert_eq!(state.cover.eval(&m).unwrap(), whole.predict_bits(&m).unwrap(), "x={x}");
            }
        }
    }

    #[test]
    fn new_off_minterm_splits_a_cube() {
        for engine in [Engine::Exact, Engine::Heuristic] {
            let minimizer = MinimizerConfig::with_engine(engine);
            let state = StreamState { cover: Cover::parse(3, ["1--"]).unwrap(), off: alloc::vec![bits("000")] };
            let next = update(&state, &[LabeledBits::new(bits("101"), false)], &minimizer, ConflictPolicy::Majority).unwrap();
            assert!(!next.cover.eval(&bits("101")).unwrap());
            for m in ["100", "110", "111"] {
                assert!(next.cover.eval(&bits(m)).unwrap(), "{m}");
            }
            assert_eq!(next.off, [bits("000"), bits("101")]);
            assert!(next.cover.iter().all(|c| !c.contains_bits(&bits("000"))));
            assert!(texts(&next.cover).len() >= 2);
        }
    }

    #[test]
    fn width_mismatch() {
        let state = StreamState::new(3);
        let r = update(&state, &[LabeledBits::new(bits("10"), true)], &MinimizerConfig::default(), ConflictPolicy::Majority);
        assert!(matches!(r, Err(Error::WidthMismatch { .. })));
    }
}
