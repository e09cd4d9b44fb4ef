//! Rule learning for binary classification as two-level Boolean minimization.
//!
//! Tabular rows are binarized into fixed-width bit vectors, grouped into an
//! on-set (class 1) and an off-set (class 0), and every unobserved pattern is
//! left as a don't-care. The class-1 region is then minimized into a
//! sum-of-products [`Cover`], either exactly (all prime implicants plus an
//! optimal unate cover) or with an expand / irredundant / reduce loop. The
//! resulting cubes read directly as `IF ... THEN class 1` rules.
//!
//! The crate is `no_std` and only needs `alloc`. Text formats, dataset IO and
//! the command-line front end live in the `logiclearn` crate.
//!
//! ```
//! use logiclearn_core::{exact, MinimizationProblem};
//!
//! // x in 0..16, class 1 iff x >= 4
//! let problem = MinimizationProblem::from_indices(4, 4..16, 0..4).unwrap();
//! let cover = exact::minimize_exact(&problem, &Default::default()).unwrap();
//! let cubes: Vec<String> = cover.iter().map(|c| c.to_string()).collect();
//! assert_eq!(cubes, ["-1--", "1---"]);
//! ```

#![no_std]

extern crate alloc;

pub mod binarize;
pub mod bits;
pub mod cube;
mod error;
pub mod exact;
pub mod heuristic;
pub mod learn;
mod problem;
pub mod synth;

pub use bits::BitVector;
pub use cube::{Cover, Cube, Literal};
pub use error::{Error, Limit, Result};
pub use problem::{CoverCost, Engine, MinimizationProblem};

/// A fully specified input pattern.
pub type Minterm = BitVector;
