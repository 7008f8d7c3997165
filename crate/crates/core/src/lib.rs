//! Random `(a,e)` quantified XOR formulas `∀X∃Y (AX + EY = C)` over GF(2).
//!
//! Generation, three decision engines (bit-packed elimination, a parity
//! union-find on the clause graph for `e = 2`, exhaustive search), the
//! limiting distribution functions, and a deterministic Monte Carlo harness
//! that estimates threshold curves.

pub mod error;
pub mod gf2;
pub mod model;
pub mod gen;
pub mod solver;
pub mod graph;
pub mod theory;
pub mod exp;

pub use error::{Error, Result};
pub use gen::{derive_seed, generate, GenConfig};
pub use model::{Clause, QxorInstance};
pub use solver::{analyze, decide_maxrank, decide_qxor, decide_xorsat, Verdicts};
