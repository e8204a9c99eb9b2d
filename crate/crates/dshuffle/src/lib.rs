//! Exact computations with polar solutions of the linearized double shuffle
//! equations: rational-function arithmetic, shuffle and stuffle algebra,
//! depth-graded series with the Ihara bracket, explicit generators, residue
//! filtrations, period-polynomial dimensions and bracket decompositions.

pub mod anatomy;
pub mod cli;
pub mod dsh_check;
pub mod error;
pub mod gens;
pub mod linalg;
pub mod modforms;
pub mod par;
pub mod ratfun;
pub mod resflt;
pub mod series;
pub mod words;

pub use error::{Error, Result};
