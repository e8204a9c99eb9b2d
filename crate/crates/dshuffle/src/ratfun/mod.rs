//! Exact rational functions in `x_1, …, x_d` with poles along linear forms.

pub mod affine;
pub mod form;
pub mod io;
pub mod poly;
pub mod q;
pub mod rational;

pub use affine::{AffineRational, Canonical, Key};
pub use form::{Form, MAX_VARS};
pub use poly::{Monomial, Polynomial};
pub use q::{fmt_q, parse_q, q, qi, Q};
pub use rational::{LinearForm, RationalFunction};
