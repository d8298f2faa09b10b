//! Exact and high-precision numerics for q-series: truncated power series
//! over cyclotomic fields, a catalogue of classical mock-theta and
//! rank/crank generating functions, identity checking, and radial limits
//! towards roots of unity.

pub mod approx;
pub mod bigcomplex;
pub mod catalog;
pub mod error;
pub mod exactnum;
pub mod extrapolate;
pub mod identities;
pub mod radial;
pub mod series;

pub use bigcomplex::BigComplex;
pub use error::{QlabError, Result};
pub use exactnum::{Cyclo, FieldElem, Rat};
pub use series::{Count, PochSpec, Series};
