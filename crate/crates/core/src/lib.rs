//! Exact arithmetic toolkit for searching elliptic curves over the rationals
//! with a prescribed torsion subgroup and a large Szpiro ratio.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: factorisation, radicals and certified logarithm ratios.
//! * [`poly`]: dense integer polynomials, Sturm sequences and root isolation.
//! * [`families`]: the fifteen two-parameter torsion families.
//! * [`curves`]: Weierstrass models, minimal models, conductors, torsion.
//! * [`abc`]: ABC triples, seed sequences and curve-to-triple conversion.
//! * [`thresholds`]: the real thresholds that govern good parameters.
//! * [`catalog`]: mining, ingesting and cataloguing good curves.

pub mod abc;
pub mod arith;
pub mod catalog;
pub mod curves;
mod error;
pub mod families;
pub mod poly;
pub mod thresholds;

pub use error::{Error, Result};
