//! Commutative presemifields over small finite fields of odd characteristic.
//!
//! The crate builds the `P(q,ℓ)` semifields and the `B̄(q,ℓ,d,β)`
//! presemifields as bilinear p-polynomials over `F_{q^{2ℓ}}`, forms their
//! dual, transpose and symplectic (`t*`) versions, constructs explicit
//! isotopisms between the two families, and checks every step exhaustively.
//!
//! Module map:
//! - [`field`]: the field tower and table-driven arithmetic
//! - [`linpoly`]: linearized maps (evaluation, composition, conjugation, inversion)
//! - [`presemifield`]: bilinear multiplications, spread sets, Knuth operations, planar DO bridge
//! - [`families`]: the two families and their symplectic forms
//! - [`isotopy`]: isotopism verification, transforms, nuclei, semilinearity
//! - [`constructions`]: the explicit isotopisms and the strong-isotopy decision
//! - [`selftest`]: property suites driven by a seed
//! - [`json`]: JSON encodings of every exported object

pub mod arith;
pub mod constructions;
pub mod error;
pub mod families;
pub mod field;
mod fp_poly;
pub mod isotopy;
pub mod json;
pub mod linpoly;
pub mod matrix;
pub mod presemifield;
pub mod selftest;

pub use error::{Error, Result};
pub use field::{Elem, FieldCtx, TowerParams};
pub use linpoly::LinearizedMap;
pub use matrix::FpMatrix;
pub use presemifield::{DoPolynomial, Presemifield, SpreadSet};

/// Crate version, echoed into every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
