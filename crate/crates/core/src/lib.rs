//! Gerstenhaber's comp(osition) calculus for non-symmetric pre-operads.
//!
//! * [`ring`]: exact coefficients (`Q`, `Z`, `Z/p`) and formal linear
//!   combinations.
//! * [`calculus`]: the [`PreOperad`] contract and every derived operation
//!   (cup, total composition, braces, associator, commutator, Jacobian,
//!   pre-coboundary, derivation deviations, auxiliary variables).
//! * [`endo`]: the endomorphism pre-operad of `K^d` as dense tensors.
//! * [`free`]: the free pre-operad on planar trees and its representations
//!   into the endomorphism model.
//! * [`hochschild`]: structure constants, associativity, coboundary matrices
//!   and cohomology dimensions.

pub mod calculus;
pub mod endo;
pub mod error;
pub mod free;
pub mod hochschild;
pub mod linalg;
pub mod ring;

pub use calculus::PreOperad;
pub use error::{Error, Result};
pub use ring::{koszul_sign, Ring, Scalar, Sign};
