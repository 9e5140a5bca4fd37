//! Front end for `compcalc`: an expression language for comp-calculus
//! terms, an evaluator over the endomorphism and free models, the randomized
//! identity suite, and the Hochschild driver.
//!
//! Composition indices are 0-based: `f o_0 g` substitutes `g` into the first
//! input of `f`. Some literature numbers inputs from 1.

pub mod eval;
pub mod expr;
pub mod model;
pub mod session;
pub mod suite;
