//! The comp calculus of an abstract pre-operad.
//!
//! A model supplies partial compositions, a unit and linear arithmetic
//! through [`PreOperad`]; everything else (cup, total composition, braces,
//! commutator, the pre-coboundary and its derivation deviations, the
//! auxiliary variables) is written once against that trait.
//!
//! Composition positions are 0-based: `f ∘_i g` substitutes `g` into input
//! `i` of `f`, for `0 <= i <= deg(f) - 1`. Some literature shifts this by one.

mod lambda;
mod ops;
mod region;

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Ring, Scalar, Sign};

pub use lambda::{lambda_aux, lambda_prime_aux};
pub use ops::{
    associator, braces, commutator, cup, delta, delta_via_cup, dev_braces, dev_total, jacobian,
    total,
};
pub use region::{classify_region, relation_rhs, scope, Region};

/// A linear pre-operad with a fixed coefficient ring.
///
/// Elements are homogeneous: each has a degree `n >= 0` (it lives in `C^n`)
/// and equality is exact equality of normal forms.
pub trait PreOperad {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn ring(&self) -> Ring;

    fn degree(&self, x: &Self::Elem) -> usize;

    /// The unit `I` in `C^1`.
    fn unit(&self) -> Self::Elem;

    fn zero(&self, degree: usize) -> Self::Elem;

    fn is_zero(&self, x: &Self::Elem) -> bool;

    /// `f ∘_i g`. Callers guarantee `i < degree(f)`; models still reject
    /// operands that do not belong to them.
    fn compose_unchecked(&self, f: &Self::Elem, i: usize, g: &Self::Elem) -> Result<Self::Elem>;

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;

    fn scale(&self, x: &Self::Elem, s: &Scalar) -> Result<Self::Elem>;

    fn neg(&self, x: &Self::Elem) -> Self::Elem;
}

/// The desuspended degree `|f| = deg(f) - 1`.
pub fn desusp<P: PreOperad>(op: &P, x: &P::Elem) -> i64 {
    op.degree(x) as i64 - 1
}

/// The partial composition `f ∘_i g`, of degree `deg(f) + deg(g) - 1`.
pub fn compose_at<P: PreOperad>(op: &P, f: &P::Elem, i: usize, g: &P::Elem) -> Result<P::Elem> {
    let n = op.degree(f);
    if n == 0 {
        return Err(Error::NoValidPosition);
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, max: n - 1 });
    }
    op.compose_unchecked(f, i, g)
}

pub(crate) fn signed<P: PreOperad>(op: &P, x: P::Elem, sign: Sign) -> P::Elem {
    match sign {
        Sign::Plus => x,
        Sign::Minus => op.neg(&x),
    }
}

pub(crate) fn sub<P: PreOperad>(op: &P, x: &P::Elem, y: &P::Elem) -> Result<P::Elem> {
    op.add(x, &op.neg(y))
}

/// Running sum of signed terms of one degree.
pub(crate) struct Sum<'a, P: PreOperad> {
    op: &'a P,
    acc: P::Elem,
}

impl<'a, P: PreOperad> Sum<'a, P> {
    pub(crate) fn new(op: &'a P, degree: usize) -> Self {
        Sum {
            op,
            acc: op.zero(degree),
        }
    }

    pub(crate) fn push(&mut self, sign: Sign, term: &P::Elem) -> Result<()> {
        self.acc = match sign {
            Sign::Plus => self.op.add(&self.acc, term)?,
            Sign::Minus => self.op.add(&self.acc, &self.op.neg(term))?,
        };
        Ok(())
    }

    pub(crate) fn finish(self) -> P::Elem {
        self.acc
    }
}

/// Degree arithmetic shared by every operation: reject negative targets.
pub(crate) fn target_degree(degree: i64) -> Result<usize> {
    usize::try_from(degree).map_err(|_| Error::NegativeDegree(degree))
}
