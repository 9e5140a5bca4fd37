//! Gerstenhaber's auxiliary variables for the derivation deviation over `•`.
//!
//! For `f, g` and `0 <= i <= |f|`:
//!
//! ```text
//! λ_{i+1}  = -(-1)^{|f|+|g|} I ⌣ (f ∘_i g)
//!            - (-1)^{|g|} Σ_{j=0}^{i-1} (f ∘_j μ) ∘_{i+1} g
//!            + (-1)^{|g|} f ∘_i (I ⌣ g)
//! λ'_{i+1} = f ∘_i (g ⌣ I)
//!            - (-1)^{|g|} Σ_{j=i+1}^{|f|} (f ∘_j μ) ∘_i g
//!            - (f ∘_i g) ⌣ I
//! ```
//!
//! The two boundary values `λ_0` and `λ'_{f+1}` have no closed formula; they
//! are fixed by `(-1)^{|g|} (δ_μ f) ∘_i g = λ_i + λ'_{i+1}` at `i = 0` and
//! `i = deg(f)`. Their sum `-λ_0 - λ'_{f+1}` is the deviation itself.

use super::{compose_at, cup, delta, desusp, PreOperad, Sum};
use crate::error::{Error, Result};
use crate::ring::Sign;

fn check_f<P: PreOperad>(op: &P, f: &P::Elem) -> Result<usize> {
    match op.degree(f) {
        0 => Err(Error::NoValidPosition),
        n => Ok(n),
    }
}

/// `λ_k` for `0 <= k <= deg(f)`.
pub fn lambda_aux<P: PreOperad>(
    op: &P,
    mu: &P::Elem,
    f: &P::Elem,
    g: &P::Elem,
    k: usize,
) -> Result<P::Elem> {
    let n = check_f(op, f)?;
    if k > n {
        return Err(Error::AuxIndexOutOfRange {
            index: k,
            min: 0,
            max: n,
        });
    }
    let dg = desusp(op, g);
    if k == 0 {
        let boundary = compose_at(op, &delta(op, mu, f)?, 0, g)?;
        let next = lambda_prime_aux(op, mu, f, g, 1)?;
        let mut sum = Sum::new(op, op.degree(&boundary));
        sum.push(Sign::power(dg), &boundary)?;
        sum.push(Sign::Minus, &next)?;
        return Ok(sum.finish());
    }
    let i = k - 1;
    let unit = op.unit();
    let f_i_g = compose_at(op, f, i, g)?;
    let mut sum = Sum::new(op, op.degree(&f_i_g) + 1);
    sum.push(
        -Sign::power(desusp(op, f) + dg),
        &cup(op, mu, &unit, &f_i_g)?,
    )?;
    for j in 0..i {
        let f_j_mu = compose_at(op, f, j, mu)?;
        sum.push(-Sign::power(dg), &compose_at(op, &f_j_mu, i + 1, g)?)?;
    }
    sum.push(
        Sign::power(dg),
        &compose_at(op, f, i, &cup(op, mu, &unit, g)?)?,
    )?;
    Ok(sum.finish())
}

/// `λ'_k` for `1 <= k <= deg(f) + 1`.
pub fn lambda_prime_aux<P: PreOperad>(
    op: &P,
    mu: &P::Elem,
    f: &P::Elem,
    g: &P::Elem,
    k: usize,
) -> Result<P::Elem> {
    let n = check_f(op, f)?;
    if k == 0 || k > n + 1 {
        return Err(Error::AuxIndexOutOfRange {
            index: k,
            min: 1,
            max: n + 1,
        });
    }
    let dg = desusp(op, g);
    if k == n + 1 {
        let boundary = compose_at(op, &delta(op, mu, f)?, n, g)?;
        let prev = lambda_aux(op, mu, f, g, n)?;
        let mut sum = Sum::new(op, op.degree(&boundary));
        sum.push(Sign::power(dg), &boundary)?;
        sum.push(Sign::Minus, &prev)?;
        return Ok(sum.finish());
    }
    let i = k - 1;
    let unit = op.unit();
    let f_i_g = compose_at(op, f, i, g)?;
    let mut sum = Sum::new(op, op.degree(&f_i_g) + 1);
    sum.push(Sign::Plus, &compose_at(op, f, i, &cup(op, mu, g, &unit)?)?)?;
    for j in (i + 1)..n {
        let f_j_mu = compose_at(op, f, j, mu)?;
        sum.push(-Sign::power(dg), &compose_at(op, &f_j_mu, i, g)?)?;
    }
    sum.push(Sign::Minus, &cup(op, mu, &f_i_g, &unit)?)?;
    Ok(sum.finish())
}
