use super::{compose_at, desusp, signed, sub, target_degree, PreOperad, Sum};
use crate::error::{Error, Result};
use crate::ring::Sign;

fn require_binary<P: PreOperad>(op: &P, mu: &P::Elem) -> Result<()> {
    match op.degree(mu) {
        2 => Ok(()),
        n => Err(Error::NotBinary(n)),
    }
}

/// `f ⌣ g = (-1)^f (μ ∘_0 f) ∘_f g`, of degree `deg(f) + deg(g)`.
pub fn cup<P: PreOperad>(op: &P, mu: &P::Elem, f: &P::Elem, g: &P::Elem) -> Result<P::Elem> {
    require_binary(op, mu)?;
    let n = op.degree(f);
    let inner = compose_at(op, mu, 0, f)?;
    let outer = compose_at(op, &inner, n, g)?;
    Ok(signed(op, outer, Sign::power(n as i64)))
}

/// Total composition `f • g = Σ_{i=0}^{|f|} f ∘_i g`.
///
/// For `deg(f) = 0` the sum is empty and lands in degree `deg(g) - 1`.
pub fn total<P: PreOperad>(op: &P, f: &P::Elem, g: &P::Elem) -> Result<P::Elem> {
    let (m, n) = (op.degree(f), op.degree(g));
    let mut sum = Sum::new(op, target_degree(m as i64 + n as i64 - 1)?);
    for i in 0..m {
        sum.push(Sign::Plus, &op.compose_unchecked(f, i, g)?)?;
    }
    Ok(sum.finish())
}

/// Gerstenhaber braces: the sum of `(h ∘_i f) ∘_j g` over the region where
/// `g` enters `h` to the right of `f`.
pub fn braces<P: PreOperad>(op: &P, h: &P::Elem, f: &P::Elem, g: &P::Elem) -> Result<P::Elem> {
    let (dh, df, dg) = (op.degree(h), op.degree(f), op.degree(g));
    let degree = target_degree(dh as i64 + df as i64 + dg as i64 - 2)?;
    let mut sum = Sum::new(op, degree);
    // i in 0..=|h|-1, j in i+f..=|f|+|h|
    for i in 0..dh.saturating_sub(1) {
        let hf = op.compose_unchecked(h, i, f)?;
        for j in (i + df)..(df + dh).saturating_sub(1) {
            sum.push(Sign::Plus, &op.compose_unchecked(&hf, j, g)?)?;
        }
    }
    Ok(sum.finish())
}

/// `(h, f, g) = (h • f) • g - h • (f • g)`.
pub fn associator<P: PreOperad>(
    op: &P,
    h: &P::Elem,
    f: &P::Elem,
    g: &P::Elem,
) -> Result<P::Elem> {
    let left = total(op, &total(op, h, f)?, g)?;
    let right = total(op, h, &total(op, f, g)?)?;
    sub(op, &left, &right)
}

/// `[f, g] = f • g - (-1)^{|f||g|} g • f`.
pub fn commutator<P: PreOperad>(op: &P, f: &P::Elem, g: &P::Elem) -> Result<P::Elem> {
    let sign = Sign::koszul(desusp(op, f), desusp(op, g));
    let fg = total(op, f, g)?;
    let gf = total(op, g, f)?;
    op.add(&fg, &signed(op, gf, -sign))
}

/// The graded Jacobian
/// `(-1)^{|f||h|}[[f,g],h] + (-1)^{|g||f|}[[g,h],f] + (-1)^{|h||g|}[[h,f],g]`.
pub fn jacobian<P: PreOperad>(op: &P, f: &P::Elem, g: &P::Elem, h: &P::Elem) -> Result<P::Elem> {
    let (df, dg, dh) = (desusp(op, f), desusp(op, g), desusp(op, h));
    let a = commutator(op, &commutator(op, f, g)?, h)?;
    let b = commutator(op, &commutator(op, g, h)?, f)?;
    let c = commutator(op, &commutator(op, h, f)?, g)?;
    let mut sum = Sum::new(op, op.degree(&a));
    sum.push(Sign::koszul(df, dh), &a)?;
    sum.push(Sign::koszul(dg, df), &b)?;
    sum.push(Sign::koszul(dh, dg), &c)?;
    Ok(sum.finish())
}

/// The pre-coboundary `δ_μ f = (-1)^{|f|} μ • f - f • μ`, i.e. `-δ_μ f = [f, μ]`.
pub fn delta<P: PreOperad>(op: &P, mu: &P::Elem, f: &P::Elem) -> Result<P::Elem> {
    require_binary(op, mu)?;
    let mut sum = Sum::new(op, op.degree(f) + 1);
    sum.push(Sign::power(desusp(op, f)), &total(op, mu, f)?)?;
    sum.push(Sign::Minus, &total(op, f, mu)?)?;
    Ok(sum.finish())
}

/// The pre-coboundary through cups with the unit:
/// `-δ_μ f = f ⌣ I + f • μ + (-1)^{|f|} I ⌣ f`.
pub fn delta_via_cup<P: PreOperad>(op: &P, mu: &P::Elem, f: &P::Elem) -> Result<P::Elem> {
    require_binary(op, mu)?;
    let unit = op.unit();
    let mut sum = Sum::new(op, op.degree(f) + 1);
    sum.push(Sign::Minus, &cup(op, mu, f, &unit)?)?;
    sum.push(Sign::Minus, &total(op, f, mu)?)?;
    sum.push(
        -Sign::koszul(desusp(op, f), 1),
        &cup(op, mu, &unit, f)?,
    )?;
    Ok(sum.finish())
}

/// Derivation deviation of `δ_μ` over `•`:
/// `δ_μ(f • g) - f • δ_μ g - (-1)^{|g|} (δ_μ f) • g`.
pub fn dev_total<P: PreOperad>(op: &P, mu: &P::Elem, f: &P::Elem, g: &P::Elem) -> Result<P::Elem> {
    require_binary(op, mu)?;
    let a = delta(op, mu, &total(op, f, g)?)?;
    let b = total(op, f, &delta(op, mu, g)?)?;
    let c = total(op, &delta(op, mu, f)?, g)?;
    let mut sum = Sum::new(op, op.degree(&a));
    sum.push(Sign::Plus, &a)?;
    sum.push(Sign::Minus, &b)?;
    sum.push(-Sign::power(desusp(op, g)), &c)?;
    Ok(sum.finish())
}

/// Derivation deviation of `δ_μ` over the braces:
/// `δ{h,f,g} - {h,f,δg} - (-1)^{|g|}{h,δf,g} - (-1)^{|g|+|f|}{δh,f,g}`.
pub fn dev_braces<P: PreOperad>(
    op: &P,
    mu: &P::Elem,
    h: &P::Elem,
    f: &P::Elem,
    g: &P::Elem,
) -> Result<P::Elem> {
    require_binary(op, mu)?;
    let (df, dg) = (desusp(op, f), desusp(op, g));
    let a = delta(op, mu, &braces(op, h, f, g)?)?;
    let b = braces(op, h, f, &delta(op, mu, g)?)?;
    let c = braces(op, h, &delta(op, mu, f)?, g)?;
    let d = braces(op, &delta(op, mu, h)?, f, g)?;
    let mut sum = Sum::new(op, op.degree(&a));
    sum.push(Sign::Plus, &a)?;
    sum.push(Sign::Minus, &b)?;
    sum.push(-Sign::power(dg), &c)?;
    sum.push(-Sign::power(dg + df), &d)?;
    Ok(sum.finish())
}
