//! The endomorphism pre-operad of a free module `A = K^d`.
//!
//! A degree-`n` element is a multilinear map `A^{⊗n} → A`, stored as a dense
//! tensor of `d^{n+1}` coefficients indexed `[out; in_1, .., in_n]` in
//! row-major order with the output index slowest. Partial composition is
//! substitution with the sign `(-1)^{i|g|}`:
//!
//! ```text
//! f ∘_i g = (-1)^{i|g|} f ∘ (id^{⊗i} ⊗ g ⊗ id^{⊗(|f|-i)})
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::PreOperad;
use crate::error::{Error, Result};
use crate::ring::{Ring, Scalar, Sign};

pub const MAX_DIM: usize = 8;

/// A multilinear map on `K^d` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "HomElementJson", into = "HomElementJson")]
pub struct HomElement {
    dim: usize,
    arity: usize,
    ring: Ring,
    coeffs: Vec<Scalar>,
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::InvalidDimension(dim))
    }
}

impl HomElement {
    pub fn new(ring: Ring, dim: usize, arity: usize, coeffs: Vec<Scalar>) -> Result<Self> {
        check_dim(dim)?;
        let expected = dim.pow(arity as u32 + 1);
        if coeffs.len() != expected {
            return Err(Error::CoefficientCount {
                expected,
                found: coeffs.len(),
            });
        }
        if let Some(bad) = coeffs.iter().find(|c| c.ring() != ring) {
            return Err(Error::MixedRings(ring, bad.ring()));
        }
        Ok(HomElement {
            dim,
            arity,
            ring,
            coeffs,
        })
    }

    pub fn zero(ring: Ring, dim: usize, arity: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(HomElement {
            dim,
            arity,
            ring,
            coeffs: vec![ring.zero(); dim.pow(arity as u32 + 1)],
        })
    }

    /// The basis map sending exactly one input tuple to one output basis
    /// vector; `index` is the flat coefficient index.
    pub fn basis(ring: Ring, dim: usize, arity: usize, index: usize) -> Result<Self> {
        let mut out = HomElement::zero(ring, dim, arity)?;
        let max = out.coeffs.len() - 1;
        let slot = out
            .coeffs
            .get_mut(index)
            .ok_or(Error::IndexOutOfRange { index, max })?;
        *slot = ring.one();
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Coefficient of `e_out` in `f(e_{inputs[0]}, ..)`.
    pub fn coefficient(&self, out: usize, inputs: &[usize]) -> &Scalar {
        assert_eq!(inputs.len(), self.arity, "wrong number of inputs");
        let flat = inputs
            .iter()
            .fold(out, |acc, &b| acc * self.dim + b);
        &self.coeffs[flat]
    }

    fn compatible(&self, other: &HomElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::MixedRings(self.ring, other.ring));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    /// Unsigned substitution `f ∘ (id^{⊗i} ⊗ g ⊗ id^{⊗(m-1-i)})`.
    pub fn substitute(&self, i: usize, g: &HomElement) -> Result<HomElement> {
        self.compatible(g)?;
        let (d, m, n) = (self.dim, self.arity, g.arity);
        if m == 0 {
            return Err(Error::NoValidPosition);
        }
        if i >= m {
            return Err(Error::IndexOutOfRange { index: i, max: m - 1 });
        }
        let rest = m - 1 - i;
        let (pre, mid, suf) = (d.pow(i as u32), d.pow(n as u32), d.pow(rest as u32));
        let mut coeffs = vec![self.ring.zero(); d * pre * mid * suf];
        for out in 0..d {
            for p in 0..pre {
                let head = out * pre + p;
                for c in 0..d {
                    for s in 0..suf {
                        let fc = &self.coeffs[(head * d + c) * suf + s];
                        if fc.is_zero() {
                            continue;
                        }
                        for q in 0..mid {
                            let gc = &g.coeffs[c * mid + q];
                            if !gc.is_zero() {
                                coeffs[(head * mid + q) * suf + s].add_product(fc, gc);
                            }
                        }
                    }
                }
            }
        }
        Ok(HomElement {
            dim: d,
            arity: m + n - 1,
            ring: self.ring,
            coeffs,
        })
    }

    pub fn checked_add(&self, other: &HomElement) -> Result<HomElement> {
        self.compatible(other)?;
        if self.arity != other.arity {
            return Err(Error::DegreeMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(HomElement {
            coeffs,
            ..self.clone()
        })
    }

    pub fn scale(&self, s: &Scalar) -> Result<HomElement> {
        if s.ring() != self.ring {
            return Err(Error::MixedRings(self.ring, s.ring()));
        }
        Ok(HomElement {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            ..self.clone()
        })
    }

    pub fn neg(&self) -> HomElement {
        HomElement {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            ..self.clone()
        }
    }
}

/// The identity map of `K^d`, the unit of the pre-operad.
pub fn identity_hom(ring: Ring, dim: usize) -> Result<HomElement> {
    let mut out = HomElement::zero(ring, dim, 1)?;
    for k in 0..dim {
        out.coeffs[k * dim + k] = ring.one();
    }
    Ok(out)
}

/// `f ∘_i g = (-1)^{i|g|} f ∘ (id^{⊗i} ⊗ g ⊗ id^{⊗(|f|-i)})`.
pub fn endo_compose_at(f: &HomElement, i: usize, g: &HomElement) -> Result<HomElement> {
    let raw = f.substitute(i, g)?;
    Ok(match Sign::koszul(i as i64, g.arity as i64 - 1) {
        Sign::Plus => raw,
        Sign::Minus => raw.neg(),
    })
}

/// Applies `f` to `args`, one coordinate vector per input.
pub fn eval(f: &HomElement, args: &[Vec<Scalar>]) -> Result<Vec<Scalar>> {
    if args.len() != f.arity {
        return Err(Error::ArityMismatch {
            expected: f.arity,
            found: args.len(),
        });
    }
    let d = f.dim;
    if let Some(bad) = args.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch(d, bad.len()));
    }
    if let Some(bad) = args.iter().flatten().find(|c| c.ring() != f.ring) {
        return Err(Error::MixedRings(f.ring, bad.ring()));
    }
    // contract the last input first
    let mut tensor = f.coeffs.clone();
    for arg in args.iter().rev() {
        tensor = tensor
            .chunks(d)
            .map(|row| {
                let mut acc = f.ring.zero();
                for (c, x) in row.iter().zip(arg) {
                    acc.add_product(c, x);
                }
                acc
            })
            .collect();
    }
    Ok(tensor)
}

/// A random element with every coefficient drawn by
/// [`Ring::random_scalar`].
pub fn random_hom<R: Rng + ?Sized>(ring: Ring, dim: usize, arity: usize, rng: &mut R) -> Result<HomElement> {
    check_dim(dim)?;
    let coeffs = (0..dim.pow(arity as u32 + 1))
        .map(|_| ring.random_scalar(rng))
        .collect();
    HomElement::new(ring, dim, arity, coeffs)
}

pub fn random_hom_seeded(ring: Ring, dim: usize, arity: usize, seed: u64) -> Result<HomElement> {
    random_hom(ring, dim, arity, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `End(K^d)` as a pre-operad.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EndoOperad {
    ring: Ring,
    dim: usize,
}

impl EndoOperad {
    pub fn new(ring: Ring, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(EndoOperad { ring, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, x: &HomElement) -> Result<()> {
        if x.ring != self.ring {
            return Err(Error::MixedRings(self.ring, x.ring));
        }
        if x.dim != self.dim {
            return Err(Error::DimensionMismatch(self.dim, x.dim));
        }
        Ok(())
    }
}

impl PreOperad for EndoOperad {
    type Elem = HomElement;

    fn ring(&self) -> Ring {
        self.ring
    }

    fn degree(&self, x: &HomElement) -> usize {
        x.arity
    }

    fn unit(&self) -> HomElement {
        identity_hom(self.ring, self.dim).expect("dimension validated at construction")
    }

    fn zero(&self, degree: usize) -> HomElement {
        HomElement::zero(self.ring, self.dim, degree).expect("dimension validated at construction")
    }

    fn is_zero(&self, x: &HomElement) -> bool {
        x.is_zero()
    }

    fn compose_unchecked(&self, f: &HomElement, i: usize, g: &HomElement) -> Result<HomElement> {
        self.check(f)?;
        endo_compose_at(f, i, g)
    }

    fn add(&self, x: &HomElement, y: &HomElement) -> Result<HomElement> {
        self.check(x)?;
        x.checked_add(y)
    }

    fn scale(&self, x: &HomElement, s: &Scalar) -> Result<HomElement> {
        self.check(x)?;
        x.scale(s)
    }

    fn neg(&self, x: &HomElement) -> HomElement {
        x.neg()
    }
}

/// External JSON form:
/// `{"dim": d, "arity": n, "ring": "q", "coeffs": ["1/2", ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomElementJson {
    pub dim: usize,
    pub arity: usize,
    pub ring: String,
    pub coeffs: Vec<String>,
}

impl From<HomElement> for HomElementJson {
    fn from(x: HomElement) -> Self {
        HomElementJson {
            dim: x.dim,
            arity: x.arity,
            ring: x.ring.to_string(),
            coeffs: x.coeffs.iter().map(ToString::to_string).collect(),
        }
    }
}

impl TryFrom<HomElementJson> for HomElement {
    type Error = Error;

    fn try_from(json: HomElementJson) -> Result<Self> {
        let ring: Ring = json.ring.parse()?;
        let coeffs = json
            .coeffs
            .iter()
            .map(|c| ring.parse_scalar(c))
            .collect::<Result<Vec<_>>>()?;
        HomElement::new(ring, json.dim, json.arity, coeffs)
    }
}

impl HomElement {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("element serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{compose_at, relation_rhs, scope};

    fn scalar_elem(ring: Ring, arity: usize, c: i64) -> HomElement {
        HomElement::new(ring, 1, arity, vec![ring.from_i64(c)]).unwrap()
    }

    fn vector(ring: Ring, xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| ring.from_i64(x)).collect()
    }

    #[test]
    fn identity_examples() {
        let r = Ring::Rationals;
        assert_eq!(identity_hom(r, 1).unwrap(), scalar_elem(r, 1, 1));
        let id2 = identity_hom(r, 2).unwrap();
        assert_eq!(id2.coeffs(), &vector(r, &[1, 0, 0, 1])[..]);
        assert_eq!(identity_hom(r, 0), Err(Error::InvalidDimension(0)));
        assert_eq!(identity_hom(r, 9), Err(Error::InvalidDimension(9)));
    }

    #[test]
    fn scalar_model_signs() {
        let r = Ring::Rationals;
        let f = scalar_elem(r, 2, 2);
        let g3 = scalar_elem(r, 3, 3);
        // |g| = 2 even: no sign at any position
        assert_eq!(endo_compose_at(&f, 0, &g3).unwrap(), scalar_elem(r, 4, 6));
        assert_eq!(endo_compose_at(&f, 1, &g3).unwrap(), scalar_elem(r, 4, 6));
        // (-1)^{1*1}
        let g2 = scalar_elem(r, 2, 3);
        assert_eq!(endo_compose_at(&f, 1, &g2).unwrap(), scalar_elem(r, 3, -6));
        assert_eq!(endo_compose_at(&f, 0, &g2).unwrap(), scalar_elem(r, 3, 6));
    }

    #[test]
    fn composing_with_a_vector_contracts() {
        let r = Ring::Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_hom(r, 2, 3, &mut rng).unwrap();
        let v = random_hom(r, 2, 0, &mut rng).unwrap();
        let c = endo_compose_at(&f, 1, &v).unwrap();
        assert_eq!(c.arity(), 2);
        // (-1)^{1 * (-1)} = -1 at position 1
        let a = random_hom(r, 2, 0, &mut rng).unwrap();
        let b = random_hom(r, 2, 0, &mut rng).unwrap();
        let lhs = eval(&c, &[a.coeffs().to_vec(), b.coeffs().to_vec()]).unwrap();
        let rhs = eval(&f, &[a.coeffs().to_vec(), v.coeffs().to_vec(), b.coeffs().to_vec()]).unwrap();
        let neg: Vec<_> = rhs.into_iter().map(|x| -x).collect();
        assert_eq!(lhs, neg);
    }

    #[test]
    fn index_and_dimension_errors() {
        let r = Ring::Rationals;
        let f = random_hom_seeded(r, 2, 2, 1).unwrap();
        let g = random_hom_seeded(r, 3, 2, 1).unwrap();
        assert_eq!(endo_compose_at(&f, 0, &g), Err(Error::DimensionMismatch(2, 3)));
        let g = random_hom_seeded(r, 2, 1, 1).unwrap();
        assert_eq!(
            endo_compose_at(&f, 2, &g),
            Err(Error::IndexOutOfRange { index: 2, max: 1 })
        );
        let v = random_hom_seeded(r, 2, 0, 1).unwrap();
        assert_eq!(endo_compose_at(&v, 0, &g), Err(Error::NoValidPosition));
        assert!(HomElement::new(r, 2, 1, vector(r, &[1, 2, 3])).is_err());
    }

    #[test]
    fn eval_examples() {
        let r = Ring::Rationals;
        let id = identity_hom(r, 2).unwrap();
        assert_eq!(eval(&id, &[vector(r, &[1, 0])]).unwrap(), vector(r, &[1, 0]));
        // mu(e_i, e_j) = e_min(i, j)
        let mut coeffs = vec![r.zero(); 8];
        for i in 0..2 {
            for j in 0..2 {
                coeffs[i.min(j) * 4 + i * 2 + j] = r.one();
            }
        }
        let mu = HomElement::new(r, 2, 2, coeffs).unwrap();
        assert_eq!(
            eval(&mu, &[vector(r, &[1, 0]), vector(r, &[0, 1])]).unwrap(),
            vector(r, &[1, 0])
        );
        assert_eq!(*mu.coefficient(0, &[1, 0]), r.one());
        assert!(eval(&mu, &[vector(r, &[1, 0])]).is_err());
    }

    /// Pointwise check of the substitution against functional composition.
    #[test]
    fn composition_matches_functional_composition() {
        for ring in [Ring::Rationals, Ring::IntegersMod(3)] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..40 {
                let d = rng.random_range(1..=3);
                let m = rng.random_range(1..=3);
                let n = rng.random_range(0..=3);
                let i = rng.random_range(0..m);
                let f = random_hom(ring, d, m, &mut rng).unwrap();
                let g = random_hom(ring, d, n, &mut rng).unwrap();
                let args: Vec<Vec<Scalar>> = (0..m + n - 1)
                    .map(|_| random_hom(ring, d, 0, &mut rng).unwrap().coeffs().to_vec())
                    .collect();
                let lhs = eval(&endo_compose_at(&f, i, &g).unwrap(), &args).unwrap();
                let inner = eval(&g, &args[i..i + n]).unwrap();
                let mut outer_args = args[..i].to_vec();
                outer_args.push(inner);
                outer_args.extend_from_slice(&args[i + n..]);
                let mut rhs = eval(&f, &outer_args).unwrap();
                if Sign::koszul(i as i64, n as i64 - 1).is_minus() {
                    rhs = rhs.into_iter().map(|x| -x).collect();
                }
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn composition_relations_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for ring in [Ring::Rationals, Ring::IntegersMod(2), Ring::IntegersMod(3)] {
            for d in 1..=3 {
                let op = EndoOperad::new(ring, d).unwrap();
                for _ in 0..6 {
                    let hd = rng.random_range(1..=3);
                    let fd = rng.random_range(0..=3);
                    let gd = rng.random_range(0..=3);
                    let h = random_hom(ring, d, hd, &mut rng).unwrap();
                    let f = random_hom(ring, d, fd, &mut rng).unwrap();
                    let g = random_hom(ring, d, gd, &mut rng).unwrap();
                    for (i, j) in scope(hd, fd) {
                        let lhs = compose_at(&op, &compose_at(&op, &h, i, &f).unwrap(), j, &g).unwrap();
                        assert_eq!(lhs, relation_rhs(&op, &h, &f, &g, i, j).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn unit_axioms() {
        let op = EndoOperad::new(Ring::Rationals, 2).unwrap();
        let unit = op.unit();
        for n in 0..=3 {
            let f = random_hom_seeded(Ring::Rationals, 2, n, n as u64).unwrap();
            assert_eq!(compose_at(&op, &unit, 0, &f).unwrap(), f);
            for i in 0..n {
                assert_eq!(compose_at(&op, &f, i, &unit).unwrap(), f);
            }
        }
    }

    #[test]
    fn random_is_deterministic() {
        let r = Ring::Rationals;
        assert_eq!(random_hom_seeded(r, 2, 2, 5), random_hom_seeded(r, 2, 2, 5));
        assert_ne!(random_hom_seeded(r, 2, 2, 5), random_hom_seeded(r, 2, 2, 6));
    }

    #[test]
    fn json_format() {
        let r = Ring::Rationals;
        let f = HomElement::new(
            r,
            1,
            2,
            vec![r.parse_scalar("-3/4").unwrap()],
        )
        .unwrap();
        assert_eq!(f.to_json(), r#"{"dim":1,"arity":2,"ring":"q","coeffs":["-3/4"]}"#);
        assert_eq!(HomElement::from_json(&f.to_json()).unwrap(), f);
        let z3 = r#"{"dim":1,"arity":0,"ring":"zmod:3","coeffs":["2 mod 3"]}"#;
        assert_eq!(HomElement::from_json(z3).unwrap().to_json(), z3);
        assert!(HomElement::from_json(r#"{"dim":2,"arity":0,"ring":"q","coeffs":["1"]}"#).is_err());
    }
}
