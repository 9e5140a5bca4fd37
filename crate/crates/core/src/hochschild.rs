//! Hochschild cohomology of a finite-dimensional algebra through the
//! pre-coboundary of its multiplication.
//!
//! An algebra is given by structure constants `μ(e_i, e_j) = Σ_k c[k][i][j] e_k`.
//! Associativity is `μ • μ = 0`; when it holds, `δ_μ` squares to zero and
//! its matrices in the tensor basis give the cohomology. An independent
//! implementation of the classical coboundary
//!
//! ```text
//! (δf)(a_0..a_n) = a_0 f(a_1..a_n) + Σ_i (-1)^{i+1} f(..a_i a_{i+1}..)
//!                  + (-1)^{n+1} f(a_0..a_{n-1}) a_n
//! ```
//!
//! serves as the oracle. No normalization between the two is assumed: the
//! checks compare ranks, and [`sign_relation`] reports the observed
//! per-degree relation (on the algebras tested it is `+1` throughout).

use serde::{Deserialize, Serialize};

use crate::calculus::{delta, total};
use crate::endo::{eval, EndoOperad, HomElement};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{Ring, Scalar};

/// Structure constants of a `d`-dimensional algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    ring: Ring,
    dim: usize,
    /// `constants[k][i][j]`
    constants: Vec<Vec<Vec<Scalar>>>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarJson {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    dim: usize,
    #[serde(default = "default_ring")]
    ring: String,
    mu: Vec<Vec<Vec<ScalarJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

fn default_ring() -> String {
    "q".into()
}

impl AlgebraSpec {
    pub fn new(
        ring: Ring,
        dim: usize,
        constants: Vec<Vec<Vec<Scalar>>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if dim == 0 || dim > crate::endo::MAX_DIM {
            return Err(Error::InvalidDimension(dim));
        }
        let shape_ok = constants.len() == dim
            && constants
                .iter()
                .all(|m| m.len() == dim && m.iter().all(|row| row.len() == dim));
        if !shape_ok {
            return Err(Error::Format(format!(
                "structure constants must have shape {dim}x{dim}x{dim}"
            )));
        }
        if let Some(bad) = constants.iter().flatten().flatten().find(|c| c.ring() != ring) {
            return Err(Error::MixedRings(ring, bad.ring()));
        }
        if labels.as_ref().is_some_and(|l| l.len() != dim) {
            return Err(Error::Format(format!("expected {dim} basis labels")));
        }
        Ok(AlgebraSpec {
            ring,
            dim,
            constants,
            labels,
        })
    }

    /// Builds the algebra from a product table `μ(e_i, e_j)` given as vectors.
    pub fn from_table(ring: Ring, dim: usize, table: impl Fn(usize, usize) -> Vec<i64>) -> Result<Self> {
        let mut constants = vec![vec![vec![ring.zero(); dim]; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let v = table(i, j);
                if v.len() != dim {
                    return Err(Error::DimensionMismatch(dim, v.len()));
                }
                for (k, x) in v.into_iter().enumerate() {
                    constants[k][i][j] = ring.from_i64(x);
                }
            }
        }
        AlgebraSpec::new(ring, dim, constants, None)
    }

    /// The ground ring `K` itself.
    pub fn ground(ring: Ring) -> Self {
        AlgebraSpec::from_table(ring, 1, |_, _| vec![1]).expect("valid table")
    }

    /// `K^d` with orthogonal idempotents `e_i e_j = δ_ij e_i`.
    pub fn diagonal(ring: Ring, dim: usize) -> Result<Self> {
        AlgebraSpec::from_table(ring, dim, |i, j| {
            (0..dim).map(|k| i64::from(i == j && k == i)).collect()
        })
    }

    /// `K[x]/(x^2)` on the basis `1, x`.
    pub fn dual_numbers(ring: Ring) -> Self {
        let mut spec = AlgebraSpec::from_table(ring, 2, |i, j| match (i, j) {
            (0, 0) => vec![1, 0],
            (0, 1) | (1, 0) => vec![0, 1],
            _ => vec![0, 0],
        })
        .expect("valid table");
        spec.labels = Some(vec!["1".into(), "x".into()]);
        spec
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// `{"dim": d, "ring": "q", "mu": [[["1", ..]]], "labels": [..]}`; entries
    /// may also be bare integers.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: AlgebraJson = serde_json::from_str(text)?;
        let ring: Ring = raw.ring.parse()?;
        let constants = raw
            .mu
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|row| {
                        row.into_iter()
                            .map(|x| match x {
                                ScalarJson::Int(n) => Ok(ring.from_i64(n)),
                                ScalarJson::Text(t) => ring.parse_scalar(&t),
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        AlgebraSpec::new(ring, raw.dim, constants, raw.labels)
    }

    pub fn to_json(&self) -> String {
        let raw = AlgebraJson {
            dim: self.dim,
            ring: self.ring.to_string(),
            mu: self
                .constants
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|row| row.iter().map(|x| ScalarJson::Text(x.to_string())).collect())
                        .collect()
                })
                .collect(),
            labels: self.labels.clone(),
        };
        serde_json::to_string(&raw).expect("spec serializes")
    }
}

/// `μ` as a degree-2 element: `coeffs[k; i, j] = c[k][i][j]`.
pub fn mu_from_spec(spec: &AlgebraSpec) -> Result<HomElement> {
    let d = spec.dim;
    let mut coeffs = Vec::with_capacity(d * d * d);
    for k in 0..d {
        for i in 0..d {
            for j in 0..d {
                coeffs.push(spec.constants[k][i][j].clone());
            }
        }
    }
    HomElement::new(spec.ring, d, 2, coeffs)
}

fn require_binary(mu: &HomElement) -> Result<()> {
    match mu.arity() {
        2 => Ok(()),
        n => Err(Error::NotBinary(n)),
    }
}

/// `μ • μ = 0`.
pub fn is_associative(mu: &HomElement) -> Result<bool> {
    require_binary(mu)?;
    let op = EndoOperad::new(mu.ring(), mu.dim())?;
    Ok(total(&op, mu, mu)?.is_zero())
}

/// A basis triple on which `(ab)c != a(bc)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub triple: [usize; 3],
    /// `(e_a e_b) e_c` in coordinates.
    pub left: Vec<Scalar>,
    /// `e_a (e_b e_c)` in coordinates.
    pub right: Vec<Scalar>,
}

/// The first basis triple, in lexicographic order, violating associativity,
/// computed by direct evaluation.
pub fn associativity_witness(mu: &HomElement) -> Result<Option<Witness>> {
    require_binary(mu)?;
    let (ring, d) = (mu.ring(), mu.dim());
    let basis = |k: usize| -> Vec<Scalar> {
        (0..d).map(|i| if i == k { ring.one() } else { ring.zero() }).collect()
    };
    for a in 0..d {
        for b in 0..d {
            let ab = eval(mu, &[basis(a), basis(b)])?;
            for c in 0..d {
                let left = eval(mu, &[ab.clone(), basis(c)])?;
                let bc = eval(mu, &[basis(b), basis(c)])?;
                let right = eval(mu, &[basis(a), bc])?;
                if left != right {
                    return Ok(Some(Witness {
                        triple: [a, b, c],
                        left,
                        right,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// The matrix of `C^n → C^{n+1}` whose column `k` holds the coefficients of
/// the image of basis cochain `k`.
fn matrix_of(
    mu: &HomElement,
    n: usize,
    image: impl Fn(&HomElement) -> Result<HomElement>,
) -> Result<Matrix> {
    let (ring, d) = (mu.ring(), mu.dim());
    let cols = d.pow(n as u32 + 1);
    let rows = d.pow(n as u32 + 2);
    let mut m = Matrix::zero(ring, rows, cols);
    for k in 0..cols {
        let column = image(&HomElement::basis(ring, d, n, k)?)?;
        for (r, x) in column.coeffs().iter().enumerate() {
            if !x.is_zero() {
                m.set(r, k, x.clone())?;
            }
        }
    }
    Ok(m)
}

/// `δ_μ: C^n → C^{n+1}` as a `d^{n+2} × d^{n+1}` matrix. `μ` must be
/// associative.
pub fn delta_matrix(mu: &HomElement, n: usize) -> Result<Matrix> {
    if !is_associative(mu)? {
        return Err(Error::NotAssociative);
    }
    let op = EndoOperad::new(mu.ring(), mu.dim())?;
    matrix_of(mu, n, |f| delta(&op, mu, f))
}

/// The classical coboundary, written directly on coefficient tensors.
pub fn standard_delta(mu: &HomElement, f: &HomElement) -> Result<HomElement> {
    require_binary(mu)?;
    if mu.ring() != f.ring() {
        return Err(Error::MixedRings(mu.ring(), f.ring()));
    }
    if mu.dim() != f.dim() {
        return Err(Error::DimensionMismatch(mu.dim(), f.dim()));
    }
    let (ring, d, n) = (f.ring(), f.dim(), f.arity());
    let size = d.pow(n as u32 + 2);
    let mut coeffs = vec![ring.zero(); size];
    let mut idx = vec![0usize; n + 2];
    let mut args = vec![0usize; n];
    for (flat, slot) in coeffs.iter_mut().enumerate() {
        // idx = [out, a_0, .., a_n]
        let mut rest = flat;
        for p in (0..n + 2).rev() {
            idx[p] = rest % d;
            rest /= d;
        }
        let out = idx[0];
        let a = &idx[1..];
        let mut acc = ring.zero();
        for c in 0..d {
            // a_0 · f(a_1..a_n)
            acc.add_product(mu.coefficient(out, &[a[0], c]), f.coefficient(c, &a[1..]));
            // f(a_0..a_{n-1}) · a_n
            let last = f.coefficient(c, &a[..n]) * mu.coefficient(out, &[c, a[n]]);
            acc = if (n + 1) % 2 == 0 { &acc + &last } else { &acc - &last };
            // f(.., a_i a_{i+1}, ..)
            for i in 0..n {
                args[..i].copy_from_slice(&a[..i]);
                args[i] = c;
                args[i + 1..].copy_from_slice(&a[i + 2..]);
                let term = mu.coefficient(c, &[a[i], a[i + 1]]) * f.coefficient(out, &args);
                acc = if (i + 1) % 2 == 0 { &acc + &term } else { &acc - &term };
            }
        }
        *slot = acc;
    }
    HomElement::new(ring, d, n + 1, coeffs)
}

/// Matrix of [`standard_delta`] on `C^n`.
pub fn standard_delta_matrix(mu: &HomElement, n: usize) -> Result<Matrix> {
    matrix_of(mu, n, |f| standard_delta(mu, f))
}

fn dims_from_ranks(d: usize, ranks: &[usize]) -> Vec<usize> {
    ranks
        .iter()
        .enumerate()
        .map(|(n, &r)| {
            let before = if n == 0 { 0 } else { ranks[n - 1] };
            d.pow(n as u32 + 1) - r - before
        })
        .collect()
}

/// `dim HH^n` for `n = 0..=n_max` from the ranks of `δ_μ`. Ranks over `Z`
/// are taken over `Q`.
pub fn cohomology_dims(spec: &AlgebraSpec, n_max: usize) -> Result<Vec<usize>> {
    let mu = mu_from_spec(spec)?;
    let ranks = (0..=n_max)
        .map(|n| Ok(delta_matrix(&mu, n)?.rank()))
        .collect::<Result<Vec<_>>>()?;
    Ok(dims_from_ranks(spec.dim, &ranks))
}

/// The same dimensions from the classical coboundary.
pub fn oracle_cohomology_dims(spec: &AlgebraSpec, n_max: usize) -> Result<Vec<usize>> {
    let mu = mu_from_spec(spec)?;
    if !is_associative(&mu)? {
        return Err(Error::NotAssociative);
    }
    let ranks = (0..=n_max)
        .map(|n| Ok(standard_delta_matrix(&mu, n)?.rank()))
        .collect::<Result<Vec<_>>>()?;
    Ok(dims_from_ranks(spec.dim, &ranks))
}

/// How `δ_μ` relates to the classical coboundary on `C^n`: `Some(+1)` or
/// `Some(-1)` when one is that multiple of the other, `None` otherwise.
pub fn sign_relation(mu: &HomElement, n: usize) -> Result<Option<i8>> {
    let ours = delta_matrix(mu, n)?;
    let theirs = standard_delta_matrix(mu, n)?;
    Ok(if ours == theirs {
        Some(1)
    } else if ours == theirs.neg() {
        Some(-1)
    } else {
        None
    })
}

/// Everything the `hochschild` command reports about one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildReport {
    pub associative: bool,
    pub witness: Option<Witness>,
    /// From `δ_μ`; absent for non-associative algebras.
    pub dims: Option<Vec<usize>>,
    pub oracle_dims: Option<Vec<usize>>,
    /// `δ_μ ∘ δ_μ = 0` as matrices for every degree computed.
    pub delta_squared_zero: Option<bool>,
    /// Per-degree sign between `δ_μ` and the classical coboundary.
    pub sign_relation: Option<Vec<Option<i8>>>,
}

impl HochschildReport {
    pub fn oracle_agree(&self) -> Option<bool> {
        match (&self.dims, &self.oracle_dims) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        }
    }

    pub fn to_json(&self, labels: Option<&[String]>) -> serde_json::Value {
        let name = |k: usize| match labels {
            Some(l) => serde_json::Value::from(l[k].clone()),
            None => serde_json::Value::from(k),
        };
        let coords = |v: &[Scalar]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        serde_json::json!({
            "associative": self.associative,
            "dims": self.dims,
            "oracle_dims": self.oracle_dims,
            "oracle_agree": self.oracle_agree(),
            "delta_squared_zero": self.delta_squared_zero,
            "sign_relation": self.sign_relation,
            "witness": self.witness.as_ref().map(|w| serde_json::json!({
                "triple": w.triple.iter().map(|&k| name(k)).collect::<Vec<_>>(),
                "left": coords(&w.left),
                "right": coords(&w.right),
            })),
        })
    }
}

/// Associativity, cohomology dimensions up to `n_max` by both routes, and the
/// `δ² = 0` check.
pub fn analyze(spec: &AlgebraSpec, n_max: usize) -> Result<HochschildReport> {
    let mu = mu_from_spec(spec)?;
    let associative = is_associative(&mu)?;
    let witness = associativity_witness(&mu)?;
    debug_assert_eq!(associative, witness.is_none());
    if !associative {
        return Ok(HochschildReport {
            associative,
            witness,
            dims: None,
            oracle_dims: None,
            delta_squared_zero: None,
            sign_relation: None,
        });
    }
    let matrices = (0..=n_max + 1)
        .map(|n| delta_matrix(&mu, n))
        .collect::<Result<Vec<_>>>()?;
    let mut squared_zero = true;
    for pair in matrices.windows(2) {
        squared_zero &= pair[1].mul(&pair[0])?.is_zero();
    }
    let ranks: Vec<usize> = matrices[..=n_max].iter().map(Matrix::rank).collect();
    Ok(HochschildReport {
        associative,
        witness,
        dims: Some(dims_from_ranks(spec.dim, &ranks)),
        oracle_dims: Some(oracle_cohomology_dims(spec, n_max)?),
        delta_squared_zero: Some(squared_zero),
        sign_relation: Some(
            (0..=n_max)
                .map(|n| sign_relation(&mu, n))
                .collect::<Result<_>>()?,
        ),
    })
}
