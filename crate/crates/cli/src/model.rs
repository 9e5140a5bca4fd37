//! Concrete models as the suite and the evaluator see them: a pre-operad
//! that can also sample random elements and print them.

use compcalc::calculus::compose_at;
use compcalc::endo::{identity_hom, random_hom, EndoOperad, HomElement};
use compcalc::free::{random_free, FreeElement, FreeOperad};
use compcalc::{PreOperad, Result, Ring};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub trait Model: PreOperad + Sync {
    /// Short name used in reports, e.g. `endo:2`.
    fn label(&self) -> String;

    /// Smallest degree this model can sample.
    fn min_degree(&self) -> usize;

    fn sample(&self, degree: usize, rng: &mut ChaCha8Rng) -> Result<Self::Elem>;

    /// A random multiplication `μ • μ = 0`, when the model can produce one.
    fn sample_associative(&self, _rng: &mut ChaCha8Rng) -> Result<Option<Self::Elem>> {
        Ok(None)
    }

    /// Upper bound on the sum of input degrees of one identity instance, to
    /// keep dense tensors small; `None` means unbounded.
    fn degree_budget(&self) -> Option<usize> {
        None
    }

    /// Serialization used in counterexamples and `eval` output.
    fn render(&self, x: &Self::Elem) -> String;

    /// JSON form of an element for `--json` output.
    fn to_json(&self, x: &Self::Elem) -> serde_json::Value {
        serde_json::Value::String(self.render(x))
    }
}

impl Model for EndoOperad {
    fn label(&self) -> String {
        format!("endo:{}", self.dim())
    }

    fn min_degree(&self) -> usize {
        0
    }

    fn sample(&self, degree: usize, rng: &mut ChaCha8Rng) -> Result<HomElement> {
        random_hom(self.ring(), self.dim(), degree, rng)
    }

    /// A scalar multiple of one of four associative structures, transported
    /// along a random product of elementary basis changes.
    fn sample_associative(&self, rng: &mut ChaCha8Rng) -> Result<Option<HomElement>> {
        let (ring, d) = (self.ring(), self.dim());
        let kind = rng.random_range(0..4);
        let product = |i: usize, j: usize| -> Option<usize> {
            match kind {
                0 => (i == j).then_some(i),     // K^d
                1 => Some(i),                   // e_i e_j = e_i
                2 => Some(j),                   // e_i e_j = e_j
                _ => (i + j < d).then_some(i + j), // K[x]/(x^d)
            }
        };
        let scale = ring.random_scalar(rng);
        let mut coeffs = vec![ring.zero(); d * d * d];
        for i in 0..d {
            for j in 0..d {
                if let Some(k) = product(i, j) {
                    coeffs[(k * d + i) * d + j] = scale.clone();
                }
            }
        }
        let mut mu = HomElement::new(ring, d, 2, coeffs)?;
        for _ in 0..2 * d {
            if d < 2 {
                break;
            }
            let (a, b) = (rng.random_range(0..d), rng.random_range(0..d));
            if a == b {
                continue;
            }
            let c = ring.random_scalar(rng);
            let (p, p_inv) = (transvection(ring, d, a, b, &c)?, transvection(ring, d, a, b, &-c)?);
            // μ'(x, y) = P μ(P^{-1} x, P^{-1} y); arity-one factors carry no sign
            let pm = compose_at(self, &p, 0, &mu)?;
            let pm = compose_at(self, &pm, 0, &p_inv)?;
            mu = compose_at(self, &pm, 1, &p_inv)?;
        }
        Ok(Some(mu))
    }

    fn degree_budget(&self) -> Option<usize> {
        match self.dim() {
            1 => None,
            2 => Some(8),
            _ => Some(6),
        }
    }

    fn render(&self, x: &HomElement) -> String {
        x.to_json()
    }

    fn to_json(&self, x: &HomElement) -> serde_json::Value {
        serde_json::to_value(x).expect("elements serialize")
    }
}

/// `id + c E_{ab}`; its inverse is the same with `-c`.
fn transvection(ring: Ring, d: usize, a: usize, b: usize, c: &compcalc::Scalar) -> Result<HomElement> {
    let mut coeffs = identity_hom(ring, d)?.coeffs().to_vec();
    coeffs[a * d + b] = c.clone();
    HomElement::new(ring, d, 1, coeffs)
}

impl Model for FreeOperad {
    fn label(&self) -> String {
        let gens: Vec<String> = self
            .signature()
            .generators()
            .iter()
            .map(|g| format!("{}/{}", g.name(), g.arity()))
            .collect();
        format!("free[{}]", gens.join(","))
    }

    fn min_degree(&self) -> usize {
        1
    }

    fn sample(&self, degree: usize, rng: &mut ChaCha8Rng) -> Result<FreeElement> {
        random_free(self.ring(), self.signature(), degree, rng)
    }

    fn degree_budget(&self) -> Option<usize> {
        Some(9)
    }

    fn render(&self, x: &FreeElement) -> String {
        x.to_string()
    }
}
