//! The randomized identity suite.
//!
//! Every identity is a function drawing one random instance and comparing
//! two exact elements. A trial's randomness depends only on the master seed,
//! the cell key (model, ring, identity) and the trial index, so the report is
//! the same whether trials run in parallel or not.

use std::collections::BTreeMap;

use compcalc::calculus::*;
use compcalc::{Error, PreOperad, Result, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::model::Model;

/// The first failing instance of an identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    /// Which equation of the identity failed, e.g. `(i, j) = (1, 0)`.
    pub case: String,
    pub inputs: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub model: String,
    pub ring: String,
    pub seed: u64,
    pub trials: usize,
    pub passes: usize,
    pub counterexample: Option<Counterexample>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.passes == self.trials
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_degree: usize,
    /// Run only identities whose id equals this or starts with it.
    pub only: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            trials: 200,
            max_degree: 4,
            only: None,
        }
    }
}

impl SuiteConfig {
    fn selects(&self, id: &str) -> bool {
        self.only.as_deref().is_none_or(|f| id.starts_with(f))
    }
}

/// A failed equation inside one trial.
pub struct Mismatch {
    pub case: String,
    pub lhs: String,
    pub rhs: String,
}

/// Per-trial state: randomness, degree limits and the inputs drawn so far.
pub struct Probe {
    pub rng: ChaCha8Rng,
    max_degree: usize,
    min_degree: usize,
    budget: Option<usize>,
    inputs: Vec<(String, String)>,
}

impl Probe {
    /// Degrees for several inputs, input `k` at least `lows[k]`, each at
    /// most the configured maximum, accepted by `valid` and, together with
    /// `extra`, within the model's degree budget.
    pub fn degrees(&mut self, lows: &[usize], extra: usize, valid: impl Fn(&[usize]) -> bool) -> Vec<usize> {
        let lows: Vec<usize> = lows.iter().map(|&l| l.max(self.min_degree)).collect();
        for _ in 0..1000 {
            let ds: Vec<usize> = lows
                .iter()
                .map(|&lo| self.rng.random_range(lo..=lo.max(self.max_degree)))
                .collect();
            let within = self
                .budget
                .is_none_or(|b| ds.iter().sum::<usize>() + extra <= b);
            if within && valid(&ds) {
                return ds;
            }
        }
        lows
    }

    /// One degree in `lo..=max` satisfying `pred`, the smallest such if the
    /// range is empty.
    pub fn degree_where(&mut self, lo: usize, pred: impl Fn(usize) -> bool) -> usize {
        let lo = lo.max(self.min_degree);
        let choices: Vec<usize> = (lo..=lo.max(self.max_degree)).filter(|&d| pred(d)).collect();
        match choices.len() {
            0 => (lo..).find(|&d| pred(d)).expect("predicate is satisfiable"),
            n => choices[self.rng.random_range(0..n)],
        }
    }

    pub fn elem<M: Model>(&mut self, m: &M, name: &str, degree: usize) -> Result<M::Elem> {
        let x = m.sample(degree, &mut self.rng)?;
        self.record(m, name, &x);
        Ok(x)
    }

    /// A random, generally non-associative, element of degree 2.
    pub fn mu<M: Model>(&mut self, m: &M) -> Result<M::Elem> {
        self.elem(m, "mu", 2)
    }

    pub fn record<M: Model>(&mut self, m: &M, name: &str, x: &M::Elem) {
        self.inputs.push((name.to_string(), m.render(x)));
    }

    pub fn note(&mut self, name: &str, value: String) {
        self.inputs.push((name.to_string(), value));
    }
}

type Verdict = Result<Option<Mismatch>>;

fn check<M: Model>(m: &M, case: impl FnOnce() -> String, lhs: &M::Elem, rhs: &M::Elem) -> Option<Mismatch> {
    (lhs != rhs).then(|| Mismatch {
        case: case(),
        lhs: m.render(lhs),
        rhs: m.render(rhs),
    })
}

/// `Σ sign_k x_k`, all of degree `degree`.
fn combo<M: Model>(m: &M, degree: usize, terms: &[(Sign, &M::Elem)]) -> Result<M::Elem> {
    let mut acc = m.zero(degree);
    for (sign, x) in terms {
        let x = match sign {
            Sign::Plus => (*x).clone(),
            Sign::Minus => m.neg(x),
        };
        acc = m.add(&acc, &x)?;
    }
    Ok(acc)
}

fn sgn<M: Model>(m: &M, sign: Sign, x: M::Elem) -> M::Elem {
    match sign {
        Sign::Plus => x,
        Sign::Minus => m.neg(&x),
    }
}

fn d<M: Model>(m: &M, x: &M::Elem) -> i64 {
    m.degree(x) as i64
}

fn ds<M: Model>(m: &M, x: &M::Elem) -> i64 {
    desusp(m, x)
}

/// First mismatch of a list of checks.
fn first(checks: impl IntoIterator<Item = Option<Mismatch>>) -> Option<Mismatch> {
    checks.into_iter().flatten().next()
}

fn relations<M: Model>(m: &M, p: &mut Probe, region: Region) -> Verdict {
    let (h_lo, f_lo) = match region {
        Region::B | Region::G => (2, 0),
        Region::A => (1, 1),
    };
    let degs = p.degrees(&[h_lo, f_lo, 0], 0, |_| true);
    let h = p.elem(m, "h", degs[0])?;
    let f = p.elem(m, "f", degs[1])?;
    let g = p.elem(m, "g", degs[2])?;
    for (i, j) in scope(degs[0], degs[1]) {
        if classify_region(degs[0], degs[1], i, j)? != region {
            continue;
        }
        let lhs = compose_at(m, &compose_at(m, &h, i, &f)?, j, &g)?;
        let rhs = relation_rhs(m, &h, &f, &g, i, j)?;
        if let Some(bad) = check(m, || format!("(i, j) = ({i}, {j})"), &lhs, &rhs) {
            return Ok(Some(bad));
        }
    }
    Ok(None)
}

fn relation_b<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    relations(m, p, Region::B)
}

fn relation_a<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    relations(m, p, Region::A)
}

fn relation_g<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    relations(m, p, Region::G)
}

fn unit<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let n = p.degrees(&[0], 0, |_| true)[0];
    let f = p.elem(m, "f", n)?;
    let i = m.unit();
    let mut checks = vec![check(m, || "I o_0 f".into(), &compose_at(m, &i, 0, &f)?, &f)];
    for k in 0..n {
        checks.push(check(m, || format!("f o_{k} I"), &compose_at(m, &f, k, &i)?, &f));
    }
    Ok(first(checks))
}

/// `μ∘₀f = (-1)^f f⌣I`, `μ∘₁f = -I⌣f`, `f⌣g = -(-1)^{|f|g} (μ∘₁g)∘₀f`.
fn cup_via_mu<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[0, 0], 2, |_| true);
    let mu = p.mu(m)?;
    let f = p.elem(m, "f", degs[0])?;
    let g = p.elem(m, "g", degs[1])?;
    let i = m.unit();
    let a = check(
        m,
        || "mu o_0 f".into(),
        &compose_at(m, &mu, 0, &f)?,
        &sgn(m, Sign::power(d(m, &f)), cup(m, &mu, &f, &i)?),
    );
    let b = check(
        m,
        || "mu o_1 f".into(),
        &compose_at(m, &mu, 1, &f)?,
        &m.neg(&cup(m, &mu, &i, &f)?),
    );
    let rhs = compose_at(m, &compose_at(m, &mu, 1, &g)?, 0, &f)?;
    let c = check(
        m,
        || "cup(f, g)".into(),
        &cup(m, &mu, &f, &g)?,
        &sgn(m, -Sign::koszul(ds(m, &f), d(m, &g)), rhs),
    );
    Ok(first([a, b, c]))
}

/// `(f⌣g)∘ⱼh` splits at `j = deg f`.
fn cup_composition<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[0, 1, 0], 2, |_| true);
    let mu = p.mu(m)?;
    let f = p.elem(m, "f", degs[0])?;
    let g = p.elem(m, "g", degs[1])?;
    let h = p.elem(m, "h", degs[2])?;
    let fg = cup(m, &mu, &f, &g)?;
    let nf = degs[0];
    for j in 0..degs[0] + degs[1] {
        let lhs = compose_at(m, &fg, j, &h)?;
        let rhs = if j < nf {
            let inner = cup(m, &mu, &compose_at(m, &f, j, &h)?, &g)?;
            sgn(m, Sign::koszul(d(m, &g), ds(m, &h)), inner)
        } else {
            cup(m, &mu, &f, &compose_at(m, &g, j - nf, &h)?)?
        };
        if let Some(bad) = check(m, || format!("j = {j}"), &lhs, &rhs) {
            return Ok(Some(bad));
        }
    }
    Ok(None)
}

/// `(f⌣g)•h = f⌣(g•h) + (-1)^{|h|g} (f•h)⌣g`.
fn cup_total<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[0, 0, 1], 2, |_| true);
    let mu = p.mu(m)?;
    let f = p.elem(m, "f", degs[0])?;
    let g = p.elem(m, "g", degs[1])?;
    let h = p.elem(m, "h", degs[2])?;
    let lhs = total(m, &cup(m, &mu, &f, &g)?, &h)?;
    let a = cup(m, &mu, &f, &total(m, &g, &h)?)?;
    let b = cup(m, &mu, &total(m, &f, &h)?, &g)?;
    let rhs = combo(m, m.degree(&lhs), &[(Sign::Plus, &a), (Sign::koszul(ds(m, &h), d(m, &g)), &b)])?;
    Ok(check(m, || "(f cup g) * h".into(), &lhs, &rhs))
}

/// Degrees for which every total composition in a ternary expression has a
/// nonnegative degree.
fn ternary_ok(ds: &[usize]) -> bool {
    let (h, f, g) = (ds[0], ds[1], ds[2]);
    h + f >= 1 && f + g >= 1 && h + g >= 1 && h + f + g >= 2
}

/// `(h, f, g) = {h, f, g} + (-1)^{|f||g|} {h, g, f}`.
fn getzler<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[0, 0, 0], 0, ternary_ok);
    let h = p.elem(m, "h", degs[0])?;
    let f = p.elem(m, "f", degs[1])?;
    let g = p.elem(m, "g", degs[2])?;
    let lhs = associator(m, &h, &f, &g)?;
    let a = braces(m, &h, &f, &g)?;
    let b = braces(m, &h, &g, &f)?;
    let rhs = combo(m, m.degree(&lhs), &[(Sign::Plus, &a), (Sign::koszul(ds(m, &f), ds(m, &g)), &b)])?;
    Ok(check(m, || "assoc(h; f; g)".into(), &lhs, &rhs))
}

/// `(h, f, g) = (-1)^{|f||g|} (h, g, f)`.
fn gerstenhaber<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[0, 0, 0], 0, ternary_ok);
    let h = p.elem(m, "h", degs[0])?;
    let f = p.elem(m, "f", degs[1])?;
    let g = p.elem(m, "g", degs[2])?;
    let lhs = associator(m, &h, &f, &g)?;
    let rhs = sgn(m, Sign::koszul(ds(m, &f), ds(m, &g)), associator(m, &h, &g, &f)?);
    Ok(check(m, || "assoc(h; f; g)".into(), &lhs, &rhs))
}

/// `f⌣g = (-1)^f {μ, f, g}`.
fn cup_braces<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[0, 0], 2, |_| true);
    let mu = p.mu(m)?;
    let f = p.elem(m, "f", degs[0])?;
    let g = p.elem(m, "g", degs[1])?;
    let rhs = sgn(m, Sign::power(d(m, &f)), braces(m, &mu, &f, &g)?);
    Ok(check(m, || "cup(f, g)".into(), &cup(m, &mu, &f, &g)?, &rhs))
}

fn jacobi<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[0, 0, 0], 0, ternary_ok);
    let f = p.elem(m, "f", degs[0])?;
    let g = p.elem(m, "g", degs[1])?;
    let h = p.elem(m, "h", degs[2])?;
    let j = jacobian(m, &f, &g, &h)?;
    Ok(check(m, || "J(f, g, h)".into(), &j, &m.zero(m.degree(&j))))
}

/// `[f, f] = 0` for even `|f|`.
fn bracket_square_even<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let n = p.degree_where(1, |n| n % 2 == 1);
    let f = p.elem(m, "f", n)?;
    let c = commutator(m, &f, &f)?;
    Ok(check(m, || "comm(f, f)".into(), &c, &m.zero(m.degree(&c))))
}

/// `[[f, f], f] = 0` for odd `|f|`.
fn bracket_cube_odd<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let n = p.degree_where(2, |n| n % 2 == 0);
    let f = p.elem(m, "f", n)?;
    let c = commutator(m, &commutator(m, &f, &f)?, &f)?;
    Ok(check(m, || "comm(comm(f, f), f)".into(), &c, &m.zero(m.degree(&c))))
}

/// `[f, g] = -(-1)^{|f||g|} [g, f]`.
fn antisymmetry<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[0, 0], 0, |ds| ds[0] + ds[1] >= 1);
    let f = p.elem(m, "f", degs[0])?;
    let g = p.elem(m, "g", degs[1])?;
    let rhs = sgn(m, -Sign::koszul(ds(m, &f), ds(m, &g)), commutator(m, &g, &f)?);
    Ok(check(m, || "comm(f, g)".into(), &commutator(m, &f, &g)?, &rhs))
}

/// `-δf = f⌣I + f•μ + (-1)^{|f|} I⌣f`, also at `f = I`.
fn delta_via_cup_identity<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let n = p.degrees(&[0], 2, |_| true)[0];
    let mu = p.mu(m)?;
    let f = p.elem(m, "f", n)?;
    let i = m.unit();
    Ok(first([
        check(m, || "f".into(), &delta_via_cup(m, &mu, &f)?, &delta(m, &mu, &f)?),
        check(m, || "I".into(), &delta_via_cup(m, &mu, &i)?, &delta(m, &mu, &i)?),
    ]))
}

/// `δ²f = -δ_{μ•μ} f = [f, μ•μ]` for any `μ`.
fn delta_squared<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let n = p.degrees(&[0], 4, |_| true)[0];
    let mu = p.mu(m)?;
    let f = p.elem(m, "f", n)?;
    let lhs = delta(m, &mu, &delta(m, &mu, &f)?)?;
    let rhs = commutator(m, &f, &total(m, &mu, &mu)?)?;
    Ok(check(m, || "delta(delta(f))".into(), &lhs, &rhs))
}

/// Associative `μ` gives `μ•μ = 0` and `δ² = 0`.
fn delta_squared_associative<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let n = p.degrees(&[0], 4, |_| true)[0];
    let mu = m
        .sample_associative(&mut p.rng)?
        .ok_or_else(|| Error::Format("model has no associative sampler".into()))?;
    p.record(m, "mu", &mu);
    let f = p.elem(m, "f", n)?;
    let mm = total(m, &mu, &mu)?;
    let dd = delta(m, &mu, &delta(m, &mu, &f)?)?;
    Ok(first([
        check(m, || "mu * mu".into(), &mm, &m.zero(3)),
        check(m, || "delta(delta(f))".into(), &dd, &m.zero(n + 2)),
    ]))
}

/// `(-1)^{|g|} dev(f, g) = f⌣g - (-1)^{fg} g⌣f`.
fn dev_total_cup<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[0, 0], 2, |ds| ds[0] + ds[1] >= 1);
    let mu = p.mu(m)?;
    let f = p.elem(m, "f", degs[0])?;
    let g = p.elem(m, "g", degs[1])?;
    let lhs = sgn(m, Sign::power(ds(m, &g)), dev_total(m, &mu, &f, &g)?);
    let fg = cup(m, &mu, &f, &g)?;
    let gf = cup(m, &mu, &g, &f)?;
    let rhs = combo(m, m.degree(&fg), &[(Sign::Plus, &fg), (-Sign::koszul(d(m, &f), d(m, &g)), &gf)])?;
    Ok(check(m, || "dev_total(f, g)".into(), &lhs, &rhs))
}

/// `δ(f∘ᵢg) - f∘ᵢδg = λ_{i+1} + λ'_{i+1}` for every `i`.
fn lambda_compose<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[1, 0], 2, |_| true);
    let mu = p.mu(m)?;
    let f = p.elem(m, "f", degs[0])?;
    let g = p.elem(m, "g", degs[1])?;
    let dg = delta(m, &mu, &g)?;
    for i in 0..degs[0] {
        let a = delta(m, &mu, &compose_at(m, &f, i, &g)?)?;
        let b = compose_at(m, &f, i, &dg)?;
        let lhs = combo(m, m.degree(&a), &[(Sign::Plus, &a), (Sign::Minus, &b)])?;
        let rhs = m.add(&lambda_aux(m, &mu, &f, &g, i + 1)?, &lambda_prime_aux(m, &mu, &f, &g, i + 1)?)?;
        if let Some(bad) = check(m, || format!("i = {i}"), &lhs, &rhs) {
            return Ok(Some(bad));
        }
    }
    Ok(None)
}

/// `(-1)^{|g|} (δf)∘ᵢg = λᵢ + λ'_{i+1}` for `1 <= i <= deg f - 1`.
fn lambda_interior<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[2, 0], 2, |_| true);
    let mu = p.mu(m)?;
    let f = p.elem(m, "f", degs[0])?;
    let g = p.elem(m, "g", degs[1])?;
    let df = delta(m, &mu, &f)?;
    for i in 1..degs[0] {
        let lhs = sgn(m, Sign::power(ds(m, &g)), compose_at(m, &df, i, &g)?);
        let rhs = m.add(&lambda_aux(m, &mu, &f, &g, i)?, &lambda_prime_aux(m, &mu, &f, &g, i + 1)?)?;
        if let Some(bad) = check(m, || format!("i = {i}"), &lhs, &rhs) {
            return Ok(Some(bad));
        }
    }
    Ok(None)
}

/// `dev(f, g) = -λ₀ - λ'_{deg f + 1}`.
fn dev_total_boundary<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[1, 0], 2, |_| true);
    let mu = p.mu(m)?;
    let f = p.elem(m, "f", degs[0])?;
    let g = p.elem(m, "g", degs[1])?;
    let lhs = dev_total(m, &mu, &f, &g)?;
    let a = lambda_aux(m, &mu, &f, &g, 0)?;
    let b = lambda_prime_aux(m, &mu, &f, &g, degs[0] + 1)?;
    let rhs = combo(m, m.degree(&lhs), &[(Sign::Minus, &a), (Sign::Minus, &b)])?;
    Ok(check(m, || "dev_total(f, g)".into(), &lhs, &rhs))
}

fn dev_braces_common<M: Model>(
    m: &M,
    p: &mut Probe,
    op: fn(&M, &M::Elem, &M::Elem) -> Result<M::Elem>,
) -> Verdict {
    let degs = p.degrees(&[0, 0, 0], 2, |ds| ternary_ok(ds) && ds[0] + ds[1] + ds[2] >= 2);
    let mu = p.mu(m)?;
    let h = p.elem(m, "h", degs[0])?;
    let f = p.elem(m, "f", degs[1])?;
    let g = p.elem(m, "g", degs[2])?;
    let lhs = sgn(m, Sign::power(ds(m, &g)), dev_braces(m, &mu, &h, &f, &g)?);
    let a = cup(m, &mu, &op(m, &h, &f)?, &g)?;
    let b = cup(m, &mu, &f, &op(m, &h, &g)?)?;
    let c = op(m, &h, &cup(m, &mu, &f, &g)?)?;
    let rhs = combo(
        m,
        m.degree(&lhs),
        &[
            (Sign::Plus, &a),
            (Sign::koszul(ds(m, &h), d(m, &f)), &b),
            (Sign::Minus, &c),
        ],
    )?;
    Ok(check(m, || "dev_brace(h; f; g)".into(), &lhs, &rhs))
}

/// `(-1)^{|g|} dev{h,f,g} = (h•f)⌣g + (-1)^{|h|f} f⌣(h•g) - h•(f⌣g)`.
fn dev_braces_total<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    dev_braces_common(m, p, total)
}

/// The same with commutators in place of `•`.
fn dev_braces_bracket<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    dev_braces_common(m, p, commutator)
}

/// Linearity of every operation in each argument.
fn bilinearity<M: Model>(m: &M, p: &mut Probe) -> Verdict {
    let degs = p.degrees(&[1, 0, 0], 2, ternary_ok);
    let mu = p.mu(m)?;
    let x = [
        p.elem(m, "x", degs[0])?,
        p.elem(m, "y", degs[1])?,
        p.elem(m, "z", degs[2])?,
    ];
    let slot = p.rng.random_range(0..3);
    let other = p.elem(m, "w", degs[slot])?;
    let (a, b) = (m.ring().random_scalar(&mut p.rng), m.ring().random_scalar(&mut p.rng));
    p.note("slot", slot.to_string());
    p.note("a", a.to_string());
    p.note("b", b.to_string());
    let i = p.rng.random_range(0..degs[0]);

    type Op<'a, M> = Box<dyn Fn(&M, &[<M as PreOperad>::Elem; 3]) -> Result<<M as PreOperad>::Elem> + 'a>;
    // (name, number of arguments read, op); an op is only linear in slots it reads
    let ops: Vec<(&str, usize, Op<'_, M>)> = vec![
        ("compose", 2, Box::new(move |m, v| compose_at(m, &v[0], i, &v[1]))),
        ("cup", 2, Box::new(|m, v| cup(m, &mu, &v[0], &v[1]))),
        ("total", 2, Box::new(|m, v| total(m, &v[0], &v[1]))),
        ("comm", 2, Box::new(|m, v| commutator(m, &v[0], &v[1]))),
        ("brace", 3, Box::new(|m, v| braces(m, &v[0], &v[1], &v[2]))),
    ];
    let mut mixed = x.clone();
    mixed[slot] = m.add(&m.scale(&x[slot], &a)?, &m.scale(&other, &b)?)?;
    let mut alt = x.clone();
    alt[slot] = other;
    for (name, _, op) in ops.iter().filter(|(_, reads, _)| slot < *reads) {
        let lhs = op(m, &mixed)?;
        let rhs = m.add(&m.scale(&op(m, &x)?, &a)?, &m.scale(&op(m, &alt)?, &b)?)?;
        if let Some(bad) = check(m, || (*name).to_string(), &lhs, &rhs) {
            return Ok(Some(bad));
        }
    }
    Ok(None)
}

/// An identity of the suite.
pub struct Identity<M: Model> {
    pub id: &'static str,
    run: fn(&M, &mut Probe) -> Verdict,
    applies: fn(&M) -> bool,
}

fn always<M>(_: &M) -> bool {
    true
}

fn has_associative<M: Model>(m: &M) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    matches!(m.sample_associative(&mut rng), Ok(Some(_)))
}

impl<M: Model> Identity<M> {
    pub fn new(id: &'static str, run: fn(&M, &mut Probe) -> Verdict) -> Self {
        Identity {
            id,
            run,
            applies: always,
        }
    }
}

/// The axioms: composition relations in the three regions and the unit.
pub fn axioms<M: Model>() -> Vec<Identity<M>> {
    vec![
        Identity::new("relation_b", relation_b),
        Identity::new("relation_a", relation_a),
        Identity::new("relation_g", relation_g),
        Identity::new("unit", unit),
    ]
}

/// Every identity checked generically in any model.
pub fn identities<M: Model>() -> Vec<Identity<M>> {
    let mut all = axioms();
    all.extend([
        Identity::new("cup_via_mu", cup_via_mu),
        Identity::new("cup_composition", cup_composition),
        Identity::new("cup_total", cup_total),
        Identity::new("getzler", getzler),
        Identity::new("gerstenhaber", gerstenhaber),
        Identity::new("cup_braces", cup_braces),
        Identity::new("jacobi", jacobi),
        Identity::new("bracket_square_even", bracket_square_even),
        Identity::new("bracket_cube_odd", bracket_cube_odd),
        Identity::new("antisymmetry", antisymmetry),
        Identity::new("delta_via_cup", delta_via_cup_identity),
        Identity::new("delta_squared", delta_squared),
        Identity {
            id: "delta_squared_associative",
            run: delta_squared_associative,
            applies: has_associative,
        },
        Identity::new("dev_total_cup", dev_total_cup),
        Identity::new("lambda_compose", lambda_compose),
        Identity::new("lambda_interior", lambda_interior),
        Identity::new("dev_total_boundary", dev_total_boundary),
        Identity::new("dev_braces_total", dev_braces_total),
        Identity::new("dev_braces_bracket", dev_braces_bracket),
        Identity::new("bilinearity", bilinearity),
    ]);
    all
}

/// 64-bit FNV-1a, a stable hash for cell keys.
fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// The generator for one trial of one cell.
pub fn trial_rng(seed: u64, key: &str, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(key));
    rng.set_stream(trial as u64);
    rng
}

/// A custom check run like an identity; used for checks that need more
/// than the [`Model`] interface.
pub type CustomCheck<'a> = (&'static str, &'a (dyn Fn(&mut Probe) -> Verdict + Sync));

fn run_cells(
    label: &str,
    ring: &str,
    min_degree: usize,
    budget: Option<usize>,
    cfg: &SuiteConfig,
    cells: &[(&'static str, &(dyn Fn(&mut Probe) -> Verdict + Sync))],
) -> Vec<IdentityReport> {
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let results: Vec<Option<Counterexample>> = jobs
        .par_iter()
        .map(|&(c, t)| {
            let (id, run) = cells[c];
            let key = format!("{label}|{ring}|{id}");
            let mut probe = Probe {
                rng: trial_rng(cfg.seed, &key, t),
                max_degree: cfg.max_degree,
                min_degree,
                budget,
                inputs: Vec::new(),
            };
            let verdict = run(&mut probe);
            let inputs = || probe.inputs.iter().cloned().collect();
            match verdict {
                Ok(None) => None,
                Ok(Some(bad)) => Some(Counterexample {
                    trial: t,
                    case: bad.case,
                    inputs: inputs(),
                    lhs: bad.lhs,
                    rhs: bad.rhs,
                }),
                Err(e) => Some(Counterexample {
                    trial: t,
                    case: "error".into(),
                    inputs: inputs(),
                    lhs: e.to_string(),
                    rhs: String::new(),
                }),
            }
        })
        .collect();
    cells
        .iter()
        .enumerate()
        .map(|(c, (id, _))| {
            let cell = &results[c * cfg.trials..(c + 1) * cfg.trials];
            IdentityReport {
                id: id.to_string(),
                model: label.to_string(),
                ring: ring.to_string(),
                seed: cfg.seed,
                trials: cfg.trials,
                passes: cell.iter().filter(|r| r.is_none()).count(),
                counterexample: cell.iter().flatten().next().cloned(),
            }
        })
        .collect()
}

/// Runs `list` plus any `extra` checks in model `m`.
pub fn run_identities<M: Model>(
    m: &M,
    list: &[Identity<M>],
    extra: &[CustomCheck<'_>],
    cfg: &SuiteConfig,
) -> Vec<IdentityReport> {
    let selected: Vec<&Identity<M>> = list
        .iter()
        .filter(|i| cfg.selects(i.id) && (i.applies)(m))
        .collect();
    let closures: Vec<(&'static str, Box<dyn Fn(&mut Probe) -> Verdict + Sync + '_>)> = selected
        .iter()
        .map(|i| {
            let run = i.run;
            let f: Box<dyn Fn(&mut Probe) -> Verdict + Sync> = Box::new(move |p: &mut Probe| run(m, p));
            (i.id, f)
        })
        .collect();
    let mut cells: Vec<(&'static str, &(dyn Fn(&mut Probe) -> Verdict + Sync))> =
        closures.iter().map(|(id, f)| (*id, f.as_ref())).collect();
    cells.extend(extra.iter().filter(|(id, _)| cfg.selects(id)).copied());
    run_cells(
        &m.label(),
        &m.ring().to_string(),
        m.min_degree(),
        m.degree_budget(),
        cfg,
        &cells,
    )
}
