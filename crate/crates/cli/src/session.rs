//! Sessions: a ring, a model and bound elements, plus the drivers behind the
//! `eval`, `suite` and `hochschild` commands.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use compcalc::endo::{random_hom, EndoOperad, HomElement};
use compcalc::free::{
    free_compose_at, free_tree, parse_free_element, random_free, represent, FreeOperad, PlanarTree,
    Representation, Signature,
};
use compcalc::hochschild::{analyze, AlgebraSpec, HochschildReport};
use compcalc::{PreOperad, Ring, Scalar};
use rand::Rng;
use thiserror::Error;

use crate::eval::{eval_expr, Env, EvalError};
use crate::expr::{parse, ParseError};
use crate::model::Model;
use crate::suite::{identities, run_identities, CustomCheck, IdentityReport, Mismatch, Probe, SuiteConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("evaluation error: {0}")]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Calc(#[from] compcalc::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// Everything that is not an identity failure exits with 2.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

/// `endo:<d>`, `free` (the built-in mixed signature) or `free:<sigfile>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    Endo(usize),
    Free(Option<PathBuf>),
}

impl FromStr for ModelSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = || CliError::Usage(format!("unknown model `{s}`: use endo:<d>, free or free:<sigfile>"));
        match s.split_once(':') {
            Some(("endo", d)) => d.parse().map(ModelSpec::Endo).map_err(|_| bad()),
            Some(("free", path)) if !path.is_empty() => Ok(ModelSpec::Free(Some(path.into()))),
            None if s == "free" => Ok(ModelSpec::Free(None)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Endo(d) => write!(f, "endo:{d}"),
            ModelSpec::Free(None) => f.write_str("free"),
            ModelSpec::Free(Some(p)) => write!(f, "free:{}", p.display()),
        }
    }
}

impl ModelSpec {
    pub fn signature(&self) -> CliResult<Signature> {
        match self {
            ModelSpec::Free(Some(path)) => Ok(Signature::from_json(&read(path)?)?),
            _ => Ok(Signature::mixed()),
        }
    }
}

/// What `eval` prints: the degree and the element in the model's format.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalOutput {
    pub degree: usize,
    pub text: String,
    pub json: serde_json::Value,
}

impl EvalOutput {
    pub fn json_line(&self) -> String {
        serde_json::json!({"degree": self.degree, "value": self.json}).to_string()
    }
}

#[derive(Clone, Debug)]
pub struct Session {
    pub ring: Ring,
    pub model: ModelSpec,
    /// `name=value` pairs in binding order.
    pub vars: Vec<(String, String)>,
    pub mu: Option<String>,
    pub seed: u64,
}

impl Session {
    pub fn new(ring: Ring, model: ModelSpec) -> Self {
        Session {
            ring,
            model,
            vars: Vec::new(),
            mu: None,
            seed: 0,
        }
    }

    pub fn bind(&mut self, name: &str, value: &str) -> &mut Self {
        self.vars.push((name.to_string(), value.to_string()));
        self
    }

    pub fn with_mu(&mut self, value: &str) -> &mut Self {
        self.mu = Some(value.to_string());
        self
    }

    /// Parses and evaluates `src`.
    pub fn eval(&self, src: &str) -> CliResult<EvalOutput> {
        let expr = parse(src)?;
        match &self.model {
            ModelSpec::Endo(d) => {
                let m = EndoOperad::new(self.ring, *d)?;
                let env = self.env(&m, |name, v| self.endo_value(*d, name, v), Env::new())?;
                finish(&m, eval_expr(&m, &env, &expr)?)
            }
            ModelSpec::Free(_) => {
                let sig = self.model.signature()?;
                let m = FreeOperad::new(self.ring, sig.clone());
                let mut env = Env::new();
                for g in sig.generators() {
                    env.vars.insert(g.name().to_string(), free_tree(self.ring, PlanarTree::corolla(g)));
                }
                let env = self.env(&m, |name, v| self.free_value(&sig, name, v), env)?;
                finish(&m, eval_expr(&m, &env, &expr)?)
            }
        }
    }

    fn env<M: Model>(
        &self,
        m: &M,
        value: impl Fn(&str, &str) -> CliResult<M::Elem>,
        mut env: Env<M>,
    ) -> CliResult<Env<M>> {
        for (name, v) in &self.vars {
            if name == "I" || crate::expr::parse(name).ok() != Some(crate::expr::Expr::Var(name.clone())) {
                return Err(CliError::Usage(format!("`{name}` cannot be used as a variable name")));
            }
            env.vars.insert(name.clone(), value(name, v)?);
        }
        if let Some(v) = &self.mu {
            let mu = value("mu", v)?;
            if m.degree(&mu) != 2 {
                return Err(CliError::Usage(format!(
                    "the multiplication must have degree 2, not {}",
                    m.degree(&mu)
                )));
            }
            env.mu = Some(mu);
        }
        Ok(env)
    }

    /// Per-variable generator so that `random:<n>` does not depend on the
    /// binding order.
    fn rng_for(&self, name: &str) -> rand_chacha::ChaCha8Rng {
        crate::suite::trial_rng(self.seed, &format!("var|{name}"), 0)
    }

    /// `<arity>:<c0>,<c1>,..`, `random:<arity>` or `@file.json`.
    fn endo_value(&self, d: usize, name: &str, v: &str) -> CliResult<HomElement> {
        if let Some(path) = v.strip_prefix('@') {
            let x = HomElement::from_json(&read(&path.into())?)?;
            if x.ring() != self.ring || x.dim() != d {
                return Err(CliError::Usage(format!(
                    "`{name}` lives over {} in dimension {}, the session uses {} and {d}",
                    x.ring(),
                    x.dim(),
                    self.ring
                )));
            }
            return Ok(x);
        }
        let (head, rest) = v
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("`{name}`: expected <arity>:<coefficients>, random:<arity> or @file")))?;
        let arity = |text: &str| {
            text.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("`{name}`: bad arity `{text}`")))
        };
        if head == "random" {
            return Ok(random_hom(self.ring, d, arity(rest)?, &mut self.rng_for(name))?);
        }
        let coeffs = rest
            .split(',')
            .map(|c| self.ring.parse_scalar(c))
            .collect::<compcalc::Result<Vec<Scalar>>>()?;
        Ok(HomElement::new(self.ring, d, arity(head)?, coeffs)?)
    }

    /// A tree combination such as `m(_, _) + -1*m(m(_, _), _)`,
    /// `0:<degree>` or `random:<degree>`.
    fn free_value(&self, sig: &Signature, name: &str, v: &str) -> CliResult<compcalc::free::FreeElement> {
        if let Some(n) = v.strip_prefix("random:") {
            let n = n
                .parse()
                .map_err(|_| CliError::Usage(format!("`{name}`: bad degree `{n}`")))?;
            return Ok(random_free(self.ring, sig, n, &mut self.rng_for(name))?);
        }
        if let Some(n) = v.strip_prefix("0:") {
            let n = n
                .parse()
                .map_err(|_| CliError::Usage(format!("`{name}`: bad degree `{n}`")))?;
            return Ok(parse_free_element("0", self.ring, sig, Some(n))?);
        }
        Ok(parse_free_element(v, self.ring, sig, None)?)
    }
}

fn finish<M: Model>(m: &M, x: M::Elem) -> CliResult<EvalOutput> {
    Ok(EvalOutput {
        degree: m.degree(&x),
        text: m.render(&x),
        json: m.to_json(&x),
    })
}

/// `represent(x ∘ᵢ y) = represent(x) ∘ᵢ represent(y)` for a random
/// representation into dimension 2 or 3.
pub fn representation_check(m: &FreeOperad, p: &mut Probe) -> Result<Option<Mismatch>, compcalc::Error> {
    let dim = p.rng.random_range(2..=3);
    representation_check_in(m, dim, p)
}

/// [`representation_check`] with the target dimension fixed.
pub fn representation_check_in(
    m: &FreeOperad,
    dim: usize,
    p: &mut Probe,
) -> Result<Option<Mismatch>, compcalc::Error> {
    let cap = if dim == 2 { 7 } else { 5 };
    let degs = p.degrees(&[1, 1], 0, |ds| ds[0] + ds[1] <= cap);
    let psi = Representation::random(m.signature(), m.ring(), dim, &mut p.rng)?;
    p.note("psi", psi.to_json());
    let x = p.elem(m, "x", degs[0])?;
    let y = p.elem(m, "y", degs[1])?;
    let i = p.rng.random_range(0..degs[0]);
    p.note("i", i.to_string());
    let lhs = represent(&psi, &free_compose_at(&x, i, &y)?)?;
    let rhs = compcalc::endo::endo_compose_at(&represent(&psi, &x)?, i, &represent(&psi, &y)?)?;
    Ok((lhs != rhs).then(|| Mismatch {
        case: format!("i = {i}"),
        lhs: lhs.to_json(),
        rhs: rhs.to_json(),
    }))
}

/// Models and rings the suite covers when none are given.
pub fn default_models() -> Vec<ModelSpec> {
    vec![ModelSpec::Endo(1), ModelSpec::Endo(2), ModelSpec::Free(None)]
}

pub fn default_rings() -> Vec<Ring> {
    vec![Ring::Rationals, Ring::IntegersMod(2), Ring::IntegersMod(3)]
}

/// Every identity in every (model, ring) cell, sorted by model, ring and id.
pub fn run_suite(models: &[ModelSpec], rings: &[Ring], cfg: &SuiteConfig) -> CliResult<Vec<IdentityReport>> {
    let mut reports = Vec::new();
    for spec in models {
        for &ring in rings {
            match spec {
                ModelSpec::Endo(d) => {
                    let m = EndoOperad::new(ring, *d)?;
                    reports.extend(run_identities(&m, &identities(), &[], cfg));
                }
                ModelSpec::Free(_) => {
                    let m = FreeOperad::new(ring, spec.signature()?);
                    let check = |p: &mut Probe| representation_check(&m, p);
                    let extra: [CustomCheck<'_>; 1] = [("representation", &check)];
                    reports.extend(run_identities(&m, &identities(), &extra, cfg));
                }
            }
        }
    }
    reports.sort_by(|a, b| (&a.model, &a.ring, &a.id).cmp(&(&b.model, &b.ring, &b.id)));
    Ok(reports)
}

/// Human-readable summary: one row per identity, totals across cells.
pub fn summary_table(reports: &[IdentityReport]) -> String {
    use std::collections::BTreeMap;
    let mut rows: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
    for r in reports {
        let row = rows.entry(&r.id).or_default();
        row.0 += 1;
        row.1 += r.trials;
        row.2 += r.passes;
    }
    let width = rows.keys().map(|k| k.len()).max().unwrap_or(8).max(8);
    let mut out = format!("{:<width$}  {:>5}  {:>7}  {:>7}  status\n", "identity", "cells", "trials", "passes");
    for (id, (cells, trials, passes)) in &rows {
        let status = if trials == passes { "ok" } else { "FAIL" };
        out.push_str(&format!("{id:<width$}  {cells:>5}  {trials:>7}  {passes:>7}  {status}\n"));
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    out.push_str(&format!("{} cells, {} failing\n", reports.len(), failed));
    out
}

/// Reads an algebra file and analyzes it up to degree `n_max`.
pub fn run_hochschild(path: &PathBuf, n_max: usize) -> CliResult<(AlgebraSpec, HochschildReport)> {
    let spec = AlgebraSpec::from_json(&read(path)?)?;
    let report = analyze(&spec, n_max)?;
    Ok((spec, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_session() -> Session {
        let mut s = Session::new(Ring::Rationals, ModelSpec::Endo(1));
        s.bind("f", "1:2").bind("g", "1:3").with_mu("2:1");
        s
    }

    #[test]
    fn worked_scalar_instance() {
        let s = scalar_session();
        let out = s.eval("dev_total(f,g)").unwrap();
        assert_eq!(out.degree, 2);
        assert_eq!(out.text, r#"{"dim":1,"arity":2,"ring":"q","coeffs":["-12"]}"#);
        assert_eq!(s.eval("cup(f,g)").unwrap().text, s.eval("cup(g,f)").unwrap().text);
        assert_eq!(s.eval("I o_0 f").unwrap(), s.eval("f").unwrap());
        assert_eq!(s.eval("cup(f,g) + cup(g,f) - dev_total(f,g)").unwrap().json["coeffs"][0], "0");
    }

    #[test]
    fn free_b_relation() {
        let s = Session::new(Ring::Rationals, ModelSpec::Free(None));
        let out = s.eval("(m o_1 m) o_0 m + (m o_0 m) o_2 m").unwrap();
        assert_eq!((out.degree, out.text.as_str()), (4, "0"));
        let out = s.eval("(m o_1 m) o_0 m").unwrap();
        assert_eq!(out.text, "-1*m(m(_, _), m(_, _))");
    }

    #[test]
    fn diagnostics() {
        let s = scalar_session();
        assert!(matches!(s.eval("f o_5"), Err(CliError::Parse(_))));
        assert!(matches!(s.eval("h"), Err(CliError::Eval(EvalError::Unbound(_)))));
        let err = s.eval("f o_3 g").unwrap_err();
        assert!(err.to_string().contains("f o_3 g"), "{err}");
        let no_mu = Session::new(Ring::Rationals, ModelSpec::Endo(1));
        assert!(matches!(no_mu.eval("delta(I)"), Err(CliError::Eval(EvalError::NoMu(_)))));
        let mut bad = Session::new(Ring::Rationals, ModelSpec::Endo(1));
        bad.with_mu("3:1");
        assert!(matches!(bad.eval("I"), Err(CliError::Usage(_))));
        assert!("endo:x".parse::<ModelSpec>().is_err());
        assert_eq!("free".parse::<ModelSpec>().unwrap(), ModelSpec::Free(None));
    }

    #[test]
    fn eval_is_deterministic() {
        let mut s = Session::new(Ring::IntegersMod(3), ModelSpec::Endo(2));
        s.bind("f", "random:2").bind("g", "random:1").with_mu("random:2");
        s.seed = 7;
        let a = s.eval("dev_total(f, g) + cup(f, g)").unwrap();
        let b = s.eval("dev_total(f, g) + cup(f, g)").unwrap();
        assert_eq!(a.json_line(), b.json_line());
    }
}
