//! Evaluation of parsed expressions in a model.

use std::collections::BTreeMap;

use compcalc::calculus::*;
use thiserror::Error;

use crate::expr::Expr;
use crate::model::Model;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("`{0}` needs a multiplication; bind one with --mu")]
    NoMu(String),
    #[error("in `{subterm}`: {source}")]
    Calc {
        subterm: String,
        source: compcalc::Error,
    },
}

/// Variable bindings and the multiplication used by cup, δ and the
/// deviations.
pub struct Env<M: Model> {
    pub vars: BTreeMap<String, M::Elem>,
    pub mu: Option<M::Elem>,
}

impl<M: Model> Env<M> {
    pub fn new() -> Self {
        Env {
            vars: BTreeMap::new(),
            mu: None,
        }
    }
}

impl<M: Model> Default for Env<M> {
    fn default() -> Self {
        Env::new()
    }
}

pub fn eval_expr<M: Model>(m: &M, env: &Env<M>, expr: &Expr) -> Result<M::Elem, EvalError> {
    let ev = |e: &Expr| eval_expr(m, env, e);
    let at = |r: compcalc::Result<M::Elem>| {
        r.map_err(|source| EvalError::Calc {
            subterm: expr.to_string(),
            source,
        })
    };
    let mu = || env.mu.as_ref().ok_or_else(|| EvalError::NoMu(expr.to_string()));
    match expr {
        Expr::Var(name) => env
            .vars
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(name.clone())),
        Expr::Unit => Ok(m.unit()),
        Expr::CompAt(f, i, g) => at(compose_at(m, &ev(f)?, *i, &ev(g)?)),
        Expr::Cup(f, g) => at(cup(m, mu()?, &ev(f)?, &ev(g)?)),
        Expr::Total(f, g) => at(total(m, &ev(f)?, &ev(g)?)),
        Expr::Braces(h, f, g) => at(braces(m, &ev(h)?, &ev(f)?, &ev(g)?)),
        Expr::Assoc(h, f, g) => at(associator(m, &ev(h)?, &ev(f)?, &ev(g)?)),
        Expr::Comm(f, g) => at(commutator(m, &ev(f)?, &ev(g)?)),
        Expr::Delta(f) => at(delta(m, mu()?, &ev(f)?)),
        Expr::DevTotal(f, g) => at(dev_total(m, mu()?, &ev(f)?, &ev(g)?)),
        Expr::DevBraces(h, f, g) => at(dev_braces(m, mu()?, &ev(h)?, &ev(f)?, &ev(g)?)),
        Expr::Lambda(k, f, g) => at(lambda_aux(m, mu()?, &ev(f)?, &ev(g)?, *k)),
        Expr::LambdaPrime(k, f, g) => at(lambda_prime_aux(m, mu()?, &ev(f)?, &ev(g)?, *k)),
        Expr::ScalarMul(s, x) => {
            let x = ev(x)?;
            at(m
                .ring()
                .from_ratio(s.numer(), s.denom())
                .and_then(|s| m.scale(&x, &s)))
        }
        Expr::Add(a, b) => at(m.add(&ev(a)?, &ev(b)?)),
    }
}
