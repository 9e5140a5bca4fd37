//! Worked instances in the rank-1 endomorphism model, where every element of
//! `C^n` is a single scalar and `f ∘_i g = (-1)^{i|g|} f g`.

use compcalc::calculus::*;
use compcalc::endo::{EndoOperad, HomElement};
use compcalc::{Error, PreOperad, Ring};

fn op() -> EndoOperad {
    EndoOperad::new(Ring::Rationals, 1).unwrap()
}

fn c(degree: usize, value: i64) -> HomElement {
    HomElement::new(Ring::Rationals, 1, degree, vec![Ring::Rationals.from_i64(value)]).unwrap()
}

#[test]
fn partial_composition() {
    let op = op();
    assert_eq!(compose_at(&op, &c(2, 2), 1, &c(2, 3)).unwrap(), c(3, -6));
    assert_eq!(compose_at(&op, &op.unit(), 0, &c(3, 5)).unwrap(), c(3, 5));
    assert_eq!(compose_at(&op, &c(2, 2), 1, &op.zero(4)).unwrap(), op.zero(5));
    assert_eq!(
        compose_at(&op, &c(2, 2), 2, &c(1, 1)),
        Err(Error::IndexOutOfRange { index: 2, max: 1 })
    );
    assert_eq!(compose_at(&op, &c(0, 2), 0, &c(1, 1)), Err(Error::NoValidPosition));
}

#[test]
fn cup_products() {
    let op = op();
    let mu = c(2, 1);
    assert_eq!(cup(&op, &mu, &c(1, 2), &c(1, 3)).unwrap(), c(2, -6));
    assert_eq!(cup(&op, &mu, &c(1, 3), &c(1, 2)).unwrap(), c(2, -6));
    assert_eq!(cup(&op, &c(3, 1), &c(1, 2), &c(1, 3)), Err(Error::NotBinary(3)));
    // μ ∘_1 f = -I ⌣ f
    let f = c(3, 7);
    let lhs = compose_at(&op, &mu, 1, &f).unwrap();
    assert_eq!(lhs, op.neg(&cup(&op, &mu, &op.unit(), &f).unwrap()));
}

#[test]
fn total_composition() {
    let op = op();
    assert_eq!(total(&op, &c(2, 2), &c(2, 3)).unwrap(), c(3, 0));
    assert_eq!(total(&op, &c(1, 2), &c(1, 3)).unwrap(), c(1, 6));
    assert_eq!(total(&op, &op.unit(), &c(4, 3)).unwrap(), c(4, 3));
    // empty sum lands in degree deg(g) - 1
    assert_eq!(total(&op, &c(0, 2), &c(3, 3)).unwrap(), op.zero(2));
    assert_eq!(total(&op, &c(0, 2), &c(0, 3)), Err(Error::NegativeDegree(-1)));
}

#[test]
fn braces_single_point() {
    let op = op();
    assert_eq!(braces(&op, &c(2, 1), &c(1, 2), &c(1, 3)).unwrap(), c(2, 6));
    // deg(h) = 1: G is empty
    assert_eq!(braces(&op, &c(1, 5), &c(2, 2), &c(2, 3)).unwrap(), op.zero(3));
    assert_eq!(braces(&op, &c(0, 1), &c(1, 2), &c(0, 3)), Err(Error::NegativeDegree(-1)));
}

#[test]
fn commutator_and_delta() {
    let op = op();
    assert_eq!(commutator(&op, &c(2, 2), &c(3, 3)).unwrap(), c(4, 6));
    assert_eq!(commutator(&op, &c(3, 2), &c(3, 2)).unwrap(), op.zero(5));
    assert_eq!(commutator(&op, &c(2, 2), &op.zero(3)).unwrap(), op.zero(4));

    let mu = c(2, 1);
    assert_eq!(delta(&op, &mu, &c(1, 2)).unwrap(), c(2, 2));
    assert_eq!(delta(&op, &mu, &c(2, 5)).unwrap(), c(3, 0));
    assert_eq!(delta(&op, &mu, &op.zero(3)).unwrap(), op.zero(4));
    assert_eq!(delta(&op, &c(1, 1), &c(2, 5)), Err(Error::NotBinary(1)));
    assert_eq!(delta_via_cup(&op, &mu, &op.unit()).unwrap(), delta(&op, &mu, &op.unit()).unwrap());
}

#[test]
fn deviation_over_total_composition() {
    let op = op();
    let (mu, f, g) = (c(2, 1), c(1, 2), c(1, 3));
    let dev = dev_total(&op, &mu, &f, &g).unwrap();
    assert_eq!(dev, c(2, -12));
    // (-1)^{|g|} dev = f ⌣ g - (-1)^{fg} g ⌣ f = -6 - 6
    let fg = cup(&op, &mu, &f, &g).unwrap();
    let gf = cup(&op, &mu, &g, &f).unwrap();
    assert_eq!(op.add(&fg, &gf).unwrap(), dev);
    // boundary terms of the auxiliary variables
    let lam0 = lambda_aux(&op, &mu, &f, &g, 0).unwrap();
    let lamp = lambda_prime_aux(&op, &mu, &f, &g, 2).unwrap();
    assert_eq!(op.neg(&op.add(&lam0, &lamp).unwrap()), dev);
}

#[test]
fn auxiliary_index_ranges() {
    let op = op();
    let (mu, f, g) = (c(2, 1), c(2, 2), c(1, 3));
    assert!(matches!(
        lambda_aux(&op, &mu, &f, &g, 3),
        Err(Error::AuxIndexOutOfRange { index: 3, min: 0, max: 2 })
    ));
    assert!(matches!(
        lambda_prime_aux(&op, &mu, &f, &g, 0),
        Err(Error::AuxIndexOutOfRange { index: 0, min: 1, max: 3 })
    ));
    assert!(lambda_prime_aux(&op, &mu, &f, &g, 3).is_ok());
    assert_eq!(lambda_aux(&op, &mu, &c(0, 1), &g, 0), Err(Error::NoValidPosition));
}
