//! The quasi-homomorphism example used throughout the tests, docs and CLI
//! examples: `alpha` collapses `{b}`, `{c}` and `{b,c}` onto `{q}`.

use crate::mapping::Mapping;
use crate::scsp::{Constraint, ConstraintSystem, Problem};
use crate::semiring::Semiring;
use crate::value::Value;

/// Powerset semiring over `{a, b, c}`.
pub fn quasi_concrete() -> Semiring {
    Semiring::powerset(&["a", "b", "c"]).expect("small universe")
}

/// Powerset semiring over `{p, q}`.
pub fn quasi_abstract() -> Semiring {
    Semiring::powerset(&["p", "q"]).expect("small universe")
}

/// `{} -> {}`, `{a} -> {p}`, sets within `{b,c}` -> `{q}`, sets holding `a`
/// and something else -> `{p,q}`.
pub fn quasi_alpha() -> Mapping {
    let (p, q, y) = (Value::Set(1), Value::Set(2), Value::Set(3));
    // source carrier order is by bitmask: {}, {a}, {b}, {a,b}, {c}, {a,c}, {b,c}, {a,b,c}
    let images = vec![Value::Set(0), p, q.clone(), y.clone(), q.clone(), y.clone(), q, y];
    Mapping::from_images(quasi_concrete(), quasi_abstract(), images).expect("valid table")
}

/// Upper adjoint of [`quasi_alpha`].
pub fn quasi_gamma() -> Mapping {
    let images = vec![Value::Set(0), Value::Set(0b001), Value::Set(0b110), Value::Set(0b111)];
    Mapping::from_images(quasi_abstract(), quasi_concrete(), images).expect("valid table")
}

/// Two unary constraints over `x1`, `x2` with domain `{d1, d2}`:
/// `x1: d1 -> {a}, d2 -> {b}` and `x2: d1 -> {a}, d2 -> {c}`; type `{x1, x2}`.
pub fn quasi_problem() -> Problem {
    let sys = ConstraintSystem::new(quasi_concrete(), ["d1", "d2"], ["x1", "x2"]).expect("valid system");
    let set = Value::set_of;
    let c1 = Constraint::new(&sys, vec![0], vec![set(&[0]), set(&[1])]).expect("valid constraint");
    let c2 = Constraint::new(&sys, vec![1], vec![set(&[0]), set(&[2])]).expect("valid constraint");
    Problem::new(sys, vec![c1, c2], vec![0, 1]).expect("valid problem")
}
