use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Semiring;
use crate::report::{Budget, CertificationReport, PropertyReport, WitnessItem};
use crate::value::Value;

/// The c-semiring laws and the induced-order facts, in checking order.
///
/// Idempotency of the sum is checked first so that a mutated diagonal cell
/// is reported as such rather than through a derived law.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Membership,
    SumIdempotent,
    SumCommutative,
    SumAssociative,
    SumUnit,
    SumAbsorbing,
    ProdCommutative,
    ProdAssociative,
    ProdUnit,
    ProdAbsorbing,
    Distributive,
    OrderPartial,
    SumIsLub,
    ProdMonotone,
    ProdIsGlb,
}

impl Axiom {
    pub const ALL: [Axiom; 15] = [
        Axiom::Membership,
        Axiom::SumIdempotent,
        Axiom::SumCommutative,
        Axiom::SumAssociative,
        Axiom::SumUnit,
        Axiom::SumAbsorbing,
        Axiom::ProdCommutative,
        Axiom::ProdAssociative,
        Axiom::ProdUnit,
        Axiom::ProdAbsorbing,
        Axiom::Distributive,
        Axiom::OrderPartial,
        Axiom::SumIsLub,
        Axiom::ProdMonotone,
        Axiom::ProdIsGlb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Membership => "membership",
            Axiom::SumIdempotent => "idempotency",
            Axiom::SumCommutative => "sum-commutativity",
            Axiom::SumAssociative => "sum-associativity",
            Axiom::SumUnit => "sum-unit",
            Axiom::SumAbsorbing => "sum-absorbing-one",
            Axiom::ProdCommutative => "prod-commutativity",
            Axiom::ProdAssociative => "prod-associativity",
            Axiom::ProdUnit => "prod-unit",
            Axiom::ProdAbsorbing => "prod-absorbing-zero",
            Axiom::Distributive => "distributivity",
            Axiom::OrderPartial => "partial-order",
            Axiom::SumIsLub => "sum-is-lub",
            Axiom::ProdMonotone => "prod-monotone",
            Axiom::ProdIsGlb => "prod-is-glb",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Axiom::Membership => 0,
            Axiom::SumIdempotent | Axiom::SumUnit | Axiom::SumAbsorbing => 1,
            Axiom::ProdUnit | Axiom::ProdAbsorbing => 1,
            Axiom::SumCommutative | Axiom::ProdCommutative | Axiom::ProdIsGlb => 2,
            _ => 3,
        }
    }

    /// Whether the law holds at the given arguments. `args` has
    /// [`arity`](Self::arity) entries.
    pub fn holds_at(self, s: &Semiring, args: &[&Value]) -> bool {
        let (zero, one) = (s.zero(), s.one());
        match (self, args) {
            (Axiom::Membership, _) => s.contains(zero) && s.contains(one),
            (Axiom::SumIdempotent, [a]) => &s.add(a, a) == *a,
            (Axiom::SumUnit, [a]) => &s.add(zero, a) == *a && &s.add(a, zero) == *a,
            (Axiom::SumAbsorbing, [a]) => &s.add(one, a) == one && &s.add(a, one) == one,
            (Axiom::ProdUnit, [a]) => &s.mul(one, a) == *a && &s.mul(a, one) == *a,
            (Axiom::ProdAbsorbing, [a]) => &s.mul(zero, a) == zero && &s.mul(a, zero) == zero,
            (Axiom::SumCommutative, [a, b]) => s.add(a, b) == s.add(b, a),
            (Axiom::ProdCommutative, [a, b]) => s.mul(a, b) == s.mul(b, a),
            (Axiom::SumAssociative, [a, b, c]) => {
                s.add(&s.add(a, b), c) == s.add(a, &s.add(b, c))
            }
            (Axiom::ProdAssociative, [a, b, c]) => {
                s.mul(&s.mul(a, b), c) == s.mul(a, &s.mul(b, c))
            }
            (Axiom::Distributive, [a, b, c]) => {
                s.mul(a, &s.add(b, c)) == s.add(&s.mul(a, b), &s.mul(a, c))
                    && s.mul(&s.add(b, c), a) == s.add(&s.mul(b, a), &s.mul(c, a))
            }
            (Axiom::OrderPartial, [a, b, c]) => {
                let le = |x: &Value, y: &Value| &s.add(x, y) == y;
                le(a, a)
                    && (!(le(a, b) && le(b, a)) || a == b)
                    && (!(le(a, b) && le(b, c)) || le(a, c))
            }
            (Axiom::SumIsLub, [a, b, c]) => {
                let le = |x: &Value, y: &Value| &s.add(x, y) == y;
                let j = s.add(a, b);
                le(a, &j) && le(b, &j) && (!(le(a, c) && le(b, c)) || le(&j, c))
            }
            (Axiom::ProdMonotone, [a, b, c]) => {
                let le = |x: &Value, y: &Value| &s.add(x, y) == y;
                !le(a, b) || le(&s.mul(a, c), &s.mul(b, c))
            }
            (Axiom::ProdIsGlb, [a, b]) => {
                let le = |x: &Value, y: &Value| &s.add(x, y) == y;
                let m = s.mul(a, b);
                le(&m, a) && le(&m, b)
            }
            _ => panic!("axiom {self} applied to {} arguments", args.len()),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Certifies the c-semiring laws.
///
/// Enumerable carriers are checked exhaustively as long as the number of
/// triples fits `budget.max_evaluations`; otherwise a seeded point pool is
/// used and the verdict is `sampled-pass`. The first violated law (in
/// [`Axiom::ALL`] order) is reported with its witness arguments.
///
/// The greatest-lower-bound fact is only checked when the product is
/// idempotent on the examined points.
pub fn check_axioms(s: &Semiring, budget: &Budget) -> CertificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let (points, exhaustive) = match s.elements() {
        Some(els) if (els.len() as u64).saturating_pow(3) <= budget.max_evaluations => {
            (els.to_vec(), true)
        }
        Some(els) => {
            let mut pts = s.landmarks();
            for _ in 0..budget.pool {
                pts.push(els[rand::Rng::random_range(&mut rng, 0..els.len())].clone());
            }
            (pts, false)
        }
        None => s.test_points(&mut rng, budget.pool, budget.max_denominator),
    };
    if let Some(bad) = points.iter().find(|v| !s.contains(v)) {
        return PropertyReport::fail(
            Axiom::Membership.name(),
            vec![WitnessItem::note("value", format!("{bad:?}"))],
            0,
        );
    }
    let prod_idempotent = points.iter().all(|a| &s.mul(a, a) == a);
    let mut checked = 0u64;
    for axiom in Axiom::ALL {
        if axiom == Axiom::ProdIsGlb && !prod_idempotent {
            continue;
        }
        if let Some(args) = first_violation(s, axiom, &points, &mut checked) {
            let labels = ["a", "b", "c"];
            let witness = args
                .into_iter()
                .zip(labels)
                .map(|(v, l)| WitnessItem::new(l, s, vec![v]))
                .collect();
            return PropertyReport::fail(axiom.name(), witness, checked);
        }
    }
    PropertyReport::pass("c-semiring", exhaustive, checked)
}

fn first_violation(
    s: &Semiring,
    axiom: Axiom,
    points: &[Value],
    checked: &mut u64,
) -> Option<Vec<Value>> {
    match axiom.arity() {
        0 => {
            *checked += 1;
            (!axiom.holds_at(s, &[])).then(Vec::new)
        }
        1 => points.iter().find_map(|a| {
            *checked += 1;
            (!axiom.holds_at(s, &[a])).then(|| vec![a.clone()])
        }),
        2 => points.iter().find_map(|a| {
            points.iter().find_map(|b| {
                *checked += 1;
                (!axiom.holds_at(s, &[a, b])).then(|| vec![a.clone(), b.clone()])
            })
        }),
        _ => points.iter().find_map(|a| {
            points.iter().find_map(|b| {
                points.iter().find_map(|c| {
                    *checked += 1;
                    (!axiom.holds_at(s, &[a, b, c])).then(|| vec![a.clone(), b.clone(), c.clone()])
                })
            })
        }),
    }
}
