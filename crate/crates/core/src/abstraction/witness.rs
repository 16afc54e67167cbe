//! Small problems that encode semiring elements in their solutions. They
//! turn an algebraic failure of a mapping (a sum or product it does not
//! preserve, or a strict inequality it does not reflect) into a concrete
//! pair of problems or a problem on which translation misbehaves.

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::json::problem_to_json;
use crate::report::WitnessItem;
use crate::scsp::{Constraint, ConstraintSystem, Problem, VarId};
use crate::semiring::Semiring;
use crate::value::Value;

#[derive(Clone, Debug)]
pub struct WitnessProblem {
    pub problem: Problem,
    /// The elements the construction encodes.
    pub encodes: Vec<WitnessItem>,
    /// What solving the problem yields.
    pub claim: String,
}

impl WitnessProblem {
    pub fn to_json(&self) -> Json {
        let encodes: Vec<Json> = self
            .encodes
            .iter()
            .map(|w| json!({"label": w.label, "value": w.text}))
            .collect();
        json!({
            "problem": problem_to_json(&self.problem),
            "encodes": encodes,
            "claim": self.claim,
        })
    }
}

fn spare_variables(system: &ConstraintSystem, con: &[VarId]) -> Vec<VarId> {
    (0..system.variables().len()).filter(|v| !con.contains(v)).collect()
}

fn sorted(mut v: Vec<VarId>) -> Vec<VarId> {
    v.sort_unstable();
    v
}

/// Two problems solving to the constant `a + b` on every con-tuple.
///
/// `P` has one binary constraint on a spare variable `x` and a partner `y`
/// (the first con variable, or a second spare variable when con is empty),
/// valued `a` where `x = y` and `b` elsewhere. Summing `x` out reaches both
/// cases because the domain has at least two values. `Q` has a single
/// constraint on the same scope, constantly `a + b`.
pub fn witness_sum_problem(
    system: &ConstraintSystem,
    a: &Value,
    b: &Value,
    con: &[VarId],
) -> Result<(WitnessProblem, WitnessProblem)> {
    let s = system.semiring();
    s.ensure_contains(a)?;
    s.ensure_contains(b)?;
    if system.domain().len() < 2 {
        return Err(Error::WitnessConstruction("the domain needs at least two values".into()));
    }
    let con = sorted(con.to_vec());
    let spare = spare_variables(system, &con);
    let (x, y) = match (spare.first(), con.first(), spare.get(1)) {
        (Some(&x), Some(&y), _) | (Some(&x), None, Some(&y)) => (x, y),
        _ => {
            return Err(Error::WitnessConstruction(
                "no spare variable outside the problem type".into(),
            ))
        }
    };
    let scope = sorted(vec![x, y]);
    let c1 = Constraint::from_fn(system, scope.clone(), |t| if t[0] == t[1] { a.clone() } else { b.clone() })?;
    let sum = s.add(a, b);
    let c2 = Constraint::constant(system, scope, sum.clone())?;
    let encodes = vec![WitnessItem::new("a", s, vec![a.clone()]), WitnessItem::new("b", s, vec![b.clone()])];
    let claim = format!("Sol is constantly a+b = {}", s.format_value(&sum));
    Ok((
        WitnessProblem {
            problem: Problem::new(system.clone(), vec![c1], con.clone())?,
            encodes: encodes.clone(),
            claim: claim.clone(),
        },
        WitnessProblem {
            problem: Problem::new(system.clone(), vec![c2], con)?,
            encodes,
            claim,
        },
    ))
}

/// Two problems solving to the constant `a * b` on every con-tuple.
///
/// `P` has a unary constraint `a` on a spare variable and a constant `b`
/// constraint over the problem type; `Q` has a single constant `a * b`
/// constraint over the problem type.
pub fn witness_prod_problem(
    system: &ConstraintSystem,
    a: &Value,
    b: &Value,
    con: &[VarId],
) -> Result<(WitnessProblem, WitnessProblem)> {
    let s = system.semiring();
    s.ensure_contains(a)?;
    s.ensure_contains(b)?;
    let con = sorted(con.to_vec());
    let Some(&x) = spare_variables(system, &con).first() else {
        return Err(Error::WitnessConstruction(
            "no spare variable outside the problem type".into(),
        ));
    };
    let prod = s.mul(a, b);
    let p = Problem::new(
        system.clone(),
        vec![
            Constraint::constant(system, vec![x], a.clone())?,
            Constraint::constant(system, con.clone(), b.clone())?,
        ],
        con.clone(),
    )?;
    let q = Problem::new(system.clone(), vec![Constraint::constant(system, con.clone(), prod.clone())?], con)?;
    let encodes = vec![WitnessItem::new("a", s, vec![a.clone()]), WitnessItem::new("b", s, vec![b.clone()])];
    let claim = format!("Sol is constantly a*b = {}", s.format_value(&prod));
    Ok((
        WitnessProblem {
            problem: p,
            encodes: encodes.clone(),
            claim: claim.clone(),
        },
        WitnessProblem {
            problem: q,
            encodes,
            claim,
        },
    ))
}

/// A problem whose solution is `sum_i prod_j u_ij` at `(d1)`,
/// `sum_i prod_j v_ij` at `(d2)` and `0` elsewhere.
///
/// `u` and `v` are `n x m` (`n` summands of `m` factors). Variables are
/// `x0, y, z1..zm` over `max(n, 2)` domain values with type `{x0}`;
/// constraint `j` has scope `{x0, y, zj}` and holds `u_ij` when `x0 = d1`
/// and `y = d_i`, `v_ij` when `x0 = d2` and `y = d_i`, and `0` otherwise.
/// Summing `y` out ranges over the rows; the `zj` only keep the scopes
/// distinct.
pub fn witness_sum_product_problem(s: &Semiring, u: &[Vec<Value>], v: &[Vec<Value>]) -> Result<WitnessProblem> {
    let n = u.len();
    let m = u.first().map_or(0, Vec::len);
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("dimension mismatch: matrices must be nonempty".into()));
    }
    if v.len() != n || u.iter().chain(v).any(|row| row.len() != m) {
        return Err(Error::InvalidArgument(format!(
            "dimension mismatch: both matrices must be {n}x{m}"
        )));
    }
    for x in u.iter().chain(v).flatten() {
        s.ensure_contains(x)?;
    }
    let domain: Vec<String> = (1..=n.max(2)).map(|i| format!("d{i}")).collect();
    let mut vars = vec!["x0".to_string(), "y".to_string()];
    vars.extend((1..=m).map(|j| format!("z{j}")));
    let sys = ConstraintSystem::new(s.clone(), domain, vars)?;
    let constraints = (0..m)
        .map(|j| {
            Constraint::from_fn(&sys, vec![0, 1, 2 + j], |t| match (t[0], t[1]) {
                (0, i) if i < n => u[i][j].clone(),
                (1, i) if i < n => v[i][j].clone(),
                _ => s.zero().clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let flat = |mx: &[Vec<Value>]| mx.iter().flatten().cloned().collect::<Vec<_>>();
    let sp = |mx: &[Vec<Value>]| s.sum_all(mx.iter().map(|row| s.prod_all(row)).collect::<Vec<_>>().iter());
    let claim = format!(
        "Sol(d1) = {}, Sol(d2) = {}, other tuples 0",
        s.format_value(&sp(u)),
        s.format_value(&sp(v))
    );
    Ok(WitnessProblem {
        problem: Problem::new(sys, constraints, vec![0])?,
        encodes: vec![WitnessItem::new("u", s, flat(u)), WitnessItem::new("v", s, flat(v))],
        claim,
    })
}
