use super::{Constraint, Problem};
use crate::error::{Error, Result};
use crate::semiring::Semiring;

/// `c1 ⊑ c2`: pointwise `<=` on a shared scope.
pub fn constraint_below(s: &Semiring, c1: &Constraint, c2: &Constraint) -> Result<bool> {
    if c1.scope() != c2.scope() {
        return Err(Error::InvalidScope("constraints have different scopes".into()));
    }
    Ok(c1.table().iter().zip(c2.table()).all(|(a, b)| s.le(a, b)))
}

/// Set extension of the constraint ordering. For every scope, either both
/// problems constrain it with `c1 ⊑ c2`, or `P2` leaves it unconstrained or
/// constrains it trivially.
///
/// A scope that only `P2` constrains, nontrivially, makes `P1` not below
/// `P2`, even though `P1`'s implicit constraint there is the trivial one.
pub fn problem_below(p1: &Problem, p2: &Problem) -> Result<bool> {
    if p1.system() != p2.system() {
        return Err(Error::InvalidProblem("problems use different constraint systems".into()));
    }
    if p1.con() != p2.con() {
        return Err(Error::InvalidProblem("problems have different types".into()));
    }
    let s = p1.semiring();
    for c2 in p2.constraints() {
        let ok = match p1.constraint_with_scope(c2.scope()) {
            Some(c1) => constraint_below(s, c1, c2)? || c2.is_trivial(s),
            None => c2.is_trivial(s),
        };
        if !ok {
            return Ok(false);
        }
    }
    // scopes constrained only by P1 satisfy the second condition
    Ok(true)
}

/// Below in both directions.
pub fn problem_equal(p1: &Problem, p2: &Problem) -> Result<bool> {
    Ok(problem_below(p1, p2)? && problem_below(p2, p1)?)
}
