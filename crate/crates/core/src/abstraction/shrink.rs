//! Greedy minimization of failing problems.

use crate::scsp::{Constraint, ConstraintSystem, Problem};
use crate::value::Value;

/// Repeatedly applies the first simplification that keeps `fails` true:
/// dropping a constraint, a type variable, an unused variable or the last
/// domain value, or replacing a table value other than `0` and `1` by one of
/// them. Every step shrinks the problem, so this terminates.
pub fn shrink_problem(p: &Problem, fails: impl Fn(&Problem) -> bool) -> Problem {
    let mut cur = p.clone();
    'outer: loop {
        for cand in candidates(&cur) {
            if fails(&cand) {
                cur = cand;
                continue 'outer;
            }
        }
        return cur;
    }
}

fn candidates(p: &Problem) -> Vec<Problem> {
    let mut out = Vec::new();
    let sys = p.system();
    let cs = p.constraints();
    if cs.len() > 1 {
        for i in 0..cs.len() {
            let mut rest = cs.to_vec();
            rest.remove(i);
            out.extend(Problem::new(sys.clone(), rest, p.con().to_vec()).ok());
        }
    }
    for i in 0..p.con().len() {
        let mut con = p.con().to_vec();
        con.remove(i);
        out.extend(Problem::new(sys.clone(), cs.to_vec(), con).ok());
    }
    let support = p.support();
    for v in (0..sys.variables().len()).rev().filter(|v| !support.contains(v)) {
        out.extend(drop_variable(p, v));
    }
    if sys.domain().len() > 1 {
        out.extend(drop_last_domain_value(p));
    }
    let s = p.semiring();
    for (i, c) in cs.iter().enumerate() {
        for (k, v) in c.table().iter().enumerate() {
            if v == s.zero() || v == s.one() {
                continue;
            }
            for simpler in [s.zero(), s.one()] {
                let mut table = c.table().to_vec();
                table[k] = simpler.clone();
                let mut next = cs.to_vec();
                next[i] = Constraint::from_parts(c.scope().to_vec(), table);
                out.extend(Problem::new(sys.clone(), next, p.con().to_vec()).ok());
            }
        }
    }
    out
}

fn drop_variable(p: &Problem, v: usize) -> Option<Problem> {
    let sys = p.system();
    let vars: Vec<String> = sys.variables().iter().enumerate().filter(|(i, _)| *i != v).map(|(_, n)| n.clone()).collect();
    let next = ConstraintSystem::new(sys.semiring().clone(), sys.domain().to_vec(), vars).ok()?;
    let remap = |scope: &[usize]| -> Vec<usize> { scope.iter().map(|&x| if x > v { x - 1 } else { x }).collect() };
    let cs = p
        .constraints()
        .iter()
        .map(|c| Constraint::from_parts(remap(c.scope()), c.table().to_vec()))
        .collect();
    Problem::new(next, cs, remap(p.con())).ok()
}

fn drop_last_domain_value(p: &Problem) -> Option<Problem> {
    let sys = p.system();
    let d = sys.domain().len();
    let next = ConstraintSystem::new(sys.semiring().clone(), sys.domain()[..d - 1].to_vec(), sys.variables().to_vec()).ok()?;
    let cs = p
        .constraints()
        .iter()
        .map(|c| {
            let arity = c.scope().len();
            let n = next.tuple_count(arity).ok()?;
            let table: Vec<Value> = (0..n)
                .map(|i| c.value(sys, &next.tuple_at(i, arity)).clone())
                .collect();
            Some(Constraint::from_parts(c.scope().to_vec(), table))
        })
        .collect::<Option<Vec<_>>>()?;
    Problem::new(next, cs, p.con().to_vec()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{random_problem, ProblemBounds};
    use crate::scsp::solution;
    use crate::semiring::Semiring;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shrinks_to_a_minimal_failing_problem() {
        let s = Semiring::fuzzy();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let bounds = ProblemBounds::default();
        // "some solution value is below 1"
        let fails = |p: &Problem| solution(p).values().iter().any(|v| v != s.one());
        let p = (0..100)
            .map(|_| random_problem(&mut rng, &s, &bounds).unwrap())
            .find(|p| fails(p) && p.constraints().len() > 1)
            .unwrap();
        let small = shrink_problem(&p, fails);
        assert!(fails(&small));
        assert_eq!(small.constraints().len(), 1);
        let table = small.constraints()[0].table();
        assert!(table.iter().all(|v| v == s.zero() || v == s.one()));
        assert!(candidates(&small).iter().all(|c| !fails(c)));
    }
}
