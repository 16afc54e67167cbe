//! Naive reference solver used to cross-check the theorem procedures.
//!
//! Unlike [`solution`](crate::scsp::solution) it enumerates every assignment
//! of every variable of the system, evaluates each constraint by direct
//! indexing and never builds intermediate constraints.

use crate::scsp::Problem;
use crate::semiring::Semiring;
use crate::value::Value;

/// `Sol(P)` indexed by con-tuple in lexicographic order.
pub fn brute_force_solution(p: &Problem) -> Vec<Value> {
    let sys = p.system();
    let s = p.semiring();
    let d = sys.domain().len();
    let nv = sys.variables().len();
    let con = p.con();
    let width = d.pow(con.len() as u32);
    let mut out = vec![s.zero().clone(); width];
    let mut assignment = vec![0usize; nv];
    loop {
        let mut v = s.one().clone();
        for c in p.constraints() {
            let idx = c.scope().iter().fold(0, |acc, &x| acc * d + assignment[x]);
            v = s.mul(&v, &c.table()[idx]);
        }
        let k = con.iter().fold(0, |acc, &x| acc * d + assignment[x]);
        out[k] = s.add(&out[k], &v);
        // odometer over the full variable list
        let mut i = nv;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < d {
                break;
            }
            assignment[i] = 0;
        }
    }
}

/// Positions whose value no other value strictly dominates.
pub fn brute_force_optimal(s: &Semiring, values: &[Value]) -> Vec<usize> {
    (0..values.len())
        .filter(|&i| !values.iter().any(|w| s.le(&values[i], w) && &values[i] != w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::quasi_problem;
    use crate::scsp::solution;

    #[test]
    fn agrees_with_the_solver_on_the_powerset_example() {
        let p = quasi_problem();
        let sol = solution(&p);
        assert_eq!(brute_force_solution(&p), sol.values());
        assert_eq!(brute_force_optimal(p.semiring(), sol.values()), sol.optimal_indices());
    }
}
