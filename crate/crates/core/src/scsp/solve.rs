use std::thread;

use super::{normalize_scope, Constraint, ConstraintSystem, Problem, Tuple, VarId};
use crate::error::{Error, Result};
use crate::semiring::Semiring;
use crate::value::Value;

/// Restricts a tuple over the variables `x` to the sub-list `y`.
pub fn tuple_project(t: &[usize], x: &[VarId], y: &[VarId]) -> Result<Tuple> {
    if t.len() != x.len() {
        return Err(Error::InvalidArgument(format!(
            "tuple has arity {}, variable list has {}",
            t.len(),
            x.len()
        )));
    }
    y.iter()
        .map(|v| {
            x.iter()
                .position(|w| w == v)
                .map(|i| t[i])
                .ok_or_else(|| Error::InvalidScope(format!("variable {v} is not in the source list")))
        })
        .collect()
}

/// For each factor, `(position in the enumerated scope, stride)` pairs that
/// turn an assignment of the enumerated scope into a table index.
fn strides(system: &ConstraintSystem, outer: &[VarId], inner: &[VarId]) -> Vec<(usize, usize)> {
    let d = system.domain().len();
    let k = inner.len();
    inner
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let pos = outer.iter().position(|w| w == v).expect("scope within enumeration");
            (pos, d.pow((k - 1 - i) as u32))
        })
        .collect()
}

fn index_in(assignment: &[usize], strides: &[(usize, usize)]) -> usize {
    strides.iter().map(|&(p, s)| assignment[p] * s).sum()
}

/// `def(t) = prod_i def_i(t restricted to con_i)` over the union of scopes.
pub fn combine(system: &ConstraintSystem, cs: &[Constraint]) -> Result<Constraint> {
    if cs.is_empty() {
        return Err(Error::Empty("combination of no constraints"));
    }
    let mut union: Vec<VarId> = cs.iter().flat_map(|c| c.scope().iter().copied()).collect();
    union.sort_unstable();
    union.dedup();
    let union = normalize_scope(system, union)?;
    for c in cs {
        normalize_scope(system, c.scope().to_vec())?;
    }
    let s = system.semiring();
    let maps: Vec<_> = cs.iter().map(|c| strides(system, &union, c.scope())).collect();
    let n = system.tuple_count(union.len())?;
    let table = (0..n)
        .map(|i| {
            let t = system.tuple_at(i, union.len());
            cs.iter()
                .zip(&maps)
                .fold(s.one().clone(), |acc, (c, m)| s.mul(&acc, &c.table()[index_in(&t, m)]))
        })
        .collect();
    Ok(Constraint::from_parts(union, table))
}

/// `c` projected over `vars`: the scope becomes `scope(c) ∩ vars` and each
/// remaining tuple gets the sum over its fiber.
pub fn project(system: &ConstraintSystem, c: &Constraint, vars: &[VarId]) -> Constraint {
    let keep: Vec<VarId> = c.scope().iter().copied().filter(|v| vars.contains(v)).collect();
    let s = system.semiring();
    let m = strides(system, c.scope(), &keep);
    let mut table = vec![s.zero().clone(); system.tuple_count(keep.len()).expect("smaller than source")];
    for (i, v) in c.table().iter().enumerate() {
        let t = system.tuple_at(i, c.scope().len());
        let slot = &mut table[index_in(&t, &m)];
        *slot = s.add(slot, v);
    }
    Constraint::from_parts(keep, table)
}

/// `Sol(P)` over every `|con|`-tuple together with its optimal tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionTable {
    system: ConstraintSystem,
    con: Vec<VarId>,
    values: Vec<Value>,
    optimal: Vec<usize>,
}

impl SolutionTable {
    pub(crate) fn new(system: ConstraintSystem, con: Vec<VarId>, values: Vec<Value>) -> SolutionTable {
        let s = system.semiring();
        let best = s.maximal_unchecked(&values);
        let optimal = (0..values.len()).filter(|&i| best.contains(&values[i])).collect();
        SolutionTable {
            system,
            con,
            values,
            optimal,
        }
    }

    pub fn system(&self) -> &ConstraintSystem {
        &self.system
    }

    pub fn con(&self) -> &[VarId] {
        &self.con
    }

    /// Values in lexicographic tuple order.
    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn tuple(&self, index: usize) -> Tuple {
        self.system.tuple_at(index, self.con.len())
    }

    pub fn value(&self, t: &[usize]) -> &Value {
        &self.values[self.system.index_of_tuple(t)]
    }

    /// `(tuple, value)` pairs in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (Tuple, &Value)> + '_ {
        self.values.iter().enumerate().map(|(i, v)| (self.tuple(i), v))
    }

    /// Indices of the optimal tuples, ascending.
    pub fn optimal_indices(&self) -> &[usize] {
        &self.optimal
    }

    pub fn optimal_tuples(&self) -> Vec<Tuple> {
        self.optimal.iter().map(|&i| self.tuple(i)).collect()
    }

    pub fn is_optimal(&self, t: &[usize]) -> bool {
        self.optimal.binary_search(&self.system.index_of_tuple(t)).is_ok()
    }
}

/// `Sol(P) = (c* x ⊗C) ⇓ con`, by enumeration of every assignment of
/// `con ∪ scopes`.
pub fn solution(p: &Problem) -> SolutionTable {
    solution_with_jobs(p, 1)
}

/// Below this many assignments extra workers are not worth spawning.
const PARALLEL_THRESHOLD: usize = 1 << 14;

/// [`solution`] with the assignment space split across up to `jobs`
/// workers. Each worker covers a contiguous range and partial tables are
/// merged in range order, so the result does not depend on `jobs`.
pub fn solution_with_jobs(p: &Problem, jobs: usize) -> SolutionTable {
    let system = p.system();
    let s = system.semiring();
    let support = p.support();
    // c*: the trivial constraint of the problem type
    let c_star = Constraint::trivial(system, p.con().to_vec()).expect("problem type validated");
    let factors: Vec<&Constraint> = p.constraints().iter().chain(std::iter::once(&c_star)).collect();
    let maps: Vec<_> = factors.iter().map(|c| strides(system, &support, c.scope())).collect();
    let con_map = strides(system, &support, p.con());
    let width = system.tuple_count(p.con().len()).expect("problem type validated");
    let total = system.tuple_count(support.len()).expect("support enumerable");

    // Each factor is folded in at the deepest enumeration position of its
    // scope, so a step that only moves the last digits recomputes only the
    // factors touching them.
    let levels = support.len().max(1);
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); levels];
    for (f, m) in maps.iter().enumerate() {
        let deepest = m.iter().map(|&(pos, _)| pos).max().unwrap_or(0);
        groups[deepest].push(f);
    }

    let run = |start: usize, end: usize| -> Vec<Value> {
        let mut out = vec![s.zero().clone(); width];
        if start >= end {
            return out;
        }
        let d = system.domain().len();
        let mut a = system.tuple_at(start, support.len());
        let mut prefix = vec![s.one().clone(); levels + 1];
        let mut dirty = 0;
        for _ in start..end {
            for k in dirty..levels {
                prefix[k + 1] = groups[k]
                    .iter()
                    .fold(prefix[k].clone(), |acc, &f| s.mul(&acc, &factors[f].table()[index_in(&a, &maps[f])]));
            }
            let slot = &mut out[index_in(&a, &con_map)];
            *slot = s.add(slot, &prefix[levels]);
            // odometer step, last variable fastest
            dirty = a.len();
            while dirty > 0 {
                dirty -= 1;
                a[dirty] += 1;
                if a[dirty] < d {
                    break;
                }
                a[dirty] = 0;
            }
        }
        out
    };

    let jobs = jobs.max(1);
    let values = if jobs == 1 || total < PARALLEL_THRESHOLD {
        run(0, total)
    } else {
        let chunk = total.div_ceil(jobs);
        let partials: Vec<Vec<Value>> = thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|j| {
                    let run = &run;
                    scope.spawn(move || run(j * chunk, ((j + 1) * chunk).min(total)))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("solver worker panicked")).collect()
        });
        merge(s, partials, width)
    };
    SolutionTable::new(system.clone(), p.con().to_vec(), values)
}

fn merge(s: &Semiring, partials: Vec<Vec<Value>>, width: usize) -> Vec<Value> {
    let mut out = vec![s.zero().clone(); width];
    for part in partials {
        for (slot, v) in out.iter_mut().zip(&part) {
            *slot = s.add(slot, v);
        }
    }
    out
}

/// The tuples with a maximal solution value.
pub fn optimals(p: &Problem) -> Vec<Tuple> {
    solution(p).optimal_tuples()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::quasi_problem;

    fn fuzzy_system() -> ConstraintSystem {
        ConstraintSystem::new(Semiring::fuzzy(), ["d1", "d2"], ["x1", "x2"]).unwrap()
    }

    #[test]
    fn tuple_projection() {
        let t = [0, 1];
        assert_eq!(tuple_project(&t, &[0, 1], &[0]).unwrap(), vec![0]);
        assert_eq!(tuple_project(&t, &[0, 1], &[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(tuple_project(&t, &[0, 1], &[]).unwrap(), Vec::<usize>::new());
        assert!(tuple_project(&t, &[0, 1], &[2]).is_err());
    }

    #[test]
    fn quasi_combination_and_projection() {
        let p = quasi_problem();
        let sys = p.system();
        let c = combine(sys, p.constraints()).unwrap();
        assert_eq!(c.scope(), &[0, 1]);
        assert_eq!(c.value(sys, &[0, 1]), &Value::Set(0));
        assert_eq!(c.value(sys, &[0, 0]), &Value::set_of(&[0]));
        let all = project(sys, &c, &[]);
        assert!(all.scope().is_empty());
        assert_eq!(all.table(), &[Value::set_of(&[0])]);
        assert_eq!(project(sys, &c, &[0, 1]), c);
    }

    #[test]
    fn combining_with_trivial_changes_nothing() {
        let p = quasi_problem();
        let sys = p.system();
        let c1 = &p.constraints()[0];
        let triv = Constraint::trivial(sys, vec![0]).unwrap();
        assert_eq!(&combine(sys, &[c1.clone(), triv]).unwrap(), c1);
    }

    #[test]
    fn fuzzy_projection_takes_fiber_maxima() {
        let sys = fuzzy_system();
        let c = Constraint::new(
            &sys,
            vec![0, 1],
            vec![Value::rat(1, 5), Value::rat(1, 2), Value::rat(2, 5), Value::rat(9, 10)],
        )
        .unwrap();
        let p = project(&sys, &c, &[0]);
        assert_eq!(p.table(), &[Value::rat(1, 2), Value::rat(9, 10)]);
    }

    #[test]
    fn quasi_solution_and_optima() {
        let p = quasi_problem();
        let sol = solution(&p);
        let set = Value::set_of;
        assert_eq!(sol.values(), &[set(&[0]), set(&[]), set(&[]), set(&[])]);
        assert_eq!(sol.optimal_tuples(), vec![vec![0, 0]]);
        assert!(sol.is_optimal(&[0, 0]));
    }

    #[test]
    fn trivial_problem_solves_to_one_everywhere() {
        let sys = fuzzy_system();
        let p = Problem::new(sys.clone(), vec![Constraint::trivial(&sys, vec![0]).unwrap()], vec![0, 1]).unwrap();
        let sol = solution(&p);
        assert!(sol.values().iter().all(|v| v == &Value::rat(1, 1)));
        assert_eq!(sol.optimal_indices(), &[0, 1, 2, 3]);
    }

    #[test]
    fn jobs_do_not_change_the_result() {
        let sys = ConstraintSystem::new(Semiring::weighted(), ["a", "b", "c", "d"], ["x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7"]).unwrap();
        let cs: Vec<Constraint> = (0..7)
            .map(|i| Constraint::from_fn(&sys, vec![i, i + 1], |t| Value::weight((t[0] * 3 + t[1] * 5 + i) as i128 % 7)).unwrap())
            .collect();
        let p = Problem::new(sys, cs, vec![0, 7]).unwrap();
        assert_eq!(solution_with_jobs(&p, 1), solution_with_jobs(&p, 8));
    }

    #[test]
    fn duplicate_scopes_are_rejected() {
        let sys = fuzzy_system();
        let c = Constraint::trivial(&sys, vec![0]).unwrap();
        assert!(matches!(Problem::new(sys, vec![c.clone(), c], vec![0]), Err(Error::InvalidProblem(_))));
    }
}
