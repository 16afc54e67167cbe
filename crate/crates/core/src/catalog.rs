//! Small finite c-semirings, enumerated up to isomorphism, and random
//! problems over them.
//!
//! The additive part of a finite c-semiring is the join of a bounded
//! lattice, so the catalog enumerates lattices first and then every product
//! compatible with each lattice: commutative, associative, distributive over
//! the join, with `1` as unit and `0` as absorbing element. Monotonicity
//! gives `a * b <= meet(a, b)`, which bounds the search.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scsp::{Constraint, ConstraintSystem, Problem};
use crate::semiring::{Semiring, Table};

/// Largest carrier enumerated by [`catalog`].
pub const MAX_CATALOG_SIZE: usize = 6;

/// A bounded lattice on `0..n` with `0` bottom and `n - 1` top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub n: usize,
    /// `le[a * n + b]`
    pub le: Vec<bool>,
    pub join: Vec<usize>,
    pub meet: Vec<usize>,
}

impl Lattice {
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.le[a * self.n + b]
    }

    fn from_order(n: usize, le: Vec<bool>) -> Option<Lattice> {
        let bound = |pick_upper: bool| -> Option<Vec<usize>> {
            let mut out = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    let bounds: Vec<usize> = (0..n)
                        .filter(|&c| {
                            if pick_upper {
                                le[a * n + c] && le[b * n + c]
                            } else {
                                le[c * n + a] && le[c * n + b]
                            }
                        })
                        .collect();
                    let best = bounds.iter().copied().find(|&c| {
                        bounds.iter().all(|&d| if pick_upper { le[c * n + d] } else { le[d * n + c] })
                    })?;
                    out.push(best);
                }
            }
            Some(out)
        };
        let join = bound(true)?;
        let meet = bound(false)?;
        Some(Lattice { n, le, join, meet })
    }
}

/// All bounded lattices with `n` elements, possibly with isomorphic
/// repetitions.
///
/// Middle elements `1..n-1` are related only as `i < j` for `i < j`, which
/// covers every poset through one of its linear extensions.
pub fn lattices(n: usize) -> Vec<Lattice> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![Lattice {
            n: 1,
            le: vec![true],
            join: vec![0],
            meet: vec![0],
        }];
    }
    let mid: Vec<usize> = (1..n - 1).collect();
    let pairs: Vec<(usize, usize)> = mid
        .iter()
        .flat_map(|&i| mid.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut le = vec![false; n * n];
        for a in 0..n {
            le[a * n + a] = true;
            le[a] = true; // 0 <= a
            le[a * n + n - 1] = true; // a <= 1
        }
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                le[i * n + j] = true;
            }
        }
        let transitive = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| !(le[a * n + b] && le[b * n + c]) || le[a * n + c]))
        });
        if !transitive {
            continue;
        }
        if let Some(l) = Lattice::from_order(n, le) {
            out.push(l);
        }
    }
    out
}

/// Every product table on `lattice` that makes it a c-semiring.
pub fn products(lattice: &Lattice) -> Vec<Vec<usize>> {
    let n = lattice.n;
    let top = n - 1;
    let mut prod = vec![usize::MAX; n * n];
    for a in 0..n {
        for (x, y, v) in [(a, 0, 0), (0, a, 0), (a, top, a), (top, a, a)] {
            prod[x * n + y] = v;
        }
    }
    let cells: Vec<(usize, usize)> = (1..top)
        .flat_map(|i| (i..top).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    fill(lattice, &cells, 0, &mut prod, &mut out);
    out
}

fn fill(l: &Lattice, cells: &[(usize, usize)], k: usize, prod: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let n = l.n;
    if k == cells.len() {
        if is_c_semiring_product(l, prod) {
            out.push(prod.clone());
        }
        return;
    }
    let (i, j) = cells[k];
    let m = l.meet[i * n + j];
    for v in (0..n).filter(|&v| l.leq(v, m)) {
        prod[i * n + j] = v;
        prod[j * n + i] = v;
        fill(l, cells, k + 1, prod, out);
    }
}

fn is_c_semiring_product(l: &Lattice, prod: &[usize]) -> bool {
    let n = l.n;
    let p = |a: usize, b: usize| prod[a * n + b];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if p(p(a, b), c) != p(a, p(b, c)) {
                    return false;
                }
                if p(a, l.join[b * n + c]) != l.join[p(a, b) * n + p(a, c)] {
                    return false;
                }
            }
        }
    }
    true
}

const NAMES: [&str; MAX_CATALOG_SIZE] = ["0", "a", "b", "c", "d", "e"];

fn element_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| if i + 1 == n && n > 1 { "1".to_string() } else { NAMES[i].to_string() })
        .collect()
}

/// Permutation-invariant key: the lexicographically least relabelling of
/// the (join, product) tables over permutations fixing bottom and top.
fn canonical_key(n: usize, join: &[usize], prod: &[usize]) -> Vec<usize> {
    let mut mid: Vec<usize> = (1..n.saturating_sub(1)).collect();
    let mut best: Option<Vec<usize>> = None;
    permute(&mut mid, 0, &mut |perm_mid| {
        // pi maps old label -> new label
        let mut pi = vec![0; n];
        pi[n - 1] = n - 1;
        for (new, &old) in perm_mid.iter().enumerate() {
            pi[old] = new + 1;
        }
        let mut inv = vec![0; n];
        for (old, &new) in pi.iter().enumerate() {
            inv[new] = old;
        }
        let mut key = Vec::with_capacity(2 * n * n);
        for table in [join, prod] {
            for a in 0..n {
                for b in 0..n {
                    key.push(pi[table[inv[a] * n + inv[b]]]);
                }
            }
        }
        if best.as_ref().is_none_or(|b| &key < b) {
            best = Some(key);
        }
    });
    best.unwrap_or_default()
}

fn permute(xs: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, f);
        xs.swap(k, i);
    }
}

/// All c-semirings with `2..=max_size` elements, one per isomorphism class,
/// ordered by size and then by their canonical tables.
pub fn enumerate(max_size: usize) -> Vec<Semiring> {
    let mut out = Vec::new();
    for n in 2..=max_size.min(MAX_CATALOG_SIZE) {
        let mut seen = BTreeSet::new();
        for l in lattices(n) {
            for prod in products(&l) {
                let key = canonical_key(n, &l.join, &prod);
                if !seen.insert(key.clone()) {
                    continue;
                }
                let grid = |t: &[usize]| -> Vec<Vec<u32>> {
                    (0..n).map(|a| (0..n).map(|b| t[a * n + b] as u32).collect()).collect()
                };
                let (join, prod) = key.split_at(n * n);
                let table = Table {
                    names: element_names(n),
                    sum: grid(join),
                    prod: grid(prod),
                    zero: 0,
                    one: (n - 1) as u32,
                };
                out.push(Semiring::table(table).expect("enumerated tables are well formed"));
            }
        }
    }
    out
}

/// The catalog of c-semirings with at most [`MAX_CATALOG_SIZE`] elements,
/// computed once.
pub fn catalog() -> &'static [Semiring] {
    static CATALOG: OnceLock<Vec<Semiring>> = OnceLock::new();
    CATALOG.get_or_init(|| enumerate(MAX_CATALOG_SIZE))
}

/// Catalog entries with at most `max_size` elements.
pub fn catalog_up_to(max_size: usize) -> Vec<Semiring> {
    catalog()
        .iter()
        .filter(|s| s.cardinality().is_some_and(|c| c <= max_size as u128))
        .cloned()
        .collect()
}

/// Size limits for [`random_problem`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemBounds {
    pub max_vars: usize,
    pub max_domain: usize,
    pub max_constraints: usize,
    pub max_arity: usize,
    /// Denominator bound for values of infinite carriers.
    pub max_denominator: i128,
}

impl Default for ProblemBounds {
    fn default() -> Self {
        ProblemBounds {
            max_vars: 4,
            max_domain: 3,
            max_constraints: 4,
            max_arity: 3,
            max_denominator: 16,
        }
    }
}

/// Exact sizes for [`generate_problem`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemShape {
    pub vars: usize,
    pub domain: usize,
    /// Number of constraints, capped by the number of distinct scopes found.
    pub constraints: usize,
    /// Largest scope size; each scope size is drawn from `1..=arity`.
    pub arity: usize,
    /// Size of the problem type.
    pub con: usize,
    pub max_denominator: i128,
}

/// A random problem with the given shape: variables `x1..`, domain values
/// `d1..`, constraints on distinct random scopes.
pub fn generate_problem<R: Rng + ?Sized>(rng: &mut R, s: &Semiring, shape: &ProblemShape) -> Result<Problem> {
    let (nv, nd) = (shape.vars, shape.domain);
    if nv == 0 || nd == 0 {
        return Err(Error::InvalidArgument("problem shape must have variables and domain values".into()));
    }
    if shape.con > nv {
        return Err(Error::InvalidArgument(format!("type of size {} over {nv} variables", shape.con)));
    }
    let sys = ConstraintSystem::new(
        s.clone(),
        (1..=nd).map(|i| format!("d{i}")),
        (1..=nv).map(|i| format!("x{i}")),
    )?;
    let mut scopes: Vec<Vec<usize>> = Vec::new();
    for _ in 0..shape.constraints * 8 {
        if scopes.len() == shape.constraints {
            break;
        }
        let arity = rng.random_range(1..=shape.arity.clamp(1, nv));
        let scope = random_subset(rng, nv, arity);
        if !scopes.contains(&scope) {
            scopes.push(scope);
        }
    }
    let constraints = scopes
        .into_iter()
        .map(|scope| Constraint::from_fn(&sys, scope, |_| s.sample(rng, shape.max_denominator)))
        .collect::<Result<Vec<_>>>()?;
    let con = random_subset(rng, nv, shape.con);
    Problem::new(sys, constraints, con)
}

/// A random problem: `1..=max_vars` variables, `1..=max_domain` domain
/// values, `1..=max_constraints` constraints on distinct random scopes and a
/// random (possibly empty) problem type of at most three variables.
pub fn random_problem<R: Rng + ?Sized>(rng: &mut R, s: &Semiring, bounds: &ProblemBounds) -> Result<Problem> {
    if bounds.max_vars == 0 || bounds.max_domain == 0 {
        return Err(Error::InvalidArgument("problem bounds must be positive".into()));
    }
    let vars = rng.random_range(1..=bounds.max_vars);
    let shape = ProblemShape {
        vars,
        domain: rng.random_range(1..=bounds.max_domain),
        constraints: rng.random_range(1..=bounds.max_constraints.max(1)),
        arity: bounds.max_arity,
        con: rng.random_range(0..=vars.min(3)),
        max_denominator: bounds.max_denominator,
    };
    generate_problem(rng, s, &shape)
}

fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        all.swap(i, j);
    }
    let mut out = all[..k].to_vec();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{Budget, Verdict};
    use crate::semiring::check_axioms;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lattice_counts_up_to_isomorphism() {
        // unlabelled lattices: 1, 1, 1, 2, 5, 15 for n = 1..=6
        let expected = [1, 1, 1, 2, 5, 15];
        for (n, &want) in (1..=6).zip(&expected) {
            let mut keys = BTreeSet::new();
            for l in lattices(n) {
                keys.insert(canonical_key(n, &l.join, &l.meet));
            }
            assert_eq!(keys.len(), want, "n = {n}");
        }
    }

    #[test]
    fn every_catalog_entry_is_a_c_semiring() {
        for s in catalog_up_to(5) {
            let r = check_axioms(&s, &Budget::default());
            assert_eq!(r.verdict, Verdict::Pass, "{s}: {r}");
        }
    }

    #[test]
    fn small_sizes_match_hand_counts() {
        let by_size = |n: u128| catalog().iter().filter(|s| s.cardinality() == Some(n)).count();
        // the boolean semiring
        assert_eq!(by_size(2), 1);
        // chain 0 < m < 1 with m*m = m or m*m = 0
        assert_eq!(by_size(3), 2);
    }

    #[test]
    fn random_problems_are_well_formed_and_seeded() {
        let s = &catalog()[3];
        let b = ProblemBounds::default();
        let p1 = random_problem(&mut ChaCha8Rng::seed_from_u64(7), s, &b).unwrap();
        let p2 = random_problem(&mut ChaCha8Rng::seed_from_u64(7), s, &b).unwrap();
        assert_eq!(p1, p2);
        assert!(p1.system().variables().len() <= 4);
        assert!(p1.system().domain().len() <= 3);
    }
}
