//! Exhaustive enumeration of maps between small finite semirings.

use super::Mapping;
use crate::error::{Error, Result};
use crate::semiring::Semiring;

/// Default carrier-size bound for the isomorphism scan.
pub const DEFAULT_SCAN_BOUND: usize = 5;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// No constraint at all.
    Any,
    /// Endpoints only.
    Endpoints,
    Homomorphism,
    /// Sums exact, products only sub-preserved.
    Quasi,
    Isomorphism,
}

/// Operation tables by carrier index.
struct Tables {
    n: usize,
    sum: Vec<usize>,
    prod: Vec<usize>,
    zero: usize,
    one: usize,
}

impl Tables {
    fn new(s: &Semiring, bound: usize) -> Result<Tables> {
        let els = s.require_elements()?;
        if els.len() > bound {
            return Err(Error::CarrierTooLarge {
                semiring: s.describe(),
                size: els.len(),
                bound,
            });
        }
        let n = els.len();
        let idx = |v| s.index_of(&v).expect("closed operation");
        let mut sum = Vec::with_capacity(n * n);
        let mut prod = Vec::with_capacity(n * n);
        for a in els {
            for b in els {
                sum.push(idx(s.add(a, b)));
                prod.push(idx(s.mul(a, b)));
            }
        }
        Ok(Tables {
            n,
            sum,
            prod,
            zero: s.index_of(s.zero()).expect("zero in carrier"),
            one: s.index_of(s.one()).expect("one in carrier"),
        })
    }
}

fn search(s: &Semiring, t: &Semiring, bound: usize, mode: Mode) -> Result<Vec<Mapping>> {
    let src = Tables::new(s, bound)?;
    let tgt = Tables::new(t, bound)?;
    if mode == Mode::Isomorphism && src.n != tgt.n {
        return Ok(Vec::new());
    }
    let mut img: Vec<Option<usize>> = vec![None; src.n];
    if mode != Mode::Any {
        img[src.zero] = Some(tgt.zero);
        if img[src.one].is_some_and(|z| z != tgt.one) {
            return Ok(Vec::new());
        }
        img[src.one] = Some(tgt.one);
    }
    let mut found = Vec::new();
    if consistent(&src, &tgt, &img, mode) {
        extend(&src, &tgt, &mut img, 0, mode, &mut found);
    }
    let targets = t.elements().expect("checked enumerable");
    found
        .into_iter()
        .map(|images| {
            let vals = images.into_iter().map(|k| targets[k].clone()).collect();
            Mapping::from_images(s.clone(), t.clone(), vals)
        })
        .collect()
}

fn extend(
    src: &Tables,
    tgt: &Tables,
    img: &mut Vec<Option<usize>>,
    pos: usize,
    mode: Mode,
    out: &mut Vec<Vec<usize>>,
) {
    if pos == src.n {
        out.push(img.iter().map(|i| i.expect("complete assignment")).collect());
        return;
    }
    if img[pos].is_some() {
        extend(src, tgt, img, pos + 1, mode, out);
        return;
    }
    for y in 0..tgt.n {
        img[pos] = Some(y);
        if consistent(src, tgt, img, mode) {
            extend(src, tgt, img, pos + 1, mode, out);
        }
    }
    img[pos] = None;
}

/// Checks the operation laws on every fully assigned pair.
fn consistent(src: &Tables, tgt: &Tables, img: &[Option<usize>], mode: Mode) -> bool {
    if matches!(mode, Mode::Any | Mode::Endpoints) {
        return true;
    }
    let n = src.n;
    for i in 0..n {
        let Some(a) = img[i] else { continue };
        for j in 0..n {
            let Some(b) = img[j] else { continue };
            if mode == Mode::Isomorphism && i != j && a == b {
                return false;
            }
            if let Some(r) = img[src.sum[i * n + j]] {
                if r != tgt.sum[a * tgt.n + b] {
                    return false;
                }
            }
            if let Some(r) = img[src.prod[i * n + j]] {
                let p = tgt.prod[a * tgt.n + b];
                let ok = if mode == Mode::Quasi {
                    tgt.sum[r * tgt.n + p] == p
                } else {
                    r == p
                };
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

/// All isomorphisms `S -> T`. Both carriers must have at most `bound`
/// elements.
pub fn isomorphisms(s: &Semiring, t: &Semiring, bound: usize) -> Result<Vec<Mapping>> {
    search(s, t, bound, Mode::Isomorphism)
}

/// All homomorphisms `S -> T`, found by backtracking over carrier order.
pub fn homomorphisms(s: &Semiring, t: &Semiring, bound: usize) -> Result<Vec<Mapping>> {
    search(s, t, bound, Mode::Homomorphism)
}

/// All quasi-homomorphisms `S -> T`: endpoints and sums preserved,
/// `alpha(a*b) <= alpha(a)*alpha(b)`.
pub fn quasi_homomorphisms(s: &Semiring, t: &Semiring, bound: usize) -> Result<Vec<Mapping>> {
    search(s, t, bound, Mode::Quasi)
}

/// Every map `S -> T`.
pub fn all_maps(s: &Semiring, t: &Semiring, bound: usize) -> Result<Vec<Mapping>> {
    search(s, t, bound, Mode::Any)
}

/// Every map `S -> T` sending `0` to `0~` and `1` to `1~`.
pub fn endpoint_maps(s: &Semiring, t: &Semiring, bound: usize) -> Result<Vec<Mapping>> {
    search(s, t, bound, Mode::Endpoints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::{check_property, PropertyKind};
    use crate::report::Budget;
    use crate::value::Value;

    fn pset(names: &[&str]) -> Semiring {
        Semiring::powerset(names).unwrap()
    }

    #[test]
    fn boolean_has_only_the_identity_automorphism() {
        let b = Semiring::boolean();
        let isos = isomorphisms(&b, &b, DEFAULT_SCAN_BOUND).unwrap();
        assert_eq!(isos.len(), 1);
        assert_eq!(isos[0].image(&Value::Bool(true)), Value::Bool(true));
    }

    #[test]
    fn singleton_powerset_is_isomorphic_to_boolean() {
        let isos = isomorphisms(&pset(&["a"]), &Semiring::boolean(), DEFAULT_SCAN_BOUND).unwrap();
        assert_eq!(isos.len(), 1);
    }

    #[test]
    fn different_sizes_have_no_isomorphism() {
        let isos = isomorphisms(&pset(&["a", "b"]), &Semiring::boolean(), DEFAULT_SCAN_BOUND).unwrap();
        assert!(isos.is_empty());
    }

    #[test]
    fn bound_is_enforced() {
        let s = pset(&["a", "b", "c"]);
        assert!(matches!(
            isomorphisms(&s, &s, DEFAULT_SCAN_BOUND),
            Err(Error::CarrierTooLarge { size: 8, .. })
        ));
    }

    #[test]
    fn powerset_swaps_are_the_automorphisms() {
        let s = pset(&["a", "b"]);
        assert_eq!(isomorphisms(&s, &s, 4).unwrap().len(), 2);
    }

    #[test]
    fn homomorphism_search_agrees_with_the_checker() {
        let s = pset(&["a", "b"]);
        let t = Semiring::boolean();
        let all = endpoint_maps(&s, &t, 4).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(all_maps(&s, &t, 4).unwrap().len(), 16);
        let homs = homomorphisms(&s, &t, 4).unwrap();
        // the two "contains x" maps
        assert_eq!(homs.len(), 2);
        let b = Budget::default();
        for m in &all {
            let certified = check_property(m, PropertyKind::Homomorphism, None, &b).unwrap().holds();
            let listed = homs.iter().any(|h| h.images() == m.images());
            assert_eq!(certified, listed);
        }
    }

    #[test]
    fn quasi_search_agrees_with_the_checker() {
        let s = crate::fixtures::quasi_concrete();
        let t = crate::fixtures::quasi_abstract();
        let quasi = quasi_homomorphisms(&s, &t, 8).unwrap();
        assert!(quasi.iter().any(|m| m.images() == crate::fixtures::quasi_alpha().images()));
        let b = Budget::default();
        let all = endpoint_maps(&s, &t, 8).unwrap();
        for m in &all {
            let certified = check_property(m, PropertyKind::QuasiHomomorphism, None, &b).unwrap().holds();
            let listed = quasi.iter().any(|h| h.images() == m.images());
            assert_eq!(certified, listed);
        }
    }
}
