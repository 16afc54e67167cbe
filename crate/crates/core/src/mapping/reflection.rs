use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Mapping;
use crate::error::{Error, Result};
use crate::report::{Budget, PropertyReport, WitnessItem};
use crate::value::Value;

const PROPERTY: &str = "sum_product_reflection";

/// Number of random matrices drawn when exhaustive enumeration is over
/// budget.
const SAMPLED_MATRICES: usize = 4000;

/// Checks that strict abstract dominance of sums of products forces strict
/// concrete dominance:
///
/// `sum~_i prod~_j alpha(u_ij) <~ sum~_i prod~_j alpha(v_ij)` implies
/// `sum_i prod_j u_ij < sum_i prod_j v_ij`
///
/// over `n x m` matrices `u`, `v` (`n` summands of `m` factors). With
/// `m = n = 1` this is exactly order reflection.
///
/// Matrices are enumerated exhaustively when the source is enumerable and
/// `|S|^(n*m)` fits `budget.max_evaluations`; otherwise matrices are drawn
/// from a seeded point pool. Since the condition only depends on the pair
/// (concrete value, abstract value) of each matrix, matrices are grouped by
/// that pair before the pairwise comparison.
pub fn check_sum_product_reflection(
    alpha: &Mapping,
    m: usize,
    n: usize,
    budget: &Budget,
) -> Result<PropertyReport> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "matrix dimensions must be positive, got n={n}, m={m}"
        )));
    }
    let (s, t) = (alpha.source(), alpha.target());
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let (points, pool_exhaustive) = s.test_points(&mut rng, budget.pool, budget.max_denominator);
    let images: Vec<Value> = points.iter().map(|p| alpha.image(p)).collect();
    let cells = n * m;
    let total = (points.len() as u64).checked_pow(cells as u32);
    let exhaustive = pool_exhaustive && total.is_some_and(|c| c <= budget.max_evaluations);

    let value_of = |idx: &[usize]| -> (Value, Value) {
        let conc = s.sum_all(idx.chunks(m).map(|row| s.prod_all(row.iter().map(|&k| &points[k]))).collect::<Vec<_>>().iter());
        let abs = t.sum_all(idx.chunks(m).map(|row| t.prod_all(row.iter().map(|&k| &images[k]))).collect::<Vec<_>>().iter());
        (conc, abs)
    };

    let mut classes: Vec<(Value, Value, Vec<usize>)> = Vec::new();
    let record = |idx: &[usize], classes: &mut Vec<(Value, Value, Vec<usize>)>| {
        let (c, a) = value_of(idx);
        if !classes.iter().any(|(c0, a0, _)| c0 == &c && a0 == &a) {
            classes.push((c, a, idx.to_vec()));
        }
    };
    let mut checked = 0u64;
    if exhaustive {
        let mut idx = vec![0usize; cells];
        loop {
            checked += 1;
            record(&idx, &mut classes);
            let mut pos = cells;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < points.len() {
                    break;
                }
                idx[pos] = 0;
            }
            if idx.iter().all(|&k| k == 0) {
                break;
            }
        }
    } else {
        for _ in 0..SAMPLED_MATRICES {
            checked += 1;
            let idx: Vec<usize> = (0..cells).map(|_| rng.random_range(0..points.len())).collect();
            record(&idx, &mut classes);
        }
    }

    for (c1, a1, u) in &classes {
        for (c2, a2, v) in &classes {
            checked += 1;
            if t.less(a1, a2) && !s.less(c1, c2) {
                let matrix = |idx: &Vec<usize>| idx.iter().map(|&k| points[k].clone()).collect();
                return Ok(PropertyReport::fail(
                    PROPERTY,
                    vec![
                        WitnessItem::new("u", s, matrix(u)),
                        WitnessItem::new("v", s, matrix(v)),
                        WitnessItem::new("sum-product(u)", s, vec![c1.clone()]),
                        WitnessItem::new("sum-product(v)", s, vec![c2.clone()]),
                        WitnessItem::new("abstract(u)", t, vec![a1.clone()]),
                        WitnessItem::new("abstract(v)", t, vec![a2.clone()]),
                    ],
                    checked,
                )
                .with_detail(format!("{n}x{m} matrices in row-major order")));
            }
        }
    }
    Ok(PropertyReport::pass(PROPERTY, exhaustive, checked))
}

/// Splits a row-major witness matrix into rows of `m` entries.
pub fn matrix_rows(values: &[Value], m: usize) -> Vec<Vec<Value>> {
    values.chunks(m).map(<[Value]>::to_vec).collect()
}
