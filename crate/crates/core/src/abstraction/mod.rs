//! Translating problems along a semiring mapping, recovering concrete optima
//! from abstract ones, and the witness problems and randomized checks that
//! back those procedures.

mod oracle;
mod shrink;
mod verify;
mod witness;

use std::fmt;

use serde_json::{json, Value as Json};

use crate::error::{Error, Result};
use crate::json::value_to_json;
use crate::mapping::Mapping;
use crate::report::{PropertyReport, WitnessItem};
use crate::scsp::{solution, Problem, SolutionTable, Tuple};
use crate::value::Value;

pub use oracle::{brute_force_optimal, brute_force_solution};
pub use shrink::shrink_problem;
pub use verify::{verify_theorem, TheoremId, TheoremReport, VerifyBounds};
pub use witness::{witness_prod_problem, witness_sum_problem, witness_sum_product_problem, WitnessProblem};

/// `alpha(P)`: same variables, domain, scopes and type, with every table
/// value passed through `alpha`.
pub fn translate(alpha: &Mapping, p: &Problem) -> Result<Problem> {
    if alpha.source() != p.semiring() {
        return Err(Error::SemiringMismatch {
            expected: alpha.source().describe(),
            found: p.semiring().describe(),
        });
    }
    let system = p.system().with_semiring(alpha.target().clone());
    let constraints = p.constraints().iter().map(|c| c.map_values(|v| alpha.image(v))).collect();
    Problem::new(system, constraints, p.con().to_vec())
}

/// A concrete problem paired with its translation.
#[derive(Clone, Debug)]
pub struct Translation {
    alpha: Mapping,
    concrete: Problem,
    translated: Problem,
}

impl Translation {
    pub fn new(alpha: Mapping, concrete: Problem) -> Result<Translation> {
        let translated = translate(&alpha, &concrete)?;
        Ok(Translation {
            alpha,
            concrete,
            translated,
        })
    }

    pub fn alpha(&self) -> &Mapping {
        &self.alpha
    }

    pub fn concrete(&self) -> &Problem {
        &self.concrete
    }

    pub fn translated(&self) -> &Problem {
        &self.translated
    }
}

/// What [`recover_optima`] can promise about its selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guarantee {
    /// `alpha` is a certified homomorphism: the selected tuples are optimal.
    Optimal,
    /// `alpha` is only a quasi-homomorphism; the selection is a heuristic.
    QuasiOnly,
    /// `alpha` is not even a quasi-homomorphism.
    None,
}

impl Guarantee {
    pub fn as_str(self) -> &'static str {
        match self {
            Guarantee::Optimal => "optimal",
            Guarantee::QuasiOnly => "quasi-only",
            Guarantee::None => "none",
        }
    }
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct RecoveryResult {
    /// `Opt(alpha(P))`, ascending.
    pub abstract_optimal: Vec<Tuple>,
    /// `Sol(P)(t)` for each abstract optimum.
    pub concrete_values: Vec<Value>,
    /// `Sol(alpha(P))(t)` for each abstract optimum.
    pub abstract_values: Vec<Value>,
    /// Abstract optima whose concrete value is maximal among them.
    pub selected: Vec<Tuple>,
    /// For each selected tuple, whether `alpha(Sol(P)(t)) = Sol(alpha(P))(t)`.
    pub agreement: Vec<bool>,
    pub guarantee: Guarantee,
    pub concrete: SolutionTable,
    pub translated: SolutionTable,
}

impl RecoveryResult {
    pub fn to_json(&self) -> Json {
        let sys = self.concrete.system();
        let (s, t) = (sys.semiring(), self.translated.system().semiring());
        let tuple = |tp: &Tuple| -> Json { tp.iter().map(|&d| json!(sys.domain()[d])).collect::<Vec<_>>().into() };
        let candidates: Vec<Json> = self
            .abstract_optimal
            .iter()
            .enumerate()
            .map(|(i, tp)| {
                json!({
                    "tuple": tuple(tp),
                    "concrete": value_to_json(s, &self.concrete_values[i]),
                    "abstract": value_to_json(t, &self.abstract_values[i]),
                })
            })
            .collect();
        json!({
            "abstract_optimal": candidates,
            "selected": self.selected.iter().map(tuple).collect::<Vec<_>>(),
            "agreement": self.agreement,
            "guarantee": self.guarantee.as_str(),
        })
    }
}

/// Solves `alpha(P)`, evaluates its optimal tuples in `Sol(P)` and keeps the
/// concretely best ones.
///
/// The result always carries a selection; whether it is guaranteed to be
/// optimal in `P` is reported by [`RecoveryResult::guarantee`].
pub fn recover_optima(alpha: &Mapping, p: &Problem) -> Result<RecoveryResult> {
    if p.constraints().is_empty() {
        return Err(Error::Empty("problem has no constraints"));
    }
    let tr = translate(alpha, p)?;
    let concrete = solution(p);
    let translated = solution(&tr);
    let s = p.semiring();
    let abstract_optimal = translated.optimal_tuples();
    let concrete_values: Vec<Value> = abstract_optimal.iter().map(|t| concrete.value(t).clone()).collect();
    let abstract_values: Vec<Value> = abstract_optimal.iter().map(|t| translated.value(t).clone()).collect();
    let keep: Vec<usize> = (0..abstract_optimal.len())
        .filter(|&i| !concrete_values.iter().any(|w| s.less(&concrete_values[i], w)))
        .collect();
    let selected: Vec<Tuple> = keep.iter().map(|&i| abstract_optimal[i].clone()).collect();
    let agreement = keep
        .iter()
        .map(|&i| alpha.image(&concrete_values[i]) == abstract_values[i])
        .collect();
    let guarantee = if alpha.is_homomorphism() {
        Guarantee::Optimal
    } else if alpha.is_quasi_homomorphism() {
        Guarantee::QuasiOnly
    } else {
        Guarantee::None
    };
    Ok(RecoveryResult {
        abstract_optimal,
        concrete_values,
        abstract_values,
        selected,
        agreement,
        guarantee,
        concrete,
        translated,
    })
}

/// For every abstract optimum `t` (abstract value `v~`, concrete value `v`)
/// looks for a concrete optimum `t'` with `v <= Sol(P)(t')` and
/// `not (v~ < alpha(Sol(P)(t')))`.
///
/// This is the bound available for quasi-homomorphisms.
pub fn quasi_bound_check(alpha: &Mapping, p: &Problem) -> Result<PropertyReport> {
    if !alpha.is_quasi_homomorphism() {
        return Err(Error::CertificateMissing(format!(
            "{} is not a quasi-homomorphism",
            alpha.describe()
        )));
    }
    bound_check(alpha, p, "quasi-bound", |t, img, vt| !t.less(vt, img))
}

/// The stronger variant `alpha(Sol(P)(t')) <= v~`, which quasi-homomorphisms
/// do not guarantee.
pub fn strengthened_bound_check(alpha: &Mapping, p: &Problem) -> Result<PropertyReport> {
    bound_check(alpha, p, "strengthened-bound", |t, img, vt| t.le(img, vt))
}

fn bound_check(
    alpha: &Mapping,
    p: &Problem,
    property: &str,
    accept: impl Fn(&crate::semiring::Semiring, &Value, &Value) -> bool,
) -> Result<PropertyReport> {
    let tr = translate(alpha, p)?;
    let concrete = solution(p);
    let translated = solution(&tr);
    let (s, t) = (p.semiring(), alpha.target());
    let mut checked = 0u64;
    for &i in translated.optimal_indices() {
        let v = &concrete.values()[i];
        let vt = &translated.values()[i];
        let found = concrete.optimal_indices().iter().any(|&j| {
            checked += 1;
            let best = &concrete.values()[j];
            s.le(v, best) && accept(t, &alpha.image(best), vt)
        });
        if !found {
            let sys = p.system();
            let mut witness = vec![
                WitnessItem::note("t", sys.format_tuple(&translated.tuple(i))),
                WitnessItem::new("Sol(P)(t)", s, vec![v.clone()]),
                WitnessItem::new("Sol(alpha(P))(t)", t, vec![vt.clone()]),
            ];
            for &j in concrete.optimal_indices() {
                let best = &concrete.values()[j];
                let label = format!("optimum {}", sys.format_tuple(&concrete.tuple(j)));
                witness.push(WitnessItem::new(label.clone(), s, vec![best.clone()]));
                witness.push(WitnessItem::new(format!("alpha of {label}"), t, vec![alpha.image(best)]));
            }
            return Ok(PropertyReport::fail(property, witness, checked));
        }
    }
    Ok(PropertyReport::pass(property, true, checked))
}
