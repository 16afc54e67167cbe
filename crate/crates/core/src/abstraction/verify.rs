//! Seeded, reproducible checks of the results that justify abstraction:
//! positive directions on random instances, negative directions by turning
//! every failing mapping into a concrete witness problem.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use super::oracle::{brute_force_optimal, brute_force_solution};
use super::shrink::shrink_problem;
use super::witness::{witness_prod_problem, witness_sum_problem, witness_sum_product_problem, WitnessProblem};
use super::{quasi_bound_check, recover_optima, translate, Guarantee};
use crate::catalog::{catalog_up_to, random_problem, ProblemBounds, MAX_CATALOG_SIZE};
use crate::error::{Error, Result};
use crate::json::{mapping_to_json, problem_to_json};
use crate::mapping::{
    all_maps, check_property, endpoint_maps, find_upper_adjoint, homomorphisms, quasi_homomorphisms, AdjointSearch,
    Mapping, PropertyKind,
};
use crate::report::{Budget, PropertyReport, WitnessItem};
use crate::scsp::{solution, Constraint, ConstraintSystem, Problem};
use crate::semiring::Semiring;
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// Homomorphisms preserve the solution ordering of problems.
    ProblemOrderingSufficiency,
    /// Mappings that are not homomorphisms break it on a witness pair.
    ProblemOrderingNecessity,
    /// `Opt(P) ⊆ Opt(alpha(P))` exactly for order-reflecting homomorphisms.
    OptimaPreservation,
    /// The recovery procedure returns concrete optima for homomorphisms.
    Recovery,
    /// The weak value bound for quasi-homomorphisms.
    QuasiBound,
    /// A Galois insertion is order-preserving iff it is an isomorphism.
    OrderPreservingIffIsomorphism,
    /// On chains, aggregation compatibility coincides with homomorphism.
    AggregationIffHomomorphism,
    /// Monotone maps out of a chain reflect the order.
    ChainOrderReflecting,
    /// Homomorphisms out of a chain preserve optima.
    ChainOptimaPreservation,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::ProblemOrderingSufficiency,
        TheoremId::ProblemOrderingNecessity,
        TheoremId::OptimaPreservation,
        TheoremId::Recovery,
        TheoremId::QuasiBound,
        TheoremId::OrderPreservingIffIsomorphism,
        TheoremId::AggregationIffHomomorphism,
        TheoremId::ChainOrderReflecting,
        TheoremId::ChainOptimaPreservation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::ProblemOrderingSufficiency => "problem-ordering-sufficiency",
            TheoremId::ProblemOrderingNecessity => "problem-ordering-necessity",
            TheoremId::OptimaPreservation => "optima-preservation",
            TheoremId::Recovery => "recovery",
            TheoremId::QuasiBound => "quasi-bound",
            TheoremId::OrderPreservingIffIsomorphism => "order-preserving-iff-isomorphism",
            TheoremId::AggregationIffHomomorphism => "aggregation-iff-homomorphism",
            TheoremId::ChainOrderReflecting => "chain-order-reflecting",
            TheoremId::ChainOptimaPreservation => "chain-optima-preservation",
        }
    }

    /// Whether the `trials` argument matters (the others are exhaustive
    /// scans).
    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            TheoremId::ProblemOrderingSufficiency
                | TheoremId::OptimaPreservation
                | TheoremId::Recovery
                | TheoremId::QuasiBound
                | TheoremId::ChainOptimaPreservation
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('_', "-");
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == key)
            .ok_or_else(|| Error::Unknown {
                kind: "theorem",
                name: s.to_string(),
            })
    }
}

/// Limits for [`verify_theorem`].
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyBounds {
    /// Largest catalog carrier used by randomized trials.
    pub max_carrier: usize,
    /// Largest catalog carrier used by exhaustive scans over map spaces.
    pub scan_carrier: usize,
    pub problem: ProblemBounds,
    pub budget: Budget,
    /// Worker threads; results do not depend on it.
    pub jobs: usize,
}

impl Default for VerifyBounds {
    fn default() -> Self {
        VerifyBounds {
            max_carrier: MAX_CATALOG_SIZE,
            scan_carrier: 4,
            problem: ProblemBounds::default(),
            budget: Budget::default(),
            jobs: 1,
        }
    }
}

impl VerifyBounds {
    fn validate(&self) -> Result<()> {
        if self.max_carrier > MAX_CATALOG_SIZE || self.scan_carrier > MAX_CATALOG_SIZE {
            return Err(Error::BudgetExceeded(format!(
                "the catalog only holds carriers up to {MAX_CATALOG_SIZE}"
            )));
        }
        if self.max_carrier < 2 || self.scan_carrier < 2 {
            return Err(Error::InvalidArgument("carrier bounds must be at least 2".into()));
        }
        let pb = &self.problem;
        let assignments = (pb.max_domain as u64).checked_pow(pb.max_vars as u32);
        if assignments.is_none_or(|a| a > self.budget.max_evaluations) {
            return Err(Error::BudgetExceeded(format!(
                "{}^{} assignments per problem exceed the evaluation budget",
                pb.max_domain, pb.max_vars
            )));
        }
        Ok(())
    }
}

/// Outcome of [`verify_theorem`].
#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub theorem: TheoremId,
    pub report: PropertyReport,
    /// Problem, mapping and claim of the first counterexample, minimized.
    pub reproducer: Option<Json>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.report.holds()
    }

    pub fn to_json(&self) -> Json {
        let mut j = self.report.to_json();
        j["theorem"] = json!(self.theorem.name());
        if let Some(r) = &self.reproducer {
            j["reproducer"] = r.clone();
        }
        j
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.report)
    }
}

/// Runs the checks for `which`. Randomized theorems run `trials` trials;
/// trial `i` draws from its own generator seeded by `(seed, i)`, so the
/// report does not depend on `bounds.jobs`.
pub fn verify_theorem(which: TheoremId, trials: usize, seed: u64, bounds: &VerifyBounds) -> Result<TheoremReport> {
    bounds.validate()?;
    let v = Verifier::new(seed, bounds);
    let (checked, failure, detail) = match which {
        TheoremId::ProblemOrderingSufficiency => v.random(trials, |rng| {
            let alpha = v.random_homomorphism(rng, &v.catalog)?;
            let p = random_problem(rng, alpha.source(), &bounds.problem)?;
            Ok((alpha, p))
        }, ordering_claim)?,
        TheoremId::ProblemOrderingNecessity => v.necessity()?,
        TheoremId::OptimaPreservation => v.optima_preservation(trials)?,
        TheoremId::Recovery => v.random(trials, |rng| {
            let alpha = v.random_homomorphism(rng, &v.catalog)?;
            let p = random_problem(rng, alpha.source(), &bounds.problem)?;
            Ok((alpha, p))
        }, recovery_claim)?,
        TheoremId::QuasiBound => v.random(trials, |rng| {
            let alpha = v.random_quasi(rng)?;
            let p = random_problem(rng, alpha.source(), &bounds.problem)?;
            Ok((alpha, p))
        }, quasi_bound_claim)?,
        TheoremId::OrderPreservingIffIsomorphism => v.insertion_scan()?,
        TheoremId::AggregationIffHomomorphism => v.aggregation_scan()?,
        TheoremId::ChainOrderReflecting => v.chain_reflecting_scan()?,
        TheoremId::ChainOptimaPreservation => v.random(trials, |rng| {
            let alpha = v.random_chain_homomorphism(rng)?;
            let p = random_problem(rng, alpha.source(), &bounds.problem)?;
            Ok((alpha, p))
        }, optima_claim)?,
    };
    let (report, reproducer) = match failure {
        None => (PropertyReport::pass(which.name(), true, checked), None),
        Some(f) => {
            let repro = f.reproducer(which, seed);
            let mut r = PropertyReport::fail(which.name(), f.witness, checked);
            r.detail = Some(f.claim);
            (r, Some(repro))
        }
    };
    Ok(TheoremReport {
        theorem: which,
        report: report.with_detail_opt(detail),
        reproducer,
    })
}

trait DetailExt {
    fn with_detail_opt(self, detail: String) -> Self;
}

impl DetailExt for PropertyReport {
    fn with_detail_opt(mut self, detail: String) -> Self {
        if detail.is_empty() {
            return self;
        }
        self.detail = Some(match self.detail.take() {
            Some(d) => format!("{d}; {detail}"),
            None => detail,
        });
        self
    }
}

/// A counterexample. `problem` is already minimized when it came from a
/// random trial.
struct Failure {
    index: usize,
    claim: String,
    witness: Vec<WitnessItem>,
    mapping: Option<Mapping>,
    problem: Option<Problem>,
}

impl Failure {
    fn reproducer(&self, which: TheoremId, seed: u64) -> Json {
        let mut j = json!({
            "theorem": which.name(),
            "claim": self.claim,
            "seed": seed,
            "index": self.index,
        });
        if let Some(m) = &self.mapping {
            j["mapping"] = mapping_to_json(m);
        }
        if let Some(p) = &self.problem {
            j["problem"] = problem_to_json(p);
        }
        j
    }
}

// one per trial, consumed immediately
#[allow(clippy::large_enum_variant)]
enum Step {
    Ok(u64),
    Fail(u64, Failure),
}

/// A claim about one `(alpha, P)` instance: `Ok(None)` when it holds,
/// otherwise a description and witness.
type Claim = fn(&Mapping, &Problem) -> Result<Option<(String, Vec<WitnessItem>)>>;

type Outcome = (u64, Option<Failure>, String);

struct Verifier<'a> {
    seed: u64,
    bounds: &'a VerifyBounds,
    /// Catalog entries for randomized trials.
    catalog: Vec<Semiring>,
}

impl<'a> Verifier<'a> {
    fn new(seed: u64, bounds: &'a VerifyBounds) -> Self {
        Verifier {
            seed,
            bounds,
            catalog: catalog_up_to(bounds.max_carrier),
        }
    }

    fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }

    /// Evaluates `step(i)` for `i < count` over `bounds.jobs` workers and
    /// merges in index order up to the first failure or error.
    fn run(&self, count: usize, step: impl Fn(usize) -> Result<Step> + Sync) -> Result<(u64, Option<Failure>)> {
        let jobs = self.bounds.jobs.clamp(1, count.max(1));
        let chunk = count.div_ceil(jobs).max(1);
        let work = |lo: usize| -> Vec<Result<Step>> {
            let mut out = Vec::new();
            for i in lo..(lo + chunk).min(count) {
                let r = step(i);
                let stop = !matches!(r, Ok(Step::Ok(_)));
                out.push(r);
                if stop {
                    break;
                }
            }
            out
        };
        let parts: Vec<Vec<Result<Step>>> = if jobs == 1 {
            vec![work(0)]
        } else {
            std::thread::scope(|sc| {
                let handles: Vec<_> = (0..count).step_by(chunk).map(|lo| sc.spawn(move || work(lo))).collect();
                handles.into_iter().map(|h| h.join().expect("verification worker panicked")).collect()
            })
        };
        let mut checked = 0;
        for r in parts.into_iter().flatten() {
            match r? {
                Step::Ok(c) => checked += c,
                Step::Fail(c, f) => return Ok((checked + c, Some(f))),
            }
        }
        Ok((checked, None))
    }

    /// `trials` random instances; a failing instance is shrunk while the
    /// claim keeps failing.
    fn random(
        &self,
        trials: usize,
        make: impl Fn(&mut ChaCha8Rng) -> Result<(Mapping, Problem)> + Sync,
        claim: Claim,
    ) -> Result<Outcome> {
        let (checked, failure) = self.run(trials, |i| {
            let mut rng = self.rng(i);
            let (alpha, p) = make(&mut rng)?;
            reject_endpoint_failures(&alpha)?;
            match claim(&alpha, &p)? {
                None => Ok(Step::Ok(1)),
                Some(_) => {
                    let small = shrink_problem(&p, |q| matches!(claim(&alpha, q), Ok(Some(_))));
                    let (text, witness) = claim(&alpha, &small)?.expect("shrinking keeps the failure");
                    Ok(Step::Fail(
                        1,
                        Failure {
                            index: i,
                            claim: text,
                            witness,
                            mapping: Some(alpha),
                            problem: Some(small),
                        },
                    ))
                }
            }
        })?;
        Ok((checked, failure, format!("{trials} seeded trials")))
    }

    fn pick<'c, R: Rng>(rng: &mut R, from: &'c [Semiring]) -> &'c Semiring {
        &from[rng.random_range(0..from.len())]
    }

    /// A homomorphism between random catalog entries, falling back to the
    /// identity when a few draws find none.
    fn random_homomorphism<R: Rng>(&self, rng: &mut R, sources: &[Semiring]) -> Result<Mapping> {
        let bound = self.bounds.max_carrier;
        for _ in 0..8 {
            let s = Self::pick(rng, sources);
            let t = Self::pick(rng, &self.catalog);
            let homs = homomorphisms(s, t, bound)?;
            if !homs.is_empty() {
                return Ok(homs[rng.random_range(0..homs.len())].clone());
            }
        }
        Ok(Mapping::identity(Self::pick(rng, sources).clone()))
    }

    fn random_quasi<R: Rng>(&self, rng: &mut R) -> Result<Mapping> {
        let bound = self.bounds.max_carrier;
        for _ in 0..8 {
            let s = Self::pick(rng, &self.catalog);
            let t = Self::pick(rng, &self.catalog);
            let maps = quasi_homomorphisms(s, t, bound)?;
            if !maps.is_empty() {
                return Ok(maps[rng.random_range(0..maps.len())].clone());
            }
        }
        Ok(Mapping::identity(Self::pick(rng, &self.catalog).clone()))
    }

    /// A homomorphism out of a catalog chain, or a fuzzy threshold.
    fn random_chain_homomorphism(&self, rng: &mut ChaCha8Rng) -> Result<Mapping> {
        if rng.random_bool(0.5) {
            let chains: Vec<Semiring> = self.catalog.iter().filter(|s| s.is_total()).cloned().collect();
            self.random_homomorphism(rng, &chains)
        } else {
            let f = Semiring::fuzzy();
            loop {
                let theta = f.sample(rng, self.bounds.problem.max_denominator);
                let strict = rng.random_bool(0.5);
                let m = Mapping::threshold(f.clone(), Semiring::boolean(), theta, Value::Bool(false), Value::Bool(true), strict)?;
                // thresholds at the ends send 0 or 1 to the wrong place
                if m.preserves_endpoints() {
                    return Ok(m);
                }
            }
        }
    }

    fn scan_catalog(&self) -> Vec<Semiring> {
        catalog_up_to(self.bounds.scan_carrier)
    }

    /// Every endpoint-preserving map between scanned catalog entries.
    fn scanned_maps(&self, source: impl Fn(&Semiring) -> bool, target: impl Fn(&Semiring) -> bool) -> Result<Vec<Mapping>> {
        let cat = self.scan_catalog();
        let mut out = Vec::new();
        for s in cat.iter().filter(|s| source(s)) {
            for t in cat.iter().filter(|t| target(t)) {
                out.extend(endpoint_maps(s, t, self.bounds.scan_carrier)?);
            }
        }
        Ok(out)
    }

    fn necessity(&self) -> Result<Outcome> {
        let maps: Vec<Mapping> = self.scanned_maps(|_| true, |_| true)?.into_iter().filter(|m| !m.is_homomorphism()).collect();
        let (checked, failure) = self.run(maps.len(), |i| {
            Ok(match ordering_violation(&maps[i])? {
                None => Step::Fail(1, scan_failure(i, &maps[i], "no witness problem separates the translations")),
                Some(_) => Step::Ok(1),
            })
        })?;
        Ok((checked, failure, format!("{} non-homomorphic catalog maps", maps.len())))
    }

    fn optima_preservation(&self, trials: usize) -> Result<Outcome> {
        let maps = self.scanned_maps(|_| true, |_| true)?;
        let (good, bad): (Vec<Mapping>, Vec<Mapping>) =
            maps.into_iter().partition(|m| m.is_homomorphism() && m.is_order_reflecting());
        let pb = &self.bounds.problem;
        let (c1, f1) = self.run(trials, |i| {
            let alpha = &good[i % good.len()];
            let mut rng = self.rng(i);
            let p = random_problem(&mut rng, alpha.source(), pb)?;
            Ok(match optima_claim(alpha, &p)? {
                None => Step::Ok(1),
                Some((claim, witness)) => {
                    let small = shrink_problem(&p, |q| matches!(optima_claim(alpha, q), Ok(Some(_))));
                    Step::Fail(
                        1,
                        Failure {
                            index: i,
                            claim,
                            witness,
                            mapping: Some(alpha.clone()),
                            problem: Some(small),
                        },
                    )
                }
            })
        })?;
        let detail = format!(
            "{trials} trials over {} order-reflecting homomorphisms, {} failing maps",
            good.len(),
            bad.len()
        );
        if f1.is_some() {
            return Ok((c1, f1, detail));
        }
        let (c2, f2) = self.run(bad.len(), |i| {
            let alpha = &bad[i];
            let found = if alpha.is_homomorphism() {
                reflection_violation(alpha)?.is_some()
            } else {
                ordering_violation(alpha)?.is_some()
            };
            Ok(match found {
                true => Step::Ok(1),
                false => Step::Fail(1, scan_failure(trials + i, alpha, "no witness problem exhibits a violation")),
            })
        })?;
        Ok((c1 + c2, f2, detail))
    }

    fn insertion_scan(&self) -> Result<Outcome> {
        let cat = self.scan_catalog();
        let bound = self.bounds.scan_carrier;
        let mut pairs = Vec::new();
        for s in &cat {
            for t in &cat {
                pairs.push((s.clone(), t.clone()));
            }
        }
        let budget = &self.bounds.budget;
        let insertions = std::sync::atomic::AtomicU64::new(0);
        let (checked, failure) = self.run(pairs.len(), |i| {
            let (s, t) = &pairs[i];
            let mut checked = 0;
            for alpha in all_maps(s, t, bound)? {
                checked += 1;
                let pair = match find_upper_adjoint(&alpha) {
                    Ok(AdjointSearch::Found(p)) if p.insertion => p,
                    Ok(_) | Err(Error::NotMonotonic(_)) => continue,
                    Err(e) => return Err(e),
                };
                insertions.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let op = check_property(&alpha, PropertyKind::OrderPreserving, Some(&pair.upper), budget)?;
                let iso = check_property(&alpha, PropertyKind::Isomorphism, None, budget)?;
                if op.holds() != iso.holds() {
                    let mut f = scan_failure(i, &alpha, "order preservation and isomorphism disagree");
                    f.witness = vec![
                        WitnessItem::note("order_preserving", op.verdict.as_str()),
                        WitnessItem::note("isomorphism", iso.verdict.as_str()),
                    ];
                    return Ok(Step::Fail(checked, f));
                }
            }
            Ok(Step::Ok(checked))
        })?;
        if failure.is_some() {
            return Ok((checked, failure, String::new()));
        }
        // The quasi-homomorphism example: an abstraction that is not
        // order-preserving.
        let alpha = crate::fixtures::quasi_alpha();
        let gamma = crate::fixtures::quasi_gamma();
        let abs = check_property(&alpha, PropertyKind::Abstraction, Some(&gamma), budget)?;
        let op = check_property(&alpha, PropertyKind::OrderPreserving, Some(&gamma), budget)?;
        let failure = (!abs.holds() || op.holds()).then(|| {
            let mut f = scan_failure(pairs.len(), &alpha, "powerset example should be an abstraction that is not order-preserving");
            f.witness = vec![
                WitnessItem::note("abstraction", abs.verdict.as_str()),
                WitnessItem::note("order_preserving", op.verdict.as_str()),
            ];
            f
        });
        let n = insertions.load(std::sync::atomic::Ordering::Relaxed);
        Ok((checked + 2, failure, format!("{} semiring pairs, {n} insertions", pairs.len())))
    }

    /// Maps between chains: catalog maps plus thresholds into the booleans.
    fn chain_maps(&self) -> Result<Vec<Mapping>> {
        let mut maps = self.scanned_maps(Semiring::is_total, Semiring::is_total)?;
        let mut rng = self.rng(usize::MAX);
        let b = Semiring::boolean();
        for s in [Semiring::fuzzy(), Semiring::probabilistic(), Semiring::weighted()] {
            let mut thetas = s.landmarks();
            thetas.extend((0..4).map(|_| s.sample(&mut rng, 8)));
            for theta in thetas {
                for strict in [false, true] {
                    let m = Mapping::threshold(s.clone(), b.clone(), theta.clone(), Value::Bool(false), Value::Bool(true), strict)?;
                    if m.preserves_endpoints() {
                        maps.push(m);
                    }
                }
            }
        }
        Ok(maps)
    }

    fn aggregation_scan(&self) -> Result<Outcome> {
        let maps = self.chain_maps()?;
        let budget = &self.bounds.budget;
        let (checked, failure) = self.run(maps.len(), |i| {
            let alpha = &maps[i];
            let agg = check_property(alpha, PropertyKind::AggregationCompatible, None, budget)?;
            let hom = check_property(alpha, PropertyKind::Homomorphism, None, budget)?;
            if agg.holds() == hom.holds() {
                return Ok(Step::Ok(1));
            }
            let mut f = scan_failure(i, alpha, "aggregation compatibility and homomorphism disagree");
            f.witness = agg.witness.into_iter().chain(hom.witness).collect();
            Ok(Step::Fail(1, f))
        })?;
        Ok((checked, failure, format!("{} chain-sourced maps", maps.len())))
    }

    fn chain_reflecting_scan(&self) -> Result<Outcome> {
        let cat = self.scan_catalog();
        let bound = self.bounds.scan_carrier;
        let mut maps = Vec::new();
        for s in cat.iter().filter(|s| s.is_total()) {
            for t in &cat {
                maps.extend(all_maps(s, t, bound)?);
            }
        }
        maps.extend(self.chain_maps()?.into_iter().filter(|m| m.images().is_none()));
        let budget = &self.bounds.budget;
        let monotone = std::sync::atomic::AtomicU64::new(0);
        let (checked, failure) = self.run(maps.len(), |i| {
            let alpha = &maps[i];
            if !check_property(alpha, PropertyKind::Monotonic, None, budget)?.holds() {
                return Ok(Step::Ok(1));
            }
            monotone.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            let r = check_property(alpha, PropertyKind::OrderReflecting, None, budget)?;
            if r.holds() {
                return Ok(Step::Ok(1));
            }
            let mut f = scan_failure(i, alpha, "monotone chain-sourced map is not order-reflecting");
            f.witness = r.witness;
            Ok(Step::Fail(1, f))
        })?;
        let n = monotone.load(std::sync::atomic::Ordering::Relaxed);
        Ok((checked, failure, format!("{} maps, {n} monotone", maps.len())))
    }
}

fn scan_failure(index: usize, alpha: &Mapping, claim: &str) -> Failure {
    Failure {
        index,
        claim: claim.to_string(),
        witness: Vec::new(),
        mapping: Some(alpha.clone()),
        problem: None,
    }
}

fn reject_endpoint_failures(alpha: &Mapping) -> Result<()> {
    if alpha.preserves_endpoints() {
        Ok(())
    } else {
        Err(Error::CertificateMissing(format!(
            "{} does not map 0 to 0 and 1 to 1",
            alpha.describe()
        )))
    }
}

fn le_pointwise(s: &Semiring, a: &[Value], b: &[Value]) -> bool {
    a.iter().zip(b).all(|(x, y)| s.le(x, y))
}

/// Variants of `P` that are comparable to it constraint by constraint:
/// one constraint set to `1`, set to `0`, or raised by its own next entry.
fn ordering_family(p: &Problem) -> Vec<Problem> {
    let s = p.semiring();
    let mut out = vec![p.clone()];
    for (i, c) in p.constraints().iter().enumerate() {
        let n = c.table().len();
        let raised: Vec<Value> = (0..n).map(|k| s.add(&c.table()[k], &c.table()[(k + 1) % n])).collect();
        for table in [vec![s.one().clone(); n], vec![s.zero().clone(); n], raised] {
            let mut cs = p.constraints().to_vec();
            cs[i] = Constraint::from_parts(c.scope().to_vec(), table);
            out.push(Problem::new(p.system().clone(), cs, p.con().to_vec()).expect("same structure"));
        }
    }
    out
}

/// `Sol(alpha(P)) = alpha o Sol(P)`, and `Sol(X) <= Sol(Y)` implies
/// `Sol(alpha(X)) <= Sol(alpha(Y))` over a family of variants of `P`.
fn ordering_claim(alpha: &Mapping, p: &Problem) -> Result<Option<(String, Vec<WitnessItem>)>> {
    let (s, t) = (alpha.source(), alpha.target());
    let family = ordering_family(p);
    let mut conc = Vec::new();
    let mut abst = Vec::new();
    for q in &family {
        let sol = solution(q).values().to_vec();
        let tsol = solution(&translate(alpha, q)?).values().to_vec();
        let mapped: Vec<Value> = sol.iter().map(|v| alpha.image(v)).collect();
        if mapped != tsol {
            return Ok(Some((
                "translation does not commute with solving".into(),
                vec![WitnessItem::new("alpha o Sol(P)", t, mapped), WitnessItem::new("Sol(alpha(P))", t, tsol)],
            )));
        }
        conc.push(sol);
        abst.push(tsol);
    }
    for i in 0..family.len() {
        for j in 0..family.len() {
            if le_pointwise(s, &conc[i], &conc[j]) && !le_pointwise(t, &abst[i], &abst[j]) {
                return Ok(Some((
                    "solution ordering not preserved by translation".into(),
                    vec![
                        WitnessItem::new("Sol(P)", s, conc[i].clone()),
                        WitnessItem::new("Sol(Q)", s, conc[j].clone()),
                        WitnessItem::new("Sol(alpha(P))", t, abst[i].clone()),
                        WitnessItem::new("Sol(alpha(Q))", t, abst[j].clone()),
                    ],
                )));
            }
        }
    }
    Ok(None)
}

/// `Opt(P) ⊆ Opt(alpha(P))`.
fn optima_claim(alpha: &Mapping, p: &Problem) -> Result<Option<(String, Vec<WitnessItem>)>> {
    let sol = solution(p);
    let tsol = solution(&translate(alpha, p)?);
    let missing: Vec<usize> = sol
        .optimal_indices()
        .iter()
        .copied()
        .filter(|i| tsol.optimal_indices().binary_search(i).is_err())
        .collect();
    if missing.is_empty() {
        return Ok(None);
    }
    let sys = p.system();
    Ok(Some((
        "a concrete optimum is not optimal after translation".into(),
        vec![
            WitnessItem::note("t", sys.format_tuple(&sol.tuple(missing[0]))),
            WitnessItem::new("Sol(P)", p.semiring(), sol.values().to_vec()),
            WitnessItem::new("Sol(alpha(P))", alpha.target(), tsol.values().to_vec()),
        ],
    )))
}

/// The recovery selection is nonempty, inside the brute-force optima and
/// agrees with the abstract values.
fn recovery_claim(alpha: &Mapping, p: &Problem) -> Result<Option<(String, Vec<WitnessItem>)>> {
    let r = recover_optima(alpha, p)?;
    let s = p.semiring();
    let oracle = brute_force_optimal(s, &brute_force_solution(p));
    let sys = p.system();
    let outside = r.selected.iter().find(|t| oracle.binary_search(&sys.index_of_tuple(t)).is_err());
    let problem = if r.guarantee != Guarantee::Optimal {
        Some("homomorphism not certified")
    } else if r.selected.is_empty() {
        Some("nothing selected")
    } else if outside.is_some() {
        Some("selected tuple is not a concrete optimum")
    } else if r.agreement.iter().any(|ok| !ok) {
        Some("alpha of a selected value differs from its abstract value")
    } else {
        None
    };
    Ok(problem.map(|msg| {
        let tuples: Vec<String> = r.selected.iter().map(|t| sys.format_tuple(t)).collect();
        (
            msg.to_string(),
            vec![
                WitnessItem::note("selected", tuples.join(" ")),
                WitnessItem::new("Sol(P)", s, r.concrete.values().to_vec()),
            ],
        )
    }))
}

fn quasi_bound_claim(alpha: &Mapping, p: &Problem) -> Result<Option<(String, Vec<WitnessItem>)>> {
    let r = quasi_bound_check(alpha, p)?;
    Ok(r.is_fail().then(|| ("no concrete optimum meets the quasi bound".to_string(), r.witness)))
}

/// For a mapping that breaks a sum or product, the matching witness pair:
/// `P` and `Q` solve identically while their translations do not.
fn ordering_violation(alpha: &Mapping) -> Result<Option<(WitnessProblem, WitnessProblem)>> {
    let (s, t) = (alpha.source(), alpha.target());
    let els = s.require_elements()?;
    let sys = ConstraintSystem::new(s.clone(), ["d1", "d2"], ["x1", "x2"])?;
    let con = [1];
    let mut pair = None;
    'search: for a in els {
        for b in els {
            if alpha.image(&s.add(a, b)) != t.add(&alpha.image(a), &alpha.image(b)) {
                pair = Some(witness_sum_problem(&sys, a, b, &con)?);
                break 'search;
            }
        }
    }
    if pair.is_none() {
        'search: for a in els {
            for b in els {
                if alpha.image(&s.mul(a, b)) != t.mul(&alpha.image(a), &alpha.image(b)) {
                    pair = Some(witness_prod_problem(&sys, a, b, &con)?);
                    break 'search;
                }
            }
        }
    }
    let Some((p, q)) = pair else { return Ok(None) };
    let same = solution(&p.problem).values() == solution(&q.problem).values();
    let tp = solution(&translate(alpha, &p.problem)?).values().to_vec();
    let tq = solution(&translate(alpha, &q.problem)?).values().to_vec();
    Ok((same && tp != tq).then_some((p, q)))
}

/// For a homomorphism that does not reflect the order, the one-cell
/// sum-of-products witness where `(d1)` is optimal but loses it after
/// translation.
fn reflection_violation(alpha: &Mapping) -> Result<Option<WitnessProblem>> {
    let (s, t) = (alpha.source(), alpha.target());
    let els = s.require_elements()?;
    for a in els {
        for b in els {
            if t.less(&alpha.image(a), &alpha.image(b)) && !s.less(a, b) {
                let w = witness_sum_product_problem(s, &[vec![a.clone()]], &[vec![b.clone()]])?;
                let concrete = solution(&w.problem);
                let translated = solution(&translate(alpha, &w.problem)?);
                let holds = concrete.is_optimal(&[0]) && !translated.is_optimal(&[0]);
                return Ok(holds.then_some(w));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{quasi_alpha, quasi_problem};

    fn small() -> VerifyBounds {
        VerifyBounds {
            max_carrier: 4,
            scan_carrier: 3,
            ..VerifyBounds::default()
        }
    }

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.name().parse::<TheoremId>().unwrap(), id);
        }
        assert_eq!("chain_order_reflecting".parse::<TheoremId>().unwrap(), TheoremId::ChainOrderReflecting);
        assert!(matches!("nope".parse::<TheoremId>(), Err(Error::Unknown { .. })));
    }

    #[test]
    fn every_theorem_holds_on_a_small_run() {
        for id in TheoremId::ALL {
            let r = verify_theorem(id, 20, 1, &small()).unwrap();
            assert!(r.holds(), "{id}: {r}");
            assert!(r.reproducer.is_none());
        }
    }

    #[test]
    fn reports_do_not_depend_on_jobs() {
        let one = verify_theorem(TheoremId::Recovery, 40, 9, &small()).unwrap();
        let many = verify_theorem(TheoremId::Recovery, 40, 9, &VerifyBounds { jobs: 4, ..small() }).unwrap();
        assert_eq!(one.to_json(), many.to_json());
    }

    #[test]
    fn oversized_bounds_are_refused() {
        let b = VerifyBounds {
            max_carrier: 9,
            ..VerifyBounds::default()
        };
        assert!(matches!(verify_theorem(TheoremId::Recovery, 1, 0, &b), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn quasi_breaks_the_ordering_with_a_product_witness() {
        let alpha = quasi_alpha();
        let (p, q) = ordering_violation(&alpha).unwrap().expect("the collapsing map is not a homomorphism");
        assert!(p.claim.starts_with("Sol is constantly a*b"));
        assert_eq!(solution(&p.problem).values(), solution(&q.problem).values());
    }

    #[test]
    fn quasi_loses_an_optimum_on_the_reflection_witness() {
        // the optimum of the example problem itself survives translation
        let alpha = quasi_alpha();
        assert!(optima_claim(&alpha, &quasi_problem()).unwrap().is_none());
        assert!(reflection_violation(&alpha).unwrap().is_some());
    }

    #[test]
    fn a_false_claim_is_minimized_into_a_reproducer() {
        // The recovery claim is false for the quasi-homomorphism example;
        // the harness must report, shrink and serialize it.
        let alpha = quasi_alpha();
        let p = quasi_problem();
        let (msg, _) = recovery_claim(&alpha, &p).unwrap().unwrap();
        assert_eq!(msg, "homomorphism not certified");
        let smaller = shrink_problem(&p, |q| matches!(recovery_claim(&alpha, q), Ok(Some(_))));
        assert!(smaller.constraints().len() <= p.constraints().len());
        let f = Failure {
            index: 0,
            claim: msg,
            witness: Vec::new(),
            mapping: Some(alpha),
            problem: Some(smaller),
        };
        let j = f.reproducer(TheoremId::Recovery, 3);
        assert_eq!(j["theorem"], "recovery");
        assert!(j.get("problem").is_some() && j.get("mapping").is_some());
    }
}
