use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Mapping;
use crate::error::{Error, Result};
use crate::report::{Budget, PropertyReport, WitnessItem};
use crate::semiring::Semiring;
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropertyKind {
    /// `alpha(0) = 0~` and `alpha(1) = 1~`.
    Endpoints,
    Monotonic,
    Homomorphism,
    /// Endpoints and sums preserved, products only sub-preserved.
    QuasiHomomorphism,
    /// `alpha(a) < alpha(b)` implies `a < b`.
    OrderReflecting,
    Isomorphism,
    GaloisInsertion,
    /// Abstract product comparisons over bounded multisets imply the
    /// concrete ones.
    OrderPreserving,
    /// Galois insertion plus local correctness of the abstract product.
    Abstraction,
    /// Concrete product comparisons over bounded multisets imply the
    /// abstract ones; both semirings totally ordered.
    AggregationCompatible,
}

impl PropertyKind {
    pub const ALL: [PropertyKind; 10] = [
        PropertyKind::Endpoints,
        PropertyKind::Monotonic,
        PropertyKind::Homomorphism,
        PropertyKind::QuasiHomomorphism,
        PropertyKind::OrderReflecting,
        PropertyKind::Isomorphism,
        PropertyKind::GaloisInsertion,
        PropertyKind::OrderPreserving,
        PropertyKind::Abstraction,
        PropertyKind::AggregationCompatible,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyKind::Endpoints => "endpoints",
            PropertyKind::Monotonic => "monotonic",
            PropertyKind::Homomorphism => "homomorphism",
            PropertyKind::QuasiHomomorphism => "quasi_homomorphism",
            PropertyKind::OrderReflecting => "order_reflecting",
            PropertyKind::Isomorphism => "isomorphism",
            PropertyKind::GaloisInsertion => "galois_insertion",
            PropertyKind::OrderPreserving => "order_preserving",
            PropertyKind::Abstraction => "abstraction",
            PropertyKind::AggregationCompatible => "aggregation_compatible",
        }
    }

    pub fn needs_adjoint(self) -> bool {
        matches!(
            self,
            PropertyKind::GaloisInsertion | PropertyKind::OrderPreserving | PropertyKind::Abstraction
        )
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropertyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        PropertyKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::Unknown {
                kind: "property",
                name: s.to_string(),
            })
    }
}

/// Checks one mapping property.
///
/// Enumerable sources are quantified exhaustively; other sources are
/// quantified over a seeded point pool of `budget.pool` elements and pass
/// verdicts are reported as `sampled-pass`. Set-quantified properties use
/// multisets of size `1..=budget.set_size`.
///
/// Errors when an adjoint is required but missing, when an adjoint-based
/// property is asked of a pair that is not a Galois insertion (order
/// preservation only), when a finite-only property meets an infinite
/// carrier, and when aggregation compatibility meets a non-total order.
pub fn check_property(
    alpha: &Mapping,
    kind: PropertyKind,
    gamma: Option<&Mapping>,
    budget: &Budget,
) -> Result<PropertyReport> {
    let ctx = Ctx::new(alpha, budget);
    match kind {
        PropertyKind::Endpoints => Ok(ctx.endpoints().unwrap_or_else(|| ctx.pass(kind))),
        PropertyKind::Monotonic => Ok(ctx.monotonic(alpha).unwrap_or_else(|| ctx.pass(kind))),
        PropertyKind::Homomorphism => Ok(ctx
            .endpoints()
            .or_else(|| ctx.sums())
            .or_else(|| ctx.products(false))
            .map(|r| r.renamed(kind))
            .unwrap_or_else(|| ctx.pass(kind))),
        PropertyKind::QuasiHomomorphism => Ok(ctx
            .endpoints()
            .or_else(|| ctx.sums())
            .or_else(|| ctx.products(true))
            .map(|r| r.renamed(kind))
            .unwrap_or_else(|| ctx.pass(kind))),
        PropertyKind::OrderReflecting => Ok(ctx.reflecting().unwrap_or_else(|| ctx.pass(kind))),
        PropertyKind::Isomorphism => isomorphism(&ctx),
        PropertyKind::GaloisInsertion => {
            let gamma = require_gamma(kind, gamma)?;
            Ok(galois(&ctx, gamma)?
                .map(|r| r.renamed(kind))
                .unwrap_or_else(|| ctx.pass(kind)))
        }
        PropertyKind::Abstraction => {
            let gamma = require_gamma(kind, gamma)?;
            Ok(galois(&ctx, gamma)?
                .or_else(|| ctx.products(true))
                .map(|r| r.renamed(kind))
                .unwrap_or_else(|| ctx.pass(kind)))
        }
        PropertyKind::OrderPreserving => {
            let gamma = require_gamma(kind, gamma)?;
            if let Some(r) = galois(&ctx, gamma)? {
                return Err(Error::NotGaloisInsertion(r.to_string()));
            }
            Ok(multiset_implication(&ctx, Direction::AbstractToConcrete).renamed(kind))
        }
        PropertyKind::AggregationCompatible => {
            for s in [alpha.source(), alpha.target()] {
                if !s.is_total() {
                    return Err(Error::NotTotallyOrdered(s.describe()));
                }
            }
            Ok(ctx
                .endpoints()
                .or_else(|| ctx.monotonic(alpha))
                .map(|r| r.renamed(kind))
                .unwrap_or_else(|| {
                    multiset_implication(&ctx, Direction::ConcreteToAbstract).renamed(kind)
                }))
        }
    }
}

fn require_gamma(kind: PropertyKind, gamma: Option<&Mapping>) -> Result<&Mapping> {
    gamma.ok_or_else(|| Error::MissingAdjoint {
        property: kind.name().to_string(),
    })
}

trait Renamed {
    fn renamed(self, kind: PropertyKind) -> Self;
}

impl Renamed for PropertyReport {
    fn renamed(mut self, kind: PropertyKind) -> Self {
        if let Some(d) = self.detail.take() {
            self.detail = Some(format!("{}: {d}", self.property));
        } else {
            self.detail = Some(format!("violated: {}", self.property));
        }
        self.property = kind.name().to_string();
        self
    }
}

/// Shared state for one property check: the quantification points and the
/// running evaluation count.
struct Ctx<'a> {
    alpha: &'a Mapping,
    points: Vec<Value>,
    images: Vec<Value>,
    exhaustive: bool,
    budget: &'a Budget,
    checked: std::cell::Cell<u64>,
}

impl<'a> Ctx<'a> {
    fn new(alpha: &'a Mapping, budget: &'a Budget) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        let (points, exhaustive) =
            alpha
                .source()
                .test_points(&mut rng, budget.pool, budget.max_denominator);
        let images = points.iter().map(|p| alpha.image(p)).collect();
        Ctx {
            alpha,
            points,
            images,
            exhaustive,
            budget,
            checked: std::cell::Cell::new(0),
        }
    }

    fn s(&self) -> &Semiring {
        self.alpha.source()
    }

    fn t(&self) -> &Semiring {
        self.alpha.target()
    }

    fn tick(&self) {
        self.checked.set(self.checked.get() + 1);
    }

    fn pass(&self, kind: PropertyKind) -> PropertyReport {
        PropertyReport::pass(kind.name(), self.exhaustive, self.checked.get())
    }

    fn fail(&self, property: &str, witness: Vec<WitnessItem>) -> Option<PropertyReport> {
        Some(PropertyReport::fail(property, witness, self.checked.get()))
    }

    fn src(&self, label: &str, v: &Value) -> WitnessItem {
        WitnessItem::new(label, self.s(), vec![v.clone()])
    }

    fn tgt(&self, label: &str, v: &Value) -> WitnessItem {
        WitnessItem::new(label, self.t(), vec![v.clone()])
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.points.len();
        (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
    }

    fn endpoints(&self) -> Option<PropertyReport> {
        let (s, t) = (self.s(), self.t());
        for (label, x, y) in [("zero", s.zero(), t.zero()), ("one", s.one(), t.one())] {
            self.tick();
            let img = self.alpha.image(x);
            if &img != y {
                return self.fail(
                    "endpoints",
                    vec![self.src(label, x), self.tgt("image", &img), self.tgt("expected", y)],
                );
            }
        }
        None
    }

    fn monotonic(&self, f: &Mapping) -> Option<PropertyReport> {
        for (i, j) in self.pairs() {
            self.tick();
            let (a, b) = (&self.points[i], &self.points[j]);
            if self.s().le(a, b) && !self.t().le(&self.images[i], &self.images[j]) {
                return self.fail(
                    "monotonic",
                    vec![
                        self.src("a", a),
                        self.src("b", b),
                        self.tgt("alpha(a)", &f.image(a)),
                        self.tgt("alpha(b)", &f.image(b)),
                    ],
                );
            }
        }
        None
    }

    fn sums(&self) -> Option<PropertyReport> {
        for (i, j) in self.pairs() {
            self.tick();
            let (a, b) = (&self.points[i], &self.points[j]);
            let lhs = self.alpha.image(&self.s().add(a, b));
            let rhs = self.t().add(&self.images[i], &self.images[j]);
            if lhs != rhs {
                return self.fail(
                    "sum",
                    vec![
                        self.src("a", a),
                        self.src("b", b),
                        self.tgt("alpha(a+b)", &lhs),
                        self.tgt("alpha(a)+alpha(b)", &rhs),
                    ],
                );
            }
        }
        None
    }

    /// Exact product preservation, or `alpha(a*b) <= alpha(a)*alpha(b)`
    /// when `sub` is set.
    fn products(&self, sub: bool) -> Option<PropertyReport> {
        for (i, j) in self.pairs() {
            self.tick();
            let (a, b) = (&self.points[i], &self.points[j]);
            let lhs = self.alpha.image(&self.s().mul(a, b));
            let rhs = self.t().mul(&self.images[i], &self.images[j]);
            let ok = if sub { self.t().le(&lhs, &rhs) } else { lhs == rhs };
            if !ok {
                return self.fail(
                    if sub { "local-correctness" } else { "product" },
                    vec![
                        self.src("a", a),
                        self.src("b", b),
                        self.tgt("alpha(a*b)", &lhs),
                        self.tgt("alpha(a)*alpha(b)", &rhs),
                    ],
                );
            }
        }
        None
    }

    fn reflecting(&self) -> Option<PropertyReport> {
        for (i, j) in self.pairs() {
            self.tick();
            let (a, b) = (&self.points[i], &self.points[j]);
            if self.t().less(&self.images[i], &self.images[j]) && !self.s().less(a, b) {
                return self.fail(
                    "order_reflecting",
                    vec![
                        self.src("a", a),
                        self.src("b", b),
                        self.tgt("alpha(a)", &self.images[i]),
                        self.tgt("alpha(b)", &self.images[j]),
                    ],
                );
            }
        }
        None
    }
}

fn isomorphism(ctx: &Ctx<'_>) -> Result<PropertyReport> {
    let kind = PropertyKind::Isomorphism;
    let source = ctx.s().require_elements()?;
    let target = ctx.t().require_elements()?;
    if let Some(r) = ctx
        .endpoints()
        .or_else(|| ctx.sums())
        .or_else(|| ctx.products(false))
    {
        return Ok(r.renamed(kind));
    }
    for (i, j) in ctx.pairs().filter(|(i, j)| i < j) {
        ctx.tick();
        if ctx.images[i] == ctx.images[j] {
            let r = ctx
                .fail(
                    "injective",
                    vec![ctx.src("a", &source[i]), ctx.src("b", &source[j]), ctx.tgt("image", &ctx.images[i])],
                )
                .expect("fail report");
            return Ok(r.renamed(kind));
        }
    }
    if let Some(missing) = target.iter().find(|y| !ctx.images.contains(y)) {
        let r = ctx
            .fail("surjective", vec![ctx.tgt("unreached", missing)])
            .expect("fail report");
        return Ok(r.renamed(kind));
    }
    Ok(ctx.pass(kind))
}

/// `None` when `(alpha, gamma)` is a Galois insertion.
fn galois(ctx: &Ctx<'_>, gamma: &Mapping) -> Result<Option<PropertyReport>> {
    let (s, t) = (ctx.s(), ctx.t());
    if gamma.source() != t || gamma.target() != s {
        return Err(Error::SemiringMismatch {
            expected: format!("{t} -> {s}"),
            found: format!("{} -> {}", gamma.source(), gamma.target()),
        });
    }
    let xs = s.require_elements()?;
    let ys = t.require_elements()?;
    if let Some(r) = ctx.monotonic(ctx.alpha) {
        return Ok(Some(r.renamed(PropertyKind::Monotonic)));
    }
    let gys: Vec<Value> = ys.iter().map(|y| gamma.image(y)).collect();
    for (j, y) in ys.iter().enumerate() {
        for (k, z) in ys.iter().enumerate() {
            ctx.tick();
            if t.le(y, z) && !s.le(&gys[j], &gys[k]) {
                return Ok(ctx.fail(
                    "gamma-monotonic",
                    vec![ctx.tgt("y", y), ctx.tgt("z", z), ctx.src("gamma(y)", &gys[j]), ctx.src("gamma(z)", &gys[k])],
                ));
            }
        }
    }
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            ctx.tick();
            if t.le(&ctx.images[i], y) != s.le(x, &gys[j]) {
                return Ok(ctx.fail(
                    "adjunction",
                    vec![
                        ctx.src("x", x),
                        ctx.tgt("y", y),
                        ctx.tgt("alpha(x)", &ctx.images[i]),
                        ctx.src("gamma(y)", &gys[j]),
                    ],
                ));
            }
        }
    }
    for (j, y) in ys.iter().enumerate() {
        ctx.tick();
        let back = ctx.alpha.image(&gys[j]);
        if &back != y {
            return Ok(ctx.fail(
                "insertion",
                vec![ctx.tgt("y", y), ctx.src("gamma(y)", &gys[j]), ctx.tgt("alpha(gamma(y))", &back)],
            ));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    /// abstract `<=` implies concrete `<=`
    AbstractToConcrete,
    /// `alpha` of concrete products `<=` implies abstract products `<=`
    ConcreteToAbstract,
}

/// Multisets of point indices of size `1..=k`, in size then lexicographic
/// order.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=k {
        let mut cur = vec![0usize; size];
        loop {
            out.push(cur.clone());
            // next non-decreasing sequence
            let mut pos = size;
            while pos > 0 && cur[pos - 1] == n - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            cur[pos - 1] += 1;
            let v = cur[pos - 1];
            for c in cur.iter_mut().skip(pos) {
                *c = v;
            }
        }
    }
    out
}

fn multiset_implication(ctx: &Ctx<'_>, dir: Direction) -> PropertyReport {
    let (s, t) = (ctx.s(), ctx.t());
    if ctx.points.is_empty() {
        return PropertyReport::pass("multiset", ctx.exhaustive, 0);
    }
    // (key compared under the hypothesis, key compared in the conclusion)
    let mut classes: Vec<(Value, Value, Vec<usize>)> = Vec::new();
    for set in multisets(ctx.points.len(), ctx.budget.set_size) {
        ctx.tick();
        let conc = s.prod_all(set.iter().map(|&i| &ctx.points[i]));
        let abs = t.prod_all(set.iter().map(|&i| &ctx.images[i]));
        let (hyp, concl) = match dir {
            Direction::AbstractToConcrete => (abs, conc),
            Direction::ConcreteToAbstract => (ctx.alpha.image(&conc), abs),
        };
        if !classes.iter().any(|(h, c, _)| h == &hyp && c == &concl) {
            classes.push((hyp, concl, set));
        }
    }
    let (hyp_ring, concl_ring) = match dir {
        Direction::AbstractToConcrete => (t, s),
        Direction::ConcreteToAbstract => (t, t),
    };
    for (h1, c1, set1) in &classes {
        for (h2, c2, set2) in &classes {
            ctx.tick();
            if hyp_ring.le(h1, h2) && !concl_ring.le(c1, c2) {
                let render = |set: &Vec<usize>| set.iter().map(|&i| ctx.points[i].clone()).collect();
                return PropertyReport::fail(
                    "multiset-implication",
                    vec![
                        WitnessItem::new("I1", s, render(set1)),
                        WitnessItem::new("I2", s, render(set2)),
                    ],
                    ctx.checked.get(),
                )
                .with_detail(format!(
                    "hypothesis {} <= {} holds, conclusion {} <= {} fails",
                    hyp_ring.format_value(h1),
                    hyp_ring.format_value(h2),
                    concl_ring.format_value(c1),
                    concl_ring.format_value(c2)
                ));
            }
        }
    }
    PropertyReport::pass("multiset-implication", ctx.exhaustive, ctx.checked.get())
}
