//! c-semirings as first-class values.
//!
//! A [`Semiring`] is a cheaply clonable handle describing a carrier together
//! with its sum, product, zero and one. The induced order is `a <= b` iff
//! `a + b = b`; for finite carriers the whole relation is cached at
//! construction.
//!
//! The rational subalgebra used for the fuzzy and probabilistic carriers is
//! not a complete lattice. Nothing in this crate relies on completeness.

mod axioms;
mod congruence;

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::value::Value;

pub use axioms::{check_axioms, Axiom};
pub use congruence::{is_congruence, quotient, CongruenceCheck, CongruenceWitness, Partition};

/// Carriers larger than this are never enumerated.
pub const ENUMERATION_LIMIT: usize = 1 << 16;
/// Carriers up to this size get a precomputed order matrix.
const ORDER_MATRIX_LIMIT: usize = 1024;
/// Largest powerset universe (values are stored as `u64` bit-sets).
pub const MAX_UNIVERSE: usize = 63;

/// Finite operation tables over named elements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Table {
    pub names: Vec<String>,
    pub sum: Vec<Vec<u32>>,
    pub prod: Vec<Vec<u32>>,
    pub zero: u32,
    pub one: u32,
}

impl Table {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum SemiringKind {
    /// `<{F,T}, or, and, F, T>`
    Boolean,
    /// `<[0,1], max, min, 0, 1>` over exact rationals.
    Fuzzy,
    /// `<[0,1], max, *, 0, 1>` over exact rationals.
    Probabilistic,
    /// `<Q+ u {inf}, min, +, inf, 0>`
    Weighted,
    /// `<2^U, union, intersection, {}, U>`
    Powerset { universe: Vec<String> },
    Table(Table),
    Product(Vec<Semiring>),
}

struct Inner {
    kind: SemiringKind,
    zero: Value,
    one: Value,
    elements: Option<Vec<Value>>,
    order: Option<Vec<bool>>,
    total: bool,
}

/// A c-semiring.
#[derive(Clone)]
pub struct Semiring(Arc<Inner>);

impl PartialEq for Semiring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}

impl fmt::Debug for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Semiring({})", self.describe())
    }
}

impl fmt::Display for Semiring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl Semiring {
    pub fn boolean() -> Semiring {
        Self::build(SemiringKind::Boolean)
    }

    pub fn fuzzy() -> Semiring {
        Self::build(SemiringKind::Fuzzy)
    }

    pub fn probabilistic() -> Semiring {
        Self::build(SemiringKind::Probabilistic)
    }

    pub fn weighted() -> Semiring {
        Self::build(SemiringKind::Weighted)
    }

    pub fn powerset<S: AsRef<str>>(universe: &[S]) -> Result<Semiring> {
        if universe.is_empty() {
            return Err(Error::MalformedSemiring("empty powerset universe".into()));
        }
        if universe.len() > MAX_UNIVERSE {
            return Err(Error::MalformedSemiring(format!(
                "powerset universe has {} names, at most {MAX_UNIVERSE} supported",
                universe.len()
            )));
        }
        let universe: Vec<String> = universe.iter().map(|s| s.as_ref().to_string()).collect();
        check_unique(&universe, "powerset universe")?;
        Ok(Self::build(SemiringKind::Powerset { universe }))
    }

    /// Builds a semiring from explicit operation tables.
    ///
    /// Only well-formedness is checked here; use [`check_axioms`] to certify
    /// the c-semiring laws.
    pub fn table(table: Table) -> Result<Semiring> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedSemiring("table semiring has no elements".into()));
        }
        check_unique(&table.names, "table elements")?;
        for (label, op) in [("sum", &table.sum), ("prod", &table.prod)] {
            if op.len() != n || op.iter().any(|row| row.len() != n) {
                return Err(Error::MalformedSemiring(format!("{label} table is not {n}x{n}")));
            }
            if op.iter().flatten().any(|&e| e as usize >= n) {
                return Err(Error::MalformedSemiring(format!(
                    "{label} table refers to an unknown element"
                )));
            }
        }
        if table.zero as usize >= n || table.one as usize >= n {
            return Err(Error::MalformedSemiring("zero or one is not an element".into()));
        }
        Ok(Self::build(SemiringKind::Table(table)))
    }

    pub fn product(factors: Vec<Semiring>) -> Result<Semiring> {
        if factors.is_empty() {
            return Err(Error::MalformedSemiring("product needs at least one factor".into()));
        }
        Ok(Self::build(SemiringKind::Product(factors)))
    }

    /// Looks up a parameterless built-in by name.
    pub fn builtin(name: &str) -> Result<Semiring> {
        match name {
            "boolean" | "classical" => Ok(Self::boolean()),
            "fuzzy" => Ok(Self::fuzzy()),
            "probabilistic" => Ok(Self::probabilistic()),
            "weighted" => Ok(Self::weighted()),
            _ => Err(Error::Unknown {
                kind: "built-in semiring",
                name: name.to_string(),
            }),
        }
    }

    fn build(kind: SemiringKind) -> Semiring {
        let (zero, one) = match &kind {
            SemiringKind::Boolean => (Value::Bool(false), Value::Bool(true)),
            SemiringKind::Fuzzy | SemiringKind::Probabilistic => {
                (Value::Rat(Rational::ZERO), Value::Rat(Rational::ONE))
            }
            SemiringKind::Weighted => (Value::Inf, Value::Rat(Rational::ZERO)),
            SemiringKind::Powerset { universe } => {
                (Value::Set(0), Value::Set(full_set(universe.len())))
            }
            SemiringKind::Table(t) => (Value::Elem(t.zero), Value::Elem(t.one)),
            SemiringKind::Product(fs) => (
                Value::Tuple(fs.iter().map(|f| f.zero().clone()).collect()),
                Value::Tuple(fs.iter().map(|f| f.one().clone()).collect()),
            ),
        };
        let mut inner = Inner {
            kind,
            zero,
            one,
            elements: None,
            order: None,
            total: false,
        };
        inner.elements = enumerate(&inner.kind);
        let probe = Semiring(Arc::new(inner));
        let order = probe.0.elements.as_ref().and_then(|els| {
            (els.len() <= ORDER_MATRIX_LIMIT).then(|| {
                let mut m = Vec::with_capacity(els.len() * els.len());
                for a in els {
                    for b in els {
                        m.push(probe.leq_direct(a, b));
                    }
                }
                m
            })
        });
        let total = match (&order, &probe.0.elements) {
            (Some(m), Some(els)) => {
                let n = els.len();
                (0..n).all(|i| (0..n).all(|j| m[i * n + j] || m[j * n + i]))
            }
            _ => probe.total_by_kind(),
        };
        let mut inner = Arc::try_unwrap(probe.0).ok().expect("fresh handle is unique");
        inner.order = order;
        inner.total = total;
        Semiring(Arc::new(inner))
    }

    fn total_by_kind(&self) -> bool {
        match &self.0.kind {
            SemiringKind::Boolean
            | SemiringKind::Fuzzy
            | SemiringKind::Probabilistic
            | SemiringKind::Weighted => true,
            SemiringKind::Powerset { universe } => universe.len() <= 1,
            SemiringKind::Table(_) => false,
            SemiringKind::Product(fs) => {
                let nontrivial: Vec<_> = fs.iter().filter(|f| f.cardinality() != Some(1)).collect();
                nontrivial.len() <= 1 && nontrivial.iter().all(|f| f.is_total())
            }
        }
    }

    pub fn kind(&self) -> &SemiringKind {
        &self.0.kind
    }

    pub fn zero(&self) -> &Value {
        &self.0.zero
    }

    pub fn one(&self) -> &Value {
        &self.0.one
    }

    /// Whether the carrier is finite. Finite carriers above
    /// [`ENUMERATION_LIMIT`] are finite but not enumerable.
    pub fn is_finite(&self) -> bool {
        match &self.0.kind {
            SemiringKind::Fuzzy | SemiringKind::Probabilistic | SemiringKind::Weighted => false,
            SemiringKind::Product(fs) => fs.iter().all(Semiring::is_finite),
            _ => true,
        }
    }

    /// Number of carrier elements, `None` for infinite carriers.
    pub fn cardinality(&self) -> Option<u128> {
        match &self.0.kind {
            SemiringKind::Boolean => Some(2),
            SemiringKind::Fuzzy | SemiringKind::Probabilistic | SemiringKind::Weighted => None,
            SemiringKind::Powerset { universe } => Some(1u128 << universe.len()),
            SemiringKind::Table(t) => Some(t.len() as u128),
            SemiringKind::Product(fs) => fs
                .iter()
                .try_fold(1u128, |acc, f| f.cardinality().and_then(|c| acc.checked_mul(c))),
        }
    }

    /// All carrier elements in canonical order, when enumerable.
    pub fn elements(&self) -> Option<&[Value]> {
        self.0.elements.as_deref()
    }

    /// Like [`elements`](Self::elements) but failing for infinite carriers.
    pub fn require_elements(&self) -> Result<&[Value]> {
        self.elements()
            .ok_or_else(|| Error::RequiresFinite(format!("{self} is not enumerable")))
    }

    /// Position of `v` in [`elements`](Self::elements).
    pub fn index_of(&self, v: &Value) -> Option<usize> {
        match (&self.0.kind, v) {
            (SemiringKind::Boolean, Value::Bool(b)) => Some(*b as usize),
            (SemiringKind::Powerset { universe }, Value::Set(s)) if universe.len() <= 16 => {
                Some(*s as usize)
            }
            (SemiringKind::Table(t), Value::Elem(e)) if (*e as usize) < t.len() => Some(*e as usize),
            (SemiringKind::Product(fs), Value::Tuple(vs)) if fs.len() == vs.len() => {
                let mut idx = 0usize;
                for (f, x) in fs.iter().zip(vs) {
                    let n = f.elements()?.len();
                    idx = idx.checked_mul(n)?.checked_add(f.index_of(x)?)?;
                }
                Some(idx)
            }
            _ => None,
        }
    }

    pub fn is_total(&self) -> bool {
        self.0.total
    }

    /// Whether `v` belongs to the carrier.
    pub fn contains(&self, v: &Value) -> bool {
        match (&self.0.kind, v) {
            (SemiringKind::Boolean, Value::Bool(_)) => true,
            (SemiringKind::Fuzzy | SemiringKind::Probabilistic, Value::Rat(r)) => {
                r.in_unit_interval()
            }
            (SemiringKind::Weighted, Value::Rat(r)) => !r.is_negative(),
            (SemiringKind::Weighted, Value::Inf) => true,
            (SemiringKind::Powerset { universe }, Value::Set(s)) => {
                s & !full_set(universe.len()) == 0
            }
            (SemiringKind::Table(t), Value::Elem(e)) => (*e as usize) < t.len(),
            (SemiringKind::Product(fs), Value::Tuple(vs)) => {
                fs.len() == vs.len() && fs.iter().zip(vs).all(|(f, x)| f.contains(x))
            }
            _ => false,
        }
    }

    pub fn ensure_contains(&self, v: &Value) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::NotInCarrier {
                value: format!("{v:?}"),
                semiring: self.describe(),
            })
        }
    }

    /// `a + b`, checking carrier membership.
    pub fn sum(&self, a: &Value, b: &Value) -> Result<Value> {
        self.ensure_contains(a)?;
        self.ensure_contains(b)?;
        Ok(self.add(a, b))
    }

    /// `a * b`, checking carrier membership.
    pub fn prod(&self, a: &Value, b: &Value) -> Result<Value> {
        self.ensure_contains(a)?;
        self.ensure_contains(b)?;
        Ok(self.mul(a, b))
    }

    /// `a <=_S b`, checking carrier membership.
    pub fn leq(&self, a: &Value, b: &Value) -> Result<bool> {
        self.ensure_contains(a)?;
        self.ensure_contains(b)?;
        Ok(self.le(a, b))
    }

    /// Strict induced order, checking carrier membership.
    pub fn lt(&self, a: &Value, b: &Value) -> Result<bool> {
        Ok(self.leq(a, b)? && a != b)
    }

    /// Unchecked sum; arguments must belong to the carrier.
    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (&self.0.kind, a, b) {
            (SemiringKind::Boolean, Value::Bool(x), Value::Bool(y)) => Value::Bool(*x || *y),
            (SemiringKind::Fuzzy | SemiringKind::Probabilistic, Value::Rat(x), Value::Rat(y)) => {
                Value::Rat((*x).max(*y))
            }
            (SemiringKind::Weighted, Value::Inf, other) | (SemiringKind::Weighted, other, Value::Inf) => {
                other.clone()
            }
            (SemiringKind::Weighted, Value::Rat(x), Value::Rat(y)) => Value::Rat((*x).min(*y)),
            (SemiringKind::Powerset { .. }, Value::Set(x), Value::Set(y)) => Value::Set(x | y),
            (SemiringKind::Table(t), Value::Elem(x), Value::Elem(y)) => {
                Value::Elem(t.sum[*x as usize][*y as usize])
            }
            (SemiringKind::Product(fs), Value::Tuple(xs), Value::Tuple(ys)) => Value::Tuple(
                fs.iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(f, (x, y))| f.add(x, y))
                    .collect(),
            ),
            _ => panic!("values {a:?}, {b:?} are not in the carrier of {self}"),
        }
    }

    /// Unchecked product; arguments must belong to the carrier.
    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match (&self.0.kind, a, b) {
            (SemiringKind::Boolean, Value::Bool(x), Value::Bool(y)) => Value::Bool(*x && *y),
            (SemiringKind::Fuzzy, Value::Rat(x), Value::Rat(y)) => Value::Rat((*x).min(*y)),
            (SemiringKind::Probabilistic, Value::Rat(x), Value::Rat(y)) => Value::Rat(x.mul(y)),
            (SemiringKind::Weighted, Value::Inf, _) | (SemiringKind::Weighted, _, Value::Inf) => {
                Value::Inf
            }
            (SemiringKind::Weighted, Value::Rat(x), Value::Rat(y)) => Value::Rat(x.add(y)),
            (SemiringKind::Powerset { .. }, Value::Set(x), Value::Set(y)) => Value::Set(x & y),
            (SemiringKind::Table(t), Value::Elem(x), Value::Elem(y)) => {
                Value::Elem(t.prod[*x as usize][*y as usize])
            }
            (SemiringKind::Product(fs), Value::Tuple(xs), Value::Tuple(ys)) => Value::Tuple(
                fs.iter()
                    .zip(xs.iter().zip(ys))
                    .map(|(f, (x, y))| f.mul(x, y))
                    .collect(),
            ),
            _ => panic!("values {a:?}, {b:?} are not in the carrier of {self}"),
        }
    }

    /// Unchecked induced order.
    pub fn le(&self, a: &Value, b: &Value) -> bool {
        if let (Some(m), SemiringKind::Table(_) | SemiringKind::Product(_)) =
            (&self.0.order, &self.0.kind)
        {
            if let (Some(i), Some(j)) = (self.index_of(a), self.index_of(b)) {
                let n = self.0.elements.as_ref().map_or(0, Vec::len);
                return m[i * n + j];
            }
        }
        self.leq_direct(a, b)
    }

    /// Unchecked strict induced order.
    pub fn less(&self, a: &Value, b: &Value) -> bool {
        a != b && self.le(a, b)
    }

    fn leq_direct(&self, a: &Value, b: &Value) -> bool {
        match (&self.0.kind, a, b) {
            (SemiringKind::Boolean, Value::Bool(x), Value::Bool(y)) => !*x || *y,
            (SemiringKind::Fuzzy | SemiringKind::Probabilistic, Value::Rat(x), Value::Rat(y)) => {
                x <= y
            }
            (SemiringKind::Weighted, Value::Inf, _) => true,
            (SemiringKind::Weighted, Value::Rat(_), Value::Inf) => false,
            (SemiringKind::Weighted, Value::Rat(x), Value::Rat(y)) => x >= y,
            (SemiringKind::Powerset { .. }, Value::Set(x), Value::Set(y)) => x & !y == 0,
            (SemiringKind::Product(fs), Value::Tuple(xs), Value::Tuple(ys)) => fs
                .iter()
                .zip(xs.iter().zip(ys))
                .all(|(f, (x, y))| f.le(x, y)),
            _ => &self.add(a, b) == b,
        }
    }

    /// Sum of a sequence; the empty sum is zero.
    pub fn sum_all<'a>(&self, values: impl IntoIterator<Item = &'a Value>) -> Value {
        values
            .into_iter()
            .fold(self.zero().clone(), |acc, v| self.add(&acc, v))
    }

    /// Product of a sequence; the empty product is one.
    pub fn prod_all<'a>(&self, values: impl IntoIterator<Item = &'a Value>) -> Value {
        values
            .into_iter()
            .fold(self.one().clone(), |acc, v| self.mul(&acc, v))
    }

    /// The maximal elements of `values` under the induced order, deduplicated
    /// and in first-occurrence order.
    pub fn maximal(&self, values: &[Value]) -> Result<Vec<Value>> {
        if values.is_empty() {
            return Err(Error::Empty("maximal of an empty collection"));
        }
        for v in values {
            self.ensure_contains(v)?;
        }
        Ok(self.maximal_unchecked(values))
    }

    pub(crate) fn maximal_unchecked(&self, values: &[Value]) -> Vec<Value> {
        let mut distinct: Vec<&Value> = Vec::new();
        for v in values {
            if !distinct.contains(&v) {
                distinct.push(v);
            }
        }
        distinct
            .iter()
            .filter(|v| !distinct.iter().any(|w| self.less(v, w)))
            .map(|v| (*v).clone())
            .collect()
    }

    /// Draws one carrier element.
    ///
    /// Enumerable carriers are sampled uniformly. Unit-interval rationals use
    /// denominators up to `max_denominator`; weights lie in `[0, 100]` with
    /// the same denominators and `inf` is drawn with probability 1/16.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, max_denominator: i128) -> Value {
        if let Some(els) = self.elements() {
            return els[rng.random_range(0..els.len())].clone();
        }
        let q = rng.random_range(1..=max_denominator.max(1));
        match &self.0.kind {
            SemiringKind::Fuzzy | SemiringKind::Probabilistic => {
                Value::Rat(Rational::new(rng.random_range(0..=q), q))
            }
            SemiringKind::Weighted => {
                if rng.random_range(0..16) == 0 {
                    Value::Inf
                } else {
                    Value::Rat(Rational::new(rng.random_range(0..=100 * q), q))
                }
            }
            SemiringKind::Powerset { universe } => {
                Value::Set(rng.random::<u64>() & full_set(universe.len()))
            }
            SemiringKind::Product(fs) => {
                Value::Tuple(fs.iter().map(|f| f.sample(rng, max_denominator)).collect())
            }
            SemiringKind::Boolean | SemiringKind::Table(_) => unreachable!("enumerable"),
        }
    }

    /// Elements worth testing on any carrier: the endpoints plus a few
    /// fixed interior points of the parametric built-ins.
    pub fn landmarks(&self) -> Vec<Value> {
        let mut out = vec![self.zero().clone(), self.one().clone()];
        match &self.0.kind {
            SemiringKind::Fuzzy | SemiringKind::Probabilistic => {
                out.extend([Value::rat(1, 2), Value::rat(7, 10), Value::rat(1, 64)]);
            }
            SemiringKind::Weighted => {
                out.extend([Value::weight(1), Value::weight(5), Value::rat(1, 2)]);
            }
            _ => {}
        }
        out
    }

    /// Carrier elements to quantify over: every element when enumerable,
    /// otherwise the landmarks followed by seeded samples. The flag reports
    /// whether the list is exhaustive.
    pub fn test_points<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        samples: usize,
        max_denominator: i128,
    ) -> (Vec<Value>, bool) {
        if let Some(els) = self.elements() {
            return (els.to_vec(), true);
        }
        let mut out = self.landmarks();
        let mut attempts = 0;
        while out.len() < samples && attempts < samples * 16 {
            attempts += 1;
            let v = self.sample(rng, max_denominator);
            if !out.contains(&v) {
                out.push(v);
            }
        }
        (out, false)
    }

    /// Human-readable rendering of a carrier value.
    pub fn format_value(&self, v: &Value) -> String {
        match (&self.0.kind, v) {
            (_, Value::Bool(true)) => "T".into(),
            (_, Value::Bool(false)) => "F".into(),
            (_, Value::Rat(r)) => r.to_string(),
            (_, Value::Inf) => "inf".into(),
            (SemiringKind::Powerset { universe }, Value::Set(s)) => {
                let names: Vec<&str> = universe
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| s >> i & 1 == 1)
                    .map(|(_, n)| n.as_str())
                    .collect();
                format!("{{{}}}", names.join(","))
            }
            (SemiringKind::Table(t), Value::Elem(e)) => t
                .names
                .get(*e as usize)
                .cloned()
                .unwrap_or_else(|| format!("#{e}")),
            (SemiringKind::Product(fs), Value::Tuple(vs)) => {
                let parts: Vec<String> = fs.iter().zip(vs).map(|(f, x)| f.format_value(x)).collect();
                format!("({})", parts.join(", "))
            }
            (_, other) => format!("{other:?}"),
        }
    }

    pub fn describe(&self) -> String {
        match &self.0.kind {
            SemiringKind::Boolean => "boolean".into(),
            SemiringKind::Fuzzy => "fuzzy".into(),
            SemiringKind::Probabilistic => "probabilistic".into(),
            SemiringKind::Weighted => "weighted".into(),
            SemiringKind::Powerset { universe } => format!("powerset{{{}}}", universe.join(",")),
            SemiringKind::Table(t) => format!("table[{}]", t.names.join(",")),
            SemiringKind::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(Semiring::describe).collect();
                format!("product({})", parts.join(", "))
            }
        }
    }

    /// Materializes an enumerable semiring as operation tables, naming each
    /// element by its [`format_value`](Self::format_value) rendering.
    pub fn to_table(&self) -> Result<Table> {
        let els = self.require_elements()?;
        let pos = |v: &Value| self.index_of(v).expect("closed operation") as u32;
        let grid = |op: &dyn Fn(&Value, &Value) -> Value| -> Vec<Vec<u32>> {
            els.iter()
                .map(|a| els.iter().map(|b| pos(&op(a, b))).collect())
                .collect()
        };
        Ok(Table {
            names: els.iter().map(|v| self.format_value(v)).collect(),
            sum: grid(&|a, b| self.add(a, b)),
            prod: grid(&|a, b| self.mul(a, b)),
            zero: pos(self.zero()),
            one: pos(self.one()),
        })
    }
}

fn full_set(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_unique(names: &[String], what: &str) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::MalformedSemiring(format!("duplicate name {n:?} in {what}")));
        }
    }
    Ok(())
}

fn enumerate(kind: &SemiringKind) -> Option<Vec<Value>> {
    match kind {
        SemiringKind::Boolean => Some(vec![Value::Bool(false), Value::Bool(true)]),
        SemiringKind::Fuzzy | SemiringKind::Probabilistic | SemiringKind::Weighted => None,
        SemiringKind::Powerset { universe } => {
            (universe.len() <= 16).then(|| (0..1u64 << universe.len()).map(Value::Set).collect())
        }
        SemiringKind::Table(t) => Some((0..t.len() as u32).map(Value::Elem).collect()),
        SemiringKind::Product(fs) => {
            let mut acc: Vec<Vec<Value>> = vec![Vec::new()];
            for f in fs {
                let els = f.elements()?;
                if acc.len().checked_mul(els.len())? > ENUMERATION_LIMIT {
                    return None;
                }
                acc = acc
                    .iter()
                    .flat_map(|prefix| {
                        els.iter().map(move |e| {
                            let mut p = prefix.clone();
                            p.push(e.clone());
                            p
                        })
                    })
                    .collect();
            }
            Some(acc.into_iter().map(Value::Tuple).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pset_abc() -> Semiring {
        Semiring::powerset(&["a", "b", "c"]).unwrap()
    }

    #[test]
    fn fuzzy_sum_is_max() {
        let s = Semiring::fuzzy();
        assert_eq!(s.sum(&Value::rat(3, 10), &Value::rat(7, 10)).unwrap(), Value::rat(7, 10));
    }

    #[test]
    fn powerset_sum_is_union_and_prod_is_intersection() {
        let s = pset_abc();
        let b = Value::set_of(&[1]);
        let c = Value::set_of(&[2]);
        assert_eq!(s.sum(&b, &c).unwrap(), Value::set_of(&[1, 2]));
        assert_eq!(s.prod(&b, &c).unwrap(), Value::Set(0));
    }

    #[test]
    fn weighted_sum_is_min_and_order_is_reversed() {
        let s = Semiring::weighted();
        assert_eq!(s.sum(&Value::weight(5), &Value::weight(3)).unwrap(), Value::weight(3));
        assert!(s.leq(&Value::weight(5), &Value::weight(3)).unwrap());
        assert!(!s.leq(&Value::weight(3), &Value::weight(5)).unwrap());
        assert_eq!(s.add(&Value::Inf, &Value::weight(4)), Value::weight(4));
        assert_eq!(s.mul(&Value::Inf, &Value::weight(4)), Value::Inf);
        assert!(s.leq(&Value::Inf, &Value::weight(0)).unwrap());
    }

    #[test]
    fn probabilistic_product_is_exact() {
        let s = Semiring::probabilistic();
        assert_eq!(s.prod(&Value::rat(7, 10), &Value::rat(7, 10)).unwrap(), Value::rat(49, 100));
    }

    #[test]
    fn one_is_product_unit_everywhere() {
        for s in [Semiring::boolean(), Semiring::fuzzy(), Semiring::weighted(), pset_abc()] {
            let mut rng = rand::rng();
            for _ in 0..20 {
                let x = s.sample(&mut rng, 64);
                assert_eq!(s.prod(s.one(), &x).unwrap(), x);
                assert!(s.leq(s.zero(), &x).unwrap());
                assert!(s.leq(&x, s.one()).unwrap());
            }
        }
    }

    #[test]
    fn powerset_singletons_are_incomparable() {
        let s = pset_abc();
        let a = Value::set_of(&[0]);
        let b = Value::set_of(&[1]);
        assert!(!s.leq(&a, &b).unwrap());
        assert!(!s.leq(&b, &a).unwrap());
        assert!(!s.is_total());
    }

    #[test]
    fn type_mismatch_is_an_error() {
        let s = Semiring::fuzzy();
        assert!(matches!(
            s.sum(&Value::Bool(true), &Value::rat(1, 2)),
            Err(Error::NotInCarrier { .. })
        ));
        assert!(s.sum(&Value::rat(3, 2), &Value::rat(1, 2)).is_err());
        assert!(Semiring::weighted().leq(&Value::weight(-1), &Value::Inf).is_err());
        let p = Semiring::powerset(&["a"]).unwrap();
        assert!(!p.contains(&Value::Set(0b10)));
    }

    #[test]
    fn maximal_keeps_incomparable_maxima() {
        let s = pset_abc();
        let a = Value::set_of(&[0]);
        assert_eq!(s.maximal(&[a.clone(), Value::Set(0), Value::Set(0)]).unwrap(), vec![a]);

        let y = Semiring::powerset(&["p", "q"]).unwrap();
        let p = Value::set_of(&[0]);
        let q = Value::set_of(&[1]);
        let got = y.maximal(&[p.clone(), q.clone(), Value::Set(0)]).unwrap();
        assert_eq!(got, vec![p, q]);

        let f = Semiring::fuzzy();
        let got = f
            .maximal(&[Value::rat(1, 5), Value::rat(9, 10), Value::rat(9, 10)])
            .unwrap();
        assert_eq!(got, vec![Value::rat(9, 10)]);
        assert!(matches!(f.maximal(&[]), Err(Error::Empty(_))));
    }

    #[test]
    fn builtin_shapes() {
        let y = Semiring::powerset(&["p", "q"]).unwrap();
        assert_eq!(y.cardinality(), Some(4));
        assert_eq!(y.zero(), &Value::Set(0));
        assert_eq!(y.one(), &Value::Set(0b11));

        let bb = Semiring::product(vec![Semiring::boolean(), Semiring::boolean()]).unwrap();
        assert_eq!(bb.elements().unwrap().len(), 4);
        let tf = Value::Tuple(vec![Value::Bool(true), Value::Bool(false)]);
        let ft = Value::Tuple(vec![Value::Bool(false), Value::Bool(true)]);
        assert_eq!(bb.add(&tf, &ft), bb.one().clone());
        assert_eq!(bb.mul(&tf, &ft), bb.zero().clone());
        assert!(!bb.is_total());

        assert!(Semiring::powerset::<&str>(&[]).is_err());
        assert!(Semiring::product(vec![]).is_err());
        assert!(Semiring::builtin("nope").is_err());
    }

    #[test]
    fn table_round_trip_preserves_operations() {
        let s = pset_abc();
        let t = Semiring::table(s.to_table().unwrap()).unwrap();
        let els = s.elements().unwrap();
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                let ti = Value::Elem(i as u32);
                let tj = Value::Elem(j as u32);
                assert_eq!(t.index_of(&t.add(&ti, &tj)), s.index_of(&s.add(a, b)));
                assert_eq!(t.index_of(&t.mul(&ti, &tj)), s.index_of(&s.mul(a, b)));
                assert_eq!(t.le(&ti, &tj), s.le(a, b));
            }
        }
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let bad = Table {
            names: vec!["0".into(), "1".into()],
            sum: vec![vec![0, 1]],
            prod: vec![vec![0, 0], vec![0, 1]],
            zero: 0,
            one: 1,
        };
        assert!(Semiring::table(bad).is_err());
        let bad = Table {
            names: vec!["0".into(), "1".into()],
            sum: vec![vec![0, 1], vec![1, 2]],
            prod: vec![vec![0, 0], vec![0, 1]],
            zero: 0,
            one: 1,
        };
        assert!(Semiring::table(bad).is_err());
    }
}
