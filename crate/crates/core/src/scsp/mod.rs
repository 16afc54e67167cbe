//! Soft constraint problems over a c-semiring: constraints, combination,
//! projection, solutions and the constraint ordering.

mod order;
mod solve;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::semiring::Semiring;
use crate::value::Value;

pub use order::{constraint_below, problem_below, problem_equal};
pub use solve::{combine, optimals, project, solution, solution_with_jobs, tuple_project, SolutionTable};

/// Variables are referred to by their position in the system's variable list.
pub type VarId = usize;

/// A tuple of domain value indices, one per scope variable.
pub type Tuple = Vec<usize>;

struct SystemInner {
    semiring: Semiring,
    domain: Vec<String>,
    variables: Vec<String>,
}

/// `<S, D, V>`: a semiring, a finite domain and an ordered variable list.
#[derive(Clone)]
pub struct ConstraintSystem(Arc<SystemInner>);

impl PartialEq for ConstraintSystem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.semiring == other.0.semiring
                && self.0.domain == other.0.domain
                && self.0.variables == other.0.variables)
    }
}

impl fmt::Debug for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstraintSystem")
            .field("semiring", &self.0.semiring.describe())
            .field("domain", &self.0.domain)
            .field("variables", &self.0.variables)
            .finish()
    }
}

impl ConstraintSystem {
    pub fn new<D: Into<String>, V: Into<String>>(
        semiring: Semiring,
        domain: impl IntoIterator<Item = D>,
        variables: impl IntoIterator<Item = V>,
    ) -> Result<ConstraintSystem> {
        let domain: Vec<String> = domain.into_iter().map(Into::into).collect();
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        if domain.is_empty() {
            return Err(Error::InvalidProblem("domain must be nonempty".into()));
        }
        if let Some(d) = first_duplicate(&domain) {
            return Err(Error::InvalidProblem(format!("duplicate domain value {d:?}")));
        }
        if let Some(v) = first_duplicate(&variables) {
            return Err(Error::InvalidProblem(format!("duplicate variable {v:?}")));
        }
        Ok(ConstraintSystem(Arc::new(SystemInner {
            semiring,
            domain,
            variables,
        })))
    }

    pub fn semiring(&self) -> &Semiring {
        &self.0.semiring
    }

    pub fn domain(&self) -> &[String] {
        &self.0.domain
    }

    pub fn variables(&self) -> &[String] {
        &self.0.variables
    }

    pub fn var(&self, name: &str) -> Option<VarId> {
        self.0.variables.iter().position(|v| v == name)
    }

    pub fn domain_index(&self, name: &str) -> Option<usize> {
        self.0.domain.iter().position(|d| d == name)
    }

    /// Same domain and variables over another semiring.
    pub fn with_semiring(&self, semiring: Semiring) -> ConstraintSystem {
        ConstraintSystem(Arc::new(SystemInner {
            semiring,
            domain: self.0.domain.clone(),
            variables: self.0.variables.clone(),
        }))
    }

    /// Resolves variable names into a scope sorted by variable order.
    pub fn scope(&self, names: &[&str]) -> Result<Vec<VarId>> {
        let ids = names
            .iter()
            .map(|n| {
                self.var(n)
                    .ok_or_else(|| Error::InvalidScope(format!("unknown variable {n:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        normalize_scope(self, ids)
    }

    /// Number of tuples over a scope of the given arity.
    pub fn tuple_count(&self, arity: usize) -> Result<usize> {
        u32::try_from(arity)
            .ok()
            .and_then(|a| self.0.domain.len().checked_pow(a))
            .ok_or_else(|| Error::BudgetExceeded(format!("|D|^{arity} tuples do not fit in memory")))
    }

    /// Renders a tuple as `(d1,d2)`.
    pub fn format_tuple(&self, t: &[usize]) -> String {
        let parts: Vec<&str> = t.iter().map(|&d| self.0.domain[d].as_str()).collect();
        format!("({})", parts.join(","))
    }

    /// Position of a tuple in lexicographic order.
    pub fn index_of_tuple(&self, t: &[usize]) -> usize {
        let d = self.0.domain.len();
        t.iter().fold(0, |acc, &x| acc * d + x)
    }

    /// The tuple at a lexicographic position.
    pub fn tuple_at(&self, mut index: usize, arity: usize) -> Tuple {
        let d = self.0.domain.len();
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = index % d;
            index /= d;
        }
        t
    }
}

fn first_duplicate(names: &[String]) -> Option<&String> {
    names
        .iter()
        .enumerate()
        .find(|(i, n)| names[..*i].contains(n))
        .map(|(_, n)| n)
}

/// Sorts a scope by variable order and rejects duplicates and unknown ids.
pub(crate) fn normalize_scope(system: &ConstraintSystem, mut ids: Vec<VarId>) -> Result<Vec<VarId>> {
    let n = system.variables().len();
    if let Some(bad) = ids.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidScope(format!("variable index {bad} out of range")));
    }
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidScope(format!(
            "variable {:?} repeated in scope",
            system.variables()[w[0]]
        )));
    }
    Ok(ids)
}

/// `<def, con>`: a scope and a dense table over every scope tuple, in
/// lexicographic order with the first scope variable most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    scope: Vec<VarId>,
    table: Vec<Value>,
}

impl Constraint {
    /// Builds a constraint from a dense table. The scope must already be in
    /// variable order.
    pub fn new(system: &ConstraintSystem, scope: Vec<VarId>, table: Vec<Value>) -> Result<Constraint> {
        let normalized = normalize_scope(system, scope.clone())?;
        if normalized != scope {
            return Err(Error::InvalidScope("scope must follow the variable order".into()));
        }
        let expected = system.tuple_count(scope.len())?;
        if table.len() != expected {
            return Err(Error::InvalidConstraint(format!(
                "table has {} entries, scope needs {expected}",
                table.len()
            )));
        }
        let s = system.semiring();
        for v in &table {
            s.ensure_contains(v)?;
        }
        Ok(Constraint { scope, table })
    }

    /// Builds a constraint by evaluating `f` on every tuple over `scope`.
    pub fn from_fn(
        system: &ConstraintSystem,
        scope: Vec<VarId>,
        mut f: impl FnMut(&[usize]) -> Value,
    ) -> Result<Constraint> {
        let scope = normalize_scope(system, scope)?;
        let n = system.tuple_count(scope.len())?;
        let table = (0..n).map(|i| f(&system.tuple_at(i, scope.len()))).collect();
        Constraint::new(system, scope, table)
    }

    pub fn constant(system: &ConstraintSystem, scope: Vec<VarId>, value: Value) -> Result<Constraint> {
        Constraint::from_fn(system, scope, |_| value.clone())
    }

    /// The constraint assigning `1` to every tuple.
    pub fn trivial(system: &ConstraintSystem, scope: Vec<VarId>) -> Result<Constraint> {
        let one = system.semiring().one().clone();
        Constraint::constant(system, scope, one)
    }

    pub(crate) fn from_parts(scope: Vec<VarId>, table: Vec<Value>) -> Constraint {
        Constraint { scope, table }
    }

    pub fn scope(&self) -> &[VarId] {
        &self.scope
    }

    pub fn table(&self) -> &[Value] {
        &self.table
    }

    pub fn value(&self, system: &ConstraintSystem, t: &[usize]) -> &Value {
        &self.table[system.index_of_tuple(t)]
    }

    pub fn is_trivial(&self, s: &Semiring) -> bool {
        self.table.iter().all(|v| v == s.one())
    }

    /// Same scope with every value passed through `f`.
    pub fn map_values(&self, f: impl FnMut(&Value) -> Value) -> Constraint {
        Constraint {
            scope: self.scope.clone(),
            table: self.table.iter().map(f).collect(),
        }
    }
}

/// `<C, con>`: constraints with pairwise distinct scopes and a problem type.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    system: ConstraintSystem,
    constraints: Vec<Constraint>,
    con: Vec<VarId>,
}

impl Problem {
    pub fn new(system: ConstraintSystem, constraints: Vec<Constraint>, con: Vec<VarId>) -> Result<Problem> {
        let con = normalize_scope(&system, con)?;
        let s = system.semiring();
        for (i, c) in constraints.iter().enumerate() {
            if normalize_scope(&system, c.scope.clone())? != c.scope {
                return Err(Error::InvalidScope(format!("constraint {i} scope is not in variable order")));
            }
            if c.table.len() != system.tuple_count(c.scope.len())? {
                return Err(Error::InvalidConstraint(format!("constraint {i} table has the wrong size")));
            }
            for v in &c.table {
                s.ensure_contains(v)?;
            }
            if constraints[..i].iter().any(|d| d.scope == c.scope) {
                return Err(Error::InvalidProblem(format!(
                    "two constraints share the scope {}",
                    format_scope(&system, &c.scope)
                )));
            }
        }
        Ok(Problem {
            system,
            constraints,
            con,
        })
    }

    pub fn system(&self) -> &ConstraintSystem {
        &self.system
    }

    pub fn semiring(&self) -> &Semiring {
        self.system.semiring()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn con(&self) -> &[VarId] {
        &self.con
    }

    /// `con` together with every constraint scope, in variable order.
    pub fn support(&self) -> Vec<VarId> {
        let mut vars: Vec<VarId> = self
            .constraints
            .iter()
            .flat_map(|c| c.scope.iter().copied())
            .chain(self.con.iter().copied())
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    pub fn constraint_with_scope(&self, scope: &[VarId]) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.scope == scope)
    }
}

pub fn format_scope(system: &ConstraintSystem, scope: &[VarId]) -> String {
    let names: Vec<&str> = scope.iter().map(|&v| system.variables()[v].as_str()).collect();
    format!("{{{}}}", names.join(","))
}
