//! JSON formats for semirings, mappings, problems and solutions.
//!
//! Output is canonical: object keys are sorted, tuples are listed in
//! lexicographic order and rationals are written in lowest terms, so equal
//! inputs always serialize to identical bytes.
//!
//! Semiring references are either a built-in name (`"boolean"`, `"fuzzy"`,
//! `"probabilistic"`, `"weighted"`), an inline descriptor object, or a path
//! to a descriptor file relative to the referring file.
//!
//! Values are written per semiring: `"T"`/`"F"`, rationals as `"p/q"`,
//! `"inf"` for the infinite weight, powerset values as arrays of names,
//! table elements by name and product values as arrays of components.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};
use crate::mapping::{Mapping, MappingRule};
use crate::rational::Rational;
use crate::scsp::{Constraint, ConstraintSystem, Problem, SolutionTable};
use crate::semiring::{quotient, Partition, Semiring, SemiringKind, Table};
use crate::value::Value;

/// Appends a reference token to a JSON pointer.
fn at(pointer: &str, token: impl ToString) -> String {
    let t = token.to_string().replace('~', "~0").replace('/', "~1");
    format!("{pointer}/{t}")
}

fn field<'a>(obj: &'a Json, pointer: &str, key: &str) -> Result<&'a Json> {
    obj.get(key)
        .ok_or_else(|| Error::schema(pointer_or_root(pointer), format!("missing field {key:?}")))
}

fn pointer_or_root(p: &str) -> String {
    if p.is_empty() {
        "/".to_string()
    } else {
        p.to_string()
    }
}

fn as_str<'a>(j: &'a Json, pointer: &str) -> Result<&'a str> {
    j.as_str()
        .ok_or_else(|| Error::schema(pointer_or_root(pointer), "expected a string"))
}

fn as_array<'a>(j: &'a Json, pointer: &str) -> Result<&'a Vec<Json>> {
    j.as_array()
        .ok_or_else(|| Error::schema(pointer_or_root(pointer), "expected an array"))
}

fn as_object<'a>(j: &'a Json, pointer: &str) -> Result<&'a Map<String, Json>> {
    j.as_object()
        .ok_or_else(|| Error::schema(pointer_or_root(pointer), "expected an object"))
}

fn strings(j: &Json, pointer: &str) -> Result<Vec<String>> {
    as_array(j, pointer)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_str(x, &at(pointer, i)).map(str::to_string))
        .collect()
}

/// Reads and parses a JSON file.
pub fn read_json(path: &Path) -> Result<Json> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Pretty-printed canonical text with a trailing newline.
pub fn to_canonical_string(j: &Json) -> String {
    let mut s = serde_json::to_string_pretty(j).expect("JSON values always serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- semirings

/// Where relative semiring paths are resolved from.
#[derive(Clone, Debug, Default)]
pub struct Context {
    pub base: Option<PathBuf>,
}

impl Context {
    pub fn for_file(path: &Path) -> Context {
        Context {
            base: path.parent().map(Path::to_path_buf),
        }
    }

    fn resolve(&self, rel: &str) -> PathBuf {
        match &self.base {
            Some(b) => b.join(rel),
            None => PathBuf::from(rel),
        }
    }
}

pub fn semiring_to_json(s: &Semiring) -> Json {
    match s.kind() {
        SemiringKind::Boolean => json!("boolean"),
        SemiringKind::Fuzzy => json!("fuzzy"),
        SemiringKind::Probabilistic => json!("probabilistic"),
        SemiringKind::Weighted => json!("weighted"),
        SemiringKind::Powerset { universe } => json!({"kind": "powerset", "universe": universe}),
        SemiringKind::Table(t) => {
            let grid = |g: &Vec<Vec<u32>>| -> Json {
                g.iter()
                    .map(|row| row.iter().map(|&e| json!(t.names[e as usize])).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
                    .into()
            };
            json!({
                "kind": "table",
                "elements": t.names,
                "sum": grid(&t.sum),
                "prod": grid(&t.prod),
                "zero": t.names[t.zero as usize],
                "one": t.names[t.one as usize],
            })
        }
        SemiringKind::Product(fs) => {
            json!({"kind": "product", "factors": fs.iter().map(semiring_to_json).collect::<Vec<_>>()})
        }
    }
}

pub fn semiring_from_json(j: &Json, pointer: &str, ctx: &Context) -> Result<Semiring> {
    if let Some(name) = j.as_str() {
        if let Ok(s) = Semiring::builtin(name) {
            return Ok(s);
        }
        if name.ends_with(".json") {
            let path = ctx.resolve(name);
            let inner = read_json(&path)?;
            return semiring_from_json(&inner, "", &Context::for_file(&path));
        }
        return Err(Error::schema(
            pointer_or_root(pointer),
            format!("unknown semiring {name:?}: expected a built-in name, a descriptor or a .json path"),
        ));
    }
    let kind = as_str(field(j, pointer, "kind")?, &at(pointer, "kind"))?;
    let wrap = |e: Error| match e {
        Error::Schema { .. } => e,
        other => Error::schema(pointer_or_root(pointer), other.to_string()),
    };
    match kind {
        "boolean" | "fuzzy" | "probabilistic" | "weighted" => Semiring::builtin(kind).map_err(wrap),
        "powerset" => {
            let p = at(pointer, "universe");
            let universe = strings(field(j, pointer, "universe")?, &p)?;
            Semiring::powerset(&universe).map_err(wrap)
        }
        "table" => {
            let names = strings(field(j, pointer, "elements")?, &at(pointer, "elements"))?;
            let lookup = |x: &Json, p: &str| -> Result<u32> {
                let n = as_str(x, p)?;
                names
                    .iter()
                    .position(|m| m == n)
                    .map(|i| i as u32)
                    .ok_or_else(|| Error::schema(p, format!("unknown element {n:?}")))
            };
            let grid = |key: &str| -> Result<Vec<Vec<u32>>> {
                let p = at(pointer, key);
                as_array(field(j, pointer, key)?, &p)?
                    .iter()
                    .enumerate()
                    .map(|(r, row)| {
                        let pr = at(&p, r);
                        as_array(row, &pr)?
                            .iter()
                            .enumerate()
                            .map(|(c, x)| lookup(x, &at(&pr, c)))
                            .collect()
                    })
                    .collect()
            };
            let table = Table {
                sum: grid("sum")?,
                prod: grid("prod")?,
                zero: lookup(field(j, pointer, "zero")?, &at(pointer, "zero"))?,
                one: lookup(field(j, pointer, "one")?, &at(pointer, "one"))?,
                names,
            };
            Semiring::table(table).map_err(wrap)
        }
        "product" => {
            let p = at(pointer, "factors");
            let factors = as_array(field(j, pointer, "factors")?, &p)?
                .iter()
                .enumerate()
                .map(|(i, f)| semiring_from_json(f, &at(&p, i), ctx))
                .collect::<Result<Vec<_>>>()?;
            Semiring::product(factors).map_err(wrap)
        }
        other => Err(Error::schema(at(pointer, "kind"), format!("unknown semiring kind {other:?}"))),
    }
}

pub fn parse_semiring(path: &Path) -> Result<Semiring> {
    let j = read_json(path)?;
    semiring_from_json(&j, "", &Context::for_file(path))
}

// ------------------------------------------------------------------- values

pub fn value_to_json(s: &Semiring, v: &Value) -> Json {
    match (s.kind(), v) {
        (SemiringKind::Powerset { universe }, Value::Set(bits)) => universe
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, n)| json!(n))
            .collect::<Vec<_>>()
            .into(),
        (SemiringKind::Product(fs), Value::Tuple(vs)) => {
            fs.iter().zip(vs).map(|(f, x)| value_to_json(f, x)).collect::<Vec<_>>().into()
        }
        _ => json!(s.format_value(v)),
    }
}

pub fn value_from_json(s: &Semiring, j: &Json, pointer: &str) -> Result<Value> {
    let bad = |msg: String| Error::schema(pointer_or_root(pointer), msg);
    let v = match s.kind() {
        SemiringKind::Boolean => match j {
            Json::Bool(b) => Value::Bool(*b),
            Json::String(t) if t == "T" || t == "true" => Value::Bool(true),
            Json::String(t) if t == "F" || t == "false" => Value::Bool(false),
            _ => return Err(bad(format!("expected \"T\" or \"F\", got {j}"))),
        },
        SemiringKind::Fuzzy | SemiringKind::Probabilistic | SemiringKind::Weighted => {
            let text = match j {
                Json::String(t) => t.clone(),
                Json::Number(n) => n.to_string(),
                _ => return Err(bad(format!("expected a rational, got {j}"))),
            };
            if matches!(s.kind(), SemiringKind::Weighted) && (text == "inf" || text == "infinity") {
                Value::Inf
            } else {
                Value::Rat(text.parse::<Rational>().map_err(|e| bad(e.to_string()))?)
            }
        }
        SemiringKind::Powerset { universe } => {
            let mut bits = 0u64;
            for (i, x) in as_array(j, pointer)?.iter().enumerate() {
                let name = as_str(x, &at(pointer, i))?;
                let k = universe
                    .iter()
                    .position(|u| u == name)
                    .ok_or_else(|| Error::schema(at(pointer, i), format!("{name:?} is not in the universe")))?;
                bits |= 1 << k;
            }
            Value::Set(bits)
        }
        SemiringKind::Table(t) => {
            let name = as_str(j, pointer)?;
            Value::Elem(t.index_of(name).ok_or_else(|| bad(format!("unknown element {name:?}")))?)
        }
        SemiringKind::Product(fs) => {
            let parts = as_array(j, pointer)?;
            if parts.len() != fs.len() {
                return Err(bad(format!("expected {} components, got {}", fs.len(), parts.len())));
            }
            Value::Tuple(
                fs.iter()
                    .zip(parts)
                    .enumerate()
                    .map(|(i, (f, x))| value_from_json(f, x, &at(pointer, i)))
                    .collect::<Result<_>>()?,
            )
        }
    };
    if !s.contains(&v) {
        return Err(bad(format!("{} is not in the carrier of {s}", s.format_value(&v))));
    }
    Ok(v)
}

// ----------------------------------------------------------------- mappings

pub fn mapping_to_json(m: &Mapping) -> Json {
    let (s, t) = (m.source(), m.target());
    let mut out = match m.rule() {
        MappingRule::Identity => json!({"kind": "identity"}),
        MappingRule::Table(images) => {
            let els = s.elements().expect("table mappings have enumerable sources");
            let pairs: Vec<Json> = els
                .iter()
                .zip(images)
                .map(|(x, y)| json!([value_to_json(s, x), value_to_json(t, y)]))
                .collect();
            json!({"kind": "table", "pairs": pairs})
        }
        MappingRule::Threshold {
            theta,
            low,
            high,
            strict,
        } => json!({
            "kind": "threshold",
            "theta": value_to_json(s, theta),
            "low": value_to_json(t, low),
            "high": value_to_json(t, high),
            "strict": strict,
        }),
        MappingRule::Projection(j) => json!({"kind": "projection", "index": j}),
        MappingRule::Natural(blocks) => {
            let els = s.elements().expect("quotients have enumerable sources");
            let count = blocks.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
            let mut grouped: Vec<Vec<Json>> = vec![Vec::new(); count];
            for (x, &b) in els.iter().zip(blocks) {
                grouped[b as usize].push(value_to_json(s, x));
            }
            json!({"kind": "natural", "blocks": grouped})
        }
        MappingRule::Compose(f, g) => {
            json!({"kind": "compose", "first": mapping_to_json(f), "second": mapping_to_json(g)})
        }
    };
    out["source"] = semiring_to_json(s);
    out["target"] = semiring_to_json(t);
    out
}

pub fn mapping_from_json(j: &Json, pointer: &str, ctx: &Context) -> Result<Mapping> {
    as_object(j, pointer)?;
    let kind = as_str(field(j, pointer, "kind")?, &at(pointer, "kind"))?;
    let semiring = |key: &str| -> Result<Semiring> {
        semiring_from_json(field(j, pointer, key)?, &at(pointer, key), ctx)
    };
    let optional_target = |implied: &Semiring| -> Result<()> {
        if let Some(t) = j.get("target") {
            let t = semiring_from_json(t, &at(pointer, "target"), ctx)?;
            if &t != implied {
                return Err(Error::schema(
                    at(pointer, "target"),
                    format!("target {t} does not match the implied target {implied}"),
                ));
            }
        }
        Ok(())
    };
    let wrap = |e: Error| match e {
        Error::Schema { .. } => e,
        other => Error::schema(pointer_or_root(pointer), other.to_string()),
    };
    match kind {
        "identity" => {
            let s = semiring("source")?;
            optional_target(&s)?;
            Ok(Mapping::identity(s))
        }
        "table" => {
            let (s, t) = (semiring("source")?, semiring("target")?);
            let p = at(pointer, "pairs");
            let pairs = as_array(field(j, pointer, "pairs")?, &p)?
                .iter()
                .enumerate()
                .map(|(i, pair)| {
                    let pi = at(&p, i);
                    match as_array(pair, &pi)?.as_slice() {
                        [x, y] => Ok((value_from_json(&s, x, &at(&pi, 0))?, value_from_json(&t, y, &at(&pi, 1))?)),
                        _ => Err(Error::schema(pi, "expected a [source, target] pair")),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Mapping::table(s, t, &pairs).map_err(wrap)
        }
        "threshold" => {
            let (s, t) = (semiring("source")?, semiring("target")?);
            let theta = value_from_json(&s, field(j, pointer, "theta")?, &at(pointer, "theta"))?;
            let low = value_from_json(&t, field(j, pointer, "low")?, &at(pointer, "low"))?;
            let high = value_from_json(&t, field(j, pointer, "high")?, &at(pointer, "high"))?;
            let strict = match j.get("strict") {
                None => false,
                Some(b) => b
                    .as_bool()
                    .ok_or_else(|| Error::schema(at(pointer, "strict"), "expected a boolean"))?,
            };
            Mapping::threshold(s, t, theta, low, high, strict).map_err(wrap)
        }
        "projection" => {
            let s = semiring("source")?;
            let index = field(j, pointer, "index")?
                .as_u64()
                .ok_or_else(|| Error::schema(at(pointer, "index"), "expected a non-negative integer"))?;
            let m = Mapping::projection(s, index as usize).map_err(wrap)?;
            optional_target(m.target())?;
            Ok(m)
        }
        "natural" => {
            let s = semiring("source")?;
            let p = at(pointer, "blocks");
            let blocks: Partition = as_array(field(j, pointer, "blocks")?, &p)?
                .iter()
                .enumerate()
                .map(|(b, block)| {
                    let pb = at(&p, b);
                    as_array(block, &pb)?
                        .iter()
                        .enumerate()
                        .map(|(i, x)| value_from_json(&s, x, &at(&pb, i)))
                        .collect()
                })
                .collect::<Result<_>>()?;
            let (q, nu) = quotient(&s, &blocks).map_err(wrap)?;
            optional_target(&q)?;
            Ok(nu)
        }
        "compose" => {
            let first = mapping_from_json(field(j, pointer, "first")?, &at(pointer, "first"), ctx)?;
            let second = mapping_from_json(field(j, pointer, "second")?, &at(pointer, "second"), ctx)?;
            Mapping::compose(first, second).map_err(wrap)
        }
        other => Err(Error::schema(at(pointer, "kind"), format!("unknown mapping kind {other:?}"))),
    }
}

pub fn parse_mapping(path: &Path) -> Result<Mapping> {
    let j = read_json(path)?;
    mapping_from_json(&j, "", &Context::for_file(path))
}

// ----------------------------------------------------------------- problems

fn names_of(system: &ConstraintSystem, vars: &[usize]) -> Vec<String> {
    vars.iter().map(|&v| system.variables()[v].clone()).collect()
}

pub fn constraint_to_json(system: &ConstraintSystem, c: &Constraint) -> Json {
    let s = system.semiring();
    let entries: Vec<Json> = c
        .table()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let t = system.tuple_at(i, c.scope().len());
            let names: Vec<&str> = t.iter().map(|&d| system.domain()[d].as_str()).collect();
            json!([names, value_to_json(s, v)])
        })
        .collect();
    json!({"scope": names_of(system, c.scope()), "entries": entries})
}

pub fn problem_to_json(p: &Problem) -> Json {
    let sys = p.system();
    json!({
        "system": {
            "semiring": semiring_to_json(sys.semiring()),
            "domain": sys.domain(),
            "variables": sys.variables(),
        },
        "con": names_of(sys, p.con()),
        "constraints": p.constraints().iter().map(|c| constraint_to_json(sys, c)).collect::<Vec<_>>(),
    })
}

fn var_list(system: &ConstraintSystem, j: &Json, pointer: &str) -> Result<Vec<usize>> {
    as_array(j, pointer)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let p = at(pointer, i);
            let name = as_str(x, &p)?;
            system
                .var(name)
                .ok_or_else(|| Error::schema(p, format!("unknown variable {name:?}")))
        })
        .collect()
}

fn constraint_from_json(system: &ConstraintSystem, j: &Json, pointer: &str) -> Result<Constraint> {
    let s = system.semiring();
    let sp = at(pointer, "scope");
    let listed = var_list(system, field(j, pointer, "scope")?, &sp)?;
    let mut scope = listed.clone();
    scope.sort_unstable();
    if scope.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::schema(sp, "variable repeated in scope"));
    }
    // position in the listed order of every sorted scope variable
    let perm: Vec<usize> = scope
        .iter()
        .map(|v| listed.iter().position(|w| w == v).expect("same variables"))
        .collect();
    let n = system
        .tuple_count(scope.len())
        .map_err(|e| Error::schema(sp.clone(), e.to_string()))?;
    let mut table: Vec<Option<Value>> = vec![None; n];
    let fill = match j.get("fill") {
        Some(f) => Some(value_from_json(s, f, &at(pointer, "fill"))?),
        None => None,
    };
    if let Some(entries) = j.get("entries") {
        let ep = at(pointer, "entries");
        for (i, e) in as_array(entries, &ep)?.iter().enumerate() {
            let pi = at(&ep, i);
            let [tuple, value] = as_array(e, &pi)?.as_slice() else {
                return Err(Error::schema(pi, "expected a [tuple, value] pair"));
            };
            let tp = at(&pi, 0);
            let names = strings(tuple, &tp)?;
            if names.len() != listed.len() {
                return Err(Error::schema(tp, format!("expected {} domain values", listed.len())));
            }
            let listed_tuple = names
                .iter()
                .enumerate()
                .map(|(k, d)| {
                    system
                        .domain_index(d)
                        .ok_or_else(|| Error::schema(at(&tp, k), format!("unknown domain value {d:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let sorted: Vec<usize> = perm.iter().map(|&k| listed_tuple[k]).collect();
            let slot = &mut table[system.index_of_tuple(&sorted)];
            if slot.is_some() {
                return Err(Error::schema(pi, "tuple listed twice"));
            }
            *slot = Some(value_from_json(s, value, &at(&pi, 1))?);
        }
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.or_else(|| fill.clone()).ok_or_else(|| {
                let t = system.tuple_at(i, scope.len());
                Error::schema(
                    pointer_or_root(pointer),
                    format!("no value for tuple {} and no fill value", system.format_tuple(&t)),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Constraint::new(system, scope, table).map_err(|e| Error::schema(pointer_or_root(pointer), e.to_string()))
}

pub fn problem_from_json(j: &Json, pointer: &str, ctx: &Context) -> Result<Problem> {
    as_object(j, pointer)?;
    let sp = at(pointer, "system");
    let sys_json = field(j, pointer, "system")?;
    let semiring = semiring_from_json(field(sys_json, &sp, "semiring")?, &at(&sp, "semiring"), ctx)?;
    let domain = strings(field(sys_json, &sp, "domain")?, &at(&sp, "domain"))?;
    let variables = strings(field(sys_json, &sp, "variables")?, &at(&sp, "variables"))?;
    let system = ConstraintSystem::new(semiring, domain, variables).map_err(|e| Error::schema(sp.clone(), e.to_string()))?;
    let con = var_list(&system, field(j, pointer, "con")?, &at(pointer, "con"))?;
    let cp = at(pointer, "constraints");
    let constraints = as_array(field(j, pointer, "constraints")?, &cp)?
        .iter()
        .enumerate()
        .map(|(i, c)| constraint_from_json(&system, c, &at(&cp, i)))
        .collect::<Result<Vec<_>>>()?;
    for (i, c) in constraints.iter().enumerate() {
        if constraints[..i].iter().any(|d| d.scope() == c.scope()) {
            return Err(Error::schema(
                at(&at(&cp, i), "scope"),
                "another constraint has the same scope",
            ));
        }
    }
    Problem::new(system, constraints, con).map_err(|e| Error::schema(pointer_or_root(pointer), e.to_string()))
}

pub fn parse_problem(path: &Path) -> Result<Problem> {
    let j = read_json(path)?;
    problem_from_json(&j, "", &Context::for_file(path))
}

// ---------------------------------------------------------------- solutions

/// `{"con", "table": [[tuple, value]...], "optimal": [tuple...]}`.
pub fn solution_to_json(sol: &SolutionTable) -> Json {
    let sys = sol.system();
    let s = sys.semiring();
    let tuple = |t: &[usize]| -> Json { t.iter().map(|&d| json!(sys.domain()[d])).collect::<Vec<_>>().into() };
    let table: Vec<Json> = sol
        .entries()
        .map(|(t, v)| json!([tuple(&t), value_to_json(s, v)]))
        .collect();
    let optimal: Vec<Json> = sol.optimal_tuples().iter().map(|t| tuple(t)).collect();
    json!({
        "con": names_of(sys, sol.con()),
        "table": table,
        "optimal": optimal,
    })
}
