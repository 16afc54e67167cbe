//! Acceptance run: one line per criterion with its time against the limit.
//! Runs without the libtest harness so the lines always reach the output.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scsp_core::abstraction::{quasi_bound_check, recover_optima, strengthened_bound_check, translate};
use scsp_core::catalog::{catalog_up_to, generate_problem, random_problem, ProblemBounds, ProblemShape};
use scsp_core::json::{parse_mapping, parse_problem, solution_to_json, to_canonical_string};
use scsp_core::mapping::{find_upper_adjoint, homomorphisms, AdjointSearch};
use scsp_core::report::DEFAULT_SEED;
use scsp_core::scsp::{solution, solution_with_jobs};
use scsp_core::{
    check_axioms, check_property, verify_theorem, Budget, Problem, PropertyKind, Semiring, Table, TheoremId, Value,
    VerifyBounds,
};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

/// Every full assignment contributes the product of all constraint values
/// to its con-tuple's bucket.
fn fold(p: &Problem) -> Vec<Value> {
    let s = p.semiring();
    let (nv, nd) = (p.system().variables().len(), p.system().domain().len());
    let mut out = vec![s.zero().clone(); nd.pow(p.con().len() as u32)];
    let mut eta = vec![0usize; nv];
    loop {
        let val = p.constraints().iter().fold(s.one().clone(), |acc, c| {
            let t: Vec<usize> = c.scope().iter().map(|&v| eta[v]).collect();
            s.mul(&acc, c.value(p.system(), &t))
        });
        let k = p.con().iter().fold(0, |acc, &v| acc * nd + eta[v]);
        out[k] = s.add(&out[k], &val);
        // little-endian increment; order does not matter for the fold
        let mut i = 0;
        while i < nv && eta[i] + 1 == nd {
            eta[i] = 0;
            i += 1;
        }
        if i == nv {
            return out;
        }
        eta[i] += 1;
    }
}

fn undominated(s: &Semiring, values: &[Value]) -> Vec<usize> {
    (0..values.len())
        .filter(|&i| values.iter().all(|w| w == &values[i] || !s.le(&values[i], w)))
        .collect()
}

type Check = Result<String, String>;
type Unary<'a> = Vec<(&'static str, Box<dyn Fn(u32) -> bool + 'a>)>;
type Ternary<'a> = &'a dyn Fn(u32, u32, u32) -> bool;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn theorem(id: TheoremId, trials: usize, bounds: &VerifyBounds) -> Check {
    let r = verify_theorem(id, trials, DEFAULT_SEED, bounds).map_err(|e| e.to_string())?;
    ensure(r.holds(), || format!("{r}"))?;
    Ok(format!("{id}: {}", r.report.detail.clone().unwrap_or_default()))
}

fn quasi_golden() -> Check {
    let p = parse_problem(&data("quasi.json")).map_err(|e| e.to_string())?;
    let alpha = parse_mapping(&data("quasi-alpha.json")).map_err(|e| e.to_string())?;
    let set = Value::set_of;
    let sol = solution(&p);
    ensure(sol.values() == [set(&[0]), set(&[]), set(&[]), set(&[])], || format!("Sol(P) = {:?}", sol.values()))?;
    ensure(sol.optimal_indices() == [0], || "Opt(P) is not {(d1,d1)}".into())?;
    let tp = translate(&alpha, &p).map_err(|e| e.to_string())?;
    let asol = solution(&tp);
    let expected = [set(&[0]), set(&[]), set(&[]), set(&[1])];
    ensure(asol.values() == expected, || format!("Sol(alpha(P)) = {:?}", asol.values()))?;
    ensure(asol.optimal_indices() == [0, 3], || "Opt(alpha(P)) is not {(d1,d1),(d2,d2)}".into())?;
    let budget = Budget::default();
    let quasi = check_property(&alpha, PropertyKind::QuasiHomomorphism, None, &budget).map_err(|e| e.to_string())?;
    ensure(quasi.holds(), || "alpha is not certified quasi".into())?;
    let hom = check_property(&alpha, PropertyKind::Homomorphism, None, &budget).map_err(|e| e.to_string())?;
    let wa = hom.witness("a").map(|w| w.value().clone());
    let wb = hom.witness("b").map(|w| w.value().clone());
    ensure(hom.is_fail() && wa == Some(set(&[1])) && wb == Some(set(&[2])), || format!("homomorphism: {hom}"))?;
    let strong = strengthened_bound_check(&alpha, &p).map_err(|e| e.to_string())?;
    ensure(strong.is_fail(), || "strengthened bound not refuted".into())?;
    let weak = quasi_bound_check(&alpha, &p).map_err(|e| e.to_string())?;
    ensure(weak.holds(), || format!("quasi bound: {weak}"))?;
    Ok("exact match".into())
}

/// The library procedure, then the same claim re-checked against the fold.
fn recovery() -> Check {
    let bounds = VerifyBounds::default();
    let line = theorem(TheoremId::Recovery, 1000, &bounds)?;
    let catalog = catalog_up_to(6);
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 0x2);
    let mut done = 0;
    while done < 1000 {
        let s = &catalog[rng.random_range(0..catalog.len())];
        let t = &catalog[rng.random_range(0..catalog.len())];
        let homs = homomorphisms(s, t, 6).map_err(|e| e.to_string())?;
        if homs.is_empty() {
            continue;
        }
        let alpha = &homs[rng.random_range(0..homs.len())];
        let p = random_problem(&mut rng, s, &ProblemBounds::default()).map_err(|e| e.to_string())?;
        let concrete = fold(&p);
        let opt = undominated(s, &concrete);
        let r = recover_optima(alpha, &p).map_err(|e| e.to_string())?;
        let abs = fold(&translate(alpha, &p).map_err(|e| e.to_string())?);
        for tp in &r.selected {
            let k = p.system().index_of_tuple(tp);
            ensure(opt.contains(&k), || format!("selected {tp:?} is not optimal"))?;
        }
        for (i, tp) in r.abstract_optimal.iter().enumerate() {
            let k = p.system().index_of_tuple(tp);
            ensure(alpha.image(&concrete[k]) == abs[k], || "alpha(v) differs from the abstract value".into())?;
            ensure(r.abstract_values[i] == abs[k], || "reported abstract value differs".into())?;
        }
        done += 1;
    }
    Ok(format!("{line}; 1000 fold re-checks"))
}

fn optima_preservation() -> Check {
    let bounds = VerifyBounds::default();
    let a = theorem(TheoremId::OptimaPreservation, 1000, &bounds)?;
    let b = theorem(TheoremId::ProblemOrderingNecessity, 0, &bounds)?;
    Ok(format!("{a}; {b}"))
}

fn insertion_scan() -> Check {
    let bounds = VerifyBounds {
        scan_carrier: 4,
        ..VerifyBounds::default()
    };
    let line = theorem(TheoremId::OrderPreservingIffIsomorphism, 0, &bounds)?;
    let alpha = parse_mapping(&data("quasi-alpha.json")).map_err(|e| e.to_string())?;
    let budget = Budget::default();
    let pair = match find_upper_adjoint(&alpha).map_err(|e| e.to_string())? {
        AdjointSearch::Found(p) => p,
        AdjointSearch::Missing { .. } => return Err("the collapsing map has no upper adjoint".into()),
    };
    let abs = check_property(&alpha, PropertyKind::Abstraction, Some(&pair.upper), &budget).map_err(|e| e.to_string())?;
    let op = check_property(&alpha, PropertyKind::OrderPreserving, Some(&pair.upper), &budget).map_err(|e| e.to_string())?;
    ensure(abs.holds() && op.is_fail(), || "the collapsing map should be an abstraction that is not order-preserving".into())?;
    Ok(line)
}

fn chains() -> Check {
    let bounds = VerifyBounds::default();
    let a = theorem(TheoremId::AggregationIffHomomorphism, 0, &bounds)?;
    let b = theorem(TheoremId::ChainOrderReflecting, 0, &bounds)?;
    let c = theorem(TheoremId::ChainOptimaPreservation, 1000, &bounds)?;
    Ok(format!("{a}; {b}; {c}"))
}

/// First violated law, in the checker's order, computed on raw tables.
fn first_violation(t: &Table) -> Option<(&'static str, Vec<u32>)> {
    let n = t.len() as u32;
    let (s, p) = (|a: u32, b: u32| t.sum[a as usize][b as usize], |a: u32, b: u32| t.prod[a as usize][b as usize]);
    let le = |a: u32, b: u32| s(a, b) == b;
    let (z, o) = (t.zero, t.one);
    let one: Unary = vec![
        ("idempotency", Box::new(|a| s(a, a) == a)),
    ];
    let unary_late: Unary = vec![
        ("sum-unit", Box::new(|a| s(z, a) == a && s(a, z) == a)),
        ("sum-absorbing-one", Box::new(|a| s(o, a) == o && s(a, o) == o)),
    ];
    let prod_unary: Unary = vec![
        ("prod-unit", Box::new(|a| p(o, a) == a && p(a, o) == a)),
        ("prod-absorbing-zero", Box::new(|a| p(z, a) == z && p(a, z) == z)),
    ];
    let find1 = |f: &dyn Fn(u32) -> bool| (0..n).find(|&a| !f(a)).map(|a| vec![a]);
    let find2 = |f: &dyn Fn(u32, u32) -> bool| {
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| !f(a, b)).map(|(a, b)| vec![a, b])
    };
    let find3 = |f: &dyn Fn(u32, u32, u32) -> bool| {
        (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .find(|&(a, b, c)| !f(a, b, c))
            .map(|(a, b, c)| vec![a, b, c])
    };
    for (name, f) in &one {
        if let Some(w) = find1(f.as_ref()) {
            return Some((name, w));
        }
    }
    if let Some(w) = find2(&|a, b| s(a, b) == s(b, a)) {
        return Some(("sum-commutativity", w));
    }
    if let Some(w) = find3(&|a, b, c| s(s(a, b), c) == s(a, s(b, c))) {
        return Some(("sum-associativity", w));
    }
    for (name, f) in &unary_late {
        if let Some(w) = find1(f.as_ref()) {
            return Some((name, w));
        }
    }
    if let Some(w) = find2(&|a, b| p(a, b) == p(b, a)) {
        return Some(("prod-commutativity", w));
    }
    if let Some(w) = find3(&|a, b, c| p(p(a, b), c) == p(a, p(b, c))) {
        return Some(("prod-associativity", w));
    }
    for (name, f) in &prod_unary {
        if let Some(w) = find1(f.as_ref()) {
            return Some((name, w));
        }
    }
    let laws: [(&str, Ternary); 4] = [
        ("distributivity", &|a, b, c| p(a, s(b, c)) == s(p(a, b), p(a, c)) && p(s(b, c), a) == s(p(b, a), p(c, a))),
        ("partial-order", &|a, b, c| le(a, a) && (!(le(a, b) && le(b, a)) || a == b) && (!(le(a, b) && le(b, c)) || le(a, c))),
        ("sum-is-lub", &|a, b, c| {
            let j = s(a, b);
            le(a, j) && le(b, j) && (!(le(a, c) && le(b, c)) || le(j, c))
        }),
        ("prod-monotone", &|a, b, c| !le(a, b) || le(p(a, c), p(b, c))),
    ];
    for (name, f) in laws {
        if let Some(w) = find3(f) {
            return Some((name, w));
        }
    }
    if (0..n).all(|a| p(a, a) == a) {
        if let Some(w) = find2(&|a, b| le(p(a, b), a) && le(p(a, b), b)) {
            return Some(("prod-is-glb", w));
        }
    }
    None
}

fn mutations() -> Check {
    // (semiring, operation, row, column, new cell)
    let boolean = Semiring::boolean();
    let ps = Semiring::powerset(&["a", "b"]).map_err(|e| e.to_string())?;
    let cases: [(&Semiring, &str, usize, usize, u32); 8] = [
        (&boolean, "sum", 0, 0, 1),
        (&boolean, "sum", 0, 1, 0),
        (&boolean, "prod", 1, 1, 0),
        (&boolean, "prod", 0, 0, 1),
        (&ps, "sum", 1, 2, 1),
        (&ps, "sum", 3, 0, 0),
        (&ps, "prod", 3, 3, 1),
        (&ps, "prod", 1, 2, 1),
    ];
    let mut names = Vec::new();
    for (s, op, r, c, v) in cases {
        let mut t = s.to_table().map_err(|e| e.to_string())?;
        let grid = if op == "sum" { &mut t.sum } else { &mut t.prod };
        ensure(grid[r][c] != v, || format!("{op}[{r}][{c}] already holds {v}"))?;
        grid[r][c] = v;
        let (law, args) = first_violation(&t).ok_or_else(|| format!("{op}[{r}][{c}] := {v} breaks no law"))?;
        let m = Semiring::table(t).map_err(|e| e.to_string())?;
        let report = check_axioms(&m, &Budget::default());
        ensure(report.is_fail() && report.property == law, || {
            format!("{} {op}[{r}][{c}] := {v}: expected {law}, got {report}", s.describe())
        })?;
        let got: Vec<Value> = report.witness.iter().map(|w| w.value().clone()).collect();
        let want: Vec<Value> = args.into_iter().map(Value::Elem).collect();
        ensure(got == want, || format!("{law}: witness {got:?}, expected {want:?}"))?;
        names.push(law);
    }
    Ok(format!("caught as {}", names.join(", ")))
}

fn oracle_equivalence() -> Check {
    let builtins = [
        Semiring::boolean(),
        Semiring::fuzzy(),
        Semiring::probabilistic(),
        Semiring::weighted(),
        Semiring::powerset(&["a", "b", "c"]).map_err(|e| e.to_string())?,
        Semiring::product(vec![Semiring::fuzzy(), Semiring::weighted()]).map_err(|e| e.to_string())?,
    ];
    let bounds = ProblemBounds::default();
    for (k, s) in builtins.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        rng.set_stream(k as u64);
        for i in 0..500 {
            let p = random_problem(&mut rng, s, &bounds).map_err(|e| e.to_string())?;
            let sol = solution(&p);
            let expected = fold(&p);
            ensure(sol.values() == expected, || format!("{} instance {i}: values differ", s.describe()))?;
            ensure(sol.optimal_indices() == undominated(s, &expected), || {
                format!("{} instance {i}: optima differ", s.describe())
            })?;
        }
    }
    Ok(format!("500 instances each over {} semirings", builtins.len()))
}

fn performance() -> Check {
    let s = Semiring::weighted();
    let shape = ProblemShape {
        vars: 10,
        domain: 4,
        constraints: 12,
        arity: 2,
        con: 2,
        max_denominator: 16,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let p = loop {
        let p = generate_problem(&mut rng, &s, &shape).map_err(|e| e.to_string())?;
        if p.support().len() == 10 {
            break p;
        }
    };
    let start = Instant::now();
    let one = solution_with_jobs(&p, 1);
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(5), || format!("single-threaded solve took {elapsed:?}"))?;
    let eight = solution_with_jobs(&p, 8);
    let (a, b) = (to_canonical_string(&solution_to_json(&one)), to_canonical_string(&solution_to_json(&eight)));
    ensure(a == b, || "jobs 8 output differs".into())?;
    Ok(format!("4^10 assignments single-threaded in {:.2} s, jobs 8 identical", elapsed.as_secs_f64()))
}

fn main() {
    type Criterion = (&'static str, u64, fn() -> Check);
    let criteria: [Criterion; 8] = [
        ("1 powerset example golden", 1, quasi_golden),
        ("2 recovery of concrete optima", 60, recovery),
        ("3 optima preservation both directions", 120, optima_preservation),
        ("4 order preservation vs isomorphism scan", 120, insertion_scan),
        ("5 chains: aggregation, reflection, optima", 60, chains),
        ("6 axiom checker mutations", 60, mutations),
        ("7 solver vs independent fold", 60, oracle_equivalence),
        ("8 performance floor", 5, performance),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let verdict = match result {
            Ok(_) if secs > limit as f64 => Err(format!("took {secs:.2} s, limit {limit} s")),
            r => r,
        };
        match verdict {
            Ok(msg) => println!("PASS criterion {name} ({secs:.2} s / {limit} s): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.2} s / {limit} s): {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
