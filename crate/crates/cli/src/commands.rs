use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context as _};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use scsp_core::abstraction::{
    quasi_bound_check, recover_optima, strengthened_bound_check, translate as translate_problem, verify_theorem,
    TheoremId, TheoremReport, VerifyBounds,
};
use scsp_core::catalog::{generate_problem, ProblemShape};
use scsp_core::json::{self as formats, Context};
use scsp_core::mapping::{check_sum_product_reflection, Mapping, PropertyKind};
use scsp_core::scsp::{format_scope, solution_with_jobs, Problem, SolutionTable};
use scsp_core::{check_axioms, check_property, Budget, PropertyReport, Semiring};

/// What a command produced: the canonical JSON payload, its human-readable
/// rendering and whether every check passed.
pub struct Outcome {
    pub json: Json,
    pub text: String,
    pub success: bool,
}

pub struct Settings {
    pub budget: Budget,
    pub jobs: usize,
}

impl Settings {
    pub fn new(seed: u64, max_evaluations: Option<u64>, jobs: usize) -> Settings {
        let mut budget = Budget {
            seed,
            ..Budget::default()
        };
        if let Some(m) = max_evaluations {
            budget.max_evaluations = m;
        }
        Settings {
            budget,
            jobs: jobs.max(1),
        }
    }
}

/// Prefixes errors with the file they came from, unless the message
/// already names it.
fn located<T>(r: scsp_core::Result<T>, path: &Path) -> anyhow::Result<T> {
    r.map_err(|e| {
        let (msg, file) = (e.to_string(), path.display().to_string());
        if msg.starts_with(&file) {
            anyhow!(msg)
        } else {
            anyhow!("{file}: {msg}")
        }
    })
}

fn load_problem(path: &Path) -> anyhow::Result<Problem> {
    located(formats::parse_problem(path), path)
}

fn load_mapping(path: &Path) -> anyhow::Result<Mapping> {
    located(formats::parse_mapping(path), path)
}

fn load_semiring(spec: &str) -> anyhow::Result<Semiring> {
    formats::semiring_from_json(&json!(spec), "", &Context { base: None }).with_context(|| spec.to_string())
}

fn ms(d: Duration) -> String {
    format!("{:.3} ms", d.as_secs_f64() * 1e3)
}

fn render_solution(sol: &SolutionTable) -> String {
    let sys = sol.system();
    let s = sys.semiring();
    let mut out = format!("solution over {}\n", format_scope(sys, sol.con()));
    for (t, v) in sol.entries() {
        let mark = if sol.is_optimal(&t) { " *" } else { "" };
        let _ = writeln!(out, "  {}  {}{mark}", sys.format_tuple(&t), s.format_value(v));
    }
    let opt: Vec<String> = sol.optimal_tuples().iter().map(|t| sys.format_tuple(t)).collect();
    let _ = writeln!(out, "optimal: {}", opt.join(" "));
    out
}

pub fn solve(settings: &Settings, path: &Path) -> anyhow::Result<Outcome> {
    let p = load_problem(path)?;
    let support = p.support().len();
    let d = p.system().domain().len() as u64;
    let assignments = d.checked_pow(support as u32);
    if assignments.is_none_or(|a| a > settings.budget.max_evaluations) {
        bail!(
            "{}: {d}^{support} assignments exceed the evaluation budget {}",
            path.display(),
            settings.budget.max_evaluations
        );
    }
    let start = Instant::now();
    let sol = solution_with_jobs(&p, settings.jobs);
    let elapsed = start.elapsed();
    Ok(Outcome {
        json: json!({"command": "solve", "solution": formats::solution_to_json(&sol)}),
        text: format!("{}solved in {}\n", render_solution(&sol), ms(elapsed)),
        success: true,
    })
}

fn endpoint_warning(alpha: &Mapping) -> String {
    if alpha.preserves_endpoints() {
        String::new()
    } else {
        "warning: the mapping does not send 0 to 0 and 1 to 1\n".to_string()
    }
}

pub fn translate(problem: &Path, mapping: &Path) -> anyhow::Result<Outcome> {
    let p = load_problem(problem)?;
    let alpha = load_mapping(mapping)?;
    let tp = translate_problem(&alpha, &p)?;
    let j = formats::problem_to_json(&tp);
    Ok(Outcome {
        text: format!("{}{}", endpoint_warning(&alpha), formats::to_canonical_string(&j)),
        json: json!({
            "command": "translate",
            "problem": j,
            "endpoints_preserved": alpha.preserves_endpoints(),
        }),
        success: true,
    })
}

pub fn recover(problem: &Path, mapping: &Path) -> anyhow::Result<Outcome> {
    let p = load_problem(problem)?;
    let alpha = load_mapping(mapping)?;
    let start = Instant::now();
    let r = recover_optima(&alpha, &p)?;
    let elapsed = start.elapsed();
    let sys = p.system();
    let (s, t) = (p.semiring(), alpha.target());
    let mut text = endpoint_warning(&alpha);
    text.push_str("abstract optima:\n");
    for (i, tp) in r.abstract_optimal.iter().enumerate() {
        let _ = writeln!(
            text,
            "  {}  abstract {}  concrete {}",
            sys.format_tuple(tp),
            t.format_value(&r.abstract_values[i]),
            s.format_value(&r.concrete_values[i])
        );
    }
    let selected: Vec<String> = r.selected.iter().map(|tp| sys.format_tuple(tp)).collect();
    let _ = writeln!(text, "selected: {}", selected.join(" "));
    let note = match r.guarantee {
        scsp_core::Guarantee::Optimal => "selected tuples are optimal",
        scsp_core::Guarantee::QuasiOnly => "no optimality guarantee: the mapping is only a quasi-homomorphism",
        scsp_core::Guarantee::None => "no optimality guarantee: the mapping is not a quasi-homomorphism",
    };
    let _ = writeln!(text, "guarantee: {} ({note})", r.guarantee);
    let _ = writeln!(text, "recovered in {}", ms(elapsed));
    let mut j = r.to_json();
    j["command"] = json!("recover");
    j["endpoints_preserved"] = json!(alpha.preserves_endpoints());
    Ok(Outcome {
        json: j,
        text,
        success: true,
    })
}

pub struct CheckArgs {
    pub semiring: Option<String>,
    pub mapping: Option<PathBuf>,
    pub gamma: Option<PathBuf>,
    pub property: Option<String>,
    pub problem: Option<PathBuf>,
    pub shape: String,
    pub set_size: usize,
}

fn parse_shape(shape: &str) -> anyhow::Result<(usize, usize)> {
    let (n, m) = shape
        .split_once('x')
        .ok_or_else(|| anyhow!("--shape must look like NxM, got {shape:?}"))?;
    Ok((n.trim().parse()?, m.trim().parse()?))
}

fn report_outcome(report: PropertyReport, extra: Json) -> Outcome {
    let mut j = report.to_json();
    j["command"] = json!("check");
    if let (Some(obj), Json::Object(more)) = (j.as_object_mut(), extra) {
        obj.extend(more);
    }
    Outcome {
        success: report.holds(),
        text: format!("{report}\n"),
        json: j,
    }
}

pub fn check(settings: &Settings, args: CheckArgs) -> anyhow::Result<Outcome> {
    let budget = Budget {
        set_size: args.set_size,
        ..settings.budget.clone()
    };
    let Some(property) = args.property.as_deref() else {
        let spec = args
            .semiring
            .as_deref()
            .ok_or_else(|| anyhow!("check needs --property, or --semiring for the axioms"))?;
        let s = load_semiring(spec)?;
        return Ok(report_outcome(check_axioms(&s, &budget), json!({"semiring": s.describe()})));
    };
    let mapping_path = args
        .mapping
        .as_deref()
        .ok_or_else(|| anyhow!("property {property:?} needs --mapping"))?;
    let alpha = load_mapping(mapping_path)?;
    let key = property.replace('_', "-");
    let problem = || -> anyhow::Result<Problem> {
        let path = args
            .problem
            .as_deref()
            .ok_or_else(|| anyhow!("property {property:?} needs --problem"))?;
        load_problem(path)
    };
    let report = match key.as_str() {
        "sum-product-reflection" => {
            let (n, m) = parse_shape(&args.shape)?;
            check_sum_product_reflection(&alpha, m, n, &budget)?
        }
        "quasi-bound" => quasi_bound_check(&alpha, &problem()?)?,
        "strengthened-bound" => strengthened_bound_check(&alpha, &problem()?)?,
        _ => {
            let kind: PropertyKind = property.parse()?;
            let gamma = args.gamma.as_deref().map(load_mapping).transpose()?;
            check_property(&alpha, kind, gamma.as_ref(), &budget)?
        }
    };
    Ok(report_outcome(report, json!({"mapping": alpha.describe()})))
}

pub fn verify(settings: &Settings, theorem: &str, trials: usize, reproducer_dir: &Path) -> anyhow::Result<Outcome> {
    let ids: Vec<TheoremId> = if theorem == "all" {
        TheoremId::ALL.to_vec()
    } else {
        vec![theorem.parse()?]
    };
    let bounds = VerifyBounds {
        budget: settings.budget.clone(),
        jobs: settings.jobs,
        ..VerifyBounds::default()
    };
    let seed = settings.budget.seed;
    let mut reports: Vec<TheoremReport> = Vec::new();
    let mut text = String::new();
    for id in ids {
        let start = Instant::now();
        let r = verify_theorem(id, trials, seed, &bounds)?;
        let _ = writeln!(text, "{r}\n  time: {}", ms(start.elapsed()));
        if let Some(repro) = &r.reproducer {
            let path = reproducer_dir.join(format!("{}-{seed}.reproducer.json", id.name()));
            std::fs::write(&path, formats::to_canonical_string(repro))
                .with_context(|| format!("writing {}", path.display()))?;
            let _ = writeln!(text, "  reproducer written to {}", path.display());
        }
        reports.push(r);
    }
    let success = reports.iter().all(TheoremReport::holds);
    Ok(Outcome {
        json: json!({
            "command": "verify",
            "seed": seed,
            "trials": trials,
            "reports": reports.iter().map(TheoremReport::to_json).collect::<Vec<_>>(),
        }),
        text,
        success,
    })
}

pub fn bench(settings: &Settings, semiring: &str, shape: ProblemShape, instances: usize) -> anyhow::Result<Outcome> {
    let s = load_semiring(semiring)?;
    let mut rng = ChaCha8Rng::seed_from_u64(settings.budget.seed);
    let mut rows = Vec::new();
    let mut text = format!(
        "{} |V|={} |D|={} jobs={}\n{:>8} {:>12} {:>12} {:>12}\n",
        s.describe(),
        shape.vars,
        shape.domain,
        settings.jobs,
        "instance",
        "assignments",
        "constraints",
        "time"
    );
    for i in 0..instances {
        let p = generate_problem(&mut rng, &s, &shape)?;
        let assignments = (shape.domain as u64).saturating_pow(p.support().len() as u32);
        if assignments > settings.budget.max_evaluations {
            bail!("{assignments} assignments exceed the evaluation budget");
        }
        let start = Instant::now();
        let sol = solution_with_jobs(&p, settings.jobs);
        let elapsed = start.elapsed();
        let _ = writeln!(
            text,
            "{i:>8} {assignments:>12} {:>12} {:>12}",
            p.constraints().len(),
            ms(elapsed)
        );
        rows.push(json!({
            "instance": i,
            "assignments": assignments,
            "constraints": p.constraints().len(),
            "optimal": sol.optimal_indices().len(),
            "seconds": elapsed.as_secs_f64(),
        }));
    }
    Ok(Outcome {
        json: json!({"command": "bench", "semiring": s.describe(), "runs": rows}),
        text,
        success: true,
    })
}
