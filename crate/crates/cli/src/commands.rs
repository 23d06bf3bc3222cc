use std::path::Path;

use qhsd_core::betti::{
    check_periodicity, cyclic_betti, default_cup_ranks, gysin_circle_bundle, hard_lefschetz_window, lefschetz_transfer,
    oh_exactness_check, BettiTable,
};
use qhsd_core::catalog::{catalog_entry, catalog_ids, presentation_to_string, CatalogEntry};
use qhsd_core::exact_rings::{TExp, DEFAULT_CAP};
use qhsd_core::report::{CheckReport, CheckStatus};
use qhsd_core::smalldual::{
    enumerate_seidel_contributions, hyperplane_defect, make_profile, CurveClassData, SeidelEnumeration, SmallDualError,
    DEFAULT_D_MIN,
};
use qhsd_core::subcrit::{affine_line, bound_report, parabola, run_experiment, segre_p1xp2_chart, AffineChartModel, AffineChartModelJson};
use serde_json::{json, Value};

use crate::args::{BettiCommand, BettiSource, CatalogCommand, InvertArgs, ModelSource, SubcritCommand};
use crate::envelope::Rendered;
use crate::manifold::{load_manifold, ManifoldFile};
use crate::ring_ops::{element_arg, inverse_data, invert_checked, with_ring};
use crate::CliError;

pub const CAP_ENV: &str = "QHSD_TRUNCATION_CAP";

/// The Novikov cap: flag, then environment, then the default.
pub fn resolve_cap(flag: Option<i64>) -> Result<TExp, CliError> {
    let cap = match flag {
        Some(c) => c,
        None => match std::env::var(CAP_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| CliError::Input(format!("{CAP_ENV}={v:?} is not an integer")))?,
            Err(_) => DEFAULT_CAP,
        },
    };
    if cap < 0 {
        return Err(CliError::Input(format!("truncation cap {cap} must be nonnegative")));
    }
    Ok(TExp::from_integer(cap))
}

pub fn invert(args: &InvertArgs) -> Result<Rendered, CliError> {
    let cap = resolve_cap(args.cap)?;
    let ring = match (&args.ring.file, &args.ring.catalog) {
        (Some(path), _) => load_manifold(path)?
            .ring
            .ok_or_else(|| CliError::Input(format!("{}: no ring section", path.display())))?,
        (None, Some(id)) => catalog_entry(id).map_err(|e| CliError::Input(e.to_string()))?.ring,
        (None, None) => return Err(CliError::Input("give --file or --catalog".into())),
    };
    let (class, expr) = (args.element.class.as_deref(), args.element.element.as_deref());
    let mut report = CheckReport::new();
    let (data, lines) = with_ring!(&ring, r => {
        let a = element_arg(r, class, expr)?;
        let inv = invert_checked(r, &a, cap, "", &mut report);
        inverse_data(r, &a, inv.as_ref(), cap)
    });
    Ok(Rendered::new("invert", report, data, lines))
}

fn entry_summary(e: &CatalogEntry) -> Value {
    json!({
        "id": e.id,
        "aliases": e.aliases,
        "space": e.space,
        "coefficients": format!("{:?}", e.ring.coefficient_ring()).to_lowercase(),
        "rank": e.ring.rank(),
        "q_degree": e.ring.grading().q_degree(),
    })
}

pub fn catalog(cmd: &CatalogCommand) -> Result<Rendered, CliError> {
    let entry = |id: &str| catalog_entry(id).map_err(|e| CliError::Input(e.to_string()));
    match cmd {
        CatalogCommand::List => {
            let mut rows = Vec::new();
            let mut lines = Vec::new();
            for id in catalog_ids() {
                let e = entry(&id)?;
                lines.push(format!("{:<16} rank {:>3}  deg q = {:<3} {}", e.id, e.ring.rank(), e.ring.grading().q_degree(), e.ring.name()));
                rows.push(entry_summary(&e));
            }
            Ok(Rendered::new("catalog list", CheckReport::new(), Value::Array(rows), lines))
        }
        CatalogCommand::Show { id } => {
            let e = entry(id)?;
            let mut report = CheckReport::new();
            let axioms = e.ring.check_ring_axioms();
            report.check("ring.axioms", axioms.is_ok(), if axioms.is_ok() { "no violations".into() } else { axioms.to_string() });
            match e.expected_q_degree() {
                Some(q) => report.check("ring.q_degree", e.ring.grading().q_degree() == q, format!("deg q = {}, 2C = {q}", e.ring.grading().q_degree())),
                None => report.push("ring.q_degree", CheckStatus::Skipped, "no profile"),
            }
            let classes: Vec<String> = with_ring!(&e.ring, r => r.classes().keys().cloned().collect());
            let mut data = entry_summary(&e);
            data["graded_ranks"] = json!(e.ring.graded_ranks());
            data["classes"] = json!(classes);
            data["profile"] = json!(e.profile);
            data["notes"] = json!(e.notes);
            let lines = vec![
                format!("{} ({})", e.ring.name(), e.id),
                format!("graded ranks: {:?}", e.ring.graded_ranks()),
                format!("classes: {}", classes.join(", ")),
                e.notes.clone(),
            ];
            Ok(Rendered::new("catalog show", report, data, lines))
        }
        CatalogCommand::Export { id, out } => {
            let e = entry(id)?;
            let text = presentation_to_string(&e.ring);
            let data: Value = serde_json::from_str(&text).expect("presentation is JSON");
            match out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|err| CliError::Input(format!("{}: {err}", path.display())))?;
                    Ok(Rendered::new("catalog export", CheckReport::new(), json!({ "written": path }), vec![format!("wrote {}", path.display())]))
                }
                None => Ok(Rendered::new("catalog export", CheckReport::new(), data, Vec::new()).with_raw(text)),
            }
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>, CliError> {
    s.trim_matches(|c| c == '[' || c == ']' || c == '(' || c == ')')
        .split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| CliError::Input(format!("{x:?} is not a nonnegative integer"))))
        .collect()
}

/// A Betti table with the manifold file it came from, if any.
fn load_betti(src: &BettiSource) -> Result<(BettiTable, Option<ManifoldFile>), CliError> {
    if let Some(r) = &src.ranks {
        return Ok((BettiTable::new(parse_list(r)?), None));
    }
    let path = src.file.as_deref().ok_or_else(|| CliError::Input("give --file or --ranks".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if let Ok(ranks) = serde_json::from_str::<Vec<u64>>(&text) {
        return Ok((BettiTable::new(ranks), None));
    }
    let m = load_manifold(path)?;
    let table = m.file.betti.clone().ok_or_else(|| CliError::Input(format!("{}: no betti section", path.display())))?;
    Ok((table, Some(m.file)))
}

fn need<T>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("{what} is required (flag or manifold file)")))
}

fn file_nk(file: &Option<ManifoldFile>, n: Option<usize>, k: Option<usize>) -> (Option<usize>, Option<usize>) {
    (n.or(file.as_ref().map(|f| f.n as usize)), k.or(file.as_ref().map(|f| f.k as usize)))
}

fn file_cx(file: &Option<ManifoldFile>) -> Option<usize> {
    file.as_ref().and_then(|f| f.profile().ok()).and_then(|p| p.c_x).map(|c| c as usize)
}

fn betti_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

pub fn betti(cmd: &BettiCommand) -> Result<Rendered, CliError> {
    match cmd {
        BettiCommand::Cyclic { source, c } => {
            let (t, file) = load_betti(source)?;
            let c = need(c.or(file_cx(&file)), "--c")?;
            let cy = cyclic_betti(&t, c).map_err(betti_err)?;
            let lines = vec![format!("b~ = {:?} with period {}", cy.values, cy.period)];
            Ok(Rendered::new("betti cyclic", CheckReport::new(), json!(cy), lines))
        }
        BettiCommand::Periodicity { source, c } => {
            let (t, file) = load_betti(source)?;
            let c = need(c.or(file_cx(&file)), "--c")?;
            let report = check_periodicity(&t, c).map_err(betti_err)?;
            let cy = cyclic_betti(&t, c).map_err(betti_err)?;
            Ok(Rendered::new("betti periodicity", report, json!({ "table": t, "cyclic": cy }), vec![format!("b = {:?}", t.ranks())]))
        }
        BettiCommand::Transfer { source, n, k } => {
            let (t, file) = load_betti(source)?;
            let (n, k) = file_nk(&file, *n, *k);
            let (n, k) = (need(n, "--n")?, need(k, "--k")?);
            let sigma = lefschetz_transfer(&t, n, k).map_err(betti_err)?;
            let mut report = CheckReport::new();
            report.check("transfer", true, format!("Sigma: {sigma}"));
            let c_sigma = match &file {
                Some(f) => f.profile().ok().and_then(|p| p.c_sigma),
                None => make_profile(n as i64, k as i64, true).ok().and_then(|p| p.c_sigma),
            };
            match (sigma.complete(), c_sigma) {
                (Some(s), Some(c)) if k > 0 => report.extend(check_periodicity(&s, c as usize).map_err(betti_err)?.prefixed("sigma")),
                _ => report.push("sigma.periodicity", CheckStatus::Skipped, "needs a complete table, k > 0 and C_Sigma"),
            }
            Ok(Rendered::new("betti transfer", report, json!({ "section": sigma.ranks() }), vec![format!("Sigma: {sigma}")]))
        }
        BettiCommand::Window { source, n, k } => {
            let (t, file) = load_betti(source)?;
            let (n, k) = file_nk(&file, *n, *k);
            let report = hard_lefschetz_window(&t, need(n, "--n")?, need(k, "--k")?);
            Ok(Rendered::new("betti window", report, json!({ "table": t }), Vec::new()))
        }
        BettiCommand::Gysin { source, cup_ranks } => {
            let (t, _) = load_betti(source)?;
            let ranks = match cup_ranks {
                Some(s) => parse_list(s)?,
                None => default_cup_ranks(&t),
            };
            let p = gysin_circle_bundle(&t, &ranks).map_err(betti_err)?;
            let lines = vec![format!("circle bundle: {:?} (Euler characteristic {})", p.ranks(), p.euler_characteristic())];
            Ok(Rendered::new("betti gysin", CheckReport::new(), json!({ "cup_ranks": ranks, "bundle": p }), lines))
        }
        BettiCommand::Oh { source, maslov, n, k } => {
            let (t, file) = load_betti(source)?;
            let (n, k) = file_nk(&file, *n, *k);
            let nk = n.zip(k);
            let maslov = need(maslov.or(nk.map(|(n, k)| n + k)), "--maslov")?;
            let report = oh_exactness_check(&t, maslov, nk).map_err(betti_err)?;
            Ok(Rendered::new("betti oh", report, json!({ "table": t, "maslov": maslov }), Vec::new()))
        }
    }
}

pub fn defect(n: i64, k: i64, b2_is_1: bool) -> Result<Rendered, CliError> {
    let mut report = CheckReport::new();
    match make_profile(n, k, b2_is_1) {
        Ok(p) => {
            let fmt = |c: Option<i64>| c.map_or("not determined".to_string(), |c| c.to_string());
            report.check("profile", true, "parity and range constraints hold");
            let lines = vec![
                format!("n = {n}, def = {k}, def(Sigma) = {}", hyperplane_defect(k)),
                format!("C_X = {}, C_Sigma = {}", fmt(p.c_x), fmt(p.c_sigma)),
                format!("2C_X = {}, deg q on Sigma = {}", fmt(p.c_x.map(|c| 2 * c)), fmt(p.q_degree_sigma())),
                format!("Morse indices on X \\ Sigma are at most {}", p.subcritical_index_bound),
            ];
            let mut data = serde_json::to_value(&p).expect("profile serializes");
            data["section_defect"] = json!(hyperplane_defect(k));
            Ok(Rendered::new("defect", report, data, lines))
        }
        Err(e @ SmallDualError::ParityViolation { .. }) => {
            report.check("profile", false, e.to_string());
            Ok(Rendered::new("defect", report, json!({ "n": n, "k": k }), Vec::new()))
        }
        Err(e) => Err(CliError::Input(e.to_string())),
    }
}

/// One-line summary of an enumeration.
pub fn seidel_summary(out: &SeidelEnumeration, cone: &CurveClassData) -> String {
    if out.fiber_term_only() {
        return "F term only; S = [ω]T".into();
    }
    let mut parts = vec!["F".to_string()];
    parts.extend(out.classes[1..].iter().map(|c| format!("{} (q^{} T^{})", c.describe(cone), c.q_exp, c.t_exp)));
    let mut s = format!("{} candidates: {}", out.classes.len(), parts.join("; "));
    if !out.rejected.is_empty() {
        s.push_str(&format!("; {} rejected for a fractional q-exponent", out.rejected.len()));
    }
    s
}

pub fn seidel(path: &Path, d_min: Option<i64>) -> Result<Rendered, CliError> {
    let m = load_manifold(path)?;
    let cone = m.file.cone_data().ok_or_else(|| CliError::Input(format!("{}: no cone section", path.display())))?;
    let profile = m.file.profile()?;
    let d_min = d_min.or(m.file.cone.as_ref().and_then(|c| c.d_min)).unwrap_or(DEFAULT_D_MIN);
    let out = enumerate_seidel_contributions(&profile, &cone, d_min).map_err(|e| CliError::Input(e.to_string()))?;
    let mut report = CheckReport::new();
    report.check("fiber_term", out.classes.first().is_some_and(|c| c.is_fiber_term()), "F is the first candidate");
    if out.short_circuit {
        report.push("nef_criterion", CheckStatus::Advisory, "c_1 - h >= 2 on every generator; no search needed");
    }
    let summary = seidel_summary(&out, &cone);
    let mut lines = vec![summary.clone()];
    for c in &out.classes[1..] {
        lines.push(format!("  {}: c_1(A) = {}, c_1^v = {}, q^{} T^{}", c.describe(&cone), c.c1_value, c.vertical_chern, c.q_exp, c.t_exp));
    }
    let data = json!({ "d_min": d_min, "summary": summary, "enumeration": out });
    Ok(Rendered::new("seidel", report, data, lines))
}

fn builtin_model(name: &str) -> Result<AffineChartModel, CliError> {
    match name {
        "segre" | "segre_p1xp2" => Ok(segre_p1xp2_chart()),
        "line" => Ok(affine_line()),
        "parabola" => Ok(parabola()),
        other => Err(CliError::Input(format!("unknown built-in model {other:?} (segre, line, parabola)"))),
    }
}

fn load_model(src: &ModelSource) -> Result<AffineChartModel, CliError> {
    if let Some(name) = &src.builtin {
        return builtin_model(name);
    }
    if let Some(path) = &src.file {
        return load_manifold(path)?.chart.ok_or_else(|| CliError::Input(format!("{}: no chart section", path.display())));
    }
    let path = src.model.as_deref().ok_or_else(|| CliError::Input("give --model, --builtin or --file".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let json: AffineChartModelJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Schema(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())))?;
    let model = json.to_model().map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    model.validate(16, 0).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    Ok(model)
}

pub fn subcrit(cmd: &SubcritCommand) -> Result<Rendered, CliError> {
    let SubcritCommand::Run { source, starts, seed, seeds, max_resamples } = cmd;
    let model = load_model(source)?;
    if *seeds == 0 || *starts == 0 {
        return Err(CliError::Input("--seeds and --starts must be positive".into()));
    }
    let runs = (*seed..*seed + *seeds)
        .map(|s| run_experiment(&model, *starts, s, *max_resamples))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let report = bound_report(&runs);
    let converged: usize = runs.iter().map(|r| r.records.len()).sum();
    let lines = vec![
        format!("model {} (n = {}, k = {}), {} seed(s) x {} starts", model.name, model.n, model.k, seeds, starts),
        format!(
            "{converged} critical points; max index {}, max rank G {}",
            runs.iter().map(|r| r.max_index()).max().unwrap_or(0),
            runs.iter().map(|r| r.max_g_rank()).max().unwrap_or(0)
        ),
    ];
    let data = json!({ "model": model.to_json(), "runs": runs });
    Ok(Rendered::new("subcrit run", report, data, lines).with_seed(*seed))
}
