use qhsd_core::betti::{check_periodicity, hard_lefschetz_window, lefschetz_transfer, BettiTable};
use qhsd_core::catalog::RingSpace;
use qhsd_core::exact_rings::TExp;
use qhsd_core::report::{CheckReport, CheckStatus};
use qhsd_core::smalldual::{enumerate_seidel_contributions, SmallDualProfile, DEFAULT_D_MIN};
use serde_json::{json, Map, Value};

use crate::envelope::{demote_failures, Rendered};
use crate::manifold::{Manifold, ManifoldFile};
use crate::ring_ops::{compare_expected, invert_checked, omega_check, with_ring};
use crate::CliError;

fn graded_ranks_check(ranks: &[usize], table: &BettiTable, source: &str, report: &mut CheckReport) {
    let mut bad = Vec::new();
    if table.ranks().len() != 2 * ranks.len() - 1 {
        bad.push(format!("ring has complex dimension {}, table has top degree {:?}", ranks.len() - 1, table.top()));
    }
    for j in 0..table.ranks().len().max(2 * ranks.len() - 1) {
        let want = table.b(j as i64);
        let got = if j % 2 == 0 { ranks.get(j / 2).copied().unwrap_or(0) as u64 } else { 0 };
        if want != got {
            bad.push(format!("degree {j}: ring has {got} basis classes, b_{j} = {want}"));
        }
    }
    report.check(
        "ring.graded_ranks",
        bad.is_empty(),
        if bad.is_empty() { format!("basis ranks match the {source} Betti table") } else { bad.join("; ") },
    );
}

fn ring_checks(m: &Manifold, profile: Option<&SmallDualProfile>, sigma: Option<&BettiTable>, cap: TExp, report: &mut CheckReport) -> Result<Vec<Value>, CliError> {
    let Some(ring) = &m.ring else { return Ok(Vec::new()) };
    let f = &m.file;
    let axioms = ring.check_ring_axioms();
    report.check(
        "ring.axioms",
        axioms.is_ok(),
        if axioms.is_ok() { "no violations".to_string() } else { axioms.to_string().trim_end().to_string() },
    );

    let expected_c = match (f.ring_space, profile) {
        (Some(RingSpace::Ambient), Some(p)) => p.c_x,
        (Some(RingSpace::Section), Some(p)) => p.c_sigma,
        _ => None,
    };
    match expected_c {
        Some(c) => {
            let q = ring.grading().q_degree();
            report.check("ring.q_degree", q == 2 * c, format!("deg q = {q}, 2C = {}", 2 * c));
        }
        None => report.push("ring.q_degree", CheckStatus::Skipped, "needs ring_space and the matching Chern number"),
    }

    let table = match f.ring_space {
        Some(RingSpace::Ambient) => f.betti.as_ref().map(|t| (t, "ambient")),
        Some(RingSpace::Section) => f.section_betti.as_ref().or(sigma).map(|t| (t, "section")),
        None => None,
    };
    match table {
        Some((t, source)) => graded_ranks_check(&ring.graded_ranks(), t, source, report),
        None => report.push("ring.graded_ranks", CheckStatus::Skipped, "no Betti table for this ring"),
    }

    let expect_omega = f.expect_omega_invertible.or((f.k > 0).then_some(true));
    with_ring!(ring, r => omega_check(r, expect_omega, cap, report));

    let mut inverses = Vec::new();
    for (i, c) in f.inverse_checks.iter().enumerate() {
        let prefix = format!("ring.inverse[{i}]");
        let cap_i = TExp::from_integer(c.cap);
        with_ring!(ring, r => {
            let a = crate::expr::parse_element(r, &c.element)?;
            if let Some(inv) = invert_checked(r, &a, cap_i, &prefix, report) {
                compare_expected(r, &inv, &c.expected, cap_i, &format!("{prefix}.expected"), report)?;
                inverses.push(json!({ "element": c.element, "inverse": r.format_element(&inv) }));
            }
        });
    }
    Ok(inverses)
}

fn betti_checks(f: &ManifoldFile, profile: Option<&SmallDualProfile>, report: &mut CheckReport) -> Option<BettiTable> {
    let table = f.betti.as_ref()?;
    let (n, k) = (f.n as usize, f.k as usize);
    let defect_reason = "the defect is 0, so periodicity is not predicted";

    match profile.and_then(|p| p.c_x) {
        Some(c) => match check_periodicity(table, c as usize) {
            Ok(r) => {
                let r = r.prefixed("x");
                report.extend(if f.k > 0 { r } else { demote_failures(r, defect_reason) });
            }
            Err(e) => report.check("x.periodicity", false, e.to_string()),
        },
        None => report.push("x.periodicity", CheckStatus::Skipped, "C_X unknown"),
    }
    report.extend(hard_lefschetz_window(table, n, k).prefixed("x"));

    let sigma = match lefschetz_transfer(table, n, k) {
        Err(e) => {
            report.check("transfer", false, e.to_string());
            return None;
        }
        Ok(partial) => {
            report.check("transfer", true, format!("Sigma: {partial}"));
            partial
        }
    };
    if let Some(given) = &f.section_betti {
        let mut bad = Vec::new();
        if given.ranks().len() != sigma.ranks().len() {
            bad.push(format!("section table has {} entries, transfer gives {}", given.ranks().len(), sigma.ranks().len()));
        }
        for (j, derived) in sigma.ranks().iter().enumerate() {
            if let Some(d) = derived {
                if given.b(j as i64) != *d {
                    bad.push(format!("b_{j}: file {}, transfer {d}", given.b(j as i64)));
                }
            }
        }
        report.check(
            "transfer.section_betti",
            bad.is_empty(),
            if bad.is_empty() { "section Betti table agrees with the transfer".to_string() } else { bad.join("; ") },
        );
    }
    let sigma_table = sigma.complete().or_else(|| f.section_betti.clone());
    match (&sigma_table, profile.and_then(|p| p.c_sigma)) {
        (Some(t), Some(c)) => match check_periodicity(t, c as usize) {
            Ok(r) => {
                let r = r.prefixed("sigma");
                report.extend(if f.k > 0 { r } else { demote_failures(r, defect_reason) });
            }
            Err(e) => report.check("sigma.periodicity", false, e.to_string()),
        },
        _ => report.push("sigma.periodicity", CheckStatus::Skipped, "Sigma table or C_Sigma unknown"),
    }
    sigma_table
}

fn seidel_checks(f: &ManifoldFile, profile: Option<&SmallDualProfile>, report: &mut CheckReport) -> Option<Value> {
    let cone = f.cone_data()?;
    let Some(p) = profile else {
        report.push("seidel", CheckStatus::Skipped, "no valid profile");
        return None;
    };
    let d_min = f.cone.as_ref().and_then(|c| c.d_min).unwrap_or(DEFAULT_D_MIN);
    match enumerate_seidel_contributions(p, &cone, d_min) {
        Err(e) => {
            report.check("seidel", false, e.to_string());
            None
        }
        Ok(out) => {
            report.check("seidel.fiber_term", out.classes.first().is_some_and(|c| c.is_fiber_term()), "F is the first candidate");
            report.push("seidel.summary", CheckStatus::Advisory, crate::commands::seidel_summary(&out, &cone));
            Some(serde_json::to_value(&out).expect("enumeration serializes"))
        }
    }
}

pub fn verify(m: &Manifold, cap: TExp) -> Result<Rendered, CliError> {
    let f = &m.file;
    let mut report = CheckReport::new();
    let mut data = Map::new();
    data.insert("name".into(), json!(f.name));

    let profile = match f.profile() {
        Ok(p) => {
            let fmt = |c: Option<i64>| c.map_or("unknown".to_string(), |c| c.to_string());
            report.check(
                "profile",
                true,
                format!("n = {}, k = {}, C_X = {}, C_Sigma = {}, index bound {}", p.n, p.k, fmt(p.c_x), fmt(p.c_sigma), p.subcritical_index_bound),
            );
            data.insert("profile".into(), serde_json::to_value(&p).expect("profile serializes"));
            Some(p)
        }
        Err(e) => {
            report.check("profile", false, e.to_string());
            None
        }
    };

    let sigma = betti_checks(f, profile.as_ref(), &mut report);
    if let Some(t) = &sigma {
        data.insert("section_betti".into(), json!(t.ranks()));
    }
    let inverses = ring_checks(m, profile.as_ref(), sigma.as_ref(), cap, &mut report)?;
    if !inverses.is_empty() {
        data.insert("inverses".into(), Value::Array(inverses));
    }
    if let Some(s) = seidel_checks(f, profile.as_ref(), &mut report) {
        data.insert("seidel".into(), s);
    }
    if let Some(chart) = &m.chart {
        report.check("chart", true, format!("{}: Jacobian has full rank at the sampled points", chart.name));
    }

    let lines = vec![format!("manifold: {}", f.name)];
    Ok(Rendered::new("verify", report, Value::Object(data), lines))
}
