//! Acceptance criteria, one line each. Exits nonzero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use pantsflat::flats::{
    certify_flat, max_handles, subproduct_total_geodesy, LatticeEmbedding, ProductGraph,
    ProductVertex, SurfaceDesc, DEFAULT_WINDOW,
};
use pantsflat::orbifold::intersection_number;
use pantsflat::pieces::{
    suite_ml, suite_prs, suite_prt, suite_sc, sweep_int, sweep_lk, SuiteReport, DEFAULT_SEED,
};
use pantsflat::shadows::{
    audit_projection_bound, figure2_scenario, generate_paths, run_orthogonality,
};
use pantsflat::slopes::{distance, FareyBall, HeightGraph, Subgraph};
use pantsflat::{PieceKind, PieceObject, Slope};
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn farey_oracle() -> Outcome {
    let low = HeightGraph::new(30).vertices().to_vec();
    let mut pairs = 0u64;
    for oracle_height in [60, 120] {
        let g = HeightGraph::new(oracle_height);
        let bad: Vec<String> = low
            .par_iter()
            .flat_map_iter(|&a| {
                let dist = g.bfs(a).expect("source in graph");
                low.iter()
                    .filter_map(|&b| {
                        let got = dist[g.index_of(b).expect("target in graph")];
                        (got != distance(a, b)).then(|| format!("{a} {b} bfs={got}"))
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        if let Some(first) = bad.first() {
            return Err(format!(
                "{} mismatches at oracle height {oracle_height}, first {first}",
                bad.len()
            ));
        }
        pairs += (low.len() * low.len()) as u64;
    }
    Ok(format!(
        "{} slopes, {pairs} pairs at oracle heights 60 and 120, 0 mismatches",
        low.len()
    ))
}

fn interval_example() -> Outcome {
    let ball = FareyBall::new(Slope::ZERO, 3, 4).map_err(|e| e.to_string())?;
    let lo: Slope = "-1/1".parse().unwrap();
    let hi: Slope = "1/1".parse().unwrap();
    let interval = Subgraph::interval(&ball, lo, hi);
    let convex = ball.is_convex(&interval).map_err(|e| e.to_string())?;
    let total = ball
        .is_totally_geodesic(&interval)
        .map_err(|e| e.to_string())?;
    let expected = vec![lo, Slope::INFINITY, hi];
    check(
        convex.holds && !total.holds && total.witness.as_ref() == Some(&expected),
        "convex, not totally geodesic, witness (-1/1, 1/0, 1/1)".into(),
        format!(
            "convex={} total={} witness={:?}",
            convex.holds, total.holds, total.witness
        ),
    )
}

fn intersection_laws() -> Outcome {
    let all = HeightGraph::new(12).vertices().to_vec();
    let bad: Vec<String> = all
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &a)| {
            let mut out = Vec::new();
            for &b in &all[i..] {
                let det = a.det(b).unsigned_abs() as u64;
                for (piece, factor) in [
                    (PieceKind::OneHoledTorus, 1),
                    (PieceKind::FourHoledSphere, 2),
                ] {
                    let got = intersection_number(
                        &PieceObject::curve(piece, a),
                        &PieceObject::curve(piece, b),
                    )
                    .expect("curves are valid");
                    if got != factor * det {
                        out.push(format!("{piece} {a} {b}: {got}"));
                    }
                }
            }
            out
        })
        .collect();
    let pairs = all.len() * (all.len() + 1) / 2;
    check(
        bad.is_empty(),
        format!("{pairs} slope pairs in both pieces, 0 exceptions"),
        format!(
            "{} exceptions, first {}",
            bad.len(),
            bad[..1.min(bad.len())].join("")
        ),
    )
}

fn summary(r: &SuiteReport) -> String {
    format!(
        "{} h={} cases={} failures={}",
        r.suite,
        r.height,
        r.cases,
        r.failures.len()
    )
}

fn suite(r: SuiteReport) -> Outcome {
    if r.pass {
        Ok(summary(&r))
    } else {
        Err(format!(
            "{}\n{}",
            summary(&r),
            serde_json::to_string_pretty(&r.failures).unwrap()
        ))
    }
}

fn instance_suites() -> Outcome {
    let reports = [
        suite_prs(10),
        suite_prt(500, 4, DEFAULT_SEED),
        suite_ml(500, 4, DEFAULT_SEED),
        suite_sc(500, 8, DEFAULT_SEED),
    ]
    .into_iter()
    .collect::<Result<Vec<_>, _>>()
    .map_err(|e| e.to_string())?;
    let mut lines = Vec::new();
    let mut failed = false;
    for r in &reports {
        if r.cases < 500 {
            failed = true;
            lines.push(format!("{}: only {} fixtures", r.suite, r.cases));
        }
        failed |= !r.pass;
        lines.push(summary(r));
    }
    let text = lines.join("; ");
    if !failed {
        return Ok(text);
    }
    let dumps: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass)
        .flat_map(|r| {
            r.failures
                .iter()
                .map(move |f| format!("  {} fixture {f}", r.suite))
        })
        .collect();
    Err(format!("{text}\n{}", dumps.join("\n")))
}

fn figure2() -> Outcome {
    let r = figure2_scenario(6).map_err(|e| e.to_string())?;
    check(
        r.audit.best == 2,
        format!("min projection distance 2 over {} choices", r.audit.choices),
        format!("min projection distance {}", r.audit.best),
    )
}

fn orthogonality() -> Outcome {
    let r = run_orthogonality(200, DEFAULT_SEED).map_err(|e| e.to_string())?;
    let total: usize = r.mixes.iter().map(|m| m.count).sum();
    let passed: usize = r.mixes.iter().map(|m| m.passed).sum();
    check(
        r.pass && passed == total && total >= 200,
        format!("{passed}/{total} adjacent pairs project to v0"),
        format!("{passed}/{total} adjacent pairs project to v0"),
    )
}

fn path_audit() -> Outcome {
    let paths = generate_paths(500, 8, DEFAULT_SEED).map_err(|e| e.to_string())?;
    let mut worst = Vec::new();
    for p in &paths {
        let a = audit_projection_bound(p).map_err(|e| e.to_string())?;
        if !a.pass {
            worst.push(serde_json::to_string(p).unwrap());
        }
    }
    let f2 = figure2_scenario(6).map_err(|e| e.to_string())?;
    let non_contractive = !f2.audit.pass && f2.audit.length == 1 && f2.audit.best == 2;
    check(
        worst.is_empty() && non_contractive,
        format!(
            "{} generated paths within the bound; two-piece example edge is non-contractive (length 1, distance 2)",
            paths.len()
        ),
        format!(
            "{} violating paths, two-piece example non-contractive={non_contractive}\n{}",
            worst.len(),
            worst.join("\n")
        ),
    )
}

fn flats() -> Outcome {
    let mut lines = Vec::new();
    for n in 1..=3 {
        let cert = certify_flat(&LatticeEmbedding::standard(n), DEFAULT_WINDOW)
            .map_err(|e| e.to_string())?;
        if !cert.pass {
            return Err(format!("n={n} failed: {:?}", cert.witness));
        }
        lines.push(format!("n={n} pairs={}", cert.pairs_checked));
    }
    let radius = 3;
    let g = ProductGraph::new(2, 3).map_err(|e| e.to_string())?;
    let verts = g.factor().vertices().to_vec();
    let mut checked = 0;
    for base in verts.iter().step_by(5) {
        let base = ProductVertex::new(vec![*base, *base]);
        let r = subproduct_total_geodesy(&g, 1, &base, radius).map_err(|e| e.to_string())?;
        if !r.holds {
            return Err(format!("factor slice at {base} fails: {:?}", r.witness));
        }
        checked += r.checked_pairs;
    }
    lines.push(format!("factor slices R={radius} pairs={checked}"));
    let handles = max_handles(&SurfaceDesc::new(7, 0).map_err(|e| e.to_string())?);
    lines.push(format!("max handles S(7,0)={handles}"));
    check(handles == 9, lines.join("; "), lines.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 farey oracle equivalence", farey_oracle),
        ("2 convex interval not totally geodesic", interval_example),
        ("3 intersection laws", intersection_laws),
        ("4 seam projection identities", || {
            suite(sweep_int(10).map_err(|e| e.to_string())?)
        }),
        ("5 endpoint linking", || {
            suite(sweep_lk(12).map_err(|e| e.to_string())?)
        }),
        ("6 instance suites prs/prt/ml/sc", instance_suites),
        ("7 two-piece example at distance 2", figure2),
        ("8 orthogonality", orthogonality),
        ("9 projection bound audit", path_audit),
        ("10 flats", flats),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {}/10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
