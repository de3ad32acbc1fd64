//! Command-line front end for the `pantsflat` toolkit.
//!
//! Every command produces a JSON report `{command, pass, result, timestamp}`.
//! Exit codes: 0 when the checked property holds, 2 when it fails, 1 on
//! usage or input errors.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pantsflat::flats::{
    admits_handle_multicurve, certify_flat, decompose_template, max_handles, LatticeEmbedding,
    SurfaceDesc, DEFAULT_WINDOW,
};
use pantsflat::pieces::{
    suite_ml, suite_prs, suite_prt, suite_sc, sweep_int, sweep_lk, SuiteReport, DEFAULT_SEED,
};
use pantsflat::shadows::{
    audit_projection_bound, figure2_scenario, generate_paths, run_orthogonality, PathShadow,
};
use pantsflat::slopes::{distance, geodesics, FareyBall, Subgraph};
use pantsflat::Slope;
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "pantsflat",
    version,
    about = "Farey graphs, subsurface projections and flats"
)]
struct Cli {
    #[command(flatten)]
    out: OutputArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format; text renders the JSON report line by line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output. Relative paths are
    /// resolved against PANTSFLAT_OUTPUT_DIR when it is set.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(
        long,
        global = true,
        env = "PANTSFLAT_OUTPUT_DIR",
        hide_env_values = true
    )]
    output_dir: Option<PathBuf>,
    /// Leave the timestamp out so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Distances, geodesics and balls in the Farey graph.
    #[command(subcommand)]
    Farey(Farey),
    /// Exhaustive sweeps and seeded fixture suites for the piece lemmas.
    Lemmas(Lemmas),
    /// Scenario reproductions on handle systems.
    #[command(subcommand)]
    Scenario(Scenario),
    /// Rank arithmetic and flat certificates.
    #[command(subcommand)]
    Flats(Flats),
}

#[derive(Subcommand)]
enum Farey {
    Distance {
        #[arg(allow_hyphen_values = true)]
        a: Slope,
        #[arg(allow_hyphen_values = true)]
        b: Slope,
    },
    Geodesics {
        #[arg(allow_hyphen_values = true)]
        a: Slope,
        #[arg(allow_hyphen_values = true)]
        b: Slope,
        /// Height bound; defaults to twice the larger endpoint height.
        #[arg(long)]
        height: Option<i64>,
    },
    Ball {
        #[arg(long, default_value = "0/1", allow_hyphen_values = true)]
        center: Slope,
        #[arg(long, default_value_t = 2)]
        radius: u32,
        #[arg(long, default_value_t = 4)]
        height: i64,
    },
    /// Checks a subgraph file for convexity and total geodesy in a ball.
    CheckSubgraph {
        file: PathBuf,
        #[arg(long, default_value = "0/1", allow_hyphen_values = true)]
        center: Slope,
        #[arg(long, default_value_t = 3)]
        ball_radius: u32,
        #[arg(long, default_value_t = 4)]
        height: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    Int,
    Lk,
    Prs,
    Prt,
    Ml,
    Sc,
}

#[derive(Args)]
struct Lemmas {
    #[arg(value_enum)]
    lemma: Lemma,
    /// Slope height bound; 0 gives an empty sweep.
    #[arg(long)]
    height: Option<i64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Fixture count for the seeded suites.
    #[arg(long, default_value_t = 500)]
    count: usize,
}

#[derive(Subcommand)]
enum Scenario {
    /// The two-piece edge whose projections are two apart.
    Figure2 {
        #[arg(long, default_value_t = 6)]
        height: i64,
    },
    Orthogonality {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Audits a path shadow file against the projection bound. The file holds
    /// one path, an array of paths, or a report from `scenario paths`.
    Audit { file: PathBuf },
    /// Writes seeded random path shadows for `audit`.
    Paths {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Flats {
    Certify {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
    },
    Rank {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        boundary: u32,
    },
    /// The image of the lattice window, as JSON points or a DOT graph.
    Export {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        window: usize,
    },
}

/// A subgraph file; edges default to all Farey edges among the vertices.
#[derive(Deserialize)]
struct SubgraphFile {
    vertices: BTreeSet<Slope>,
    edges: Option<BTreeSet<(Slope, Slope)>>,
}

enum Body {
    Report { pass: bool, result: Value },
    Dot(String),
}

fn report(pass: bool, result: impl serde::Serialize) -> Result<Body> {
    Ok(Body::Report {
        pass,
        result: serde_json::to_value(result)?,
    })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &PathBuf) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn farey(cmd: Farey, dot: bool) -> Result<Body> {
    match cmd {
        Farey::Distance { a, b } => {
            report(true, json!({ "a": a, "b": b, "distance": distance(a, b) }))
        }
        Farey::Geodesics { a, b, height } => {
            let height = height.unwrap_or(2 * a.height().max(b.height()).max(1));
            let set = geodesics(a, b, height)?;
            if dot {
                return Ok(Body::Dot(set.to_dot()));
            }
            report(true, set)
        }
        Farey::Ball {
            center,
            radius,
            height,
        } => {
            let ball = FareyBall::new(center, radius, height)?;
            if dot {
                return Ok(Body::Dot(ball.to_dot()));
            }
            report(true, ball)
        }
        Farey::CheckSubgraph {
            file,
            center,
            ball_radius,
            height,
        } => {
            let input: SubgraphFile = read_json(&file)?;
            let sub = match input.edges {
                Some(edges) => Subgraph {
                    vertices: input.vertices,
                    edges,
                },
                None => Subgraph::induced(input.vertices),
            };
            let ball = FareyBall::new(center, ball_radius, height)?;
            let convex = ball.is_convex(&sub)?;
            let total = ball.is_totally_geodesic(&sub)?;
            report(
                convex.holds && total.holds,
                json!({
                    "ball": { "center": center, "radius": ball_radius, "height": height },
                    "subgraph": sub,
                    "convex": convex,
                    "totally_geodesic": total,
                }),
            )
        }
    }
}

fn lemmas(cmd: Lemmas) -> Result<Body> {
    let h = |default| cmd.height.unwrap_or(default);
    let r: SuiteReport = match cmd.lemma {
        Lemma::Int => sweep_int(h(10))?,
        Lemma::Lk => sweep_lk(h(12))?,
        Lemma::Prs => suite_prs(h(10))?,
        Lemma::Prt => suite_prt(cmd.count, h(4), cmd.seed)?,
        Lemma::Ml => suite_ml(cmd.count, h(4), cmd.seed)?,
        Lemma::Sc => suite_sc(cmd.count, h(8), cmd.seed)?,
    };
    report(r.pass, r)
}

fn scenario(cmd: Scenario) -> Result<Body> {
    match cmd {
        Scenario::Figure2 { height } => {
            let r = figure2_scenario(height)?;
            report(r.audit.best == 2, r)
        }
        Scenario::Orthogonality { count, seed } => {
            let r = run_orthogonality(count, seed)?;
            report(r.pass, r)
        }
        Scenario::Audit { file } => {
            let mut value: Value = read_json(&file)?;
            if let Some(inner) = value.get_mut("result").map(Value::take) {
                value = inner;
            }
            let paths: Vec<PathShadow> = match value {
                Value::Array(_) => serde_json::from_value(value)?,
                other => vec![serde_json::from_value(other)?],
            };
            let mut audits = Vec::with_capacity(paths.len());
            for (i, p) in paths.iter().enumerate() {
                p.validate().with_context(|| format!("path {i}"))?;
                audits.push(audit_projection_bound(p)?);
            }
            let pass = audits.iter().all(|a| a.pass);
            report(pass, json!({ "paths": audits.len(), "audits": audits }))
        }
        Scenario::Paths {
            count,
            max_len,
            seed,
        } => {
            if max_len == 0 {
                bail!("--max-len must be positive");
            }
            report(true, generate_paths(count, max_len, seed)?)
        }
    }
}

fn flats(cmd: Flats, dot: bool) -> Result<Body> {
    match cmd {
        Flats::Certify { n, window } => {
            let cert = certify_flat(&LatticeEmbedding::standard(n), window)?;
            report(cert.pass, cert)
        }
        Flats::Rank { genus, boundary } => {
            let s = SurfaceDesc::new(genus, boundary)?;
            let t = decompose_template(&s);
            report(
                true,
                json!({
                    "surface": s,
                    "kappa": s.kappa(),
                    "max_handles": max_handles(&s),
                    "pieces": t.pieces(),
                    "template": t,
                    "admits_handle_multicurve": admits_handle_multicurve(&s),
                }),
            )
        }
        Flats::Export { n, window } => {
            let e = LatticeEmbedding::standard(n);
            let dot_text = e.to_dot(window)?;
            if dot {
                return Ok(Body::Dot(dot_text));
            }
            let w = window as i64;
            let mut points = Vec::new();
            let mut x = vec![-w; n];
            loop {
                points.push(json!({ "x": x, "image": e.phi(&x)? }));
                let Some(k) = (0..n).rev().find(|&k| x[k] < w) else {
                    break;
                };
                x[k] += 1;
                x[k + 1..].iter_mut().for_each(|c| *c = -w);
            }
            report(
                true,
                json!({ "n": n, "window": window, "embedding": e, "points": points }),
            )
        }
    }
}

fn command_name(c: &Command) -> String {
    let sub = match c {
        Command::Farey(f) => match f {
            Farey::Distance { .. } => "distance",
            Farey::Geodesics { .. } => "geodesics",
            Farey::Ball { .. } => "ball",
            Farey::CheckSubgraph { .. } => "check-subgraph",
        },
        Command::Lemmas(l) => match l.lemma {
            Lemma::Int => "int",
            Lemma::Lk => "lk",
            Lemma::Prs => "prs",
            Lemma::Prt => "prt",
            Lemma::Ml => "ml",
            Lemma::Sc => "sc",
        },
        Command::Scenario(s) => match s {
            Scenario::Figure2 { .. } => "figure2",
            Scenario::Orthogonality { .. } => "orthogonality",
            Scenario::Audit { .. } => "audit",
            Scenario::Paths { .. } => "paths",
        },
        Command::Flats(f) => match f {
            Flats::Certify { .. } => "certify",
            Flats::Rank { .. } => "rank",
            Flats::Export { .. } => "export",
        },
    };
    let top = match c {
        Command::Farey(_) => "farey",
        Command::Lemmas(_) => "lemmas",
        Command::Scenario(_) => "scenario",
        Command::Flats(_) => "flats",
    };
    format!("{top} {sub}")
}

fn render_text(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_text(&key, item, out);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            for (i, item) in items.iter().enumerate() {
                render_text(&format!("{prefix}[{i}]"), item, out);
            }
        }
        other => {
            out.push_str(&format!("{prefix}: {other}\n"));
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let format = cli.out.format;
    let dot = format == Format::Dot;
    let name = command_name(&cli.command);
    let body = match cli.command {
        Command::Farey(c) => farey(c, dot)?,
        Command::Lemmas(c) => lemmas(c)?,
        Command::Scenario(c) => scenario(c)?,
        Command::Flats(c) => flats(c, dot)?,
    };
    let (text, pass) = match body {
        Body::Dot(text) => (text, true),
        Body::Report { .. } if dot => bail!("`{name}` has no DOT output"),
        Body::Report { pass, result } => {
            let mut envelope = json!({ "command": name, "pass": pass, "result": result });
            if !cli.out.no_timestamp {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH)?.as_secs();
                envelope["timestamp"] = json!(secs);
            }
            let text = if format == Format::Text {
                let mut out = String::new();
                render_text("", &envelope, &mut out);
                out
            } else {
                serde_json::to_string_pretty(&envelope)? + "\n"
            };
            (text, pass)
        }
    };
    match cli.out.output {
        Some(path) => {
            let path = match cli.out.output_dir {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path,
            };
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{text}"),
    }
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
