//! Command-line frontend: verification runner, catalogue emitter,
//! invariant calculator, surface validator, derivation replayer.
//!
//! Exit codes: 0 everything verified / all checks passed, 1 something was
//! refuted or failed a check, 2 usage, parse or model errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twistrel::derivation::{check_derivation, parse_derivation};
use twistrel::dsl::{format_expr, parse_script, Engine};
use twistrel::milnor;
use twistrel::relations::{
    self, statement_script, verify_on, ChainVariant, EngineOutcome, VerificationReport,
};
use twistrel::surfaces::{self, surface_by_name, SurfaceModel};

#[derive(Parser)]
#[command(
    name = "twistrel",
    about = "Exact and homology-level verification of Dehn twist relations on Milnor fiber surfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON (default format can also be set with
    /// TWISTREL_FORMAT=json|text)
    #[arg(long, global = true)]
    json: bool,
    /// Increase verbosity; -vv prints raw groupoid witness words
    #[arg(short, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every assertion in a relation script
    Verify {
        /// Path to a .rel script
        script: PathBuf,
        /// Override the engine for every assertion (homology|exact|both)
        #[arg(long)]
        engine: Option<String>,
    },
    /// Emit a catalogue relation as a script
    Catalog {
        /// Relation family: chain | star | colored | fiber
        family: String,
        /// Chain length for the chain family
        #[arg(long)]
        m: Option<i64>,
        /// Fiber degree for the fiber family
        #[arg(long)]
        k: Option<i64>,
        /// Chain variant: standard | squared_first
        #[arg(long, default_value = "standard")]
        variant: String,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Milnor number of a weighted homogeneous polynomial
    Milnor(MilnorArgs),
    /// Topology of the fiber surface F_{k,k}
    Fiber {
        #[arg(long)]
        k: u32,
    },
    /// Twist counts k(k-1)^n and (k-1)^n
    Count {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Surface model tools
    Surface {
        #[command(subcommand)]
        cmd: SurfaceCmd,
    },
    /// Replay a derivation script step by step
    Derivation {
        /// Path to a .dv script
        script: PathBuf,
    },
}

#[derive(Args)]
struct MilnorArgs {
    /// Polynomial, e.g. "z0^3 + z1^3"
    #[arg(long)]
    poly: String,
    /// Comma-separated integer weights; inferred when omitted
    #[arg(long)]
    weights: Option<String>,
    /// Weighted degree; required with --weights
    #[arg(long)]
    degree: Option<i64>,
}

#[derive(Subcommand)]
enum SurfaceCmd {
    /// Validate a builtin model or a surface definition file
    Validate {
        /// Builtin name (annulus, S_1_1, S_1_2, S_1_3, F_k_k, chain_nbhd_m)
        /// or a path to a JSON definition
        target: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json
        || matches!(
            std::env::var("TWISTREL_FORMAT").as_deref(),
            Ok("json") | Ok("JSON")
        );
    let code = match run(cli.command, json, cli.verbose) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    ExitCode::from(code)
}

fn run(cmd: Command, json: bool, verbose: u8) -> Result<u8, String> {
    match cmd {
        Command::Verify { script, engine } => cmd_verify(&script, engine.as_deref(), json, verbose),
        Command::Catalog {
            family,
            m,
            k,
            variant,
            out,
        } => cmd_catalog(&family, m, k, &variant, out.as_deref()),
        Command::Milnor(args) => cmd_milnor(&args, json),
        Command::Fiber { k } => cmd_fiber(k, json),
        Command::Count { n, k } => cmd_count(n, k, json),
        Command::Surface {
            cmd: SurfaceCmd::Validate { target },
        } => cmd_surface_validate(&target, json),
        Command::Derivation { script } => cmd_derivation(&script, json),
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(
    path: &std::path::Path,
    engine_override: Option<&str>,
    json: bool,
    verbose: u8,
) -> Result<u8, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let script = parse_script(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut statements = script.statements();
    if let Some(tag) = engine_override {
        let engine = Engine::parse(tag).ok_or_else(|| format!("unknown engine `{tag}`"))?;
        for s in &mut statements {
            s.engine = engine;
        }
    }

    // verify assertions concurrently; report in script order
    let results: Vec<Result<VerificationReport, String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = statements
            .iter()
            .map(|stmt| {
                scope.spawn(move || {
                    let model = surface_by_name(&stmt.surface).map_err(|e| e.to_string())?;
                    verify_on(stmt, &model).map_err(|e| e.to_string())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut refuted = 0usize;
    let mut exact_verified = 0usize;
    let mut necessary_only = 0usize;
    let mut rows = Vec::new();
    for (i, res) in results.into_iter().enumerate() {
        match res {
            Ok(report) => {
                if report.refuted() {
                    refuted += 1;
                } else if report.exact.passed() {
                    exact_verified += 1;
                } else {
                    necessary_only += 1;
                }
                rows.push((i, report));
            }
            Err(msg) => return Err(format!("assertion {}: {msg}", i + 1)),
        }
    }

    if json {
        let items: Vec<serde_json::Value> = rows
            .iter()
            .map(|(i, r)| {
                serde_json::json!({
                    "index": i + 1,
                    "surface": r.statement.surface,
                    "lhs": format_expr(&r.statement.lhs),
                    "rhs": format_expr(&r.statement.rhs),
                    "engine": r.statement.engine.as_str(),
                    "homology": outcome_json(&r.homology),
                    "exact": outcome_json(&r.exact),
                    "verified": r.verified(),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "script": path.display().to_string(),
            "assertions": items,
            "verified": refuted == 0,
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        for (i, r) in &rows {
            println!("{}", render_report(*i + 1, r, verbose));
        }
        let mut summary = format!("summary: {exact_verified} verified, {refuted} refuted");
        if necessary_only > 0 {
            let _ = write!(
                summary,
                ", {necessary_only} passed (necessary condition only)"
            );
        }
        println!("{summary}");
    }
    Ok(if refuted > 0 { 1 } else { 0 })
}

fn outcome_json(o: &EngineOutcome) -> serde_json::Value {
    match o {
        EngineOutcome::Pass => serde_json::json!({"status": "pass"}),
        EngineOutcome::Fail { witness } => {
            serde_json::json!({"status": "fail", "witness": witness})
        }
        EngineOutcome::NotRun => serde_json::json!({"status": "not-run"}),
        EngineOutcome::Unsupported { reason } => {
            serde_json::json!({"status": "unsupported", "reason": reason})
        }
    }
}

fn render_report(index: usize, r: &VerificationReport, verbose: u8) -> String {
    let mut line = String::new();
    let verdict = if r.refuted() {
        "refuted"
    } else if r.exact.passed() {
        "verified"
    } else if r.homology.passed() {
        "passed (necessary condition only)"
    } else {
        "inconclusive"
    };
    let _ = write!(
        line,
        "[{index}] {verdict}  {} == {}  [{}]",
        format_expr(&r.statement.lhs),
        format_expr(&r.statement.rhs),
        r.statement.surface
    );
    if verbose >= 1 {
        let _ = write!(
            line,
            "  (homology: {}, exact: {}, {:.1?})",
            r.homology, r.exact, r.wall_time
        );
    }
    if let Some(witness) = r.witness() {
        let mut lines = witness.lines();
        if let Some(first) = lines.next() {
            let _ = write!(line, "\n    witness: {first}");
        }
        if verbose >= 2 {
            for l in lines {
                let _ = write!(line, "\n    {l}");
            }
        }
    }
    line
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

fn cmd_catalog(
    family: &str,
    m: Option<i64>,
    k: Option<i64>,
    variant: &str,
    out: Option<&std::path::Path>,
) -> Result<u8, String> {
    let variant = match variant {
        "standard" => ChainVariant::Standard,
        "squared_first" => ChainVariant::SquaredFirst,
        other => return Err(format!("unknown chain variant `{other}`")),
    };
    let (stmt, header) = match family {
        "chain" => {
            let m = m.ok_or("chain family needs --m")?;
            let stmt = relations::chain_relation(m, variant).map_err(|e| e.to_string())?;
            (stmt, format!("{m}-chain relation"))
        }
        "star" => (relations::star_relation(), "star relation".to_string()),
        "colored" | "cor13" => (
            relations::colored_relation(),
            "colored-curve relation on S_1_3".to_string(),
        ),
        "fiber" | "hkp" => {
            let k = k.ok_or("fiber family needs --k")?;
            let stmt = relations::fiber_relation(k).map_err(|e| e.to_string())?;
            (
                stmt,
                format!("fiber monodromy relation on F_{k},{k} (k-th root of boundary twists)"),
            )
        }
        other => return Err(format!("unknown relation family `{other}`")),
    };
    let script = statement_script(&stmt, &header);
    match out {
        Some(path) => std::fs::write(path, script)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{script}"),
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// invariants
// ---------------------------------------------------------------------------

fn cmd_milnor(args: &MilnorArgs, json: bool) -> Result<u8, String> {
    let poly = milnor::parse_poly(&args.poly).map_err(|e| e.to_string())?;
    let weights = match (&args.weights, args.degree) {
        (Some(ws), Some(d)) => {
            let parsed: Result<Vec<i64>, _> = ws.split(',').map(|s| s.trim().parse()).collect();
            let parsed = parsed.map_err(|e| format!("bad --weights: {e}"))?;
            let data = milnor::WeightData::from_integers(&parsed, d).map_err(|e| e.to_string())?;
            if !milnor::check_weighted_homogeneous(&poly, &data).map_err(|e| e.to_string())? {
                return Err("polynomial is not weighted homogeneous for the given weights".into());
            }
            data
        }
        (Some(_), None) => return Err("--weights requires --degree".into()),
        (None, _) => milnor::infer_weights(&poly)
            .ok_or("cannot infer weights (system inconsistent or underdetermined)")?,
    };
    let mu = milnor::milnor_number(&weights).map_err(|e| e.to_string())?;
    let norm = weights.normalized();
    if json {
        let doc = serde_json::json!({
            "poly": poly.to_string(),
            "weights": norm.weights.iter().map(|w| w.numer().to_string()).collect::<Vec<_>>(),
            "degree": norm.degree.numer().to_string(),
            "mu": mu.to_string(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!("poly: {poly}");
        println!("{norm}");
        println!("mu = {mu}");
    }
    Ok(0)
}

fn cmd_fiber(k: u32, json: bool) -> Result<u8, String> {
    if k < 1 {
        return Err("fiber requires k >= 1".into());
    }
    let f = milnor::fiber_topology(k).map_err(|e| e.to_string())?;
    if json {
        println!("{}", serde_json::to_string(&f).unwrap());
    } else {
        println!(
            "F_{k},{k}: genus {}, boundary components {}, euler {}, H1 rank {}",
            f.genus, f.boundary, f.euler, f.h1_rank
        );
    }
    Ok(0)
}

fn cmd_count(n: u32, k: u32, json: bool) -> Result<u8, String> {
    if n < 1 || k < 1 {
        return Err("count requires n >= 1 and k >= 1".into());
    }
    let total = milnor::twist_count(n, k);
    let per_fiber = milnor::per_fiber_count(n, k);
    if json {
        let doc = serde_json::json!({
            "n": n,
            "k": k,
            "twist_count": total.to_string(),
            "per_fiber_count": per_fiber.to_string(),
        });
        println!("{}", serde_json::to_string(&doc).unwrap());
    } else {
        println!("{total}");
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// surface validate
// ---------------------------------------------------------------------------

fn cmd_surface_validate(target: &str, json: bool) -> Result<u8, String> {
    let model: SurfaceModel = if target.ends_with(".json") || target.contains('/') {
        let text =
            std::fs::read_to_string(target).map_err(|e| format!("cannot read {target}: {e}"))?;
        SurfaceModel::from_json(&text).map_err(|e| e.to_string())?
    } else {
        // builtins are validated on load; reload raw to report per-check
        match surfaces::builtin_json(target) {
            Some(raw) => SurfaceModel::from_json(raw).map_err(|e| e.to_string())?,
            None => surface_by_name(target).map_err(|e| e.to_string())?,
        }
    };
    let report = surfaces::validate(&model);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        for check in &report.checks {
            if check.passed {
                continue;
            }
            println!(
                "FAIL {}: {}",
                check.name,
                check.witness.clone().unwrap_or_default()
            );
        }
        let total = report.checks.len();
        let failed = report.failures().len();
        println!(
            "surface {}: {}/{} checks passed",
            report.surface,
            total - failed,
            total
        );
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// derivation
// ---------------------------------------------------------------------------

fn cmd_derivation(path: &std::path::Path, json: bool) -> Result<u8, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let script = parse_derivation(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let report = check_derivation(&script).map_err(|e| e.to_string())?;
    if json {
        let doc = serde_json::json!({
            "surface": report.surface,
            "initial_verified": report.initial_verified,
            "final_verified": report.final_verified,
            "steps": report.steps.iter().map(|(desc, o)| serde_json::json!({
                "step": desc,
                "outcome": o,
            })).collect::<Vec<_>>(),
            "ok": report.all_ok(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
    } else {
        println!(
            "initial equation: {}",
            if report.initial_verified {
                "verified"
            } else {
                "REFUTED"
            }
        );
        for (i, (desc, outcome)) in report.steps.iter().enumerate() {
            match outcome {
                twistrel::derivation::StepOutcome::Ok => println!("step {}: ok", i + 1),
                twistrel::derivation::StepOutcome::Violation { reason } => {
                    println!("step {}: VIOLATION ({reason})", i + 1);
                    println!("    {desc}");
                }
            }
        }
        println!(
            "final equation: {}",
            if report.final_verified {
                "verified"
            } else {
                "REFUTED"
            }
        );
    }
    Ok(if report.all_ok() { 0 } else { 1 })
}
