//! `galmck`: character tables, Galois–McKay verification and witness
//! checking from the command line.
//!
//! Exit status: 0 when every verdict holds or every witness is valid, 1 when
//! a mathematical failure was found, 2 on usage, input or size errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use galmck_core::catalog;
use galmck_core::config::{self, Config};
use galmck_core::group::GroupRef;
use galmck_core::json::{self, GroupJson, InductiveJson, PipelineJson, TableJson, WitnessJson};
use galmck_core::mckay::{
    batch_verify, check_inductive_witness, verify_mckay, verify_mckay_relative, InductiveVerdict,
    McKayReport, Outcome, ThetaStatus, Verdict,
};
use galmck_core::Error;

#[derive(Parser)]
#[command(name = "galmck", version, about = "Exact Galois–McKay verification for permutation groups")]
struct Cli {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Recorded in the configuration; no computation is randomized.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for batch runs (0 = all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON result to this file ("-" for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the character table of a group as JSON.
    Table {
        /// `group.json` or `catalog:NAME`.
        group: String,
    },
    /// Compare Irr_p'(G) with Irr_p'(N_G(P)) under the Galois group H.
    Verify {
        /// `group.json`, `catalog:NAME`, or `catalog:*` for the whole catalog.
        group: String,
        /// Prime; every prime divisor of |G| when omitted.
        #[arg(short = 'p', long = "prime")]
        p: Option<u64>,
        /// Compare with N_G(P)Z for a normal subgroup Z (`center` or a group file).
        #[arg(long)]
        relative: Option<String>,
        /// With `catalog:*`, skip entries of larger order.
        #[arg(long)]
        max_order: Option<u64>,
    },
    /// Check an inductive-condition witness.
    Inductive { witness: PathBuf },
    /// Re-verify a stored order-relation witness.
    Recheck { witness: PathBuf },
    /// Apply a list of closure constructions to a base witness.
    Pipeline { file: PathBuf },
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Ok,
    Failure,
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

fn run(argv: impl IntoIterator<Item = OsString>) -> u8 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(Status::Ok) => 0,
        Ok(Status::Failure) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(err) if is_mathematical(err) => 1,
                _ => 2,
            }
        }
    }
}

fn is_mathematical(e: &Error) -> bool {
    matches!(
        e,
        Error::Check(_)
            | Error::PreconditionFailed(_)
            | Error::HypothesisFailed(_)
            | Error::ImageMismatch(_)
            | Error::NotHTriple(_)
    )
}

fn setup(cli: &Cli) -> anyhow::Result<()> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    }
    .with_env();
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    config::install(cfg);
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_group(spec: &str) -> anyhow::Result<(GroupRef, String)> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        let entry = catalog::lookup(name).ok_or_else(|| anyhow!("unknown catalog group {name:?}"))?;
        return Ok((entry.materialize()?, entry.name.to_string()));
    }
    let path = Path::new(spec);
    let g: GroupJson = json::from_str(&read(path)?)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    Ok((g.to_group()?, name))
}

fn emit<T: serde::Serialize>(cli: &Cli, value: &T, always: bool) -> anyhow::Result<()> {
    let text = json::to_string(value)?;
    match &cli.json {
        Some(p) if p.as_os_str() == "-" => println!("{text}"),
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None if always => println!("{text}"),
        None => {}
    }
    Ok(())
}

fn execute(cli: &Cli) -> anyhow::Result<Status> {
    setup(cli)?;
    match &cli.command {
        Command::Table { group } => {
            let (g, _) = load_group(group)?;
            emit(cli, &TableJson::from_group(&g)?, true)?;
            Ok(Status::Ok)
        }
        Command::Verify {
            group,
            p,
            relative,
            max_order,
        } => verify(cli, group, *p, relative.as_deref(), *max_order),
        Command::Inductive { witness } => {
            let w: InductiveJson = json::from_str(&read(witness)?)?;
            let report = check_inductive_witness(&w.to_witness()?)?;
            let line = |name: &str, ok: bool, detail: &str| {
                println!("clause ({name}): {} {detail}", if ok { "ok" } else { "FAILED" })
            };
            line("a", report.clause_a.ok, &report.clause_a.detail);
            line("b", report.clause_b.ok, &report.clause_b.detail);
            for t in &report.clause_c {
                let status = match t.status {
                    ThetaStatus::Verified => "ok",
                    ThetaStatus::Failed => "FAILED",
                    ThetaStatus::Missing => "missing",
                };
                println!(
                    "clause (c) theta #{} (degree {}, |upper| = {}, |lower| = {}): {status} {}",
                    t.index, t.degree, t.upper_order, t.lower_order, t.detail
                );
            }
            println!("verdict: {:?}", report.verdict);
            emit(cli, &report, false)?;
            Ok(match report.verdict {
                InductiveVerdict::Valid => Status::Ok,
                _ => Status::Failure,
            })
        }
        Command::Recheck { witness } => {
            let w: WitnessJson = json::from_str(&read(witness)?)?;
            let checked = w.recheck()?;
            println!(
                "valid: |G| = {}, |N| = {}, |H| = {}, |M| = {}, theta(1) = {}",
                checked.upper.group.order(),
                checked.upper.normal.order(),
                checked.lower.group.order(),
                checked.lower.normal.order(),
                checked.upper.theta.degree_int()
            );
            emit(cli, &checked.transcript, false)?;
            Ok(Status::Ok)
        }
        Command::Pipeline { file } => {
            let pipe: PipelineJson = json::from_str(&read(file)?)?;
            let (w, logs) = pipe.run()?;
            for l in &logs {
                println!(
                    "{}: |G| = {}, |H| = {}, theta(1) = {}",
                    l.step, l.upper_order, l.lower_order, l.theta_degree
                );
            }
            emit(cli, &WitnessJson::from_witness(&w), false)?;
            Ok(Status::Ok)
        }
    }
}

fn summary(r: &McKayReport) -> String {
    format!(
        "{} (order {}) p = {}: |Irr_p'(G)| = {}, |Irr_p'({})| = {} (order {}), {}",
        r.group, r.order, r.p, r.global.count, r.local_group, r.local.count, r.local_order, r.verdict
    )
}

fn verify(
    cli: &Cli,
    group: &str,
    p: Option<u64>,
    relative: Option<&str>,
    max_order: Option<u64>,
) -> anyhow::Result<Status> {
    if group == "catalog:*" {
        if relative.is_some() {
            return Err(anyhow!("--relative needs a single group"));
        }
        let limit = max_order.unwrap_or(u64::MAX);
        let primes = p.map(|p| vec![p]);
        let items = batch_verify(|e| e.order <= limit, primes.as_deref());
        let mut status = Status::Ok;
        let mut size_error = false;
        for item in &items {
            match &item.outcome {
                Outcome::Report(r) => {
                    println!("{}", summary(r));
                    if r.verdict != Verdict::Holds {
                        status = Status::Failure;
                    }
                }
                Outcome::Error(e) => {
                    println!("{} p = {}: error: {e}", item.name, item.p);
                    size_error = true;
                }
            }
        }
        emit(cli, &items, false)?;
        if size_error && matches!(status, Status::Ok) {
            return Err(anyhow!("some catalog entries could not be verified"));
        }
        return Ok(status);
    }
    let (g, name) = load_group(group)?;
    let z = match relative {
        None => None,
        Some("center") | Some("centre") => Some(g.center().into_ref()),
        Some(path) => Some(load_group(path)?.0),
    };
    let primes = match p {
        Some(p) => vec![p],
        None => galmck_core::arith::factorize(g.order()).into_iter().map(|(q, _)| q).collect(),
    };
    let mut reports = Vec::new();
    for p in primes {
        let r = match &z {
            Some(z) => verify_mckay_relative(&g, &name, p, z)?,
            None => verify_mckay(&g, &name, p)?,
        };
        println!("{}", summary(&r));
        reports.push(r);
    }
    if reports.len() == 1 {
        emit(cli, &reports[0], false)?;
    } else {
        emit(cli, &reports, false)?;
    }
    Ok(if reports.iter().all(|r| r.verdict == Verdict::Holds) {
        Status::Ok
    } else {
        Status::Failure
    })
}
