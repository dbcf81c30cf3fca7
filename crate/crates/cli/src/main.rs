mod render;
mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use kumtors::cohomology::compute;
use kumtors::reductions::{derive_table_cell, VerifyOptions};
use kumtors::{parse_group, parse_module, Backend, Certificate, Config, Error, Result, Table};

#[derive(Parser)]
#[command(name = "kumtors", version, about = "Integral group cohomology and Kummer torsion bounds")]
struct Cli {
    /// Scale factor for the default size limits.
    #[arg(long, global = true)]
    budget: Option<f64>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for table cells.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized self-checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Bar,
    Pres,
    Uct,
    Auto,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WhichTable {
    Main,
    Trivial,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Compute H^p(G, M) for a module expression.
    Compute {
        #[arg(long)]
        group: String,
        #[arg(long)]
        module: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "auto")]
        backend: BackendArg,
    },
    /// Derive the cohomology tables for a range of n.
    Table {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "both")]
        which: WhichTable,
        /// Write one certificate per cell into this directory.
        #[arg(long)]
        emit_certificates: Option<PathBuf>,
    },
    /// Annihilator of H^3(Kum_{n-1}(A), Z)_tors.
    Bound {
        #[arg(long)]
        n: usize,
        /// Write the certificate to this file.
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
    },
    /// Re-verify a certificate file.
    VerifyCert {
        file: PathBuf,
        /// Recompute backend leaves and exact sequences.
        #[arg(long)]
        recompute: bool,
    },
    /// Quick consistency checks; `--bench` adds a timing report.
    Selftest {
        #[arg(long)]
        bench: bool,
        /// Random SNF oracle cases.
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) | Error::Infeasible(_) => 2,
        Error::Verification(_) | Error::BrokenDifferential(_) => 1,
        _ => 3,
    }
}

fn load_config(cli: &Cli) -> Result<Config> {
    let file = match &cli.config {
        Some(p) => Config::from_file(p)?,
        None => Config::default(),
    };
    let flags = Config { budget_scale: cli.budget, threads: cli.threads, seed: cli.seed, ..Default::default() };
    Ok(file.merged(&flags))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: &Cli) -> Result<()> {
    let config = load_config(cli)?;
    if let Some(t) = config.threads {
        // only fails if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match &cli.command {
        Command::Compute { group, module, degree, backend } => {
            let g = parse_group(group)?;
            let m = parse_module(&g, module).inspect_err(|e| {
                if let Error::Parse { pos, .. } = e {
                    eprintln!("{module}\n{}^", " ".repeat(*pos));
                }
            })?;
            let backend = match backend {
                BackendArg::Bar => Backend::Bar,
                BackendArg::Pres => Backend::Pres,
                BackendArg::Uct => Backend::Uct,
                BackendArg::Auto => Backend::Auto,
            };
            let budget = config.budget();
            let r = compute(&m, *degree, backend, &budget)?;
            if cli.json {
                print_json(&json!({
                    "group": g.name(),
                    "module": module,
                    "degree": degree,
                    "value": r.group.to_json(),
                    "display": r.group.to_string(),
                    "backend": r.backend,
                    "free_rank_method": r.free_rank_method,
                    "matrices": r.matrices,
                    "seconds": r.seconds,
                    "budget": { "max_rows": budget.max_rows, "max_nnz": budget.max_nnz },
                }));
            } else {
                println!("H^{degree}({}, {module}) = {}", g.name(), r.group);
                println!("  backend {:?}, free rank {:?}, {:.3}s", r.backend, r.free_rank_method, r.seconds);
                for (rows, cols, nnz) in &r.matrices {
                    println!("  reduced {rows} x {cols} with {nnz} nonzeros");
                }
            }
            Ok(())
        }
        Command::Table { n_min, n_max, which, emit_certificates } => {
            if n_min < &3 || n_min > n_max {
                return Err(Error::invalid(format!("need 3 <= n-min <= n-max, got {n_min}..{n_max}")));
            }
            let opts = config.engine_options();
            let tables: Vec<Table> = match which {
                WhichTable::Main => vec![Table::Main],
                WhichTable::Trivial => vec![Table::Trivial],
                WhichTable::Both => vec![Table::Trivial, Table::Main],
            };
            let jobs: Vec<(Table, usize, usize)> = tables
                .iter()
                .flat_map(|&t| (1..=3).flat_map(move |p| (*n_min..=*n_max).map(move |n| (t, n, p))))
                .collect();
            let results: Vec<_> = jobs
                .par_iter()
                .map(|&(t, n, p)| derive_table_cell(n, p, t, &opts).map(|r| (t, n, p, r)))
                .collect::<Result<_>>()?;
            if let Some(dir) = emit_certificates {
                std::fs::create_dir_all(dir)?;
                for (t, n, p, (_, cert)) in &results {
                    let name = format!("{}_n{n}_p{p}.json", render::table_name(*t));
                    std::fs::write(dir.join(name), cert.to_json_pretty())?;
                }
            }
            let cells: Vec<render::Row> = results
                .into_iter()
                .map(|(t, n, p, (c, cert))| (t, n, p, c, cert.provenance_summary()))
                .collect();
            if cli.json {
                let v: Vec<_> = cells
                    .iter()
                    .map(|(t, n, p, c, src)| json!({ "table": t, "n": n, "p": p, "cell": c, "sources": src }))
                    .collect();
                print_json(&json!(v));
            } else {
                for t in tables {
                    print!("{}", render::table(t, *n_min, *n_max, &cells));
                }
            }
            Ok(())
        }
        Command::Bound { n, emit_certificate } => {
            let r = kumtors::annihilator(*n, &config.engine_options())?;
            if let Some(p) = emit_certificate {
                std::fs::write(p, r.certificate.to_json_pretty())?;
            }
            if cli.json {
                print_json(&serde_json::to_value(&r)?);
            } else {
                print!("{}", render::bound(&r));
            }
            Ok(())
        }
        Command::VerifyCert { file, recompute } => verify_file(file, *recompute, &config, cli.json),
        Command::Selftest { bench, cases } => selftest::run(&config, *cases, *bench, cli.json),
    }
}

fn verify_file(file: &Path, recompute: bool, config: &Config, as_json: bool) -> Result<()> {
    let text = std::fs::read_to_string(file)?;
    let cert = Certificate::from_json(&text).map_err(|e| match e {
        Error::Json(j) => Error::Verification(format!("malformed certificate: {j}")),
        e => e,
    })?;
    let report = cert.verify(&VerifyOptions { recompute, budget: config.budget() })?;
    if as_json {
        print_json(&json!({ "ok": true, "report": report }));
    } else {
        let axioms: Vec<&str> = report.axioms.iter().map(|a| a.name()).collect();
        println!("ok: {} steps verified, {} recomputed", report.steps, report.recomputed);
        if !axioms.is_empty() {
            println!("axioms: {}", axioms.join(", "));
        }
        if let Some(s) = cert.conclusion_step() {
            match &s.output {
                kumtors::reductions::Output::Cell(c) => println!("conclusion: {c}"),
                kumtors::reductions::Output::Fact(f) => println!("conclusion: {}", f.statement),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
