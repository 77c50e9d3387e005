use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kantlab::report::{render_summary, write_run};
use kantlab::{oracle_crosscheck, refine_study, run_suite, HarnessError, RunOptions, SuiteConfig};

#[derive(Parser)]
#[command(name = "kantlab", version, about = "Numerical checks of Sobolev–Kantorovich inequalities on 1D model spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory (overrides the config's output.dir).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Multiplies every pass/fail tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a suite config.
    Check { config: PathBuf },
    /// Rerun a suite at several grid sizes and compare family sups.
    Refine {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        grids: Vec<usize>,
    },
    /// Compare the exact transport solvers with the LP oracle and Sinkhorn.
    Oracle {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Print a summary.json as a table.
    Report {
        #[arg(long)]
        summary: PathBuf,
    },
}

fn out_dir(cli: &Cli, cfg: Option<&SuiteConfig>) -> PathBuf {
    cli.out.clone().unwrap_or_else(|| cfg.map_or_else(|| PathBuf::from("kantlab-out"), |c| c.output.dir.clone()))
}

fn options(cli: &Cli, cfg: &SuiteConfig) -> RunOptions {
    RunOptions { workers: cli.workers.unwrap_or(cfg.workers), tol_scale: cli.tol_scale }
}

fn check(cli: &Cli, path: &Path) -> Result<i32, HarnessError> {
    let cfg = SuiteConfig::from_path(path)?;
    let run = run_suite(&cfg, &options(cli, &cfg))?;
    let dir = out_dir(cli, Some(&cfg));
    write_run(&dir, &run, cfg.checks.len(), &path.display().to_string())?;
    for (i, row) in run.failures() {
        let r = row.report().expect("failures carry reports");
        eprintln!(
            "FAIL row {i}: {} [{}] {}: ratio={:e} slack={:e} tol={:e}",
            row.checker.name(),
            row.source,
            row.case,
            r.ratio,
            r.slack,
            r.tolerance
        );
    }
    for (i, row) in run.errors() {
        if let kantlab::suite::Outcome::Error { message, .. } = &row.outcome {
            eprintln!("ERROR row {i}: {} [{}]: {message}", row.checker.name(), row.source);
        }
    }
    let code = run.exit_code();
    println!(
        "{} rows, {} failed, {} errors; reports in {}",
        run.rows.len(),
        run.failures().count(),
        run.errors().count(),
        dir.display()
    );
    Ok(code)
}

fn refine(cli: &Cli, path: &Path, grids: &[usize]) -> Result<i32, HarnessError> {
    let cfg = SuiteConfig::from_path(path)?;
    let study = refine_study(&cfg, grids, &options(cli, &cfg))?;
    let dir = out_dir(cli, Some(&cfg));
    study.write(&dir)?;
    for l in &study.lines {
        let sups: Vec<String> = l.sups.iter().map(|s| format!("{s:.6e}")).collect();
        println!(
            "{:>3} {:<22} {:<18} {}  move={:.3e}{}",
            l.check,
            l.checker.name(),
            l.source,
            sups.join(" "),
            l.relative_move,
            if l.flagged { "  FLAGGED" } else { "" }
        );
    }
    Ok(study.exit_code())
}

fn oracle(cli: &Cli, seed: u64, cases: usize) -> Result<i32, HarnessError> {
    let study = oracle_crosscheck(seed, cases, cli.workers.unwrap_or(0))?;
    study.write(&out_dir(cli, None))?;
    for ((space, p), d) in study.groups() {
        println!(
            "{space:<6} p={p:<3} cases={:<4} exact-lp={:.3e} sinkhorn-lp={:.3e} (rel {:.3e})",
            d.cases, d.exact_vs_lp, d.sinkhorn_vs_lp, d.sinkhorn_vs_lp_rel
        );
    }
    println!("identical measures: max value {:.3e}", study.identical_max());
    Ok(study.exit_code())
}

fn report(path: &Path) -> Result<i32, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let summary: serde_json::Value = serde_json::from_str(&text)?;
    print!("{}", render_summary(&summary)?);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { config } => check(&cli, config),
        Command::Refine { config, grids } => refine(&cli, config, grids),
        Command::Oracle { seed, cases } => oracle(&cli, *seed, *cases),
        Command::Report { summary } => report(summary),
    };
    let code = result.unwrap_or_else(|e| {
        eprintln!("kantlab: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
