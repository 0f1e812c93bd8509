//! `treeperc`: percolation experiments on large random trees.
//!
//! Exit codes: 0 on success, 2 on configuration errors, 1 on I/O failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use treeperc::config::{Experiment, ExperimentConfig, OutFormat};
use treeperc::report::{summary_path, write_csv, write_json};
use treeperc::run_experiment;
use treeperc_core::FamilySpec;

#[derive(Parser)]
#[command(
    name = "treeperc",
    about = "Bernoulli bond percolation experiments on five families of random trees",
    version
)]
struct Cli {
    #[command(subcommand)]
    experiment: Cmd,
}

#[derive(Subcommand)]
#[command(rename_all = "snake_case")]
enum Cmd {
    /// Monte Carlo check of the exact moment identity at large n.
    Moments(RunArgs),
    /// Root-cluster proportion C0/n against its limit constant.
    Giant(RunArgs),
    /// Ranked non-root cluster sizes against the Poisson limit law.
    AlmostGiant(RunArgs),
    /// Scaled reduced tree lengths against their limits.
    Hk(RunArgs),
    /// First frozen subtree size of root isolation against the eta law.
    Eta(RunArgs),
    /// Lowest removed-edge height on d-ary trees against its survival law.
    Kappa(RunArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Recursive,
    Scalefree,
    Cayley,
    Dary,
    Star,
}

#[derive(Copy, Clone, PartialEq, Eq, Default, ValueEnum)]
enum FormatArg {
    #[default]
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Tree family.
    #[arg(long, value_enum)]
    family: FamilyArg,

    /// Edge count (the vertex set is {0, ..., n}). Derived from --d and --h
    /// for the dary family, which does not accept it.
    #[arg(long)]
    n: Option<usize>,

    /// Scale-free attachment weight (> -1); scalefree only. Defaults to 0.
    #[arg(long)]
    beta: Option<f64>,

    /// Branching factor (>= 2); dary only.
    #[arg(long)]
    d: Option<u32>,

    /// Height (>= 1); dary only.
    #[arg(long)]
    h: Option<u32>,

    /// Branch exponent in (0, 1); star only.
    #[arg(long)]
    alpha: Option<f64>,

    /// Percolation constant of the regime p = 1 - c/l(n). Ignored by the
    /// eta and hk experiments, which do not percolate.
    #[arg(long, default_value_t = 1.0)]
    c: f64,

    /// Moment order (moments) or number of sampled targets (hk).
    #[arg(long, default_value_t = 1)]
    k: u32,

    /// Number of ranked non-root clusters to record (almost_giant).
    #[arg(long, default_value_t = 1)]
    j: u32,

    /// Number of Monte Carlo trials.
    #[arg(long)]
    trials: usize,

    /// Master seed; fixing it pins the report bytes exactly.
    #[arg(long)]
    seed: u64,

    /// Output format.
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,

    /// Output path. CSV writes the per-trial table here and the summary
    /// table next to it with a .summary suffix; JSON writes one document.
    #[arg(long)]
    out: PathBuf,

    /// Worker threads (default: TREEPERC_THREADS, then all CPUs).
    /// Never affects the report bytes.
    #[arg(long)]
    threads: Option<usize>,
}

fn build_family(args: &RunArgs) -> Result<FamilySpec, String> {
    let need_n = |what: &str| {
        args.n
            .ok_or_else(|| format!("--n is required for the {what} family"))
    };
    let reject = |flag: &str, present: bool, family: &str| {
        if present {
            Err(format!("--{flag} does not apply to the {family} family"))
        } else {
            Ok(())
        }
    };
    match args.family {
        FamilyArg::Recursive => {
            reject("beta", args.beta.is_some(), "recursive")?;
            reject("d", args.d.is_some(), "recursive")?;
            reject("h", args.h.is_some(), "recursive")?;
            reject("alpha", args.alpha.is_some(), "recursive")?;
            Ok(FamilySpec::Recursive { n: need_n("recursive")? })
        }
        FamilyArg::Scalefree => {
            reject("d", args.d.is_some(), "scalefree")?;
            reject("h", args.h.is_some(), "scalefree")?;
            reject("alpha", args.alpha.is_some(), "scalefree")?;
            Ok(FamilySpec::ScaleFree {
                n: need_n("scalefree")?,
                beta: args.beta.unwrap_or(0.0),
            })
        }
        FamilyArg::Cayley => {
            reject("beta", args.beta.is_some(), "cayley")?;
            reject("d", args.d.is_some(), "cayley")?;
            reject("h", args.h.is_some(), "cayley")?;
            reject("alpha", args.alpha.is_some(), "cayley")?;
            Ok(FamilySpec::Cayley { n: need_n("cayley")? })
        }
        FamilyArg::Dary => {
            reject("beta", args.beta.is_some(), "dary")?;
            reject("alpha", args.alpha.is_some(), "dary")?;
            if args.n.is_some() {
                return Err("--n is derived from --d and --h for the dary family".into());
            }
            let d = args.d.ok_or("--d is required for the dary family")?;
            let h = args.h.ok_or("--h is required for the dary family")?;
            Ok(FamilySpec::Dary { d, h })
        }
        FamilyArg::Star => {
            reject("beta", args.beta.is_some(), "star")?;
            reject("d", args.d.is_some(), "star")?;
            reject("h", args.h.is_some(), "star")?;
            let alpha = args.alpha.ok_or("--alpha is required for the star family")?;
            Ok(FamilySpec::Star { n: need_n("star")?, alpha })
        }
    }
}

fn run(experiment: Experiment, args: RunArgs) -> ExitCode {
    let family = match build_family(&args) {
        Ok(f) => f,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let config = ExperimentConfig {
        experiment,
        family,
        c: args.c,
        k: args.k,
        j: args.j,
        trials: args.trials,
        master_seed: args.seed,
        threads: args.threads,
        out_format: match args.format {
            FormatArg::Csv => OutFormat::Csv,
            FormatArg::Json => OutFormat::Json,
        },
        out_path: Some(args.out.clone()),
    };
    let report = match run_experiment(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match config.out_format {
        OutFormat::Csv => write_csv(&report, &args.out).map(|()| {
            format!(
                "{} and {}",
                args.out.display(),
                summary_path(&args.out).display()
            )
        }),
        OutFormat::Json => write_json(&report, &args.out).map(|()| args.out.display().to_string()),
    };
    match written {
        Ok(paths) => {
            for s in &report.summaries {
                println!(
                    "{}: estimate={:.6} theory={:.6} statistic={:.4} p={:.4} (n={})",
                    s.test_name, s.estimate, s.theory, s.statistic, s.p_value, s.n_samples
                );
            }
            println!(
                "wrote {} trials for experiment `{}` to {paths}",
                report.trials.len(),
                config.experiment.name(),
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: failed to write report: {e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.experiment {
        Cmd::Moments(a) => run(Experiment::Moments, a),
        Cmd::Giant(a) => run(Experiment::Giant, a),
        Cmd::AlmostGiant(a) => run(Experiment::AlmostGiant, a),
        Cmd::Hk(a) => run(Experiment::Hk, a),
        Cmd::Eta(a) => run(Experiment::Eta, a),
        Cmd::Kappa(a) => run(Experiment::Kappa, a),
    }
}
