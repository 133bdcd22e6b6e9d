use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zoquad_core::kl1d::{initial_gap, kl_search_1d, NoisyFunction1d};
use zoquad_core::theory::{ascending, hard_instance, lower_bound_witness, predicted_regret, random_signs};
use zoquad_lab::config::{parse_noise, parse_reals, TestFunction};
use zoquad_lab::{
    config_eigenvalues, run_experiment, summarize, write_outputs, Algorithm, ExperimentConfig, LabError, OutputPaths,
    Result, Status, SummaryStats,
};

#[derive(Parser)]
#[command(name = "zoquad", version, about = "Zeroth-order quadratic optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Suppress progress and tables on stdout.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one config file.
    Run(RunArgs),
    /// Run a config over a replacement budget list.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated budgets, e.g. 1e4,4e4,1.6e5.
        #[arg(long, value_delimiter = ',', required = true)]
        budgets: Vec<String>,
    },
    /// Print regret predictions for given eigenvalues.
    Predict {
        #[arg(long)]
        eigenvalues: String,
        #[arg(long, value_delimiter = ',', required = true)]
        budgets: Vec<String>,
    },
    /// Emit a hard-set minimizer in the eigenbasis.
    HardInstance {
        #[arg(long)]
        eigenvalues: String,
        #[arg(long)]
        budget: String,
        /// Sign seed; all-positive signs when omitted.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the 1D KL search on a named test function.
    Kl1d {
        #[arg(long, default_value = "quartic")]
        function: String,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value = "gaussian")]
        noise: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: u32,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Directory for records.csv and summary.json, overriding the config paths.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let quiet = cli.quiet;
    match cli.command {
        Command::Run(args) => run(args, None, quiet),
        Command::Sweep { run: args, budgets } => run(args, Some(parse_budgets(&budgets)?), quiet),
        Command::Predict { eigenvalues, budgets } => predict(&eigenvalues, &parse_budgets(&budgets)?),
        Command::HardInstance { eigenvalues, budget, seed } => {
            let budget = parse_budgets(&[budget])?[0];
            emit_hard_instance(&eigenvalues, budget, seed)
        }
        Command::Kl1d {
            function,
            eps,
            delta,
            noise,
            seed,
            reps,
        } => kl1d(&function, eps, delta, &noise, seed, reps, quiet),
    }
}

fn config_error(message: impl Into<String>) -> LabError {
    LabError::Config(message.into())
}

fn parse_budgets(items: &[String]) -> Result<Vec<u64>> {
    items
        .iter()
        .map(|s| {
            let s = s.trim();
            s.parse::<u64>().or_else(|_| match s.parse::<f64>() {
                Ok(x) if x >= 0.0 && x.fract() == 0.0 && x < u64::MAX as f64 => Ok(x as u64),
                _ => Err(config_error(format!("bad budget `{s}`"))),
            })
        })
        .collect()
}

fn parse_eigenvalues(s: &str) -> Result<Vec<f64>> {
    parse_reals(s).map_err(config_error)
}

fn run(args: RunArgs, budgets: Option<Vec<u64>>, quiet: bool) -> Result<()> {
    let mut config = ExperimentConfig::from_path(&args.config)?;
    if let Some(b) = budgets {
        config.budgets = b;
    }
    if let Some(seed) = args.seed {
        config.base_seed = seed;
    }
    if let Some(reps) = args.reps {
        config.replications = reps;
    }
    config.validate()?;

    let mut paths = OutputPaths {
        records: config.records_path.clone(),
        summary: config.summary_path.clone(),
    };
    if let Some(dir) = &args.out {
        paths.records = Some(dir.join("records.csv"));
        paths.summary = Some(dir.join("summary.json"));
    }

    let records = run_experiment(&config)?;
    let failed = records.iter().filter(|r| r.status == Status::Failed).count();
    if failed > 0 && !quiet {
        eprintln!("warning: {failed} of {} runs failed", records.len());
    }
    let stats = if config.algorithm != Algorithm::Kl1d && config.replications >= 2 {
        Some(summarize(&records, &config_eigenvalues(&config)?)?)
    } else {
        None
    };
    write_outputs(&records, stats.as_ref(), &paths)?;
    if !quiet {
        match &stats {
            Some(s) => print_summary(s),
            None => {
                let ok: Vec<&_> = records.iter().filter(|r| r.status == Status::Ok).collect();
                let mean = ok.iter().map(|r| r.regret).sum::<f64>() / ok.len().max(1) as f64;
                println!("{} runs, mean regret {mean:.6e}", records.len());
            }
        }
    }
    Ok(())
}

fn print_summary(stats: &SummaryStats) {
    println!(
        "{:>10} {:>13} {:>11} {:>11} {:>9} {:>13}",
        "T", "mean_regret", "stderr", "regret*T", "ratio", "witness"
    );
    for r in &stats.rows {
        let witness = r.witness_floor.map_or("-".to_string(), |w| format!("{w:.4e}"));
        println!(
            "{:>10} {:>13.4e} {:>11.3e} {:>11.4} {:>9.3} {:>13}",
            r.budget, r.mean_regret, r.stderr, r.regret_times_t, r.ratio, witness
        );
    }
}

fn predict(eigenvalues: &str, budgets: &[u64]) -> Result<()> {
    let eigs = ascending(&parse_eigenvalues(eigenvalues)?);
    println!("{:>12} {:>4} {:>14} {:>14} {:>14}", "T", "k*", "predicted", "constant/T", "witness");
    for &t in budgets {
        let p = predicted_regret(&eigs, t)?;
        let witness = lower_bound_witness(&eigs, t).map_or("-".to_string(), |w| format!("{w:.6e}"));
        println!(
            "{:>12} {:>4} {:>14.6e} {:>14.6e} {:>14}",
            t,
            p.k_star,
            p.predicted_regret,
            p.leading_constant / t as f64,
            witness
        );
    }
    Ok(())
}

fn emit_hard_instance(eigenvalues: &str, budget: u64, seed: Option<u64>) -> Result<()> {
    let eigs = parse_eigenvalues(eigenvalues)?;
    let signs = match seed {
        Some(s) => random_signs(&mut ChaCha8Rng::seed_from_u64(s), eigs.len()),
        None => vec![1; eigs.len()],
    };
    let h = hard_instance(&eigs, budget, &signs)?;
    let line: Vec<String> = h.minimizer.iter().map(|v| format!("{v:?}")).collect();
    println!("{}", line.join(","));
    Ok(())
}

fn kl1d(function: &str, eps: f64, delta: f64, noise: &str, seed: u64, reps: u32, quiet: bool) -> Result<()> {
    let f = TestFunction::parse(function).ok_or_else(|| config_error(format!("unknown function `{function}`")))?;
    let noise = parse_noise(noise).map_err(config_error)?;
    let problem = f.problem();
    let g0 = initial_gap(problem.c1, problem.c2, problem.alpha)?;
    let mut successes = 0;
    for rep in 0..reps {
        let rep_seed = zoquad_lab::seed::mix64(seed, 0, u64::from(rep));
        let mut oracle = NoisyFunction1d::new(move |x| f.eval(x), noise, rep_seed)?;
        let out = kl_search_1d(&problem, &mut oracle, eps, delta)?;
        let gap = f.eval(out.x);
        if gap <= eps {
            successes += 1;
        }
        if !quiet {
            println!("x = {:?}  f(x) - f* = {gap:.3e}  calls = {}  rounds = {}", out.x, out.calls, out.iterations);
        }
    }
    if !quiet {
        println!("initial gap bound {g0:.4e}; {successes}/{reps} within eps = {eps}");
    }
    Ok(())
}
