use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use k3g16::cli::certificate::Certificate;
use k3g16::cli::verify::{report, rerun_matches, verify};
use k3g16::cli::{load_state, resume, run, save_state, Budgets, RunConfig, Stage, State};

#[derive(Parser)]
#[command(
    name = "k3g16",
    version,
    about = "Certified computations on a Mukai-model threefold over a prime field"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run stages from scratch.
    Run {
        #[arg(long, default_value_t = 101)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Seed for the model; defaults to --seed.
        #[arg(long)]
        model_seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Continue from a saved state, reusing finished stages.
    Resume {
        #[arg(long)]
        state: PathBuf,
        /// Refuse a state computed over a different prime.
        #[arg(long)]
        prime: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Re-check a certificate from its artifacts.
    Verify {
        certificate: PathBuf,
        /// Also rerun the stored configuration and compare byte for byte.
        #[arg(long)]
        rerun: bool,
    },
    /// Print a certificate as a table.
    Report { certificate: PathBuf },
}

#[derive(Args)]
struct Common {
    /// Stages to run; prerequisites are added. Default: all.
    #[arg(long, value_enum, value_delimiter = ',')]
    stages: Vec<Stage>,
    /// Certificate output (JSON).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to save the state after the run (for `run`), or to overwrite (for `resume`).
    #[arg(long = "save-state")]
    save_state: Option<PathBuf>,
    /// Record wall-clock timings in the certificate.
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    budgets: BudgetArgs,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long = "budget-planes")]
    planes: Option<usize>,
    #[arg(long = "budget-x-points")]
    x_points: Option<usize>,
    #[arg(long = "budget-retries")]
    retries: Option<usize>,
    #[arg(long = "budget-degree-cap")]
    degree_cap: Option<usize>,
    #[arg(long = "budget-peskine-slices")]
    peskine_slices: Option<usize>,
    #[arg(long = "budget-rank7-slices")]
    rank7_slices: Option<usize>,
    #[arg(long = "budget-cover-points")]
    cover_points: Option<usize>,
    #[arg(long = "budget-tangent-lines")]
    tangent_lines: Option<usize>,
}

impl BudgetArgs {
    fn apply(&self, b: &mut Budgets) {
        let set = |dst: &mut usize, src: Option<usize>| {
            if let Some(v) = src {
                *dst = v;
            }
        };
        set(&mut b.planes, self.planes);
        set(&mut b.x_points, self.x_points);
        set(&mut b.retries, self.retries);
        set(&mut b.degree_cap, self.degree_cap);
        set(&mut b.peskine_slices, self.peskine_slices);
        set(&mut b.rank7_slices, self.rank7_slices);
        set(&mut b.cover_points, self.cover_points);
        set(&mut b.tangent_lines, self.tangent_lines);
    }
}

fn configure(mut config: RunConfig, common: &Common) -> RunConfig {
    if !common.stages.is_empty() {
        config.stages = common.stages.clone();
    }
    common.budgets.apply(&mut config.budgets);
    config.timings = common.timings;
    config
}

fn finish(cert: &Certificate, state: &State, common: &Common) -> Result<ExitCode> {
    if let Some(p) = &common.out {
        std::fs::write(p, cert.to_json()?).with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &common.save_state {
        save_state(p, state)?;
    }
    print!("{}", report(cert));
    Ok(if cert.mandatory_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn read_cert(p: &Path) -> Result<Certificate> {
    let s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
    Ok(Certificate::from_json(&s)?)
}

fn main() -> Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Run {
            prime,
            seed,
            model_seed,
            common,
        } => {
            let mut config = RunConfig::new(prime, seed);
            config.model_seed = model_seed;
            let config = configure(config, &common);
            let (cert, state) = run(&config)?;
            finish(&cert, &state, &common)
        }
        Cmd::Resume {
            state,
            prime,
            common,
        } => {
            let st = load_state(&state, prime)?;
            let mut config = RunConfig::new(st.p, st.rng_seed);
            config.model_seed = Some(st.model_seed);
            config.stages = Stage::ALL
                .iter()
                .copied()
                .filter(|s| !st.completed.contains(s))
                .collect();
            let config = configure(config, &common);
            let (cert, st) = resume(&config, st)?;
            finish(&cert, &st, &common)
        }
        Cmd::Verify { certificate, rerun } => {
            let cert = read_cert(&certificate)?;
            let rep = verify(&cert)?;
            for i in &rep.items {
                println!(
                    "{:<4} {:<22} {}",
                    if i.ok { "ok" } else { "FAIL" },
                    i.name,
                    i.detail
                );
            }
            let mut ok = rep.passed();
            if rerun {
                let same = rerun_matches(&cert)?;
                println!(
                    "{:<4} {:<22} rerun reproduces the certificate",
                    if same { "ok" } else { "FAIL" },
                    "rerun"
                );
                ok &= same;
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::Report { certificate } => {
            print!("{}", report(&read_cert(&certificate)?));
            Ok(ExitCode::SUCCESS)
        }
    }
}
