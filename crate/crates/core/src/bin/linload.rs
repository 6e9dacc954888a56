use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use linload::experiments::{self, Outcome, Settings, FIGURE1_DEFAULT_M, FIGURE1_DEFAULT_P};
use linload::oracles::{BMode, DEFAULT_BUDGET};
use linload::report::report_path;
use linload::{Error, KeySet, Result};

#[derive(Parser, Debug)]
#[command(name = "linload", version, about = "Max-load experiments for ((ax+b) mod p) mod m")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    /// Prime field size.
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Number of bins.
    #[arg(long, global = true)]
    m: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Output CSV; the acceptance report goes next to it as <stem>.report.csv.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Maximum hash evaluations for one exhaustive enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// figure1: sweep every d in [2, p-1].
    #[arg(long, global = true)]
    full_sweep: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Collision probability of {0,1,d} over a sweep of d.
    Figure1 {
        /// Explicit d values (comma separated) instead of the default sweep.
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u64>>,
    },
    /// Exhaustive checks of every collision and load lemma at one (p, m).
    Lemmas,
    /// Linear vs fully random mean max load over several m.
    Scaling {
        #[arg(long, value_delimiter = ',', default_values_t = vec![16u64, 64, 256, 1024])]
        m_values: Vec<u64>,
    },
    /// Interval [m] against an affine image of it.
    Transform {
        #[arg(long, default_value_t = 77)]
        alpha: u64,
        #[arg(long, default_value_t = 5)]
        beta: u64,
        /// Also compare exact histograms over all (a, b).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Exact max-load histogram over the family.
    MaxloadExact {
        #[arg(long, default_value = "all_b")]
        mode: BMode,
        #[command(flatten)]
        keys: KeyArgs,
    },
    /// Monte Carlo max-load distribution with the fully random baseline.
    MaxloadMc {
        #[command(flatten)]
        keys: KeyArgs,
    },
    /// Exact count for three elements, collision or prescribed images.
    Collide3 {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
        #[arg(long)]
        z: u64,
        /// Prescribed bins "ix,iy,iz".
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<u64>>,
    },
    /// Exact probability that [d] collapses into one bin, for d up to --d.
    IntervalCollide {
        #[arg(long)]
        d: u64,
    },
}

#[derive(Args, Debug)]
struct KeyArgs {
    /// Key set size (defaults to m).
    #[arg(long)]
    len: Option<u64>,
    /// Use the affine image {(alpha x + beta) mod p : x in [len]}.
    #[arg(long)]
    alpha: Option<u64>,
    #[arg(long, default_value_t = 0)]
    beta: u64,
}

impl KeyArgs {
    fn key_set(&self, m: u64) -> Result<KeySet> {
        let len = self.len.unwrap_or(m);
        match self.alpha {
            Some(alpha) => KeySet::affine(len, alpha, self.beta),
            None => KeySet::interval(len),
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    let settings = Settings {
        workers: c.workers,
        budget: c.budget,
    };
    let (p, m) = (c.p.unwrap_or(257), c.m.unwrap_or(16));
    match &cli.cmd {
        Cmd::Figure1 { d } => experiments::run_figure1(
            c.p.unwrap_or(FIGURE1_DEFAULT_P),
            c.m.unwrap_or(FIGURE1_DEFAULT_M),
            d.clone(),
            c.full_sweep,
            &settings,
        ),
        Cmd::Lemmas => experiments::run_lemma_checks(p, m, c.seed, &settings),
        Cmd::Scaling { m_values } => experiments::run_scaling(m_values, c.samples, c.seed, &settings),
        Cmd::Transform {
            alpha,
            beta,
            exhaustive,
        } => experiments::run_transform_demo(
            c.p.unwrap_or(1031),
            c.m.unwrap_or(32),
            *alpha,
            *beta,
            c.samples,
            c.seed,
            *exhaustive,
            &settings,
        ),
        Cmd::MaxloadExact { mode, keys } => {
            experiments::run_maxload_exact(p, m, &keys.key_set(m)?, *mode, &settings)
        }
        Cmd::MaxloadMc { keys } => {
            experiments::run_maxload_mc(p, m, &keys.key_set(m)?, c.samples, c.seed, &settings)
        }
        Cmd::Collide3 { x, y, z, targets } => {
            let tg = match targets.as_deref() {
                None => None,
                Some(&[i, j, k]) => Some((i, j, k)),
                Some(_) => return Err(Error::Domain("--targets needs exactly three bins".into())),
            };
            experiments::run_collide3(p, m, (*x, *y, *z), tg, &settings)
        }
        Cmd::IntervalCollide { d } => experiments::run_interval_collide(p, m, *d, &settings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = cli
        .common
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", outcome.experiment)));
    if let Err(e) = outcome.table.write(&out) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    eprintln!("wrote {}", out.display());
    if let Some(report) = &outcome.report {
        print!("{}", report.render_table());
        let path = report_path(&out);
        if let Err(e) = report.to_csv().write(&path) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        eprintln!("wrote {}", path.display());
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
