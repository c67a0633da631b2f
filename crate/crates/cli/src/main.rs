mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tropvol_core::bounds::{
    counting_bounds, interval_table, volume_bounds, Param, MAX_BITS,
};
use tropvol_core::geom::{sat_count_bruteforce, BUDGET_ENV, BRUTE_FORCE_MAX_VARS, DEFAULT_BUDGET};
use tropvol_core::scalar::parse_rational;
use tropvol_core::*;

use report::Format;

#[derive(Parser)]
#[command(name = "tropvol", version, about = "Exact volumes, lattice counts and ranks of tropical polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Maximum number of membership tests per scan.
    #[arg(long, global = true, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Starting precision in bits for enclosures of π and square roots.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u32).range(8..=MAX_BITS as i64))]
    precision: u32,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Volume of tconv(A), or of tconv(A) + B_H(ε) with --eps.
    Volume {
        input: PathBuf,
        #[arg(long, value_parser = rational)]
        eps: Option<ExactScalar>,
    },
    /// Lattice points of s·tconv(A).
    Count {
        input: PathBuf,
        #[arg(long = "s", default_value_t = 1)]
        s: u64,
    },
    /// Tropical rank.
    Rank { input: PathBuf },
    /// Cells of the type decomposition.
    Cells {
        input: PathBuf,
        /// Sample types on the (1/N)-grid; N = m certifies full cells and pseudovertices.
        #[arg(long)]
        refine: Option<u32>,
    },
    /// Largest inner radius of a projected maximal cell.
    Radius { input: PathBuf },
    /// Hilbert ball of radius ε in TP^{d-1}.
    Ball {
        #[arg(long)]
        d: usize,
        #[arg(long, value_parser = rational)]
        eps: ExactScalar,
    },
    /// Hilbert outer parallel body tconv(A) + B_H(ε).
    Hopb {
        input: PathBuf,
        #[arg(long, value_parser = rational)]
        eps: ExactScalar,
    },
    /// Rank bounds for tconv(A) at --eps (volume) or --s (counting), with the measured value.
    Bounds {
        input: PathBuf,
        #[arg(long, value_parser = rational, conflicts_with = "s")]
        eps: Option<ExactScalar>,
        #[arg(long = "s")]
        s: Option<u64>,
    },
    /// Per-rank intervals for m×n matrices with entries bounded by W.
    Intervals {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "W", default_value_t = 1)]
        w: u64,
        /// Defaults to the certified choice for these m, n, W.
        #[arg(long, value_parser = rational, conflicts_with = "s")]
        eps: Option<ExactScalar>,
        #[arg(long = "s")]
        s: Option<u64>,
        #[arg(long, value_parser = rational, default_value = "1")]
        alpha: ExactScalar,
    },
    /// Recover the tropical rank from a volume or a lattice count.
    RankDemo {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DemoMode::Both)]
        mode: DemoMode,
        #[arg(long, value_parser = rational)]
        eps: Option<ExactScalar>,
        #[arg(long = "s")]
        s: Option<u64>,
    },
    /// Volume or lattice count of the gadget of a monotone 2-SAT formula.
    Sat {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SatMode::Volume)]
        mode: SatMode,
        #[arg(long = "L", default_value_t = 2)]
        l: u64,
    },
    /// Whether tconv(A) has zero volume.
    ZeroVolume { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoMode {
    Volume,
    Counting,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SatMode {
    Volume,
    Count,
}

fn rational(s: &str) -> std::result::Result<ExactScalar, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}

enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn matrix(path: &Path) -> std::result::Result<TropicalMatrix, Failure> {
    TropicalMatrix::parse_any(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn polytope(path: &Path) -> std::result::Result<(TropicalMatrix, VertexPolytope), Failure> {
    let a = matrix(path)?;
    let p = VertexPolytope::new(&a)?;
    Ok((a, p))
}

fn cell_json(c: &CellInfo) -> Value {
    json!({
        "type": c.covector.to_one_based(),
        "dimension": c.dimension,
        "volume": c.volume.as_ref().map(ToString::to_string),
    })
}

/// Raises the precision until the measured value is placed on one side of
/// each bound, or the cap is reached.
fn judge(
    measured: &ExactScalar,
    start: u32,
    f: impl Fn(u32) -> tropvol_core::Result<BoundsReport>,
) -> std::result::Result<(BoundsReport, &'static str), Failure> {
    let mut bits = start;
    loop {
        let rep = f(bits)?;
        if rep.lower.hi <= *measured && *measured <= rep.upper.lo {
            return Ok((rep, "holds"));
        }
        if rep.lower.lo > *measured || *measured > rep.upper.hi {
            return Ok((rep, "violated"));
        }
        if bits >= MAX_BITS {
            return Ok((rep, "inconclusive"));
        }
        bits = (bits * 2).min(MAX_BITS);
    }
}

fn run(cmd: &Command, g: &Global) -> Outcome {
    let budget = Budget::new(g.budget);
    match cmd {
        Command::Volume { input, eps } => {
            let (_, p) = polytope(input)?;
            let p = match eps {
                Some(e) => outer_parallel_body(&p, e)?,
                None => p,
            };
            Ok(json!({"volume": volume(&p, budget)?.volume.to_string()}))
        }
        Command::Count { input, s } => {
            let (_, p) = polytope(input)?;
            Ok(json!({"count": count_lattice_points_sweep(&p, *s, budget)?.count}))
        }
        Command::Rank { input } => {
            let a = matrix(input)?;
            let k = tropical_rank(&a)?;
            Ok(json!({"rank": k}))
        }
        Command::Cells { input, refine } => {
            let (a, p) = polytope(input)?;
            let cells = enumerate_cells(&p, refine.unwrap_or(a.rows() as u32), budget)?;
            Ok(json!({"cells": cells.iter().map(cell_json).collect::<Vec<_>>()}))
        }
        Command::Radius { input } => {
            let (_, p) = polytope(input)?;
            Ok(json!({"radius": max_radius_xt(&p, budget)?.to_string()}))
        }
        Command::Ball { d, eps } => {
            let h = hilbert_ball_generators(*d, eps)?;
            Ok(json!({
                "d": d,
                "eps": eps.to_string(),
                "count": hilbert_ball_count(*d, eps)?.to_string(),
                "volume": hilbert_ball_volume(*d, eps)?.to_string(),
                "generators": h.to_json(),
            }))
        }
        Command::Hopb { input, eps } => {
            let (_, p) = polytope(input)?;
            let body = outer_parallel_body(&p, eps)?;
            Ok(json!({
                "eps": eps.to_string(),
                "volume": volume(&body, budget)?.volume.to_string(),
                "generators": body.original().to_json(),
            }))
        }
        Command::Bounds { input, eps, s } => {
            let (a, p) = polytope(input)?;
            let (m, n) = (a.rows(), a.cols());
            let k = tropical_rank(&a)?;
            let r = tropvol_core::bounds::outer_r(&a)?;
            let r_xt = max_radius_xt(&p, budget)?;
            let (measured, (mut rep, verdict)) = match (eps, s) {
                (Some(e), _) => {
                    let v = volume(&outer_parallel_body(&p, e)?, budget)?.volume;
                    let j = judge(&v, g.precision, |b| volume_bounds(m, n, k, &r, &r_xt, e, b))?;
                    (v, j)
                }
                (None, s) => {
                    let s = s.unwrap_or(1);
                    let c = count_lattice_points_sweep(&p, s, budget)?.count;
                    let v = ExactScalar::from_integer(c.into());
                    let j = judge(&v, g.precision, |b| counting_bounds(m, n, k, &r, &r_xt, s, b))?;
                    (v, j)
                }
            };
            rep.w = tropvol_core::bounds::max_abs_entry(&a).ok();
            let mut out = rep.to_json();
            out["measured"] = json!(measured.to_string());
            out["verdict"] = json!(verdict);
            Ok(out)
        }
        Command::Intervals { m, n, w, eps, s, alpha } => {
            let param = match (eps, s) {
                (_, Some(s)) => Param::Dilation(*s),
                (Some(e), None) => Param::Epsilon(e.clone()),
                (None, None) => Param::Epsilon(choice_epsilon(*m, *n, &ExactScalar::from_integer((4 * w).into()))?),
            };
            let t = interval_table(*m, *n, &(*w).into(), &param, alpha, g.precision)?;
            Ok(t.to_json())
        }
        Command::RankDemo { input, mode, eps, s } => {
            let a = matrix(input)?;
            let mut out = json!({"tropical_rank": tropical_rank(&a)?});
            if matches!(mode, DemoMode::Volume | DemoMode::Both) {
                out["rank_from_volume"] = json!(rank_from_volume(&a, eps.as_ref())?);
            }
            if matches!(mode, DemoMode::Counting | DemoMode::Both) {
                out["rank_from_counting"] = json!(rank_from_counting(&a, *s, budget)?);
            }
            Ok(out)
        }
        Command::Sat { input, mode, l } => {
            let f = SatFormula::parse(&read(input)?)
                .map_err(|e| Failure::Input(format!("{}: {e}", input.display())))?;
            let gadget = sat_gadget(&f, *l)?;
            let mut out = match mode {
                SatMode::Volume => json!({"volume": ineq_volume(&gadget, budget)?.volume.to_string()}),
                SatMode::Count => json!({"count": ineq_count(&gadget, 1, budget)?.count}),
            };
            if f.n <= BRUTE_FORCE_MAX_VARS {
                out["sat_count"] = json!(sat_count_bruteforce(&f)?);
            }
            Ok(out)
        }
        Command::ZeroVolume { input } => {
            let a = matrix(input)?;
            Ok(json!({"zero_volume": zero_volume_decision(&a)?}))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("tropvol: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli.command, &cli.global) {
        Ok(v) => {
            print!("{}", report::render(&v, cli.global.format));
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("tropvol: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("tropvol: {msg}");
            ExitCode::from(2)
        }
    }
}
