use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fiberwalk::adapted::{adapt_fiber, lattice_superset, power_moves};
use fiberwalk::error::Error;
use fiberwalk::experiment::{slem_curve, write_curve_csv, Family};
use fiberwalk::fiber::{enumerate_fiber, fiber_box_bound, fiber_size_upper_bound, Fiber};
use fiberwalk::format::{format_moves, parse_matrix, parse_moves_for, read_vector, sig};
use fiberwalk::graph::{
    edge_expansion_exact, loop_removed, slem, slem_lower_bound_from_expansion, transition_matrix,
    DEFAULT_SUBSET_LIMIT,
};
use fiberwalk::linalg::{certify_kernel_positivity, KernelPositivity};
use fiberwalk::walks::{run_walk, WalkConfig, WalkMode};
use fiberwalk::{FiberGraph, IntegerMatrix, MoveSet};

const TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "fiberwalk",
    version,
    about = "Random walks on fibers of integer matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the kernel meets the nonnegative orthant only in 0.
    Check { matrix: PathBuf },
    /// Enumerate a fiber.
    Fiber {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        rhs: RhsArgs,
        /// Print every point.
        #[arg(long)]
        list: bool,
        /// Print the certificate size bounds.
        #[arg(long)]
        bound: bool,
    },
    /// Fiber graph quantities.
    Graph {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        rhs: RhsArgs,
        #[arg(long)]
        slem: bool,
        #[arg(long)]
        diam: bool,
        #[arg(long)]
        expansion: bool,
        /// Check the expansion and loop-removal inequalities.
        #[arg(long)]
        bounds: bool,
    },
    /// Diameter-adapted moves `M(diam)` for a fiber.
    Adapt {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        rhs: RhsArgs,
        /// Use the lattice-basis superset instead of `M(diam)`.
        #[arg(long)]
        superset: bool,
        /// Print the adapted moves.
        #[arg(long)]
        list: bool,
    },
    /// Simulate a walk and write its trace.
    Walk {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        rhs: RhsArgs,
        #[arg(long, default_value = "simple")]
        mode: String,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trace CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Walk with the diameter-adapted moves.
        #[arg(long)]
        adapted: bool,
        #[arg(long)]
        record_every: Option<usize>,
    },
    /// Reproducible experiments.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Subcommand)]
enum Experiment {
    /// Conventional and adapted SLEM along `i * b` for `i = imin..=imax`.
    SlemCurve {
        #[arg(long)]
        model: String,
        #[arg(long, value_delimiter = ',', required = true)]
        params: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        imin: usize,
        #[arg(long)]
        imax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Named family: a_d, independence, hemmecke.
    #[arg(long, conflicts_with_all = ["matrix", "moves"])]
    model: Option<String>,
    #[arg(long, value_delimiter = ',', requires = "model")]
    params: Vec<usize>,
    #[arg(long, requires = "moves")]
    matrix: Option<PathBuf>,
    #[arg(long, requires = "matrix")]
    moves: Option<PathBuf>,
}

#[derive(Args)]
struct RhsArgs {
    /// Right-hand side file.
    #[arg(long, conflicts_with = "b")]
    rhs: Option<PathBuf>,
    /// Right-hand side entries, comma separated.
    #[arg(short = 'b', value_delimiter = ',', allow_negative_numbers = true)]
    b: Vec<i64>,
}

enum Failure {
    /// A well-formed question with a negative answer.
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Disconnected { .. }
            | Error::KernelWitness(_)
            | Error::IsolatedNode(_)
            | Error::NotContained
            | Error::SizeHypothesis { .. }
            | Error::Budget { .. }
            | Error::SubsetLimit { .. } => Failure::Domain(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

fn read_text(path: &PathBuf) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_model(args: &ModelArgs) -> std::result::Result<(IntegerMatrix, MoveSet), Failure> {
    match (&args.model, &args.matrix, &args.moves) {
        (Some(name), _, _) => {
            let model = name.parse::<Family>()?.build(&args.params)?;
            Ok((model.matrix, model.markov_basis))
        }
        (None, Some(m), Some(mv)) => {
            let matrix = parse_matrix(&read_text(m)?)?.certified()?;
            let moves = parse_moves_for(&matrix, &read_text(mv)?)?;
            Ok((matrix, moves))
        }
        _ => Err(Failure::Usage(
            "give either --model/--params or --matrix/--moves".into(),
        )),
    }
}

fn load_rhs(args: &RhsArgs, matrix: &IntegerMatrix) -> std::result::Result<Vec<i64>, Failure> {
    let b = match &args.rhs {
        Some(path) => read_vector(path)?,
        None if !args.b.is_empty() => args.b.clone(),
        None => return Err(Failure::Usage("give --rhs or -b".into())),
    };
    if b.len() != matrix.rows() {
        return Err(Error::Dimension {
            expected: matrix.rows(),
            got: b.len(),
        }
        .into());
    }
    Ok(b)
}

fn load_fiber(model: &ModelArgs, rhs: &RhsArgs) -> std::result::Result<(Fiber, MoveSet), Failure> {
    let (matrix, moves) = load_model(model)?;
    let b = load_rhs(rhs, &matrix)?;
    Ok((enumerate_fiber(&matrix, &b)?, moves))
}

fn subset_limit() -> std::result::Result<usize, Failure> {
    match std::env::var("FW_SUBSET_LIMIT") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("FW_SUBSET_LIMIT: not a count: {v:?}"))),
        Err(_) => Ok(DEFAULT_SUBSET_LIMIT),
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "VIOLATED"
    }
}

fn cmd_check(path: &PathBuf) -> CliResult {
    let matrix = parse_matrix(&read_text(path)?)?;
    match certify_kernel_positivity(&matrix) {
        KernelPositivity::Certificate(lambda) => {
            println!("certificate: {lambda}");
            Ok(())
        }
        KernelPositivity::Witness(u) => {
            let text: Vec<String> = u.iter().map(ToString::to_string).collect();
            println!("witness: {}", text.join(" "));
            Err(Failure::Domain(String::new()))
        }
    }
}

fn cmd_fiber(model: &ModelArgs, rhs: &RhsArgs, list: bool, bound: bool) -> CliResult {
    let (fiber, _) = load_fiber(model, rhs)?;
    println!("size = {}", fiber.len());
    if bound {
        println!(
            "size bound = {}",
            fiber_size_upper_bound(fiber.matrix(), fiber.rhs())?
        );
        println!(
            "box bound = {}",
            fiber_box_bound(fiber.matrix(), fiber.rhs())?
        );
    }
    if list {
        for p in fiber.points() {
            let text: Vec<String> = p.iter().map(ToString::to_string).collect();
            println!("{}", text.join(" "));
        }
    }
    Ok(())
}

fn cmd_graph(
    model: &ModelArgs,
    rhs: &RhsArgs,
    want_slem: bool,
    diam: bool,
    expansion: bool,
    bounds: bool,
) -> CliResult {
    let (fiber, moves) = load_fiber(model, rhs)?;
    let g = FiberGraph::build(&fiber, &moves)?;
    println!("nodes = {}", g.len());
    println!("degree = {}", g.degree());
    println!("connected = {}", g.is_connected());
    if want_slem {
        println!("slem = {}", sig(slem(&transition_matrix(&g)?)?, 12));
    }
    if expansion {
        println!("h = {}", edge_expansion_exact(&g, subset_limit()?)?.value);
    }
    if bounds {
        let e = slem_lower_bound_from_expansion(&g, subset_limit()?)?;
        println!(
            "expansion bound: slem = {} >= 1 - (2/d) h = {}: {}",
            sig(e.slem, 12),
            sig(e.lower_bound, 12),
            verdict(e.holds(TOLERANCE))
        );
        let r = loop_removed(&g)?;
        println!(
            "loop removal: 1 - slem' = {} <= d (1 - slem) = {}: {}",
            sig(r.gap_loop_free, 12),
            sig(r.scaled_gap, 12),
            verdict(r.holds(TOLERANCE))
        );
    }
    if diam {
        println!("diam = {}", g.diameter()?);
    }
    Ok(())
}

fn cmd_adapt(model: &ModelArgs, rhs: &RhsArgs, superset: bool, list: bool) -> CliResult {
    let (fiber, moves) = load_fiber(model, rhs)?;
    let diameter = FiberGraph::build(&fiber, &moves)?.diameter()?;
    let adapted = if superset {
        lattice_superset(&moves, diameter)?
    } else {
        adapt_fiber(&fiber, &moves)?
    };
    let g = FiberGraph::build(&fiber, &adapted.moves)?;
    println!("diam = {diameter}");
    println!("fiber size = {}", fiber.len());
    println!("adapted moves = {}", adapted.len());
    println!("complete = {}", g.is_complete());
    if g.is_complete() && adapted.moves.degree() == adapted.len() {
        println!(
            "slem closed form = {}",
            sig(1.0 - fiber.len() as f64 / adapted.len() as f64, 12)
        );
    }
    println!("slem = {}", sig(slem(&transition_matrix(&g)?)?, 12));
    if list {
        print!("{}", format_moves(&adapted.moves));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_walk(
    model: &ModelArgs,
    rhs: &RhsArgs,
    mode: &str,
    steps: usize,
    seed: u64,
    out: Option<&PathBuf>,
    adapted: bool,
    record_every: Option<usize>,
) -> CliResult {
    let mode: WalkMode = mode.parse()?;
    let (fiber, moves) = load_fiber(model, rhs)?;
    let moves = if adapted {
        let diameter = FiberGraph::build(&fiber, &moves)?.diameter()?;
        power_moves(&moves, diameter)?.moves
    } else {
        moves
    };
    let g = FiberGraph::build(&fiber, &moves)?;
    let mut cfg = WalkConfig::new(mode, steps, seed);
    if let Some(r) = record_every {
        cfg.record_every = r;
    }
    let trace = run_walk(&g, &cfg)?;
    if let Some(path) = out {
        let file =
            File::create(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        trace.write_csv(BufWriter::new(file))?;
    }
    println!("steps = {steps}");
    println!("rejection rate = {}", sig(trace.rejection_rate(), 12));
    if let Some(tv) = trace.final_tv() {
        println!("final tv = {}", sig(tv, 12));
    }
    Ok(())
}

fn cmd_slem_curve(
    model: &str,
    params: &[usize],
    imin: usize,
    imax: usize,
    out: Option<&PathBuf>,
) -> CliResult {
    if imax < 1 || imin < 1 || imin > imax {
        return Err(Failure::Usage("need 1 <= imin <= imax".into()));
    }
    let family: Family = model.parse()?;
    let instance = family.build(params)?;
    let rows = slem_curve(&instance, &family.ray(&instance), imin..=imax)?;
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            write_curve_csv(&rows, BufWriter::new(file))?;
        }
        None => write_curve_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match &cli.command {
        Command::Check { matrix } => cmd_check(matrix),
        Command::Fiber {
            model,
            rhs,
            list,
            bound,
        } => cmd_fiber(model, rhs, *list, *bound),
        Command::Graph {
            model,
            rhs,
            slem,
            diam,
            expansion,
            bounds,
        } => cmd_graph(model, rhs, *slem, *diam, *expansion, *bounds),
        Command::Adapt {
            model,
            rhs,
            superset,
            list,
        } => cmd_adapt(model, rhs, *superset, *list),
        Command::Walk {
            model,
            rhs,
            mode,
            steps,
            seed,
            out,
            adapted,
            record_every,
        } => cmd_walk(
            model,
            rhs,
            mode,
            *steps,
            *seed,
            out.as_ref(),
            *adapted,
            *record_every,
        ),
        Command::Experiment(Experiment::SlemCurve {
            model,
            params,
            imin,
            imax,
            out,
        }) => cmd_slem_curve(model, params, *imin, *imax, out.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            if !msg.is_empty() {
                eprintln!("fiberwalk: {msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("fiberwalk: {msg}");
            ExitCode::from(2)
        }
    }
}
