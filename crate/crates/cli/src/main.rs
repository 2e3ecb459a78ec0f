use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pcg_core::format::{
    parse_graph, parse_model, parse_tree_file, parse_tt, write_dot, write_graph, write_model, write_witness,
    ParseError,
};
use pcg_core::geometry::{model_graph, paper_model, render_svg_with, Dimension, GeometricModel, Shape, PAPER_MODELS};
use pcg_core::graph::{are_isomorphic, graph_h, Graph};
use pcg_core::recognizer::{recognize_pcg, Recognition, RecognizeError, RecognizeOptions};
use pcg_core::threshold::{tt_realize, tt_witness, TtInstance};
use pcg_core::tree::{is_caterpillar, mlpg_eval, pcg_eval, PcgWitness};
use pcg_core::Rational;

const OK: u8 = 0;
const NEGATIVE: u8 = 1;
const USAGE: u8 = 2;
const IO: u8 = 3;

/// Pairwise compatibility graph toolkit.
#[derive(Parser)]
#[command(name = "pcg", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the caterpillar witness of a tolerance-threshold or threshold instance.
    TtWitness { input: PathBuf, output: PathBuf },
    /// Print the graph realized by a tree file.
    Eval {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Pcg)]
        mode: Mode,
        /// Emit DOT instead of the graph text format.
        #[arg(long)]
        dot: bool,
    },
    /// Print the intersection graph of a geometric model.
    Model {
        /// Model file; omit when using --bundled.
        #[arg(required_unless_present = "bundled")]
        input: Option<PathBuf>,
        /// One of the bundled models (disks_h, segments_h, arcs_h, squares_h, cubes_h).
        #[arg(long, conflicts_with = "input")]
        bundled: Option<String>,
        /// Render a 2D model as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the model back out in the model text format.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Exit 1 unless the intersection graph is isomorphic to H.
        #[arg(long)]
        check_h: bool,
        #[arg(long)]
        dot: bool,
    },
    /// Search for a witness tree; exits 1 with a certificate when none exists.
    Recognize {
        input: PathBuf,
        /// Worker threads (0 = one per core).
        #[arg(long, env = "PCG_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Examine one topology per automorphism orbit.
        #[arg(long)]
        symmetry: bool,
        /// Skip labelings ruled out by an earlier infeasible core.
        #[arg(long)]
        prune: bool,
        /// Report topologies done / total on stderr.
        #[arg(long)]
        progress: bool,
        /// Write the witness here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the bundled models and randomized caterpillar round trips.
    VerifyPaper {
        /// Also run the exhaustive recognition of H.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, env = "PCG_JOBS", default_value_t = 0)]
        jobs: usize,
    },
    /// Find an isomorphism between two graph files.
    Iso { first: PathBuf, second: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Pcg,
    Mlpg,
}

enum Failure {
    Usage(String),
    Io(String),
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parsed<T>(path: &Path, r: Result<T, ParseError>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str) -> Result<(), Failure> {
    std::io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| Failure::Io(format!("stdout: {e}")))
}

fn to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn tt_witness_cmd(input: &Path, output: &Path) -> Outcome {
    let file = parsed(input, parse_tt(&read(input)?))?;
    let inst = file.to_tt();
    let w = tt_witness(&inst);
    write(output, &write_witness(&w.witness))?;
    println!("edges {}", pcg_eval(&w.witness).edge_count());
    Ok(OK)
}

fn eval_cmd(input: &Path, mode: Mode, dot: bool) -> Outcome {
    let file = parsed(input, parse_tree_file(&read(input)?))?;
    let g = match mode {
        Mode::Pcg => {
            let (Some(dmin), Some(dmax)) = (file.dmin, file.dmax) else {
                return Err(Failure::Usage(format!("{}: pcg mode needs `dmin` and `dmax`", input.display())));
            };
            let w = PcgWitness::new(file.tree, dmin, dmax).map_err(|e| Failure::Usage(e.to_string()))?;
            pcg_eval(&w)
        }
        Mode::Mlpg => {
            let Some(dmin) = file.dmin else {
                return Err(Failure::Usage(format!("{}: mlpg mode needs `dmin`", input.display())));
            };
            mlpg_eval(&file.tree, &dmin)
        }
    };
    emit(&if dot { write_dot(&g) } else { write_graph(&g) })?;
    Ok(OK)
}

fn load_model(input: Option<&Path>, bundled: Option<&str>) -> Result<GeometricModel<Rational>, Failure> {
    match (input, bundled) {
        (_, Some(name)) => paper_model(name).map_err(|e| Failure::Usage(e.to_string())),
        (Some(path), None) => parsed(path, parse_model(&read(path)?)),
        (None, None) => Err(Failure::Usage("no model given".into())),
    }
}

fn model_cmd(
    input: Option<&Path>,
    bundled: Option<&str>,
    svg: Option<&Path>,
    out: Option<&Path>,
    check_h: bool,
    dot: bool,
) -> Outcome {
    let m = load_model(input, bundled)?;
    let g = model_graph(&m);
    if let Some(path) = svg {
        if m.dimension() != Dimension::Two {
            return Err(Failure::Usage("SVG rendering needs a 2d model".into()));
        }
        write(path, &render_svg_with(&m, to_f64))?;
    }
    if let Some(path) = out {
        write(path, &write_model(&m))?;
    }
    emit(&if dot { write_dot(&g) } else { write_graph(&g) })?;
    if check_h {
        if are_isomorphic(&g, &graph_h()).is_some() {
            eprintln!("matches H");
        } else {
            eprintln!("mismatch vs H");
            return Ok(NEGATIVE);
        }
    }
    Ok(OK)
}

fn recognize_cmd(input: &Path, opts: RecognizeOptions, output: Option<&Path>) -> Outcome {
    let g = parsed(input, parse_graph(&read(input)?))?;
    let result = recognize_pcg(&g, &opts);
    if opts.progress.is_some() {
        eprintln!();
    }
    match result {
        Ok(Recognition::Witness { witness, .. }) => {
            let text = write_witness(&witness);
            match output {
                Some(path) => write(path, &text)?,
                None => emit(&text)?,
            }
            Ok(OK)
        }
        Ok(Recognition::NotPcg(cert)) => {
            println!("{cert}");
            Ok(NEGATIVE)
        }
        Err(e @ (RecognizeError::Guard { .. } | RecognizeError::LabelMismatch { .. })) => {
            Err(Failure::Usage(e.to_string()))
        }
        Err(e) => Err(Failure::Io(e.to_string())),
    }
}

fn progress_printer() -> RecognizeOptions {
    let start = Instant::now();
    RecognizeOptions {
        progress: Some(Arc::new(move |done, total| {
            eprint!("\rtopologies {done}/{total} ({:.1} s)", start.elapsed().as_secs_f64());
        })),
        ..RecognizeOptions::default()
    }
}

fn check(ok: bool, title: &str, detail: &str) -> bool {
    println!("{} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn tampered_disks() -> Option<GeometricModel<Rational>> {
    let mut m: GeometricModel<Rational> = paper_model("disks_h").ok()?;
    let fifteen = Rational::from_integer(15.into());
    let labels: Vec<String> = m.labels().to_vec();
    for l in labels {
        if let Some(Shape::Disk { r, .. }) = m.get_mut(&l) {
            if *r == fifteen {
                *r = Rational::from_integer(14.into());
            }
        }
    }
    Some(m)
}

fn random_tt(rng: &mut ChaCha8Rng) -> TtInstance<Rational> {
    let n = rng.gen_range(1..=10);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let value = |rng: &mut ChaCha8Rng| {
        let q: i64 = rng.gen_range(1..=8);
        Rational::new(rng.gen_range(1..=15 * q).into(), q.into())
    };
    let g = (0..n).map(|_| value(rng)).collect();
    let t = (0..n).map(|_| value(rng)).collect();
    TtInstance::new(&names, g, t).expect("positive values")
}

fn verify_paper(full: bool, seed: u64, instances: usize, jobs: usize) -> Outcome {
    let h = graph_h();
    let mut ok = true;
    for name in PAPER_MODELS {
        let start = Instant::now();
        let m: GeometricModel<Rational> = paper_model(name).map_err(|e| Failure::Usage(e.to_string()))?;
        let equal = model_graph(&m) == h;
        ok &= check(
            equal,
            name,
            &format!(
                "{} H ({:.3} s)",
                if equal { "realizes" } else { "does not realize" },
                start.elapsed().as_secs_f64()
            ),
        );
    }
    let tampered = tampered_disks().map(|m| model_graph(&m));
    ok &= check(
        tampered.as_ref().is_some_and(|g| *g != h),
        "tampered disks_h",
        "radius 14 instead of 15 is reported as a mismatch vs H",
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let mut bad = 0;
    for _ in 0..instances {
        let inst = random_tt(&mut rng);
        let w = tt_witness(&inst);
        if pcg_eval(&w.witness) != tt_realize(&inst) || !is_caterpillar(&w.witness.tree) {
            bad += 1;
        }
    }
    ok &= check(
        bad == 0,
        "caterpillar round trips",
        &format!(
            "{instances} instances (seed {seed:#x}), {bad} mismatches ({:.3} s)",
            start.elapsed().as_secs_f64()
        ),
    );

    if full {
        let start = Instant::now();
        let opts = RecognizeOptions { jobs, ..RecognizeOptions::default() };
        match recognize_pcg(&h, &opts) {
            Ok(Recognition::NotPcg(cert)) => {
                println!("{cert}");
                ok &= check(true, "H recognition", &format!("no witness ({:.1} s)", start.elapsed().as_secs_f64()));
            }
            Ok(Recognition::Witness { .. }) => ok &= check(false, "H recognition", "found a witness"),
            Err(e) => ok &= check(false, "H recognition", &e.to_string()),
        }
    }
    Ok(if ok { OK } else { NEGATIVE })
}

fn iso_cmd(first: &Path, second: &Path) -> Outcome {
    let g1: Graph = parsed(first, parse_graph(&read(first)?))?;
    let g2: Graph = parsed(second, parse_graph(&read(second)?))?;
    match are_isomorphic(&g1, &g2) {
        Some(map) => {
            let mut out = String::new();
            for (a, b) in map {
                out.push_str(&format!("{a} -> {b}\n"));
            }
            emit(&out)?;
            Ok(OK)
        }
        None => {
            println!("non-isomorphic");
            Ok(NEGATIVE)
        }
    }
}

fn run(args: Args) -> Outcome {
    match args.command {
        Command::TtWitness { input, output } => tt_witness_cmd(&input, &output),
        Command::Eval { input, mode, dot } => eval_cmd(&input, mode, dot),
        Command::Model { input, bundled, svg, emit, check_h, dot } => model_cmd(
            input.as_deref(),
            bundled.as_deref(),
            svg.as_deref(),
            emit.as_deref(),
            check_h,
            dot,
        ),
        Command::Recognize { input, jobs, symmetry, prune, progress, output } => {
            let base = if progress { progress_printer() } else { RecognizeOptions::default() };
            let opts = RecognizeOptions { jobs, symmetry, prune_labelings: prune, ..base };
            recognize_cmd(&input, opts, output.as_deref())
        }
        Command::VerifyPaper { full, seed, instances, jobs } => verify_paper(full, seed, instances, jobs),
        Command::Iso { first, second } => iso_cmd(&first, &second),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    match run(args) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(IO)
        }
    }
}
