//! `helly`: generate instances, compute lineality spaces, build colorful Reay
//! decompositions and run the colorful Helly verifiers on JSON instances.
//!
//! Exit codes: 0 success or conclusion holds, 2 hypothesis fails, 3
//! tightness witness, 4 input error, 5 invariant breach.

mod doc;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use helly_core::acceptance;
use helly_core::cone;
use helly_core::exec::Strategy;
use helly_core::gen::{GeneratorKind, GeneratorSpec};
use helly_core::reay;
use helly_core::verify::{self, Verdict};
use helly_core::Error;

use doc::{polyhedron_doc, verification_json, InstanceDocument};

const EXIT_HYPOTHESIS_FAILS: u8 = 2;
const EXIT_TIGHTNESS: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_BREACH: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "helly", version, about = "Exact colorful Helly and Reay decomposition toolkit")]
struct Cli {
    /// Worker threads for rainbow enumeration; output does not depend on it.
    #[arg(long, global = true, env = "HELLY_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated instance.
    Gen {
        kind: String,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of colors of random instances (default d + k).
        #[arg(long)]
        colors: Option<usize>,
        /// Extra vectors per planted color, or the size of unplanted colors.
        #[arg(long, default_value_t = 0)]
        extra: usize,
        /// Comma-separated extra-vector counts, one per planted color.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Write the instance lifted to halfspaces through the origin.
        #[arg(long)]
        polyhedral: bool,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Lineality space of each color.
    Lineality {
        file: PathBuf,
        #[arg(long)]
        color: Option<usize>,
    },
    /// Colorful Reay decomposition with an independent check.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Skip the prefix positive-basis strengthening.
        #[arg(long)]
        weak: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Run a colorful Helly verifier.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        k: Option<usize>,
        /// Accept any number of colors and drop the size cap.
        #[arg(long)]
        loose_colors: bool,
        #[arg(long)]
        timing: bool,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, default_value_t = 12)]
        max_d: usize,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Solutions,
    Lineality,
    Poly,
    Mono,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Solutions => "solutions",
            Mode::Lineality => "lineality",
            Mode::Poly => "poly",
            Mode::Mono => "mono",
        }
    }
}

/// A failure that ends the process with a JSON error object.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Input(message) => Failure {
                code: EXIT_INPUT,
                kind: "input",
                message,
            },
            Error::InvariantBreach(message) => Failure {
                code: EXIT_BREACH,
                kind: "invariant_breach",
                message,
            },
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INPUT,
        kind: "io",
        message: format!("{}: {e}", path.display()),
    }
}

struct Input {
    doc: InstanceDocument,
    sha256: String,
}

fn read_instance(path: &Path) -> Result<Input, Failure> {
    let bytes = fs::read(path).map_err(|e| io_failure(path, e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::from(Error::Input("input is not UTF-8".into())))?;
    Ok(Input {
        doc: InstanceDocument::parse(&text)?,
        sha256: hex::encode(Sha256::digest(&bytes)),
    })
}

fn choose_k(flag: Option<usize>, doc: &InstanceDocument) -> Result<usize, Failure> {
    flag.or(doc.k)
        .ok_or_else(|| Error::Input("no k given on the command line or in the instance".into()).into())
}

fn header(command: &str, sha256: Option<&str>) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("tool".into(), json!("helly"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    if let Some(h) = sha256 {
        m.insert("input_sha256".into(), json!(h));
    }
    m
}

fn emit(mut report: serde_json::Map<String, Value>, started: Option<Instant>) {
    if let Some(t) = started {
        report.insert("timing_ms".into(), json!(t.elapsed().as_secs_f64() * 1e3));
    }
    println!("{}", serde_json::to_string_pretty(&Value::Object(report)).expect("serializable"));
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::ConclusionHolds => 0,
        Verdict::HypothesisFails => EXIT_HYPOTHESIS_FAILS,
        Verdict::TightnessWitness => EXIT_TIGHTNESS,
        Verdict::Counterexample => EXIT_BREACH,
    }
}

fn run_gen(spec: &GeneratorSpec, polyhedral: bool, output: Option<&Path>) -> Result<u8, Failure> {
    let (sys, k) = (spec.generate()?, spec.k);
    let doc = if polyhedral {
        InstanceDocument::polyhedral(sys.ambient_dim(), &verify::lift_to_polyhedra(&sys), Some(k))
    } else {
        InstanceDocument::homogeneous(&sys, Some(k))
    };
    let text = doc.to_json();
    match output {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn run_lineality(file: &Path, color: Option<usize>) -> Result<u8, Failure> {
    let input = read_instance(file)?;
    let sys = input.doc.system()?;
    let indices: Vec<usize> = match color {
        Some(c) if c >= sys.n_colors() => {
            return Err(Error::Input(format!("color {c} out of range ({} colors)", sys.n_colors())).into())
        }
        Some(c) => vec![c],
        None => (0..sys.n_colors()).collect(),
    };
    let colors: Vec<Value> = indices
        .iter()
        .map(|&c| {
            let l = cone::lineality_space(sys.color(c));
            json!({
                "color": c,
                "dimension": l.subspace.dim(),
                "basis": l.subspace.basis(),
                "generators": l.generator_indices,
            })
        })
        .collect();
    let mut report = header("lineality", Some(&input.sha256));
    report.insert("colors".into(), Value::Array(colors));
    emit(report, None);
    Ok(0)
}

fn run_decompose(file: &Path, k: Option<usize>, weak: bool, timing: bool, strategy: Strategy) -> Result<u8, Failure> {
    let started = Instant::now();
    let input = read_instance(file)?;
    let k = choose_k(k, &input.doc)?;
    let sys = input.doc.system()?;
    let dec = if weak {
        reay::reay_decompose_weak_with(&sys, k, strategy)?
    } else {
        reay::reay_decompose_with(&sys, k, strategy)?
    };
    let check = reay::verify_decomposition(&dec, &sys, k, !weak)?;
    let mut report = header("decompose", Some(&input.sha256));
    report.insert("k".into(), json!(k));
    report.insert("form".into(), json!(if weak { "weak" } else { "strong" }));
    report.insert("decomposition".into(), doc::decomposition_json(&dec, &sys, &check));
    emit(report, timing.then_some(started));
    Ok(if check.passed() { 0 } else { EXIT_BREACH })
}

fn run_verify(
    file: &Path,
    mode: Mode,
    k: Option<usize>,
    loose: bool,
    timing: bool,
    strategy: Strategy,
) -> Result<u8, Failure> {
    let started = Instant::now();
    let input = read_instance(file)?;
    let k = choose_k(k, &input.doc)?;
    let enforce = !loose;
    let (verification, verdict) = match mode {
        Mode::Poly => {
            let families = input.doc.families()?;
            let r = verify::verify_nonhomogeneous_with(&families, k, enforce, strategy)?;
            let echo = |c: usize, i: usize| serde_json::to_value(polyhedron_doc(&families[c][i])).expect("serializable");
            (verification_json(&r, "cone_dimension", echo), r.verdict)
        }
        Mode::Mono => {
            let sys = input.doc.system()?;
            if sys.n_colors() != 1 {
                return Err(Error::Input(format!("mono mode needs exactly one color, got {}", sys.n_colors())).into());
            }
            let a = sys.color(0);
            let r = verify::verify_monochromatic(a, k)?;
            let echo = |_: usize, i: usize| json!(a.get(i));
            (verification_json(&r, "solution_dimension", echo), r.verdict)
        }
        Mode::Solutions | Mode::Lineality => {
            let sys = input.doc.system()?;
            let (r, measure) = if mode == Mode::Solutions {
                (verify::verify_colorful_solutions_with(&sys, k, enforce, strategy)?, "solution_dimension")
            } else {
                (verify::verify_colorful_lineality_with(&sys, k, enforce, strategy)?, "lineality_dimension")
            };
            let echo = |c: usize, i: usize| json!(sys.vector(c, i));
            (verification_json(&r, measure, echo), r.verdict)
        }
    };
    let mut report = header("verify", Some(&input.sha256));
    report.insert("mode".into(), json!(mode.name()));
    report.insert("k".into(), json!(k));
    report.insert("enforce_color_count".into(), json!(enforce));
    report.insert("verdict".into(), json!(verdict.name()));
    report.insert("verification".into(), verification);
    emit(report, timing.then_some(started));
    Ok(verdict_code(verdict))
}

fn run_selftest(max_d: usize, timing: bool, strategy: Strategy) -> Result<u8, Failure> {
    let cfg = acceptance::Config { max_d, strategy };
    let mut ok = true;
    for outcome in acceptance::run_all(&cfg) {
        ok &= outcome.passed;
        if timing {
            println!("{}", outcome.timed_line());
        } else {
            println!("{outcome}");
        }
    }
    Ok(if ok { 0 } else { EXIT_BREACH })
}

fn dispatch(command: Command, strategy: Strategy) -> Result<u8, Failure> {
    match command {
        Command::Gen {
            kind,
            d,
            k,
            seed,
            colors,
            extra,
            sizes,
            polyhedral,
            output,
        } => {
            let spec = GeneratorSpec {
                kind: GeneratorKind::parse(&kind)?,
                d,
                k,
                seed,
                colors,
                extra,
                sizes,
            };
            run_gen(&spec, polyhedral, output.as_deref())
        }
        Command::Lineality { file, color } => run_lineality(&file, color),
        Command::Decompose { file, k, weak, timing } => run_decompose(&file, k, weak, timing, strategy),
        Command::Verify {
            file,
            mode,
            k,
            loose_colors,
            timing,
        } => run_verify(&file, mode, k, loose_colors, timing, strategy),
        Command::Selftest { max_d, timing } => run_selftest(max_d, timing, strategy),
    }
}

#[cfg(feature = "parallel")]
fn run_with_jobs(jobs: Option<usize>, command: Command) -> Result<u8, Failure> {
    match jobs {
        Some(0) => Err(Error::Input("--jobs must be positive".into()).into()),
        Some(1) => dispatch(command, Strategy::Sequential),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| Failure {
                code: EXIT_INPUT,
                kind: "input",
                message: format!("cannot start {n} workers: {e}"),
            })?;
            pool.install(|| dispatch(command, Strategy::Parallel))
        }
        None => dispatch(command, Strategy::Parallel),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_with_jobs(jobs: Option<usize>, command: Command) -> Result<u8, Failure> {
    if jobs == Some(0) {
        return Err(Error::Input("--jobs must be positive".into()).into());
    }
    dispatch(command, Strategy::Sequential)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let failure = Failure {
                code: EXIT_INPUT,
                kind: "usage",
                message: e.to_string().trim_end().to_string(),
            };
            return report_failure(failure);
        }
    };
    match run_with_jobs(cli.jobs, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => report_failure(failure),
    }
}

fn report_failure(f: Failure) -> ExitCode {
    let obj = json!({ "error": { "kind": f.kind, "message": f.message, "exit_code": f.code } });
    eprintln!("{obj}");
    ExitCode::from(f.code)
}
