//! `ctip` command-line tool.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctip::config::{InterpolationConfig, InterpolationReport};
use ctip::prover::{prove, ProofLimits, ProverPolicy, StartClauses};
use ctip::ressim::{derive_provenance, simulate, DeductionTree, Method};
use ctip::syntax::{parse_formula_with, parse_term, Formula, ParseOptions};
use ctip::tableau::{GroundingPolicy, Side, SidePolicy, TableauJson, TargetPolicy};
use ctip::verify::{close_with_constants, verify, VerificationReport};
use ctip::{cti_ground, ctif, Error};

const NOT_PROVED: u8 = 1;
const INPUT_ERROR: u8 = 2;
const VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "ctip", version, about = "Craig-Lyndon interpolants from clausal tableaux")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Interpolant of F and G for a valid F => G.
    Interpolate {
        f: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        opts: PipelineOpts,
    },
    /// Ground interpolant of ground F and G, without lifting.
    GroundInterpolate {
        f: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        opts: PipelineOpts,
    },
    /// Interpolant of a resolution refutation via its tableau translation.
    Simulate {
        tree: PathBuf,
        #[arg(long, default_value = "huang")]
        method: Method,
        /// Compute occurrence labels when the tree has none.
        #[arg(long)]
        derive_labels: bool,
        /// Write the annotated translated tableau to FILE.
        #[arg(long, value_name = "FILE")]
        emit_tableau: Option<PathBuf>,
    },
    /// Closed tableau for F => G, or for F alone when G is omitted.
    Prove {
        f: PathBuf,
        g: Option<PathBuf>,
        #[command(flatten)]
        prover: ProverOpts,
        #[arg(long)]
        equality: bool,
    },
    /// Checks that H is an interpolant of F and G.
    Verify {
        f: PathBuf,
        g: PathBuf,
        h: PathBuf,
        #[command(flatten)]
        prover: ProverOpts,
        #[arg(long)]
        equality: bool,
    },
    /// Checks a tableau in the exchange format and prints its interpolant.
    ValidateTableau { tableau: PathBuf },
}

#[derive(Args)]
struct ProverOpts {
    #[arg(long, default_value_t = 12)]
    max_depth: usize,
    #[arg(long, default_value_t = 10_000)]
    timeout_ms: u64,
    #[arg(long, value_enum, default_value_t = StartArg::G)]
    start_clauses: StartArg,
}

#[derive(Args)]
struct PipelineOpts {
    /// `f`, `g`, or `map=FILE` with a JSON object from clause to side.
    #[arg(long, default_value = "f")]
    side_policy: String,
    /// `least-constant`, or `map=FILE` with a JSON object from variable to term.
    #[arg(long, default_value = "least-constant")]
    grounding: String,
    #[arg(long, value_enum, default_value_t = TargetArg::Nearest)]
    target: TargetArg,
    #[arg(long, value_enum, default_value_t = SideArg::F)]
    c0_side: SideArg,
    #[arg(long)]
    equality: bool,
    #[arg(long)]
    verify: bool,
    /// Write the annotated tableau to FILE.
    #[arg(long, value_name = "FILE")]
    emit_tableau: Option<PathBuf>,
    /// Print a JSON summary instead of the bare interpolant.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    prover: ProverOpts,
}

#[derive(Clone, Copy, ValueEnum)]
enum StartArg {
    G,
    F,
    Negative,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Nearest,
    SameSide,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    F,
    G,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: INPUT_ERROR, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("ctip: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Interpolate { f, g, opts } => interpolate(&f, &g, &opts, false),
        Command::GroundInterpolate { f, g, opts } => interpolate(&f, &g, &opts, true),
        Command::Simulate { tree, method, derive_labels, emit_tableau } => {
            run_simulate(&tree, method, derive_labels, emit_tableau.as_deref())
        }
        Command::Prove { f, g, prover, equality } => run_prove(&f, g.as_deref(), &prover, equality),
        Command::Verify { f, g, h, prover, equality } => run_verify(&f, &g, &h, &prover, equality),
        Command::ValidateTableau { tableau } => validate_tableau(&tableau),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_formula(path: &Path, equality: bool) -> Result<Formula, Failure> {
    parse_formula_with(&read(path)?, ParseOptions { equality })
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Prints to standard output; a closed pipe is not an error.
fn out(text: impl std::fmt::Display) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn write(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_string_map(path: &str) -> Result<BTreeMap<String, String>, Failure> {
    serde_json::from_str(&read(Path::new(path))?).map_err(|e| Failure::input(format!("{path}: {e}")))
}

impl ProverOpts {
    fn limits(&self) -> ProofLimits {
        ProofLimits { max_depth: self.max_depth, timeout_ms: self.timeout_ms, ..Default::default() }
    }

    fn policy(&self) -> ProverPolicy {
        let start = match self.start_clauses {
            StartArg::G => StartClauses::FromG,
            StartArg::F => StartClauses::FromF,
            StartArg::Negative => StartClauses::Negative,
            StartArg::All => StartClauses::All,
        };
        ProverPolicy { start, ..Default::default() }
    }
}

impl PipelineOpts {
    fn config(&self) -> Result<InterpolationConfig, Failure> {
        let side_policy = match self.side_policy.as_str() {
            "f" => SidePolicy::PreferF,
            "g" => SidePolicy::PreferG,
            other => {
                let file = other.strip_prefix("map=").ok_or_else(|| Failure::input(format!("bad side policy `{other}`")))?;
                let mut map = BTreeMap::new();
                for (clause, side) in read_string_map(file)? {
                    let side = match side.as_str() {
                        "f" | "F" => Side::F,
                        "g" | "G" => Side::G,
                        s => return Err(Failure::input(format!("{file}: bad side `{s}` for `{clause}`"))),
                    };
                    map.insert(clause, side);
                }
                SidePolicy::Explicit(map)
            }
        };
        let grounding = match self.grounding.as_str() {
            "least-constant" => GroundingPolicy::LeastConstant,
            other => {
                let file = other.strip_prefix("map=").ok_or_else(|| Failure::input(format!("bad grounding `{other}`")))?;
                let mut map = BTreeMap::new();
                for (var, term) in read_string_map(file)? {
                    let t = parse_term(&term).map_err(|e| Failure::input(format!("{file}: {term}: {e}")))?;
                    map.insert(var, t);
                }
                GroundingPolicy::Explicit(map)
            }
        };
        Ok(InterpolationConfig {
            side_policy,
            grounding,
            target_policy: match self.target {
                TargetArg::Nearest => TargetPolicy::Nearest,
                TargetArg::SameSide => TargetPolicy::SameSidePreferred,
            },
            c0_side: match self.c0_side {
                SideArg::F => Side::F,
                SideArg::G => Side::G,
            },
            limits: self.prover.limits(),
            prover: self.prover.policy(),
            equality: self.equality,
            verify: self.verify,
            ..Default::default()
        })
    }
}

fn interpolate(f: &Path, g: &Path, opts: &PipelineOpts, ground: bool) -> Outcome {
    let config = opts.config()?;
    let (f, g) = (read_formula(f, opts.equality)?, read_formula(g, opts.equality)?);
    let report: InterpolationReport = if ground { cti_ground(&f, &g, &config)? } else { ctif(&f, &g, &config)? };
    if let Some(path) = &opts.emit_tableau {
        write(path, &report.tableau.to_json_annotated(&report.annotations).to_string_pretty())?;
    }
    if opts.json {
        let mut summary = report.summary_json();
        if let Some(v) = &report.verification {
            summary["verification"] = serde_json::Value::String(v.to_string());
        }
        out(serde_json::to_string_pretty(&summary).expect("json values serialize"));
    } else {
        out(&report.interpolant);
    }
    match &report.verification {
        Some(v) => verdict(v, opts.json),
        None => Ok(()),
    }
}

/// Exit status for a verification report; `shown` if it was already printed.
fn verdict(v: &VerificationReport, shown: bool) -> Outcome {
    if v.failed() {
        let message = if shown { "verification failed".to_string() } else { format!("verification failed\n{v}") };
        return Err(Failure { code: VERIFY_FAILED, message });
    }
    if !v.confirmed() && !shown {
        eprintln!("ctip: verification inconclusive\n{v}");
    }
    Ok(())
}

fn run_simulate(path: &Path, method: Method, derive_labels: bool, emit: Option<&Path>) -> Outcome {
    let mut tree = DeductionTree::from_json(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    if derive_labels && tree.labels.is_none() {
        tree.labels = Some(derive_provenance(&tree));
    }
    let sim = simulate(&tree, method).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    if let Some(out) = emit {
        write(out, &sim.translation.tableau.to_json_annotated(&sim.annotations).to_string_pretty())?;
    }
    out(&sim.interpolant);
    Ok(())
}

fn run_prove(f: &Path, g: Option<&Path>, opts: &ProverOpts, equality: bool) -> Outcome {
    let (lhs, rhs) = match g {
        Some(g) => (read_formula(f, equality)?, read_formula(g, equality)?),
        None => (Formula::True, read_formula(f, equality)?),
    };
    let (closed, _) = close_with_constants(&[&lhs, &rhs]);
    let (mut lhs, mut rhs) = (closed[0].clone(), closed[1].clone());
    if equality {
        let (ef, eg) = ctip::normalize::equality_axioms(&lhs, &rhs, Default::default());
        lhs = Formula::and(lhs, ef);
        rhs = Formula::or(rhs, Formula::not(eg));
    }
    let prepared = ctip::normalize::prepare_inputs(&lhs, &rhs).map_err(Error::from)?;
    let proof = prove(&prepared.f_clauses, &prepared.g_clauses, opts.limits(), opts.policy()).map_err(Error::from)?;
    out(proof.tableau.to_json().to_string_pretty());
    Ok(())
}

fn run_verify(f: &Path, g: &Path, h: &Path, opts: &ProverOpts, equality: bool) -> Outcome {
    let (f, g, h) = (read_formula(f, equality)?, read_formula(g, equality)?, read_formula(h, equality)?);
    let report = verify(&f, &g, &h, opts.limits());
    out(&report);
    verdict(&report, true)?;
    if !report.confirmed() {
        return Err(Failure { code: NOT_PROVED, message: String::new() });
    }
    Ok(())
}

fn validate_tableau(path: &Path) -> Outcome {
    let bad = |e: String| Failure::input(format!("{}: {e}", path.display()));
    let json = TableauJson::from_str(&read(path)?).map_err(|e| bad(e.to_string()))?;
    let t = json.to_tableau().map_err(|e| bad(e.to_string()))?;
    let report = t.validate();
    if !report.is_ok() {
        for v in &report.violations {
            out(v);
        }
        return Err(Failure { code: VERIFY_FAILED, message: "tableau is not valid".into() });
    }
    out("valid");
    match ctip::extract::ipol(&t, ctip::tableau::Tableau::ROOT, Default::default()) {
        Ok(h) => out(h),
        Err(e) => eprintln!("ctip: no interpolant: {e}"),
    }
    Ok(())
}
