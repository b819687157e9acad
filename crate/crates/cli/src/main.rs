//! `nangle`: periodicity and `n`-angulations of self-injective quiver algebras.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use nangle::algebra::{check_self_injective, compute_basis, parse_algebra, Algebra, AlgebraSpec, DEFAULT_PATH_BOUND};
use nangle::angulation::{verify_axioms, Angulation, VerifyOptions};
use nangle::homological::HullChoice;
use nangle::module::{hom_space, random_morphism, Module};
use nangle::periodicity::{quasi_period_scan, PeriodicityReport, DEFAULT_MAX_N};
use nangle::report::{vector_json, SCHEMA};
use nangle::{Error, FieldSpec, Fp, Rational, Scalar};

#[derive(Parser, Debug)]
#[command(name = "nangle", version, about = "Quasi-periodic self-injective algebras and their n-angulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Number of quasi-periods spliced into the functor sequence.
    #[arg(long, global = true, default_value_t = 1)]
    m: usize,
    /// Segment length; must be a multiple of the quasi-period. Defaults to the quasi-period.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, env = "NANGLE_SEED", default_value_t = 0)]
    seed: u64,
    /// Largest syzygy index searched for a quasi-period.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_N)]
    max: usize,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    emit: Option<PathBuf>,
    /// Compare membership under the alternative pinned hull choice.
    #[arg(long, global = true)]
    perturb_choices: bool,
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Basis and self-injectivity.
    Algebra { file: PathBuf },
    /// Quasi-period, twist and period of the algebra as a bimodule.
    Period { file: PathBuf },
    /// Build one angle and decide its membership.
    Angulate {
        file: PathBuf,
        #[arg(value_enum, default_value_t = Mode::Standard)]
        mode: Mode,
    },
    /// Randomized check of the axioms.
    Verify { file: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// The standard angle on the top of `A`.
    Standard,
    /// The completion of a seeded random endomorphism of `A`.
    Complete,
}

/// Everything a run depends on; recorded in every report.
#[derive(Clone, Debug)]
struct RunConfig {
    command: Command,
    m: usize,
    n: Option<usize>,
    samples: usize,
    seed: u64,
    max: usize,
    emit: Option<PathBuf>,
    perturb: bool,
    verbose: bool,
}

impl RunConfig {
    fn file(&self) -> &PathBuf {
        match &self.command {
            Command::Algebra { file } | Command::Period { file } | Command::Angulate { file, .. } | Command::Verify { file } => file,
        }
    }

    fn to_json(&self) -> Value {
        let (name, mode) = match &self.command {
            Command::Algebra { .. } => ("algebra", None),
            Command::Period { .. } => ("period", None),
            Command::Angulate { mode, .. } => ("angulate", Some(if *mode == Mode::Standard { "standard" } else { "complete" })),
            Command::Verify { .. } => ("verify", None),
        };
        json!({
            "command": name,
            "mode": mode,
            "file": self.file().display().to_string(),
            "m": self.m,
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "max": self.max,
            "perturb_choices": self.perturb,
        })
    }
}

/// A run's result: the report and whether it is a mathematical failure.
struct Outcome {
    report: Value,
    failure: bool,
}

#[derive(Debug)]
enum Failure {
    /// Exit 1, with a report that replays the failure.
    Math(Value),
    /// Exit 2.
    Usage(String),
}

fn classify(e: Error, context: Value) -> Failure {
    match e {
        Error::NotSelfInjective(_)
        | Error::NoPeriod { .. }
        | Error::NotFiniteDimensional { .. }
        | Error::Degenerate(_)
        | Error::NotExact { .. }
        | Error::Construction(_)
        | Error::Hypothesis(_) => Failure::Math(json!({ "error": e.to_string(), "context": context })),
        _ => Failure::Usage(e.to_string()),
    }
}

fn main() -> ExitCode {
    let (code, text) = execute(Cli::parse());
    if let Some(text) = text {
        // a closed pipe downstream is not an error of the run
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }
    ExitCode::from(code)
}

/// Runs one command; returns the exit code and the report text, if any.
fn execute(cli: Cli) -> (u8, Option<String>) {
    let cfg = RunConfig {
        command: cli.command,
        m: cli.m,
        n: cli.n,
        samples: cli.samples,
        seed: cli.seed,
        max: cli.max,
        emit: cli.emit,
        perturb: cli.perturb_choices,
        verbose: cli.verbose,
    };
    let result = load(&cfg).and_then(|spec| dispatch(&cfg, &spec));
    let (mut report, code) = match result {
        Ok(o) => (o.report, if o.failure { 1 } else { 0 }),
        Err(Failure::Math(v)) => (v, 1),
        Err(Failure::Usage(msg)) => {
            eprintln!("nangle: {msg}");
            return (2, None);
        }
    };
    if let Value::Object(map) = &mut report {
        map.insert("schema".into(), json!(SCHEMA));
        map.insert("config".into(), cfg.to_json());
    }
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    if let Some(path) = &cfg.emit {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("nangle: cannot write {}: {e}", path.display());
            return (2, Some(text));
        }
    }
    (code, Some(text))
}

fn load(cfg: &RunConfig) -> Result<AlgebraSpec, Failure> {
    let path = cfg.file();
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_algebra(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

macro_rules! prime_dispatch {
    ($p:expr, $cfg:expr, $spec:expr, [$($q:literal),*]) => {
        match $p {
            $($q => run::<Fp<$q>>($cfg, $spec),)*
            p => Err(Failure::Usage(Error::UnsupportedField(p).to_string())),
        }
    };
}

fn dispatch(cfg: &RunConfig, spec: &AlgebraSpec) -> Result<Outcome, Failure> {
    match spec.field {
        FieldSpec::Rationals => run::<Rational>(cfg, spec),
        FieldSpec::Prime(p) => prime_dispatch!(
            p,
            cfg,
            spec,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
        ),
    }
}

fn run<F: Scalar>(cfg: &RunConfig, spec: &AlgebraSpec) -> Result<Outcome, Failure> {
    let context = json!({ "algebra": spec.to_json() });
    let a = Arc::new(compute_basis::<F>(spec, DEFAULT_PATH_BOUND).map_err(|e| classify(e, context.clone()))?);
    match &cfg.command {
        Command::Algebra { .. } => Ok(algebra_report(cfg, spec, &a)),
        Command::Period { .. } => {
            let (report, _) = quasi_period_scan(&a, cfg.max).map_err(|e| classify(e, context.clone()))?;
            if cfg.verbose {
                eprintln!("quasi-period {}, twist order {:?}, period {:?}", report.quasi_period, report.twist_order, report.period);
            }
            Ok(Outcome { report: json!({ "period": report.to_json() }), failure: false })
        }
        Command::Angulate { mode, .. } => {
            let (ang, report) = build(cfg, &a, HullChoice::Standard, &context)?;
            angulate(cfg, &ang, &report, *mode).map_err(|e| classify(e, context))
        }
        Command::Verify { .. } => {
            let (ang, report) = build(cfg, &a, HullChoice::Standard, &context)?;
            let perturbed = if cfg.perturb { Some(ang.with_frobenius(Arc::new(nangle::homological::Frobenius::with_choice(Arc::clone(&a), HullChoice::Perturbed).map_err(|e| classify(e, context.clone()))?))) } else { None };
            let result = verify_axioms(&ang, VerifyOptions { samples: cfg.samples, seed: cfg.seed }, perturbed.as_ref());
            if cfg.verbose {
                for c in &result.counts {
                    eprintln!("{}: {}/{}", c.axiom, c.passed, c.passed + c.failed);
                }
            }
            let failure = !result.all_passed();
            Ok(Outcome { report: json!({ "structure": structure_json(&ang, &report), "verify": result.to_json(), "algebra": spec.to_json() }), failure })
        }
    }
}

fn algebra_report<F: Scalar>(cfg: &RunConfig, spec: &AlgebraSpec, a: &Arc<Algebra<F>>) -> Outcome {
    let basis: Vec<&str> = a.labels().iter().map(String::as_str).collect();
    let mut report = json!({
        "algebra": spec.to_json(),
        "field": spec.field.characteristic(),
        "dim": a.dim(),
        "vertices": a.num_vertices(),
        "basis": basis,
    });
    let failure = match check_self_injective(a) {
        Ok(nak) => {
            report["self_injective"] = json!(true);
            report["nakayama_permutation"] = json!(nak.permutation);
            report["socle"] = Value::Array(nak.socle.iter().map(|s| vector_json(s)).collect());
            false
        }
        Err(e) => {
            report["self_injective"] = json!(false);
            report["reason"] = json!(e.to_string());
            if cfg.verbose {
                eprintln!("not self-injective: {e}");
            }
            true
        }
    };
    Outcome { report, failure }
}

/// The segment length: `m·n` with `n` the quasi-period unless given. When
/// that is below 3 and `n` was not given, the smallest multiple of the
/// period that is at least 3.
fn length(qp: usize, period: Option<usize>, m: usize, n: Option<usize>) -> Result<usize, Failure> {
    if m == 0 {
        return Err(Failure::Usage("--m must be positive".into()));
    }
    if let Some(n) = n {
        if n == 0 || n % qp != 0 {
            return Err(Failure::Usage(format!("--n {n} is not a multiple of the quasi-period {qp}")));
        }
        let total = n * m;
        if total < 3 {
            return Err(Failure::Usage(format!("an n-angulation needs m·n ≥ 3, got {total}")));
        }
        return Ok(total);
    }
    let total = qp * m;
    if total >= 3 {
        return Ok(total);
    }
    let p = period.ok_or_else(|| Failure::Math(json!({ "error": "m·n < 3 and the twist has no finite order" })))?;
    Ok(p * 3usize.div_ceil(p))
}

fn build<F: Scalar>(cfg: &RunConfig, a: &Arc<Algebra<F>>, choice: HullChoice, context: &Value) -> Result<(Angulation<F>, PeriodicityReport<F>), Failure> {
    let (report, _) = quasi_period_scan(a, cfg.max).map_err(|e| classify(e, context.clone()))?;
    let total = length(report.quasi_period, report.period, cfg.m, cfg.n)?;
    if cfg.verbose {
        eprintln!("quasi-period {}, building the {total}-angulation", report.quasi_period);
    }
    let ang = Angulation::build(a, total, choice).map_err(|e| classify(e, context.clone()))?;
    Ok((ang, report))
}

fn structure_json<F: Scalar>(ang: &Angulation<F>, report: &PeriodicityReport<F>) -> Value {
    json!({
        "n": ang.n(),
        "quasi_period": report.quasi_period,
        "suspension_is_identity": ang.functor().suspension().is_identity(),
        "suspension_vertex_permutation": ang.functor().suspension().tau().vertex_permutation(),
    })
}

fn angulate<F: Scalar>(cfg: &RunConfig, ang: &Angulation<F>, report: &PeriodicityReport<F>, mode: Mode) -> Result<Outcome, Error> {
    let a = ang.algebra();
    let regular = Module::regular(a);
    let x = match mode {
        Mode::Standard => {
            let top = regular.quotient(&regular.radical()).module;
            ang.standard_angle(&top)
        }
        Mode::Complete => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let f1 = random_morphism(&regular, &regular, &hom_space(&regular, &regular), &mut rng);
            ang.complete_morphism(&regular, &regular, &f1)?
        }
    };
    let cert = ang.phi_member(&x)?;
    if cfg.verbose {
        eprintln!("exact: {}, in Φ: {}", cert.exact, cert.verdict);
    }
    Ok(Outcome {
        report: json!({ "structure": structure_json(ang, report), "sequence": x.to_json(), "certificate": cert.to_json() }),
        failure: !cert.verdict,
    })
}

#[cfg(test)]
mod tests {
    use clap::Parser;
    use serde_json::Value;

    use super::{execute, length, Cli, Failure};

    fn fixture(name: &str) -> String {
        format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
    }

    fn run(args: &[&str]) -> (u8, Option<Value>) {
        let cli = Cli::try_parse_from(std::iter::once("nangle").chain(args.iter().copied())).unwrap();
        let (code, text) = execute(cli);
        (code, text.map(|t| serde_json::from_str(&t).unwrap()))
    }

    #[test]
    fn exit_codes() {
        let loop3 = fixture("loop_p3");
        let (code, report) = run(&["algebra", &loop3]);
        assert_eq!(code, 0);
        let report = report.unwrap();
        assert_eq!(report["schema"], "1");
        assert_eq!(report["config"]["command"], "algebra");
        assert_eq!(run(&["algebra", &fixture("a2_hereditary")]).0, 1);
        assert_eq!(run(&["period", &fixture("no_such_algebra")]), (2, None));
        assert_eq!(run(&["verify", &fixture("preprojective_a3"), "--n", "4", "--samples", "1"]), (2, None));
    }

    #[test]
    fn emit_writes_the_printed_report() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("report.json");
        let cli = Cli::try_parse_from(["nangle", "period", &fixture("nakayama_2_2"), "--emit", out.to_str().unwrap()]).unwrap();
        let (code, text) = execute(cli);
        assert_eq!(code, 0);
        assert_eq!(std::fs::read_to_string(&out).unwrap(), format!("{}\n", text.unwrap()));
    }

    #[test]
    fn seeded_runs_repeat() {
        let file = fixture("nakayama_2_2");
        let args = ["angulate", &file, "complete", "--seed", "11"];
        let (code, first) = run(&args);
        assert_eq!(code, 0);
        assert_eq!(run(&args).1, first);
        let other = run(&["angulate", &file, "complete", "--seed", "12"]).1.unwrap();
        assert_eq!(other["config"]["seed"], 12);
    }

    #[test]
    fn default_length_rule() {
        assert_eq!(length(1, Some(2), 3, None).unwrap(), 3);
        assert_eq!(length(1, Some(2), 1, None).unwrap(), 4);
        assert_eq!(length(3, Some(6), 2, None).unwrap(), 6);
        assert_eq!(length(2, Some(2), 1, None).unwrap(), 4);
        assert!(matches!(length(3, Some(6), 1, Some(4)), Err(Failure::Usage(_))));
        assert!(matches!(length(1, None, 1, None), Err(Failure::Math(_))));
    }
}
