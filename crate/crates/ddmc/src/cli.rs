//! Argument parsing and command dispatch. Every verdict printed here comes
//! straight from the core verifiers.

use std::io::{Read as _, Write as _};

use clap::{Parser, Subcommand, ValueEnum};
use ddmc_core::classify::{Class, Classifier, DEFAULT_MAX_PAIRS};
use ddmc_core::continuous::{verify_continuous_proximity, verify_r_ddm_with, ProximityStatus};
use ddmc_core::functions::{project, restrict, transform, Transform};
use ddmc_core::minimize::{scaling_minimize_with, steepest_descent, verify_proximity, ScalingOptions};
use ddmc_core::{LatticeBox, LatticeFunction, DEFAULT_EPSILON};
use serde_json::{json, Value};

use crate::fuzz::{fuzz_report, Family};
use crate::gallery::run_gallery;
use crate::report::{ClassRecord, DescentRecord, ScalingRecord};
use crate::spec::{parse_box_arg, parse_function_spec, parse_point_arg, ParsedSpec, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Environment variable overriding the pair-enumeration cap.
pub const MAX_PAIRS_ENV: &str = "DDMC_MAX_PAIRS";

#[derive(Debug, Parser)]
#[command(name = "ddmc", version, about = "Classify, minimize and verify functions on the integer lattice")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    /// Slack for inequality checks; 0 compares exactly.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Descent,
    Scaling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FuzzFamily {
    Table,
    Quadratic,
    #[value(name = "2sep")]
    TwoSep,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide membership in the convexity classes over a box.
    Classify {
        /// Spec file, `-` for stdin, or inline JSON.
        spec: String,
        /// `lo..hi`, each side an integer or a comma-separated point.
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
        /// Comma-separated subset of ddm,lnat,gdmc,ldmc,ic,submodular,sepdom.
        #[arg(long, value_delimiter = ',')]
        classes: Option<Vec<String>>,
        /// Also run every equivalent form of DDM and L♮ convexity.
        #[arg(long)]
        char_variants: bool,
    },
    /// Minimize from a starting point.
    Minimize {
        spec: String,
        /// Comma-separated starting point.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, value_enum, default_value_t = Algo::Descent)]
        algo: Algo,
        /// Include the full path or the per-phase points.
        #[arg(long)]
        trace: bool,
        /// Domain diameter bound for scaling; defaults to the universe diameter.
        #[arg(long)]
        k_inf: Option<u64>,
    },
    /// Check a single property.
    Verify {
        spec: String,
        /// proximity, parallelogram, closure=<op>, r-ddm or continuous-proximity.
        #[arg(long)]
        property: String,
        #[arg(long, default_value_t = 2)]
        alpha: u64,
        /// Largest scale for r-ddm.
        #[arg(long, default_value_t = 3)]
        alpha_max: u64,
        /// Largest ‖x − y‖∞ for the parallelogram inequality.
        #[arg(long, default_value_t = 4)]
        max_levels: u64,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Run the built-in fixture gallery.
    Gallery,
    /// Generate and classify seeded random instances.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, value_enum, default_value_t = FuzzFamily::Table)]
        family: FuzzFamily,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Core(#[from] ddmc_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Spec(_) => EXIT_USAGE,
            CliError::Core(ddmc_core::Error::ResourceLimit { .. }) => EXIT_RESOURCE,
            CliError::Core(ddmc_core::Error::Diagnostic(_)) => EXIT_VIOLATED,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}

/// A command's result in both output formats.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub json: Value,
    pub human: String,
    pub code: i32,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("values serialize"),
            Format::Human => self.human.clone(),
        }
    }
}

/// Builds the classifier from flags and the raw `DDMC_MAX_PAIRS` value.
pub fn classifier(epsilon: Option<f64>, max_pairs: Option<&str>) -> Result<Classifier, CliError> {
    let epsilon = epsilon.unwrap_or(DEFAULT_EPSILON);
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(CliError::Usage("--epsilon must be a finite nonnegative number".into()));
    }
    let max_pairs = match max_pairs {
        Some(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|e| CliError::Usage(format!("{MAX_PAIRS_ENV}={s}: {e}")))?,
        None => DEFAULT_MAX_PAIRS,
    };
    Ok(Classifier { epsilon, max_pairs })
}

fn load_spec(arg: &str) -> Result<ParsedSpec, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?
    };
    Ok(parse_function_spec(&text)?)
}

fn lattice(spec: ParsedSpec, command: &str) -> Result<LatticeFunction, CliError> {
    match spec {
        ParsedSpec::Lattice(f) => Ok(f),
        ParsedSpec::Continuous(_) => Err(CliError::Usage(format!(
            "`{command}` needs a lattice function; use `verify --property r-ddm|continuous-proximity` for continuous specs"
        ))),
    }
}

fn choose_box(f_universe: &LatticeBox, arg: Option<&str>) -> Result<LatticeBox, CliError> {
    match arg {
        Some(text) => parse_box_arg(text, f_universe.dim()).map_err(CliError::Usage),
        None => Ok(f_universe.clone()),
    }
}

fn box_json(bx: &LatticeBox) -> Value {
    json!({ "lo": bx.lo().coords(), "hi": bx.hi().coords() })
}

fn verdicts_outcome(title: String, bx: &LatticeBox, records: Vec<ClassRecord>, extra: Value) -> Outcome {
    let code = if records.iter().all(|r| r.holds) { EXIT_OK } else { EXIT_VIOLATED };
    let mut human = title;
    for r in &records {
        human.push('\n');
        human.push_str(&r.human());
    }
    let mut json = json!({ "box": box_json(bx), "results": records });
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
    }
    Outcome { json, human, code }
}

pub fn execute(cli: &Cli, max_pairs_env: Option<&str>) -> Result<Outcome, CliError> {
    let c = classifier(cli.epsilon, max_pairs_env)?;
    match &cli.command {
        Command::Classify { spec, bx, classes, char_variants } => {
            let f = lattice(load_spec(spec)?, "classify")?;
            let bx = choose_box(f.universe(), bx.as_deref())?;
            let classes: Vec<Class> = match classes {
                Some(keys) => keys
                    .iter()
                    .map(|k| Class::from_key(k.trim()).ok_or_else(|| CliError::Usage(format!("unknown class `{k}`"))))
                    .collect::<Result<_, _>>()?,
                None => Class::ALL.to_vec(),
            };
            let report = c.classify(&f, &bx, &classes)?;
            let mut records: Vec<ClassRecord> =
                report.verdicts.iter().map(|(cls, v)| ClassRecord::new(cls.key(), v)).collect();
            if *char_variants {
                for (i, v) in c.ddm_characterizations(&f, &bx)?.iter().enumerate() {
                    records.push(ClassRecord::new(format!("ddm-form-{}", i + 1), v));
                }
                for (i, v) in c.lnat_characterizations(&f, &bx)?.iter().enumerate() {
                    records.push(ClassRecord::new(format!("lnat-form-{}", i + 1), v));
                }
            }
            let failures: Vec<Value> = report
                .implication_failures()
                .iter()
                .map(|fl| {
                    json!({
                        "premises": fl.premises.iter().map(|p| p.key()).collect::<Vec<_>>(),
                        "conclusion": fl.conclusion.key(),
                    })
                })
                .collect();
            let mut out = verdicts_outcome(
                format!("classification on box {:?}..{:?}", bx.lo().coords(), bx.hi().coords()),
                &bx,
                records,
                json!({ "implication_failures": failures }),
            );
            if !failures.is_empty() {
                out.human.push_str(&format!("\nimplication failures: {failures:?}"));
            }
            Ok(out)
        }
        Command::Minimize { spec, from, algo, trace, k_inf } => {
            let f = lattice(load_spec(spec)?, "minimize")?;
            let x0 = parse_point_arg(from, f.dim()).map_err(CliError::Usage)?;
            match algo {
                Algo::Descent => {
                    let t = steepest_descent(&f, &x0)?;
                    let rec = DescentRecord::new(&t, *trace);
                    let mut human = format!(
                        "minimizer {:?} value {} after {} oracle calls ({} evaluations)",
                        rec.minimizer, rec.value, rec.iterations, rec.oracle_evals
                    );
                    if *trace {
                        for (p, v) in t.path.iter().zip(&t.values) {
                            human.push_str(&format!("\n  {:?} {v}", p.coords()));
                        }
                    }
                    Ok(Outcome { json: serde_json::to_value(rec).expect("serializable"), human, code: EXIT_OK })
                }
                Algo::Scaling => {
                    let t = scaling_minimize_with(&f, &x0, ScalingOptions { k_inf: *k_inf })?;
                    let value = f.value(&t.minimizer).raw();
                    let rec = ScalingRecord::new(&t, value, *trace);
                    let mut human = format!(
                        "minimizer {:?} value {value} after {} phases and {} oracle calls (K = {})",
                        rec.minimizer, rec.phases, rec.total_calls, rec.k_inf
                    );
                    if *trace {
                        for ((a, p), calls) in t.alphas.iter().zip(&t.phase_points).zip(&t.phase_calls) {
                            human.push_str(&format!("\n  alpha {a}: {:?} ({calls} calls)", p.coords()));
                        }
                    }
                    Ok(Outcome { json: serde_json::to_value(rec).expect("serializable"), human, code: EXIT_OK })
                }
            }
        }
        Command::Verify { spec, property, alpha, alpha_max, max_levels, bx } => {
            verify(&c, load_spec(spec)?, property, *alpha, *alpha_max, *max_levels, bx.as_deref())
        }
        Command::Gallery => {
            let r = run_gallery();
            let mut human = String::new();
            for fx in &r.fixtures {
                human.push_str(&format!(
                    "{} {:<24} {}  [{}]\n",
                    if fx.passed { "ok  " } else { "FAIL" },
                    fx.name,
                    fx.claim,
                    fx.observed
                ));
                if let (false, Some(w)) = (fx.passed, &fx.expected_witness) {
                    human.push_str(&format!("     expected witness x={:?} y={:?}\n", w.x, w.y));
                }
            }
            let passed = r.fixtures.iter().filter(|f| f.passed).count();
            human.push_str(&format!("{passed}/{} fixtures match", r.fixtures.len()));
            let code = if r.passed { EXIT_OK } else { EXIT_VIOLATED };
            Ok(Outcome { json: serde_json::to_value(r).expect("serializable"), human, code })
        }
        Command::Fuzz { seed, count, family } => {
            let family = match family {
                FuzzFamily::Table => Family::Table,
                FuzzFamily::Quadratic => Family::Quadratic,
                FuzzFamily::TwoSep => Family::TwoSeparable,
            };
            let json = fuzz_report(&c, *seed, *count, family)?;
            let violations = json["ddm_violations"].as_u64().unwrap_or(0);
            let human = format!(
                "{count} {} instances from seed {seed}: {} DDM, {violations} not DDM",
                family.key(),
                *count as u64 - violations
            );
            // Fuzzing reports verdicts; finding non-DDM instances is expected.
            Ok(Outcome { json, human, code: EXIT_OK })
        }
    }
}

fn parse_ints(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| CliError::Usage(format!("`{t}`: {e}"))))
        .collect()
}

/// `scale:2`, `translate:1,0`, `permute:1,0`, `sign_flip:-1,1`,
/// `restrict:0=1,2=0`, `project:0,1`.
fn closure_op(f: &LatticeFunction, op: &str) -> Result<LatticeFunction, CliError> {
    let (name, arg) = op.split_once(':').unwrap_or((op, ""));
    let g = match name {
        "scale" => transform(f, &Transform::Scale(arg.parse().map_err(|_| CliError::Usage(format!("scale `{arg}`")))?))?,
        "translate" => transform(f, &Transform::Translate(parse_ints(arg)?.into()))?,
        "sign_flip" => transform(f, &Transform::SignFlip(parse_ints(arg)?))?,
        "permute" => {
            let p = parse_ints(arg)?.into_iter().map(|v| v as usize).collect();
            transform(f, &Transform::Permute(p))?
        }
        "project" => {
            let keep: Vec<usize> = parse_ints(arg)?.into_iter().map(|v| v as usize).collect();
            project(f, &keep)?
        }
        "restrict" => {
            let fixed = arg
                .split(',')
                .map(|kv| {
                    let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Usage(format!("`{kv}` is not i=value")))?;
                    let k = k.trim().parse::<usize>().map_err(|e| CliError::Usage(format!("`{k}`: {e}")))?;
                    let v = v.trim().parse::<i64>().map_err(|e| CliError::Usage(format!("`{v}`: {e}")))?;
                    Ok((k, v))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            restrict(f, &fixed)?
        }
        other => return Err(CliError::Usage(format!("unknown closure operation `{other}`"))),
    };
    Ok(g)
}

fn verify(
    c: &Classifier,
    spec: ParsedSpec,
    property: &str,
    alpha: u64,
    alpha_max: u64,
    max_levels: u64,
    bx: Option<&str>,
) -> Result<Outcome, CliError> {
    if let ParsedSpec::Continuous(f) = &spec {
        let bx = match bx {
            Some(text) => parse_box_arg(text, f.dim()).map_err(CliError::Usage)?,
            None => {
                let lo: Vec<i64> = f.lo.iter().map(|v| v.ceil() as i64).collect();
                let hi: Vec<i64> = f.hi.iter().map(|v| v.floor() as i64).collect();
                LatticeBox::new(lo, hi)?
            }
        };
        return match property {
            "r-ddm" => {
                let v = verify_r_ddm_with(c, f, alpha_max, &bx)?;
                let rec = ClassRecord::new("r-ddm", &v.verdict);
                let extra = json!({ "evidence_up_to": v.evidence_up_to, "failing_alpha": v.failing_alpha });
                let mut out = verdicts_outcome(
                    format!("scaled restrictions for alpha in 1..={alpha_max}"),
                    &bx,
                    vec![rec],
                    extra,
                );
                out.human.push_str(&format!("\nevidence up to alpha = {}", v.evidence_up_to));
                Ok(out)
            }
            "continuous-proximity" => {
                let r = verify_continuous_proximity(f, &bx)?;
                let status = match r.status {
                    ProximityStatus::Holds => "holds",
                    ProximityStatus::Violated => "violated",
                    ProximityStatus::Inconclusive => "inconclusive",
                };
                let json = json!({
                    "box": box_json(&bx),
                    "status": status,
                    "continuous_minimizer": r.continuous.point,
                    "continuous_value": r.continuous.value,
                    "unique": r.continuous.unique,
                    "discrete_argmin": r.discrete_argmin.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>(),
                    "max_distance": r.max_discrete_distance,
                    "min_distance": r.min_discrete_distance,
                });
                let human = format!(
                    "continuous minimizer {:?}; {} discrete minimizers at distance {}..{}: {status}",
                    r.continuous.point,
                    r.discrete_argmin.len(),
                    r.min_discrete_distance,
                    r.max_discrete_distance
                );
                let code = match r.status {
                    ProximityStatus::Holds => EXIT_OK,
                    ProximityStatus::Violated => EXIT_VIOLATED,
                    ProximityStatus::Inconclusive => EXIT_USAGE,
                };
                Ok(Outcome { json, human, code })
            }
            other => Err(CliError::Usage(format!(
                "property `{other}` needs a lattice function; continuous specs support r-ddm and continuous-proximity"
            ))),
        };
    }
    let f = lattice(spec, "verify")?;
    let bx = choose_box(f.universe(), bx)?;
    let (title, records) = match property {
        "proximity" => {
            let v = verify_proximity(&f, alpha, &bx)?;
            (format!("proximity at alpha = {alpha}"), vec![ClassRecord::new("proximity", &v)])
        }
        "parallelogram" => {
            let v = c.parallelogram_inequality(&f, &bx, max_levels)?;
            (format!("parallelogram inequality up to m = {max_levels}"), vec![ClassRecord::new("parallelogram", &v)])
        }
        p if p.starts_with("closure=") => {
            let op = &p["closure=".len()..];
            let base = c.is_ddm_convex(&f, &bx)?;
            let g = closure_op(&f, op)?;
            let image = c.is_ddm_convex(&g, g.universe())?;
            let records = vec![ClassRecord::new("ddm", &base), ClassRecord::new(format!("ddm-after-{op}"), &image)];
            let vacuous = !base.holds;
            let mut out = verdicts_outcome(format!("closure under {op}"), &bx, records, json!({ "vacuous": vacuous }));
            if vacuous {
                // Closure says nothing about inputs outside the class.
                out.code = EXIT_OK;
                out.human.push_str("\ninput is not DDM; closure holds vacuously");
            }
            return Ok(out);
        }
        other => return Err(CliError::Usage(format!("unknown property `{other}`"))),
    };
    Ok(verdicts_outcome(title, &bx, records, json!({})))
}

/// Parses, executes and prints; returns the process exit code.
pub fn main_with<I, T>(args: I, max_pairs_env: Option<&str>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli, max_pairs_env) {
        Ok(out) => {
            let _ = writeln!(std::io::stdout(), "{}", out.render(cli.format));
            out.code
        }
        Err(e) => {
            match cli.format {
                Format::Json => {
                    let _ = writeln!(std::io::stdout(), "{}", json!({ "error": e.to_string() }));
                }
                Format::Human => {}
            }
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
