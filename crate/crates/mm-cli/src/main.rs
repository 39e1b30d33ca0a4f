//! `mm` — command-line surface over the mm-core library: polynomial
//! evaluation, recurrence-coefficient tables, verification suites, grid
//! sweeps and operator export.
//!
//! Exit codes: 0 = success / verification passed, 1 = a verification suite
//! found a failing identity, 2 = usage or parameter error. Rationals travel
//! as "p/q" strings; output is deterministic for identical configs. The
//! environment variable MM_MAX_DENOM_BITS caps denominator growth in any
//! payload (exceeding it aborts with exit 2).

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mm_core::multiindex::{indices_in_box, MultiIndex};
use mm_core::orthocheck::{verify_multiple_orthogonality, OrthoFamily};
use mm_core::oscillator::{
    build_b, commutator_interior, commutator_on_eigenstate, eigenstate_first, eigenstate_second,
    hamiltonian_first, hamiltonian_second, ladder, number_op, verify_eigen_action, FockLattice,
    LadderKind, OperatorOrdering, SparseOperator,
};
use mm_core::polyfam::{
    charlier_explicit, charlier_value, generating_check_first, generating_check_second,
    charlier_limit_probe, meixner1_explicit, meixner2_explicit, meixner_classical,
    rodrigues1_eval, rodrigues2_eval, CharlierParams, MeixnerFirstParams, MeixnerKind,
    MeixnerSecondParams,
};
use mm_core::rational::Rational;
use mm_core::recurrence::{raise_once, recurrence_build_table, FamilyParams, NNCoefficients};
use mm_core::summability::{
    duality_charlier, duality_meixner, norm_series_charlier, norm_series_first,
    norm_series_second, region_membership_first, region_membership_second, SeriesProbe, Verdict,
    WeightVectorT,
};

#[derive(Parser)]
#[command(
    name = "mm",
    about = "Exact-arithmetic toolkit for multiple Meixner/Charlier polynomials, \
             their recurrences, orthogonality, summability and oscillator Hamiltonians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a polynomial; print coefficients or a point value
    Eval(EvalArgs),
    /// Evaluate via the Rodrigues formula on the integer grid
    Rodrigues(RodriguesArgs),
    /// Nearest-neighbor recurrence coefficients at one multi-index
    Coeffs(CoeffsArgs),
    /// Run a verification suite (exit 0 iff everything passes)
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Emit CSV tables over grids
    #[command(subcommand)]
    Sweep(SweepCommand),
    /// Export a lattice operator as sparse triplets
    ExportOperator(ExportArgs),
}

/// Family parameters; flags or the --params-json escape hatch.
#[derive(Args, Clone, Default)]
struct FamilyArgs {
    /// Family: first | second | charlier | classical
    #[arg(long)]
    kind: String,
    /// Shared beta (first kind, classical)
    #[arg(long)]
    beta: Option<String>,
    /// c values: comma-separated list (first kind) or a single value
    #[arg(long)]
    c: Option<String>,
    /// beta values for the second kind, comma-separated
    #[arg(long)]
    betas: Option<String>,
    /// a values for the Charlier family, comma-separated
    #[arg(long)]
    a: Option<String>,
    /// JSON object {"beta": ..., "c": [...], "betas": [...], "a": [...]}
    /// overriding the individual flags
    #[arg(long)]
    params_json: Option<String>,
}

#[derive(Clone)]
enum Family {
    First(MeixnerFirstParams),
    Second(MeixnerSecondParams),
    Charlier(CharlierParams),
    Classical { beta: Rational, c: Rational },
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Multi-index, e.g. 1,0 (single integer for classical)
    #[arg(long)]
    n: String,
    /// Optional evaluation point "p/q"
    #[arg(long)]
    at: Option<String>,
    /// Output format: json | pretty
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct RodriguesArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    n: String,
    /// Integer grid point x >= 0
    #[arg(long)]
    x: usize,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    n: String,
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Nearest-neighbor recurrence identities over a box of multi-indices
    Recurrence {
        #[command(flatten)]
        family: FamilyArgs,
        /// Box caps, e.g. 3,3
        #[arg(long = "box")]
        box_caps: String,
    },
    /// Defining orthogonality conditions with rigorous tail brackets
    Orthogonality {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: String,
        /// Truncation cutoff K
        #[arg(long, default_value_t = 200)]
        cutoff: usize,
        /// Tail-bound tolerance as a rational
        #[arg(long, default_value = "1/1000000000000")]
        epsilon: String,
    },
    /// Generating-function coefficients against polynomial values
    Generating {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Comma-separated rational x samples
        #[arg(long, default_value = "0,1,2,1/2,-1/3,7/5,5")]
        x_samples: String,
    },
    /// Exact eigen-action of the oscillator Hamiltonians
    Eigen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        caps: String,
        #[arg(long)]
        x: String,
        /// recurrence-faithful | as-printed
        #[arg(long, default_value = "recurrence-faithful")]
        ordering: String,
    },
    /// Raw interior commutator and its action on eigenstates
    Commutator {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        caps: String,
        #[arg(long, default_value = "0,1,2,1/3")]
        x_samples: String,
    },
    /// Square-summability dichotomy probe
    Summability {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        x: String,
        /// Basis weights t, comma-separated
        #[arg(long)]
        t: String,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Self-duality identities (classical families)
    Duality {
        /// meixner | charlier
        #[arg(long)]
        family: String,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        c: Option<String>,
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// Charlier limit of the scaled Meixner families
    Limit {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value = "100,1000,10000")]
        beta_scales: String,
        /// Required gap-shrink factor per step
        #[arg(long, default_value = "5")]
        min_ratio: String,
    },
}

#[derive(Subcommand)]
enum SweepCommand {
    /// Recurrence-coefficient table over a box of multi-indices (CSV)
    Coeffs {
        #[command(flatten)]
        family: FamilyArgs,
        /// Box caps, e.g. 3,3; an empty string emits only the header
        #[arg(long = "box")]
        box_caps: String,
    },
    /// Summability verdicts over an x grid (CSV)
    Summability {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        t: String,
        #[arg(long)]
        x_grid: String,
        #[arg(long)]
        depth: Option<usize>,
    },
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    caps: String,
    /// lower | raise | number | b | binv | hamiltonian
    #[arg(long)]
    op: String,
    /// Mode index, 1-based
    #[arg(long, default_value_t = 1)]
    mode: usize,
    #[arg(long, default_value = "recurrence-faithful")]
    ordering: String,
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<mm_core::Error> for CliError {
    fn from(e: mm_core::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Rodrigues(args) => cmd_rodrigues(args),
        Command::Coeffs(args) => cmd_coeffs(args),
        Command::Verify(v) => cmd_verify(v),
        Command::Sweep(s) => cmd_sweep(s),
        Command::ExportOperator(args) => cmd_export(args),
    }
}

// ---- parsing helpers ----

fn parse_rational(s: &str) -> CliResult<Rational> {
    s.parse()
        .map_err(|e: mm_core::Error| CliError::usage(format!("bad rational `{s}`: {e}")))
}

fn parse_rational_list(s: &str) -> CliResult<Vec<Rational>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_rational)
        .collect()
}

fn parse_usize_list(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::usage(format!("bad nonnegative integer `{t}`")))
        })
        .collect()
}

fn parse_index(s: &str) -> CliResult<MultiIndex> {
    let entries = parse_usize_list(s)?;
    if entries.is_empty() {
        return Err(CliError::usage("multi-index must not be empty"));
    }
    Ok(MultiIndex::new(entries))
}

fn parse_ordering(s: &str) -> CliResult<OperatorOrdering> {
    match s {
        "recurrence-faithful" => Ok(OperatorOrdering::RecurrenceFaithful),
        "as-printed" => Ok(OperatorOrdering::AsPrinted),
        other => Err(CliError::usage(format!(
            "unknown ordering `{other}` (use recurrence-faithful | as-printed)"
        ))),
    }
}

impl FamilyArgs {
    fn resolve(&self) -> CliResult<Family> {
        let mut beta = self.beta.clone();
        let mut c = self.c.clone();
        let mut betas = self.betas.clone();
        let mut a = self.a.clone();
        if let Some(raw) = &self.params_json {
            let v: Value = serde_json::from_str(raw)
                .map_err(|e| CliError::usage(format!("bad --params-json: {e}")))?;
            let as_list = |v: &Value| -> Option<String> {
                match v {
                    Value::String(s) => Some(s.clone()),
                    Value::Array(items) => Some(
                        items
                            .iter()
                            .filter_map(|i| i.as_str().map(str::to_string))
                            .collect::<Vec<_>>()
                            .join(","),
                    ),
                    _ => None,
                }
            };
            if let Some(x) = v.get("beta").and_then(|x| as_list(x)) {
                beta = Some(x);
            }
            if let Some(x) = v.get("c").and_then(|x| as_list(x)) {
                c = Some(x);
            }
            if let Some(x) = v.get("betas").and_then(|x| as_list(x)) {
                betas = Some(x);
            }
            if let Some(x) = v.get("a").and_then(|x| as_list(x)) {
                a = Some(x);
            }
        }
        let need = |opt: &Option<String>, name: &str| -> CliResult<String> {
            opt.clone()
                .ok_or_else(|| CliError::usage(format!("--{name} is required for this family")))
        };
        match self.kind.as_str() {
            "first" => {
                let beta = parse_rational(&need(&beta, "beta")?)?;
                let c = parse_rational_list(&need(&c, "c")?)?;
                Ok(Family::First(MeixnerFirstParams::new(beta, c)?))
            }
            "second" => {
                let betas = parse_rational_list(&need(&betas, "betas")?)?;
                let c = parse_rational(&need(&c, "c")?)?;
                Ok(Family::Second(MeixnerSecondParams::new(betas, c)?))
            }
            "charlier" => {
                let a = parse_rational_list(&need(&a, "a")?)?;
                Ok(Family::Charlier(CharlierParams::new(a)?))
            }
            "classical" => {
                let beta = parse_rational(&need(&beta, "beta")?)?;
                let c = parse_rational(&need(&c, "c")?)?;
                Ok(Family::Classical { beta, c })
            }
            other => Err(CliError::usage(format!(
                "unknown kind `{other}` (use first | second | charlier | classical)"
            ))),
        }
    }
}

impl Family {
    fn describe(&self) -> Value {
        match self {
            Family::First(p) => json!({
                "kind": "first",
                "beta": p.beta().to_string(),
                "c": p.c().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            }),
            Family::Second(p) => json!({
                "kind": "second",
                "betas": p.betas().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "c": p.c().to_string(),
            }),
            Family::Charlier(p) => json!({
                "kind": "charlier",
                "a": p.a().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            }),
            Family::Classical { beta, c } => json!({
                "kind": "classical",
                "beta": beta.to_string(),
                "c": c.to_string(),
            }),
        }
    }
}

// ---- denominator growth guard ----

fn denom_cap() -> Option<u64> {
    std::env::var("MM_MAX_DENOM_BITS")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
}

fn check_rational_str(s: &str, cap: u64) -> CliResult<()> {
    if let Ok(r) = s.parse::<Rational>() {
        if r.denominator_bits() > cap {
            return Err(CliError::usage(format!(
                "denominator exceeds MM_MAX_DENOM_BITS={cap} ({} bits)",
                r.denominator_bits()
            )));
        }
    }
    Ok(())
}

fn enforce_denom_cap(value: &Value) -> CliResult<()> {
    let Some(cap) = denom_cap() else {
        return Ok(());
    };
    fn walk(v: &Value, cap: u64) -> CliResult<()> {
        match v {
            Value::String(s) => check_rational_str(s, cap),
            Value::Array(items) => items.iter().try_for_each(|i| walk(i, cap)),
            Value::Object(map) => map.values().try_for_each(|i| walk(i, cap)),
            _ => Ok(()),
        }
    }
    walk(value, cap)
}

fn emit_json(value: &Value) -> CliResult<()> {
    enforce_denom_cap(value)?;
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    Ok(())
}

// ---- commands ----

fn cmd_eval(args: EvalArgs) -> CliResult<u8> {
    let family = args.family.resolve()?;
    let n = parse_index(&args.n)?;
    let poly = match &family {
        Family::First(p) => meixner1_explicit(&n, p)?,
        Family::Second(p) => meixner2_explicit(&n, p)?,
        Family::Charlier(p) => charlier_explicit(&n, p)?,
        Family::Classical { beta, c } => {
            if n.len() != 1 {
                return Err(CliError::usage("classical family takes a single index"));
            }
            meixner_classical(n.get(0), beta, c)?
        }
    };
    let mut payload = json!({
        "family": family.describe(),
        "n": n.entries(),
    });
    let obj = payload.as_object_mut().expect("object");
    for (k, v) in serde_json::to_value(&poly)
        .expect("poly serializes")
        .as_object()
        .expect("object")
    {
        obj.insert(k.clone(), v.clone());
    }
    if let Some(at) = &args.at {
        let x = parse_rational(at)?;
        obj.insert("at".into(), json!(x.to_string()));
        obj.insert("value".into(), json!(poly.eval(&x).to_string()));
    }
    match args.format.as_str() {
        "pretty" => {
            enforce_denom_cap(&payload)?;
            println!("degree {}", poly.degree());
            let terms: Vec<String> = poly
                .coeffs()
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| format!("({c})x^{i}"))
                .collect();
            println!("{}", if terms.is_empty() { "0".into() } else { terms.join(" + ") });
            if let Some(v) = payload.get("value") {
                println!("value at {} = {}", payload["at"].as_str().unwrap(), v.as_str().unwrap());
            }
        }
        _ => emit_json(&payload)?,
    }
    Ok(0)
}

fn cmd_rodrigues(args: RodriguesArgs) -> CliResult<u8> {
    let family = args.family.resolve()?;
    let n = parse_index(&args.n)?;
    let value = match &family {
        Family::First(p) => rodrigues1_eval(&n, p, args.x)?,
        Family::Second(p) => rodrigues2_eval(&n, p, args.x)?,
        _ => {
            return Err(CliError::usage(
                "rodrigues evaluation is defined for kinds first | second",
            ))
        }
    };
    emit_json(&json!({
        "family": family.describe(),
        "n": n.entries(),
        "x": args.x,
        "value": value.to_string(),
    }))?;
    Ok(0)
}

fn family_params(family: &Family) -> CliResult<FamilyParams> {
    match family {
        Family::First(p) => Ok(FamilyParams::First(p.clone())),
        Family::Second(p) => Ok(FamilyParams::Second(p.clone())),
        _ => Err(CliError::usage(
            "recurrence coefficients are defined for kinds first | second",
        )),
    }
}

fn coeffs_json(c: &NNCoefficients) -> Value {
    json!({
        "at": c.at.entries(),
        "b": c.b.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "a": c.a.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    })
}

fn cmd_coeffs(args: CoeffsArgs) -> CliResult<u8> {
    let family = args.family.resolve()?;
    let n = parse_index(&args.n)?;
    let params = family_params(&family)?;
    let coeffs = params.nn_coeffs(&n)?;
    let payload = json!({
        "family": family.describe(),
        "coefficients": coeffs_json(&coeffs),
    });
    if args.format == "pretty" {
        enforce_denom_cap(&payload)?;
        for (k, b) in coeffs.b.iter().enumerate() {
            println!("b[{}] = {}", k + 1, b);
        }
        for (j, a) in coeffs.a.iter().enumerate() {
            println!("a[{}] = {}", j + 1, a);
        }
    } else {
        emit_json(&payload)?;
    }
    Ok(0)
}

fn cmd_verify(v: VerifyCommand) -> CliResult<u8> {
    match v {
        VerifyCommand::Recurrence { family, box_caps } => {
            let family = family.resolve()?;
            let params = family_params(&family)?;
            let caps = parse_usize_list(&box_caps)?;
            if caps.len() != params.r() {
                return Err(CliError::usage("box arity must match the family's r"));
            }
            let target = MultiIndex::new(caps);
            let table = recurrence_build_table(&params, &target)?;
            let mut checked = 0usize;
            let mut failures = Vec::new();
            for n in indices_in_box(target.entries()) {
                // identity in every raising direction against the table
                for k in 0..params.r() {
                    if let Some(prev) = n.lowered(k) {
                        let via = raise_once(&params, &table, &prev, k)?;
                        if via != table[&n] {
                            failures.push(json!({
                                "n": n.entries(),
                                "direction": k + 1,
                            }));
                        }
                        checked += 1;
                    }
                }
                // delta-consistency
                let dn = params.subleading_delta(&n)?;
                let coeffs = params.nn_coeffs(&n)?;
                for k in 0..params.r() {
                    let dup = params.subleading_delta(&n.raised(k))?;
                    if coeffs.b[k] != dn.clone() - dup {
                        failures.push(json!({
                            "n": n.entries(),
                            "delta_direction": k + 1,
                        }));
                    }
                    checked += 1;
                }
            }
            let pass = failures.is_empty();
            emit_json(&json!({
                "suite": "recurrence",
                "family": family.describe(),
                "checked": checked,
                "failures": failures,
                "pass": pass,
            }))?;
            Ok(if pass { 0 } else { 1 })
        }
        VerifyCommand::Orthogonality {
            family,
            n,
            cutoff,
            epsilon,
        } => {
            let family = family.resolve()?;
            let n = parse_index(&n)?;
            let eps = parse_rational(&epsilon)?;
            let fam = match &family {
                Family::First(p) => OrthoFamily::First(p.clone()),
                Family::Second(p) => OrthoFamily::Second(p.clone()),
                Family::Charlier(p) => OrthoFamily::Charlier(p.clone()),
                Family::Classical { .. } => {
                    return Err(CliError::usage(
                        "orthogonality suite takes kinds first | second | charlier",
                    ))
                }
            };
            let report = verify_multiple_orthogonality(&fam, &n, cutoff, &eps)?;
            let pass = report.all_pass();
            let payload = json!({
                "suite": "orthogonality",
                "family": family.describe(),
                "n": n.entries(),
                "cutoff": cutoff,
                "epsilon": eps.to_string(),
                "report": serde_json::to_value(&report).expect("serializable"),
                "pass": pass,
            });
            emit_json(&payload)?;
            Ok(if pass { 0 } else { 1 })
        }
        VerifyCommand::Generating {
            family,
            depth,
            x_samples,
        } => {
            let family = family.resolve()?;
            let xs = parse_rational_list(&x_samples)?;
            let report = match &family {
                Family::First(p) => generating_check_first(p, depth, &xs)?,
                Family::Second(p) => generating_check_second(p, depth, &xs)?,
                _ => {
                    return Err(CliError::usage(
                        "generating suite takes kinds first | second",
                    ))
                }
            };
            let pass = report.all_pass();
            let failures: Vec<Value> = report
                .failures()
                .map(|e| {
                    json!({
                        "x": e.x.to_string(),
                        "n": e.n.entries(),
                        "series": e.series_coeff.to_string(),
                        "expected": e.expected.to_string(),
                    })
                })
                .collect();
            emit_json(&json!({
                "suite": "generating",
                "family": family.describe(),
                "depth": depth,
                "entries": report.entries.len(),
                "failures": failures,
                "pass": pass,
            }))?;
            Ok(if pass { 0 } else { 1 })
        }
        VerifyCommand::Eigen {
            family,
            caps,
            x,
            ordering,
        } => {
            let family = family.resolve()?;
            let caps = parse_usize_list(&caps)?;
            let x = parse_rational(&x)?;
            let ordering = parse_ordering(&ordering)?;
            let lattice = FockLattice::new(caps.clone())?;
            let residuals: Vec<Rational> = match &family {
                Family::First(p) => {
                    let s = eigenstate_first(&x, &lattice, p)?;
                    (0..p.r())
                        .map(|i| {
                            let h = hamiltonian_first(&lattice, p, i, ordering)?;
                            verify_eigen_action(&h, &s, &x, &lattice)
                        })
                        .collect::<Result<_, _>>()?
                }
                Family::Second(p) => {
                    let s = eigenstate_second(&x, &lattice, p)?;
                    (0..p.r())
                        .map(|i| {
                            let h = hamiltonian_second(&lattice, p, i, ordering)?;
                            verify_eigen_action(&h, &s, &x, &lattice)
                        })
                        .collect::<Result<_, _>>()?
                }
                _ => {
                    return Err(CliError::usage(
                        "eigen suite takes kinds first | second",
                    ))
                }
            };
            let pass = residuals.iter().all(|r| r.is_zero());
            emit_json(&json!({
                "suite": "eigen",
                "family": family.describe(),
                "caps": caps,
                "x": x.to_string(),
                "ordering": match ordering {
                    OperatorOrdering::RecurrenceFaithful => "recurrence-faithful",
                    OperatorOrdering::AsPrinted => "as-printed",
                },
                "residuals": residuals.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "pass": pass,
            }))?;
            Ok(if pass { 0 } else { 1 })
        }
        VerifyCommand::Commutator {
            family,
            caps,
            x_samples,
        } => {
            let family = family.resolve()?;
            let caps = parse_usize_list(&caps)?;
            let xs = parse_rational_list(&x_samples)?;
            let lattice = FockLattice::new(caps.clone())?;
            let hs: Vec<SparseOperator> = match &family {
                Family::First(p) => (0..p.r())
                    .map(|i| hamiltonian_first(&lattice, p, i, OperatorOrdering::RecurrenceFaithful))
                    .collect::<Result<_, _>>()?,
                Family::Second(p) => (0..p.r())
                    .map(|i| hamiltonian_second(&lattice, p, i, OperatorOrdering::RecurrenceFaithful))
                    .collect::<Result<_, _>>()?,
                _ => {
                    return Err(CliError::usage(
                        "commutator suite takes kinds first | second",
                    ))
                }
            };
            let mut raw_max = Rational::zero();
            let mut on_eigenstate_max = Rational::zero();
            for i in 0..hs.len() {
                for j in i + 1..hs.len() {
                    raw_max = raw_max.max(commutator_interior(&hs[i], &hs[j], &lattice, 2)?);
                    for x in &xs {
                        let s = match &family {
                            Family::First(p) => eigenstate_first(x, &lattice, p)?,
                            Family::Second(p) => eigenstate_second(x, &lattice, p)?,
                            _ => unreachable!(),
                        };
                        on_eigenstate_max = on_eigenstate_max
                            .max(commutator_on_eigenstate(&hs[i], &hs[j], &s, &lattice, 2)?);
                    }
                }
            }
            let pass = raw_max.is_zero();
            emit_json(&json!({
                "suite": "commutator",
                "family": family.describe(),
                "caps": caps,
                "raw_interior_max": raw_max.to_string(),
                "on_eigenstate_max": on_eigenstate_max.to_string(),
                "pass": pass,
            }))?;
            Ok(if pass { 0 } else { 1 })
        }
        VerifyCommand::Summability { family, x, t, depth } => {
            let family = family.resolve()?;
            let x = parse_rational(&x)?;
            let t = WeightVectorT::new(parse_rational_list(&t)?)?;
            let (probe, region): (SeriesProbe, Option<Value>) = match &family {
                Family::First(p) => {
                    let d = depth.unwrap_or(mm_core::summability::default_probe_depth(p.r()));
                    let m = region_membership_first(&t, p)?;
                    (
                        norm_series_first(&x, &t, p, d)?,
                        Some(serde_json::to_value(&m).expect("serializable")),
                    )
                }
                Family::Second(p) => {
                    let d = depth.unwrap_or(mm_core::summability::default_probe_depth(p.r()));
                    let m = region_membership_second(&t, p)?;
                    (
                        norm_series_second(&x, &t, p, d)?,
                        Some(serde_json::to_value(&m).expect("serializable")),
                    )
                }
                Family::Charlier(p) => {
                    let d = depth.unwrap_or(mm_core::summability::default_probe_depth(p.r()));
                    (norm_series_charlier(&x, &t, p, d)?, None)
                }
                Family::Classical { .. } => {
                    return Err(CliError::usage(
                        "summability suite takes kinds first | second | charlier",
                    ))
                }
            };
            // expected by the dichotomy: finite iff x is a nonnegative integer
            let expected = if x.is_natural() {
                Verdict::Converges
            } else {
                Verdict::Diverges
            };
            let pass = probe.verdict == expected;
            let payload = json!({
                "suite": "summability",
                "family": family.describe(),
                "x": x.to_string(),
                "t": t.values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "region": region,
                "partials": probe.partials.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "verdict": format!("{:?}", probe.verdict),
                "expected": format!("{expected:?}"),
                "pass": pass,
            });
            emit_json(&payload)?;
            Ok(if pass { 0 } else { 1 })
        }
        VerifyCommand::Duality {
            family,
            beta,
            c,
            a,
            max_n,
        } => {
            let mut failures = Vec::new();
            let mut checked = 0usize;
            match family.as_str() {
                "meixner" => {
                    let beta = parse_rational(
                        &beta.ok_or_else(|| CliError::usage("--beta required"))?,
                    )?;
                    let c = parse_rational(&c.ok_or_else(|| CliError::usage("--c required"))?)?;
                    for n in 0..=max_n {
                        for k in 0..=max_n {
                            let (lhs, rhs) = duality_meixner(n, k, &beta, &c)?;
                            if lhs != rhs {
                                failures.push(json!({
                                    "n": n, "k": k,
                                    "lhs": lhs.to_string(), "rhs": rhs.to_string(),
                                }));
                            }
                            checked += 1;
                        }
                    }
                }
                "charlier" => {
                    let a = parse_rational(&a.ok_or_else(|| CliError::usage("--a required"))?)?;
                    for n in 0..=max_n {
                        for k in 0..=max_n {
                            let (lhs, rhs) = duality_charlier(n, k, &a);
                            if lhs != rhs {
                                failures.push(json!({
                                    "n": n, "k": k,
                                    "lhs": lhs.to_string(), "rhs": rhs.to_string(),
                                }));
                            }
                            checked += 1;
                        }
                    }
                }
                other => {
                    return Err(CliError::usage(format!(
                        "unknown duality family `{other}` (use meixner | charlier)"
                    )))
                }
            }
            let pass = failures.is_empty();
            emit_json(&json!({
                "suite": "duality",
                "family": family,
                "checked": checked,
                "failures": failures,
                "pass": pass,
            }))?;
            Ok(if pass { 0 } else { 1 })
        }
        VerifyCommand::Limit {
            family,
            n,
            x,
            beta_scales,
            min_ratio,
        } => {
            let kind = match family.kind.as_str() {
                "first" => MeixnerKind::First,
                "second" => MeixnerKind::Second,
                other => {
                    return Err(CliError::usage(format!(
                        "limit suite takes kinds first | second, got `{other}`"
                    )))
                }
            };
            let a = parse_rational_list(
                &family
                    .a
                    .clone()
                    .ok_or_else(|| CliError::usage("--a required for the limit suite"))?,
            )?;
            let n = parse_index(&n)?;
            let x = parse_rational(&x)?;
            let scales = parse_rational_list(&beta_scales)?;
            let min_ratio = parse_rational(&min_ratio)?;
            let charlier = CharlierParams::new(a.clone())?;
            let target = charlier_value(&n, &charlier, &x)?;
            let mut gaps = Vec::new();
            for scale in &scales {
                let v = charlier_limit_probe(kind, &n, &a, &x, scale)?;
                gaps.push((v - target.clone()).abs());
            }
            let mut pass = true;
            for w in gaps.windows(2) {
                if w[1].is_zero() {
                    continue;
                }
                if w[0] < w[1].clone() * min_ratio.clone() {
                    pass = false;
                }
            }
            emit_json(&json!({
                "suite": "limit",
                "kind": family.kind,
                "n": n.entries(),
                "x": x.to_string(),
                "target": target.to_string(),
                "beta_scales": scales.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "gaps": gaps.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "pass": pass,
            }))?;
            Ok(if pass { 0 } else { 1 })
        }
    }
}

fn cmd_sweep(s: SweepCommand) -> CliResult<u8> {
    match s {
        SweepCommand::Coeffs { family, box_caps } => {
            let family = family.resolve()?;
            let params = family_params(&family)?;
            let r = params.r();
            let cap = denom_cap();
            let mut header: Vec<String> = (1..=r).map(|i| format!("n{i}")).collect();
            header.extend((1..=r).map(|i| format!("b{i}")));
            header.extend((1..=r).map(|i| format!("a{i}")));
            println!("{}", header.join(","));
            let caps = parse_usize_list(&box_caps)?;
            if caps.is_empty() {
                return Ok(0); // empty box: header only
            }
            if caps.len() != r {
                return Err(CliError::usage("box arity must match the family's r"));
            }
            for n in indices_in_box(&caps) {
                let coeffs = params.nn_coeffs(&n)?;
                let mut row: Vec<String> =
                    n.entries().iter().map(|e| e.to_string()).collect();
                for v in coeffs.b.iter().chain(coeffs.a.iter()) {
                    if let Some(bits) = cap {
                        check_rational_str(&v.to_string(), bits)?;
                    }
                    row.push(v.to_string());
                }
                println!("{}", row.join(","));
            }
            Ok(0)
        }
        SweepCommand::Summability {
            family,
            t,
            x_grid,
            depth,
        } => {
            let family = family.resolve()?;
            let t = WeightVectorT::new(parse_rational_list(&t)?)?;
            let xs = parse_rational_list(&x_grid)?;
            println!("x,verdict,partial");
            let cap = denom_cap();
            for x in &xs {
                let probe = match &family {
                    Family::First(p) => norm_series_first(
                        x,
                        &t,
                        p,
                        depth.unwrap_or(mm_core::summability::default_probe_depth(p.r())),
                    )?,
                    Family::Second(p) => norm_series_second(
                        x,
                        &t,
                        p,
                        depth.unwrap_or(mm_core::summability::default_probe_depth(p.r())),
                    )?,
                    Family::Charlier(p) => norm_series_charlier(
                        x,
                        &t,
                        p,
                        depth.unwrap_or(mm_core::summability::default_probe_depth(p.r())),
                    )?,
                    Family::Classical { .. } => {
                        return Err(CliError::usage(
                            "summability sweep takes kinds first | second | charlier",
                        ))
                    }
                };
                let partial = probe.partials.last().expect("nonempty").to_string();
                if let Some(bits) = cap {
                    check_rational_str(&partial, bits)?;
                }
                println!("{},{:?},{}", x, probe.verdict, partial);
            }
            Ok(0)
        }
    }
}

fn cmd_export(args: ExportArgs) -> CliResult<u8> {
    let family = args.family.resolve()?;
    let caps = parse_usize_list(&args.caps)?;
    let lattice = FockLattice::new(caps.clone())?;
    if args.mode == 0 || args.mode > lattice.r() {
        return Err(CliError::usage(format!(
            "mode must be in 1..={}",
            lattice.r()
        )));
    }
    let mode = args.mode - 1;
    let ordering = parse_ordering(&args.ordering)?;
    let op = match (args.op.as_str(), &family) {
        ("lower", _) => ladder(&lattice, mode, LadderKind::Lower),
        ("raise", _) => ladder(&lattice, mode, LadderKind::Raise),
        ("number", _) => number_op(&lattice, mode),
        ("b", Family::Second(p)) => build_b(&lattice, p, mode)?.0,
        ("binv", Family::Second(p)) => build_b(&lattice, p, mode)?.1,
        ("hamiltonian", Family::First(p)) => hamiltonian_first(&lattice, p, mode, ordering)?,
        ("hamiltonian", Family::Second(p)) => hamiltonian_second(&lattice, p, mode, ordering)?,
        ("b" | "binv", _) => {
            return Err(CliError::usage("operator b/binv requires kind second"))
        }
        ("hamiltonian", _) => {
            return Err(CliError::usage(
                "hamiltonian export requires kind first | second",
            ))
        }
        (other, _) => {
            return Err(CliError::usage(format!(
                "unknown operator `{other}` (use lower | raise | number | b | binv | hamiltonian)"
            )))
        }
    };
    let mut payload = json!({
        "family": family.describe(),
        "caps": caps,
        "op": args.op,
        "mode": args.mode,
    });
    let obj = payload.as_object_mut().expect("object");
    for (k, v) in serde_json::to_value(&op)
        .expect("operator serializes")
        .as_object()
        .expect("object")
    {
        obj.insert(k.clone(), v.clone());
    }
    emit_json(&payload)?;
    Ok(0)
}
