//! `bondzeta`: run the determinant identities on an instance file and print a JSON report.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on
//! bad input.

mod lambda;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bondzeta::covering::{derived_graph, spectrum_union, verify_theorem6};
use bondzeta::euler::{secular_poly, trace_identity_check, truncated_euler_product, verify_theorem5, MAX_ORDER, THEOREM5_TOL, TRACE_TOL};
use bondzeta::example::{example_k3, k3_cubic_factor, K3Example, K3Params, EXAMPLE_TOL};
use bondzeta::hermitian::assemble_h;
use bondzeta::instance::Instance;
use bondzeta::lfunction::{l_function_reciprocal, verify_corollary1, verify_theorem7, COROLLARY1_TOL, THEOREM7_TOL};
use bondzeta::linalg::hermitian_eigenvalues;
use bondzeta::random::{default_radius, disk_samples, real_samples, seeded};
use bondzeta::report::{ErrorMetric, IdentityReport};
use bondzeta::scattering::{
    default_scan_range, proof_matrices, spectrum_via_secular, unitarity_report, verify_theorem4, verify_u_factorization, PROOF_TOL, ROOT_MERGE, THEOREM4_TOL,
};
use bondzeta::{Error, Result};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::lambda::parse_lambda;

#[derive(Parser, Debug)]
#[command(name = "bondzeta", version, about = "Secular determinants, zeta and L-functions of Hermitian-weighted graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check one identity on an instance.
    Verify {
        kind: Kind,
        #[command(flatten)]
        opts: Opts,
    },
    /// Eigenvalues of H from the Jacobi method and from real roots of det(I - U).
    Spectrum {
        #[command(flatten)]
        opts: Opts,
        /// Scan grid size for the root search.
        #[arg(long, default_value_t = 20001)]
        grid: usize,
    },
    /// Coefficients of det(I - uU) next to the truncated prime-cycle product.
    Euler {
        #[command(flatten)]
        opts: Opts,
    },
    /// Build the derived graph of the instance's voltage assignment.
    Cover {
        #[command(flatten)]
        opts: Opts,
        /// Write the derived instance here.
        #[arg(long)]
        emit: PathBuf,
    },
    /// Reciprocal L-function values for one representation.
    Lfunction {
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        rep: String,
    },
    /// Built-in worked examples.
    Example {
        which: ExampleName,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Theorem4,
    Theorem5,
    Theorem6,
    Theorem7,
    Corollary1,
    ProofIdentities,
    Unitarity,
    Trace,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ExampleName {
    K3,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Instance file (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Number of random spectral parameters (default 32, or 4 for the cycle expansions).
    #[arg(long)]
    samples: Option<usize>,
    /// Pass threshold; each check has its own default.
    #[arg(long, value_parser = parse_tol)]
    tol: Option<f64>,
    /// Cycle length / expansion order for `euler`, `theorem5` and `trace`.
    #[arg(long, default_value_t = 10)]
    max_len: usize,
    /// Evaluate at this single spectral parameter, e.g. "0.5-1.2i".
    #[arg(long, value_parser = parse_lambda, allow_hyphen_values = true)]
    lambda: Option<Complex64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// JSON report (default); `--json false` prints one line per check instead.
    #[arg(long, default_value_t = true, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    json: bool,
}

/// Failure before any check could run.
#[derive(Debug)]
struct InputError(String);

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        InputError(e.to_string())
    }
}

#[derive(Serialize)]
struct Report {
    command: Vec<String>,
    instance_sha256: String,
    checks: Vec<IdentityReport>,
    #[serde(skip_serializing_if = "Value::is_null")]
    data: Value,
    pass: bool,
    elapsed_ms: f64,
}

struct Loaded {
    instance: Instance,
    digest: String,
}

fn load(opts: &Opts) -> std::result::Result<Loaded, InputError> {
    let path = opts.input.as_deref().ok_or_else(|| InputError("--input <file> is required".into()))?;
    let bytes = std::fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| InputError(format!("{}: not UTF-8", path.display())))?;
    let instance = Instance::parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(Loaded {
        instance,
        digest: hex(&Sha256::digest(&bytes)),
    })
}

fn parse_tol(text: &str) -> std::result::Result<f64, String> {
    match text.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(format!("tolerance must be a positive number, got {text:?}")),
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn samples(opts: &Opts, inst: &Instance, default_count: usize) -> Vec<Complex64> {
    match opts.lambda {
        Some(l) => vec![l],
        None => disk_samples(
            &mut seeded(opts.seed),
            opts.samples.unwrap_or(default_count),
            default_radius(&inst.graph, &inst.weights),
        ),
    }
}

fn order(opts: &Opts) -> std::result::Result<usize, InputError> {
    if opts.max_len == 0 || opts.max_len > MAX_ORDER {
        return Err(InputError(format!("--max-len must be in 1..={MAX_ORDER}")));
    }
    Ok(opts.max_len)
}

/// Runs `f` per sample, skipping samples that land on a pole.
fn per_sample(report: &mut IdentityReport, lambdas: &[Complex64], mut f: impl FnMut(Complex64) -> Result<IdentityReport>) -> Result<()> {
    for &l in lambdas {
        match f(l) {
            Ok(r) => report.absorb(r),
            Err(e @ Error::Pole { .. }) => report.skip(l, e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn verify(kind: Kind, opts: &Opts) -> std::result::Result<(String, Vec<IdentityReport>, Value), InputError> {
    let Loaded { instance: inst, digest } = load(opts)?;
    let (g, w) = (&inst.graph, &inst.weights);
    let cycle_kind = matches!(kind, Kind::Theorem5 | Kind::Trace);
    let lambdas = samples(opts, &inst, if cycle_kind { 4 } else { 32 });
    let mut data = Value::Null;
    let checks = match kind {
        Kind::Theorem4 => vec![verify_theorem4(g, w, &lambdas, opts.tol.unwrap_or(THEOREM4_TOL))?],
        Kind::Theorem5 => {
            let n = order(opts)?;
            let mut r = IdentityReport::new("theorem5", ErrorMetric::Absolute, opts.tol.unwrap_or(THEOREM5_TOL));
            per_sample(&mut r, &lambdas, |l| verify_theorem5(g, w, l, n, r_tol(opts, THEOREM5_TOL)))?;
            vec![r]
        }
        Kind::Trace => {
            let n = order(opts)?;
            let mut r = IdentityReport::new("trace", ErrorMetric::Relative, opts.tol.unwrap_or(TRACE_TOL));
            for k in 1..=n {
                per_sample(&mut r, &lambdas, |l| trace_identity_check(g, w, l, k, r_tol(opts, TRACE_TOL)))?;
            }
            vec![r]
        }
        Kind::Theorem6 => {
            let cov = inst.covering()?;
            let irreps = cov.irreps()?;
            let mut r = IdentityReport::new("theorem6", ErrorMetric::Relative, opts.tol.unwrap_or(bondzeta::covering::THEOREM6_TOL));
            per_sample(&mut r, &lambdas, |l| {
                verify_theorem6(g, w, &cov.group, &cov.alpha, &irreps, l, r_tol(opts, bondzeta::covering::THEOREM6_TOL))
            })?;
            vec![r]
        }
        Kind::Theorem7 => {
            let cov = inst.covering()?;
            let irreps = cov.irreps()?;
            irreps
                .reps()
                .iter()
                .map(|rho| verify_theorem7(g, w, &cov.group, &cov.alpha, rho, &lambdas, opts.tol.unwrap_or(THEOREM7_TOL)))
                .collect::<Result<Vec<_>>>()?
        }
        Kind::Corollary1 => {
            let cov = inst.covering()?;
            let irreps = cov.irreps()?;
            let r = verify_corollary1(g, w, &cov.group, &cov.alpha, irreps.reps(), &lambdas, opts.tol.unwrap_or(COROLLARY1_TOL))?;
            let at = lambdas[0];
            let factors = irreps
                .reps()
                .iter()
                .map(|rho| {
                    let v = l_function_reciprocal(g, w, &cov.group, &cov.alpha, rho, at).ok().map(|v| v.reciprocal);
                    json!({"rep": rho.name(), "degree": rho.degree(), "exponent": rho.degree(), "reciprocal": v})
                })
                .collect::<Vec<_>>();
            data = json!({"lambda": at, "factors": factors});
            vec![r]
        }
        Kind::ProofIdentities => {
            let tol = opts.tol.unwrap_or(PROOF_TOL);
            let mut r = IdentityReport::new("proof-identities", ErrorMetric::Absolute, tol);
            per_sample(&mut r, &lambdas, |l| proof_matrices(g, w, l)?.check(g, w, tol))?;
            let mut u = IdentityReport::new("u-factorization", ErrorMetric::Absolute, opts.tol.unwrap_or(1e-9));
            per_sample(&mut u, &lambdas, |l| verify_u_factorization(g, w, l, r_tol(opts, 1e-9)))?;
            vec![r, u]
        }
        Kind::Unitarity => {
            let (lo, hi) = default_scan_range(g, w);
            let reals = match opts.lambda {
                Some(l) => vec![l.re],
                None => real_samples(&mut seeded(opts.seed), opts.samples.unwrap_or(32), lo, hi),
            };
            vec![unitarity_report(g, w, &reals, opts.tol.unwrap_or(1e-10))?]
        }
    };
    Ok((digest, checks, data))
}

fn r_tol(opts: &Opts, default: f64) -> f64 {
    opts.tol.unwrap_or(default)
}

fn spectrum(opts: &Opts, grid: usize) -> std::result::Result<(String, Vec<IdentityReport>, Value), InputError> {
    let Loaded { instance: inst, digest } = load(opts)?;
    if grid < 3 {
        return Err(InputError("--grid must be at least 3".into()));
    }
    let tol = opts.tol.unwrap_or(ROOT_MERGE);
    let jacobi = hermitian_eigenvalues(&assemble_h(&inst.graph, &inst.weights)?)?;
    let roots = spectrum_via_secular(&inst.graph, &inst.weights, None, grid)?;
    let mut distinct: Vec<f64> = Vec::new();
    for &v in &jacobi {
        if distinct.last().is_none_or(|&l| v - l > tol) {
            distinct.push(v);
        }
    }
    let mut r = IdentityReport::new("spectrum", ErrorMetric::Absolute, tol);
    r.record_error(
        "number of distinct eigenvalues matches",
        None,
        if distinct.len() == roots.len() { 0.0 } else { f64::INFINITY },
    );
    let mut deviation = 0.0f64;
    for (k, (a, b)) in distinct.iter().zip(&roots).enumerate() {
        deviation = deviation.max((a - b).abs());
        r.record_error(format!("eigenvalue {k}"), Some(Complex64::new(*a, 0.0)), (a - b).abs());
    }
    let data = json!({
        "jacobi": jacobi,
        "secular_roots": roots,
        "distinct_jacobi": distinct,
        "max_deviation": deviation,
        "note": "secular roots carry no multiplicity; Jacobi eigenvalues closer than the tolerance are merged before matching",
    });
    Ok((digest, vec![r], data))
}

fn euler(opts: &Opts) -> std::result::Result<(String, Vec<IdentityReport>, Value), InputError> {
    let Loaded { instance: inst, digest } = load(opts)?;
    let n = order(opts)?;
    let l = samples(opts, &inst, 1)[0];
    let (g, w) = (&inst.graph, &inst.weights);
    let direct = secular_poly(g, w, l, n)?;
    let product = truncated_euler_product(g, w, l, n)?;
    let mut counts = vec![0usize; n];
    g.visit_prime_cycles(n, |p| counts[p.len() - 1] += 1);
    let r = verify_theorem5(g, w, l, n, opts.tol.unwrap_or(THEOREM5_TOL))?;
    let data = json!({
        "lambda": l,
        "det_coefficients": direct.coeffs(),
        "euler_product_coefficients": product.coeffs(),
        "prime_classes_by_length": counts,
    });
    Ok((digest, vec![r], data))
}

fn cover(opts: &Opts, emit: &Path) -> std::result::Result<(String, Vec<IdentityReport>, Value), InputError> {
    let Loaded { instance: inst, digest } = load(opts)?;
    let cov = inst.covering()?;
    let (g, w) = (&inst.graph, &inst.weights);
    let d = derived_graph(g, &cov.group, &cov.alpha)?;
    let lifted = d.lift_weights(w)?;
    let edge_names = (0..d.graph.edge_count())
        .map(|k| format!("{}@{}", inst.edge_names[k % g.edge_count()], cov.group.names()[k / g.edge_count()]))
        .collect();
    let derived = Instance {
        graph: d.graph.clone(),
        weights: lifted,
        edge_names,
        covering: None,
    };
    std::fs::write(emit, derived.to_json() + "\n").map_err(|e| InputError(format!("{}: {e}", emit.display())))?;

    let mut r = IdentityReport::new("cover", ErrorMetric::Absolute, opts.tol.unwrap_or(1e-8));
    let fibers_ok = d.vertex_labels.iter().enumerate().all(|(x, &(v, _))| d.graph.degree(x) == g.degree(v));
    r.record_error("fiber degrees equal base degrees", None, if fibers_ok { 0.0 } else { f64::INFINITY });
    if let Ok(irreps) = cov.irreps() {
        let (lifted_ev, union) = spectrum_union(g, w, &cov.group, &cov.alpha, &irreps)?;
        let dev = lifted_ev.iter().zip(&union).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        r.record_error("spectrum of the cover = union over irreps", None, dev);
    }
    let data = json!({
        "emitted": emit.display().to_string(),
        "vertices": d.graph.vertex_count(),
        "edges": d.graph.edge_count(),
        "connected": d.is_connected(),
        "degrees": (0..d.graph.vertex_count()).map(|v| d.graph.degree(v)).collect::<Vec<_>>(),
    });
    Ok((digest, vec![r], data))
}

fn lfunction(opts: &Opts, rep: &str) -> std::result::Result<(String, Vec<IdentityReport>, Value), InputError> {
    let Loaded { instance: inst, digest } = load(opts)?;
    let cov = inst.covering()?;
    let rho = cov.rep(rep)?;
    let (g, w) = (&inst.graph, &inst.weights);
    let lambdas = samples(opts, &inst, 32);
    let r = verify_theorem7(g, w, &cov.group, &cov.alpha, &rho, &lambdas, opts.tol.unwrap_or(THEOREM7_TOL))?;
    let values = lambdas
        .iter()
        .filter_map(|&l| l_function_reciprocal(g, w, &cov.group, &cov.alpha, &rho, l).ok())
        .map(|v| json!({"lambda": v.lambda, "reciprocal": v.reciprocal, "value": v.value()}))
        .collect::<Vec<_>>();
    let data = json!({"rep": rho.name(), "degree": rho.degree(), "values": values});
    Ok((digest, vec![r], data))
}

fn example(opts: &Opts, a: f64, b: f64, alpha: f64) -> std::result::Result<(String, Vec<IdentityReport>, Value), InputError> {
    let p = K3Params::new(a, b, alpha)?;
    let ex = K3Example::new(p)?;
    let mut inst = Instance::from_parts(ex.graph.clone(), ex.weights.clone());
    inst.covering = None;
    let json_text = inst.to_json();
    let lambdas = match opts.lambda {
        Some(l) => vec![l],
        None => disk_samples(&mut seeded(opts.seed), opts.samples.unwrap_or(16), default_radius(&ex.graph, &ex.weights)),
    };
    let r = example_k3(p, &lambdas, opts.tol.unwrap_or(EXAMPLE_TOL))?;
    let closed = lambdas
        .iter()
        .map(|&l| json!({"lambda": l, "det_I6_minus_U": k3_cubic_factor(p, 0, l), "chi1": k3_cubic_factor(p, 1, l), "chi2": k3_cubic_factor(p, 2, l)}))
        .collect::<Vec<_>>();
    let d = derived_graph(&ex.graph, &ex.group, &ex.alpha)?;
    let data = json!({
        "params": {"a": a, "b": b, "alpha": alpha},
        "closed_forms": closed,
        "derived_graph": {
            "vertices": d.graph.vertex_count(),
            "edges": d.graph.edge_count(),
            "connected": d.is_connected(),
            "is_9_cycle": d.is_connected() && d.graph.vertex_count() == 9 && (0..9).all(|v| d.graph.degree(v) == 2),
        },
    });
    Ok((hex(&Sha256::digest(json_text.as_bytes())), vec![r], data))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            let rendered = e.render().to_string();
            let msg = rendered.lines().next().unwrap_or_default().trim_start_matches("error: ").to_owned();
            out(json!({"command": argv, "error": msg, "pass": false}).to_string());
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let (opts, outcome) = match &cli.command {
        Command::Verify { kind, opts } => (opts, verify(*kind, opts)),
        Command::Spectrum { opts, grid } => (opts, spectrum(opts, *grid)),
        Command::Euler { opts } => (opts, euler(opts)),
        Command::Cover { opts, emit } => (opts, cover(opts, emit)),
        Command::Lfunction { opts, rep } => (opts, lfunction(opts, rep)),
        Command::Example {
            which: ExampleName::K3,
            a,
            b,
            alpha,
            opts,
        } => (opts, example(opts, *a, *b, *alpha)),
    };
    match outcome {
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            out(json!({"command": argv, "error": msg, "pass": false}).to_string());
            ExitCode::from(2)
        }
        Ok((digest, checks, data)) => {
            let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
            let report = Report {
                command: argv,
                instance_sha256: digest,
                checks,
                data,
                pass,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            };
            if opts.json {
                out(serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                for c in &report.checks {
                    out(format!(
                        "{} {}: max error {:.3e} (tol {:.1e}, {} records, {} skipped)",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        c.max_error,
                        c.tolerance,
                        c.records.len(),
                        c.skipped.len()
                    ));
                }
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}

/// Prints a line, ignoring a closed stdout (e.g. piped into `head`).
fn out(line: String) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}
