//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Closed forms and cycle sums are recomputed here from scratch so that they
//! do not share code with the library paths they check.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bondzeta::covering::{cyclic_group, derived_graph, lift_hermitian, verify_theorem6, FiniteGroup, IrrepSet, VoltageAssignment};
use bondzeta::euler::verify_theorem5;
use bondzeta::graph::Graph;
use bondzeta::hermitian::EdgeWeightSystem;
use bondzeta::instance::Instance;
use bondzeta::lfunction::{l_function_reciprocal, theorem7_rhs, verify_corollary1};
use bondzeta::linalg::{hermitian_eigenvalues, power_traces, relative_error};
use bondzeta::random::{default_radius, disk_samples, random_instance, random_voltages, real_samples, seeded, RandomSpec};
use bondzeta::scattering::{bond_scattering_matrix, default_scan_range, proof_matrices, secular_det, spectrum_via_secular, verify_theorem4};
use bondzeta::{Complex64, Result};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240607;
const PARAMS: [(f64, f64, f64); 3] = [(0.0, 1.0, 0.0), (1.0, 2.0, 0.3), (-1.0, 0.5, -0.7)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn triangle(a: f64, b: f64, alpha: f64) -> Result<(Graph, EdgeWeightSystem)> {
    let g = Graph::with_vertex_count(3, vec![(0, 1), (1, 2), (2, 0)])?;
    let w = EdgeWeightSystem::new(&g, vec![b; 3], vec![alpha, alpha, -alpha], vec![a; 3])?;
    Ok((g, w))
}

/// `{(λ−a)³ − 3b²(λ−a) − 2b³ cos θ}` with `θ = 2α + 2πk/3`.
fn cubic(a: f64, b: f64, alpha: f64, k: usize, lambda: Complex64) -> Complex64 {
    let t = lambda - a;
    let theta = 2.0 * alpha + 2.0 * PI * k as f64 / 3.0;
    t * t * t - 3.0 * b * b * t - 2.0 * b * b * b * theta.cos()
}

fn k3_samples(rng: &mut ChaCha8Rng, a: f64, b: f64, count: usize) -> Vec<Complex64> {
    disk_samples(rng, count, 2.0 * (a.abs() + 2.0 * b))
}

fn criterion1(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (a, b, alpha) in PARAMS {
        let (g, w) = triangle(a, b, alpha)?;
        for lambda in k3_samples(rng, a, b, 16) {
            let pole = c(a, -2.0 * b) - lambda;
            let closed = -8.0 / (pole * pole * pole) * cubic(a, b, alpha, 0, lambda);
            worst = worst.max(relative_error(secular_det(&g, &w, lambda)?, closed));
        }
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        worst <= 1e-9 && elapsed < Duration::from_secs(1),
        format!("max rel err {worst:.2e} (tol 1e-9), {elapsed:.2?} (budget 1 s)"),
    ))
}

fn criterion2_instances(rng: &mut ChaCha8Rng) -> Result<Vec<(Graph, EdgeWeightSystem, Vec<Complex64>)>> {
    (0..50)
        .map(|_| {
            let (g, w) = random_instance(rng, RandomSpec::default())?;
            let samples = disk_samples(rng, 32, default_radius(&g, &w));
            Ok((g, w, samples))
        })
        .collect()
}

fn criterion2(instances: &[(Graph, EdgeWeightSystem, Vec<Complex64>)]) -> Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for (g, w, samples) in instances {
        let r = verify_theorem4(g, w, samples, 1e-9)?;
        worst = worst.max(r.max_error);
        skipped += r.skipped.len();
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        worst <= 1e-9 && elapsed < Duration::from_secs(10),
        format!("50 instances x 32 samples, max rel err {worst:.2e} (tol 1e-9), {skipped} pole samples, {elapsed:.2?} (budget 10 s)"),
    ))
}

fn criterion3(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let start = Instant::now();
    let spec = RandomSpec {
        min_vertices: 2,
        max_vertices: 5,
        max_edges: 7,
        parallel_edges: true,
    };
    let mut cases = vec![triangle(0.3, 1.0, 0.4)?];
    for _ in 0..10 {
        cases.push(random_instance(rng, spec)?);
    }
    let mut worst = 0.0f64;
    for (g, w) in &cases {
        let lambda = disk_samples(rng, 1, default_radius(g, w))[0];
        worst = worst.max(verify_theorem5(g, w, lambda, 10, 1e-8)?.max_error);
    }
    let elapsed = start.elapsed();
    Ok(outcome(
        worst <= 1e-8 && elapsed < Duration::from_secs(60),
        format!("K3 + 10 random, through u^10, max abs err {worst:.2e} (tol 1e-8), {elapsed:.2?} (budget 60 s)"),
    ))
}

/// Sum of `∏ U[b_i, b_{i+1}]` over every closed walk of `k` arcs (all starting arcs).
fn brute_cycle_sum(g: &Graph, u: &bondzeta::linalg::ComplexMatrix, k: usize) -> Complex64 {
    fn walk(g: &Graph, u: &bondzeta::linalg::ComplexMatrix, first: usize, last: usize, left: usize, acc: Complex64) -> Complex64 {
        if left == 0 {
            return if g.terminus(last) == g.origin(first) {
                acc * u[(last, first)]
            } else {
                c(0.0, 0.0)
            };
        }
        (0..g.arc_count())
            .filter(|&f| g.terminus(last) == g.origin(f))
            .map(|f| walk(g, u, first, f, left - 1, acc * u[(last, f)]))
            .sum()
    }
    (0..g.arc_count()).map(|b| walk(g, u, b, b, k - 1, c(1.0, 0.0))).sum()
}

fn criterion4(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let k3 = triangle(0.2, 1.1, 0.5)?;
    let doubled = Graph::with_vertex_count(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)])?;
    let dw = EdgeWeightSystem::new(&doubled, vec![0.8, 1.3, 0.6, 1.9], vec![0.4, -1.0, 0.2, 1.5], vec![0.1, -0.7, 0.5])?;
    let mut worst = 0.0f64;
    for (g, w) in [&k3, &(doubled, dw)] {
        let lambda = disk_samples(rng, 1, default_radius(g, w))[0];
        let u = bond_scattering_matrix(g, w, lambda)?.matrix;
        let traces = power_traces(&u, 10);
        for k in 1..=10 {
            worst = worst.max(relative_error(traces[k - 1], brute_cycle_sum(g, &u, k)));
        }
    }
    Ok(outcome(
        worst <= 1e-9,
        format!("k = 1..10 on K3 and a doubled-edge multigraph, max rel err {worst:.2e} (tol 1e-9)"),
    ))
}

fn s3_fixture() -> Result<Instance> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/s3_square.json");
    Instance::parse(&std::fs::read_to_string(path).expect("fixture present"))
}

fn z3_voltage(g: &Graph) -> Result<(FiniteGroup, IrrepSet, VoltageAssignment)> {
    let (group, irreps) = cyclic_group(3)?;
    let alpha = VoltageAssignment::new(g, &group, &[1, 0, 0])?;
    Ok((group, irreps, alpha))
}

fn criterion5(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut all = true;
    for (a, b, alpha_) in PARAMS {
        let (g, w) = triangle(a, b, alpha_)?;
        let (group, irreps, alpha) = z3_voltage(&g)?;
        let d = derived_graph(&g, &group, &alpha)?;
        let lifted = d.lift_weights(&w)?;
        for lambda in k3_samples(rng, a, b, 16) {
            let direct = bond_scattering_matrix(&d.graph, &lifted, lambda)?.secular_det();
            let pole = c(a, -2.0 * b) - lambda;
            let closed = -512.0 / pole.powi(9) * (0..3).map(|k| cubic(a, b, alpha_, k, lambda)).product::<Complex64>();
            worst = worst.max(relative_error(direct, closed));
            let r = verify_theorem6(&g, &w, &group, &alpha, &irreps, lambda, 1e-8)?;
            all &= r.pass;
            worst = worst.max(r.max_error);
        }
        let r = verify_corollary1(&g, &w, &group, &alpha, irreps.reps(), &k3_samples(rng, a, b, 16), 1e-8)?;
        all &= r.pass;
        worst = worst.max(r.max_error);
    }
    // Z2 and Z4 voltages on random graphs, keeping connected covers only.
    let mut covers = 0;
    for p in [2, 4] {
        let (group, irreps) = cyclic_group(p)?;
        let mut found = 0;
        while found < 3 {
            let (g, w) = random_instance(
                rng,
                RandomSpec {
                    max_vertices: 6,
                    max_edges: 10,
                    ..RandomSpec::default()
                },
            )?;
            let alpha = random_voltages(rng, &g, &group)?;
            if !derived_graph(&g, &group, &alpha)?.is_connected() {
                continue;
            }
            found += 1;
            for lambda in disk_samples(rng, 4, default_radius(&g, &w)) {
                let r = verify_theorem6(&g, &w, &group, &alpha, &irreps, lambda, 1e-8)?;
                all &= r.pass;
                worst = worst.max(r.max_error);
            }
            let samples = disk_samples(rng, 4, default_radius(&g, &w));
            let r = verify_corollary1(&g, &w, &group, &alpha, irreps.reps(), &samples, 1e-8)?;
            all &= r.pass;
            worst = worst.max(r.max_error);
        }
        covers += found;
    }
    let s3 = s3_fixture()?;
    let cov = s3.covering()?;
    let irreps = cov.irreps()?;
    let samples = disk_samples(rng, 16, default_radius(&s3.graph, &s3.weights));
    for &lambda in &samples {
        let r = verify_theorem6(&s3.graph, &s3.weights, &cov.group, &cov.alpha, &irreps, lambda, 1e-8)?;
        all &= r.pass;
        worst = worst.max(r.max_error);
    }
    let r = verify_corollary1(&s3.graph, &s3.weights, &cov.group, &cov.alpha, irreps.reps(), &samples, 1e-8)?;
    all &= r.pass;
    worst = worst.max(r.max_error);
    Ok(outcome(
        all && worst <= 1e-8,
        format!("K3/Z3 closed form + factorizations at 3x16 samples, {covers} Z2/Z4 covers, S3 fixture; max err {worst:.2e} (tol 1e-8)"),
    ))
}

fn criterion6(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for (a, b, alpha_) in PARAMS {
        let (g, w) = triangle(a, b, alpha_)?;
        let (group, irreps, alpha) = z3_voltage(&g)?;
        for lambda in k3_samples(rng, a, b, 16) {
            for rho in irreps.reps() {
                let lhs = l_function_reciprocal(&g, &w, &group, &alpha, rho, lambda)?.reciprocal;
                worst = worst.max(relative_error(lhs, theorem7_rhs(&g, &w, &group, &alpha, rho, lambda)?));
            }
        }
    }
    let s3 = s3_fixture()?;
    let cov = s3.covering()?;
    let standard = cov.rep("standard")?;
    assert_eq!(standard.degree(), 2);
    for lambda in disk_samples(rng, 16, default_radius(&s3.graph, &s3.weights)) {
        let lhs = l_function_reciprocal(&s3.graph, &s3.weights, &cov.group, &cov.alpha, &standard, lambda)?.reciprocal;
        let rhs = theorem7_rhs(&s3.graph, &s3.weights, &cov.group, &cov.alpha, &standard, lambda)?;
        worst = worst.max(relative_error(lhs, rhs));
    }
    Ok(outcome(
        worst <= 1e-9,
        format!("Z3 characters on K3 and the S3 degree-2 irrep, 16 samples each, max rel err {worst:.2e} (tol 1e-9)"),
    ))
}

fn criterion7(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (g, w) = random_instance(rng, RandomSpec::default())?;
        let (lo, hi) = default_scan_range(&g, &w);
        for t in real_samples(rng, 10, lo, hi) {
            worst = worst.max(bond_scattering_matrix(&g, &w, c(t, 0.0))?.matrix.unitarity_defect());
        }
    }
    Ok(outcome(
        worst <= 1e-10,
        format!("20 instances x 10 real samples, max |UU* - I| {worst:.2e} (tol 1e-10)"),
    ))
}

/// Distinct values after merging neighbours closer than `radius`.
fn merged(values: &[f64], radius: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for &v in values {
        if out.last().is_none_or(|&l| v - l > radius) {
            out.push(v);
        }
    }
    out
}

fn match_sets(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion8(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (g, w) = random_instance(rng, RandomSpec::default())?;
        let h = bondzeta::hermitian::assemble_h(&g, &w)?;
        let jacobi = merged(&hermitian_eigenvalues(&h)?, 1e-6);
        let roots = spectrum_via_secular(&g, &w, None, 20001)?;
        worst = worst.max(match_sets(&jacobi, &roots));
    }
    let mut lifted_worst = 0.0f64;
    for (a, b, alpha_) in PARAMS {
        let (g, w) = triangle(a, b, alpha_)?;
        let (group, _, alpha) = z3_voltage(&g)?;
        let ev = hermitian_eigenvalues(&lift_hermitian(&g, &w, &group, &alpha)?)?;
        // t = 2b cos φ turns the cubic into 2b³(cos 3φ − cos θ)
        let mut union = Vec::new();
        for k in 0..3 {
            let theta = 2.0 * alpha_ + 2.0 * PI * k as f64 / 3.0;
            for j in 0..3 {
                let root = a + 2.0 * b * ((theta + 2.0 * PI * j as f64) / 3.0).cos();
                if cubic(a, b, alpha_, k, c(root, 0.0)).norm() > 1e-9 * b.powi(3) {
                    lifted_worst = f64::INFINITY;
                }
                union.push(root);
            }
        }
        union.sort_by(f64::total_cmp);
        lifted_worst = lifted_worst.max(if ev.len() == 9 { match_sets(&ev, &union) } else { f64::INFINITY });
    }
    Ok(outcome(
        worst <= 1e-6 && lifted_worst <= 1e-6,
        format!("20 instances secular roots vs Jacobi {worst:.2e}; lifted K3 9 eigenvalues vs cubic roots {lifted_worst:.2e} (tol 1e-6)"),
    ))
}

fn criterion9(instances: &[(Graph, EdgeWeightSystem, Vec<Complex64>)]) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for (g, w, samples) in instances {
        for &lambda in samples {
            match proof_matrices(g, w, lambda) {
                Ok(pm) => {
                    worst = worst.max(pm.check(g, w, 1e-10)?.max_error);
                    checked += 1;
                }
                Err(bondzeta::Error::Pole { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(outcome(
        worst <= 1e-10,
        format!("{checked} (instance, sample) pairs, max entrywise err {worst:.2e} (tol 1e-10)"),
    ))
}

fn main() -> ExitCode {
    let mut rng = seeded(SEED);
    let instances = criterion2_instances(&mut rng).expect("random instances");
    type Run<'a> = Box<dyn FnOnce(&mut ChaCha8Rng) -> Result<Outcome> + 'a>;
    let runs: Vec<(&str, Run)> = vec![
        ("1 closed form of the triangle", Box::new(criterion1)),
        ("2 secular determinant formula", Box::new(|_| criterion2(&instances))),
        ("3 Euler product", Box::new(criterion3)),
        ("4 trace identity", Box::new(criterion4)),
        ("5 covering factorization", Box::new(criterion5)),
        ("6 L-function determinant formula", Box::new(criterion6)),
        ("7 unitarity on the real axis", Box::new(criterion7)),
        ("8 spectrum cross-check", Box::new(criterion8)),
        ("9 proof identities", Box::new(|_| criterion9(&instances))),
    ];
    let mut failed = 0;
    for (name, run) in runs {
        let (pass, detail) = match run(&mut rng) {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!("[{}] criterion {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
    if failed == 0 {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
