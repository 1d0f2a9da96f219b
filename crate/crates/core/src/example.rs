//! The triangle `K_3` with a `Z_3` voltage on one edge, whose secular
//! determinant, L-functions and 9-cycle cover all have closed forms.
//!
//! Edges are `e1 = (1,2)`, `e2 = (2,3)`, `e3 = (3,1)` with `h = b` and
//! `H_uu = a`; the phases are `α` on `e1`, `e2` and `−α` on `e3`, so that
//! `H_12 = H_23 = H_31 = b e^{2iα}`. The voltage is `τ` on `e1` and trivial
//! elsewhere. With `t = λ − a` and `θ_k = 2α + 2πk/3`,
//!
//! ```text
//! det(I − Σ χ_k(h) U_h) = −8 / (a − λ − 2ib)³ · (t³ − 3b²t − 2b³ cos θ_k)
//! ```
//!
//! and the cover's secular determinant is the product over `k = 0, 1, 2`.

use num_complex::Complex64;

use crate::covering::{cyclic_group, derived_graph, verify_theorem6, FiniteGroup, IrrepSet, VoltageAssignment};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hermitian::EdgeWeightSystem;
use crate::lfunction::l_function_reciprocal;
use crate::report::{ErrorMetric, IdentityReport};
use crate::scattering::{bond_scattering_matrix, secular_det};

/// Default tolerance for numeric against closed-form values (relative).
pub const EXAMPLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct K3Params {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
}

impl K3Params {
    pub fn new(a: f64, b: f64, alpha: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && alpha.is_finite()) {
            return Err(Error::InvalidWeight("parameters must be finite".into()));
        }
        if b <= 0.0 {
            return Err(Error::InvalidWeight(format!("b must be positive, got {b}")));
        }
        if alpha.abs() > std::f64::consts::FRAC_PI_2 {
            return Err(Error::InvalidWeight(format!("|alpha| must not exceed pi/2, got {alpha}")));
        }
        Ok(Self { a, b, alpha })
    }
}

/// The triangle with its `Z_3` covering data.
#[derive(Debug, Clone)]
pub struct K3Example {
    pub params: K3Params,
    pub graph: Graph,
    pub weights: EdgeWeightSystem,
    pub group: FiniteGroup,
    pub irreps: IrrepSet,
    pub alpha: VoltageAssignment,
}

impl K3Example {
    pub fn new(params: K3Params) -> Result<Self> {
        let graph = Graph::with_vertex_count(3, vec![(0, 1), (1, 2), (2, 0)])?;
        let K3Params { a, b, alpha } = params;
        let weights = EdgeWeightSystem::new(&graph, vec![b; 3], vec![alpha, alpha, -alpha], vec![a; 3])?;
        let (group, irreps) = cyclic_group(3)?;
        let alpha = VoltageAssignment::new(&graph, &group, &[1, 0, 0])?;
        Ok(Self {
            params,
            graph,
            weights,
            group,
            irreps,
            alpha,
        })
    }
}

/// `−8 / (a − λ − 2ib)³ · (t³ − 3b²t − 2b³ cos(2α + 2πk/3))`, `t = λ − a`.
pub fn k3_cubic_factor(p: K3Params, k: usize, lambda: Complex64) -> Complex64 {
    let t = lambda - p.a;
    let theta = 2.0 * p.alpha + 2.0 * std::f64::consts::PI * (k % 3) as f64 / 3.0;
    let pole = Complex64::new(p.a, -2.0 * p.b) - lambda;
    -8.0 / pole.powi(3) * (t.powi(3) - 3.0 * p.b * p.b * t - 2.0 * p.b.powi(3) * theta.cos())
}

/// `det(I_18 − Ũ(λ))` in closed form: the product of the three cubic factors.
pub fn k3_cover_closed_form(p: K3Params, lambda: Complex64) -> Complex64 {
    (0..3).map(|k| k3_cubic_factor(p, k, lambda)).product()
}

/// Roots of the `k`-th cubic, ascending: `a + 2b cos((θ_k + 2πj)/3)`.
pub fn k3_cubic_roots(p: K3Params, k: usize) -> [f64; 3] {
    let theta = 2.0 * p.alpha + 2.0 * std::f64::consts::PI * (k % 3) as f64 / 3.0;
    let mut roots = [0, 1, 2].map(|j| p.a + 2.0 * p.b * ((theta + 2.0 * std::f64::consts::PI * j as f64) / 3.0).cos());
    roots.sort_by(f64::total_cmp);
    roots
}

/// Numeric against closed-form values at each sample, the covering
/// factorization, and the shape of the derived graph.
pub fn example_k3(p: K3Params, samples: &[Complex64], tol: f64) -> Result<IdentityReport> {
    let ex = K3Example::new(p)?;
    let mut report = IdentityReport::new("example-k3", ErrorMetric::Relative, tol);
    let derived = derived_graph(&ex.graph, &ex.group, &ex.alpha)?;
    let lifted = derived.lift_weights(&ex.weights)?;
    let nine_cycle =
        derived.is_connected() && derived.graph.vertex_count() == 9 && derived.graph.edge_count() == 9 && (0..9).all(|v| derived.graph.degree(v) == 2);
    report.record_error("derived graph is a 9-cycle", None, if nine_cycle { 0.0 } else { f64::INFINITY });
    for &lambda in samples {
        let evaluated = (|| -> Result<()> {
            report.compare(
                "det(I_6 - U)",
                Some(lambda),
                secular_det(&ex.graph, &ex.weights, lambda)?,
                k3_cubic_factor(p, 0, lambda),
            );
            for k in 1..3 {
                let v = l_function_reciprocal(&ex.graph, &ex.weights, &ex.group, &ex.alpha, &ex.irreps.reps()[k], lambda)?;
                report.compare(
                    format!("det(I_6 - sum chi{k}(h) U_h)"),
                    Some(lambda),
                    v.reciprocal,
                    k3_cubic_factor(p, k, lambda),
                );
            }
            let cover = bond_scattering_matrix(&derived.graph, &lifted, lambda)?.secular_det();
            report.compare("det(I_18 - U~)", Some(lambda), cover, k3_cover_closed_form(p, lambda));
            let factored = verify_theorem6(&ex.graph, &ex.weights, &ex.group, &ex.alpha, &ex.irreps, lambda, tol.max(1e-8))?;
            report.records.extend(factored.records.iter().filter(|r| !r.pass).cloned());
            report.max_error = report.max_error.max(factored.max_error);
            report.pass = report.pass && factored.pass;
            Ok(())
        })();
        match evaluated {
            Ok(()) => {}
            Err(e @ Error::Pole { .. }) => report.skip(lambda, e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
