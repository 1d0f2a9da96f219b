//! L-functions of a voltage assignment twisted by a unitary representation,
//! handled through their reciprocals
//! `det(I_{2md} − Σ_h ρ(h) ⊗ U_h(λ))`.

use num_complex::Complex64;

use crate::covering::{derived_graph, voltage_split, FiniteGroup, UnitaryRep, VoltageAssignment};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hermitian::{check_compatible, EdgeWeightSystem, VertexGammas};
use crate::linalg::{det_poly, kron, lu_det, ComplexMatrix, PolyCoeffs};
use crate::report::{ErrorMetric, IdentityReport};
use crate::scattering::{bond_scattering_matrix, sample_coefficients};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance for the determinant expression of the reciprocal (relative).
pub const THEOREM7_TOL: f64 = 1e-9;
/// Tolerance for the product over irreducible representations (relative).
pub const COROLLARY1_TOL: f64 = 1e-8;

/// The reciprocal of the L-function at one `(λ, ρ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LFunctionValue {
    pub reciprocal: Complex64,
    pub lambda: Complex64,
    pub rep: String,
}

impl LFunctionValue {
    /// `1 / reciprocal`, or `None` at a zero of the reciprocal.
    pub fn value(&self) -> Option<Complex64> {
        (self.reciprocal.norm() > 0.0).then(|| self.reciprocal.inv())
    }
}

fn check_rep(group: &FiniteGroup, rho: &UnitaryRep) -> Result<()> {
    if rho.matrices().len() != group.order() {
        return Err(Error::Representation(format!(
            "{} does not belong to a group of order {}",
            rho.name(),
            group.order()
        )));
    }
    Ok(())
}

/// `det(I_{2md} − Σ_h ρ(h) ⊗ U_h(λ))`.
pub fn l_function_reciprocal(
    graph: &Graph,
    w: &EdgeWeightSystem,
    group: &FiniteGroup,
    alpha: &VoltageAssignment,
    rho: &UnitaryRep,
    lambda: Complex64,
) -> Result<LFunctionValue> {
    check_rep(group, rho)?;
    let split = voltage_split(graph, w, group, alpha, lambda)?;
    Ok(LFunctionValue {
        reciprocal: split.bond_factor(rho),
        lambda,
        rep: rho.name().to_string(),
    })
}

/// `2^{md}(−1)^{nd} / ∏_u (H_uu − λ − iΓ_u)^d · det(λI_{nd} − Σ_g ρ(g) ⊗ H_g − I_d ⊗ diag(H))`.
pub fn theorem7_rhs(
    graph: &Graph,
    w: &EdgeWeightSystem,
    group: &FiniteGroup,
    alpha: &VoltageAssignment,
    rho: &UnitaryRep,
    lambda: Complex64,
) -> Result<Complex64> {
    check_rep(group, rho)?;
    let split = voltage_split(graph, w, group, alpha, lambda)?;
    let d = rho.degree();
    let (n, m) = (graph.vertex_count(), graph.edge_count());
    let sign = if (n * d).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(split.hermitian_factor(rho, lambda) * sign * 2f64.powi((m * d) as i32) / split.pole_product.powi(d as i32))
}

/// Compares [`l_function_reciprocal`] with [`theorem7_rhs`] at every sample;
/// samples on a pole are skipped.
pub fn verify_theorem7(
    graph: &Graph,
    w: &EdgeWeightSystem,
    group: &FiniteGroup,
    alpha: &VoltageAssignment,
    rho: &UnitaryRep,
    samples: &[Complex64],
    tol: f64,
) -> Result<IdentityReport> {
    check_compatible(graph, w)?;
    check_rep(group, rho)?;
    let mut report = IdentityReport::new("theorem7", ErrorMetric::Relative, tol);
    for &lambda in samples {
        let lhs = l_function_reciprocal(graph, w, group, alpha, rho, lambda);
        let rhs = theorem7_rhs(graph, w, group, alpha, rho, lambda);
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => report.compare(format!("{}: reciprocal vs determinant formula", rho.name()), Some(lambda), l.reciprocal, r),
            (Err(e @ Error::Pole { .. }), _) | (_, Err(e @ Error::Pole { .. })) => report.skip(lambda, e.to_string()),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(report)
}

/// `det(I − Ũ(λ))` on the derived graph against `∏_ρ det(I − Σ_h ρ(h) ⊗ U_h)^{deg ρ}`
/// over the given representations, which must satisfy `Σ (deg ρ)² = |Γ|`.
pub fn verify_corollary1(
    graph: &Graph,
    w: &EdgeWeightSystem,
    group: &FiniteGroup,
    alpha: &VoltageAssignment,
    reps: &[UnitaryRep],
    samples: &[Complex64],
    tol: f64,
) -> Result<IdentityReport> {
    let total: usize = reps.iter().map(|r| r.degree().pow(2)).sum();
    if total != group.order() {
        return Err(Error::Representation(format!(
            "sum of squared degrees is {total}, group order is {}",
            group.order()
        )));
    }
    for rho in reps {
        check_rep(group, rho)?;
    }
    let derived = derived_graph(graph, group, alpha)?;
    if !derived.is_connected() {
        return Err(Error::DisconnectedCovering);
    }
    let lifted = derived.lift_weights(w)?;
    let mut report = IdentityReport::new("corollary1", ErrorMetric::Relative, tol);
    for &lambda in samples {
        let split = match voltage_split(graph, w, group, alpha, lambda) {
            Ok(s) => s,
            Err(e @ Error::Pole { .. }) => {
                report.skip(lambda, e.to_string());
                continue;
            }
            Err(e) => return Err(e),
        };
        let direct = bond_scattering_matrix(&derived.graph, &lifted, lambda)?.secular_det();
        let product: Complex64 = reps.iter().map(|r| split.bond_factor(r).powi(r.degree() as i32)).product();
        report.compare("det(I - U~) vs product over irreps", Some(lambda), direct, product);
    }
    Ok(report)
}

/// The twisted proof matrices in arc-major block order (block `(i, j)` is `d × d`):
///
/// * `L_ij = w(e_i) ρ(α(e_i)) [t(e_i) = v_j]`,
/// * `K_ij = x_j w(e_i) I_d [o(e_i) = v_j]`, `M_ij = w(e_i) I_d [o(e_i) = v_j]`,
/// * `J_ρ` has block `ρ(α(e_i))` at `(e_i, e_i⁻¹)`,
/// * `B_ρ = Σ_g B_g ⊗ ρ(g)`, `U_ρ = Σ_g U_g ⊗ ρ(g)`, `H_ρ = Σ_g H_g ⊗ ρ(g)`.
#[derive(Debug, Clone)]
pub struct LProofMatrices {
    pub lambda: Complex64,
    pub degree: usize,
    pub b_rho: ComplexMatrix,
    pub j_rho: ComplexMatrix,
    pub u_rho: ComplexMatrix,
    pub h_rho: ComplexMatrix,
    pub k: ComplexMatrix,
    pub l: ComplexMatrix,
    pub m: ComplexMatrix,
    /// `X ⊗ I_d`.
    pub x: ComplexMatrix,
    /// `D_Γ ⊗ I_d`.
    pub d_gamma: ComplexMatrix,
}

pub fn l_proof_matrices(
    graph: &Graph,
    w: &EdgeWeightSystem,
    group: &FiniteGroup,
    alpha: &VoltageAssignment,
    rho: &UnitaryRep,
    lambda: Complex64,
) -> Result<LProofMatrices> {
    check_rep(group, rho)?;
    let split = voltage_split(graph, w, group, alpha, lambda)?;
    let gammas = VertexGammas::new(graph, w);
    let x = gammas.x_values(w.diag(), lambda)?;
    let (n, arcs, d) = (graph.vertex_count(), graph.arc_count(), rho.degree());
    let id = ComplexMatrix::identity(d);

    let mut b_rho = ComplexMatrix::zeros(arcs * d, arcs * d);
    let mut u_rho = ComplexMatrix::zeros(arcs * d, arcs * d);
    let mut h_rho = ComplexMatrix::zeros(n * d, n * d);
    for g in 0..group.order() {
        let j_g = ComplexMatrix::from_fn(arcs, arcs, |e, f| {
            if graph.inverse(e) == f && alpha.get(e) == g {
                I
            } else {
                Complex64::default()
            }
        });
        // U_g = i J_g − B_g
        let b_g = &j_g - &split.u_parts[g];
        b_rho = &b_rho + &kron(&b_g, rho.matrix(g));
        u_rho = &u_rho + &kron(&split.u_parts[g], rho.matrix(g));
        h_rho = &h_rho + &kron(&split.h_parts[g], rho.matrix(g));
    }

    let mut j_rho = ComplexMatrix::zeros(arcs * d, arcs * d);
    let mut k = ComplexMatrix::zeros(arcs * d, n * d);
    let mut l = ComplexMatrix::zeros(arcs * d, n * d);
    let mut m = ComplexMatrix::zeros(arcs * d, n * d);
    let put = |target: &mut ComplexMatrix, bi: usize, bj: usize, block: &ComplexMatrix, s: Complex64| {
        for r in 0..d {
            for c in 0..d {
                target[(bi * d + r, bj * d + c)] = block[(r, c)] * s;
            }
        }
    };
    let one = Complex64::new(1.0, 0.0);
    for e in 0..arcs {
        let (o, t, we) = (graph.origin(e), graph.terminus(e), w.arc_weight(e));
        let r = rho.matrix(alpha.get(e));
        put(&mut j_rho, e, graph.inverse(e), r, one);
        put(&mut l, e, t, r, we);
        put(&mut k, e, o, &id, x[o] * we);
        put(&mut m, e, o, &id, we);
    }
    Ok(LProofMatrices {
        lambda,
        degree: d,
        b_rho,
        j_rho,
        u_rho,
        h_rho,
        k,
        l,
        m,
        x: kron(&ComplexMatrix::from_diagonal(&x), &id),
        d_gamma: kron(&gammas.matrix(), &id),
    })
}

impl LProofMatrices {
    /// Entrywise checks of `L ᵗK = B_ρ`, `ᵗM L = H_ρ`, `J_ρ² = I`,
    /// `ᵗM J_ρ L = D_Γ ⊗ I`, `K = M(X ⊗ I)` and `U_ρ = iJ_ρ − B_ρ`.
    pub fn check(&self, tol: f64) -> IdentityReport {
        let lambda = Some(self.lambda);
        let mt = self.m.transpose();
        let mut report = IdentityReport::new("l-proof-identities", ErrorMetric::Absolute, tol);
        report.record_error("L tK = B_rho", lambda, (&self.l * &self.k.transpose()).max_abs_diff(&self.b_rho));
        report.record_error("tM L = H_rho", lambda, (&mt * &self.l).max_abs_diff(&self.h_rho));
        let sq = &self.j_rho * &self.j_rho;
        report.record_error("J_rho^2 = I", lambda, sq.max_abs_diff(&ComplexMatrix::identity(sq.rows())));
        report.record_error("tM J_rho L = D_Gamma x I", lambda, (&(&mt * &self.j_rho) * &self.l).max_abs_diff(&self.d_gamma));
        report.record_error("K = M (X x I)", lambda, self.k.max_abs_diff(&(&self.m * &self.x)));
        report.record_error(
            "U_rho = i J_rho - B_rho",
            lambda,
            (&self.j_rho.scale(I) - &self.b_rho).max_abs_diff(&self.u_rho),
        );
        report
    }

    /// Coefficients of `det(I − u U_ρ)` (trace recursion) against
    /// `(1 + u²)^{(m−n)d} det((1 + u²)I + u(X⊗I)H_ρ + iu²(X⊗I)(D_Γ⊗I))`
    /// recovered from samples on a circle.
    pub fn check_u_factorization(&self, graph: &Graph, tol: f64) -> Result<IdentityReport> {
        let d = self.degree;
        let degree = 2 * graph.edge_count() * d;
        let direct: PolyCoeffs = det_poly(&self.u_rho, degree)?;
        let xh = &self.x * &self.h_rho;
        let xd = &self.x * &self.d_gamma;
        let nd = graph.vertex_count() * d;
        let exponent = (graph.edge_count() as i32 - graph.vertex_count() as i32) * d as i32;
        let eval = |u: Complex64| -> Result<Complex64> {
            let s = Complex64::new(1.0, 0.0) + u * u;
            let inner = &(&ComplexMatrix::identity(nd).scale(s) + &xh.scale(u)) + &xd.scale(I * u * u);
            Ok(s.powi(exponent) * lu_det(&inner)?)
        };
        let factored = sample_coefficients(eval, degree, 0.8)?;
        let mut report = IdentityReport::new("l-u-factorization", ErrorMetric::Absolute, tol);
        for (k, (a, b)) in direct.coeffs().iter().zip(factored.coeffs()).enumerate() {
            report.compare(format!("coefficient of u^{k}"), Some(self.lambda), *a, *b);
        }
        Ok(report)
    }
}
