//! Vertex scattering blocks, the bond scattering matrix `U(λ)` and the
//! secular determinant `det(I − U(λ))`.
//!
//! For a vertex `u`, incoming arc `e` (`t(e) = u`) and outgoing arc `f`
//! (`o(f) = u`):
//!
//! ```text
//! σ^(u)_ef(λ) = i δ_{e⁻¹ f} − x_u w(e) w(f),   x_u = 2 / (H_uu − λ − iΓ_u),
//! w(e) = √h_e e^{iγ_e}
//! ```
//!
//! and `U_ef = σ^(t(e))_ef` whenever `t(e) = o(f)`, zero otherwise. The
//! secular determinant equals
//! `(−1)^n 2^m det(λI − H) / ∏_u (H_uu − λ − iΓ_u)`; both sides are exposed
//! separately so they can be compared.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hermitian::{assemble_h, check_compatible, EdgeWeightSystem, VertexGammas};
use crate::linalg::{det_poly, lu_det, ComplexMatrix, PolyCoeffs};
use crate::report::{ErrorMetric, IdentityReport};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default tolerance for the secular formula (relative).
pub const THEOREM4_TOL: f64 = 1e-9;
/// Tolerance for the matrix identities behind the secular formula (absolute, entrywise).
pub const PROOF_TOL: f64 = 1e-10;
/// Modulus of `det(I − U)`, relative to its largest value on the scan grid,
/// below which a refined minimum counts as a root.
pub const ROOT_EPS: f64 = 1e-8;
/// Roots closer than this are merged.
pub const ROOT_MERGE: f64 = 1e-6;

/// `σ^(u)(λ)`: rows are the arcs entering `u`, columns the arcs leaving `u`,
/// both in canonical arc order.
pub fn vertex_sigma(graph: &Graph, w: &EdgeWeightSystem, u: usize, lambda: Complex64) -> Result<ComplexMatrix> {
    check_compatible(graph, w)?;
    if u >= graph.vertex_count() {
        return Err(Error::Dimension(format!("vertex {u} out of range")));
    }
    let x = VertexGammas::new(graph, w).x_values(w.diag(), lambda)?[u];
    let rows = graph.incoming(u);
    let cols = graph.outgoing(u);
    Ok(ComplexMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        sigma_entry(graph, w, x, rows[i], cols[j])
    }))
}

fn sigma_entry(graph: &Graph, w: &EdgeWeightSystem, x: Complex64, e: usize, f: usize) -> Complex64 {
    let back = if graph.inverse(e) == f { I } else { Complex64::new(0.0, 0.0) };
    back - x * w.arc_weight(e) * w.arc_weight(f)
}

/// `U(λ)` together with the `λ` it was built at. Rows and columns follow the
/// graph's canonical arc order.
#[derive(Debug, Clone, PartialEq)]
pub struct BondMatrix {
    pub matrix: ComplexMatrix,
    pub lambda: Complex64,
}

impl BondMatrix {
    /// `U_ef`.
    pub fn entry(&self, e: usize, f: usize) -> Complex64 {
        self.matrix[(e, f)]
    }

    pub fn secular_det(&self) -> Complex64 {
        let n = self.matrix.rows();
        lu_det(&(&ComplexMatrix::identity(n) - &self.matrix)).expect("square")
    }
}

pub fn bond_scattering_matrix(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64) -> Result<BondMatrix> {
    check_compatible(graph, w)?;
    let x = VertexGammas::new(graph, w).x_values(w.diag(), lambda)?;
    let n_arcs = graph.arc_count();
    let mut u = ComplexMatrix::zeros(n_arcs, n_arcs);
    for e in 0..n_arcs {
        let v = graph.terminus(e);
        for &f in graph.outgoing(v) {
            u[(e, f)] = sigma_entry(graph, w, x[v], e, f);
        }
    }
    Ok(BondMatrix { matrix: u, lambda })
}

/// `det(I_2m − U(λ))`.
pub fn secular_det(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64) -> Result<Complex64> {
    Ok(bond_scattering_matrix(graph, w, lambda)?.secular_det())
}

/// `(−1)^n 2^m det(λI_n − H) / ∏_j (H_jj − λ − iΓ_j)`.
pub fn theorem4_rhs(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64) -> Result<Complex64> {
    let h = assemble_h(graph, w)?;
    let poles = VertexGammas::new(graph, w).pole_factors(w.diag(), lambda)?;
    let n = graph.vertex_count();
    let shifted = &ComplexMatrix::identity(n).scale(lambda) - &h;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let denom: Complex64 = poles.into_iter().product();
    Ok(lu_det(&shifted)? * sign * 2f64.powi(graph.edge_count() as i32) / denom)
}

/// Compares both sides of the secular formula at every sample; samples on a
/// pole are skipped and listed.
pub fn verify_theorem4(graph: &Graph, w: &EdgeWeightSystem, samples: &[Complex64], tol: f64) -> Result<IdentityReport> {
    check_compatible(graph, w)?;
    let mut report = IdentityReport::new("theorem4", ErrorMetric::Relative, tol);
    for &lambda in samples {
        match (secular_det(graph, w, lambda), theorem4_rhs(graph, w, lambda)) {
            (Ok(lhs), Ok(rhs)) => report.compare("det(I - U) vs determinant formula", Some(lambda), lhs, rhs),
            (Err(e @ Error::Pole { .. }), _) | (_, Err(e @ Error::Pole { .. })) => report.skip(lambda, e.to_string()),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(report)
}

/// `max_λ ‖U(λ)U(λ)† − I‖_max` over the samples (meaningful for real `λ`).
pub fn unitarity_report(graph: &Graph, w: &EdgeWeightSystem, samples: &[f64], tol: f64) -> Result<IdentityReport> {
    let mut report = IdentityReport::new("unitarity", ErrorMetric::Absolute, tol);
    for &t in samples {
        let lambda = Complex64::new(t, 0.0);
        let u = bond_scattering_matrix(graph, w, lambda)?;
        report.record_error("max |U U^* - I|", Some(lambda), u.matrix.unitarity_defect());
    }
    Ok(report)
}

/// Interval guaranteed to contain the spectrum of `H`:
/// `[min H_jj − 2 max Γ, max H_jj + 2 max Γ]`.
pub fn default_scan_range(graph: &Graph, w: &EdgeWeightSystem) -> (f64, f64) {
    let gamma_max = VertexGammas::new(graph, w).values().iter().copied().fold(0.0, f64::max);
    let lo = w.diag().iter().copied().fold(f64::INFINITY, f64::min);
    let hi = w.diag().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo - 2.0 * gamma_max, hi + 2.0 * gamma_max)
}

/// Real roots of `λ ↦ det(I − U(λ))`, ascending.
///
/// Local minima of `|det|` on a uniform grid are refined by golden-section
/// search; a refined minimum is a root when `|det|` there is below
/// `ROOT_EPS` times the largest grid value. Roots closer than `ROOT_MERGE`
/// merge, and so can eigenvalues closer than the grid spacing, so the result
/// may hold fewer values than `n`.
pub fn spectrum_via_secular(graph: &Graph, w: &EdgeWeightSystem, range: Option<(f64, f64)>, grid: usize) -> Result<Vec<f64>> {
    let (lo, hi) = range.unwrap_or_else(|| default_scan_range(graph, w));
    if !(lo < hi) || grid < 3 {
        return Err(Error::Dimension(format!("bad scan range [{lo}, {hi}] with {grid} points")));
    }
    let f = |t: f64| -> Result<f64> { Ok(secular_det(graph, w, Complex64::new(t, 0.0))?.norm()) };
    let step = (hi - lo) / (grid - 1) as f64;
    let xs: Vec<f64> = (0..grid).map(|i| lo + step * i as f64).collect();
    let fs = xs.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
    let scale = fs.iter().copied().fold(0.0, f64::max);
    let mut roots: Vec<f64> = Vec::new();
    for i in 1..grid - 1 {
        if !(fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1]) {
            continue;
        }
        let (t, value) = golden_section(&f, xs[i - 1], xs[i + 1])?;
        if value <= ROOT_EPS * scale && roots.last().is_none_or(|&r| (t - r).abs() > ROOT_MERGE) {
            roots.push(t);
        }
    }
    Ok(roots)
}

fn golden_section(f: &impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    // Well below the 1e-8 root resolution so simple roots reach the rounding floor.
    while b - a > 1e-12 * a.abs().max(b.abs()).max(1.0) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d)?;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, f(t)?))
}

/// The matrices behind the determinant formula, at one `λ`.
///
/// `B_ef = x_{o(f)} w(e) w(f)` when `t(e) = o(f)`; `J₀` pairs each arc with
/// its inverse; `K`, `L`, `M` are `2m × n` with `K = M X`,
/// `L_{b j} = w(b) [t(b) = j]`, `M_{b j} = w(b) [o(b) = j]`.
#[derive(Debug, Clone)]
pub struct ProofMatrices {
    pub lambda: Complex64,
    pub b: ComplexMatrix,
    pub j0: ComplexMatrix,
    pub k: ComplexMatrix,
    pub l: ComplexMatrix,
    pub m: ComplexMatrix,
    pub x: ComplexMatrix,
    pub d_l: ComplexMatrix,
}

pub fn proof_matrices(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64) -> Result<ProofMatrices> {
    check_compatible(graph, w)?;
    let gammas = VertexGammas::new(graph, w);
    let x = gammas.x_values(w.diag(), lambda)?;
    let (n, arcs) = (graph.vertex_count(), graph.arc_count());
    let one = Complex64::new(1.0, 0.0);
    let b = ComplexMatrix::from_fn(arcs, arcs, |e, f| {
        if graph.terminus(e) == graph.origin(f) {
            x[graph.origin(f)] * w.arc_weight(e) * w.arc_weight(f)
        } else {
            Complex64::default()
        }
    });
    let j0 = ComplexMatrix::from_fn(arcs, arcs, |e, f| if graph.inverse(e) == f { one } else { Complex64::default() });
    let incidence = |at: fn(&Graph, usize) -> usize, scale: &dyn Fn(usize) -> Complex64| {
        ComplexMatrix::from_fn(arcs, n, |bi, j| {
            if at(graph, bi) == j {
                w.arc_weight(bi) * scale(j)
            } else {
                Complex64::default()
            }
        })
    };
    let k = incidence(Graph::origin, &|j| x[j]);
    let l = incidence(Graph::terminus, &|_| one);
    let m = incidence(Graph::origin, &|_| one);
    Ok(ProofMatrices {
        lambda,
        b,
        j0,
        k,
        l,
        m,
        x: ComplexMatrix::from_diagonal(&x),
        d_l: gammas.matrix(),
    })
}

impl ProofMatrices {
    /// Entrywise checks of `K = MX`, `L ᵗK = B`, `ᵗM L = H − diag(H)`,
    /// `ᵗM J₀ L = D_L` and `U = iJ₀ − B` (absolute, against `tol`).
    ///
    /// `ᵗM L` only sees arcs, so it reproduces the off-diagonal part of `H`;
    /// the two agree exactly when the diagonal is zero.
    pub fn check(&self, graph: &Graph, w: &EdgeWeightSystem, tol: f64) -> Result<IdentityReport> {
        let h = assemble_h(graph, w)?;
        let diag: Vec<Complex64> = h.diagonal();
        let h_off = &h - &ComplexMatrix::from_diagonal(&diag);
        let u = bond_scattering_matrix(graph, w, self.lambda)?;
        let mt = self.m.transpose();
        let lambda = Some(self.lambda);
        let mut report = IdentityReport::new("proof-identities", ErrorMetric::Absolute, tol);
        report.record_error("K = M X", lambda, self.k.max_abs_diff(&(&self.m * &self.x)));
        report.record_error("L tK = B", lambda, (&self.l * &self.k.transpose()).max_abs_diff(&self.b));
        report.record_error("tM L = H - diag(H)", lambda, (&mt * &self.l).max_abs_diff(&h_off));
        report.record_error("tM J0 L = D_L", lambda, (&(&mt * &self.j0) * &self.l).max_abs_diff(&self.d_l));
        let rebuilt = &self.j0.scale(I) - &self.b;
        report.record_error("U = i J0 - B", lambda, rebuilt.max_abs_diff(&u.matrix));
        Ok(report)
    }
}

/// Coefficients of `(1 + u²)^{m−n} det((1 + u²)I + uXH' + iu²XD_L)` with
/// `H' = H − diag(H)`, through `u^{2m}`.
///
/// The polynomial is sampled at `2m + 1` points on a circle and the
/// coefficients recovered by a discrete Fourier transform, independent of the
/// trace recursion used for `det(I − uU)`.
pub fn u_factorized_poly(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64) -> Result<PolyCoeffs> {
    let pm = proof_matrices(graph, w, lambda)?;
    let h = assemble_h(graph, w)?;
    let h_off = &h - &ComplexMatrix::from_diagonal(&h.diagonal());
    let xh = &pm.x * &h_off;
    let xd = &pm.x * &pm.d_l;
    let n = graph.vertex_count();
    let exponent = graph.edge_count() as i32 - n as i32;
    let eval = |u: Complex64| -> Result<Complex64> {
        let s = Complex64::new(1.0, 0.0) + u * u;
        let inner = &(&ComplexMatrix::identity(n).scale(s) + &xh.scale(u)) + &xd.scale(I * u * u);
        Ok(s.powi(exponent) * lu_det(&inner)?)
    };
    let degree = 2 * graph.edge_count();
    sample_coefficients(eval, degree, 0.8)
}

/// Coefficients of a polynomial of degree `≤ degree` from its values on the
/// circle of the given radius.
pub(crate) fn sample_coefficients(eval: impl Fn(Complex64) -> Result<Complex64>, degree: usize, radius: f64) -> Result<PolyCoeffs> {
    let count = degree + 1;
    let roots: Vec<Complex64> = (0..count)
        .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / count as f64))
        .collect();
    let values = roots.iter().map(|&z| eval(z * radius)).collect::<Result<Vec<_>>>()?;
    let coeffs = (0..count)
        .map(|j| {
            let s: Complex64 = values.iter().zip(&roots).map(|(&v, &z)| v * z.powi(-(j as i32))).sum();
            s / (count as f64 * radius.powi(j as i32))
        })
        .collect();
    Ok(PolyCoeffs::new(coeffs))
}

/// Coefficientwise comparison of `det(I − uU(λ))` (trace recursion) with
/// [`u_factorized_poly`].
pub fn verify_u_factorization(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64, tol: f64) -> Result<IdentityReport> {
    let u = bond_scattering_matrix(graph, w, lambda)?;
    let degree = 2 * graph.edge_count();
    let direct = det_poly(&u.matrix, degree)?;
    let factored = u_factorized_poly(graph, w, lambda)?;
    let mut report = IdentityReport::new("u-factorization", ErrorMetric::Absolute, tol);
    for (k, (a, b)) in direct.coeffs().iter().zip(factored.coeffs()).enumerate() {
        report.compare(format!("coefficient of u^{k}"), Some(lambda), *a, *b);
    }
    Ok(report)
}
