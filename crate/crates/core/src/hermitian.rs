//! Edge data `(h, γ)` and vertex values generating the Hermitian matrix `H`.
//!
//! Off-diagonal entries are `H_uv = Σ h_f e^{2iγ_f}` over arcs `f = (u, v)`
//! (a single term unless the graph has parallel edges). `γ` is stored per
//! edge for the arc in the edge's given orientation; the inverse arc
//! carries `−γ`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{ComplexMatrix, HERMITIAN_EPS};

/// Modulus below which `H_uu − λ − iΓ_u` counts as a pole.
pub const POLE_EPS: f64 = 1e-12;

/// Per-edge `h`, `γ` and per-vertex diagonal values.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeightSystem {
    h: Vec<f64>,
    gamma: Vec<f64>,
    diag: Vec<f64>,
}

impl EdgeWeightSystem {
    /// Per-edge data, `gamma[j]` belonging to arc `j` (edge `j` as oriented in the graph).
    pub fn new(graph: &Graph, h: Vec<f64>, gamma: Vec<f64>, diag: Vec<f64>) -> Result<Self> {
        let m = graph.edge_count();
        if h.len() != m || gamma.len() != m {
            return Err(Error::IncompleteData(format!(
                "expected {m} edge weights, got h: {}, gamma: {}",
                h.len(),
                gamma.len()
            )));
        }
        if diag.len() != graph.vertex_count() {
            return Err(Error::IncompleteData(format!(
                "expected {} diagonal values, got {}",
                graph.vertex_count(),
                diag.len()
            )));
        }
        for (j, (&hj, &gj)) in h.iter().zip(&gamma).enumerate() {
            if !hj.is_finite() || hj <= 0.0 {
                return Err(Error::InvalidWeight(format!("edge {j}: h = {hj} must be finite and > 0")));
            }
            if !gj.is_finite() || gj.abs() > FRAC_PI_2 {
                return Err(Error::InvalidWeight(format!("edge {j}: gamma = {gj} outside [-pi/2, pi/2]")));
            }
        }
        if let Some(u) = diag.iter().position(|d| !d.is_finite()) {
            return Err(Error::InvalidWeight(format!("vertex {u}: diagonal value is not finite")));
        }
        Ok(Self { h, gamma, diag })
    }

    /// Per-arc data indexed by canonical arc order; enforces `h_f = h_{f⁻¹}`
    /// and `γ_f = −γ_{f⁻¹}`.
    pub fn from_arc_values(graph: &Graph, h: &[f64], gamma: &[f64], diag: Vec<f64>) -> Result<Self> {
        let m = graph.edge_count();
        if h.len() != 2 * m || gamma.len() != 2 * m {
            return Err(Error::IncompleteData(format!("expected {} arc values", 2 * m)));
        }
        for j in 0..m {
            if h[j] != h[j + m] {
                return Err(Error::InvalidWeight(format!("arc {j}: h = {} differs from its inverse ({})", h[j], h[j + m])));
            }
            if gamma[j] != -gamma[j + m] {
                return Err(Error::InvalidWeight(format!(
                    "arc {j}: gamma = {} is not minus its inverse ({})",
                    gamma[j],
                    gamma[j + m]
                )));
            }
        }
        Self::new(graph, h[..m].to_vec(), gamma[..m].to_vec(), diag)
    }

    pub fn edge_h(&self) -> &[f64] {
        &self.h
    }

    pub fn edge_gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// `h_f` for an arc.
    pub fn h(&self, arc: usize) -> f64 {
        self.h[arc % self.h.len()]
    }

    /// `γ_f` for an arc.
    pub fn gamma(&self, arc: usize) -> f64 {
        let m = self.gamma.len();
        if arc < m {
            self.gamma[arc]
        } else {
            -self.gamma[arc - m]
        }
    }

    /// `w(e) = √h_e e^{iγ_e}`.
    pub fn arc_weight(&self, arc: usize) -> Complex64 {
        Complex64::from_polar(self.h(arc).sqrt(), self.gamma(arc))
    }

    /// `h_f e^{2iγ_f}`.
    pub fn arc_entry(&self, arc: usize) -> Complex64 {
        Complex64::from_polar(self.h(arc), 2.0 * self.gamma(arc))
    }
}

/// The Hermitian matrix generated by `w` on `graph`.
pub fn assemble_h(graph: &Graph, w: &EdgeWeightSystem) -> Result<ComplexMatrix> {
    check_compatible(graph, w)?;
    let n = graph.vertex_count();
    let mut h = ComplexMatrix::zeros(n, n);
    for (u, &d) in w.diag().iter().enumerate() {
        h[(u, u)] = Complex64::new(d, 0.0);
    }
    for arc in 0..graph.arc_count() {
        h[(graph.origin(arc), graph.terminus(arc))] += w.arc_entry(arc);
    }
    Ok(h)
}

pub(crate) fn check_compatible(graph: &Graph, w: &EdgeWeightSystem) -> Result<()> {
    if w.h.len() != graph.edge_count() || w.diag.len() != graph.vertex_count() {
        return Err(Error::IncompleteData(format!(
            "weights for {} edges / {} vertices do not fit a graph with {} edges / {} vertices",
            w.h.len(),
            w.diag.len(),
            graph.edge_count(),
            graph.vertex_count()
        )));
    }
    Ok(())
}

/// Recovers `(h, γ)` and the diagonal from a Hermitian matrix on a simple graph.
///
/// `γ = arg(H_uv)/2`; a real negative entry gets `γ = π/2` when `u ≥ v` and
/// `−π/2` when `u < v`.
pub fn decompose_h(h: &ComplexMatrix, graph: &Graph) -> Result<EdgeWeightSystem> {
    let n = graph.vertex_count();
    if h.rows() != n || h.cols() != n {
        return Err(Error::Structure(format!("expected a {n}x{n} matrix")));
    }
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_EPS * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let mut adjacent = vec![vec![false; n]; n];
    for (j, &(u, v)) in graph.edges().iter().enumerate() {
        if adjacent[u][v] {
            return Err(Error::Structure(format!(
                "edge {j} is parallel to an earlier edge; a matrix cannot separate parallel edges"
            )));
        }
        adjacent[u][v] = true;
        adjacent[v][u] = true;
    }
    for u in 0..n {
        if h[(u, u)].im != 0.0 {
            return Err(Error::Structure(format!("diagonal entry {u} is not real")));
        }
        for v in 0..n {
            if u != v && !adjacent[u][v] && h[(u, v)].norm() != 0.0 {
                return Err(Error::Structure(format!("entry ({u}, {v}) is nonzero but there is no edge")));
            }
        }
    }
    let mut hs = Vec::with_capacity(graph.edge_count());
    let mut gammas = Vec::with_capacity(graph.edge_count());
    for &(u, v) in graph.edges() {
        let z = h[(u, v)];
        if z.norm() == 0.0 {
            return Err(Error::ZeroWeight(u, v));
        }
        let gamma = if z.im == 0.0 && z.re < 0.0 {
            if u >= v {
                FRAC_PI_2
            } else {
                -FRAC_PI_2
            }
        } else {
            z.arg() / 2.0
        };
        hs.push(z.norm());
        gammas.push(gamma);
    }
    let diag = (0..n).map(|u| h[(u, u)].re).collect();
    EdgeWeightSystem::new(graph, hs, gammas, diag)
}

/// `Γ_u = Σ_{o(b)=u} h_b` for every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexGammas {
    gamma: Vec<f64>,
}

impl VertexGammas {
    pub fn new(graph: &Graph, w: &EdgeWeightSystem) -> Self {
        let gamma = (0..graph.vertex_count()).map(|u| graph.outgoing(u).iter().map(|&b| w.h(b)).sum()).collect();
        Self { gamma }
    }

    pub fn values(&self) -> &[f64] {
        &self.gamma
    }

    /// `D_L = diag(Γ_1, …, Γ_n)`.
    pub fn matrix(&self) -> ComplexMatrix {
        let d: Vec<Complex64> = self.gamma.iter().map(|&g| Complex64::new(g, 0.0)).collect();
        ComplexMatrix::from_diagonal(&d)
    }

    /// `H_uu − λ − iΓ_u` for every vertex, failing on a pole.
    pub fn pole_factors(&self, diag: &[f64], lambda: Complex64) -> Result<Vec<Complex64>> {
        self.gamma
            .iter()
            .zip(diag)
            .enumerate()
            .map(|(u, (&g, &d))| {
                let z = Complex64::new(d, -g) - lambda;
                if z.norm() < POLE_EPS {
                    Err(Error::Pole { vertex: u, modulus: z.norm() })
                } else {
                    Ok(z)
                }
            })
            .collect()
    }

    /// `x_u = 2 / (H_uu − λ − iΓ_u)`.
    pub fn x_values(&self, diag: &[f64], lambda: Complex64) -> Result<Vec<Complex64>> {
        Ok(self.pole_factors(diag, lambda)?.into_iter().map(|z| Complex64::new(2.0, 0.0) / z).collect())
    }
}

/// Convenience for `VertexGammas::new(graph, w).x_values(w.diag(), λ)`.
pub fn x_values(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64) -> Result<Vec<Complex64>> {
    VertexGammas::new(graph, w).x_values(w.diag(), lambda)
}
