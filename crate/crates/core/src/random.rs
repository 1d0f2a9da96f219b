//! Seeded random instances and spectral-parameter samples.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::covering::{FiniteGroup, VoltageAssignment};
use crate::error::Result;
use crate::graph::Graph;
use crate::hermitian::{EdgeWeightSystem, VertexGammas};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of a random instance. `h ∈ [0.1, 2)`, `γ ∈ [−π/2, π/2]`, diagonal in `[−2, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub parallel_edges: bool,
}

impl Default for RandomSpec {
    fn default() -> Self {
        Self {
            min_vertices: 2,
            max_vertices: 8,
            max_edges: 16,
            parallel_edges: true,
        }
    }
}

/// A random spanning tree plus extra edges, with random weights.
pub fn random_instance(rng: &mut impl Rng, spec: RandomSpec) -> Result<(Graph, EdgeWeightSystem)> {
    let n = rng.gen_range(spec.min_vertices.max(2)..=spec.max_vertices.max(2));
    let simple_max = n * (n - 1) / 2;
    let cap = if spec.parallel_edges {
        spec.max_edges
    } else {
        spec.max_edges.min(simple_max)
    };
    let m = rng.gen_range((n - 1).min(cap)..=cap.max(n - 1));
    let mut edges = Vec::with_capacity(m);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push(orient(rng, u, v));
    }
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        if !spec.parallel_edges && edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u)) {
            continue;
        }
        edges.push((u, v));
    }
    let graph = Graph::with_vertex_count(n, edges)?;
    let w = random_weights(rng, &graph)?;
    Ok((graph, w))
}

fn orient(rng: &mut impl Rng, u: usize, v: usize) -> (usize, usize) {
    if rng.gen() {
        (u, v)
    } else {
        (v, u)
    }
}

pub fn random_weights(rng: &mut impl Rng, graph: &Graph) -> Result<EdgeWeightSystem> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let m = graph.edge_count();
    let h = (0..m).map(|_| rng.gen_range(0.1..2.0)).collect();
    let gamma = (0..m).map(|_| rng.gen_range(-half_pi..=half_pi)).collect();
    let diag = (0..graph.vertex_count()).map(|_| rng.gen_range(-2.0..=2.0)).collect();
    EdgeWeightSystem::new(graph, h, gamma, diag)
}

pub fn random_voltages(rng: &mut impl Rng, graph: &Graph, group: &FiniteGroup) -> Result<VoltageAssignment> {
    let per_edge: Vec<usize> = (0..graph.edge_count()).map(|_| rng.gen_range(0..group.order())).collect();
    VoltageAssignment::new(graph, group, &per_edge)
}

/// `2 · max_u (|H_uu| + Γ_u)`.
pub fn default_radius(graph: &Graph, w: &EdgeWeightSystem) -> f64 {
    let gammas = VertexGammas::new(graph, w);
    2.0 * w.diag().iter().zip(gammas.values()).map(|(d, g)| d.abs() + g).fold(0.0, f64::max)
}

/// `count` points uniform in the disk `|λ| ≤ radius`.
pub fn disk_samples(rng: &mut impl Rng, count: usize, radius: f64) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

/// `count` points uniform in `[lo, hi]`.
pub fn real_samples(rng: &mut impl Rng, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..count).map(|_| rng.gen_range(lo..=hi)).collect()
}
