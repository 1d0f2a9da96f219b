//! Cycle weights and the Euler product of `det(I − uU(λ))` over prime
//! cycle classes.
//!
//! The weight of a cycle `C = (b_1, …, b_k)` is the product of scattering
//! amplitudes along it, `w_C = U_{b_1 b_2} U_{b_2 b_3} ⋯ U_{b_k b_1}`, so
//! that `Tr(U^k)` is the sum of `w_C` over all cycles of length `k`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{Cycle, CycleClass, Graph};
use crate::hermitian::EdgeWeightSystem;
use crate::linalg::{det_poly, power_traces, relative_error, PolyCoeffs};
use crate::report::{ErrorMetric, IdentityReport};
use crate::scattering::{bond_scattering_matrix, BondMatrix};

/// Enumeration budget on the truncation order / cycle length.
pub const MAX_ORDER: usize = 12;
/// Coefficientwise tolerance for the Euler product (absolute).
pub const THEOREM5_TOL: f64 = 1e-8;
/// Tolerance for the trace identity (relative).
pub const TRACE_TOL: f64 = 1e-9;

/// A prime cycle class with its weight at some `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCycleClass {
    pub class: CycleClass,
    pub weight: Complex64,
}

/// `w_C` from a prebuilt `U(λ)`.
pub fn weight_in(u: &BondMatrix, arcs: &[usize]) -> Complex64 {
    let k = arcs.len();
    (0..k).map(|i| u.entry(arcs[i], arcs[(i + 1) % k])).product()
}

/// `w_C = ∏_k σ^(t(b_k))_{b_k b_{k+1}}`, indices cyclic.
pub fn cycle_weight(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64, cycle: &Cycle) -> Result<Complex64> {
    if !graph.is_cycle(cycle.arcs()) {
        return Err(Error::InvalidCycle(format!("{:?} is not a closed walk", cycle.arcs())));
    }
    let u = bond_scattering_matrix(graph, w, lambda)?;
    Ok(weight_in(&u, cycle.arcs()))
}

/// Prime cycle classes of length `≤ max_len` with their weights.
pub fn weighted_prime_classes(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64, max_len: usize) -> Result<Vec<WeightedCycleClass>> {
    let u = bond_scattering_matrix(graph, w, lambda)?;
    Ok(graph
        .prime_cycle_classes(max_len)
        .into_iter()
        .map(|class| {
            let weight = weight_in(&u, class.representative().arcs());
            WeightedCycleClass { class, weight }
        })
        .collect())
}

/// Coefficients of `det(I_2m − uU(λ))` through `u^order`.
pub fn secular_poly(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64, order: usize) -> Result<PolyCoeffs> {
    let u = bond_scattering_matrix(graph, w, lambda)?;
    det_poly(&u.matrix, order)
}

/// `∏_[C] (1 − w_C u^|C|)` over prime classes with `|C| ≤ order`, truncated at `u^order`.
///
/// Classes are streamed, so memory stays flat even when there are millions.
pub fn truncated_euler_product(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64, order: usize) -> Result<PolyCoeffs> {
    let u = bond_scattering_matrix(graph, w, lambda)?;
    let mut acc = PolyCoeffs::one(order).into_vec();
    graph.visit_prime_cycles(order, |arcs| {
        let weight = weight_in(&u, arcs);
        for k in (arcs.len()..=order).rev() {
            let lower = acc[k - arcs.len()];
            acc[k] -= weight * lower;
        }
    });
    Ok(PolyCoeffs::new(acc))
}

pub fn euler_product(classes: &[WeightedCycleClass], order: usize) -> PolyCoeffs {
    let mut acc = PolyCoeffs::one(order);
    for c in classes {
        let len = c.class.len();
        if len > order {
            continue;
        }
        let mut factor = PolyCoeffs::one(order).into_vec();
        factor[len] -= c.weight;
        acc = acc.mul_truncated(&PolyCoeffs::new(factor));
    }
    acc
}

/// `Σ_{[D], |D| divides k} |D| · w_D^{k/|D|}`: the length-`k` cycle sum
/// rebuilt from prime classes (each cycle is a unique power of a prime one).
pub fn cycle_sum_from_primes(classes: &[WeightedCycleClass], k: usize) -> Complex64 {
    classes
        .iter()
        .filter(|c| k.is_multiple_of(c.class.len()))
        .map(|c| c.weight.powi((k / c.class.len()) as i32) * c.class.len() as f64)
        .sum()
}

/// Compares `det(I − uU)` and the truncated Euler product for `k = 0 … order`.
pub fn verify_theorem5(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64, order: usize, tol: f64) -> Result<IdentityReport> {
    if order > MAX_ORDER {
        return Err(Error::Budget(format!("truncation order {order} exceeds {MAX_ORDER}")));
    }
    let lhs = secular_poly(graph, w, lambda, order)?;
    let rhs = truncated_euler_product(graph, w, lambda, order)?;
    let mut report = IdentityReport::new("theorem5", ErrorMetric::Absolute, tol);
    for (k, (a, b)) in lhs.coeffs().iter().zip(rhs.coeffs()).enumerate() {
        report.compare(format!("coefficient of u^{k}"), Some(lambda), *a, *b);
    }
    Ok(report)
}

/// Compares `Tr(U^k)` with the sum of `w_C` over all cycles of length `k`.
pub fn trace_identity_check(graph: &Graph, w: &EdgeWeightSystem, lambda: Complex64, k: usize, tol: f64) -> Result<IdentityReport> {
    if k > MAX_ORDER {
        return Err(Error::Budget(format!("cycle length {k} exceeds {MAX_ORDER}")));
    }
    let u = bond_scattering_matrix(graph, w, lambda)?;
    let trace = if k == 0 {
        Complex64::new(u.matrix.rows() as f64, 0.0)
    } else {
        power_traces(&u.matrix, k)[k - 1]
    };
    let sum: Complex64 = graph.enumerate_cycles(k).iter().map(|c| weight_in(&u, c.arcs())).sum();
    let mut report = IdentityReport::new("trace", ErrorMetric::Relative, tol);
    report.compare(format!("Tr(U^{k}) vs cycle sum"), Some(lambda), trace, sum);
    debug_assert!(relative_error(trace, sum).is_finite());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn k3() -> (Graph, EdgeWeightSystem) {
        let g = Graph::with_vertex_count(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let w = EdgeWeightSystem::new(&g, vec![0.8, 1.1, 1.4], vec![0.2, -0.5, 0.9], vec![0.3, -0.4, 0.0]).unwrap();
        (g, w)
    }

    fn single_edge() -> (Graph, EdgeWeightSystem) {
        let g = Graph::with_vertex_count(2, vec![(0, 1)]).unwrap();
        let w = EdgeWeightSystem::new(&g, vec![1.0], vec![0.0], vec![0.0, 0.0]).unwrap();
        (g, w)
    }

    #[test]
    fn back_and_forth_weight_on_single_edge() {
        let (g, w) = single_edge();
        let cycle = Cycle::new(&g, vec![0, 1]).unwrap();
        let wc = cycle_weight(&g, &w, c(0.0, 0.0), &cycle).unwrap();
        assert!((wc - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn weight_is_rotation_invariant() {
        let (g, w) = k3();
        let cycle = Cycle::new(&g, vec![0, 1, 2, 5, 4, 3]).unwrap();
        let base = cycle_weight(&g, &w, c(0.1, 0.2), &cycle).unwrap();
        for s in 1..6 {
            let r = cycle_weight(&g, &w, c(0.1, 0.2), &cycle.rotated(s)).unwrap();
            assert!((r - base).norm() < 1e-14);
        }
    }

    #[test]
    fn broken_cycle_is_rejected() {
        // a triangle of K3 is not a closed walk on the path 1-2-3
        let (g, _) = k3();
        let bogus = Cycle::new(&g, vec![0, 1, 2]).unwrap();
        let path = Graph::with_vertex_count(3, vec![(0, 1), (1, 2)]).unwrap();
        let pw = EdgeWeightSystem::new(&path, vec![1.0; 2], vec![0.0; 2], vec![0.0; 3]).unwrap();
        assert!(matches!(cycle_weight(&path, &pw, c(0.0, 0.0), &bogus), Err(Error::InvalidCycle(_))));
    }

    #[test]
    fn secular_poly_low_orders() {
        let (g, w) = k3();
        let lambda = c(0.5, 0.5);
        let p1 = secular_poly(&g, &w, lambda, 1).unwrap();
        assert!(p1.coeffs()[1].norm() < 1e-15);
        let u = bond_scattering_matrix(&g, &w, lambda).unwrap();
        let p2 = secular_poly(&g, &w, lambda, 2).unwrap();
        let tr2 = power_traces(&u.matrix, 2)[1];
        assert!((p2.coeffs()[2] + tr2 / 2.0).norm() < 1e-12);
        let p6 = secular_poly(&g, &w, lambda, 6).unwrap();
        assert!((p6.coeffs()[6] - u.matrix.det().unwrap()).norm() < 1e-9);
    }

    #[test]
    fn order_two_product_uses_edge_classes() {
        let (g, w) = k3();
        let lambda = c(-0.3, 0.7);
        let classes = weighted_prime_classes(&g, &w, lambda, 2).unwrap();
        assert_eq!(classes.len(), 3);
        let p = truncated_euler_product(&g, &w, lambda, 2).unwrap();
        let sum: Complex64 = classes.iter().map(|c| c.weight).sum();
        assert!((p.coeffs()[2] + sum).norm() < 1e-14);
        let s = secular_poly(&g, &w, lambda, 2).unwrap();
        assert!((p.coeffs()[2] - s.coeffs()[2]).norm() < 1e-9);
    }

    #[test]
    fn back_scatter_limit() {
        let (g, w) = k3();
        for class in weighted_prime_classes(&g, &w, c(1e6, 0.0), 2).unwrap() {
            assert!((class.weight - c(-1.0, 0.0)).norm() < 1e-5);
        }
    }

    #[test]
    fn theorem5_on_small_graphs() {
        let (g, w) = k3();
        assert!(verify_theorem5(&g, &w, c(0.4, -0.3), 10, THEOREM5_TOL).unwrap().pass);
        let (g, w) = single_edge();
        let r = verify_theorem5(&g, &w, c(0.9, 0.2), 8, THEOREM5_TOL).unwrap();
        assert!(r.pass, "{r:#?}");
        assert!(matches!(verify_theorem5(&g, &w, c(0.0, 1.0), 13, THEOREM5_TOL), Err(Error::Budget(_))));
    }

    #[test]
    fn trace_identity_low_k() {
        let (g, w) = k3();
        for k in 1..=5 {
            let r = trace_identity_check(&g, &w, c(0.2, 0.1), k, TRACE_TOL).unwrap();
            assert!(r.pass, "k = {k}: {r:#?}");
        }
        let r = trace_identity_check(&g, &w, c(0.2, 0.1), 1, TRACE_TOL).unwrap();
        assert_eq!(r.records[0].lhs.unwrap().norm(), 0.0);
    }

    #[test]
    fn prime_powers_rebuild_cycle_sums() {
        let g = Graph::with_vertex_count(3, vec![(0, 1), (1, 2), (1, 2), (2, 0)]).unwrap();
        let w = EdgeWeightSystem::new(&g, vec![0.5, 1.0, 1.5, 0.7], vec![0.1, 0.2, -0.3, 0.4], vec![0.0, 1.0, -1.0]).unwrap();
        let lambda = c(0.3, 0.3);
        let classes = weighted_prime_classes(&g, &w, lambda, 6).unwrap();
        let u = bond_scattering_matrix(&g, &w, lambda).unwrap();
        for k in 1..=6 {
            let raw: Complex64 = g.enumerate_cycles(k).iter().map(|cy| weight_in(&u, cy.arcs())).sum();
            assert!(relative_error(raw, cycle_sum_from_primes(&classes, k)) < 1e-12);
        }
    }

    #[test]
    fn streamed_product_matches_collected_classes() {
        let g = Graph::with_vertex_count(3, vec![(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        let w = EdgeWeightSystem::new(&g, vec![0.5, 1.5, 1.0, 0.7], vec![0.1, -0.9, 0.4, 1.2], vec![0.2, -0.3, 0.0]).unwrap();
        let lambda = c(0.4, 0.6);
        let classes = weighted_prime_classes(&g, &w, lambda, 7).unwrap();
        let collected = euler_product(&classes, 7);
        let streamed = truncated_euler_product(&g, &w, lambda, 7).unwrap();
        assert!(collected.max_abs_diff(&streamed) < 1e-12);
    }
}
