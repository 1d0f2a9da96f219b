//! Finite groups, ordinary voltage assignments and derived (regular)
//! coverings, with the factorization of the covering's secular determinant
//! over irreducible representations.
//!
//! In the derived graph `G^α` the arc `e_g` runs from `(o(e), g)` to
//! `(t(e), g·α(e))`. Vertices are ordered in blocks by group element,
//! `(v_1, g_1) … (v_n, g_1); (v_1, g_2) …`. The derived graph's own edge
//! list is `(e_j)_g` at index `g·m + j`, so its canonical arc order differs
//! from the block order `(e_1, g) … (e_2m, g)` used for the Kronecker
//! decomposition; [`DerivedGraph::block_order`] maps between them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hermitian::{assemble_h, check_compatible, EdgeWeightSystem, VertexGammas};
use crate::linalg::{hermitian_eigenvalues, kron, lu_det, ComplexMatrix};
use crate::report::{ErrorMetric, IdentityReport};
use crate::scattering::{bond_scattering_matrix, BondMatrix};

/// Tolerance for the covering factorizations (relative).
pub const THEOREM6_TOL: f64 = 1e-8;
const REP_TOL: f64 = 1e-10;
const CHARACTER_TOL: f64 = 1e-9;
/// Groups up to this order get a full associativity check.
const FULL_ASSOCIATIVITY: usize = 24;

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// `table[i][j]` is the index of `g_i g_j`.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let p = names.len();
        if p == 0 {
            return Err(Error::Group("no elements".into()));
        }
        if table.len() != p || table.iter().any(|r| r.len() != p) {
            return Err(Error::Group(format!("table must be {p}x{p}")));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::Group(format!("duplicate element name {name:?}")));
            }
        }
        for i in 0..p {
            if table[0][i] != i || table[i][0] != i {
                return Err(Error::Group("element 0 is not a two-sided identity".into()));
            }
            let mut row = vec![false; p];
            let mut col = vec![false; p];
            for j in 0..p {
                for (seen, k) in [(&mut row, table[i][j]), (&mut col, table[j][i])] {
                    if k >= p || seen[k] {
                        return Err(Error::Group(format!("table is not a Latin square at row/column {i}")));
                    }
                    seen[k] = true;
                }
            }
        }
        let associative = |a: usize, b: usize, c: usize| table[table[a][b]][c] == table[a][table[b][c]];
        if p <= FULL_ASSOCIATIVITY {
            for a in 0..p {
                for b in 0..p {
                    for c in 0..p {
                        if !associative(a, b, c) {
                            return Err(Error::Group(format!("not associative at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        } else {
            // Deterministic sample of triples.
            let mut s: u64 = 0x9E37_79B9_7F4A_7C15;
            for _ in 0..4096 {
                let mut next = || {
                    s ^= s << 13;
                    s ^= s >> 7;
                    s ^= s << 17;
                    (s % p as u64) as usize
                };
                let (a, b, c) = (next(), next(), next());
                if !associative(a, b, c) {
                    return Err(Error::Group(format!("not associative at ({a}, {b}, {c})")));
                }
            }
        }
        let inverse = (0..p).map(|i| (0..p).find(|&j| table[i][j] == 0).expect("Latin square")).collect();
        Ok(Self { names, table, inverse })
    }

    /// `Z_n` with elements named by the exponent of the generator: `"0"`, …, `"n-1"`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Group("cyclic group of order 0".into()));
        }
        let names = (0..n).map(|k| k.to_string()).collect();
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::new(names, table)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    fn check_element(&self, g: usize) -> Result<()> {
        if g < self.order() {
            Ok(())
        } else {
            Err(Error::Group(format!("unknown element {g} in a group of order {}", self.order())))
        }
    }
}

/// `Z_n` with its `n` characters `χ_i(τ^j) = ω^{ij}`, `ω = e^{2πi/n}`.
pub fn cyclic_group(n: usize) -> Result<(FiniteGroup, IrrepSet)> {
    let group = FiniteGroup::cyclic(n)?;
    let reps = (0..n)
        .map(|i| {
            let matrices = (0..n)
                .map(|j| {
                    let angle = 2.0 * std::f64::consts::PI * ((i * j) % n) as f64 / n as f64;
                    ComplexMatrix::from_diagonal(&[Complex64::from_polar(1.0, angle)])
                })
                .collect();
            UnitaryRep::new(format!("chi{i}"), &group, matrices)
        })
        .collect::<Result<Vec<_>>>()?;
    let irreps = IrrepSet::new(&group, reps)?;
    Ok((group, irreps))
}

/// A unitary representation: one `d × d` matrix per group element, in element order.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryRep {
    name: String,
    matrices: Vec<ComplexMatrix>,
}

impl UnitaryRep {
    pub fn new(name: impl Into<String>, group: &FiniteGroup, matrices: Vec<ComplexMatrix>) -> Result<Self> {
        let name = name.into();
        let bad = |msg: String| Error::Representation(format!("{name}: {msg}"));
        if matrices.len() != group.order() {
            return Err(bad(format!("{} matrices for a group of order {}", matrices.len(), group.order())));
        }
        let d = matrices[0].rows();
        if matrices.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(bad("matrices must share one square shape".into()));
        }
        if matrices[0].max_abs_diff(&ComplexMatrix::identity(d)) > REP_TOL {
            return Err(bad("the identity is not represented by I".into()));
        }
        for (g, m) in matrices.iter().enumerate() {
            if m.unitarity_defect() > REP_TOL {
                return Err(bad(format!("matrix of element {g} is not unitary")));
            }
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                let prod = &matrices[a] * &matrices[b];
                if prod.max_abs_diff(&matrices[group.mul(a, b)]) > REP_TOL {
                    return Err(bad(format!("rho({a}) rho({b}) != rho({a}{b})")));
                }
            }
        }
        Ok(Self { name, matrices })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Self {
            name: "trivial".into(),
            matrices: vec![ComplexMatrix::identity(1); group.order()],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn matrix(&self, g: usize) -> &ComplexMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[ComplexMatrix] {
        &self.matrices
    }

    pub fn character(&self, g: usize) -> Complex64 {
        self.matrices[g].trace()
    }

    pub fn is_trivial(&self) -> bool {
        self.degree() == 1 && self.matrices.iter().all(|m| (m[(0, 0)] - Complex64::new(1.0, 0.0)).norm() <= REP_TOL)
    }
}

/// A complete set of inequivalent irreducible unitary representations.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepSet {
    reps: Vec<UnitaryRep>,
}

impl IrrepSet {
    /// Checks `Σ f_i² = |Γ|` and orthonormality of the characters.
    pub fn new(group: &FiniteGroup, reps: Vec<UnitaryRep>) -> Result<Self> {
        let p = group.order();
        let total: usize = reps.iter().map(|r| r.degree().pow(2)).sum();
        if total != p {
            return Err(Error::Representation(format!("sum of squared degrees is {total}, group order is {p}")));
        }
        for (i, a) in reps.iter().enumerate() {
            if a.matrices.len() != p {
                return Err(Error::Representation(format!("{} does not belong to this group", a.name)));
            }
            for (j, b) in reps.iter().enumerate() {
                let inner: Complex64 = (0..p).map(|g| a.character(g) * b.character(g).conj()).sum::<Complex64>() / p as f64;
                let want = if i == j { 1.0 } else { 0.0 };
                if (inner - want).norm() > CHARACTER_TOL {
                    return Err(Error::Representation(format!(
                        "characters of {} and {} have inner product {inner}",
                        a.name, b.name
                    )));
                }
            }
        }
        if !reps.iter().any(UnitaryRep::is_trivial) {
            return Err(Error::Representation("the trivial representation is missing".into()));
        }
        Ok(Self { reps })
    }

    pub fn reps(&self) -> &[UnitaryRep] {
        &self.reps
    }

    pub fn get(&self, name: &str) -> Option<&UnitaryRep> {
        self.reps.iter().find(|r| r.name == name)
    }
}

/// `α: D(G) → Γ` with `α(e⁻¹) = α(e)⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoltageAssignment {
    per_arc: Vec<usize>,
}

impl VoltageAssignment {
    /// From one element per edge (for the arc in the edge's orientation).
    pub fn new(graph: &Graph, group: &FiniteGroup, per_edge: &[usize]) -> Result<Self> {
        if per_edge.len() != graph.edge_count() {
            return Err(Error::Voltage(format!("expected {} voltages, got {}", graph.edge_count(), per_edge.len())));
        }
        for &g in per_edge {
            group.check_element(g).map_err(|e| Error::Voltage(e.to_string()))?;
        }
        let per_arc = per_edge.iter().copied().chain(per_edge.iter().map(|&g| group.inv(g))).collect();
        Ok(Self { per_arc })
    }

    /// From one element per arc; rejects `α(e⁻¹) ≠ α(e)⁻¹`.
    pub fn from_arcs(graph: &Graph, group: &FiniteGroup, per_arc: &[usize]) -> Result<Self> {
        if per_arc.len() != graph.arc_count() {
            return Err(Error::Voltage(format!("expected {} arc voltages", graph.arc_count())));
        }
        for (a, &g) in per_arc.iter().enumerate() {
            group.check_element(g).map_err(|e| Error::Voltage(e.to_string()))?;
            if per_arc[graph.inverse(a)] != group.inv(g) {
                return Err(Error::Voltage(format!("arc {a}: voltage of the inverse arc is not the inverse")));
            }
        }
        Ok(Self { per_arc: per_arc.to_vec() })
    }

    /// The trivial assignment `α ≡ 1`.
    pub fn trivial(graph: &Graph) -> Self {
        Self {
            per_arc: vec![0; graph.arc_count()],
        }
    }

    pub fn get(&self, arc: usize) -> usize {
        self.per_arc[arc]
    }

    pub fn per_edge(&self) -> &[usize] {
        &self.per_arc[..self.per_arc.len() / 2]
    }

    fn check(&self, graph: &Graph, group: &FiniteGroup) -> Result<()> {
        if self.per_arc.len() != graph.arc_count() || self.per_arc.iter().any(|&g| g >= group.order()) {
            return Err(Error::Voltage("assignment does not fit this graph and group".into()));
        }
        Ok(())
    }
}

/// The derived graph `G^α` with its labelling by the base graph.
#[derive(Debug, Clone)]
pub struct DerivedGraph {
    pub graph: Graph,
    /// `(v, g)` per derived vertex.
    pub vertex_labels: Vec<(usize, usize)>,
    /// `(e, g)` per derived arc, `e` a base arc.
    pub arc_labels: Vec<(usize, usize)>,
    base_arcs: usize,
}

impl DerivedGraph {
    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    /// Position of each derived arc in the block order `(e_1, g_1) … (e_2m, g_1); (e_1, g_2) …`.
    pub fn block_order(&self) -> Vec<usize> {
        self.arc_labels.iter().map(|&(e, g)| g * self.base_arcs + e).collect()
    }

    /// Edge data of `G^α`: every lifted edge keeps its base `(h, γ)`, every
    /// lifted vertex its base diagonal value.
    pub fn lift_weights(&self, base: &EdgeWeightSystem) -> Result<EdgeWeightSystem> {
        let m = base.edge_h().len();
        let edges = self.graph.edge_count();
        let h = (0..edges).map(|k| base.edge_h()[k % m]).collect();
        let gamma = (0..edges).map(|k| base.edge_gamma()[k % m]).collect();
        let diag = self.vertex_labels.iter().map(|&(v, _)| base.diag()[v]).collect();
        EdgeWeightSystem::new(&self.graph, h, gamma, diag)
    }

    /// Rewrites a derived-graph arc matrix (canonical order) in block order.
    pub fn to_block_order(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let pos = self.block_order();
        let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
        for (a, &pa) in pos.iter().enumerate() {
            for (b, &pb) in pos.iter().enumerate() {
                out[(pa, pb)] = m[(a, b)];
            }
        }
        out
    }
}

/// Builds `G^α`. Connectivity is recorded, not required.
pub fn derived_graph(graph: &Graph, group: &FiniteGroup, alpha: &VoltageAssignment) -> Result<DerivedGraph> {
    alpha.check(graph, group)?;
    let (n, m, p) = (graph.vertex_count(), graph.edge_count(), group.order());
    let names: Vec<String> = (0..p)
        .flat_map(|g| graph.vertex_names().iter().map(move |v| format!("{v}@{}", group.names()[g])))
        .collect();
    let vertex_labels = (0..p).flat_map(|g| (0..n).map(move |v| (v, g))).collect();
    let mut edges = Vec::with_capacity(m * p);
    for g in 0..p {
        for (j, &(u, v)) in graph.edges().iter().enumerate() {
            edges.push((g * n + u, group.mul(g, alpha.get(j)) * n + v));
        }
    }
    let mut arc_labels: Vec<(usize, usize)> = (0..p).flat_map(|g| (0..m).map(move |j| (j, g))).collect();
    for g in 0..p {
        for j in 0..m {
            // (e_j)_g⁻¹ = (e_j⁻¹)_{g α(e_j)}
            arc_labels.push((j + m, group.mul(g, alpha.get(j))));
        }
    }
    Ok(DerivedGraph {
        graph: Graph::build(names, edges)?,
        vertex_labels,
        arc_labels,
        base_arcs: 2 * m,
    })
}

/// `H̃ = H(G^α)` with `H̃_{(u,g),(v,gα(u,v))} = h_uv e^{2iγ_uv}` and the diagonal copied per fiber.
pub fn lift_hermitian(graph: &Graph, w: &EdgeWeightSystem, group: &FiniteGroup, alpha: &VoltageAssignment) -> Result<ComplexMatrix> {
    check_compatible(graph, w)?;
    alpha.check(graph, group)?;
    let (n, p) = (graph.vertex_count(), group.order());
    let mut h = ComplexMatrix::zeros(n * p, n * p);
    for g in 0..p {
        for u in 0..n {
            h[(g * n + u, g * n + u)] = Complex64::new(w.diag()[u], 0.0);
        }
        for arc in 0..graph.arc_count() {
            let k = group.mul(g, alpha.get(arc));
            h[(g * n + graph.origin(arc), k * n + graph.terminus(arc))] += w.arc_entry(arc);
        }
    }
    Ok(h)
}

/// `H_g`: the off-diagonal entries of `H` carried by arcs with voltage `g`.
pub fn h_g_matrix(graph: &Graph, w: &EdgeWeightSystem, group: &FiniteGroup, alpha: &VoltageAssignment, g: usize) -> Result<ComplexMatrix> {
    check_compatible(graph, w)?;
    alpha.check(graph, group)?;
    group.check_element(g)?;
    let n = graph.vertex_count();
    let mut h = ComplexMatrix::zeros(n, n);
    for arc in (0..graph.arc_count()).filter(|&a| alpha.get(a) == g) {
        h[(graph.origin(arc), graph.terminus(arc))] += w.arc_entry(arc);
    }
    Ok(h)
}

/// `U_g`: the rows of `U(λ)` whose arc has voltage `g`.
pub fn u_g_matrix(graph: &Graph, w: &EdgeWeightSystem, group: &FiniteGroup, alpha: &VoltageAssignment, lambda: Complex64, g: usize) -> Result<ComplexMatrix> {
    group.check_element(g)?;
    alpha.check(graph, group)?;
    let u = bond_scattering_matrix(graph, w, lambda)?;
    Ok(split_by_voltage(&u, alpha, group.order()).swap_remove(g))
}

/// `[U_{g_1}, …, U_{g_p}]` from a prebuilt `U(λ)`.
pub fn split_by_voltage(u: &BondMatrix, alpha: &VoltageAssignment, p: usize) -> Vec<ComplexMatrix> {
    let arcs = u.matrix.rows();
    let mut parts = vec![ComplexMatrix::zeros(arcs, arcs); p];
    for e in 0..arcs {
        let part = &mut parts[alpha.get(e)];
        for f in 0..arcs {
            part[(e, f)] = u.matrix[(e, f)];
        }
    }
    parts
}

/// `P_h` with `(P_h)_ij = 1` iff `g_i h = g_j`.
pub fn permutation_matrix(group: &FiniteGroup, h: usize) -> Result<ComplexMatrix> {
    group.check_element(h)?;
    let p = group.order();
    Ok(ComplexMatrix::from_fn(p, p, |i, j| {
        if group.mul(i, h) == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::default()
        }
    }))
}

/// `Σ_h ρ(h) ⊗ parts[h]`.
pub fn twisted_sum(rho: &UnitaryRep, parts: &[ComplexMatrix]) -> ComplexMatrix {
    let d = rho.degree();
    let (r, c) = (parts[0].rows(), parts[0].cols());
    let mut acc = ComplexMatrix::zeros(d * r, d * c);
    for (h, part) in parts.iter().enumerate() {
        acc = &acc + &kron(rho.matrix(h), part);
    }
    acc
}

/// Per-element pieces and scalars shared by the covering and L-function identities.
pub(crate) struct VoltageSplit {
    pub u: BondMatrix,
    pub u_parts: Vec<ComplexMatrix>,
    pub h_parts: Vec<ComplexMatrix>,
    pub diag: ComplexMatrix,
    pub pole_product: Complex64,
}

pub(crate) fn voltage_split(graph: &Graph, w: &EdgeWeightSystem, group: &FiniteGroup, alpha: &VoltageAssignment, lambda: Complex64) -> Result<VoltageSplit> {
    alpha.check(graph, group)?;
    let u = bond_scattering_matrix(graph, w, lambda)?;
    let u_parts = split_by_voltage(&u, alpha, group.order());
    let h_parts = (0..group.order()).map(|g| h_g_matrix(graph, w, group, alpha, g)).collect::<Result<Vec<_>>>()?;
    let diag: Vec<Complex64> = w.diag().iter().map(|&d| Complex64::new(d, 0.0)).collect();
    let pole_product = VertexGammas::new(graph, w).pole_factors(w.diag(), lambda)?.into_iter().product();
    Ok(VoltageSplit {
        u,
        u_parts,
        h_parts,
        diag: ComplexMatrix::from_diagonal(&diag),
        pole_product,
    })
}

impl VoltageSplit {
    /// `det(I − Σ_h ρ(h) ⊗ U_h)`.
    pub fn bond_factor(&self, rho: &UnitaryRep) -> Complex64 {
        let t = twisted_sum(rho, &self.u_parts);
        lu_det(&(&ComplexMatrix::identity(t.rows()) - &t)).expect("square")
    }

    /// `det(λI − Σ_h ρ(h) ⊗ H_h − I_d ⊗ diag(H))`.
    pub fn hermitian_factor(&self, rho: &UnitaryRep, lambda: Complex64) -> Complex64 {
        let t = &twisted_sum(rho, &self.h_parts) + &kron(&ComplexMatrix::identity(rho.degree()), &self.diag);
        lu_det(&(&ComplexMatrix::identity(t.rows()).scale(lambda) - &t)).expect("square")
    }
}

/// `ρ(h) ⊗ H_h` summed plus `I_d ⊗ diag(H)`: Hermitian whenever `ρ` is unitary.
pub fn twisted_hermitian(graph: &Graph, w: &EdgeWeightSystem, group: &FiniteGroup, alpha: &VoltageAssignment, rho: &UnitaryRep) -> Result<ComplexMatrix> {
    let h_parts = (0..group.order()).map(|g| h_g_matrix(graph, w, group, alpha, g)).collect::<Result<Vec<_>>>()?;
    let diag: Vec<Complex64> = w.diag().iter().map(|&d| Complex64::new(d, 0.0)).collect();
    Ok(&twisted_sum(rho, &h_parts) + &kron(&ComplexMatrix::identity(rho.degree()), &ComplexMatrix::from_diagonal(&diag)))
}

/// Eigenvalues of `H̃` and the union over irreps of the eigenvalues of the
/// twisted matrices, each repeated `deg ρ` times; both ascending.
pub fn spectrum_union(graph: &Graph, w: &EdgeWeightSystem, group: &FiniteGroup, alpha: &VoltageAssignment, irreps: &IrrepSet) -> Result<(Vec<f64>, Vec<f64>)> {
    let lifted = hermitian_eigenvalues(&lift_hermitian(graph, w, group, alpha)?)?;
    let mut union = Vec::new();
    for rho in irreps.reps() {
        let ev = hermitian_eigenvalues(&twisted_hermitian(graph, w, group, alpha, rho)?)?;
        for _ in 0..rho.degree() {
            union.extend_from_slice(&ev);
        }
    }
    union.sort_by(f64::total_cmp);
    Ok((lifted, union))
}

/// Checks the covering factorization at one `λ`:
///
/// * `det(I − Ũ)` on `G^α` against `det(I − U) ∏_{ρ≠1} det(I − Σ ρ(h)⊗U_h)^{deg ρ}`;
/// * the same against `2^{mp}(−1)^{np} / ∏_u (H_uu − λ − iΓ_u)^p · det(λI − H) ∏_{ρ≠1} det(λI − Σ ρ(h)⊗H_h − I⊗diag H)^{deg ρ}`;
/// * `Ũ = Σ_h P_h ⊗ U_h` and `H̃ = Σ_h P_h ⊗ H_h + I_p ⊗ diag(H)` entrywise.
pub fn verify_theorem6(
    graph: &Graph,
    w: &EdgeWeightSystem,
    group: &FiniteGroup,
    alpha: &VoltageAssignment,
    irreps: &IrrepSet,
    lambda: Complex64,
    tol: f64,
) -> Result<IdentityReport> {
    let derived = derived_graph(graph, group, alpha)?;
    if !derived.is_connected() {
        return Err(Error::DisconnectedCovering);
    }
    let split = voltage_split(graph, w, group, alpha, lambda)?;
    let lifted_w = derived.lift_weights(w)?;
    let lifted_u = bond_scattering_matrix(&derived.graph, &lifted_w, lambda)?;
    let direct = lifted_u.secular_det();

    let (n, m, p) = (graph.vertex_count(), graph.edge_count(), group.order());
    let mut bond_form = split.u.secular_det();
    let mut hermitian_form = lu_det(&(&ComplexMatrix::identity(n).scale(lambda) - &assemble_h(graph, w)?))?;
    for rho in irreps.reps().iter().filter(|r| !r.is_trivial()) {
        let f = rho.degree() as i32;
        bond_form *= split.bond_factor(rho).powi(f);
        hermitian_form *= split.hermitian_factor(rho, lambda).powi(f);
    }
    let sign = if (n * p) % 2 == 0 { 1.0 } else { -1.0 };
    hermitian_form *= sign * 2f64.powi((m * p) as i32) / split.pole_product.powi(p as i32);

    let mut report = IdentityReport::new("theorem6", ErrorMetric::Relative, tol);
    report.compare("det(I - U~) vs det(I - U) * prod det(I - sum rho(h) x U_h)^f", Some(lambda), direct, bond_form);
    report.compare("det(I - U~) vs determinant formula over irreps", Some(lambda), direct, hermitian_form);

    let perms = (0..p).map(|h| permutation_matrix(group, h)).collect::<Result<Vec<_>>>()?;
    let mut u_blocks = ComplexMatrix::zeros(2 * m * p, 2 * m * p);
    let mut h_blocks = kron(&ComplexMatrix::identity(p), &split.diag);
    for h in 0..p {
        u_blocks = &u_blocks + &kron(&perms[h], &split.u_parts[h]);
        h_blocks = &h_blocks + &kron(&perms[h], &split.h_parts[h]);
    }
    report.record_error(
        "U~ = sum P_h x U_h (block arc order)",
        Some(lambda),
        derived.to_block_order(&lifted_u.matrix).max_abs_diff(&u_blocks),
    );
    report.record_error(
        "H~ = sum P_h x H_h + I x diag(H)",
        None,
        lift_hermitian(graph, w, group, alpha)?.max_abs_diff(&h_blocks),
    );
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
        let w = EdgeWeightSystem::new(&g, vec![1.0; 3], vec![0.3, 0.3, -0.3], vec![0.5; 3]).unwrap();
        (g, w)
    }

    #[test]
    fn z3_characters() {
        let (group, irreps) = cyclic_group(3).unwrap();
        assert_eq!(group.order(), 3);
        let xi = c(-0.5, 3f64.sqrt() / 2.0);
        assert!((irreps.reps()[1].character(1) - xi).norm() < 1e-15);
        assert!((irreps.reps()[2].character(1) - xi * xi).norm() < 1e-15);
    }

    #[test]
    fn trivial_and_z4_groups() {
        let (group, irreps) = cyclic_group(1).unwrap();
        assert_eq!((group.order(), irreps.reps().len()), (1, 1));
        assert!(irreps.reps()[0].is_trivial());
        let (_, irreps) = cyclic_group(4).unwrap();
        assert_eq!(irreps.reps().len(), 4);
        for a in irreps.reps() {
            for b in irreps.reps() {
                let s: Complex64 = (0..4).map(|g| a.character(g) * b.character(g).conj()).sum::<Complex64>() / 4.0;
                let want = if a.name() == b.name() { 1.0 } else { 0.0 };
                assert!((s - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn group_validation() {
        let names = || vec!["e".to_string(), "a".to_string()];
        assert!(FiniteGroup::new(names(), vec![vec![0, 1], vec![1, 0]]).is_ok());
        assert!(FiniteGroup::new(names(), vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(FiniteGroup::new(names(), vec![vec![1, 0], vec![0, 1]]).is_err());
        // a Latin square with identity 0 that is not associative (order 5)
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let names5 = (0..5).map(|i| i.to_string()).collect();
        assert!(matches!(FiniteGroup::new(names5, t), Err(Error::Group(_))));
    }

    #[test]
    fn representation_validation() {
        let group = FiniteGroup::cyclic(2).unwrap();
        let bad = vec![ComplexMatrix::identity(1), ComplexMatrix::identity(1).scale(c(0.0, 1.0))];
        assert!(matches!(UnitaryRep::new("bad", &group, bad), Err(Error::Representation(_))));
        let trivial = UnitaryRep::trivial(&group);
        assert!(matches!(IrrepSet::new(&group, vec![trivial]), Err(Error::Representation(_))));
    }

    #[test]
    fn voltage_validation() {
        let (g, _) = k3();
        let group = FiniteGroup::cyclic(3).unwrap();
        let alpha = VoltageAssignment::new(&g, &group, &[1, 0, 0]).unwrap();
        assert_eq!(alpha.get(3), 2);
        assert!(VoltageAssignment::from_arcs(&g, &group, &[1, 0, 0, 1, 0, 0]).is_err());
        assert!(VoltageAssignment::new(&g, &group, &[5, 0, 0]).is_err());
    }

    #[test]
    fn k3_z3_cover_is_nine_cycle() {
        let (g, _) = k3();
        let group = FiniteGroup::cyclic(3).unwrap();
        let alpha = VoltageAssignment::new(&g, &group, &[1, 0, 0]).unwrap();
        let d = derived_graph(&g, &group, &alpha).unwrap();
        assert!(d.is_connected());
        assert_eq!((d.graph.vertex_count(), d.graph.edge_count()), (9, 9));
        assert!((0..9).all(|v| d.graph.degree(v) == 2));
    }

    #[test]
    fn trivial_group_cover_is_the_base() {
        let (g, w) = k3();
        let group = FiniteGroup::cyclic(1).unwrap();
        let alpha = VoltageAssignment::trivial(&g);
        let d = derived_graph(&g, &group, &alpha).unwrap();
        assert_eq!(d.graph.edges(), g.edges());
        assert_eq!(lift_hermitian(&g, &w, &group, &alpha).unwrap(), assemble_h(&g, &w).unwrap());
    }

    #[test]
    fn z2_cover_of_k3() {
        let (g, _) = k3();
        let group = FiniteGroup::cyclic(2).unwrap();
        let alpha = VoltageAssignment::new(&g, &group, &[1, 0, 0]).unwrap();
        let d = derived_graph(&g, &group, &alpha).unwrap();
        assert!(d.is_connected());
        assert_eq!(d.graph.vertex_count(), 6);
        for v in 0..3 {
            assert_eq!(d.vertex_labels.iter().filter(|l| l.0 == v).count(), 2);
        }
        // all voltages trivial: two disjoint triangles
        let flat = VoltageAssignment::trivial(&g);
        assert!(!derived_graph(&g, &group, &flat).unwrap().is_connected());
    }

    #[test]
    fn fibers_keep_degrees() {
        let g = Graph::with_vertex_count(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let group = FiniteGroup::cyclic(4).unwrap();
        let alpha = VoltageAssignment::new(&g, &group, &[1, 2, 0, 3, 1]).unwrap();
        let d = derived_graph(&g, &group, &alpha).unwrap();
        for (x, &(v, _)) in d.vertex_labels.iter().enumerate() {
            assert_eq!(d.graph.degree(x), g.degree(v));
        }
        for (a, &(e, h)) in d.arc_labels.iter().enumerate() {
            assert_eq!(d.vertex_labels[d.graph.origin(a)], (g.origin(e), h));
            assert_eq!(d.vertex_labels[d.graph.terminus(a)], (g.terminus(e), group.mul(h, alpha.get(e))));
        }
    }

    #[test]
    fn permutation_matrices_compose() {
        let group = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(permutation_matrix(&group, 0).unwrap(), ComplexMatrix::identity(3));
        let p1 = permutation_matrix(&group, 1).unwrap();
        assert_eq!(p1[(0, 1)], c(1.0, 0.0));
        assert_eq!(p1[(2, 0)], c(1.0, 0.0));
        let p2 = permutation_matrix(&group, 2).unwrap();
        assert_eq!(&p1 * &p2, ComplexMatrix::identity(3));
        assert_eq!(&p1 * &p1, p2);
    }

    #[test]
    fn voltage_pieces_partition_h_and_u() {
        let (g, w) = k3();
        let group = FiniteGroup::cyclic(3).unwrap();
        let alpha = VoltageAssignment::new(&g, &group, &[1, 0, 0]).unwrap();
        let h = assemble_h(&g, &w).unwrap();
        let mut sum = ComplexMatrix::from_diagonal(&h.diagonal());
        for k in 0..3 {
            sum = &sum + &h_g_matrix(&g, &w, &group, &alpha, k).unwrap();
        }
        assert!(sum.max_abs_diff(&h) < 1e-15);
        let h_tau = h_g_matrix(&g, &w, &group, &alpha, 1).unwrap();
        let nonzero: Vec<_> = (0..9).filter(|&k| h_tau.as_slice()[k].norm() > 0.0).collect();
        assert_eq!(nonzero, vec![1]);
        assert!((h_tau[(0, 1)] - Complex64::from_polar(1.0, 0.6)).norm() < 1e-15);

        let lambda = c(0.1, 0.3);
        let u = bond_scattering_matrix(&g, &w, lambda).unwrap();
        let mut total = ComplexMatrix::zeros(6, 6);
        for k in 0..3 {
            total = &total + &u_g_matrix(&g, &w, &group, &alpha, lambda, k).unwrap();
        }
        assert!(total.max_abs_diff(&u.matrix) < 1e-14);
        assert!(u_g_matrix(&g, &w, &group, &alpha, lambda, 7).is_err());
        let empty = FiniteGroup::cyclic(4).unwrap();
        let alpha4 = VoltageAssignment::new(&g, &empty, &[1, 0, 0]).unwrap();
        assert_eq!(h_g_matrix(&g, &w, &empty, &alpha4, 2).unwrap(), ComplexMatrix::zeros(3, 3));
    }

    #[test]
    fn theorem6_on_k3_z3() {
        let (g, w) = k3();
        let (group, irreps) = cyclic_group(3).unwrap();
        let alpha = VoltageAssignment::new(&g, &group, &[1, 0, 0]).unwrap();
        let r = verify_theorem6(&g, &w, &group, &alpha, &irreps, c(0.4, 0.7), THEOREM6_TOL).unwrap();
        assert!(r.pass, "{r:#?}");
    }

    #[test]
    fn theorem6_refuses_disconnected_cover() {
        let (g, w) = k3();
        let (group, irreps) = cyclic_group(2).unwrap();
        let alpha = VoltageAssignment::trivial(&g);
        assert_eq!(
            verify_theorem6(&g, &w, &group, &alpha, &irreps, c(0.0, 1.0), THEOREM6_TOL).unwrap_err(),
            Error::DisconnectedCovering
        );
    }

    #[test]
    fn lifted_spectrum_is_union_over_characters() {
        let (g, w) = k3();
        let (group, irreps) = cyclic_group(3).unwrap();
        let alpha = VoltageAssignment::new(&g, &group, &[1, 0, 0]).unwrap();
        let (lifted, union) = spectrum_union(&g, &w, &group, &alpha, &irreps).unwrap();
        assert_eq!(lifted.len(), 9);
        for (a, b) in lifted.iter().zip(&union) {
            assert!((a - b).abs() < 1e-8);
        }
    }
}
