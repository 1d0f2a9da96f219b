//! Finite connected multigraphs with an explicit arc set, and cycle
//! enumeration over the arc-incidence relation.
//!
//! Arcs are numbered canonically: arc `j < m` is edge `j` oriented as given
//! (`u_j → v_j`), arc `m + j` is its inverse.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Finite connected multigraph without loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    /// Arcs leaving each vertex, ascending arc index.
    outgoing: Vec<Vec<usize>>,
    /// Arcs entering each vertex, ascending arc index.
    incoming: Vec<Vec<usize>>,
    connected: bool,
}

impl Graph {
    /// Builds a graph from vertex names and edges given as vertex-index pairs.
    pub fn new(names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = Self::build(names, edges)?;
        if !g.connected {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Vertices named `"1"`, …, `"n"`.
    pub fn with_vertex_count(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()).collect(), edges)
    }

    /// Same validation as [`Graph::new`] except connectivity, which is only recorded.
    pub(crate) fn build(names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        if edges.is_empty() {
            return Err(Error::NoEdges);
        }
        for (j, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::UnknownVertex {
                        edge: j,
                        vertex: w.to_string(),
                    });
                }
            }
            if u == v {
                return Err(Error::LoopEdge { edge: j, vertex: u });
            }
        }
        let m = edges.len();
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for a in 0..2 * m {
            let (u, v) = if a < m { edges[a] } else { (edges[a - m].1, edges[a - m].0) };
            outgoing[u].push(a);
            incoming[v].push(a);
        }
        let mut g = Self {
            names,
            edges,
            outgoing,
            incoming,
            connected: false,
        };
        g.connected = g.component_count() == 1;
        Ok(g)
    }

    fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut components = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &a in &self.outgoing[u] {
                    let v = self.terminus(a);
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        components
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `o(a)`.
    pub fn origin(&self, arc: usize) -> usize {
        let m = self.edges.len();
        if arc < m {
            self.edges[arc].0
        } else {
            self.edges[arc - m].1
        }
    }

    /// `t(a)`.
    pub fn terminus(&self, arc: usize) -> usize {
        let m = self.edges.len();
        if arc < m {
            self.edges[arc].1
        } else {
            self.edges[arc - m].0
        }
    }

    /// `a⁻¹`.
    pub fn inverse(&self, arc: usize) -> usize {
        let m = self.edges.len();
        if arc < m {
            arc + m
        } else {
            arc - m
        }
    }

    /// Edge underlying an arc.
    pub fn edge_of(&self, arc: usize) -> usize {
        arc % self.edges.len()
    }

    /// Arcs `f` with `o(f) = u`, ascending.
    pub fn outgoing(&self, u: usize) -> &[usize] {
        &self.outgoing[u]
    }

    /// Arcs `e` with `t(e) = u`, ascending.
    pub fn incoming(&self, u: usize) -> &[usize] {
        &self.incoming[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.outgoing[u].len()
    }

    /// Checks that `arcs` is a closed walk: `t(b_i) = o(b_{i+1})` cyclically.
    pub fn is_cycle(&self, arcs: &[usize]) -> bool {
        !arcs.is_empty()
            && arcs.iter().all(|&a| a < self.arc_count())
            && (0..arcs.len()).all(|i| self.terminus(arcs[i]) == self.origin(arcs[(i + 1) % arcs.len()]))
    }

    /// All closed arc sequences of length exactly `k`; rotations are distinct cycles.
    pub fn enumerate_cycles(&self, k: usize) -> Vec<Cycle> {
        let mut out = Vec::new();
        if k == 0 {
            return out;
        }
        let mut path = Vec::with_capacity(k);
        for start in 0..self.arc_count() {
            path.push(start);
            self.extend_walks(&mut path, k, &mut |p| out.push(Cycle { arcs: p.to_vec() }));
            path.pop();
        }
        out
    }

    /// Depth-first extension of `path` to closed walks of length `k`.
    fn extend_walks(&self, path: &mut Vec<usize>, k: usize, emit: &mut impl FnMut(&[usize])) {
        let last = *path.last().expect("non-empty path");
        if path.len() == k {
            if self.terminus(last) == self.origin(path[0]) {
                emit(path);
            }
            return;
        }
        for &next in &self.outgoing[self.terminus(last)] {
            path.push(next);
            self.extend_walks(path, k, emit);
            path.pop();
        }
    }

    /// Equivalence classes of prime cycles of length `≤ max_len`, each with its
    /// rotation-minimal representative, ordered by length then representative.
    pub fn prime_cycle_classes(&self, max_len: usize) -> Vec<CycleClass> {
        let mut out = Vec::new();
        self.visit_prime_cycles(max_len, |p| {
            out.push(CycleClass {
                representative: Cycle { arcs: p.to_vec() },
            })
        });
        out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.representative.arcs.cmp(&y.representative.arcs)));
        out
    }

    /// Calls `f` once per prime class of length `≤ max_len` with its
    /// rotation-minimal representative, without collecting them.
    ///
    /// Those representatives are exactly the Lyndon words over the arc
    /// alphabet that are closed walks, so the walk is grown with the
    /// Fredricksen-Kessler-Maiorana rule: a prefix that is not a prefix of
    /// some Lyndon word is abandoned at once.
    pub fn visit_prime_cycles(&self, max_len: usize, mut f: impl FnMut(&[usize])) {
        let mut path = Vec::with_capacity(max_len);
        for start in 0..self.arc_count() {
            path.push(start);
            self.grow_lyndon(&mut path, 1, max_len, &mut f);
            path.pop();
        }
    }

    /// `path` is a prefix of a Lyndon word with period `period`.
    fn grow_lyndon(&self, path: &mut Vec<usize>, period: usize, max_len: usize, f: &mut impl FnMut(&[usize])) {
        let len = path.len();
        let last = path[len - 1];
        if period == len && self.terminus(last) == self.origin(path[0]) {
            f(path);
        }
        if len == max_len {
            return;
        }
        let echo = path[len - period];
        for &next in &self.outgoing[self.terminus(last)] {
            let period = match next.cmp(&echo) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => period,
                std::cmp::Ordering::Greater => len + 1,
            };
            path.push(next);
            self.grow_lyndon(path, period, max_len, f);
            path.pop();
        }
    }
}

/// Closed arc sequence `(b_1, …, b_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    arcs: Vec<usize>,
}

impl Cycle {
    /// Validates incidence against `graph`.
    pub fn new(graph: &Graph, arcs: Vec<usize>) -> Result<Self> {
        if !graph.is_cycle(&arcs) {
            return Err(Error::InvalidCycle(format!("{arcs:?} is not a closed walk")));
        }
        Ok(Self { arcs })
    }

    pub fn arcs(&self) -> &[usize] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Rotation starting at position `shift`.
    pub fn rotated(&self, shift: usize) -> Self {
        let k = self.arcs.len();
        Self {
            arcs: (0..k).map(|i| self.arcs[(i + shift) % k]).collect(),
        }
    }

    /// `C^l`.
    pub fn power(&self, l: usize) -> Self {
        Self { arcs: self.arcs.repeat(l) }
    }

    pub fn is_prime(&self) -> bool {
        minimal_period(&self.arcs) == self.arcs.len()
    }

    /// Lexicographically least rotation.
    pub fn canonical(&self) -> Self {
        (0..self.arcs.len())
            .map(|s| self.rotated(s))
            .min_by(|a, b| a.arcs.cmp(&b.arcs))
            .unwrap_or_else(|| self.clone())
    }
}

/// Equivalence class of a prime cycle under cyclic rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleClass {
    representative: Cycle,
}

impl CycleClass {
    pub fn representative(&self) -> &Cycle {
        &self.representative
    }

    pub fn len(&self) -> usize {
        self.representative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representative.is_empty()
    }
}

fn minimal_period(seq: &[usize]) -> usize {
    let k = seq.len();
    (1..=k).find(|&p| k.is_multiple_of(p) && (0..k).all(|i| seq[i] == seq[(i + p) % k])).unwrap_or(k)
}
