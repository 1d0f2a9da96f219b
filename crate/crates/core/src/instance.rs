//! JSON instance files.
//!
//! ```json
//! {
//!   "vertices": ["1", "2", "3"],
//!   "edges": [{"u": "1", "v": "2", "h": 1.0, "gamma": 0.0, "name": "e1"}, ...],
//!   "diag": {"1": 0.0},
//!   "group": {"cyclic": 3},
//!   "voltages": {"e1": "1"},
//!   "reps": [{"name": "sign", "degree": 1, "matrices": [[[[1, 0]]], [[[-1, 0]]]]}]
//! }
//! ```
//!
//! `gamma` belongs to the arc `u → v`. Vertices missing from `diag` get 0 and
//! edges without a name are called `e1`, `e2`, …. A group is either
//! `{"cyclic": n}`, whose elements are named `"0"` … `"n-1"` by exponent of
//! the generator, or `{"elements": [...], "table": [[...]]}` with element 0
//! the identity. Edges missing from `voltages` carry the identity. `reps`
//! lists one `degree × degree` matrix per group element, entries as `[re, im]`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::covering::{cyclic_group, FiniteGroup, IrrepSet, UnitaryRep, VoltageAssignment};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hermitian::EdgeWeightSystem;
use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub u: String,
    pub v: String,
    pub h: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Cyclic { cyclic: usize },
    Table { elements: Vec<String>, table: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    pub name: String,
    pub degree: usize,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

/// The file as written on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub diag: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub voltages: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reps: Vec<RepSpec>,
}

/// Group, voltages and representations attached to an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Covering {
    pub group: FiniteGroup,
    pub alpha: VoltageAssignment,
    /// Representations listed in the file, in file order.
    pub reps: Vec<UnitaryRep>,
    cyclic: bool,
}

/// A validated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: Graph,
    pub weights: EdgeWeightSystem,
    pub edge_names: Vec<String>,
    pub covering: Option<Covering>,
}

impl Covering {
    /// The listed representations as a complete irreducible set; a cyclic
    /// group without listed representations uses its characters.
    pub fn irreps(&self) -> Result<IrrepSet> {
        if self.reps.is_empty() && self.cyclic {
            return Ok(cyclic_group(self.group.order())?.1);
        }
        IrrepSet::new(&self.group, self.reps.clone())
    }

    /// A representation by name, searching the listed ones and then the
    /// characters of a cyclic group (`chi0`, `chi1`, …).
    pub fn rep(&self, name: &str) -> Result<UnitaryRep> {
        if let Some(r) = self.reps.iter().find(|r| r.name() == name) {
            return Ok(r.clone());
        }
        if self.cyclic {
            if let Some(r) = cyclic_group(self.group.order())?.1.get(name) {
                return Ok(r.clone());
            }
        }
        Err(Error::Instance(format!("no representation named {name:?}")))
    }
}

impl Instance {
    pub fn parse(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Instance(e.to_string()))?;
        file.validate()
    }

    pub fn from_parts(graph: Graph, weights: EdgeWeightSystem) -> Self {
        let edge_names = (1..=graph.edge_count()).map(|j| format!("e{j}")).collect();
        Self {
            graph,
            weights,
            edge_names,
            covering: None,
        }
    }

    pub fn to_file(&self) -> InstanceFile {
        let names = self.graph.vertex_names();
        let edges = self
            .graph
            .edges()
            .iter()
            .enumerate()
            .map(|(j, &(u, v))| EdgeSpec {
                u: names[u].clone(),
                v: names[v].clone(),
                h: self.weights.edge_h()[j],
                gamma: self.weights.edge_gamma()[j],
                name: Some(self.edge_names[j].clone()),
            })
            .collect();
        let diag = names.iter().cloned().zip(self.weights.diag().iter().copied()).collect();
        let (group, voltages, reps) = match &self.covering {
            None => (None, BTreeMap::new(), Vec::new()),
            Some(c) => {
                let group = if c.cyclic {
                    GroupSpec::Cyclic { cyclic: c.group.order() }
                } else {
                    GroupSpec::Table {
                        elements: c.group.names().to_vec(),
                        table: c.group.table().to_vec(),
                    }
                };
                let voltages = self
                    .edge_names
                    .iter()
                    .zip(c.alpha.per_edge())
                    .map(|(e, &g)| (e.clone(), c.group.names()[g].clone()))
                    .collect();
                let reps = c
                    .reps
                    .iter()
                    .map(|r| RepSpec {
                        name: r.name().to_string(),
                        degree: r.degree(),
                        matrices: r
                            .matrices()
                            .iter()
                            .map(|m| m.to_rows().into_iter().map(|row| row.into_iter().map(|z| [z.re, z.im]).collect()).collect())
                            .collect(),
                    })
                    .collect();
                (Some(group), voltages, reps)
            }
        };
        InstanceFile {
            vertices: names.to_vec(),
            edges,
            diag,
            group,
            voltages,
            reps,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serializes")
    }

    pub fn covering(&self) -> Result<&Covering> {
        self.covering
            .as_ref()
            .ok_or_else(|| Error::Instance("this command needs \"group\" and \"voltages\"".into()))
    }
}

impl InstanceFile {
    pub fn validate(&self) -> Result<Instance> {
        let bad = |field: String, msg: String| Error::Instance(format!("{field}: {msg}"));
        let vertex = |field: String, name: &str| {
            self.vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| bad(field, format!("unknown vertex {name:?}")))
        };
        let mut pairs = Vec::with_capacity(self.edges.len());
        let mut edge_names = Vec::with_capacity(self.edges.len());
        for (j, e) in self.edges.iter().enumerate() {
            let u = vertex(format!("edges[{j}].u"), &e.u)?;
            let v = vertex(format!("edges[{j}].v"), &e.v)?;
            if u == v {
                return Err(bad(format!("edges[{j}]"), format!("loop at {:?}", e.u)));
            }
            let name = e.name.clone().unwrap_or_else(|| format!("e{}", j + 1));
            if edge_names.contains(&name) {
                return Err(bad(format!("edges[{j}].name"), format!("duplicate edge name {name:?}")));
            }
            pairs.push((u, v));
            edge_names.push(name);
        }
        let graph = Graph::new(self.vertices.clone(), pairs).map_err(|e| bad("vertices/edges".into(), e.to_string()))?;
        let mut diag = vec![0.0; graph.vertex_count()];
        for (name, &val) in &self.diag {
            diag[vertex(format!("diag.{name}"), name)?] = val;
        }
        for (j, e) in self.edges.iter().enumerate() {
            if !(e.h.is_finite() && e.h > 0.0) {
                return Err(bad(format!("edges[{j}].h"), format!("must be positive and finite, got {}", e.h)));
            }
            if !(e.gamma.is_finite() && e.gamma.abs() <= std::f64::consts::FRAC_PI_2) {
                return Err(bad(format!("edges[{j}].gamma"), format!("must lie in [-pi/2, pi/2], got {}", e.gamma)));
            }
        }
        let weights = EdgeWeightSystem::new(
            &graph,
            self.edges.iter().map(|e| e.h).collect(),
            self.edges.iter().map(|e| e.gamma).collect(),
            diag,
        )
        .map_err(|e| bad("diag".into(), e.to_string()))?;

        let covering = match &self.group {
            None => {
                if !self.voltages.is_empty() || !self.reps.is_empty() {
                    return Err(bad("group".into(), "voltages or reps given without a group".into()));
                }
                None
            }
            Some(spec) => Some(self.validate_covering(spec, &graph, &edge_names)?),
        };
        Ok(Instance {
            graph,
            weights,
            edge_names,
            covering,
        })
    }

    fn validate_covering(&self, spec: &GroupSpec, graph: &Graph, edge_names: &[String]) -> Result<Covering> {
        let bad = |field: String, msg: String| Error::Instance(format!("{field}: {msg}"));
        let (group, cyclic) = match spec {
            GroupSpec::Cyclic { cyclic } => (FiniteGroup::cyclic(*cyclic), true),
            GroupSpec::Table { elements, table } => (FiniteGroup::new(elements.clone(), table.clone()), false),
        };
        let group = group.map_err(|e| bad("group".into(), e.to_string()))?;
        let mut per_edge = vec![0; graph.edge_count()];
        for (edge, element) in &self.voltages {
            let j = edge_names
                .iter()
                .position(|n| n == edge)
                .ok_or_else(|| bad(format!("voltages.{edge}"), "unknown edge".into()))?;
            per_edge[j] = group
                .index_of(element)
                .ok_or_else(|| bad(format!("voltages.{edge}"), format!("unknown group element {element:?}")))?;
        }
        let alpha = VoltageAssignment::new(graph, &group, &per_edge)?;
        let mut reps = Vec::with_capacity(self.reps.len());
        for (i, r) in self.reps.iter().enumerate() {
            let field = format!("reps[{i}]");
            if r.matrices.len() != group.order() {
                return Err(bad(field, format!("{} matrices for a group of order {}", r.matrices.len(), group.order())));
            }
            let mut matrices = Vec::with_capacity(r.matrices.len());
            for (g, m) in r.matrices.iter().enumerate() {
                if m.len() != r.degree || m.iter().any(|row| row.len() != r.degree) {
                    return Err(bad(format!("{field}.matrices[{g}]"), format!("expected {0}x{0}", r.degree)));
                }
                let rows = m.iter().map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
                matrices.push(ComplexMatrix::from_rows(rows).map_err(|e| bad(format!("{field}.matrices[{g}]"), e.to_string()))?);
            }
            if reps.iter().any(|x: &UnitaryRep| x.name() == r.name) {
                return Err(bad(field, format!("duplicate representation name {:?}", r.name)));
            }
            reps.push(UnitaryRep::new(r.name.clone(), &group, matrices).map_err(|e| bad(field, e.to_string()))?);
        }
        Ok(Covering { group, alpha, reps, cyclic })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K3_Z3: &str = r#"{
        "vertices": ["1", "2", "3"],
        "edges": [
            {"u": "1", "v": "2", "h": 1.0, "gamma": 0.2},
            {"u": "2", "v": "3", "h": 1.0, "gamma": 0.2},
            {"u": "3", "v": "1", "h": 1.0, "gamma": -0.2}
        ],
        "diag": {"1": 0.5, "2": 0.5, "3": 0.5},
        "group": {"cyclic": 3},
        "voltages": {"e1": "1"}
    }"#;

    #[test]
    fn parses_covering_instance() {
        let inst = Instance::parse(K3_Z3).unwrap();
        assert_eq!(inst.edge_names, ["e1", "e2", "e3"]);
        let cov = inst.covering().unwrap();
        assert_eq!(cov.alpha.per_edge(), [1, 0, 0]);
        assert_eq!(cov.irreps().unwrap().reps().len(), 3);
        assert_eq!(cov.rep("chi2").unwrap().name(), "chi2");
        assert!(cov.rep("nope").is_err());
    }

    #[test]
    fn round_trip_is_identical() {
        let inst = Instance::parse(K3_Z3).unwrap();
        let again = Instance::parse(&inst.to_json()).unwrap();
        assert_eq!(inst, again);
        assert_eq!(inst.to_file(), again.to_file());
    }

    #[test]
    fn diagnostics_name_the_field() {
        let msg = |s: &str| Instance::parse(s).unwrap_err().to_string();
        let base = r#"{"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "h": H, "gamma": G}]}"#;
        assert!(msg(&base.replace('H', "-1").replace('G', "0")).contains("edges[0].h"));
        assert!(msg(&base.replace('H', "1").replace('G', "3")).contains("edges[0].gamma"));
        assert!(msg(r#"{"vertices": ["a"], "edges": [{"u": "a", "v": "z", "h": 1}]}"#).contains("edges[0].v"));
        assert!(msg(r#"{"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "h": 1}], "diag": {"q": 1}}"#).contains("diag.q"));
        // syntax errors carry a line number
        assert!(msg("{\n\"vertices\": [,\n}").contains("line 2"));
        let with_group = K3_Z3.replace("\"e1\": \"1\"", "\"e9\": \"1\"");
        assert!(msg(&with_group).contains("voltages.e9"));
        let with_group = K3_Z3.replace("\"e1\": \"1\"", "\"e1\": \"7\"");
        assert!(msg(&with_group).contains("unknown group element"));
    }

    #[test]
    fn table_group_and_reps() {
        let text = r#"{
            "vertices": ["1", "2"],
            "edges": [{"u": "1", "v": "2", "h": 2.0}],
            "group": {"elements": ["e", "s"], "table": [[0, 1], [1, 0]]},
            "voltages": {"e1": "s"},
            "reps": [
                {"name": "triv", "degree": 1, "matrices": [[[[1, 0]]], [[[1, 0]]]]},
                {"name": "sign", "degree": 1, "matrices": [[[[1, 0]]], [[[-1, 0]]]]}
            ]
        }"#;
        let inst = Instance::parse(text).unwrap();
        let cov = inst.covering().unwrap();
        assert_eq!(cov.irreps().unwrap().reps().len(), 2);
        assert_eq!(Instance::parse(&inst.to_json()).unwrap(), inst);
        let broken = text.replace("[[[-1, 0]]]]}", "[[[0, 1]]]]}");
        assert!(Instance::parse(&broken).unwrap_err().to_string().contains("reps[1]"));
    }
}
