//! The AT-graph data model: required-crossing specifications, crossing
//! graphs and their small components, instance validation, verdicts, and the
//! independent certificate checker.

mod certificate;
mod io;

pub use certificate::{check_certificate, CertDart, CertificateError, PlanarizationCertificate};
pub use io::{
    certificate_from_json, certificate_to_json, instance_from_json, instance_to_json, IoError,
};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{EdgeIdx, Graph};

/// A graph plus the set of edge pairs required to cross.
#[derive(Debug, Clone)]
pub struct ATGraph {
    pub graph: Graph,
    crossings: BTreeSet<(EdgeIdx, EdgeIdx)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ATGraphError {
    #[error("crossing pair references unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("crossing pair must consist of two distinct edges")]
    PairNotDistinct,
    #[error("crossing pair listed twice")]
    DuplicatePair,
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

impl ATGraph {
    pub fn new<'a>(
        graph: Graph,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, ATGraphError> {
        let mut crossings = BTreeSet::new();
        for (a, b) in pairs {
            let ea = graph
                .edge(a)
                .ok_or_else(|| ATGraphError::UnknownEdge(a.to_string()))?;
            let eb = graph
                .edge(b)
                .ok_or_else(|| ATGraphError::UnknownEdge(b.to_string()))?;
            if ea == eb {
                return Err(ATGraphError::PairNotDistinct);
            }
            if !crossings.insert((ea.min(eb), ea.max(eb))) {
                return Err(ATGraphError::DuplicatePair);
            }
        }
        Ok(ATGraph { graph, crossings })
    }

    pub fn from_indexed_pairs(
        graph: Graph,
        pairs: impl IntoIterator<Item = (EdgeIdx, EdgeIdx)>,
    ) -> Result<Self, ATGraphError> {
        let mut crossings = BTreeSet::new();
        for (ea, eb) in pairs {
            if ea == eb {
                return Err(ATGraphError::PairNotDistinct);
            }
            if ea as usize >= graph.m() || eb as usize >= graph.m() {
                return Err(ATGraphError::UnknownEdge(format!("#{}", ea.max(eb))));
            }
            if !crossings.insert((ea.min(eb), ea.max(eb))) {
                return Err(ATGraphError::DuplicatePair);
            }
        }
        Ok(ATGraph { graph, crossings })
    }

    pub fn crossings(&self) -> &BTreeSet<(EdgeIdx, EdgeIdx)> {
        &self.crossings
    }

    pub fn crosses(&self, a: EdgeIdx, b: EdgeIdx) -> bool {
        self.crossings.contains(&(a.min(b), a.max(b)))
    }
}

/// The crossing graph: one node per edge of G, one link per required pair.
#[derive(Debug, Clone)]
pub struct CrossingGraph {
    pub nodes: usize,
    pub links: BTreeSet<(EdgeIdx, EdgeIdx)>,
}

pub fn build_crossing_graph(a: &ATGraph) -> CrossingGraph {
    CrossingGraph { nodes: a.graph.m(), links: a.crossings().clone() }
}

impl CrossingGraph {
    /// Connected components as sorted node lists (including isolated nodes).
    pub fn components(&self) -> Vec<Vec<EdgeIdx>> {
        let n = self.nodes;
        let mut adj: Vec<Vec<EdgeIdx>> = vec![Vec::new(); n];
        for &(a, b) in &self.links {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s as EdgeIdx];
            let mut comp = vec![s as EdgeIdx];
            while let Some(v) = stack.pop() {
                for &w in &adj[v as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }
}

/// Size of the largest crossing-graph component: 1 when there are edges but
/// no crossings, 0 when the graph has no edges at all.
pub fn lambda(a: &ATGraph) -> usize {
    if a.graph.m() == 0 {
        return 0;
    }
    build_crossing_graph(a)
        .components()
        .iter()
        .map(|c| c.len())
        .max()
        .unwrap_or(0)
}

/// Edge-end colors used by the alternation machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Red,
    Blue,
    Purple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    K2,
    P3,
    K3,
}

/// A nontrivial crossing-graph component, classified and colored.
#[derive(Debug, Clone)]
pub struct CrossingComponent {
    pub kind: ComponentKind,
    /// 2 or 3 edges, sorted by index.
    pub edges: Vec<EdgeIdx>,
    pub colors: BTreeMap<EdgeIdx, Color>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("crossing-graph component with {0} nodes exceeds the supported size 3")]
    ComponentTooLarge(usize),
}

/// Classifies every nontrivial component of the crossing graph (isolated
/// nodes omitted). Colors are deterministic: edges sorted by id string get
/// red, blue(, purple) in order, except that the middle edge of a P3 is
/// always the purple one.
pub fn classify_components(
    a: &ATGraph,
    c: &CrossingGraph,
) -> Result<Vec<CrossingComponent>, ClassifyError> {
    let mut out = Vec::new();
    for comp in c.components() {
        if comp.len() == 1 {
            continue;
        }
        if comp.len() > 3 {
            return Err(ClassifyError::ComponentTooLarge(comp.len()));
        }
        let by_id = |edges: &mut Vec<EdgeIdx>| {
            edges.sort_by(|&x, &y| a.graph.edge_id(x).cmp(a.graph.edge_id(y)));
        };
        let mut colors = BTreeMap::new();
        let kind;
        let mut edges = comp.clone();
        if comp.len() == 2 {
            kind = ComponentKind::K2;
            by_id(&mut edges);
            colors.insert(edges[0], Color::Red);
            colors.insert(edges[1], Color::Blue);
        } else {
            let link_count = comp
                .iter()
                .flat_map(|&x| comp.iter().map(move |&y| (x, y)))
                .filter(|&(x, y)| x < y && c.links.contains(&(x, y)))
                .count();
            if link_count == 3 {
                kind = ComponentKind::K3;
                by_id(&mut edges);
                colors.insert(edges[0], Color::Red);
                colors.insert(edges[1], Color::Blue);
                colors.insert(edges[2], Color::Purple);
            } else {
                kind = ComponentKind::P3;
                // the degree-2 node is purple
                let center = *comp
                    .iter()
                    .find(|&&x| {
                        comp.iter()
                            .filter(|&&y| y != x && c.links.contains(&(x.min(y), x.max(y))))
                            .count()
                            == 2
                    })
                    .expect("P3 has a degree-2 node");
                let mut ends: Vec<EdgeIdx> = comp.iter().copied().filter(|&x| x != center).collect();
                by_id(&mut ends);
                colors.insert(center, Color::Purple);
                colors.insert(ends[0], Color::Red);
                colors.insert(ends[1], Color::Blue);
                edges = vec![ends[0], ends[1], center];
                edges.sort();
            }
        }
        out.push(CrossingComponent { kind, edges, colors });
    }
    Ok(out)
}

/// Machine-readable reasons for a NO verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoReason {
    /// A required crossing pair shares an endpoint; simple realizations
    /// forbid crossings of adjacent edges.
    AdjacentCrossingPair,
    /// The graph obtained by contracting crossing components is nonplanar.
    ContractionNonplanar,
    /// A cut vertex distributes a constraint's edges so that no arrangement
    /// of the cut components can satisfy it.
    SplitConflict,
    /// A constraint became unsatisfiable during elimination.
    ConstraintConflict,
    /// The order-gadget expansion is nonplanar.
    ExpansionNonplanar,
    /// Paired orientation requirements cannot be met simultaneously.
    OrientationConflict,
    /// Exhaustive search found no realization (oracle).
    NoRealizationFound,
}

/// The answer of a decision procedure, with a witness on YES.
#[derive(Debug, Clone)]
pub enum Verdict {
    Yes(Box<PlanarizationCertificate>),
    No(NoReason),
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn witness(&self) -> Option<&PlanarizationCertificate> {
        match self {
            Verdict::Yes(w) => Some(w),
            Verdict::No(_) => None,
        }
    }

    pub fn reason(&self) -> Option<NoReason> {
        match self {
            Verdict::Yes(_) => None,
            Verdict::No(r) => Some(*r),
        }
    }
}

/// Rejects instances with a required crossing between adjacent edges.
pub fn validate(a: &ATGraph) -> Result<(), NoReason> {
    for &(x, y) in a.crossings() {
        if a.graph.edges_adjacent(x, y) {
            return Err(NoReason::AdjacentCrossingPair);
        }
    }
    Ok(())
}
