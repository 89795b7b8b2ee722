//! Id-keyed embeddings: rotation systems addressed by vertex and edge id
//! strings, which stay stable across subgraph extraction, block splitting
//! and reassembly.

use std::collections::BTreeMap;

use crate::embedding::{Dart, RotationSystem};
use crate::graph::Graph;

/// One edge end, by id: `end` 0 sits at the edge's `u` endpoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IdDart {
    pub edge: String,
    pub end: u8,
}

impl IdDart {
    pub fn new(edge: impl Into<String>, end: u8) -> Self {
        IdDart { edge: edge.into(), end }
    }

    pub fn twin(&self) -> IdDart {
        IdDart { edge: self.edge.clone(), end: 1 - self.end }
    }
}

/// A rotation system keyed by ids.
#[derive(Debug, Clone, Default)]
pub struct IdEmb {
    pub rot: BTreeMap<String, Vec<IdDart>>,
}

impl IdEmb {
    pub fn from_rotation_system(g: &Graph, rs: &RotationSystem) -> IdEmb {
        let mut rot = BTreeMap::new();
        for v in g.vertices() {
            let darts = rs.rotations[v as usize]
                .iter()
                .map(|d| IdDart::new(g.edge_id(d.edge), d.end))
                .collect();
            rot.insert(g.vertex_id(v).to_string(), darts);
        }
        IdEmb { rot }
    }

    /// Reverses every rotation (mirror image; genus preserved).
    pub fn mirror(&mut self) {
        for r in self.rot.values_mut() {
            r.reverse();
        }
    }

    /// Disjoint union of vertex sets.
    pub fn absorb(&mut self, other: IdEmb) {
        for (k, v) in other.rot {
            let prev = self.rot.insert(k, v);
            assert!(prev.is_none(), "absorb expects disjoint vertex sets");
        }
    }

    /// Back to an index-level rotation system over `g` (asserting the
    /// embedding covers exactly g's darts).
    pub fn to_rotation_system(&self, g: &Graph) -> RotationSystem {
        let mut rs = RotationSystem::empty(g.n());
        rs.edge_ends = g.edges().map(|e| g.ends(e)).collect();
        for v in g.vertices() {
            let rot = self
                .rot
                .get(g.vertex_id(v))
                .unwrap_or_else(|| panic!("missing rotation for {}", g.vertex_id(v)));
            rs.rotations[v as usize] = rot
                .iter()
                .map(|d| Dart::new(g.edge(&d.edge).expect("edge known"), d.end))
                .collect();
        }
        rs
    }

    /// Face cycles (next dart = rotation successor of the twin), for
    /// insertion-point searches during reassembly.
    pub fn faces(&self, ends: &BTreeMap<String, (String, String)>) -> Vec<Vec<IdDart>> {
        let vertex_of = |d: &IdDart| -> &str {
            let (u, v) = &ends[&d.edge];
            if d.end == 0 {
                u
            } else {
                v
            }
        };
        let mut pos: BTreeMap<IdDart, (String, usize)> = BTreeMap::new();
        for (vid, rot) in &self.rot {
            for (i, d) in rot.iter().enumerate() {
                pos.insert(d.clone(), (vid.clone(), i));
            }
        }
        let mut visited: std::collections::BTreeSet<IdDart> = Default::default();
        let mut faces = Vec::new();
        for rot in self.rot.values() {
            for start in rot {
                if visited.contains(start) {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = start.clone();
                loop {
                    face.push(d.clone());
                    visited.insert(d.clone());
                    let t = d.twin();
                    let (vid, i) = pos
                        .get(&t)
                        .unwrap_or_else(|| panic!("twin of {t:?} missing (vertex {})", vertex_of(&t)));
                    let r = &self.rot[vid];
                    d = r[(i + 1) % r.len()].clone();
                    if d == *start {
                        break;
                    }
                }
                faces.push(face);
            }
        }
        faces
    }
}
