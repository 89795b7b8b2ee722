//! Realization certificates and the independent checker.
//!
//! A certificate describes the planarization of a drawing: one dummy vertex
//! per required crossing, per-edge crossing sequences, and a rotation system
//! over the resulting graph. The checker validates it with nothing but
//! counting and Euler's formula, independently of how it was produced.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{Dart, RotationSystem};
use crate::graph::EdgeIdx;

use super::ATGraph;

/// One end of a planarization segment. Edge `e` with `r` crossings splits
/// into `r + 1` segments numbered from the `u` endpoint; `end` 0 is the
/// segment end closer to `u`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CertDart {
    pub edge: String,
    pub seg: u32,
    pub end: u8,
}

/// The realization witness emitted on YES verdicts.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PlanarizationCertificate {
    /// dummy id plus the crossing pair it represents
    pub dummies: Vec<(String, (String, String))>,
    /// edge id -> dummy ids in crossing order from the edge's `u` endpoint
    pub routes: BTreeMap<String, Vec<String>>,
    /// vertex or dummy id -> cyclic dart order
    pub rotations: BTreeMap<String, Vec<CertDart>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

impl PlanarizationCertificate {
    /// Rotates every cyclic order so its lexicographically smallest dart
    /// comes first. Serialization calls this for deterministic output.
    pub fn canonicalize(&mut self) {
        for rot in self.rotations.values_mut() {
            if rot.is_empty() {
                continue;
            }
            let min = rot.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)).unwrap().0;
            rot.rotate_left(min);
        }
    }
}

struct Planarization {
    rs: RotationSystem,
    /// per segment: (edge id, seg index)
    seg_names: Vec<(String, u32)>,
    /// planarization vertex index -> display id
    vertex_names: Vec<String>,
    dummy_start: usize,
}

/// Builds the planarization rotation system described by the certificate.
fn build_planarization(
    a: &ATGraph,
    w: &PlanarizationCertificate,
) -> Result<Planarization, CertificateError> {
    let g = &a.graph;
    let malformed = |msg: String| CertificateError::Malformed(msg);

    let mut dummy_index: HashMap<&str, usize> = HashMap::new();
    for (id, _) in &w.dummies {
        if g.vertex(id).is_some() {
            return Err(malformed(format!("dummy id {id:?} collides with a vertex")));
        }
        if dummy_index.insert(id, g.n() + dummy_index.len()).is_some() {
            return Err(malformed(format!("dummy id {id:?} repeated")));
        }
    }
    for (_, (e1, e2)) in &w.dummies {
        if g.edge(e1).is_none() || g.edge(e2).is_none() {
            return Err(malformed(format!("dummy pair ({e1:?}, {e2:?}) references unknown edges")));
        }
    }
    for e in w.routes.keys() {
        if g.edge(e).is_none() {
            return Err(malformed(format!("route for unknown edge {e:?}")));
        }
    }

    let n_total = g.n() + w.dummies.len();
    let mut rs = RotationSystem::empty(n_total);
    let mut seg_names = Vec::new();
    let empty: Vec<String> = Vec::new();
    // segment list per edge, with planarization endpoints
    let mut seg_index: HashMap<(String, u32), u32> = HashMap::new();
    for e in 0..g.m() as EdgeIdx {
        let id = g.edge_id(e);
        let route = w.routes.get(id).unwrap_or(&empty);
        let (u, v) = g.ends(e);
        let mut prev = u as usize;
        for (k, d) in route.iter().enumerate() {
            let &di = dummy_index
                .get(d.as_str())
                .ok_or_else(|| malformed(format!("route of {id:?} references unknown dummy {d:?}")))?;
            seg_index.insert((id.to_string(), k as u32), rs.edge_ends.len() as u32);
            rs.edge_ends.push((prev as u32, di as u32));
            seg_names.push((id.to_string(), k as u32));
            prev = di;
        }
        seg_index.insert((id.to_string(), route.len() as u32), rs.edge_ends.len() as u32);
        rs.edge_ends.push((prev as u32, v));
        seg_names.push((id.to_string(), route.len() as u32));
    }

    // rotations
    let mut vertex_names: Vec<String> = (0..g.n() as u32).map(|v| g.vertex_id(v).to_string()).collect();
    for (id, _) in &w.dummies {
        vertex_names.push(id.clone());
    }
    for (name, rot) in &w.rotations {
        let vi = if let Some(v) = g.vertex(name) {
            v as usize
        } else if let Some(&d) = dummy_index.get(name.as_str()) {
            d
        } else {
            return Err(malformed(format!("rotation for unknown vertex {name:?}")));
        };
        let mut darts = Vec::new();
        for cd in rot {
            let &seg = seg_index
                .get(&(cd.edge.clone(), cd.seg))
                .ok_or_else(|| malformed(format!("dart references missing segment {cd:?}")))?;
            if cd.end > 1 {
                return Err(malformed(format!("dart end out of range: {cd:?}")));
            }
            darts.push(Dart::new(seg, cd.end));
        }
        rs.rotations[vi] = darts;
    }
    rs.validate().map_err(malformed)?;
    Ok(Planarization { rs, seg_names, vertex_names, dummy_start: g.n() })
}

/// Checks a certificate against an instance. `Ok(true)` means the witness is
/// a valid simple realization of exactly the required crossings: dummies
/// biject with the crossing pairs, each dummy's rotation alternates the two
/// edges' portions, every route is loop-free and consistent, and face
/// tracing yields genus zero on every component.
pub fn check_certificate(
    a: &ATGraph,
    w: &PlanarizationCertificate,
) -> Result<bool, CertificateError> {
    let g = &a.graph;

    // (i) dummies biject with the crossing set
    let mut pairs_seen: HashSet<(EdgeIdx, EdgeIdx)> = HashSet::new();
    for (_, (e1, e2)) in &w.dummies {
        let (Some(a1), Some(a2)) = (g.edge(e1), g.edge(e2)) else {
            return Err(CertificateError::Malformed(format!(
                "dummy pair ({e1:?}, {e2:?}) references unknown edges"
            )));
        };
        if a1 == a2 {
            return Ok(false);
        }
        if !pairs_seen.insert((a1.min(a2), a1.max(a2))) {
            return Ok(false); // two dummies for one pair
        }
    }
    if pairs_seen.len() != a.crossings().len()
        || !a.crossings().iter().all(|p| pairs_seen.contains(p))
    {
        return Ok(false);
    }

    // (iv) routes: every dummy on exactly its two edges, no repeats
    let empty: Vec<String> = Vec::new();
    let mut route_hits: HashMap<&str, Vec<&str>> = HashMap::new();
    for e in 0..g.m() as EdgeIdx {
        let id = g.edge_id(e);
        let route = w.routes.get(id).unwrap_or(&empty);
        let mut seen = HashSet::new();
        for d in route {
            if !seen.insert(d.as_str()) {
                return Ok(false); // route visits a dummy twice
            }
            route_hits.entry(d.as_str()).or_default().push(id);
        }
    }
    for (d, (e1, e2)) in &w.dummies {
        let mut hits = route_hits.remove(d.as_str()).unwrap_or_default();
        hits.sort();
        let mut expect = vec![e1.as_str(), e2.as_str()];
        expect.sort();
        if hits != expect {
            return Ok(false);
        }
    }
    if !route_hits.is_empty() {
        return Err(CertificateError::Malformed(
            "route references a dummy that is not declared".into(),
        ));
    }

    let p = build_planarization(a, w)?;

    // (ii) each dummy has degree 4 and alternates the two edges' portions
    for di in p.dummy_start..p.rs.n() {
        let rot = &p.rs.rotations[di];
        if rot.len() != 4 {
            return Ok(false);
        }
        let edge_of = |d: &Dart| p.seg_names[d.edge as usize].0.clone();
        let e0 = edge_of(&rot[0]);
        let e1 = edge_of(&rot[1]);
        let e2 = edge_of(&rot[2]);
        let e3 = edge_of(&rot[3]);
        if !(e0 == e2 && e1 == e3 && e0 != e1) {
            return Ok(false);
        }
    }

    // (iii) genus 0 on every component
    Ok(p.rs.euler_check())
}

/// Counts, for an accepted certificate, the crossings per edge pair — used
/// by tests to confirm the witness reproduces the crossing set exactly.
pub fn crossing_counts(w: &PlanarizationCertificate) -> BTreeMap<(String, String), usize> {
    let mut out = BTreeMap::new();
    for (_, (e1, e2)) in &w.dummies {
        let key = if e1 <= e2 { (e1.clone(), e2.clone()) } else { (e2.clone(), e1.clone()) };
        *out.entry(key).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn two_disjoint_edges() -> ATGraph {
        let mut g = Graph::new();
        for v in ["a", "b", "c", "d"] {
            g.add_vertex(v).unwrap();
        }
        g.add_edge_by_ids("e1", "a", "b").unwrap();
        g.add_edge_by_ids("e2", "c", "d").unwrap();
        ATGraph::new(g, [("e1", "e2")]).unwrap()
    }

    fn cross_cert() -> PlanarizationCertificate {
        let mut w = PlanarizationCertificate::default();
        w.dummies.push(("x".into(), ("e1".into(), "e2".into())));
        w.routes.insert("e1".into(), vec!["x".into()]);
        w.routes.insert("e2".into(), vec!["x".into()]);
        let d = |edge: &str, seg: u32, end: u8| CertDart { edge: edge.into(), seg, end };
        w.rotations.insert("a".into(), vec![d("e1", 0, 0)]);
        w.rotations.insert("b".into(), vec![d("e1", 1, 1)]);
        w.rotations.insert("c".into(), vec![d("e2", 0, 0)]);
        w.rotations.insert("d".into(), vec![d("e2", 1, 1)]);
        w.rotations.insert(
            "x".into(),
            vec![d("e1", 0, 1), d("e2", 0, 1), d("e1", 1, 0), d("e2", 1, 0)],
        );
        w
    }

    #[test]
    fn accepts_a_single_crossing() {
        let a = two_disjoint_edges();
        assert_eq!(check_certificate(&a, &cross_cert()), Ok(true));
    }

    #[test]
    fn rejects_grouped_portions_at_dummy() {
        let a = two_disjoint_edges();
        let mut w = cross_cert();
        let rot = w.rotations.get_mut("x").unwrap();
        rot.swap(1, 2); // e1,e1,e2,e2: portions grouped, not alternating
        assert_eq!(check_certificate(&a, &w), Ok(false));
    }

    #[test]
    fn planar_k4_with_no_crossings() {
        let mut g = Graph::new();
        for i in 1..=4 {
            g.add_vertex(format!("{i}")).unwrap();
        }
        for (id, u, v) in [("12", 0, 1), ("13", 0, 2), ("14", 0, 3), ("23", 1, 2), ("24", 1, 3), ("34", 2, 3)] {
            g.add_edge(id, u, v).unwrap();
        }
        let at = ATGraph::new(g, []).unwrap();
        let rs = crate::embedding::planar_embedding(&at.graph).unwrap();
        let mut w = PlanarizationCertificate::default();
        for v in 0..4u32 {
            let rot = rs.rotations[v as usize]
                .iter()
                .map(|d| CertDart {
                    edge: at.graph.edge_id(d.edge).to_string(),
                    seg: 0,
                    end: d.end,
                })
                .collect();
            w.rotations.insert(at.graph.vertex_id(v).to_string(), rot);
        }
        assert_eq!(check_certificate(&at, &w), Ok(true));
    }

    #[test]
    fn missing_dummy_is_rejected() {
        let a = two_disjoint_edges();
        let w = PlanarizationCertificate::default();
        // no dummy for the required pair; rotations empty for all vertices
        assert_eq!(check_certificate(&a, &w), Ok(false));
    }

    #[test]
    fn malformed_when_rotation_references_unknown_segment() {
        let a = two_disjoint_edges();
        let mut w = cross_cert();
        w.rotations.get_mut("a").unwrap()[0].seg = 7;
        assert!(matches!(
            check_certificate(&a, &w),
            Err(CertificateError::Malformed(_))
        ));
    }
}
