//! JSON serialization of instances and certificates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

use super::{ATGraph, PlanarizationCertificate};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid instance: {0}")]
    Instance(String),
}

#[derive(Serialize, Deserialize)]
struct EdgeRec {
    id: String,
    u: String,
    v: String,
}

#[derive(Serialize, Deserialize)]
struct InstanceRec {
    vertices: Vec<String>,
    edges: Vec<EdgeRec>,
    crossings: Vec<(String, String)>,
}

/// Parses `{"vertices": [...], "edges": [{"id","u","v"}...], "crossings": [[a,b]...]}`.
pub fn instance_from_json(text: &str) -> Result<ATGraph, IoError> {
    let rec: InstanceRec = serde_json::from_str(text)?;
    let mut g = Graph::new();
    for v in &rec.vertices {
        g.add_vertex(v.clone()).map_err(|e| IoError::Instance(e.to_string()))?;
    }
    for e in &rec.edges {
        g.add_edge_by_ids(e.id.clone(), &e.u, &e.v)
            .map_err(|e| IoError::Instance(e.to_string()))?;
    }
    ATGraph::new(g, rec.crossings.iter().map(|(a, b)| (a.as_str(), b.as_str())))
        .map_err(|e| IoError::Instance(e.to_string()))
}

pub fn instance_to_json(a: &ATGraph) -> String {
    let g = &a.graph;
    let rec = InstanceRec {
        vertices: g.vertices().map(|v| g.vertex_id(v).to_string()).collect(),
        edges: g
            .edges()
            .map(|e| {
                let (u, v) = g.ends(e);
                EdgeRec {
                    id: g.edge_id(e).to_string(),
                    u: g.vertex_id(u).to_string(),
                    v: g.vertex_id(v).to_string(),
                }
            })
            .collect(),
        crossings: a
            .crossings()
            .iter()
            .map(|&(x, y)| (g.edge_id(x).to_string(), g.edge_id(y).to_string()))
            .collect(),
    };
    serde_json::to_string_pretty(&rec).expect("instance serializes")
}

pub fn certificate_from_json(text: &str) -> Result<PlanarizationCertificate, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// Serializes with every cyclic order rotated to start at its smallest dart.
pub fn certificate_to_json(w: &PlanarizationCertificate) -> String {
    let mut w = w.clone();
    w.canonicalize();
    serde_json::to_string_pretty(&w).expect("certificate serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        let text = r#"{
            "vertices": ["a", "b", "c", "d"],
            "edges": [
                {"id": "e1", "u": "a", "v": "b"},
                {"id": "e2", "u": "c", "v": "d"}
            ],
            "crossings": [["e1", "e2"]]
        }"#;
        let at = instance_from_json(text).unwrap();
        assert_eq!(at.graph.n(), 4);
        assert_eq!(at.crossings().len(), 1);
        let again = instance_from_json(&instance_to_json(&at)).unwrap();
        assert_eq!(again.crossings(), at.crossings());
    }

    #[test]
    fn bad_instance_reports_reason() {
        let text = r#"{"vertices": ["a"], "edges": [{"id": "e", "u": "a", "v": "z"}], "crossings": []}"#;
        assert!(matches!(instance_from_json(text), Err(IoError::Instance(_))));
    }
}
