//! Rotation systems (combinatorial maps), face tracing and the genus-0 check.

use std::collections::HashMap;

use crate::graph::{EdgeIdx, VertexIdx};

/// A dart is one of the two ends of an edge: `end` 0 sits at the tail of the
/// edge, `end` 1 at the head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub edge: EdgeIdx,
    pub end: u8,
}

impl Dart {
    pub fn new(edge: EdgeIdx, end: u8) -> Self {
        Dart { edge, end }
    }

    pub fn twin(self) -> Self {
        Dart { edge: self.edge, end: 1 - self.end }
    }
}

/// A rotation system: per-vertex cyclic orders of incident darts over an edge
/// list. Parallel edges are allowed here (skeleton graphs need them), only
/// loops are not.
#[derive(Debug, Clone)]
pub struct RotationSystem {
    /// edge -> (tail, head); the dart with `end == 0` is incident to tail.
    pub edge_ends: Vec<(VertexIdx, VertexIdx)>,
    /// vertex -> cyclic sequence of incident darts.
    pub rotations: Vec<Vec<Dart>>,
}

/// The face cycles of a rotation system.
#[derive(Debug, Clone)]
pub struct FaceSet {
    pub faces: Vec<Vec<Dart>>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

impl RotationSystem {
    pub fn empty(n_vertices: usize) -> Self {
        RotationSystem { edge_ends: Vec::new(), rotations: vec![Vec::new(); n_vertices] }
    }

    pub fn n(&self) -> usize {
        self.rotations.len()
    }

    pub fn m(&self) -> usize {
        self.edge_ends.len()
    }

    pub fn vertex_of(&self, d: Dart) -> VertexIdx {
        let (t, h) = self.edge_ends[d.edge as usize];
        if d.end == 0 {
            t
        } else {
            h
        }
    }

    /// Checks the combinatorial-map invariants: every dart of every edge
    /// occurs exactly once, in the rotation of its own vertex.
    pub fn validate(&self) -> Result<(), String> {
        let mut seen: HashMap<Dart, VertexIdx> = HashMap::new();
        for (v, rot) in self.rotations.iter().enumerate() {
            for &d in rot {
                if (d.edge as usize) >= self.edge_ends.len() || d.end > 1 {
                    return Err(format!("dart {d:?} out of range"));
                }
                if self.vertex_of(d) != v as VertexIdx {
                    return Err(format!("dart {d:?} listed at vertex {v}, belongs elsewhere"));
                }
                if seen.insert(d, v as VertexIdx).is_some() {
                    return Err(format!("dart {d:?} appears twice"));
                }
            }
        }
        if seen.len() != 2 * self.edge_ends.len() {
            return Err(format!(
                "{} darts placed, expected {}",
                seen.len(),
                2 * self.edge_ends.len()
            ));
        }
        Ok(())
    }

    fn dart_positions(&self) -> HashMap<Dart, (VertexIdx, usize)> {
        let mut pos = HashMap::new();
        for (v, rot) in self.rotations.iter().enumerate() {
            for (i, &d) in rot.iter().enumerate() {
                pos.insert(d, (v as VertexIdx, i));
            }
        }
        pos
    }

    /// Successor of `d` in the rotation at its vertex.
    pub fn rot_next(&self, d: Dart, pos: &HashMap<Dart, (VertexIdx, usize)>) -> Dart {
        let (v, i) = pos[&d];
        let rot = &self.rotations[v as usize];
        rot[(i + 1) % rot.len()]
    }

    /// Traces all faces: from dart `d`, the next dart of the face is the
    /// rotation successor of `twin(d)`.
    pub fn trace_faces(&self) -> FaceSet {
        let pos = self.dart_positions();
        let mut visited: HashMap<Dart, bool> = HashMap::new();
        let mut faces = Vec::new();
        for rot in &self.rotations {
            for &start in rot {
                if visited.contains_key(&start) {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = start;
                loop {
                    face.push(d);
                    visited.insert(d, true);
                    d = self.rot_next(d.twin(), &pos);
                    if d == start {
                        break;
                    }
                }
                faces.push(face);
            }
        }
        FaceSet { faces }
    }

    /// True when every connected component satisfies V - E + F = 2.
    pub fn euler_check(&self) -> bool {
        // component labels via the edge structure
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut ncomp = 0usize;
        let mut stack = Vec::new();
        let mut adj: Vec<Vec<VertexIdx>> = vec![Vec::new(); n];
        for &(t, h) in &self.edge_ends {
            adj[t as usize].push(h);
            adj[h as usize].push(t);
        }
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = ncomp;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if comp[w as usize] == usize::MAX {
                        comp[w as usize] = ncomp;
                        stack.push(w as usize);
                    }
                }
            }
            ncomp += 1;
        }
        let mut verts = vec![0i64; ncomp];
        let mut edges = vec![0i64; ncomp];
        let mut fcount = vec![0i64; ncomp];
        for v in 0..n {
            verts[comp[v]] += 1;
        }
        for &(t, _) in &self.edge_ends {
            edges[comp[t as usize]] += 1;
        }
        for face in self.trace_faces().faces {
            let v = self.vertex_of(face[0]);
            fcount[comp[v as usize]] += 1;
        }
        (0..ncomp).all(|c| {
            if edges[c] == 0 {
                // isolated vertices: single face around each
                true
            } else {
                verts[c] - edges[c] + fcount[c] == 2
            }
        })
    }

    /// Mirror the whole map (reverse every rotation). Genus is preserved.
    pub fn mirror(&mut self) {
        for rot in &mut self.rotations {
            rot.reverse();
        }
    }
}

/// Canonicalize a cyclic sequence: rotate so the minimal element comes first.
/// Reversal is intentionally not quotiented.
pub fn canonical_rotation<T: Ord + Clone>(cycle: &[T]) -> Vec<T> {
    if cycle.is_empty() {
        return Vec::new();
    }
    let min_pos = cycle
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    let mut out = Vec::with_capacity(cycle.len());
    for i in 0..cycle.len() {
        out.push(cycle[(min_pos + i) % cycle.len()].clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_rs(n: u32) -> RotationSystem {
        let mut rs = RotationSystem::empty(n as usize);
        for i in 0..n {
            rs.edge_ends.push((i, (i + 1) % n));
        }
        for v in 0..n {
            // edge v is (v, v+1): dart end 0 here; edge v-1 arrives with end 1
            let prev = (v + n - 1) % n;
            rs.rotations[v as usize] = vec![Dart::new(v, 0), Dart::new(prev, 1)];
        }
        rs
    }

    #[test]
    fn c4_has_two_faces_of_length_four() {
        let rs = cycle_rs(4);
        rs.validate().unwrap();
        let faces = rs.trace_faces();
        assert_eq!(faces.len(), 2);
        assert!(faces.faces.iter().all(|f| f.len() == 4));
        assert!(rs.euler_check());
    }

    #[test]
    fn single_edge_is_planar_with_one_face() {
        let mut rs = RotationSystem::empty(2);
        rs.edge_ends.push((0, 1));
        rs.rotations[0] = vec![Dart::new(0, 0)];
        rs.rotations[1] = vec![Dart::new(0, 1)];
        assert_eq!(rs.trace_faces().len(), 1);
        assert!(rs.euler_check());
    }

    #[test]
    fn face_handshake() {
        let rs = cycle_rs(5);
        let faces = rs.trace_faces();
        let total: usize = faces.faces.iter().map(|f| f.len()).sum();
        assert_eq!(total, 2 * rs.m());
    }

    #[test]
    fn canonical_rotation_starts_at_min() {
        assert_eq!(canonical_rotation(&[3, 1, 2]), vec![1, 2, 3]);
        assert_eq!(canonical_rotation(&[1, 3, 2]), vec![1, 3, 2]);
    }
}
