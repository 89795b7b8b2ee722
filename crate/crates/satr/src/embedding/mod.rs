//! Planarity testing, combinatorial embeddings, face tracing and the
//! Euler-genus check.

mod lr;
mod rotation;

pub use rotation::{canonical_rotation, Dart, FaceSet, RotationSystem};

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("graph is not planar")]
    NotPlanar,
}

/// True iff `g` is planar (left-right criterion, per connected component).
pub fn is_planar(g: &Graph) -> bool {
    lr::lr_is_planar(g)
}

/// A planar rotation system of `g`, or `NotPlanar`.
pub fn planar_embedding(g: &Graph) -> Result<RotationSystem, EmbeddingError> {
    lr::lr_embedding(g).ok_or(EmbeddingError::NotPlanar)
}

/// All faces of a rotation system.
pub fn trace_faces(r: &RotationSystem) -> FaceSet {
    r.trace_faces()
}

/// Genus-0 test: every connected component satisfies V - E + F = 2.
pub fn euler_check(r: &RotationSystem) -> bool {
    r.euler_check()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> Graph {
        let mut g = Graph::new();
        for i in 0..n {
            g.add_vertex(format!("{i}")).unwrap();
        }
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(format!("e{k}"), i, j).unwrap();
                k += 1;
            }
        }
        g
    }

    fn k33() -> Graph {
        let mut g = Graph::new();
        for i in 0..6 {
            g.add_vertex(format!("{i}")).unwrap();
        }
        let mut k = 0;
        for i in 0..3u32 {
            for j in 3..6u32 {
                g.add_edge(format!("e{k}"), i, j).unwrap();
                k += 1;
            }
        }
        g
    }

    fn cycle(n: u32) -> Graph {
        let mut g = Graph::new();
        for i in 0..n {
            g.add_vertex(format!("{i}")).unwrap();
        }
        for i in 0..n {
            g.add_edge(format!("e{i}"), i, (i + 1) % n).unwrap();
        }
        g
    }

    #[test]
    fn kuratowski_basics() {
        assert!(is_planar(&complete(4)));
        assert!(!is_planar(&complete(5)));
        assert!(!is_planar(&k33()));
        assert_eq!(planar_embedding(&complete(5)).unwrap_err(), EmbeddingError::NotPlanar);
    }

    #[test]
    fn c4_embedding_has_two_faces() {
        let g = cycle(4);
        let rs = planar_embedding(&g).unwrap();
        rs.validate().unwrap();
        assert_eq!(trace_faces(&rs).len(), 2);
        assert!(euler_check(&rs));
    }

    #[test]
    fn k4_embedding_has_four_triangular_faces() {
        let g = complete(4);
        let rs = planar_embedding(&g).unwrap();
        rs.validate().unwrap();
        let faces = trace_faces(&rs);
        assert_eq!(faces.len(), 4);
        assert!(faces.faces.iter().all(|f| f.len() == 3));
        assert!(euler_check(&rs));
    }

    #[test]
    fn reversing_one_k4_rotation_breaks_genus() {
        let g = complete(4);
        let mut rs = planar_embedding(&g).unwrap();
        rs.rotations[0].reverse();
        let faces = trace_faces(&rs);
        assert!(faces.len() < 4);
        assert!(!euler_check(&rs));
    }

    #[test]
    fn disconnected_and_tree_graphs() {
        let mut g = Graph::new();
        for i in 0..7 {
            g.add_vertex(format!("{i}")).unwrap();
        }
        g.add_edge("a", 0, 1).unwrap();
        g.add_edge("b", 1, 2).unwrap();
        g.add_edge("c", 3, 4).unwrap();
        g.add_edge("d", 4, 5).unwrap();
        g.add_edge("e", 5, 3).unwrap();
        // vertex 6 isolated
        let rs = planar_embedding(&g).unwrap();
        rs.validate().unwrap();
        assert!(euler_check(&rs));
    }

    #[test]
    fn big_cycle_is_fast_and_planar() {
        let g = cycle(50_000);
        let rs = planar_embedding(&g).unwrap();
        assert!(euler_check(&rs));
    }

    #[test]
    fn petersen_graph_is_not_planar() {
        let mut g = Graph::new();
        for i in 0..10 {
            g.add_vertex(format!("{i}")).unwrap();
        }
        let outer = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        let spokes = [(0, 5), (1, 6), (2, 7), (3, 8), (4, 9)];
        let inner = [(5, 7), (7, 9), (9, 6), (6, 8), (8, 5)];
        let mut k = 0;
        for (u, v) in outer.iter().chain(&spokes).chain(&inner) {
            g.add_edge(format!("e{k}"), *u, *v).unwrap();
            k += 1;
        }
        assert!(!is_planar(&g));
    }

    /// Exhaustive rotation-system oracle: a graph is planar iff some rotation
    /// system passes the Euler check. Checked on every labeled graph with
    /// <= 5 vertices.
    #[test]
    fn agrees_with_exhaustive_rotation_enumeration_on_small_graphs() {
        fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
            if items.is_empty() {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for i in 0..items.len() {
                let mut rest = items.to_vec();
                let x = rest.remove(i);
                for mut tail in permutations(&rest) {
                    let mut v = vec![x.clone()];
                    v.append(&mut tail);
                    out.push(v);
                }
            }
            out
        }

        fn exhaustive_planar(g: &Graph) -> bool {
            let m = g.m();
            let mut rs = RotationSystem::empty(g.n());
            rs.edge_ends = (0..m as u32).map(|e| g.ends(e)).collect();
            let mut per_vertex: Vec<Vec<Vec<Dart>>> = Vec::new();
            for v in 0..g.n() as u32 {
                let darts: Vec<Dart> = g
                    .neighbors(v)
                    .iter()
                    .map(|&(e, _)| {
                        let (t, _) = g.ends(e);
                        Dart::new(e, if t == v { 0 } else { 1 })
                    })
                    .collect();
                let opts = if darts.len() <= 2 {
                    vec![darts.clone()]
                } else {
                    permutations(&darts[1..])
                        .into_iter()
                        .map(|perm| {
                            let mut rot = vec![darts[0]];
                            rot.extend(perm);
                            rot
                        })
                        .collect()
                };
                per_vertex.push(opts);
            }
            fn assign(i: usize, per_vertex: &[Vec<Vec<Dart>>], rs: &mut RotationSystem) -> bool {
                if i == per_vertex.len() {
                    return rs.euler_check();
                }
                for opt in &per_vertex[i] {
                    rs.rotations[i] = opt.clone();
                    if assign(i + 1, per_vertex, rs) {
                        return true;
                    }
                }
                false
            }
            assign(0, &per_vertex, &mut rs)
        }

        // enumerate all labeled graphs on up to 5 vertices
        for n in 1..=5usize {
            let pairs: Vec<(u32, u32)> = (0..n as u32)
                .flat_map(|i| ((i + 1)..n as u32).map(move |j| (i, j)))
                .collect();
            for mask in 0..(1u32 << pairs.len()) {
                let mut g = Graph::new();
                for i in 0..n {
                    g.add_vertex(format!("{i}")).unwrap();
                }
                for (k, &(u, v)) in pairs.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        g.add_edge(format!("e{k}"), u, v).unwrap();
                    }
                }
                let planar = is_planar(&g);
                assert_eq!(planar, exhaustive_planar(&g), "mask {mask} n {n}");
                if planar {
                    let rs = planar_embedding(&g).unwrap();
                    rs.validate().unwrap();
                    assert!(euler_check(&rs), "embedding fails Euler: mask {mask} n {n}");
                }
            }
        }
    }
}
