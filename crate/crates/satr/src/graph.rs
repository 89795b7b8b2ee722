//! Simple undirected graphs with stable string ids, plus the connectivity
//! helpers (components, blocks, cut vertices) used throughout the solver.

use std::collections::HashMap;

use thiserror::Error;

/// Dense vertex index, valid for one [`Graph`].
pub type VertexIdx = u32;
/// Dense edge index, valid for one [`Graph`].
pub type EdgeIdx = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("unknown vertex id {0:?}")]
    UnknownVertex(String),
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("parallel edge between {0:?} and {1:?}")]
    ParallelEdge(String, String),
}

/// An undirected simple graph. Vertices and edges carry external string ids;
/// all algorithms work on the dense indices.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    vertex_ids: Vec<String>,
    edge_ids: Vec<String>,
    ends: Vec<(VertexIdx, VertexIdx)>,
    adj: Vec<Vec<(EdgeIdx, VertexIdx)>>,
    vertex_lookup: HashMap<String, VertexIdx>,
    edge_lookup: HashMap<String, EdgeIdx>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<VertexIdx, GraphError> {
        let id = id.into();
        if self.vertex_lookup.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        let idx = self.vertex_ids.len() as VertexIdx;
        self.vertex_lookup.insert(id.clone(), idx);
        self.vertex_ids.push(id);
        self.adj.push(Vec::new());
        Ok(idx)
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        u: VertexIdx,
        v: VertexIdx,
    ) -> Result<EdgeIdx, GraphError> {
        let id = id.into();
        if self.edge_lookup.contains_key(&id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        if u == v {
            return Err(GraphError::SelfLoop(self.vertex_ids[u as usize].clone()));
        }
        if self.adj[u as usize].iter().any(|&(_, w)| w == v) {
            return Err(GraphError::ParallelEdge(
                self.vertex_ids[u as usize].clone(),
                self.vertex_ids[v as usize].clone(),
            ));
        }
        let idx = self.edge_ids.len() as EdgeIdx;
        self.edge_lookup.insert(id.clone(), idx);
        self.edge_ids.push(id);
        self.ends.push((u, v));
        self.adj[u as usize].push((idx, v));
        self.adj[v as usize].push((idx, u));
        Ok(idx)
    }

    pub fn add_edge_by_ids(
        &mut self,
        id: impl Into<String>,
        u: &str,
        v: &str,
    ) -> Result<EdgeIdx, GraphError> {
        let ui = self
            .vertex(u)
            .ok_or_else(|| GraphError::UnknownVertex(u.to_string()))?;
        let vi = self
            .vertex(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        self.add_edge(id, ui, vi)
    }

    pub fn n(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn m(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn vertex(&self, id: &str) -> Option<VertexIdx> {
        self.vertex_lookup.get(id).copied()
    }

    pub fn edge(&self, id: &str) -> Option<EdgeIdx> {
        self.edge_lookup.get(id).copied()
    }

    pub fn vertex_id(&self, v: VertexIdx) -> &str {
        &self.vertex_ids[v as usize]
    }

    pub fn edge_id(&self, e: EdgeIdx) -> &str {
        &self.edge_ids[e as usize]
    }

    pub fn ends(&self, e: EdgeIdx) -> (VertexIdx, VertexIdx) {
        self.ends[e as usize]
    }

    /// The endpoint of `e` other than `v`.
    pub fn other_end(&self, e: EdgeIdx, v: VertexIdx) -> VertexIdx {
        let (a, b) = self.ends(e);
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn degree(&self, v: VertexIdx) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: VertexIdx) -> &[(EdgeIdx, VertexIdx)] {
        &self.adj[v as usize]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexIdx> {
        0..self.n() as VertexIdx
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeIdx> {
        0..self.m() as EdgeIdx
    }

    pub fn edges_adjacent(&self, e: EdgeIdx, f: EdgeIdx) -> bool {
        let (a, b) = self.ends(e);
        let (c, d) = self.ends(f);
        a == c || a == d || b == c || b == d
    }

    /// Connected components as vertex sets; component index per vertex.
    pub fn components(&self) -> (Vec<Vec<VertexIdx>>, Vec<usize>) {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut comps = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let ci = comps.len();
            let mut members = vec![s as VertexIdx];
            comp[s] = ci;
            stack.push(s as VertexIdx);
            while let Some(v) = stack.pop() {
                for &(_, w) in &self.adj[v as usize] {
                    if comp[w as usize] == usize::MAX {
                        comp[w as usize] = ci;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            comps.push(members);
        }
        (comps, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().0.len() == 1
    }

    /// Connectivity ignoring a set of removed vertices; true when the
    /// remaining vertices form one component (or none remain).
    pub fn connected_without(&self, removed: &[VertexIdx]) -> bool {
        let n = self.n();
        let mut dead = vec![false; n];
        for &r in removed {
            dead[r as usize] = true;
        }
        let start = (0..n).find(|&v| !dead[v]);
        let Some(start) = start else { return true };
        let mut seen = vec![false; n];
        let mut stack = vec![start as VertexIdx];
        seen[start] = true;
        let mut count = 1usize;
        while let Some(v) = stack.pop() {
            for &(_, w) in &self.adj[v as usize] {
                if !dead[w as usize] && !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n - removed.len()
    }

    pub fn is_biconnected(&self) -> bool {
        if self.n() < 2 {
            return false;
        }
        if self.n() == 2 {
            return self.m() == 1;
        }
        self.is_connected() && self.vertices().all(|v| self.connected_without(&[v]))
    }

    /// Brute-force triconnectivity check, fine at gadget scale.
    pub fn is_triconnected(&self) -> bool {
        if self.n() < 4 || !self.is_biconnected() {
            return false;
        }
        for u in 0..self.n() as VertexIdx {
            for v in u + 1..self.n() as VertexIdx {
                if !self.connected_without(&[u, v]) {
                    return false;
                }
            }
        }
        true
    }

    /// Biconnected components (blocks) as edge sets, plus the cut vertices.
    /// Iterative Hopcroft–Tarjan.
    pub fn blocks(&self) -> (Vec<Vec<EdgeIdx>>, Vec<VertexIdx>) {
        let n = self.n();
        let mut disc = vec![0u32; n];
        let mut low = vec![0u32; n];
        let mut visited = vec![false; n];
        let mut is_cut = vec![false; n];
        let mut timer = 1u32;
        let mut blocks: Vec<Vec<EdgeIdx>> = Vec::new();
        let mut edge_stack: Vec<EdgeIdx> = Vec::new();
        // (vertex, parent edge, next adjacency index)
        let mut stack: Vec<(VertexIdx, Option<EdgeIdx>, usize)> = Vec::new();

        for root in 0..n as VertexIdx {
            if visited[root as usize] {
                continue;
            }
            visited[root as usize] = true;
            disc[root as usize] = timer;
            low[root as usize] = timer;
            timer += 1;
            stack.push((root, None, 0));
            let mut root_children = 0usize;
            while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
                if *idx < self.adj[v as usize].len() {
                    let (e, w) = self.adj[v as usize][*idx];
                    *idx += 1;
                    if Some(e) == pe {
                        continue;
                    }
                    if !visited[w as usize] {
                        visited[w as usize] = true;
                        disc[w as usize] = timer;
                        low[w as usize] = timer;
                        timer += 1;
                        edge_stack.push(e);
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, Some(e), 0));
                    } else if disc[w as usize] < disc[v as usize] {
                        // back edge
                        edge_stack.push(e);
                        low[v as usize] = low[v as usize].min(disc[w as usize]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent as usize] = low[parent as usize].min(low[v as usize]);
                        if low[v as usize] >= disc[parent as usize] {
                            // parent closes a block
                            if parent != root || root_children >= 1 {
                                let mut blk = Vec::new();
                                while let Some(&e) = edge_stack.last() {
                                    let (a, b) = self.ends(e);
                                    if disc[a as usize] >= disc[v as usize]
                                        || disc[b as usize] >= disc[v as usize]
                                    {
                                        blk.push(e);
                                        edge_stack.pop();
                                    } else {
                                        break;
                                    }
                                }
                                if !blk.is_empty() {
                                    blocks.push(blk);
                                }
                            }
                            if parent != root {
                                is_cut[parent as usize] = true;
                            }
                        }
                    }
                }
            }
            if root_children >= 2 {
                is_cut[root as usize] = true;
            }
        }
        let cuts = (0..n as VertexIdx)
            .filter(|&v| is_cut[v as usize])
            .collect();
        (blocks, cuts)
    }

    /// Induced subgraph on the given edges, keeping external ids.
    /// Returns the subgraph plus maps back to the parent indices.
    pub fn edge_subgraph(&self, edges: &[EdgeIdx]) -> (Graph, Vec<VertexIdx>, Vec<EdgeIdx>) {
        let mut g = Graph::new();
        let mut vmap: HashMap<VertexIdx, VertexIdx> = HashMap::new();
        let mut back_v = Vec::new();
        let mut back_e = Vec::new();
        for &e in edges {
            let (u, v) = self.ends(e);
            for x in [u, v] {
                if !vmap.contains_key(&x) {
                    let ni = g.add_vertex(self.vertex_id(x)).unwrap();
                    vmap.insert(x, ni);
                    back_v.push(x);
                }
            }
            g.add_edge(self.edge_id(e), vmap[&u], vmap[&v]).unwrap();
            back_e.push(e);
        }
        (g, back_v, back_e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..n {
            g.add_vertex(format!("v{i}")).unwrap();
        }
        for i in 0..n - 1 {
            g.add_edge(format!("e{i}"), i as u32, i as u32 + 1).unwrap();
        }
        g
    }

    #[test]
    fn rejects_loops_and_parallels() {
        let mut g = Graph::new();
        let a = g.add_vertex("a").unwrap();
        let b = g.add_vertex("b").unwrap();
        assert!(matches!(g.add_edge("l", a, a), Err(GraphError::SelfLoop(_))));
        g.add_edge("e", a, b).unwrap();
        assert!(matches!(
            g.add_edge("f", b, a),
            Err(GraphError::ParallelEdge(_, _))
        ));
        assert!(matches!(
            g.add_edge("e", a, b),
            Err(GraphError::DuplicateEdge(_))
        ));
    }

    #[test]
    fn blocks_of_two_triangles_sharing_a_vertex() {
        let mut g = Graph::new();
        for id in ["a", "b", "c", "d", "e"] {
            g.add_vertex(id).unwrap();
        }
        for (id, u, v) in [("1", 0, 1), ("2", 1, 2), ("3", 2, 0), ("4", 2, 3), ("5", 3, 4), ("6", 4, 2)] {
            g.add_edge(id, u, v).unwrap();
        }
        let (blocks, cuts) = g.blocks();
        assert_eq!(blocks.len(), 2);
        assert_eq!(cuts, vec![2]);
        let mut sizes: Vec<_> = blocks.iter().map(|b| b.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 3]);
    }

    #[test]
    fn path_blocks_are_single_edges() {
        let g = path(5);
        let (blocks, cuts) = g.blocks();
        assert_eq!(blocks.len(), 4);
        assert_eq!(cuts.len(), 3);
        assert!(!g.is_biconnected());
    }

    #[test]
    fn cycle_is_biconnected_not_triconnected() {
        let mut g = path(4);
        g.add_edge("back", 3, 0).unwrap();
        assert!(g.is_biconnected());
        assert!(!g.is_triconnected());
    }

    #[test]
    fn k4_is_triconnected() {
        let mut g = Graph::new();
        for i in 0..4 {
            g.add_vertex(format!("{i}")).unwrap();
        }
        let mut k = 0;
        for i in 0..4u32 {
            for j in i + 1..4u32 {
                g.add_edge(format!("e{k}"), i, j).unwrap();
                k += 1;
            }
        }
        assert!(g.is_triconnected());
    }
}
