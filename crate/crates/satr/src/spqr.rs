//! SPQR-trees: decomposition of a biconnected graph into triconnected
//! components, with skeleton access, twin virtual edges, merging, embedding
//! composition and the per-vertex distribution vectors the solver reads.
//!
//! Construction is the straightforward recursive splitting along separation
//! pairs and parallel bundles, followed by canonical merging of adjacent
//! S-nodes and P-nodes. Quadratic at worst, which is fine at the block sizes
//! the pipeline feeds it.

use std::collections::HashMap;

use thiserror::Error;

use crate::embedding::{planar_embedding, Dart, RotationSystem};
use crate::graph::{EdgeIdx, Graph, VertexIdx};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpqrKind {
    S,
    P,
    Q,
    R,
}

#[derive(Debug, Clone)]
pub struct SkelEdge {
    pub u: VertexIdx,
    pub v: VertexIdx,
    /// The graph edge this skeleton edge stands for, if real.
    pub real: Option<EdgeIdx>,
    /// Twin virtual edge as (node, edge index), if virtual.
    pub twin: Option<(usize, usize)>,
}

impl SkelEdge {
    pub fn is_virtual(&self) -> bool {
        self.twin.is_some()
    }

    pub fn touches(&self, x: VertexIdx) -> bool {
        self.u == x || self.v == x
    }

    pub fn other(&self, x: VertexIdx) -> VertexIdx {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpqrNode {
    pub kind: SpqrKind,
    pub edges: Vec<SkelEdge>,
}

impl SpqrNode {
    pub fn vertices(&self) -> Vec<VertexIdx> {
        let mut vs: Vec<VertexIdx> = self.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn edges_at(&self, v: VertexIdx) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].touches(v)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SpqrTree {
    pub nodes: Vec<SpqrNode>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpqrError {
    #[error("graph is not biconnected")]
    NotBiconnected,
}

#[derive(Debug, Clone, Copy)]
struct TempEdge {
    u: VertexIdx,
    v: VertexIdx,
    tag: Tag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tag {
    Real(EdgeIdx),
    Virt(u32),
}

struct Builder {
    nodes: Vec<SpqrNode>,
    placements: HashMap<u32, Vec<(usize, usize)>>,
    next_pair: u32,
}

impl Builder {
    fn push_node(&mut self, kind: SpqrKind, edges: Vec<TempEdge>) -> usize {
        let id = self.nodes.len();
        let mut skel = Vec::new();
        for (i, e) in edges.iter().enumerate() {
            let (real, twin) = match e.tag {
                Tag::Real(r) => (Some(r), None),
                Tag::Virt(p) => {
                    self.placements.entry(p).or_default().push((id, i));
                    (None, None)
                }
            };
            skel.push(SkelEdge { u: e.u, v: e.v, real, twin });
        }
        self.nodes.push(SpqrNode { kind, edges: skel });
        id
    }

    fn fresh_pair(&mut self) -> u32 {
        self.next_pair += 1;
        self.next_pair - 1
    }

    fn decompose(&mut self, edges: Vec<TempEdge>) {
        let u0 = edges[0].u;
        let v0 = edges[0].v;
        let is_bond =
            edges.iter().all(|e| (e.u == u0 && e.v == v0) || (e.u == v0 && e.v == u0));
        if is_bond {
            if edges.len() == 1 {
                self.push_node(SpqrKind::Q, edges);
            } else {
                self.push_node(SpqrKind::P, edges);
            }
            return;
        }
        let mut deg: HashMap<VertexIdx, usize> = HashMap::new();
        for e in &edges {
            *deg.entry(e.u).or_default() += 1;
            *deg.entry(e.v).or_default() += 1;
        }
        let parallel_pair = {
            let mut seen = std::collections::HashSet::new();
            let mut found = None;
            for e in &edges {
                if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                    found = Some((e.u.min(e.v), e.u.max(e.v)));
                    break;
                }
            }
            found
        };
        if parallel_pair.is_none() && deg.values().all(|&d| d == 2) {
            self.push_node(SpqrKind::S, edges);
            return;
        }
        if let Some((a, b)) = parallel_pair {
            self.split(edges, a, b);
            return;
        }
        if let Some((a, b)) = separation_pair(&edges) {
            self.split(edges, a, b);
        } else {
            self.push_node(SpqrKind::R, edges);
        }
    }

    fn split(&mut self, edges: Vec<TempEdge>, a: VertexIdx, b: VertexIdx) {
        let mut direct = Vec::new();
        let mut rest = Vec::new();
        for e in &edges {
            if (e.u == a && e.v == b) || (e.u == b && e.v == a) {
                direct.push(*e);
            } else {
                rest.push(*e);
            }
        }
        // union-find over vertices other than a, b
        let mut parent: HashMap<VertexIdx, VertexIdx> = HashMap::new();
        fn find(p: &mut HashMap<VertexIdx, VertexIdx>, x: VertexIdx) -> VertexIdx {
            let px = *p.entry(x).or_insert(x);
            if px == x {
                return x;
            }
            let r = find(p, px);
            p.insert(x, r);
            r
        }
        for e in &rest {
            if e.u != a && e.u != b && e.v != a && e.v != b {
                let ru = find(&mut parent, e.u);
                let rv = find(&mut parent, e.v);
                parent.insert(ru, rv);
            }
        }
        let mut comps: HashMap<VertexIdx, Vec<TempEdge>> = HashMap::new();
        for e in &rest {
            let anchor = if e.u != a && e.u != b { e.u } else { e.v };
            let root = find(&mut parent, anchor);
            comps.entry(root).or_default().push(*e);
        }
        // center bond: direct edges plus one virtual edge per component
        let mut center: Vec<TempEdge> = direct;
        let mut comps: Vec<Vec<TempEdge>> = comps.into_values().collect();
        comps.sort_by_key(|c| c.iter().map(|e| (e.u, e.v)).min());
        for comp_edges in comps {
            let p = self.fresh_pair();
            center.push(TempEdge { u: a, v: b, tag: Tag::Virt(p) });
            let mut sub = comp_edges;
            sub.push(TempEdge { u: a, v: b, tag: Tag::Virt(p) });
            self.decompose(sub);
        }
        self.push_node(SpqrKind::P, center);
    }
}

/// Any separation pair of the multigraph, or None.
fn separation_pair(edges: &[TempEdge]) -> Option<(VertexIdx, VertexIdx)> {
    let mut verts: Vec<VertexIdx> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
    verts.sort();
    verts.dedup();
    if verts.len() < 4 {
        return None;
    }
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let (a, b) = (verts[i], verts[j]);
            let keep: Vec<VertexIdx> =
                verts.iter().copied().filter(|&x| x != a && x != b).collect();
            if keep.is_empty() {
                continue;
            }
            let mut adj: HashMap<VertexIdx, Vec<VertexIdx>> = HashMap::new();
            for e in edges {
                if e.u != a && e.u != b && e.v != a && e.v != b {
                    adj.entry(e.u).or_default().push(e.v);
                    adj.entry(e.v).or_default().push(e.u);
                }
            }
            let mut seen = std::collections::HashSet::new();
            let mut stack = vec![keep[0]];
            seen.insert(keep[0]);
            while let Some(x) = stack.pop() {
                for &y in adj.get(&x).into_iter().flatten() {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            if seen.len() < keep.len() {
                return Some((a, b));
            }
        }
    }
    None
}

impl SpqrTree {
    /// Builds the canonical SPQR-tree of a biconnected graph (or of a single
    /// edge, giving the degenerate lone Q-node).
    pub fn build(g: &Graph) -> Result<SpqrTree, SpqrError> {
        if g.m() == 1 {
            let (u, v) = g.ends(0);
            return Ok(SpqrTree {
                nodes: vec![SpqrNode {
                    kind: SpqrKind::Q,
                    edges: vec![SkelEdge { u, v, real: Some(0), twin: None }],
                }],
            });
        }
        if !g.is_biconnected() {
            return Err(SpqrError::NotBiconnected);
        }
        let mut b = Builder { nodes: Vec::new(), placements: HashMap::new(), next_pair: 0 };
        let edges: Vec<TempEdge> = g
            .edges()
            .map(|e| {
                let (u, v) = g.ends(e);
                TempEdge { u, v, tag: Tag::Real(e) }
            })
            .collect();
        b.decompose(edges);
        let placements = std::mem::take(&mut b.placements);
        let mut tree = SpqrTree { nodes: b.nodes };
        for (_, places) in placements {
            assert_eq!(places.len(), 2, "each virtual pair placed twice");
            let (n1, i1) = places[0];
            let (n2, i2) = places[1];
            tree.nodes[n1].edges[i1].twin = Some((n2, i2));
            tree.nodes[n2].edges[i2].twin = Some((n1, i1));
        }
        tree.canonicalize();
        tree.materialize_q_nodes();
        tree.canonicalize();
        Ok(tree)
    }

    /// Merges adjacent S-S and P-P pairs and smooths two-edge P-nodes until
    /// the decomposition is canonical.
    fn canonicalize(&mut self) {
        loop {
            let mut changed = false;
            'scan: for a in 0..self.nodes.len() {
                if self.nodes[a].edges.is_empty() {
                    continue;
                }
                if self.nodes[a].kind == SpqrKind::P && self.nodes[a].edges.len() == 2 {
                    if self.nodes[a].edges.iter().all(|e| e.is_virtual()) {
                        let (n1, i1) = self.nodes[a].edges[0].twin.unwrap();
                        let (n2, i2) = self.nodes[a].edges[1].twin.unwrap();
                        self.nodes[n1].edges[i1].twin = Some((n2, i2));
                        self.nodes[n2].edges[i2].twin = Some((n1, i1));
                        self.nodes[a].edges.clear();
                    } else {
                        // one real side: semantically a Q-node
                        self.nodes[a].kind = SpqrKind::Q;
                    }
                    changed = true;
                    break 'scan;
                }
                for i in 0..self.nodes[a].edges.len() {
                    let Some((b, _)) = self.nodes[a].edges[i].twin else { continue };
                    if a == b {
                        continue;
                    }
                    let (ka, kb) = (self.nodes[a].kind, self.nodes[b].kind);
                    let mergeable = (ka == SpqrKind::S && kb == SpqrKind::S)
                        || (ka == SpqrKind::P && kb == SpqrKind::P);
                    if mergeable {
                        self.merge_in_place(a, i);
                        changed = true;
                        break 'scan;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        self.compact();
    }

    /// Merge the node across edge `i` of node `a` into `a`.
    fn merge_in_place(&mut self, a: usize, i: usize) {
        let (b, j) = self.nodes[a].edges[i].twin.unwrap();
        let b_edges = std::mem::take(&mut self.nodes[b].edges);
        self.nodes[a].edges.swap_remove(i);
        if i < self.nodes[a].edges.len() {
            if let Some((n2, i2)) = self.nodes[a].edges[i].twin {
                self.nodes[n2].edges[i2].twin = Some((a, i));
            }
        }
        for (k, e) in b_edges.into_iter().enumerate() {
            if k == j {
                continue;
            }
            let new_idx = self.nodes[a].edges.len();
            if let Some((n2, i2)) = e.twin {
                self.nodes[n2].edges[i2].twin = Some((a, new_idx));
            }
            self.nodes[a].edges.push(e);
        }
    }

    /// Replaces real edges in non-Q skeletons by virtual edges twinned to
    /// fresh Q-nodes.
    fn materialize_q_nodes(&mut self) {
        for n in 0..self.nodes.len() {
            if self.nodes[n].kind == SpqrKind::Q || self.nodes[n].edges.len() <= 1 {
                continue;
            }
            for i in 0..self.nodes[n].edges.len() {
                if self.nodes[n].edges[i].real.is_none() {
                    continue;
                }
                let e = self.nodes[n].edges[i].clone();
                let q = self.nodes.len();
                self.nodes.push(SpqrNode {
                    kind: SpqrKind::Q,
                    edges: vec![
                        SkelEdge { u: e.u, v: e.v, real: e.real, twin: None },
                        SkelEdge { u: e.u, v: e.v, real: None, twin: Some((n, i)) },
                    ],
                });
                self.nodes[n].edges[i] =
                    SkelEdge { u: e.u, v: e.v, real: None, twin: Some((q, 1)) };
            }
        }
    }

    fn compact(&mut self) {
        let mut map = vec![usize::MAX; self.nodes.len()];
        let mut kept = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if !n.edges.is_empty() {
                map[i] = kept.len();
                kept.push(n.clone());
            }
        }
        for n in &mut kept {
            for e in &mut n.edges {
                if let Some((t, i)) = e.twin {
                    e.twin = Some((map[t], i));
                }
            }
        }
        self.nodes = kept;
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn neighbors(&self, n: usize) -> Vec<usize> {
        self.nodes[n].edges.iter().filter_map(|e| e.twin.map(|(t, _)| t)).collect()
    }

    pub fn nodes_containing(&self, v: VertexIdx) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&n| self.nodes[n].edges.iter().any(|e| e.touches(v)))
            .collect()
    }

    /// Real graph edges incident to `v` inside the component a skeleton edge
    /// stands for.
    pub fn real_edges_behind(&self, n: usize, i: usize, v: VertexIdx) -> Vec<EdgeIdx> {
        let e = &self.nodes[n].edges[i];
        assert!(e.touches(v), "edge not incident to queried vertex");
        if let Some(r) = e.real {
            return vec![r];
        }
        let (t, j) = e.twin.expect("virtual edge has twin");
        let mut out = Vec::new();
        for (k, f) in self.nodes[t].edges.iter().enumerate() {
            if k == j || !f.touches(v) {
                continue;
            }
            out.extend(self.real_edges_behind(t, k, v));
        }
        out
    }

    /// Counts of `E(v)` per skeleton edge at `v`, sorted non-increasing.
    pub fn distribution_vector(&self, n: usize, v: VertexIdx) -> Vec<usize> {
        let mut d: Vec<usize> = self.nodes[n]
            .edges_at(v)
            .into_iter()
            .map(|i| self.real_edges_behind(n, i, v).len())
            .collect();
        d.sort_by(|a, b| b.cmp(a));
        d
    }

    /// A new tree with adjacent nodes `a` and `b` merged; None when they are
    /// not adjacent.
    pub fn merge_nodes(&self, a: usize, b: usize) -> Option<SpqrTree> {
        let i = self.nodes[a]
            .edges
            .iter()
            .position(|e| matches!(e.twin, Some((t, _)) if t == b))?;
        let mut t = self.clone();
        t.merge_in_place(a, i);
        t.compact();
        Some(t)
    }

    /// Fully recomposes the skeletons along twins; returns (u, v, real)
    /// triples which must reproduce the input graph.
    pub fn recompose(&self) -> Vec<(VertexIdx, VertexIdx, EdgeIdx)> {
        let mut t = self.clone();
        loop {
            let mut did = false;
            'outer: for a in 0..t.nodes.len() {
                if t.nodes[a].edges.is_empty() {
                    continue;
                }
                for i in 0..t.nodes[a].edges.len() {
                    if let Some((b, _)) = t.nodes[a].edges[i].twin {
                        if a != b {
                            t.merge_in_place(a, i);
                            did = true;
                            break 'outer;
                        }
                    }
                }
            }
            if !did {
                break;
            }
        }
        t.compact();
        assert_eq!(t.nodes.len(), 1, "recomposition yields one skeleton");
        t.nodes[0]
            .edges
            .iter()
            .map(|e| (e.u, e.v, e.real.expect("only real edges remain")))
            .collect()
    }

    /// Structural invariants plus recomposition against the source graph.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        for (n, node) in self.nodes.iter().enumerate() {
            let vs = node.vertices();
            match node.kind {
                SpqrKind::P => {
                    if vs.len() != 2 || node.edges.len() < 3 {
                        return Err(format!("P-node {n} malformed"));
                    }
                }
                SpqrKind::S => {
                    let ok = vs.iter().all(|&v| node.edges_at(v).len() == 2)
                        && node.edges.len() == vs.len()
                        && node.edges.len() >= 3;
                    if !ok {
                        return Err(format!("S-node {n} is not a cycle"));
                    }
                }
                SpqrKind::Q => {
                    if node.edges.len() > 2 {
                        return Err(format!("Q-node {n} too large"));
                    }
                }
                SpqrKind::R => {
                    let (sub, _, _) = skeleton_graph(node);
                    if !sub.is_triconnected() {
                        return Err(format!("R-node {n} skeleton not triconnected"));
                    }
                }
            }
            for (i, e) in node.edges.iter().enumerate() {
                match (e.real, e.twin) {
                    (Some(_), None) | (None, Some(_)) => {}
                    _ => return Err(format!("edge {i} of node {n} must be real xor virtual")),
                }
                if let Some((t, j)) = e.twin {
                    if self.nodes[t].edges[j].twin != Some((n, i)) {
                        return Err(format!("twin of ({n},{i}) does not point back"));
                    }
                    if self.nodes[t].kind == node.kind
                        && matches!(node.kind, SpqrKind::S | SpqrKind::P)
                    {
                        return Err(format!("adjacent {:?}-{:?} nodes", node.kind, node.kind));
                    }
                }
            }
        }
        let mut got: Vec<(VertexIdx, VertexIdx, EdgeIdx)> = self
            .recompose()
            .into_iter()
            .map(|(u, v, e)| (u.min(v), u.max(v), e))
            .collect();
        got.sort();
        let mut want: Vec<(VertexIdx, VertexIdx, EdgeIdx)> = g
            .edges()
            .map(|e| {
                let (u, v) = g.ends(e);
                (u.min(v), u.max(v), e)
            })
            .collect();
        want.sort();
        if got != want {
            return Err("recomposition does not reproduce the graph".into());
        }
        Ok(())
    }

    /// Rotation system of the whole graph from per-skeleton embeddings.
    /// `p_orders` overrides P-node child orders (edge indices read at the
    /// lower-indexed pole); `r_flips` mirrors chosen R-skeletons.
    pub fn compose_embedding(
        &self,
        g: &Graph,
        p_orders: &HashMap<usize, Vec<usize>>,
        r_flips: &HashMap<usize, bool>,
    ) -> Option<RotationSystem> {
        let mut rot: Vec<HashMap<VertexIdx, Vec<usize>>> = Vec::with_capacity(self.nodes.len());
        for (n, node) in self.nodes.iter().enumerate() {
            let mut m: HashMap<VertexIdx, Vec<usize>> = HashMap::new();
            match node.kind {
                SpqrKind::Q | SpqrKind::S => {
                    for v in node.vertices() {
                        m.insert(v, node.edges_at(v));
                    }
                }
                SpqrKind::P => {
                    let vs = node.vertices();
                    let (u, v) = (vs[0], vs[1]);
                    let order = p_orders
                        .get(&n)
                        .cloned()
                        .unwrap_or_else(|| (0..node.edges.len()).collect());
                    let mut rev = order.clone();
                    rev.reverse();
                    m.insert(u, order);
                    m.insert(v, rev);
                }
                SpqrKind::R => {
                    let (sub, vmap, emap) = skeleton_graph(node);
                    let rs = planar_embedding(&sub).ok()?;
                    let flip = r_flips.get(&n).copied().unwrap_or(false);
                    for (local, &global) in vmap.iter().enumerate() {
                        let mut order: Vec<usize> = rs.rotations[local]
                            .iter()
                            .map(|d| emap[d.edge as usize])
                            .collect();
                        if flip {
                            order.reverse();
                        }
                        m.insert(global, order);
                    }
                }
            }
            rot.push(m);
        }
        // BFS over the tree; each vertex is owned by the node nearest root
        let root = 0usize;
        let mut seen = vec![false; self.nodes.len()];
        let mut owner: HashMap<VertexIdx, usize> = HashMap::new();
        let mut queue = std::collections::VecDeque::from([root]);
        seen[root] = true;
        while let Some(n) = queue.pop_front() {
            for v in self.nodes[n].vertices() {
                owner.entry(v).or_insert(n);
            }
            for e in &self.nodes[n].edges {
                if let Some((t, _)) = e.twin {
                    if !seen[t] {
                        seen[t] = true;
                        queue.push_back(t);
                    }
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return None;
        }
        let mut rs = RotationSystem::empty(g.n());
        rs.edge_ends = g.edges().map(|e| g.ends(e)).collect();
        for v in g.vertices() {
            let Some(&n) = owner.get(&v) else { continue };
            let mut out = Vec::with_capacity(g.degree(v));
            self.fan(&rot, n, v, None, g, &mut out);
            rs.rotations[v as usize] = out;
        }
        Some(rs)
    }

    /// Appends the real darts at `v` contributed by node `n`, splicing child
    /// components in place of virtual edges; `skip` is the edge toward the
    /// parent side.
    fn fan(
        &self,
        rot: &[HashMap<VertexIdx, Vec<usize>>],
        n: usize,
        v: VertexIdx,
        skip: Option<usize>,
        g: &Graph,
        out: &mut Vec<Dart>,
    ) {
        let order = &rot[n][&v];
        let k = order.len();
        let start = match skip {
            Some(s) => order.iter().position(|&i| i == s).expect("skip edge at vertex") + 1,
            None => 0,
        };
        for off in 0..k {
            let i = order[(start + off) % k];
            if Some(i) == skip {
                continue;
            }
            let e = &self.nodes[n].edges[i];
            match (e.real, e.twin) {
                (Some(r), _) => {
                    let (t, _) = g.ends(r);
                    out.push(Dart::new(r, if t == v { 0 } else { 1 }));
                }
                (None, Some((t, j))) => {
                    self.fan(rot, t, v, Some(j), g, out);
                }
                _ => unreachable!(),
            }
        }
    }
}

/// A skeleton as a standalone simple [`Graph`] with vertex and edge maps.
pub fn skeleton_graph(node: &SpqrNode) -> (Graph, Vec<VertexIdx>, Vec<usize>) {
    let mut g = Graph::new();
    let vs = node.vertices();
    let mut local: HashMap<VertexIdx, VertexIdx> = HashMap::new();
    for &v in &vs {
        let li = g.add_vertex(format!("s{v}")).unwrap();
        local.insert(v, li);
    }
    let mut emap = Vec::new();
    for (i, e) in node.edges.iter().enumerate() {
        g.add_edge(format!("k{i}"), local[&e.u], local[&e.v]).expect("skeleton simple");
        emap.push(i);
    }
    (g, vs, emap)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn k4() -> Graph {
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
        g
    }

    fn theta() -> Graph {
        let mut g = Graph::new();
        for i in 0..5 {
            g.add_vertex(format!("{i}")).unwrap();
        }
        g.add_edge("a1", 0, 2).unwrap();
        g.add_edge("a2", 2, 1).unwrap();
        g.add_edge("b1", 0, 3).unwrap();
        g.add_edge("b2", 3, 1).unwrap();
        g.add_edge("c1", 0, 4).unwrap();
        g.add_edge("c2", 4, 1).unwrap();
        g
    }

    #[test]
    fn cycle_gives_single_s_node() {
        let g = cycle(5);
        let t = SpqrTree::build(&g).unwrap();
        t.validate(&g).unwrap();
        let s_nodes: Vec<_> = t.nodes.iter().filter(|n| n.kind == SpqrKind::S).collect();
        assert_eq!(s_nodes.len(), 1);
        assert_eq!(s_nodes[0].edges.len(), 5);
        assert_eq!(t.nodes.iter().filter(|n| n.kind == SpqrKind::Q).count(), 5);
    }

    #[test]
    fn theta_gives_one_p_node() {
        let g = theta();
        let t = SpqrTree::build(&g).unwrap();
        t.validate(&g).unwrap();
        let p: Vec<_> = t.nodes.iter().filter(|n| n.kind == SpqrKind::P).collect();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].edges.len(), 3);
        assert_eq!(t.nodes.iter().filter(|n| n.kind == SpqrKind::S).count(), 3);
    }

    #[test]
    fn k4_is_a_single_r_node() {
        let g = k4();
        let t = SpqrTree::build(&g).unwrap();
        t.validate(&g).unwrap();
        let r: Vec<_> = t.nodes.iter().filter(|n| n.kind == SpqrKind::R).collect();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].edges.len(), 6);
    }

    #[test]
    fn single_edge_is_a_lone_q_node() {
        let mut g = Graph::new();
        g.add_vertex("a").unwrap();
        g.add_vertex("b").unwrap();
        g.add_edge("e", 0, 1).unwrap();
        let t = SpqrTree::build(&g).unwrap();
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.nodes[0].kind, SpqrKind::Q);
    }

    #[test]
    fn not_biconnected_is_rejected() {
        let mut g = Graph::new();
        for i in 0..3 {
            g.add_vertex(format!("{i}")).unwrap();
        }
        g.add_edge("a", 0, 1).unwrap();
        g.add_edge("b", 1, 2).unwrap();
        assert_eq!(SpqrTree::build(&g).unwrap_err(), SpqrError::NotBiconnected);
    }

    #[test]
    fn distribution_vectors_on_theta() {
        let g = theta();
        let t = SpqrTree::build(&g).unwrap();
        let p = (0..t.node_count()).find(|&n| t.nodes[n].kind == SpqrKind::P).unwrap();
        let pole = g.vertex("0").unwrap();
        assert_eq!(t.distribution_vector(p, pole), vec![1, 1, 1]);
        let s = (0..t.node_count()).find(|&n| t.nodes[n].kind == SpqrKind::S).unwrap();
        let d = t.distribution_vector(s, pole);
        assert_eq!(d.iter().sum::<usize>(), 3);
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn merge_nodes_unions_skeletons() {
        let g = theta();
        let t = SpqrTree::build(&g).unwrap();
        let p = (0..t.node_count()).find(|&n| t.nodes[n].kind == SpqrKind::P).unwrap();
        let q = t.neighbors(p)[0];
        let merged = t.merge_nodes(p, q).unwrap();
        assert_eq!(merged.node_count(), t.node_count() - 1);
    }

    #[test]
    fn recomposition_reproduces_graph() {
        for g in [cycle(4), theta(), k4()] {
            let t = SpqrTree::build(&g).unwrap();
            let mut got: Vec<(u32, u32)> =
                t.recompose().into_iter().map(|(u, v, _)| (u.min(v), u.max(v))).collect();
            got.sort();
            let mut want: Vec<(u32, u32)> = g
                .edges()
                .map(|e| {
                    let (u, v) = g.ends(e);
                    (u.min(v), u.max(v))
                })
                .collect();
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn composed_embeddings_pass_euler_check() {
        for g in [cycle(6), theta(), k4()] {
            let t = SpqrTree::build(&g).unwrap();
            let rs = t
                .compose_embedding(&g, &HashMap::new(), &HashMap::new())
                .expect("planar skeletons");
            rs.validate().unwrap();
            assert!(rs.euler_check(), "euler check failed");
        }
    }

    /// Arbitrary P permutations and R flips still compose to genus-0
    /// embeddings on random planar biconnected graphs.
    #[test]
    fn random_compositions_stay_planar() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x5f3759df);
        fn gen_graph(rng: &mut StdRng) -> Graph {
            // cycle plus non-crossing chords in convex position
            let n = rng.gen_range(4..12u32);
            let mut g = Graph::new();
            for i in 0..n {
                g.add_vertex(format!("{i}")).unwrap();
            }
            for i in 0..n {
                g.add_edge(format!("c{i}"), i, (i + 1) % n).unwrap();
            }
            let mut chords: Vec<(u32, u32)> = Vec::new();
            for _ in 0..rng.gen_range(0..5) {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a == b || (a + 1) % n == b || (b + 1) % n == a {
                    continue;
                }
                let (lo, hi) = (a.min(b), a.max(b));
                let ok = chords.iter().all(|&(c, d)| {
                    let ic = c > lo && c < hi;
                    let id = d > lo && d < hi;
                    ic == id
                });
                if ok && !chords.contains(&(lo, hi)) {
                    chords.push((lo, hi));
                    g.add_edge(format!("d{lo}-{hi}"), lo, hi).unwrap();
                }
            }
            g
        }
        for trial in 0..80 {
            let g = gen_graph(&mut rng);
            let t = SpqrTree::build(&g).unwrap();
            t.validate(&g).unwrap();
            let mut p_orders = HashMap::new();
            let mut r_flips = HashMap::new();
            for n in 0..t.node_count() {
                match t.nodes[n].kind {
                    SpqrKind::P => {
                        let mut order: Vec<usize> = (0..t.nodes[n].edges.len()).collect();
                        for i in (1..order.len()).rev() {
                            let j = rng.gen_range(0..=i);
                            order.swap(i, j);
                        }
                        p_orders.insert(n, order);
                    }
                    SpqrKind::R => {
                        r_flips.insert(n, rng.gen_bool(0.5));
                    }
                    _ => {}
                }
            }
            let rs = t.compose_embedding(&g, &p_orders, &r_flips).expect("composes");
            rs.validate().unwrap();
            assert!(rs.euler_check(), "trial {trial} lost genus 0");
        }
    }
}
