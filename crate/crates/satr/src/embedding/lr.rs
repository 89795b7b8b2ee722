//! Left-right planarity test with combinatorial-embedding extraction,
//! implemented iteratively so deep graphs do not blow the stack.

use crate::graph::{Graph, VertexIdx};

use super::rotation::{Dart, RotationSystem};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Interval {
    low: Option<Dart>,
    high: Option<Dart>,
}

impl Interval {
    fn empty_iv() -> Self {
        Interval { low: None, high: None }
    }

    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Debug, Clone, Copy)]
struct ConflictPair {
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn new() -> Self {
        ConflictPair { left: Interval::empty_iv(), right: Interval::empty_iv() }
    }

    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct Lr<'g> {
    g: &'g Graph,
    height: Vec<u32>,
    parent_edge: Vec<Option<Dart>>,
    /// DFS orientation of each edge: the dart sitting at the source vertex.
    orient: Vec<Option<Dart>>,
    lowpt: Vec<u32>,
    lowpt2: Vec<u32>,
    nesting_depth: Vec<i64>,
    ordered_adjs: Vec<Vec<Dart>>,
    roots: Vec<VertexIdx>,
    // testing state
    s: Vec<ConflictPair>,
    stack_bottom: Vec<usize>,
    lowpt_edge: Vec<Option<Dart>>,
    refe: Vec<Option<Dart>>,
    side: Vec<i8>,
}

impl<'g> Lr<'g> {
    fn di(d: Dart) -> usize {
        d.edge as usize * 2 + d.end as usize
    }

    fn source(&self, d: Dart) -> VertexIdx {
        let (t, h) = self.g.ends(d.edge);
        if d.end == 0 {
            t
        } else {
            h
        }
    }

    fn target(&self, d: Dart) -> VertexIdx {
        self.source(d.twin())
    }

    /// Dart of edge `e` whose source is `v`.
    fn dart_from(&self, e: u32, v: VertexIdx) -> Dart {
        let (t, _) = self.g.ends(e);
        Dart::new(e, if t == v { 0 } else { 1 })
    }

    fn new(g: &'g Graph) -> Self {
        let n = g.n();
        let m = g.m();
        Lr {
            g,
            height: vec![NONE; n],
            parent_edge: vec![None; n],
            orient: vec![None; m],
            lowpt: vec![0; 2 * m],
            lowpt2: vec![0; 2 * m],
            nesting_depth: vec![0; 2 * m],
            ordered_adjs: vec![Vec::new(); n],
            roots: Vec::new(),
            s: Vec::new(),
            stack_bottom: vec![0; 2 * m],
            lowpt_edge: vec![None; 2 * m],
            refe: vec![None; 2 * m],
            side: vec![1; 2 * m],
        }
    }

    fn dfs_orientation(&mut self, root: VertexIdx) {
        self.height[root as usize] = 0;
        let mut stack: Vec<(VertexIdx, usize)> = vec![(root, 0)];
        while let Some(&(v, idx)) = stack.last() {
            if idx >= self.g.degree(v) {
                stack.pop();
                // the tree edge into v is now fully explored
                if let Some(vw) = self.parent_edge[v as usize] {
                    let u = self.source(vw);
                    let i = Self::di(vw);
                    self.nesting_depth[i] = 2 * self.lowpt[i] as i64;
                    if self.lowpt2[i] < self.height[u as usize] {
                        self.nesting_depth[i] += 1;
                    }
                    if let Some(e) = self.parent_edge[u as usize] {
                        self.update_parent_lowpts(vw, e);
                    }
                }
                continue;
            }
            stack.last_mut().unwrap().1 += 1;
            let (e, w) = self.g.neighbors(v)[idx];
            if self.orient[e as usize].is_some() {
                continue;
            }
            let vw = self.dart_from(e, v);
            self.orient[e as usize] = Some(vw);
            let i = Self::di(vw);
            self.lowpt[i] = self.height[v as usize];
            self.lowpt2[i] = self.height[v as usize];
            if self.height[w as usize] == NONE {
                // tree edge: descend; finishing work happens at pop
                self.parent_edge[w as usize] = Some(vw);
                self.height[w as usize] = self.height[v as usize] + 1;
                stack.push((w, 0));
            } else {
                // back edge
                self.lowpt[i] = self.height[w as usize];
                self.nesting_depth[i] = 2 * self.lowpt[i] as i64;
                if self.lowpt2[i] < self.height[v as usize] {
                    self.nesting_depth[i] += 1;
                }
                if let Some(e) = self.parent_edge[v as usize] {
                    self.update_parent_lowpts(vw, e);
                }
            }
        }
    }

    fn update_parent_lowpts(&mut self, vw: Dart, e: Dart) {
        let i = Self::di(vw);
        let pe = Self::di(e);
        if self.lowpt[i] < self.lowpt[pe] {
            self.lowpt2[pe] = self.lowpt[pe].min(self.lowpt2[i]);
            self.lowpt[pe] = self.lowpt[i];
        } else if self.lowpt[i] > self.lowpt[pe] {
            self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt[i]);
        } else {
            self.lowpt2[pe] = self.lowpt2[pe].min(self.lowpt2[i]);
        }
    }

    fn conflicting(&self, iv: &Interval, b: Dart) -> bool {
        !iv.is_empty() && self.lowpt[Self::di(iv.high.unwrap())] > self.lowpt[Self::di(b)]
    }

    fn lowest(&self, p: &ConflictPair) -> u32 {
        if p.left.is_empty() {
            return self.lowpt[Self::di(p.right.low.unwrap())];
        }
        if p.right.is_empty() {
            return self.lowpt[Self::di(p.left.low.unwrap())];
        }
        self.lowpt[Self::di(p.left.low.unwrap())].min(self.lowpt[Self::di(p.right.low.unwrap())])
    }

    fn add_constraints(&mut self, ei: Dart, e: Dart) -> bool {
        let mut p = ConflictPair::new();
        // merge return edges of ei into p.right
        loop {
            let mut q = match self.s.pop() {
                Some(q) => q,
                None => break,
            };
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            if self.lowpt[Self::di(q.right.low.unwrap())] > self.lowpt[Self::di(e)] {
                if p.right.is_empty() {
                    p.right.high = q.right.high;
                } else {
                    self.refe[Self::di(p.right.low.unwrap())] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.refe[Self::di(q.right.low.unwrap())] = self.lowpt_edge[Self::di(e)];
            }
            if self.s.len() == self.stack_bottom[Self::di(ei)] {
                break;
            }
        }
        // merge conflicting return edges of e_1 .. e_{i-1} into p.left
        while let Some(top) = self.s.last() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.s.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            // merge interval below lowpt(ei) into p.right
            if let Some(l) = p.right.low {
                self.refe[Self::di(l)] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left.high = q.left.high;
            } else {
                self.refe[Self::di(p.left.low.unwrap())] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.s.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: Dart) {
        let u = self.source(e);
        // drop entire conflict pairs returning to the parent
        while let Some(top) = self.s.last() {
            if self.lowest(top) != self.height[u as usize] {
                break;
            }
            let p = self.s.pop().unwrap();
            if let Some(l) = p.left.low {
                self.side[Self::di(l)] = -1;
            }
        }
        if let Some(mut p) = self.s.pop() {
            // trim left interval
            while let Some(h) = p.left.high {
                if self.target(h) == u {
                    p.left.high = self.refe[Self::di(h)];
                } else {
                    break;
                }
            }
            if p.left.high.is_none() && p.left.low.is_some() {
                let l = p.left.low.unwrap();
                self.refe[Self::di(l)] = p.right.low;
                self.side[Self::di(l)] = -1;
                p.left.low = None;
            }
            // trim right interval
            while let Some(h) = p.right.high {
                if self.target(h) == u {
                    p.right.high = self.refe[Self::di(h)];
                } else {
                    break;
                }
            }
            if p.right.high.is_none() && p.right.low.is_some() {
                let l = p.right.low.unwrap();
                self.refe[Self::di(l)] = p.left.low;
                self.side[Self::di(l)] = -1;
                p.right.low = None;
            }
            self.s.push(p);
        }
    }

    fn dfs_testing(&mut self, root: VertexIdx) -> bool {
        // frame: (vertex, adjacency index, waiting on a child at that index)
        let mut stack: Vec<(VertexIdx, usize, bool)> = vec![(root, 0, false)];
        while let Some(&(v, idx, pending)) = stack.last() {
            let adjs = &self.ordered_adjs[v as usize];
            if idx < adjs.len() {
                let ei = adjs[idx];
                if !pending {
                    self.stack_bottom[Self::di(ei)] = self.s.len();
                    let w = self.target(ei);
                    if self.parent_edge[w as usize] == Some(ei) {
                        stack.last_mut().unwrap().2 = true;
                        stack.push((w, 0, false));
                        continue;
                    }
                    self.lowpt_edge[Self::di(ei)] = Some(ei);
                    let mut p = ConflictPair::new();
                    p.right = Interval { low: Some(ei), high: Some(ei) };
                    self.s.push(p);
                }
                stack.last_mut().unwrap().2 = false;
                stack.last_mut().unwrap().1 += 1;
                if self.lowpt[Self::di(ei)] < self.height[v as usize] {
                    if let Some(e) = self.parent_edge[v as usize] {
                        if idx == 0 {
                            self.lowpt_edge[Self::di(e)] = self.lowpt_edge[Self::di(ei)];
                        } else if !self.add_constraints(ei, e) {
                            return false;
                        }
                    }
                }
            } else {
                stack.pop();
                if let Some(e) = self.parent_edge[v as usize] {
                    let u = self.source(e);
                    self.remove_back_edges(e);
                    if self.lowpt[Self::di(e)] < self.height[u as usize] {
                        let top = self.s.last().expect("return edge needs a conflict pair");
                        let hl = top.left.high;
                        let hr = top.right.high;
                        let chosen = match (hl, hr) {
                            (Some(hl), None) => Some(hl),
                            (Some(hl), Some(hr))
                                if self.lowpt[Self::di(hl)] > self.lowpt[Self::di(hr)] =>
                            {
                                Some(hl)
                            }
                            (_, hr) => hr,
                        };
                        self.refe[Self::di(e)] = chosen;
                    }
                }
            }
        }
        true
    }

    fn resolve_sign(&mut self, e: Dart) -> i8 {
        let mut chain = vec![e];
        while let Some(r) = self.refe[Self::di(*chain.last().unwrap())] {
            chain.push(r);
        }
        for k in (0..chain.len() - 1).rev() {
            let x = Self::di(chain[k]);
            self.side[x] *= self.side[Self::di(chain[k + 1])];
            self.refe[x] = None;
        }
        self.side[Self::di(e)]
    }

    fn build_embedding(&mut self) -> RotationSystem {
        let m = self.g.m();
        let n = self.g.n();
        // resolve signs and re-sort by signed nesting depth
        for v in 0..n {
            let mut adjs = std::mem::take(&mut self.ordered_adjs[v]);
            for &d in &adjs {
                let s = self.resolve_sign(d) as i64;
                self.nesting_depth[Self::di(d)] *= s;
            }
            adjs.sort_by_key(|&d| self.nesting_depth[Self::di(d)]);
            self.ordered_adjs[v] = adjs;
        }

        // circular doubly-linked rotations per vertex, clockwise direction
        let mut cw_next: Vec<u32> = vec![NONE; 2 * m];
        let mut cw_prev: Vec<u32> = vec![NONE; 2 * m];
        let mut first: Vec<u32> = vec![NONE; n];

        fn insert_after(cw_next: &mut [u32], cw_prev: &mut [u32], refd: usize, nd: usize) {
            let nx = cw_next[refd];
            cw_next[refd] = nd as u32;
            cw_prev[nd] = refd as u32;
            cw_next[nd] = nx;
            cw_prev[nx as usize] = nd as u32;
        }
        fn insert_single(
            cw_next: &mut [u32],
            cw_prev: &mut [u32],
            first: &mut [u32],
            v: usize,
            nd: usize,
        ) {
            first[v] = nd as u32;
            cw_next[nd] = nd as u32;
            cw_prev[nd] = nd as u32;
        }

        // initial placement: outgoing darts in nesting order
        for v in 0..n {
            let mut prev: Option<usize> = None;
            for &d in &self.ordered_adjs[v] {
                let nd = Self::di(d);
                match prev {
                    None => insert_single(&mut cw_next, &mut cw_prev, &mut first, v, nd),
                    Some(p) => insert_after(&mut cw_next, &mut cw_prev, p, nd),
                }
                prev = Some(nd);
            }
        }

        // completion pass: insert the incoming dart of every edge; the refs
        // at a vertex anchor around its latest tree-child dart
        let mut left_ref: Vec<u32> = vec![NONE; n];
        let mut right_ref: Vec<u32> = vec![NONE; n];
        let roots = self.roots.clone();
        for root in roots {
            let mut stack: Vec<(VertexIdx, usize)> = vec![(root, 0)];
            while let Some(&(v, idx)) = stack.last() {
                if idx >= self.ordered_adjs[v as usize].len() {
                    stack.pop();
                    continue;
                }
                stack.last_mut().unwrap().1 += 1;
                let ei = self.ordered_adjs[v as usize][idx];
                let w = self.target(ei);
                let incoming = Self::di(ei.twin());
                if self.parent_edge[w as usize] == Some(ei) {
                    // tree edge: incoming dart becomes the new first at w
                    let f = first[w as usize];
                    if f == NONE {
                        insert_single(&mut cw_next, &mut cw_prev, &mut first, w as usize, incoming);
                    } else {
                        let before = cw_prev[f as usize] as usize;
                        insert_after(&mut cw_next, &mut cw_prev, before, incoming);
                        first[w as usize] = incoming as u32;
                    }
                    left_ref[v as usize] = Self::di(ei) as u32;
                    right_ref[v as usize] = Self::di(ei) as u32;
                    stack.push((w, 0));
                } else {
                    // back edge
                    if self.side[Self::di(ei)] == 1 {
                        insert_after(&mut cw_next, &mut cw_prev, right_ref[w as usize] as usize, incoming);
                    } else {
                        let lr = left_ref[w as usize] as usize;
                        let before = cw_prev[lr] as usize;
                        insert_after(&mut cw_next, &mut cw_prev, before, incoming);
                        if first[w as usize] == lr as u32 {
                            first[w as usize] = incoming as u32;
                        }
                        left_ref[w as usize] = incoming as u32;
                    }
                }
            }
        }

        let mut rs = RotationSystem::empty(n);
        rs.edge_ends = (0..m as u32).map(|e| self.g.ends(e)).collect();
        for v in 0..n {
            let f = first[v];
            if f == NONE {
                continue;
            }
            let mut rot = Vec::with_capacity(self.g.degree(v as VertexIdx));
            let mut d = f as usize;
            loop {
                rot.push(Dart::new((d / 2) as u32, (d % 2) as u8));
                d = cw_next[d] as usize;
                if d == f as usize {
                    break;
                }
            }
            rs.rotations[v] = rot;
        }
        rs
    }

    fn run(mut self, want_embedding: bool) -> Option<RotationSystem> {
        let n = self.g.n();
        let m = self.g.m();
        if n > 2 && m > 3 * n - 6 {
            return None;
        }
        for v in 0..n as VertexIdx {
            if self.height[v as usize] == NONE {
                self.roots.push(v);
                self.dfs_orientation(v);
            }
        }
        for e in 0..m as u32 {
            let d = self.orient[e as usize].expect("every edge oriented");
            let v = self.source(d) as usize;
            self.ordered_adjs[v].push(d);
        }
        for v in 0..n {
            self.ordered_adjs[v].sort_by_key(|&d| self.nesting_depth[Self::di(d)]);
        }
        let roots = self.roots.clone();
        for root in roots {
            if !self.dfs_testing(root) {
                return None;
            }
        }
        if want_embedding {
            Some(self.build_embedding())
        } else {
            Some(RotationSystem::empty(0))
        }
    }
}

/// Left-right planarity test.
pub fn lr_is_planar(g: &Graph) -> bool {
    Lr::new(g).run(false).is_some()
}

/// Planar embedding via the left-right algorithm; `None` when nonplanar.
pub fn lr_embedding(g: &Graph) -> Option<RotationSystem> {
    Lr::new(g).run(true)
}
