//! Unrooted PQ-trees over circular orders, with optional synchronized
//! Q-node pairs (two Q-nodes whose reversals are tied together).
//!
//! Trees here stay small (the solver never labels a vertex with more than
//! six darts), so the set-level operations — restriction, consecutivity,
//! compatibility — work by enumeration under a cap, re-synthesizing an
//! exact tree from the filtered order set and verifying the result by
//! re-enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use thiserror::Error;

pub const DEFAULT_ORDER_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    P,
    Q,
}

#[derive(Debug, Clone)]
struct Node<L> {
    kind: NodeKind,
    /// Neighbor list; for Q-nodes the order is the reference cyclic order.
    adj: Vec<usize>,
    label: Option<L>,
}

/// An unrooted PQ-tree; leaves carry labels, P-nodes permute freely,
/// Q-nodes fix their cyclic order up to reversal, and `sync` pairs of
/// Q-nodes must reverse together.
#[derive(Debug, Clone)]
pub struct PQTree<L> {
    nodes: Vec<Node<L>>,
    sync: Vec<(usize, usize)>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PQError {
    #[error("no represented order satisfies the constraint")]
    Infeasible,
    #[error("order cap exceeded while enumerating")]
    CapExceeded,
    #[error("order set is not representable as a (synchronized) PQ-tree")]
    NotRepresentable,
    #[error("invalid tree structure: {0}")]
    Structure(String),
}

impl<L: Clone + Ord + Debug> PQTree<L> {
    /// Single P-node over all labels: every circular order.
    pub fn universal(labels: impl IntoIterator<Item = L>) -> Self {
        let labels: Vec<L> = labels.into_iter().collect();
        assert!(!labels.is_empty(), "universal tree needs at least one label");
        let mut nodes = Vec::new();
        if labels.len() <= 2 {
            let k = labels.len();
            for (i, l) in labels.into_iter().enumerate() {
                let adj = if k == 2 { vec![1 - i] } else { Vec::new() };
                nodes.push(Node { kind: NodeKind::Leaf, adj, label: Some(l) });
            }
            return PQTree { nodes, sync: Vec::new() };
        }
        let center = labels.len();
        for l in &labels {
            nodes.push(Node { kind: NodeKind::Leaf, adj: vec![center], label: Some(l.clone()) });
        }
        nodes.push(Node { kind: NodeKind::P, adj: (0..labels.len()).collect(), label: None });
        PQTree { nodes, sync: Vec::new() }
    }

    pub fn labels(&self) -> Vec<L> {
        let mut out: Vec<L> = self.nodes.iter().filter_map(|n| n.label.clone()).collect();
        out.sort();
        out
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Leaf).count()
    }

    pub fn has_sync(&self) -> bool {
        !self.sync.is_empty()
    }

    fn check(&self) -> Result<(), PQError> {
        for (i, n) in self.nodes.iter().enumerate() {
            match n.kind {
                NodeKind::Leaf => {
                    if n.label.is_none() {
                        return Err(PQError::Structure(format!("leaf {i} unlabeled")));
                    }
                    if n.adj.len() > 1 {
                        return Err(PQError::Structure(format!("leaf {i} has degree > 1")));
                    }
                }
                NodeKind::P | NodeKind::Q => {
                    if n.adj.len() < 3 {
                        return Err(PQError::Structure(format!(
                            "internal node {i} has degree {} < 3",
                            n.adj.len()
                        )));
                    }
                }
            }
        }
        for &(a, b) in &self.sync {
            if self.nodes[a].kind != NodeKind::Q || self.nodes[b].kind != NodeKind::Q {
                return Err(PQError::Structure("sync link on non-Q node".into()));
            }
        }
        Ok(())
    }

    /// Every represented circular order (canonicalized: smallest label
    /// first; reversal not quotiented), or `CapExceeded`.
    pub fn enumerate_orders(&self, cap: usize) -> Result<BTreeSet<Vec<L>>, PQError> {
        Ok(self.enumerate_tagged(cap)?.into_keys().collect())
    }

    /// Like [`enumerate_orders`](Self::enumerate_orders) but each order
    /// carries one witness assignment of Q-node orientations (true =
    /// reference order). Sync links are already enforced.
    pub fn enumerate_tagged(
        &self,
        cap: usize,
    ) -> Result<BTreeMap<Vec<L>, BTreeMap<usize, bool>>, PQError> {
        let nleaves = self.leaf_count();
        if nleaves == 0 {
            return Ok(BTreeMap::new());
        }
        if nleaves <= 2 {
            return Ok(BTreeMap::from([(self.labels(), BTreeMap::new())]));
        }
        let root = self
            .nodes
            .iter()
            .position(|n| n.kind != NodeKind::Leaf)
            .ok_or_else(|| PQError::Structure("no internal node".into()))?;
        let raw = self.gen(root, usize::MAX, cap)?;
        let mut by_order: BTreeMap<Vec<L>, BTreeMap<usize, bool>> = BTreeMap::new();
        'outer: for (order, orients) in raw {
            for &(a, b) in &self.sync {
                if orients.get(&a) != orients.get(&b) {
                    continue 'outer;
                }
            }
            by_order.entry(canonicalize(&order)).or_insert(orients);
        }
        Ok(by_order)
    }

    fn gen(
        &self,
        node: usize,
        parent: usize,
        cap: usize,
    ) -> Result<Vec<(Vec<L>, BTreeMap<usize, bool>)>, PQError> {
        let n = &self.nodes[node];
        if n.kind == NodeKind::Leaf {
            return Ok(vec![(vec![n.label.clone().expect("leaf labeled")], BTreeMap::new())]);
        }
        let arrangements: Vec<(Vec<usize>, Option<bool>)> = if parent == usize::MAX {
            match n.kind {
                NodeKind::P => permutations(&n.adj).into_iter().map(|p| (p, None)).collect(),
                NodeKind::Q => {
                    let fwd = n.adj.clone();
                    let mut rev = n.adj.clone();
                    rev.reverse();
                    vec![(fwd, Some(true)), (rev, Some(false))]
                }
                NodeKind::Leaf => unreachable!(),
            }
        } else {
            let children: Vec<usize> = n.adj.iter().copied().filter(|&c| c != parent).collect();
            match n.kind {
                NodeKind::P => permutations(&children).into_iter().map(|p| (p, None)).collect(),
                NodeKind::Q => {
                    let pi = n.adj.iter().position(|&c| c == parent).unwrap();
                    let k = n.adj.len();
                    let fwd: Vec<usize> = (1..k).map(|i| n.adj[(pi + i) % k]).collect();
                    let mut rev = fwd.clone();
                    rev.reverse();
                    vec![(fwd, Some(true)), (rev, Some(false))]
                }
                NodeKind::Leaf => unreachable!(),
            }
        };
        let mut results = Vec::new();
        for (child_seq, orient) in arrangements {
            let mut partial: Vec<(Vec<L>, BTreeMap<usize, bool>)> =
                vec![(Vec::new(), BTreeMap::new())];
            if let Some(o) = orient {
                partial[0].1.insert(node, o);
            }
            for c in child_seq {
                let sub = self.gen(c, node, cap)?;
                let mut next = Vec::new();
                for (acc_order, acc_tags) in &partial {
                    for (sub_order, sub_tags) in &sub {
                        let mut o = acc_order.clone();
                        o.extend(sub_order.iter().cloned());
                        let mut t = acc_tags.clone();
                        t.extend(sub_tags.iter().map(|(&k, &v)| (k, v)));
                        next.push((o, t));
                        if next.len() > cap {
                            return Err(PQError::CapExceeded);
                        }
                    }
                }
                partial = next;
            }
            results.extend(partial);
            if results.len() > cap {
                return Err(PQError::CapExceeded);
            }
        }
        Ok(results)
    }

    /// Membership test for one circular order.
    pub fn is_compatible(&self, order: &[L]) -> bool {
        let mut sorted = order.to_vec();
        sorted.sort();
        if sorted != self.labels() {
            return false;
        }
        match self.enumerate_orders(DEFAULT_ORDER_CAP) {
            Ok(set) => set.contains(&canonicalize(order)),
            Err(_) => panic!("is_compatible on oversized tree"),
        }
    }

    /// Restricts the tree to represent exactly the orders where `subset`
    /// appears consecutively.
    pub fn apply_consecutivity(&self, subset: &BTreeSet<L>) -> Result<PQTree<L>, PQError> {
        let orders = self.enumerate_orders(DEFAULT_ORDER_CAP)?;
        let filtered: BTreeSet<Vec<L>> =
            orders.into_iter().filter(|o| is_consecutive(o, subset)).collect();
        if filtered.is_empty() {
            return Err(PQError::Infeasible);
        }
        synthesize(&self.labels(), &filtered)
    }

    /// The projection of the represented orders onto `keep`.
    pub fn restrict(&self, keep: &BTreeSet<L>) -> Result<PQTree<L>, PQError> {
        let orders = self.enumerate_orders(DEFAULT_ORDER_CAP)?;
        let projected: BTreeSet<Vec<L>> = orders
            .into_iter()
            .map(|o| canonicalize(&o.into_iter().filter(|l| keep.contains(l)).collect::<Vec<_>>()))
            .collect();
        let labels: Vec<L> = keep.iter().cloned().collect();
        synthesize(&labels, &projected)
    }

    /// Nested S-expression dump: `P(...)` / `Q[...]`, P-node children sorted
    /// by smallest leaf. Sync pairs appended as `~(i=j)`.
    pub fn to_sexpr(&self) -> String {
        if self.leaf_count() == 0 {
            return "()".into();
        }
        let mut ls = self.labels();
        ls.sort();
        let anchor = self.nodes.iter().position(|n| n.label.as_ref() == Some(&ls[0])).unwrap();
        let root =
            if self.nodes[anchor].adj.is_empty() { anchor } else { self.nodes[anchor].adj[0] };
        let mut s = self.sexpr_of(root, usize::MAX);
        for &(a, b) in &self.sync {
            s.push_str(&format!(" ~({a}={b})"));
        }
        s
    }

    fn min_leaf(&self, node: usize, parent: usize) -> L {
        let n = &self.nodes[node];
        if let Some(l) = &n.label {
            return l.clone();
        }
        n.adj
            .iter()
            .filter(|&&c| c != parent)
            .map(|&c| self.min_leaf(c, node))
            .min()
            .expect("internal node has children")
    }

    fn sexpr_of(&self, node: usize, parent: usize) -> String {
        let n = &self.nodes[node];
        if let Some(l) = &n.label {
            return format!("{l:?}");
        }
        let mut children: Vec<usize> = n.adj.iter().copied().filter(|&c| c != parent).collect();
        match n.kind {
            NodeKind::P => {
                children.sort_by_key(|&c| self.min_leaf(c, node));
                let inner: Vec<String> = children.iter().map(|&c| self.sexpr_of(c, node)).collect();
                format!("P({})", inner.join(" "))
            }
            NodeKind::Q => {
                let inner: Vec<String> = children.iter().map(|&c| self.sexpr_of(c, node)).collect();
                format!("Q[{}]", inner.join(" "))
            }
            NodeKind::Leaf => unreachable!(),
        }
    }
}

/// Rotates a circular order so its smallest element comes first.
pub fn canonicalize<L: Clone + Ord>(order: &[L]) -> Vec<L> {
    crate::embedding::canonical_rotation(order)
}

/// True when `subset` occupies consecutive positions of the circular order.
pub fn is_consecutive<L: Ord>(order: &[L], subset: &BTreeSet<L>) -> bool {
    let n = order.len();
    let k = subset.len();
    if k <= 1 || k >= n {
        return true;
    }
    let inside: Vec<bool> = order.iter().map(|l| subset.contains(l)).collect();
    let boundaries = (0..n).filter(|&i| inside[i] != inside[(i + 1) % n]).count();
    boundaries == 2
}

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

/// Fluent construction of explicit trees (the canned replacement figures).
pub struct TreeBuilder<L> {
    nodes: Vec<Node<L>>,
    sync: Vec<(usize, usize)>,
}

impl<L: Clone + Ord + Debug> Default for TreeBuilder<L> {
    fn default() -> Self {
        Self::new()
    }
}

impl<L: Clone + Ord + Debug> TreeBuilder<L> {
    pub fn new() -> Self {
        TreeBuilder { nodes: Vec::new(), sync: Vec::new() }
    }

    pub fn p(&mut self) -> usize {
        self.nodes.push(Node { kind: NodeKind::P, adj: Vec::new(), label: None });
        self.nodes.len() - 1
    }

    pub fn q(&mut self) -> usize {
        self.nodes.push(Node { kind: NodeKind::Q, adj: Vec::new(), label: None });
        self.nodes.len() - 1
    }

    pub fn leaf(&mut self, label: L) -> usize {
        self.nodes.push(Node { kind: NodeKind::Leaf, adj: Vec::new(), label: Some(label) });
        self.nodes.len() - 1
    }

    /// Appends an edge; insertion order defines Q-node reference orders.
    pub fn attach(&mut self, node: usize, child: usize) {
        self.nodes[node].adj.push(child);
        self.nodes[child].adj.push(node);
    }

    pub fn tie(&mut self, q1: usize, q2: usize) {
        self.sync.push((q1, q2));
    }

    pub fn finish(self) -> Result<PQTree<L>, PQError> {
        let t = PQTree { nodes: self.nodes, sync: self.sync };
        t.check()?;
        Ok(t)
    }
}

/// Rebuilds a (possibly synchronized) PQ-tree representing exactly the given
/// circular-order set, or reports that none exists. The result is verified
/// by re-enumeration before returning.
pub fn synthesize<L: Clone + Ord + Debug>(
    labels: &[L],
    orders: &BTreeSet<Vec<L>>,
) -> Result<PQTree<L>, PQError> {
    if orders.is_empty() {
        return Err(PQError::Infeasible);
    }
    let n = labels.len();
    if n > 16 {
        return Err(PQError::CapExceeded);
    }
    if n <= 2 {
        return Ok(PQTree::universal(labels.to_vec()));
    }
    let plain = synth_plain(labels, orders)?;
    let got = plain.enumerate_orders(DEFAULT_ORDER_CAP)?;
    if &got == orders {
        return Ok(plain);
    }
    if !orders.is_subset(&got) {
        return Err(PQError::NotRepresentable);
    }
    // try a single synchronized pair; degree-3 P-nodes are equivalent to
    // Q-nodes and may be retyped to take part
    let qnodes: Vec<usize> = plain
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, nd)| {
            nd.kind == NodeKind::Q || (nd.kind == NodeKind::P && nd.adj.len() == 3)
        })
        .map(|(i, _)| i)
        .collect();
    for i in 0..qnodes.len() {
        for j in i + 1..qnodes.len() {
            for flip in [false, true] {
                let mut cand = plain.clone();
                cand.nodes[qnodes[i]].kind = NodeKind::Q;
                cand.nodes[qnodes[j]].kind = NodeKind::Q;
                if flip {
                    cand.nodes[qnodes[j]].adj.reverse();
                }
                cand.sync = vec![(qnodes[i], qnodes[j])];
                if let Ok(got) = cand.enumerate_orders(DEFAULT_ORDER_CAP) {
                    if &got == orders {
                        return Ok(cand);
                    }
                }
            }
        }
    }
    Err(PQError::NotRepresentable)
}

/// Plain-tree synthesis: laminar strong blocks plus P/Q typing per node.
fn synth_plain<L: Clone + Ord + Debug>(
    labels: &[L],
    orders: &BTreeSet<Vec<L>>,
) -> Result<PQTree<L>, PQError> {
    let n = labels.len();
    let index: BTreeMap<&L, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let torders: Vec<Vec<usize>> =
        orders.iter().map(|o| o.iter().map(|l| index[l]).collect()).collect();
    let sub = synth_tokens(&(0..n).collect::<Vec<_>>(), &torders.iter().cloned().collect())?;
    // relabel tokens back
    let mut out = PQTree {
        nodes: sub
            .nodes
            .iter()
            .map(|nd| Node {
                kind: nd.kind,
                adj: nd.adj.clone(),
                label: nd.label.map(|t| labels[t].clone()),
            })
            .collect(),
        sync: sub.sync.clone(),
    };
    out.check()?;
    let _ = &mut out;
    Ok(out)
}

/// Token-space synthesis over `labels` (distinct usize tokens).
fn synth_tokens(labels: &[usize], orders: &BTreeSet<Vec<usize>>) -> Result<PQTree<usize>, PQError> {
    let n = labels.len();
    if n <= 2 {
        return Ok(PQTree::universal(labels.to_vec()));
    }
    let pos: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    // blocks as bitmasks over positions, excluding position 0 so each
    // complementary pair is represented once
    let mut blocks: Vec<u32> = Vec::new();
    if n >= 4 {
        for mask in 1u32..(1 << n) {
            let k = mask.count_ones() as usize;
            if k < 2 || k > n - 2 || mask & 1 != 0 {
                continue;
            }
            let ok = orders.iter().all(|o| {
                let inside: Vec<bool> = o.iter().map(|t| mask & (1 << pos[t]) != 0).collect();
                let b = (0..n).filter(|&i| inside[i] != inside[(i + 1) % n]).count();
                b == 2
            });
            if ok {
                blocks.push(mask);
            }
        }
    }
    let full = (1u32 << n) - 1;
    let overlaps = |a: u32, b: u32| -> bool {
        let i = a & b;
        i != 0 && i != a && i != b && (a | b) != full
    };
    let strong: Vec<u32> =
        blocks.iter().copied().filter(|&b| blocks.iter().all(|&c| c == b || !overlaps(b, c))).collect();
    let maximal: Vec<u32> = strong
        .iter()
        .copied()
        .filter(|&b| strong.iter().all(|&c| c == b || (c & b) != b))
        .collect();
    let mut used = 0u32;
    for &b in &maximal {
        if b & used != 0 {
            return Err(PQError::NotRepresentable);
        }
        used |= b;
    }

    let mut builder: TreeBuilder<usize> = TreeBuilder::new();
    let root = builder.p();
    let mut child_repr: Vec<(usize, u32)> = Vec::new();
    for &b in &maximal {
        let child = build_block(&mut builder, labels, orders, b, &pos)?;
        child_repr.push((child, b));
    }
    for (i, &l) in labels.iter().enumerate() {
        if used & (1 << i) == 0 {
            let leaf = builder.leaf(l);
            child_repr.push((leaf, 1 << i));
        }
    }
    if child_repr.len() == 2 {
        // degree-2 root: smooth by joining the two children directly
        let mut t = PQTree { nodes: builder.nodes, sync: builder.sync };
        let (a, _) = child_repr[0];
        let (b, _) = child_repr[1];
        t.nodes[a].adj.push(b);
        t.nodes[b].adj.push(a);
        t.nodes.swap_remove(root);
        let moved = t.nodes.len();
        for nd in &mut t.nodes {
            for x in &mut nd.adj {
                if *x == moved {
                    *x = root;
                }
            }
        }
        for s in &mut t.sync {
            if s.0 == moved {
                s.0 = root;
            }
            if s.1 == moved {
                s.1 = root;
            }
        }
        t.check()?;
        return Ok(t);
    }
    // type the root from the observed cyclic order of children
    let k = child_repr.len();
    let mut child_seqs: BTreeSet<Vec<usize>> = BTreeSet::new();
    for o in orders {
        let mut seq = Vec::new();
        for t in o {
            let ci = child_repr.iter().position(|&(_, m)| m & (1 << pos[t]) != 0).unwrap();
            if seq.last() != Some(&ci) {
                seq.push(ci);
            }
        }
        if seq.len() > 1 && seq.first() == seq.last() {
            seq.pop();
        }
        if seq.len() != k {
            return Err(PQError::NotRepresentable);
        }
        child_seqs.insert(canonicalize(&seq));
    }
    let kind = if child_seqs.len() == count_cyclic(k) { NodeKind::P } else { NodeKind::Q };
    builder.nodes[root].kind = kind;
    let order_of_children: Vec<usize> = match kind {
        NodeKind::P => (0..k).collect(),
        NodeKind::Q => child_seqs.iter().next().unwrap().clone(),
        NodeKind::Leaf => unreachable!(),
    };
    for &ci in &order_of_children {
        let (c, _) = child_repr[ci];
        builder.attach(root, c);
    }
    let t = PQTree { nodes: builder.nodes, sync: builder.sync };
    t.check()?;
    Ok(t)
}

fn count_cyclic(k: usize) -> usize {
    (1..k).product::<usize>().max(1)
}

/// Builds the subtree for one block, returning the node that attaches to the
/// parent. The block's outside is contracted to a marker token.
fn build_block(
    builder: &mut TreeBuilder<usize>,
    labels: &[usize],
    orders: &BTreeSet<Vec<usize>>,
    mask: u32,
    pos: &BTreeMap<usize, usize>,
) -> Result<usize, PQError> {
    let members: Vec<usize> =
        labels.iter().copied().filter(|t| mask & (1 << pos[t]) != 0).collect();
    if members.len() == 1 {
        return Ok(builder.leaf(members[0]));
    }
    let marker = labels.iter().copied().max().unwrap() + 1;
    let projected: BTreeSet<Vec<usize>> = orders
        .iter()
        .map(|o| {
            let mut seq = Vec::new();
            for t in o {
                let x = if mask & (1 << pos[t]) != 0 { *t } else { marker };
                if x == marker && seq.last() == Some(&marker) {
                    continue;
                }
                seq.push(x);
            }
            if seq.len() > 1 && seq.first() == seq.last() {
                seq.pop();
            }
            canonicalize(&seq)
        })
        .collect();
    let mut sublabels = members.clone();
    sublabels.push(marker);
    let sub = synth_tokens(&sublabels, &projected)?;
    graft(builder, &sub, marker)
}

/// Copies `sub` (which contains a marker leaf) into `builder`, dropping the
/// marker; returns the node that replaces it as the parent attachment.
fn graft(
    builder: &mut TreeBuilder<usize>,
    sub: &PQTree<usize>,
    marker: usize,
) -> Result<usize, PQError> {
    let mleaf = sub
        .nodes
        .iter()
        .position(|nd| nd.label == Some(marker))
        .ok_or_else(|| PQError::Structure("marker missing".into()))?;
    if sub.nodes[mleaf].adj.is_empty() {
        return Err(PQError::NotRepresentable);
    }
    let anchor = sub.nodes[mleaf].adj[0];
    let mut map: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, nd) in sub.nodes.iter().enumerate() {
        if i == mleaf {
            continue;
        }
        let new = match nd.kind {
            NodeKind::Leaf => builder.leaf(nd.label.unwrap()),
            NodeKind::P => builder.p(),
            NodeKind::Q => builder.q(),
        };
        map.insert(i, new);
    }
    for (i, nd) in sub.nodes.iter().enumerate() {
        if i == mleaf {
            continue;
        }
        let new = map[&i];
        if i == anchor {
            // rotate the cyclic order so the marker slot comes last; the
            // parent edge appended later restores the reference order
            let posn = nd.adj.iter().position(|&c| c == mleaf).unwrap();
            let k = nd.adj.len();
            builder.nodes[new].adj = (1..k)
                .map(|off| nd.adj[(posn + off) % k])
                .filter(|&c| c != mleaf)
                .map(|c| map[&c])
                .collect();
        } else {
            builder.nodes[new].adj =
                nd.adj.iter().filter(|&&c| c != mleaf).map(|&c| map[&c]).collect();
        }
    }
    for &(a, b) in &sub.sync {
        builder.tie(map[&a], map[&b]);
    }
    Ok(map[&anchor])
}
