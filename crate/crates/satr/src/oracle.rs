//! Exhaustive ground-truth decider: enumerates every crossing order along
//! every edge and every rotation system of the resulting planarization,
//! accepting when some system has genus zero with alternation at each
//! crossing. Only practical for small instances, which is the point — it is
//! the independent reference the solver is measured against.

use thiserror::Error;

use crate::atcore::{validate, ATGraph, CertDart, NoReason, PlanarizationCertificate, Verdict};
use crate::graph::EdgeIdx;

#[derive(Debug, Clone, Copy)]
pub struct OracleLimits {
    pub max_planarization_vertices: usize,
    pub max_total_darts: usize,
    pub max_rotation_systems: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_planarization_vertices: 11,
            max_total_darts: 26,
            max_rotation_systems: 4_000_000,
        }
    }
}

impl OracleLimits {
    pub fn generous() -> Self {
        OracleLimits {
            max_planarization_vertices: 64,
            max_total_darts: 160,
            max_rotation_systems: 50_000_000,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle limit exceeded: {0}")]
    LimitExceeded(String),
}

/// The planarization for one choice of crossing orders.
struct Plan {
    /// per segment: (edge index, segment position along the edge)
    segs: Vec<(EdgeIdx, u32)>,
    /// per planarization vertex: incident darts (dart = 2*seg + end)
    incidence: Vec<Vec<u32>>,
    /// vertex index of each dart
    dart_vertex: Vec<u32>,
    /// connected component of each planarization vertex
    comp: Vec<usize>,
    /// target face count per component (E - V + 2); usize::MAX if edgeless
    target_faces: Vec<usize>,
    /// dummy index -> (crossing pair)
    dummy_pairs: Vec<(EdgeIdx, EdgeIdx)>,
    n_orig: usize,
}

fn pair_key(a: EdgeIdx, b: EdgeIdx) -> (EdgeIdx, EdgeIdx) {
    (a.min(b), a.max(b))
}

/// Builds the planarization for the given routes (per-edge partner orders).
fn build_plan(a: &ATGraph, routes: &[Vec<EdgeIdx>]) -> Plan {
    let g = &a.graph;
    let n = g.n();
    let pairs: Vec<(EdgeIdx, EdgeIdx)> = a.crossings().iter().copied().collect();
    let dummy_of =
        |e: EdgeIdx, f: EdgeIdx| -> usize { pairs.iter().position(|&p| p == pair_key(e, f)).unwrap() };
    let n_total = n + pairs.len();
    let mut segs = Vec::new();
    let mut incidence: Vec<Vec<u32>> = vec![Vec::new(); n_total];
    for e in 0..g.m() as EdgeIdx {
        let (u, v) = g.ends(e);
        let mut prev = u as usize;
        for (k, &f) in routes[e as usize].iter().enumerate() {
            let d = n + dummy_of(e, f);
            let s = segs.len() as u32;
            segs.push((e, k as u32));
            incidence[prev].push(2 * s);
            incidence[d].push(2 * s + 1);
            prev = d;
        }
        let s = segs.len() as u32;
        segs.push((e, routes[e as usize].len() as u32));
        incidence[prev].push(2 * s);
        incidence[v as usize].push(2 * s + 1);
    }
    let mut dart_vertex = vec![0u32; 2 * segs.len()];
    for (v, inc) in incidence.iter().enumerate() {
        for &d in inc {
            dart_vertex[d as usize] = v as u32;
        }
    }
    // components over the planarization
    let mut comp = vec![usize::MAX; n_total];
    let mut ncomp = 0;
    for s in 0..n_total {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = ncomp;
        while let Some(x) = stack.pop() {
            for &d in &incidence[x] {
                let y = dart_vertex[(d ^ 1) as usize] as usize;
                if comp[y] == usize::MAX {
                    comp[y] = ncomp;
                    stack.push(y);
                }
            }
        }
        ncomp += 1;
    }
    let mut vcount = vec![0usize; ncomp];
    let mut ecount = vec![0usize; ncomp];
    for v in 0..n_total {
        vcount[comp[v]] += 1;
    }
    for si in 0..segs.len() {
        let v = dart_vertex[2 * si] as usize;
        ecount[comp[v]] += 1;
    }
    let target_faces = (0..ncomp)
        .map(|c| if ecount[c] == 0 { usize::MAX } else { ecount[c] + 2 - vcount[c] })
        .collect();
    Plan { segs, incidence, dart_vertex, comp, target_faces, dummy_pairs: pairs, n_orig: n }
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

/// Candidate rotations per planarization vertex: dummies alternate the two
/// edges, everything else is free (first dart pinned to kill rotations).
fn rotation_options(plan: &Plan) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::with_capacity(plan.incidence.len());
    for (v, darts) in plan.incidence.iter().enumerate() {
        if v >= plan.n_orig {
            // dummy: darts of edge pair (e, f); portions must alternate
            let di = v - plan.n_orig;
            let (e, _) = plan.dummy_pairs[di];
            let e_darts: Vec<u32> =
                darts.iter().copied().filter(|&d| plan.segs[(d / 2) as usize].0 == e).collect();
            let f_darts: Vec<u32> =
                darts.iter().copied().filter(|&d| plan.segs[(d / 2) as usize].0 != e).collect();
            debug_assert_eq!(e_darts.len(), 2);
            debug_assert_eq!(f_darts.len(), 2);
            out.push(vec![
                vec![e_darts[0], f_darts[0], e_darts[1], f_darts[1]],
                vec![e_darts[0], f_darts[1], e_darts[1], f_darts[0]],
            ]);
        } else if darts.len() <= 2 {
            out.push(vec![darts.clone()]);
        } else {
            let opts = permutations(&darts[1..])
                .into_iter()
                .map(|perm| {
                    let mut rot = vec![darts[0]];
                    rot.extend(perm);
                    rot
                })
                .collect();
            out.push(opts);
        }
    }
    out
}

/// Drops the reversal of each rotation from one pivot vertex's option list;
/// sound because mirroring a whole rotation system preserves genus.
fn halve_pivot(options: &mut [Vec<Vec<u32>>]) {
    let pivot = (0..options.len()).max_by_key(|&v| options[v].len());
    let Some(pivot) = pivot else { return };
    if options[pivot].len() < 2 {
        return;
    }
    let mut kept: Vec<Vec<u32>> = Vec::new();
    for opt in &options[pivot] {
        let mut rev = opt.clone();
        rev[1..].reverse();
        if !kept.contains(&rev) {
            kept.push(opt.clone());
        }
    }
    options[pivot] = kept;
}

const UNSET: u32 = u32::MAX;

struct Searcher<'p> {
    plan: &'p Plan,
    options: &'p [Vec<Vec<u32>>],
    order: Vec<usize>,
    succ: Vec<u32>,
    assigned: Vec<bool>,
    visited: Vec<u32>,
    stamp: u32,
}

impl<'p> Searcher<'p> {
    fn new(plan: &'p Plan, options: &'p [Vec<Vec<u32>>]) -> Self {
        let mut order: Vec<usize> = (0..plan.incidence.len()).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(plan.incidence[v].len()));
        let nd = plan.dart_vertex.len();
        Searcher {
            plan,
            options,
            order,
            succ: vec![UNSET; nd],
            assigned: vec![false; plan.incidence.len()],
            visited: vec![0; nd],
            stamp: 0,
        }
    }

    fn place(&mut self, rot: &[u32]) {
        for i in 0..rot.len() {
            self.succ[rot[i] as usize] = rot[(i + 1) % rot.len()];
        }
    }

    /// Counts closed face orbits per component on the partial assignment.
    /// `None` when a component already exceeds its face budget; on complete
    /// assignments `Some(true)` signals genus zero everywhere.
    fn closed_faces_ok(&mut self, complete: bool) -> Option<bool> {
        self.stamp += 1;
        let stamp = self.stamp;
        let mut closed = vec![0usize; self.plan.target_faces.len()];
        let nd = self.plan.dart_vertex.len();
        for start in 0..nd as u32 {
            if self.visited[start as usize] == stamp {
                continue;
            }
            let mut d = start;
            let mut is_cycle = false;
            loop {
                if self.visited[d as usize] == stamp {
                    break; // merged into an earlier walk: open path
                }
                self.visited[d as usize] = stamp;
                let vtx = self.plan.dart_vertex[(d ^ 1) as usize] as usize;
                if !self.assigned[vtx] {
                    break;
                }
                d = self.succ[(d ^ 1) as usize];
                if d == start {
                    is_cycle = true;
                    break;
                }
            }
            if is_cycle {
                let c = self.plan.comp[self.plan.dart_vertex[start as usize] as usize];
                closed[c] += 1;
                if closed[c] > self.plan.target_faces[c] {
                    return None;
                }
            }
        }
        if complete {
            let ok = closed
                .iter()
                .zip(&self.plan.target_faces)
                .all(|(&got, &want)| want == usize::MAX || got == want);
            Some(ok)
        } else {
            Some(false)
        }
    }

    /// Depth-first assignment; calls `on_accept` for each genus-0 system.
    /// `on_accept` returning false stops the search.
    fn search(&mut self, depth: usize, on_accept: &mut impl FnMut(&[u32]) -> bool) -> bool {
        if depth == self.order.len() {
            return match self.closed_faces_ok(true) {
                Some(true) => {
                    let snapshot = self.succ.clone();
                    on_accept(&snapshot)
                }
                _ => true,
            };
        }
        let v = self.order[depth];
        for oi in 0..self.options[v].len() {
            let rot = self.options[v][oi].clone();
            self.place(&rot);
            self.assigned[v] = true;
            let prune = self.closed_faces_ok(false).is_none();
            if !prune && !self.search(depth + 1, on_accept) {
                return false;
            }
            self.assigned[v] = false;
        }
        true
    }
}

/// All per-edge orders of crossing partners.
fn route_choices(a: &ATGraph) -> Vec<Vec<Vec<EdgeIdx>>> {
    let g = &a.graph;
    let mut partners: Vec<Vec<EdgeIdx>> = vec![Vec::new(); g.m()];
    for &(x, y) in a.crossings() {
        partners[x as usize].push(y);
        partners[y as usize].push(x);
    }
    partners.iter().map(|p| permutations(p)).collect()
}

fn count_systems(options: &[Vec<Vec<u32>>]) -> u64 {
    options.iter().fold(1u64, |acc, o| acc.saturating_mul(o.len() as u64))
}

fn check_limits(a: &ATGraph, lim: &OracleLimits) -> Result<(), OracleError> {
    let nverts = a.graph.n() + a.crossings().len();
    let ndarts = 2 * (a.graph.m() + 2 * a.crossings().len());
    if nverts > lim.max_planarization_vertices {
        return Err(OracleError::LimitExceeded(format!(
            "planarization has {nverts} vertices, limit {}",
            lim.max_planarization_vertices
        )));
    }
    if ndarts > lim.max_total_darts {
        return Err(OracleError::LimitExceeded(format!(
            "planarization has {ndarts} darts, limit {}",
            lim.max_total_darts
        )));
    }
    Ok(())
}

fn certificate_from(
    plan: &Plan,
    a: &ATGraph,
    succ: &[u32],
    routes: &[Vec<EdgeIdx>],
) -> PlanarizationCertificate {
    let g = &a.graph;
    let mut w = PlanarizationCertificate::default();
    for (i, &(e, f)) in plan.dummy_pairs.iter().enumerate() {
        w.dummies
            .push((format!("x{i}"), (g.edge_id(e).to_string(), g.edge_id(f).to_string())));
    }
    for e in 0..g.m() as EdgeIdx {
        let route = routes[e as usize]
            .iter()
            .map(|&f| {
                let di = plan.dummy_pairs.iter().position(|&p| p == pair_key(e, f)).unwrap();
                format!("x{di}")
            })
            .collect();
        w.routes.insert(g.edge_id(e).to_string(), route);
    }
    for (v, darts) in plan.incidence.iter().enumerate() {
        let name = if v < plan.n_orig {
            g.vertex_id(v as u32).to_string()
        } else {
            format!("x{}", v - plan.n_orig)
        };
        if darts.is_empty() {
            w.rotations.insert(name, Vec::new());
            continue;
        }
        let mut rot = Vec::with_capacity(darts.len());
        let mut d = darts[0];
        loop {
            let (e, k) = plan.segs[(d / 2) as usize];
            rot.push(CertDart { edge: g.edge_id(e).to_string(), seg: k, end: (d % 2) as u8 });
            d = succ[d as usize];
            if d == darts[0] {
                break;
            }
        }
        w.rotations.insert(name, rot);
    }
    w.canonicalize();
    w
}

fn run_oracle(
    a: &ATGraph,
    lim: &OracleLimits,
    all: bool,
) -> Result<Vec<PlanarizationCertificate>, OracleError> {
    check_limits(a, lim)?;
    let per_edge = route_choices(a);
    let mut found = Vec::new();
    let mut idx = vec![0usize; per_edge.len()];
    let mut budget = lim.max_rotation_systems;
    loop {
        let routes: Vec<Vec<EdgeIdx>> =
            idx.iter().zip(&per_edge).map(|(&i, opts)| opts[i].clone()).collect();
        let plan = build_plan(a, &routes);
        let mut options = rotation_options(&plan);
        if !all {
            halve_pivot(&mut options);
        }
        let systems = count_systems(&options);
        if systems > budget {
            return Err(OracleError::LimitExceeded(format!(
                "rotation systems {systems} exceed remaining budget {budget}"
            )));
        }
        budget -= systems;
        let mut searcher = Searcher::new(&plan, &options);
        let mut local: Vec<PlanarizationCertificate> = Vec::new();
        searcher.search(0, &mut |succ| {
            local.push(certificate_from(&plan, a, succ, &routes));
            all // keep going only when collecting everything
        });
        found.append(&mut local);
        if !found.is_empty() && !all {
            return Ok(found);
        }
        // advance the odometer over route permutations
        let mut i = 0;
        loop {
            if i == idx.len() {
                return Ok(found);
            }
            idx[i] += 1;
            if idx[i] < per_edge[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Decides simple realizability by exhaustive enumeration. YES verdicts
/// carry the first certificate found.
pub fn brute_force_satr(a: &ATGraph, lim: &OracleLimits) -> Result<Verdict, OracleError> {
    if validate(a).is_err() {
        return Ok(Verdict::No(NoReason::AdjacentCrossingPair));
    }
    let found = run_oracle(a, lim, false)?;
    Ok(match found.into_iter().next() {
        Some(w) => Verdict::Yes(Box::new(w)),
        None => Verdict::No(NoReason::NoRealizationFound),
    })
}

/// Every accepting planarization, one certificate per rotation system.
pub fn enumerate_realizations(
    a: &ATGraph,
    lim: &OracleLimits,
) -> Result<Vec<PlanarizationCertificate>, OracleError> {
    if validate(a).is_err() {
        return Ok(Vec::new());
    }
    run_oracle(a, lim, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atcore::check_certificate;
    use crate::graph::Graph;

    fn disjoint_edges(k: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..2 * k {
            g.add_vertex(format!("{i}")).unwrap();
        }
        for i in 0..k {
            g.add_edge(format!("e{i}"), 2 * i as u32, 2 * i as u32 + 1).unwrap();
        }
        g
    }

    fn k4() -> Graph {
        let mut g = Graph::new();
        for i in 1..=4 {
            g.add_vertex(format!("{i}")).unwrap();
        }
        for (id, u, v) in
            [("12", 0, 1), ("13", 0, 2), ("14", 0, 3), ("23", 1, 2), ("24", 1, 3), ("34", 2, 3)]
        {
            g.add_edge(id, u, v).unwrap();
        }
        g
    }

    #[test]
    fn single_crossing_pair_is_realizable() {
        let at = ATGraph::new(disjoint_edges(2), [("e0", "e1")]).unwrap();
        let v = brute_force_satr(&at, &OracleLimits::default()).unwrap();
        assert!(v.is_yes());
        assert_eq!(check_certificate(&at, v.witness().unwrap()), Ok(true));
        let all = enumerate_realizations(&at, &OracleLimits::default()).unwrap();
        assert!(!all.is_empty());
        for w in &all {
            assert_eq!(check_certificate(&at, w), Ok(true));
        }
    }

    #[test]
    fn three_pairwise_crossing_edges_realizable() {
        let at =
            ATGraph::new(disjoint_edges(3), [("e0", "e1"), ("e1", "e2"), ("e0", "e2")]).unwrap();
        let v = brute_force_satr(&at, &OracleLimits::default()).unwrap();
        assert!(v.is_yes());
        assert_eq!(check_certificate(&at, v.witness().unwrap()), Ok(true));
    }

    #[test]
    fn k4_with_two_independent_required_pairs_is_not() {
        let at = ATGraph::new(k4(), [("13", "24"), ("12", "34")]).unwrap();
        let v = brute_force_satr(&at, &OracleLimits::default()).unwrap();
        assert!(!v.is_yes());
        let at1 = ATGraph::new(k4(), [("13", "24")]).unwrap();
        assert!(brute_force_satr(&at1, &OracleLimits::default()).unwrap().is_yes());
    }

    #[test]
    fn adjacent_pair_has_no_realizations() {
        let mut g = Graph::new();
        for i in 0..3 {
            g.add_vertex(format!("{i}")).unwrap();
        }
        g.add_edge("a", 0, 1).unwrap();
        g.add_edge("b", 1, 2).unwrap();
        let at = ATGraph::new(g, [("a", "b")]).unwrap();
        assert!(enumerate_realizations(&at, &OracleLimits::default()).unwrap().is_empty());
        assert!(!brute_force_satr(&at, &OracleLimits::default()).unwrap().is_yes());
    }

    #[test]
    fn no_crossings_reduces_to_planarity() {
        // K5 minus an edge is planar; K5 is not
        let mut g = Graph::new();
        for i in 0..5 {
            g.add_vertex(format!("{i}")).unwrap();
        }
        let mut k = 0;
        for i in 0..5u32 {
            for j in i + 1..5u32 {
                if !(i == 0 && j == 1) {
                    g.add_edge(format!("e{k}"), i, j).unwrap();
                }
                k += 1;
            }
        }
        let at = ATGraph::new(g, []).unwrap();
        assert!(brute_force_satr(&at, &OracleLimits::default()).unwrap().is_yes());

        let mut g5 = Graph::new();
        for i in 0..5 {
            g5.add_vertex(format!("{i}")).unwrap();
        }
        let mut k = 0;
        for i in 0..5u32 {
            for j in i + 1..5u32 {
                g5.add_edge(format!("e{k}"), i, j).unwrap();
                k += 1;
            }
        }
        let at5 = ATGraph::new(g5, []).unwrap();
        assert!(!brute_force_satr(&at5, &OracleLimits::default()).unwrap().is_yes());
    }

    #[test]
    fn limit_exceeded_reported() {
        let at = ATGraph::new(disjoint_edges(8), []).unwrap();
        let lim = OracleLimits { max_planarization_vertices: 4, ..Default::default() };
        assert!(matches!(brute_force_satr(&at, &lim), Err(OracleError::LimitExceeded(_))));
    }

    /// The mirror-quotient pivot reduction answers exactly like the full
    /// enumeration on tiny cases.
    #[test]
    fn pivot_reduction_matches_full_enumeration() {
        let cases: Vec<ATGraph> = vec![
            ATGraph::new(disjoint_edges(2), [("e0", "e1")]).unwrap(),
            ATGraph::new(disjoint_edges(3), [("e0", "e1"), ("e1", "e2")]).unwrap(),
            ATGraph::new(disjoint_edges(3), [("e0", "e1"), ("e1", "e2"), ("e0", "e2")]).unwrap(),
            ATGraph::new(k4(), [("13", "24"), ("12", "34")]).unwrap(),
            ATGraph::new(k4(), [("13", "24")]).unwrap(),
        ];
        for at in &cases {
            let reduced = brute_force_satr(at, &OracleLimits::default()).unwrap();
            let full = enumerate_realizations(at, &OracleLimits::default()).unwrap();
            assert_eq!(reduced.is_yes(), !full.is_empty());
        }
    }

    /// P3 pattern: both crossings land on the middle edge in every
    /// realization.
    #[test]
    fn p3_realizations_route_both_dummies_on_middle_edge() {
        let at = ATGraph::new(disjoint_edges(3), [("e0", "e1"), ("e1", "e2")]).unwrap();
        let all = enumerate_realizations(&at, &OracleLimits::default()).unwrap();
        assert!(!all.is_empty());
        for w in &all {
            assert_eq!(w.routes["e1"].len(), 2);
            assert_eq!(w.routes["e0"].len(), 1);
            assert_eq!(w.routes["e2"].len(), 1);
            assert_eq!(check_certificate(&at, w), Ok(true));
        }
    }
}
