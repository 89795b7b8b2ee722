//! Expansion of crossing vertices back into dummy crossings.
//!
//! A crossing vertex of degree 4 or 6 whose rotation satisfies its
//! alternation constraint expands into 1, 2 or 3 dummy vertices whose local
//! arrangement is untangled: all endpoints reachable from one face. The
//! arrangement for each valid rotation pattern is looked up in a table that
//! is derived by a small planarity search over the local patch and committed
//! as data; a test regenerates it and compares byte-for-byte.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::atcore::{Color, ComponentKind};
use crate::embedding::{Dart, RotationSystem};

/// One dart of the local patch: (color, segment index along that color's
/// edge, end: 0 = closer to the color's first anchor).
pub type PatchDart = (Color, u32, u8);

/// The untangled arrangement for one rotation pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    /// dummy index -> the two colors crossing there
    pub dummies: Vec<(Color, Color)>,
    /// per color: dummy indices along the edge from its first anchor
    pub routes: BTreeMap<Color, Vec<usize>>,
    /// per dummy: cyclic rotation over patch darts
    pub rotations: Vec<Vec<PatchDart>>,
}

fn color_char(c: Color) -> char {
    match c {
        Color::Red => 'r',
        Color::Blue => 'b',
        Color::Purple => 'p',
    }
}

fn color_of_char(c: char) -> Color {
    match c {
        'r' => Color::Red,
        'b' => Color::Blue,
        'p' => Color::Purple,
        _ => panic!("bad color char {c}"),
    }
}

/// Canonical key of a rotation pattern: the color string rotated to its
/// lexicographically smallest form. Reflection is NOT quotiented.
pub fn pattern_key(colors: &[Color]) -> String {
    let s: Vec<char> = colors.iter().map(|&c| color_char(c)).collect();
    let n = s.len();
    let mut best: Option<String> = None;
    for shift in 0..n {
        let cand: String = (0..n).map(|i| s[(shift + i) % n]).collect();
        if best.as_ref().is_none_or(|b| &cand < b) {
            best = Some(cand);
        }
    }
    best.unwrap()
}

fn crossing_pairs(kind: ComponentKind) -> Vec<(Color, Color)> {
    match kind {
        ComponentKind::K2 => vec![(Color::Red, Color::Blue)],
        ComponentKind::P3 => vec![(Color::Red, Color::Purple), (Color::Blue, Color::Purple)],
        ComponentKind::K3 => vec![
            (Color::Red, Color::Blue),
            (Color::Red, Color::Purple),
            (Color::Blue, Color::Purple),
        ],
    }
}

fn constraint_kind(kind: ComponentKind) -> super::constraints::Kind {
    match kind {
        ComponentKind::K2 => super::constraints::Kind::K2,
        ComponentKind::P3 => super::constraints::Kind::P3,
        ComponentKind::K3 => super::constraints::Kind::K3,
    }
}

/// All valid rotation patterns (canonical keys) for a component kind.
fn valid_patterns(kind: ComponentKind) -> Vec<Vec<Color>> {
    let sig = constraint_kind(kind).signature();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for cs in super::constraints::color_orders(sig) {
        if !super::constraints::kind_satisfied(constraint_kind(kind), &cs) {
            continue;
        }
        let key = pattern_key(&cs);
        if seen.insert(key.clone()) {
            out.push(key.chars().map(color_of_char).collect());
        }
    }
    out
}

/// Searches the untangled arrangement for one rotation pattern: dummies,
/// routes and rotations such that the patch (edges drawn inside a disk whose
/// boundary meets the endpoints in pattern order) is planar with the full
/// boundary cycle as a face.
fn search_expansion(kind: ComponentKind, pattern: &[Color]) -> Vec<Expansion> {
    let n = pattern.len();
    let pairs = crossing_pairs(kind);
    let first_pos = |c: Color| pattern.iter().position(|&x| x == c).unwrap();
    // route permutations per color
    let dummies_of = |c: Color| -> Vec<usize> {
        (0..pairs.len()).filter(|&i| pairs[i].0 == c || pairs[i].1 == c).collect()
    };
    let mut colors: Vec<Color> = vec![Color::Red, Color::Blue];
    if n == 6 {
        colors.push(Color::Purple);
    }
    let route_opts: Vec<Vec<Vec<usize>>> = colors.iter().map(|&c| perms(&dummies_of(c))).collect();
    let mut found = Vec::new();
    let mut idx = vec![0usize; route_opts.len()];
    loop {
        let routes: BTreeMap<Color, Vec<usize>> = colors
            .iter()
            .zip(&idx)
            .map(|(&c, &i)| (c, route_opts[color_index(c)][i].clone()))
            .collect();
        // enumerate dummy rotation orientations
        for mask in 0..(1u32 << pairs.len()) {
            if let Some(exp) = try_config(kind, pattern, &pairs, &routes, mask, first_pos) {
                found.push(exp);
            }
        }
        // odometer
        let mut i = 0;
        loop {
            if i == idx.len() {
                return found;
            }
            idx[i] += 1;
            if idx[i] < route_opts[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }

    fn color_index(c: Color) -> usize {
        match c {
            Color::Red => 0,
            Color::Blue => 1,
            Color::Purple => 2,
        }
    }
}

fn perms(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut t in perms(&rest) {
            let mut v = vec![x];
            v.append(&mut t);
            out.push(v);
        }
    }
    out
}

/// Builds the patch rotation system for one configuration and keeps it when
/// it is planar with an intact outer boundary face.
fn try_config(
    _kind: ComponentKind,
    pattern: &[Color],
    pairs: &[(Color, Color)],
    routes: &BTreeMap<Color, Vec<usize>>,
    orient_mask: u32,
    first_pos: impl Fn(Color) -> usize,
) -> Option<Expansion> {
    let n = pattern.len();
    let nd = pairs.len();
    // vertices: anchors 0..n, dummies n..n+nd
    let mut rs = RotationSystem::empty(n + nd);
    // boundary edges 0..n: edge i = (anchor i, anchor i+1)
    for i in 0..n {
        rs.edge_ends.push((i as u32, ((i + 1) % n) as u32));
    }
    // segments per color; remember (color, seg) -> edge index
    let mut seg_edge: BTreeMap<(Color, u32), u32> = BTreeMap::new();
    let mut anchor_seg: BTreeMap<usize, Dart> = BTreeMap::new();
    for (&c, route) in routes {
        let fp = first_pos(c);
        let sp = (fp + 1..n).find(|&i| pattern[i] == c).unwrap();
        let mut prev = fp as u32;
        for (k, &d) in route.iter().enumerate() {
            let e = rs.edge_ends.len() as u32;
            seg_edge.insert((c, k as u32), e);
            rs.edge_ends.push((prev, (n + d) as u32));
            if k == 0 {
                anchor_seg.insert(fp, Dart::new(e, 0));
            }
            prev = (n + d) as u32;
        }
        let e = rs.edge_ends.len() as u32;
        seg_edge.insert((c, route.len() as u32), e);
        rs.edge_ends.push((prev, sp as u32));
        if route.is_empty() {
            anchor_seg.insert(fp, Dart::new(e, 0));
        }
        anchor_seg.insert(sp, Dart::new(e, 1));
    }
    // anchor rotations: previous boundary, segment, next boundary
    for i in 0..n {
        let prev_b = Dart::new(((i + n - 1) % n) as u32, 1);
        let next_b = Dart::new(i as u32, 0);
        rs.rotations[i] = vec![prev_b, anchor_seg[&i], next_b];
    }
    // dummy rotations: alternate the two colors
    let mut rotations_out = Vec::new();
    for (d, &(c1, c2)) in pairs.iter().enumerate() {
        let k1 = routes[&c1].iter().position(|&x| x == d).unwrap() as u32;
        let k2 = routes[&c2].iter().position(|&x| x == d).unwrap() as u32;
        let c1_in = (c1, k1, 1u8);
        let c1_out = (c1, k1 + 1, 0u8);
        let c2_in = (c2, k2, 1u8);
        let c2_out = (c2, k2 + 1, 0u8);
        let rot: Vec<PatchDart> = if orient_mask & (1 << d) == 0 {
            vec![c1_in, c2_in, c1_out, c2_out]
        } else {
            vec![c1_in, c2_out, c1_out, c2_in]
        };
        rs.rotations[n + d] = rot
            .iter()
            .map(|&(c, k, end)| Dart::new(seg_edge[&(c, k)], end))
            .collect();
        rotations_out.push(rot);
    }
    rs.validate().expect("patch rotation system well-formed");
    if !rs.euler_check() {
        return None;
    }
    // the outer face must be the untouched boundary cycle
    let faces = rs.trace_faces();
    let boundary_intact = faces.faces.iter().any(|f| {
        f.len() == n && f.iter().all(|d| (d.edge as usize) < n)
    });
    if !boundary_intact {
        return None;
    }
    Some(Expansion { dummies: pairs.to_vec(), routes: routes.clone(), rotations: rotations_out })
}

/// Serializes the full table deterministically (the golden format).
pub fn table_to_string(table: &BTreeMap<(ComponentKind, String), Expansion>) -> String {
    let mut out = String::new();
    for ((kind, pattern), exp) in table {
        let kind_s = match kind {
            ComponentKind::K2 => "K2",
            ComponentKind::P3 => "P3",
            ComponentKind::K3 => "K3",
        };
        out.push_str(&format!("{kind_s} {pattern} |"));
        for (i, &(c1, c2)) in exp.dummies.iter().enumerate() {
            out.push_str(&format!(" d{i}={}{}", color_char(c1), color_char(c2)));
        }
        out.push_str(" |");
        for (c, route) in &exp.routes {
            let r: Vec<String> = route.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!(" {}:[{}]", color_char(*c), r.join(",")));
        }
        out.push_str(" |");
        for rot in &exp.rotations {
            let r: Vec<String> = rot
                .iter()
                .map(|&(c, k, e)| format!("{}{}.{}", color_char(c), k, e))
                .collect();
            out.push_str(&format!(" ({})", r.join(" ")));
        }
        out.push('\n');
    }
    out
}

/// Regenerates the expansion table from scratch by patch search.
pub fn generate_table() -> BTreeMap<(ComponentKind, String), Expansion> {
    let mut out = BTreeMap::new();
    for kind in [ComponentKind::K2, ComponentKind::P3, ComponentKind::K3] {
        for pattern in valid_patterns(kind) {
            let mut found = search_expansion(kind, &pattern);
            assert!(
                !found.is_empty(),
                "every valid rotation must admit an untangled arrangement ({kind:?} {pattern:?})"
            );
            // K2 and P3 arrangements are unique; a three-crossing admits
            // exactly two (the inner triangle weaves either way) and we keep
            // the canonically smallest
            let expected = if kind == ComponentKind::K3 { 2 } else { 1 };
            assert_eq!(found.len(), expected, "arrangement count ({kind:?} {pattern:?})");
            found.sort_by_key(|e| format!("{e:?}"));
            out.insert((kind, pattern_key(&pattern)), found.into_iter().next().unwrap());
        }
    }
    out
}

/// The committed expansion table (golden data; regenerated and compared in
/// tests and by the acceptance suite).
pub const COMMITTED_TABLE: &str = include_str!("untangle_table.txt");

fn parse_table(s: &str) -> BTreeMap<(ComponentKind, String), Expansion> {
    let mut out = BTreeMap::new();
    for line in s.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split('|');
        let head = parts.next().unwrap().trim();
        let dummies_s = parts.next().unwrap().trim();
        let routes_s = parts.next().unwrap().trim();
        let rots_s = parts.next().unwrap().trim();
        let mut head_it = head.split_whitespace();
        let kind = match head_it.next().unwrap() {
            "K2" => ComponentKind::K2,
            "P3" => ComponentKind::P3,
            "K3" => ComponentKind::K3,
            other => panic!("bad kind {other}"),
        };
        let pattern = head_it.next().unwrap().to_string();
        let mut dummies = Vec::new();
        for tok in dummies_s.split_whitespace() {
            let cs = tok.split('=').nth(1).unwrap();
            let mut ch = cs.chars();
            dummies.push((color_of_char(ch.next().unwrap()), color_of_char(ch.next().unwrap())));
        }
        let mut routes = BTreeMap::new();
        for tok in routes_s.split_whitespace() {
            let (c, rest) = tok.split_once(':').unwrap();
            let inner = rest.trim_start_matches('[').trim_end_matches(']');
            let route: Vec<usize> = if inner.is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(|x| x.parse().unwrap()).collect()
            };
            routes.insert(color_of_char(c.chars().next().unwrap()), route);
        }
        let mut rotations = Vec::new();
        for tok in rots_s.split(')') {
            let tok = tok.trim().trim_start_matches('(').trim();
            if tok.is_empty() {
                continue;
            }
            let rot: Vec<PatchDart> = tok
                .split_whitespace()
                .map(|dart| {
                    let mut ch = dart.chars();
                    let c = color_of_char(ch.next().unwrap());
                    let rest: String = ch.collect();
                    let (k, e) = rest.split_once('.').unwrap();
                    (c, k.parse().unwrap(), e.parse().unwrap())
                })
                .collect();
            rotations.push(rot);
        }
        out.insert((kind, pattern), Expansion { dummies, routes, rotations });
    }
    out
}

/// Runtime accessor: the committed table, parsed once.
pub fn expansion_table() -> &'static BTreeMap<(ComponentKind, String), Expansion> {
    static TABLE: OnceLock<BTreeMap<(ComponentKind, String), Expansion>> = OnceLock::new();
    TABLE.get_or_init(|| parse_table(COMMITTED_TABLE))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regenerated_table_matches_committed_bytes() {
        let generated = table_to_string(&generate_table());
        assert_eq!(generated, COMMITTED_TABLE, "committed untangling table is stale");
    }

    #[test]
    fn committed_table_parses_back() {
        let t = expansion_table();
        assert!(!t.is_empty());
        let gen = generate_table();
        assert_eq!(t.len(), gen.len());
        for (k, v) in &gen {
            assert_eq!(&t[k], v);
        }
    }

    #[test]
    fn k2_pattern_is_the_single_alternation() {
        let t = generate_table();
        let keys: Vec<_> = t.keys().filter(|(k, _)| *k == ComponentKind::K2).collect();
        assert_eq!(keys.len(), 1);
        assert_eq!(keys[0].1, "brbr");
    }

    #[test]
    fn p3_routes_put_both_dummies_on_purple() {
        let t = generate_table();
        for ((k, _), exp) in &t {
            if *k == ComponentKind::P3 {
                assert_eq!(exp.routes[&Color::Purple].len(), 2);
                assert_eq!(exp.routes[&Color::Red].len(), 1);
                assert_eq!(exp.routes[&Color::Blue].len(), 1);
            }
        }
    }
}
