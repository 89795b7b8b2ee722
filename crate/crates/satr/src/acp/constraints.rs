//! Alternation constraints: the canonical kinds, their order predicates,
//! the raw derived forms produced by cut-vertex splitting (insertion
//! semantics), and normalization of raw forms to canonical kinds.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::atcore::Color;

/// Canonical constraint kinds surviving normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// degree 6, 2r2b2p: all three colors pairwise alternate
    K3,
    /// degree 6, 2r2b2p: red/purple and blue/purple alternate, red/blue not
    P3,
    /// degree 4, 2r2b: red and blue alternate
    K2,
    /// degree 5, 1r2b2p: blue and purple alternate
    K3MinusR,
    /// degree 5, 2r2b1p: red/blue do not alternate and the purple sits
    /// directly between the two reds or the two blues
    P3MinusP,
    /// degree 4, 2r2b: red and blue do not alternate
    P3MinusPP,
    /// degree 4, 1r1b2p: the two purples are consecutive
    K3MinusRB,
}

impl Kind {
    /// Expected color multiset as (red, blue, purple) counts.
    pub fn signature(self) -> (usize, usize, usize) {
        match self {
            Kind::K3 | Kind::P3 => (2, 2, 2),
            Kind::K2 | Kind::P3MinusPP => (2, 2, 0),
            Kind::K3MinusR => (1, 2, 2),
            Kind::P3MinusP => (2, 2, 1),
            Kind::K3MinusRB => (1, 1, 2),
        }
    }

    pub fn degree(self) -> usize {
        let (r, b, p) = self.signature();
        r + b + p
    }
}

/// A constraint instance: a kind plus the coloring of the host vertex's
/// incident darts (labels are edge indices in the solver, integers in
/// tests).
#[derive(Debug, Clone)]
pub struct Constraint<L> {
    pub kind: Kind,
    pub colors: BTreeMap<L, Color>,
}

impl<L: Clone + Ord + Debug> Constraint<L> {
    pub fn new(kind: Kind, colors: BTreeMap<L, Color>) -> Self {
        let (r, b, p) = kind.signature();
        let count = |c: Color| colors.values().filter(|&&x| x == c).count();
        assert_eq!(
            (count(Color::Red), count(Color::Blue), count(Color::Purple)),
            (r, b, p),
            "color multiset must match {kind:?}"
        );
        Constraint { kind, colors }
    }

    pub fn darts(&self) -> Vec<L> {
        self.colors.keys().cloned().collect()
    }

    pub fn of_color(&self, c: Color) -> Vec<L> {
        self.colors
            .iter()
            .filter(|(_, &x)| x == c)
            .map(|(l, _)| l.clone())
            .collect()
    }

    /// Whether a circular order of the host's darts satisfies the kind.
    pub fn satisfied_by(&self, order: &[L]) -> bool {
        let cs: Vec<Color> = order.iter().map(|l| self.colors[l]).collect();
        kind_satisfied(self.kind, &cs)
    }
}

/// Kind predicate over a circular color sequence.
pub fn kind_satisfied(kind: Kind, cs: &[Color]) -> bool {
    use Color::*;
    match kind {
        Kind::K3 => alternates(cs, Red, Blue) && alternates(cs, Red, Purple) && alternates(cs, Blue, Purple),
        Kind::P3 => {
            alternates(cs, Red, Purple) && alternates(cs, Blue, Purple) && !alternates(cs, Red, Blue)
        }
        Kind::K2 => alternates(cs, Red, Blue),
        Kind::K3MinusR => alternates(cs, Blue, Purple),
        Kind::P3MinusP => {
            if alternates(cs, Red, Blue) {
                return false;
            }
            // purple's circular neighbors share a color
            let n = cs.len();
            let i = cs.iter().position(|&c| c == Purple).expect("one purple");
            cs[(i + n - 1) % n] == cs[(i + 1) % n]
        }
        Kind::P3MinusPP => !alternates(cs, Red, Blue),
        Kind::K3MinusRB => {
            let n = cs.len();
            (0..n).any(|i| cs[i] == Purple && cs[(i + 1) % n] == Purple)
        }
    }
}

/// The two darts of color `a` alternate with the two of color `b` in the
/// circular sequence (pattern a b a b among the four).
fn alternates(cs: &[Color], a: Color, b: Color) -> bool {
    let sub: Vec<Color> = cs.iter().copied().filter(|&c| c == a || c == b).collect();
    if sub.len() != 4 {
        return false;
    }
    sub[0] != sub[1] && sub[1] != sub[2] && sub[2] != sub[3]
}

/// Base constraint families before any edges were split away.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    K3,
    P3,
    K2,
}

impl BaseKind {
    fn as_kind(self) -> Kind {
        match self {
            BaseKind::K3 => Kind::K3,
            BaseKind::P3 => Kind::P3,
            BaseKind::K2 => Kind::K2,
        }
    }

    pub fn full_signature(self) -> (usize, usize, usize) {
        self.as_kind().signature()
    }
}

/// What a cut-vertex split removed from the host's view of the constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Removal {
    None,
    /// one edge of the color moved to another component
    Single(Color),
    /// two edges moved, insertable independently
    TwoSeparate(Color, Color),
    /// two edges moved together, insertable only consecutively
    TwoConsecutive(Color, Color),
}

/// Insertion semantics: the raw derived constraint holds iff phantom edges
/// of the removed colors can be inserted so the base constraint holds.
pub fn raw_satisfied(base: BaseKind, removal: Removal, cs: &[Color]) -> bool {
    let full = |ext: &[Color]| kind_satisfied(base.as_kind(), ext);
    let insert = |cs: &[Color], pos: usize, c: Color| -> Vec<Color> {
        let mut v = cs.to_vec();
        v.insert(pos, c);
        v
    };
    match removal {
        Removal::None => full(cs),
        Removal::Single(c) => (0..=cs.len() - 1).any(|i| full(&insert(cs, i, c)))
            || full(&insert(cs, cs.len(), c)),
        Removal::TwoSeparate(c1, c2) => {
            for i in 0..=cs.len() {
                let once = insert(cs, i.min(cs.len()), c1);
                for j in 0..=once.len() {
                    if full(&insert(&once, j.min(once.len()), c2)) {
                        return true;
                    }
                }
            }
            false
        }
        Removal::TwoConsecutive(c1, c2) => {
            for i in 0..=cs.len() {
                let a = insert(&insert(cs, i.min(cs.len()), c2), i.min(cs.len()), c1);
                let b = insert(&insert(cs, i.min(cs.len()), c1), i.min(cs.len()), c2);
                if full(&a) || full(&b) {
                    return true;
                }
            }
            false
        }
    }
}

/// Outcome of normalizing a raw derived constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    /// equivalent canonical kind plus the recoloring applied to the
    /// remaining darts (old color -> canonical color)
    Kind(Kind, BTreeMap<Color, Color>),
    AlwaysSatisfied,
    NeverSatisfiable,
}

/// Normalizes `base` minus `removal` to a canonical kind over the remaining
/// color multiset, following the catalogue of equivalences.
pub fn normalize(base: BaseKind, removal: Removal) -> Normalized {
    use Color::*;
    let id = |colors: &[Color]| -> BTreeMap<Color, Color> {
        colors.iter().map(|&c| (c, c)).collect()
    };
    match (base, removal) {
        (BaseKind::K3, Removal::None) => Normalized::Kind(Kind::K3, id(&[Red, Blue, Purple])),
        (BaseKind::P3, Removal::None) => Normalized::Kind(Kind::P3, id(&[Red, Blue, Purple])),
        (BaseKind::K2, Removal::None) => Normalized::Kind(Kind::K2, id(&[Red, Blue])),

        // one edge split away
        (BaseKind::K2, Removal::Single(_)) => Normalized::AlwaysSatisfied,
        (BaseKind::K3, Removal::Single(c)) => {
            // the removed color's survivor plays red; the doubles blue/purple
            let (d1, d2) = others(c);
            Normalized::Kind(
                Kind::K3MinusR,
                BTreeMap::from([(c, Red), (d1, Blue), (d2, Purple)]),
            )
        }
        (BaseKind::P3, Removal::Single(Purple)) => {
            Normalized::Kind(Kind::P3MinusP, id(&[Red, Blue, Purple]))
        }
        (BaseKind::P3, Removal::Single(c)) => {
            // red/blue symmetric: equivalent to the degree-5 double-pair
            // alternation; survivor of c plays red, doubles blue/purple
            let other_rb = if c == Red { Blue } else { Red };
            Normalized::Kind(
                Kind::K3MinusR,
                BTreeMap::from([(c, Red), (other_rb, Blue), (Purple, Purple)]),
            )
        }

        // two edges split away, insertable independently
        (BaseKind::K2, Removal::TwoSeparate(_, _)) => Normalized::AlwaysSatisfied,
        (BaseKind::K3, Removal::TwoSeparate(c1, c2)) if c1 == c2 => {
            let (d1, d2) = others(c1);
            Normalized::Kind(Kind::K2, BTreeMap::from([(d1, Red), (d2, Blue)]))
        }
        (BaseKind::K3, Removal::TwoSeparate(_, _)) => Normalized::AlwaysSatisfied,
        (BaseKind::P3, Removal::TwoSeparate(c1, c2)) if c1 == c2 => match c1 {
            Purple => Normalized::Kind(Kind::P3MinusPP, id(&[Red, Blue])),
            Red => Normalized::Kind(Kind::K2, BTreeMap::from([(Blue, Red), (Purple, Blue)])),
            Blue => Normalized::Kind(Kind::K2, BTreeMap::from([(Red, Red), (Purple, Blue)])),
        },
        (BaseKind::P3, Removal::TwoSeparate(_, _)) => Normalized::AlwaysSatisfied,

        // two edges split away together (consecutive insertion)
        (_, Removal::TwoConsecutive(c1, c2)) if c1 == c2 => Normalized::NeverSatisfiable,
        (BaseKind::K2, Removal::TwoConsecutive(_, _)) => Normalized::AlwaysSatisfied,
        (BaseKind::K3, Removal::TwoConsecutive(c1, c2)) => {
            // the untouched color keeps both darts: they must be consecutive
            let z = third(c1, c2);
            Normalized::Kind(
                Kind::K3MinusRB,
                BTreeMap::from([(c1, Red), (c2, Blue), (z, Purple)]),
            )
        }
        (BaseKind::P3, Removal::TwoConsecutive(c1, c2)) => {
            let (c1, c2) = (c1.min(c2), c1.max(c2));
            if (c1, c2) == (Red, Blue) {
                Normalized::Kind(Kind::K3MinusRB, id(&[Red, Blue, Purple]))
            } else {
                // {red or blue} together with purple: the untouched red/blue
                // color keeps two darts which must alternate with the rest
                let doubled = if c1 == Red || c2 == Red { Blue } else { Red };
                let single_rb = if doubled == Red { Blue } else { Red };
                Normalized::Kind(
                    Kind::K2,
                    BTreeMap::from([(doubled, Red), (single_rb, Blue), (Purple, Blue)]),
                )
            }
        }
    }
}

fn others(c: Color) -> (Color, Color) {
    use Color::*;
    match c {
        Red => (Blue, Purple),
        Blue => (Red, Purple),
        Purple => (Red, Blue),
    }
}

fn third(a: Color, b: Color) -> Color {
    use Color::*;
    for c in [Red, Blue, Purple] {
        if c != a && c != b {
            return c;
        }
    }
    unreachable!()
}

/// All circular orders (first element pinned) of a color multiset.
pub fn color_orders(counts: (usize, usize, usize)) -> Vec<Vec<Color>> {
    use Color::*;
    let mut pool = Vec::new();
    for _ in 0..counts.0 {
        pool.push(Red);
    }
    for _ in 0..counts.1 {
        pool.push(Blue);
    }
    for _ in 0..counts.2 {
        pool.push(Purple);
    }
    if pool.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let first = pool.remove(0);
    permute_colors(&pool, &mut vec![first], &mut out);
    out
}

fn permute_colors(rest: &[Color], acc: &mut Vec<Color>, out: &mut Vec<Vec<Color>>) {
    if rest.is_empty() {
        out.push(acc.clone());
        return;
    }
    let mut tried = Vec::new();
    for i in 0..rest.len() {
        if tried.contains(&rest[i]) {
            continue;
        }
        tried.push(rest[i]);
        let mut next: Vec<Color> = rest.to_vec();
        let c = next.remove(i);
        acc.push(c);
        permute_colors(&next, acc, out);
        acc.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::*;

    fn apply_map(cs: &[Color], map: &BTreeMap<Color, Color>) -> Vec<Color> {
        cs.iter().map(|c| map[c]).collect()
    }

    fn removed_counts(base: BaseKind, removal: Removal) -> (usize, usize, usize) {
        let (mut r, mut b, mut p) = base.full_signature();
        let mut rm = |c: Color| match c {
            Red => r -= 1,
            Blue => b -= 1,
            Purple => p -= 1,
        };
        match removal {
            Removal::None => {}
            Removal::Single(c) => rm(c),
            Removal::TwoSeparate(c1, c2) | Removal::TwoConsecutive(c1, c2) => {
                rm(c1);
                rm(c2);
            }
        }
        (r, b, p)
    }

    fn all_removals(base: BaseKind) -> Vec<Removal> {
        let colors: &[Color] = match base {
            BaseKind::K2 => &[Red, Blue],
            _ => &[Red, Blue, Purple],
        };
        let mut out = vec![Removal::None];
        for &c in colors {
            out.push(Removal::Single(c));
        }
        let (fr, fb, fp) = base.full_signature();
        let avail = |c: Color| match c {
            Red => fr,
            Blue => fb,
            Purple => fp,
        };
        for &c1 in colors {
            for &c2 in colors {
                if c1 > c2 {
                    continue;
                }
                let need = if c1 == c2 { 2 } else { 1 };
                if avail(c1) >= need && avail(c2) >= need.min(avail(c2)) && avail(c2) >= 1 {
                    if c1 == c2 && avail(c1) < 2 {
                        continue;
                    }
                    out.push(Removal::TwoSeparate(c1, c2));
                    out.push(Removal::TwoConsecutive(c1, c2));
                }
            }
        }
        out
    }

    /// The normalization catalogue agrees with the raw insertion semantics
    /// on every circular order, for every base and removal.
    #[test]
    fn normalization_matches_insertion_semantics() {
        for base in [BaseKind::K3, BaseKind::P3, BaseKind::K2] {
            for removal in all_removals(base) {
                let counts = removed_counts(base, removal);
                if counts.0 + counts.1 + counts.2 < 3 {
                    continue; // sub-cyclic leftovers are not vertex constraints
                }
                let orders = color_orders(counts);
                let norm = normalize(base, removal);
                for cs in &orders {
                    let raw = raw_satisfied(base, removal, cs);
                    let via = match &norm {
                        Normalized::AlwaysSatisfied => true,
                        Normalized::NeverSatisfiable => false,
                        Normalized::Kind(kind, map) => kind_satisfied(*kind, &apply_map(cs, map)),
                    };
                    assert_eq!(
                        raw, via,
                        "mismatch: {base:?} {removal:?} on {cs:?} (norm {norm:?})"
                    );
                }
            }
        }
    }

    /// Splitting one more edge from an already-derived constraint matches
    /// the two-edge removal directly (the iterated split case).
    #[test]
    fn iterated_single_removals_match_two_separate() {
        for base in [BaseKind::K3, BaseKind::P3] {
            for c1 in [Red, Blue, Purple] {
                for c2 in [Red, Blue, Purple] {
                    let counts = removed_counts(base, Removal::TwoSeparate(c1.min(c2), c1.max(c2)));
                    if counts.0 + counts.1 + counts.2 < 3 {
                        continue;
                    }
                    for cs in color_orders(counts) {
                        // insert c2 first, then ask for single-removal of c1
                        let lhs = raw_satisfied(base, Removal::TwoSeparate(c1, c2), &cs);
                        let mut any = false;
                        for i in 0..=cs.len() {
                            let mut ext = cs.clone();
                            ext.insert(i.min(cs.len()), c2);
                            if raw_satisfied(base, Removal::Single(c1), &ext)
                                && kind_exists_placement(base, c1, &ext)
                            {
                                any = true;
                                break;
                            }
                        }
                        // existence is equivalent; the helper is the same
                        // predicate, so this is a consistency smoke check
                        assert_eq!(lhs, any, "{base:?} -{c1:?},-{c2:?} on {cs:?}");
                    }
                }
            }
        }
    }

    fn kind_exists_placement(base: BaseKind, c: Color, ext: &[Color]) -> bool {
        raw_satisfied(base, Removal::Single(c), ext)
    }

    #[test]
    fn specific_equivalence_examples() {
        // K3 minus two reds is the red/blue alternation on the leftovers
        assert_eq!(
            normalize(BaseKind::K3, Removal::TwoSeparate(Red, Red)),
            Normalized::Kind(Kind::K2, BTreeMap::from([(Blue, Red), (Purple, Blue)]))
        );
        // P3 minus a consecutive purple+red pair behaves like alternation
        assert!(matches!(
            normalize(BaseKind::P3, Removal::TwoConsecutive(Red, Purple)),
            Normalized::Kind(Kind::K2, _)
        ));
        // K3 minus one red and one blue (independent) is vacuous
        assert_eq!(
            normalize(BaseKind::K3, Removal::TwoSeparate(Red, Blue)),
            Normalized::AlwaysSatisfied
        );
        // same-colored consecutive insertions can never work
        assert_eq!(
            normalize(BaseKind::P3, Removal::TwoConsecutive(Purple, Purple)),
            Normalized::NeverSatisfiable
        );
    }

    #[test]
    fn p3_minus_p_needs_purple_between_a_same_colored_pair() {
        // red/blue not alternating alone is not enough at degree five
        let order = [Red, Blue, Blue, Purple, Red];
        assert!(!kind_satisfied(Kind::P3MinusP, &order));
        assert!(!raw_satisfied(BaseKind::P3, Removal::Single(Purple), &order));
        let good = [Red, Blue, Purple, Blue, Red];
        assert!(kind_satisfied(Kind::P3MinusP, &good));
        assert!(raw_satisfied(BaseKind::P3, Removal::Single(Purple), &good));
    }
}
