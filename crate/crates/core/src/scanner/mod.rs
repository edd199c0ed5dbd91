//! Detectors for configurations that no proper 6-colouring can contain.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::circlecolor::CircleError;
use crate::geom::{int, segment_point_distance_sq, segment_segment_distance_sq, Point, Scalar};
use crate::planemap::{describe_point, ColorId, PlanarMap, VertexInfo};

mod disk;
mod pseudo;

pub use disk::{disk_analysis, DiskAnalysis, DiskOutcome, HypothesisStep, TracedBoundary};
pub use pseudo::{pseudo_coloring, CircleCrossing, PseudoColoring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    /// Two trichromatic points with one multicolour, strictly between 1 and 2 apart.
    SameMulticolorPair,
    /// Two trichromatic points with disjoint multicolours, less than 2 apart.
    DisjointMulticolorPair,
    /// A point of chromaticity at least 4.
    Chromaticity4,
    /// A circle colouring made of six cyclic arcs of 1/6 turn.
    HexagonConfig,
    /// A cyclic circle colouring with no far-apart triple for some pair.
    TripleForced,
    /// Two bichromatic points with one colour pair exactly 1 apart.
    BichromaticUnit,
}

impl ViolationKind {
    pub const ALL: [ViolationKind; 6] = [
        ViolationKind::SameMulticolorPair,
        ViolationKind::DisjointMulticolorPair,
        ViolationKind::Chromaticity4,
        ViolationKind::HexagonConfig,
        ViolationKind::TripleForced,
        ViolationKind::BichromaticUnit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ViolationKind::SameMulticolorPair => "same-multicolor-pair",
            ViolationKind::DisjointMulticolorPair => "disjoint-multicolor-pair",
            ViolationKind::Chromaticity4 => "chromaticity-4",
            ViolationKind::HexagonConfig => "hexagon-config",
            ViolationKind::TripleForced => "triple-forced",
            ViolationKind::BichromaticUnit => "bichromatic-unit",
        }
    }

    /// Accepts the long name or the short tags `t7`, `f32`, `t3`, `l55`,
    /// `t10`, `l15`.
    pub fn parse(s: &str) -> Option<ViolationKind> {
        let s = s.trim().to_ascii_lowercase();
        ViolationKind::ALL.into_iter().find(|k| k.name() == s || k.short() == s)
    }

    pub fn short(&self) -> &'static str {
        match self {
            ViolationKind::SameMulticolorPair => "t7",
            ViolationKind::DisjointMulticolorPair => "f32",
            ViolationKind::Chromaticity4 => "t3",
            ViolationKind::HexagonConfig => "l55",
            ViolationKind::TripleForced => "t10",
            ViolationKind::BichromaticUnit => "l15",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub kind: ViolationKind,
    pub points: Vec<Point>,
    pub multicolors: Vec<BTreeSet<ColorId>>,
    pub segments: Vec<(Point, Point)>,
    pub dist_sq: Option<Scalar>,
    /// Reported for maps with more than 6 colours, where nothing is forbidden.
    pub informational: bool,
}

impl Violation {
    fn new(kind: ViolationKind, informational: bool) -> Violation {
        Violation { kind, points: vec![], multicolors: vec![], segments: vec![], dist_sq: None, informational }
    }

    /// Recomputes the violation from the map with exact arithmetic.
    pub fn recheck(&self, map: &PlanarMap) -> bool {
        match self.kind {
            ViolationKind::Chromaticity4 => self.points.len() == 1 && {
                let info = describe_point(map, &self.points[0]);
                info.chromaticity >= 4 && self.multicolors.first() == Some(&info.multicolor)
            },
            ViolationKind::SameMulticolorPair | ViolationKind::DisjointMulticolorPair => self.recheck_pair(map),
            ViolationKind::BichromaticUnit => self.recheck_unit(map),
            ViolationKind::HexagonConfig | ViolationKind::TripleForced => disk::recheck_circle(self, map),
        }
    }

    fn recheck_pair(&self, map: &PlanarMap) -> bool {
        let [p, q] = self.points.as_slice() else { return false };
        let (a, b) = (describe_point(map, p), describe_point(map, q));
        if !a.is_trichromatic() || !b.is_trichromatic() || !extends(&a) || !extends(&b) {
            return false;
        }
        if self.multicolors != [a.multicolor.clone(), b.multicolor.clone()] {
            return false;
        }
        let d = p.dist_sq(q);
        if self.dist_sq.as_ref() != Some(&d) {
            return false;
        }
        match self.kind {
            ViolationKind::SameMulticolorPair => a.multicolor == b.multicolor && d > int(1) && d < int(4),
            _ => a.multicolor.is_disjoint(&b.multicolor) && d > Scalar::zero() && d < int(4),
        }
    }

    fn recheck_unit(&self, map: &PlanarMap) -> bool {
        let [(a, b), (c, d)] = self.segments.as_slice() else { return false };
        let pair = self.multicolors.first();
        let mid = |x: &Point, y: &Point| x.lerp(y, &Scalar::new(1.into(), 2.into()));
        if Some(&map.multicolor(&mid(a, b))) != pair || Some(&map.multicolor(&mid(c, d))) != pair {
            return false;
        }
        match self.points.as_slice() {
            [p, q] => {
                p.dist_sq(q) == Scalar::one()
                    && Some(&map.multicolor(p)) == pair
                    && Some(&map.multicolor(q)) == pair
                    && on_seg(p, a, b)
                    && on_seg(q, c, d)
            }
            [] => {
                let (lo, hi) = extent_sq(a, b, c, d);
                lo < Scalar::one() && hi > Scalar::one()
            }
            _ => false,
        }
    }
}

fn on_seg(p: &Point, a: &Point, b: &Point) -> bool {
    segment_point_distance_sq(p, a, b).map(|d| d.is_zero()).unwrap_or(false)
}

/// Whether boundary rays at the vertex separate every pair of its colours.
fn extends(v: &VertexInfo) -> bool {
    let cols: Vec<ColorId> = v.multicolor.iter().copied().collect();
    let pairs = v.boundary_pairs();
    (0..cols.len()).all(|i| ((i + 1)..cols.len()).all(|j| pairs.contains(&(cols[i], cols[j]))))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScanError {
    #[error("{0} is not a trichromatic vertex")]
    NotTrichromatic(Point),
    #[error("map uses more than 6 colours")]
    TooManyColors,
    #[error("unit circle around {0} leaves the window")]
    CircleOutsideWindow(Point),
    #[error("point {0} on the circle carries three pseudo-colours")]
    TrichromaticOnCircle(Point),
    #[error("circle point at {0} turns has an empty pseudo-colour")]
    EmptyPseudoColor(f64),
    #[error(transparent)]
    Circle(#[from] CircleError),
}

/// Points of chromaticity at least 4; informational for maps with `k > 6`.
pub fn chromaticity_scan(map: &PlanarMap) -> Vec<Violation> {
    let info = map.k() > 6;
    let mut out: Vec<Violation> = map
        .vertices()
        .iter()
        .filter(|v| v.chromaticity >= 4)
        .map(|v| Violation {
            points: vec![v.location.clone()],
            multicolors: vec![v.multicolor.clone()],
            ..Violation::new(ViolationKind::Chromaticity4, info)
        })
        .collect();
    out.sort();
    out
}

/// Pair verdict for two trichromatic vertices, if any.
pub(crate) fn pair_violation(a: &VertexInfo, b: &VertexInfo, informational: bool) -> Option<Violation> {
    let d = a.location.dist_sq(&b.location);
    let kind = if a.multicolor == b.multicolor && d > int(1) && d < int(4) {
        ViolationKind::SameMulticolorPair
    } else if a.multicolor.is_disjoint(&b.multicolor) && d < int(4) && !d.is_zero() {
        ViolationKind::DisjointMulticolorPair
    } else {
        return None;
    };
    let (a, b) = if a.location <= b.location { (a, b) } else { (b, a) };
    Some(Violation {
        points: vec![a.location.clone(), b.location.clone()],
        multicolors: vec![a.multicolor.clone(), b.multicolor.clone()],
        dist_sq: Some(d),
        ..Violation::new(kind, informational)
    })
}

/// Trichromatic vertex pairs with equal multicolours at distance in (1, 2)
/// or disjoint multicolours at distance below 2.
pub fn trichromatic_pair_scan(map: &PlanarMap) -> Vec<Violation> {
    let info = map.k() > 6;
    let verts: Vec<&VertexInfo> = map.vertices().iter().filter(|v| v.is_trichromatic() && extends(v)).collect();
    let mut out = Vec::new();
    for i in 0..verts.len() {
        for j in (i + 1)..verts.len() {
            if let Some(v) = pair_violation(verts[i], verts[j], info) {
                out.push(v);
            }
        }
    }
    out.sort();
    out
}

/// Minimum and maximum squared distance between points of two segments.
pub fn extent_sq(a: &Point, b: &Point, c: &Point, d: &Point) -> (Scalar, Scalar) {
    let lo = segment_segment_distance_sq(a, b, c, d);
    let hi = [a.dist_sq(c), a.dist_sq(d), b.dist_sq(c), b.dist_sq(d)]
        .into_iter()
        .max()
        .expect("four candidates");
    (lo, hi)
}

fn closest_on(p: &Point, c: &Point, d: &Point) -> Point {
    let e = d.sub(c);
    let t = p.sub(c).dot(&e) / e.norm_sq();
    let t = t.clamp(Scalar::zero(), Scalar::one());
    c.lerp(d, &t)
}

/// Rational point pairs where a distance extreme can be attained.
fn extreme_candidates(a: &Point, b: &Point, c: &Point, d: &Point) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    for p in [a, b] {
        out.push((p.clone(), closest_on(p, c, d)));
        for q in [c, d] {
            out.push((p.clone(), q.clone()));
        }
    }
    for q in [c, d] {
        out.push((closest_on(q, a, b), q.clone()));
    }
    let e = b.sub(a);
    if e.cross(&d.sub(c)).is_zero() {
        let tc = c.sub(a).dot(&e) / e.norm_sq();
        let td = d.sub(a).dot(&e) / e.norm_sq();
        let lo = tc.clone().min(td.clone()).max(Scalar::zero());
        let hi = tc.max(td).min(Scalar::one());
        if lo < hi {
            let p = a.lerp(b, &((lo + hi) / int(2)));
            let q = closest_on(&p, c, d);
            out.push((p, q));
        }
    }
    out
}

/// Pairs of boundary segments separating one colour pair that contain
/// bichromatic points exactly 1 apart.
pub fn bichromatic_unit_scan(map: &PlanarMap) -> Vec<Violation> {
    let info = map.k() > 6;
    let mut segs: Vec<((ColorId, ColorId), Point, Point)> = Vec::new();
    for adj in map.adjacency() {
        let (ca, cb) = (map.color(adj.a), map.color(adj.b));
        for (p, q) in &adj.segments {
            let (p, q) = if p <= q { (p, q) } else { (q, p) };
            segs.push(((ca.min(cb), ca.max(cb)), p.clone(), q.clone()));
        }
    }
    segs.sort();
    let boxes: Vec<[f64; 4]> = segs
        .iter()
        .map(|(_, p, q)| {
            let (p, q) = (p.to_f64(), q.to_f64());
            [p[0].min(q[0]), p[1].min(q[1]), p[0].max(q[0]), p[1].max(q[1])]
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..segs.len() {
        for j in i..segs.len() {
            if segs[i].0 != segs[j].0 {
                continue;
            }
            let (bi, bj) = (boxes[i], boxes[j]);
            let gx = (bj[0] - bi[2]).max(bi[0] - bj[2]).max(0.0);
            let gy = (bj[1] - bi[3]).max(bi[1] - bj[3]).max(0.0);
            if gx * gx + gy * gy > 1.0 + 1e-9 {
                continue;
            }
            let (pair, a, b) = &segs[i];
            let (_, c, d) = &segs[j];
            let pair_set: BTreeSet<ColorId> = [pair.0, pair.1].into_iter().collect();
            let (lo, hi) = extent_sq(a, b, c, d);
            let one = Scalar::one();
            let points = if lo < one && hi > one {
                Some(vec![])
            } else if lo <= one && hi >= one {
                extreme_candidates(a, b, c, d)
                    .into_iter()
                    .find(|(p, q)| {
                        p.dist_sq(q) == one && map.multicolor(p) == pair_set && map.multicolor(q) == pair_set
                    })
                    .map(|(p, q)| vec![p, q])
            } else {
                None
            };
            if let Some(points) = points {
                out.push(Violation {
                    points,
                    multicolors: vec![pair_set],
                    segments: vec![(a.clone(), b.clone()), (c.clone(), d.clone())],
                    ..Violation::new(ViolationKind::BichromaticUnit, info)
                });
            }
        }
    }
    out.sort();
    out
}

/// All scans over the whole map, sorted.
pub fn scan_all(map: &PlanarMap, kinds: &[ViolationKind]) -> Vec<Violation> {
    let mut out = Vec::new();
    if kinds.contains(&ViolationKind::Chromaticity4) {
        out.extend(chromaticity_scan(map));
    }
    if kinds.contains(&ViolationKind::SameMulticolorPair) || kinds.contains(&ViolationKind::DisjointMulticolorPair) {
        out.extend(trichromatic_pair_scan(map).into_iter().filter(|v| kinds.contains(&v.kind)));
    }
    if kinds.contains(&ViolationKind::BichromaticUnit) {
        out.extend(bichromatic_unit_scan(map));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{crafted, random_map};
    use crate::geom::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn of_kind(vs: &[Violation], k: ViolationKind) -> Vec<&Violation> {
        vs.iter().filter(|v| v.kind == k).collect()
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ViolationKind::ALL {
            assert_eq!(ViolationKind::parse(k.name()), Some(k));
            assert_eq!(ViolationKind::parse(k.short()), Some(k));
        }
        assert_eq!(ViolationKind::parse("nope"), None);
    }

    #[test]
    fn same_multicolor_fixture() {
        let m = crafted("t7").unwrap();
        let vs = scan_all(&m, &ViolationKind::ALL);
        let t7 = of_kind(&vs, ViolationKind::SameMulticolorPair);
        assert_eq!(t7.len(), 1);
        assert_eq!(t7[0].dist_sq, Some(rat(9, 4)));
        assert!(vs.iter().all(|v| v.recheck(&m) && !v.informational));
    }

    #[test]
    fn disjoint_multicolor_fixture() {
        let m = crafted("f32").unwrap();
        let vs = scan_all(&m, &ViolationKind::ALL);
        let f = of_kind(&vs, ViolationKind::DisjointMulticolorPair);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].dist_sq, Some(rat(361, 100)));
        assert!(of_kind(&vs, ViolationKind::SameMulticolorPair).is_empty());
        assert!(vs.iter().all(|v| v.recheck(&m)));
    }

    #[test]
    fn grid4_chromaticity() {
        let m = crafted("grid4").unwrap();
        let vs = chromaticity_scan(&m);
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].points, vec![Point::from_ints(1, 1)]);
        assert_eq!(vs[0].multicolors[0], BTreeSet::from([1, 2, 3, 4]));
        assert!(vs[0].recheck(&m));
    }

    #[test]
    fn parallel_boundaries_unit_apart() {
        let m = crafted("l15").unwrap();
        let vs = bichromatic_unit_scan(&m);
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].multicolors[0], BTreeSet::from([1, 2]));
        assert!(vs[0].recheck(&m));
    }

    #[test]
    fn tampered_violations_fail_recheck() {
        let m = crafted("t7").unwrap();
        let mut v = trichromatic_pair_scan(&m).remove(0);
        v.dist_sq = Some(int(2));
        assert!(!v.recheck(&m));
        let mut v = trichromatic_pair_scan(&m).remove(0);
        v.points[1] = Point::from_ints(2, 2);
        assert!(!v.recheck(&m));
        let mut v = chromaticity_scan(&crafted("grid4").unwrap()).remove(0);
        v.points[0] = Point::from_ints(1, 0);
        assert!(!v.recheck(&m));
    }

    #[test]
    fn extent_of_segments() {
        let p = |x: i64, y: i64| Point::from_ints(x, y);
        let (lo, hi) = extent_sq(&p(0, 0), &p(2, 0), &p(0, 1), &p(2, 1));
        assert_eq!((lo, hi), (int(1), int(5)));
        let (lo, hi) = extent_sq(&p(0, 0), &p(1, 0), &p(3, 0), &p(4, 0));
        assert_eq!((lo, hi), (int(4), int(16)));
    }

    #[test]
    fn pair_scan_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let m = random_map(&mut rng, 60, 6);
            let mut expected = Vec::new();
            let vs = m.vertices();
            for i in 0..vs.len() {
                for j in 0..vs.len() {
                    let (a, b) = (&vs[i], &vs[j]);
                    if a.location >= b.location {
                        continue;
                    }
                    let (ma, mb) = (m.multicolor(&a.location), m.multicolor(&b.location));
                    if ma.len() != 3 || mb.len() != 3 || !extends(a) || !extends(b) {
                        continue;
                    }
                    let d = a.location.dist_sq(&b.location);
                    let same = ma == mb && d > int(1) && d < int(4);
                    let disjoint = ma.is_disjoint(&mb) && d < int(4);
                    if same || disjoint {
                        expected.push((a.location.clone(), b.location.clone(), same));
                    }
                }
            }
            expected.sort();
            let mut got: Vec<_> = trichromatic_pair_scan(&m)
                .into_iter()
                .map(|v| (v.points[0].clone(), v.points[1].clone(), v.kind == ViolationKind::SameMulticolorPair))
                .collect();
            got.sort();
            assert_eq!(got, expected);
        }
    }
}
