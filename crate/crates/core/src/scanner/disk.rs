//! The radius-3 disk pipeline: pick a trichromatic point near the centre,
//! colour its unit circle, make the colouring cyclic, trace boundaries from
//! far-apart bichromatic triples inwards and search the resulting
//! trichromatic points for a forbidden pair.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;

use super::{extends, pair_violation, pseudo_coloring, PseudoColoring, ScanError, Violation, ViolationKind};
use crate::circlecolor::{circle_proper, find_triple, hexagon_config_check, make_cyclic, ArcColoring};
use crate::geom::{int, segment_point_distance_sq, Location, Point, Scalar};
use crate::planemap::{describe_point, high_degree_trichromatic, ColorId, PlanarMap, VertexInfo};
use crate::properness::{properness_check, ForbiddenInterval};

/// Pipeline precondition that an input map broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum HypothesisStep {
    /// The map declares more than 6 colours.
    SixColors,
    /// The radius-3 disk is not inside the window.
    DiskInWindow,
    /// A trichromatic vertex of degree above 3 lies in the disk.
    ThreeColCondition,
    /// No trichromatic vertex within distance 1 of the centre.
    TrichromaticPoint,
    /// The map is not proper near the chosen circle.
    Properness,
    /// The circle colouring could not be made cyclic.
    Cyclic,
    /// The cyclic colouring has fewer than 9 bichromatic points.
    NineBichromatic,
    /// The census contains no forbidden pair.
    Census,
}

impl HypothesisStep {
    pub fn name(&self) -> &'static str {
        match self {
            HypothesisStep::SixColors => "six-colors",
            HypothesisStep::DiskInWindow => "disk-in-window",
            HypothesisStep::ThreeColCondition => "3col",
            HypothesisStep::TrichromaticPoint => "no-trichromatic-point",
            HypothesisStep::Properness => "properness",
            HypothesisStep::Cyclic => "cyclic",
            HypothesisStep::NineBichromatic => "nine-bichromatic",
            HypothesisStep::Census => "census",
        }
    }
}

impl fmt::Display for HypothesisStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Boundary followed from a bichromatic circle point into the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct TracedBoundary {
    pub angle: Scalar,
    /// Original colours on either side.
    pub pair: (ColorId, ColorId),
    pub path: Vec<Point>,
    /// Vertex where the boundary ends, or `None` if it returns to the circle.
    pub terminal: Option<Point>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiskOutcome {
    Violations(Vec<Violation>),
    HypothesisFailure {
        step: HypothesisStep,
        points: Vec<Point>,
        regions: Vec<(usize, usize)>,
        note: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiskAnalysis {
    pub center: Point,
    pub u: Option<Point>,
    /// Trichromatic points reached by the pipeline with their multicolours.
    pub census: Vec<(Point, BTreeSet<ColorId>)>,
    pub pseudo: Option<PseudoColoring>,
    pub cyclic: Option<ArcColoring>,
    pub traced: Vec<TracedBoundary>,
    pub outcome: DiskOutcome,
}

impl DiskAnalysis {
    fn new(center: &Point) -> DiskAnalysis {
        DiskAnalysis {
            center: center.clone(),
            u: None,
            census: vec![],
            pseudo: None,
            cyclic: None,
            traced: vec![],
            outcome: DiskOutcome::Violations(vec![]),
        }
    }

    fn fail(mut self, step: HypothesisStep, points: Vec<Point>, regions: Vec<(usize, usize)>, note: String) -> Self {
        self.outcome = DiskOutcome::HypothesisFailure { step, points, regions, note };
        self
    }

    fn found(mut self, mut v: Vec<Violation>) -> Self {
        v.sort();
        v.dedup();
        self.outcome = DiskOutcome::Violations(v);
        self
    }

    pub fn violations(&self) -> &[Violation] {
        match &self.outcome {
            DiskOutcome::Violations(v) => v,
            DiskOutcome::HypothesisFailure { .. } => &[],
        }
    }

    pub fn failure(&self) -> Option<HypothesisStep> {
        match &self.outcome {
            DiskOutcome::HypothesisFailure { step, .. } => Some(*step),
            DiskOutcome::Violations(_) => None,
        }
    }
}

fn disk_inside_window(map: &PlanarMap, c: &Point, r_sq: &Scalar) -> bool {
    let w = map.window();
    w.locate(c) == Location::Inside
        && w.edges().all(|(a, b)| segment_point_distance_sq(c, a, b).map(|d| &d >= r_sq).unwrap_or(false))
}

fn properness_failure(a: DiskAnalysis, map: &PlanarMap, points: Vec<Point>, note: String) -> DiskAnalysis {
    let report = properness_check(map, &ForbiddenInterval::unit());
    let regions = report.flagged_pairs().into_iter().take(1).collect();
    a.fail(HypothesisStep::Properness, points, regions, note)
}

/// Follows the boundary through `pc`'s crossing at `angle` inwards.
fn trace(map: &PlanarMap, pc: &PseudoColoring, angle: &Scalar, pair: (ColorId, ColorId)) -> TracedBoundary {
    let u = &pc.center;
    let orig = (pc.original(pair.0).unwrap_or(0), pc.original(pair.1).unwrap_or(0));
    let mut out = TracedBoundary { angle: angle.clone(), pair: orig, path: vec![], terminal: None };
    let Some(crossing) = pc.crossing_at(angle) else { return out };
    let adj_all = map.adjacency();
    let want: BTreeSet<ColorId> = [orig.0, orig.1].into_iter().collect();
    let Some(&(ai, si)) = crossing.segments.iter().find(|(ai, _)| {
        let adj = &adj_all[*ai];
        [map.color(adj.a), map.color(adj.b)].into_iter().collect::<BTreeSet<_>>() == want
    }) else {
        return out;
    };
    let adj = &adj_all[ai];
    let one = Scalar::one();
    let (a, b) = &adj.segments[si];
    let (mut e, mut cur) = if a.dist_sq(u) < one {
        (a.clone(), si)
    } else if b.dist_sq(u) < one {
        (b.clone(), si)
    } else {
        return out;
    };
    for _ in 0..=adj.segments.len() {
        out.path.push(e.clone());
        if map.vertex_info(&e).is_ok() {
            out.terminal = Some(e);
            return out;
        }
        let next = adj
            .segments
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != cur)
            .find_map(|(j, (p, q))| {
                if p == &e {
                    Some((j, q.clone()))
                } else if q == &e {
                    Some((j, p.clone()))
                } else {
                    None
                }
            });
        match next {
            Some((j, f)) if f.dist_sq(u) < one => {
                e = f;
                cur = j;
            }
            _ => return out,
        }
    }
    out
}

/// Runs the disk pipeline around `center`; every outcome is either a list
/// of violations or the first broken precondition.
pub fn disk_analysis(map: &PlanarMap, center: &Point) -> DiskAnalysis {
    let a = DiskAnalysis::new(center);
    if map.k() > 6 {
        return a.fail(HypothesisStep::SixColors, vec![], vec![], format!("map declares {} colours", map.k()));
    }
    let r3 = int(9);
    if !disk_inside_window(map, center, &r3) {
        return a.fail(HypothesisStep::DiskInWindow, vec![center.clone()], vec![], "radius-3 disk leaves the window".into());
    }
    let in_disk: Vec<&VertexInfo> = map.vertices().iter().filter(|v| v.location.dist_sq(center) <= r3).collect();
    let chroma: Vec<Violation> = super::chromaticity_scan(map)
        .into_iter()
        .filter(|v| v.points[0].dist_sq(center) <= r3)
        .collect();
    if !chroma.is_empty() {
        return a.found(chroma);
    }
    let high = high_degree_trichromatic(map, center, &r3);
    if !high.is_empty() {
        return a.fail(HypothesisStep::ThreeColCondition, high, vec![], "trichromatic vertex of degree above 3".into());
    }
    let Some(u) = in_disk
        .iter()
        .filter(|v| v.is_trichromatic() && v.location.dist_sq(center) <= Scalar::one())
        .min_by(|x, y| {
            x.location.dist_sq(center).cmp(&y.location.dist_sq(center)).then_with(|| x.location.cmp(&y.location))
        })
        .map(|v| (*v).clone())
    else {
        return a.fail(HypothesisStep::TrichromaticPoint, vec![], vec![], "census within distance 1 is empty".into());
    };
    let mut a = a;
    a.u = Some(u.location.clone());
    a.census.push((u.location.clone(), u.multicolor.clone()));
    let pc = match pseudo_coloring(map, &u.location) {
        Ok(pc) => pc,
        Err(ScanError::TrichromaticOnCircle(p)) => {
            let v = pair_violation(&u, &describe_point(map, &p), false).into_iter().collect();
            return a.found(v);
        }
        Err(e) => return properness_failure(a, map, vec![u.location.clone()], e.to_string()),
    };
    let check = circle_proper(&pc.coloring);
    a.pseudo = Some(pc.clone());
    if let Some(w) = check.witness {
        return properness_failure(a, map, vec![u.location.clone()], format!("circle colouring is improper: {w}"));
    }
    let cyc = match make_cyclic(&pc.coloring) {
        Ok(c) => c,
        Err(e) => return a.fail(HypothesisStep::Cyclic, vec![u.location.clone()], vec![], e.to_string()),
    };
    a.cyclic = Some(cyc.clone());
    if hexagon_config_check(&cyc) {
        let v = Violation {
            points: vec![u.location.clone()],
            multicolors: vec![u.multicolor.clone()],
            ..Violation::new(ViolationKind::HexagonConfig, false)
        };
        return a.found(vec![v]);
    }
    let bich = cyc.bichromatic_points();
    if bich.len() < 9 {
        return a.fail(
            HypothesisStep::NineBichromatic,
            vec![u.location.clone()],
            vec![],
            format!("cyclic colouring has {} bichromatic points", bich.len()),
        );
    }
    let mut triples = Vec::new();
    for pair in [(1, 2), (1, 3), (2, 3)] {
        match find_triple(&cyc, pair) {
            Some(t) => triples.push((pair, t)),
            None => {
                let v = Violation {
                    points: vec![u.location.clone()],
                    multicolors: vec![[pair.0, pair.1].into_iter().collect()],
                    ..Violation::new(ViolationKind::TripleForced, false)
                };
                return a.found(vec![v]);
            }
        }
    }
    for (pair, t) in &triples {
        for p in t {
            a.traced.push(trace(map, &pc, &p.angle, *pair));
        }
    }
    let mut seen: BTreeSet<Point> = [u.location.clone()].into_iter().collect();
    for t in &a.traced {
        if let Some(p) = &t.terminal {
            if seen.insert(p.clone()) {
                a.census.push((p.clone(), describe_point(map, p).multicolor));
            }
        }
    }
    let tri: Vec<&VertexInfo> = in_disk.into_iter().filter(|v| v.is_trichromatic() && extends(v)).collect();
    let mut found = Vec::new();
    for (p, _) in &a.census {
        let pi = describe_point(map, p);
        if !pi.is_trichromatic() || !extends(&pi) {
            continue;
        }
        for q in &tri {
            if let Some(v) = pair_violation(&pi, q, false) {
                found.push(v);
            }
        }
    }
    if found.is_empty() {
        let pts = a.census.iter().map(|c| c.0.clone()).collect();
        return a.fail(HypothesisStep::Census, pts, vec![], "no forbidden pair among traced trichromatic points".into());
    }
    a.found(found)
}

/// Recheck for violations certified by a circle colouring.
pub(super) fn recheck_circle(v: &Violation, map: &PlanarMap) -> bool {
    let Some(u) = v.points.first() else { return false };
    let Ok(pc) = pseudo_coloring(map, u) else { return false };
    let Ok(cyc) = make_cyclic(&pc.coloring) else { return false };
    match v.kind {
        ViolationKind::HexagonConfig => hexagon_config_check(&cyc),
        ViolationKind::TripleForced => {
            let Some(pair) = v.multicolors.first() else { return false };
            let c: Vec<ColorId> = pair.iter().copied().collect();
            c.len() == 2 && cyc.bichromatic_points().len() >= 9 && find_triple(&cyc, (c[0], c[1])).is_none()
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::crafted;

    fn run(name: &str) -> (PlanarMap, DiskAnalysis) {
        let m = crafted(name).unwrap();
        let a = disk_analysis(&m, &Point::origin());
        (m, a)
    }

    #[test]
    fn small_window_fails_disk_check() {
        let m = crafted("t7").unwrap();
        let a = disk_analysis(&m, &m.window_centroid());
        assert_eq!(a.failure(), Some(HypothesisStep::DiskInWindow));
    }

    #[test]
    fn four_colour_point_is_reported() {
        let (m, a) = run("grid4-disk");
        let v = a.violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::Chromaticity4);
        assert!(v[0].recheck(&m));
    }

    #[test]
    fn degree_four_trichromatic_vertex() {
        let (_, a) = run("grid-3col-disk");
        assert_eq!(a.failure(), Some(HypothesisStep::ThreeColCondition));
        match a.outcome {
            DiskOutcome::HypothesisFailure { points, .. } => assert_eq!(points, vec![Point::origin()]),
            _ => unreachable!(),
        }
    }

    #[test]
    fn stripes_have_no_trichromatic_point() {
        let (_, a) = run("stripes-disk");
        assert_eq!(a.failure(), Some(HypothesisStep::TrichromaticPoint));
    }

    #[test]
    fn empty_pseudo_colour_is_a_properness_failure() {
        for name in ["three-arc-disk", "empty-pseudo-disk"] {
            let (_, a) = run(name);
            assert_eq!(a.failure(), Some(HypothesisStep::Properness), "{name}");
            match a.outcome {
                DiskOutcome::HypothesisFailure { regions, .. } => assert!(!regions.is_empty(), "{name}"),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn hexagon_configuration() {
        let (m, a) = run("hexagon-disk");
        let v = a.violations();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::HexagonConfig);
        assert!(v[0].recheck(&m));
        let pc = a.pseudo.as_ref().unwrap();
        assert!(pc.exact.iter().all(|&e| e));
        assert!(pc.coloring.colors().iter().all(|c| (1..=3).contains(c)));
    }

    #[test]
    fn near_proper_disk_reaches_the_census() {
        let (m, a) = run("near-proper-disk");
        assert!(a.cyclic.is_some());
        assert_eq!(a.traced.len(), 9);
        let v = a.violations();
        assert!(!v.is_empty());
        assert!(v.iter().all(|x| x.recheck(&m)));
        assert!(v
            .iter()
            .all(|x| matches!(x.kind, ViolationKind::SameMulticolorPair | ViolationKind::DisjointMulticolorPair)));
    }

    #[test]
    fn step_names_are_distinct() {
        use HypothesisStep::*;
        let all = [SixColors, DiskInWindow, ThreeColCondition, TrichromaticPoint, Properness, Cyclic, NineBichromatic, Census];
        let names: BTreeSet<&str> = all.iter().map(|s| s.name()).collect();
        assert_eq!(names.len(), all.len());
    }
}
