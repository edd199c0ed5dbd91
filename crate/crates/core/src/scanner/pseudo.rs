//! Colouring of the unit circle around a trichromatic vertex by the colours
//! outside the vertex's own multicolour.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_traits::{One, Zero};

use super::ScanError;
use crate::circlecolor::{approx_tolerance, tolerance_ties, ArcColoring};
use crate::geom::{from_f64_grid, int, rat, segment_circle_intersection, segment_point_distance_sq, Location, Point, Scalar};
use crate::planemap::{ColorId, PlanarMap};

/// Denominator exponent of approximate crossing angles (`2^-32` turns).
pub const ANGLE_BITS: u32 = 32;

/// A point where a boundary segment crosses the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleCrossing {
    /// Turns; exact when `exact`, otherwise rounded to the `2^-32` grid.
    pub angle: Scalar,
    pub approx: f64,
    pub exact: bool,
    /// `(adjacency index, segment index)` of every segment through the point.
    pub segments: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudoColoring {
    pub center: Point,
    /// Original colour to normalised colour: the centre's colours become
    /// 4, 5, 6 and the rest 1, 2, 3, both in increasing order.
    pub relabel: BTreeMap<ColorId, ColorId>,
    pub crossings: Vec<CircleCrossing>,
    pub coloring: ArcColoring,
    /// Exactness of each breakpoint of `coloring`.
    pub exact: Vec<bool>,
    /// Breakpoint pairs whose separation is within tolerance of 1/6 turn.
    pub ties: Vec<(usize, usize)>,
    /// Fewer than three arcs.
    pub degenerate: bool,
}

impl PseudoColoring {
    pub fn original(&self, c: ColorId) -> Option<ColorId> {
        self.relabel.iter().find(|(_, &v)| v == c).map(|(&k, _)| k)
    }

    pub fn crossing_at(&self, angle: &Scalar) -> Option<&CircleCrossing> {
        self.crossings.iter().find(|c| &c.angle == angle)
    }
}

/// Exact angle in turns for circle points with a coordinate in
/// `{0, ±1/2, ±1}`; the other coordinate's sign comes from `approx`.
fn exact_turn(x: Option<&Scalar>, y: Option<&Scalar>, approx: [f64; 2]) -> Option<Scalar> {
    let half = rat(1, 2);
    let pos_x = approx[0] > 0.0;
    let pos_y = approx[1] > 0.0;
    if let Some(y) = y {
        let t = if y.is_zero() {
            if pos_x { rat(0, 1) } else { rat(1, 2) }
        } else if y == &int(1) {
            rat(1, 4)
        } else if y == &int(-1) {
            rat(3, 4)
        } else if y == &half {
            if pos_x { rat(1, 12) } else { rat(5, 12) }
        } else if y == &-half.clone() {
            if pos_x { rat(11, 12) } else { rat(7, 12) }
        } else {
            return exact_turn(x, None, approx);
        };
        return Some(t);
    }
    let x = x?;
    Some(if x.is_zero() {
        if pos_y { rat(1, 4) } else { rat(3, 4) }
    } else if x == &int(1) {
        rat(0, 1)
    } else if x == &int(-1) {
        rat(1, 2)
    } else if x == &half {
        if pos_y { rat(1, 6) } else { rat(5, 6) }
    } else if x == &-half {
        if pos_y { rat(1, 3) } else { rat(2, 3) }
    } else {
        return None;
    })
}

/// A rational point on the unit circle near `turns`.
fn rational_on_circle(turns: f64) -> Point {
    let phi = turns * TAU;
    let (flip, ang) = if phi.cos() >= 0.0 { (false, phi) } else { (true, phi - PI) };
    let t = from_f64_grid((ang / 2.0).tan(), 40);
    let d = Scalar::one() + &t * &t;
    let x = (Scalar::one() - &t * &t) / &d;
    let y = int(2) * &t / &d;
    if flip { Point::new(-x, -y) } else { Point::new(x, y) }
}

fn circle_inside_window(map: &PlanarMap, u: &Point) -> bool {
    let w = map.window();
    w.locate(u) == Location::Inside
        && w.edges().all(|(a, b)| segment_point_distance_sq(u, a, b).map(|d| d >= Scalar::one()).unwrap_or(false))
}

fn relabeling(map: &PlanarMap, own: &[ColorId]) -> Result<BTreeMap<ColorId, ColorId>, ScanError> {
    if map.k() > 6 {
        return Err(ScanError::TooManyColors);
    }
    let mut out = BTreeMap::new();
    for (i, &c) in own.iter().enumerate() {
        out.insert(c, 4 + i as ColorId);
    }
    let mut next = 1;
    for c in 1..=map.k() {
        if !out.contains_key(&c) {
            out.insert(c, next);
            next += 1;
        }
    }
    Ok(out)
}

/// Colours `ω(u)` by the normalised colours 1, 2, 3 of the regions it passes
/// through. Crossing existence is decided exactly; crossing angles are exact
/// where the point has a coordinate in `{0, ±1/2, ±1}` relative to `u`.
pub fn pseudo_coloring(map: &PlanarMap, u: &Point) -> Result<PseudoColoring, ScanError> {
    let info = map.vertex_info(u).map_err(|_| ScanError::NotTrichromatic(u.clone()))?;
    if !info.is_trichromatic() {
        return Err(ScanError::NotTrichromatic(u.clone()));
    }
    if !circle_inside_window(map, u) {
        return Err(ScanError::CircleOutsideWindow(u.clone()));
    }
    let own: Vec<ColorId> = info.multicolor.iter().copied().collect();
    let relabel = relabeling(map, &own)?;
    let one = Scalar::one();
    for v in map.vertices() {
        if v.location.dist_sq(u) == one {
            let low = v.multicolor.iter().filter(|c| relabel[c] <= 3).count();
            if low >= 3 {
                return Err(ScanError::TrichromaticOnCircle(v.location.clone()));
            }
        }
    }
    let mut found: BTreeMap<Scalar, CircleCrossing> = BTreeMap::new();
    for (ai, adj) in map.adjacency().iter().enumerate() {
        for (si, (a, b)) in adj.segments.iter().enumerate() {
            let hits = segment_circle_intersection(a, b, u, &one).expect("boundary segments are non-degenerate");
            let rel = a.sub(u);
            let d = b.sub(a);
            for hit in hits.into_iter().filter(|h| !h.tangent) {
                let t = hit.t.approx();
                let (ra, dd) = (rel.to_f64(), d.to_f64());
                let approx_pt = [ra[0] + t * dd[0], ra[1] + t * dd[1]];
                let approx = (approx_pt[1].atan2(approx_pt[0]) / TAU).rem_euclid(1.0);
                let tq = hit.t.exact();
                let coord = |r: &Scalar, dc: &Scalar| match &tq {
                    Some(tq) => Some(r + tq * dc),
                    None if dc.is_zero() => Some(r.clone()),
                    None => None,
                };
                let ex = exact_turn(coord(&rel.x, &d.x).as_ref(), coord(&rel.y, &d.y).as_ref(), approx_pt);
                let exact = ex.is_some();
                let angle = ex.unwrap_or_else(|| {
                    let g = from_f64_grid(approx, ANGLE_BITS);
                    if g >= one { Scalar::zero() } else { g }
                });
                found
                    .entry(angle.clone())
                    .or_insert_with(|| CircleCrossing { angle, approx, exact, segments: vec![] })
                    .segments
                    .push((ai, si));
            }
        }
    }
    let crossings: Vec<CircleCrossing> = found.into_values().collect();
    let sample = |turns: f64| -> Result<ColorId, ScanError> {
        for k in 0..8 {
            let p = u.add(&rational_on_circle(turns + k as f64 * 1e-7));
            if let Some(r) = map.region_containing(&p) {
                let c = relabel[&map.color(r)];
                return if c <= 3 { Ok(c) } else { Err(ScanError::EmptyPseudoColor(turns)) };
            }
        }
        Err(ScanError::EmptyPseudoColor(turns))
    };
    let n = crossings.len();
    let mut arcs: Vec<(Scalar, bool, ColorId)> = Vec::with_capacity(n);
    for i in 0..n {
        let s = crossings[i].approx;
        let e = if i + 1 < n { crossings[i + 1].approx } else { crossings[0].approx + 1.0 };
        let e = if e <= s { e + 1.0 } else { e };
        arcs.push((crossings[i].angle.clone(), crossings[i].exact, sample((s + e) / 2.0)?));
    }
    if arcs.is_empty() {
        arcs.push((Scalar::zero(), true, sample(0.0)?));
    }
    let m = arcs.len();
    let kept: Vec<(Scalar, bool, ColorId)> =
        (0..m).filter(|&i| arcs[i].2 != arcs[(i + m - 1) % m].2).map(|i| arcs[i].clone()).collect();
    let kept = if kept.is_empty() { vec![(Scalar::zero(), true, arcs[0].2)] } else { kept };
    let exact: Vec<bool> = kept.iter().map(|a| a.1).collect();
    let coloring = ArcColoring::new(kept.iter().map(|a| a.0.clone()).collect(), kept.iter().map(|a| a.2).collect())?;
    let ties = tolerance_ties(&coloring, &exact, &approx_tolerance());
    let degenerate = coloring.len() < 3;
    Ok(PseudoColoring { center: u.clone(), relabel, crossings, coloring, exact, ties, degenerate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::crafted;

    #[test]
    fn hexagon_crossings_are_exact_sixths() {
        let m = crafted("hexagon-disk").unwrap();
        let pc = pseudo_coloring(&m, &Point::origin()).unwrap();
        assert_eq!(pc.relabel.values().filter(|&&c| c >= 4).count(), 3);
        let bp = pc.coloring.breakpoints();
        assert_eq!(bp.len(), 6);
        assert!(bp.iter().enumerate().all(|(i, t)| *t == rat(i as i64, 6)));
        assert!(!pc.degenerate);
        for c in 4..=6 {
            assert!(pc.original(c).is_some());
        }
    }

    #[test]
    fn non_vertex_centre_is_rejected() {
        let m = crafted("hexagon-disk").unwrap();
        let p = Point::from_ratios(1, 7, 1, 9);
        assert_eq!(pseudo_coloring(&m, &p).unwrap_err(), ScanError::NotTrichromatic(p));
    }

    #[test]
    fn near_proper_colouring_is_proper() {
        let m = crafted("near-proper-disk").unwrap();
        let pc = pseudo_coloring(&m, &Point::origin()).unwrap();
        assert!(crate::circlecolor::circle_proper(&pc.coloring).witness.is_none());
        assert!(pc.coloring.colors().iter().all(|c| (1..=3).contains(c)));
    }
}
