//! Local recolouring: the small-triangle construction and degree reduction.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::{
    build_map_with_unbounded, describe_point, high_degree_trichromatic, line_intersection,
    shared_segments, split_points, ColorId, MapError, PlanarMap,
};
use crate::geom::{
    floor_f64_grid, int, normalize_dir, on_open_segment, orient, segment_point_distance_sq,
    strictly_inside_sweep, to_f64, Location, Point, Polygon, Scalar,
};

/// Result of a successful triangle recolouring.
#[derive(Debug, Clone)]
pub struct TriangleCut {
    pub p: Point,
    pub q: Point,
    pub map: PlanarMap,
}

/// Recolours the interior of a small triangle `pqz` with `color`, where `p`
/// lies on `zx` and `q` on `zy`. The line `pq` is parallel to `xy` and no
/// farther from `z` than the tangent to the unit circle through `x` and `y`
/// whose centre lies across `xy` from `z`.
pub fn recolor_triangle(
    map: &PlanarMap,
    z: &Point,
    x: &Point,
    y: &Point,
    color: ColorId,
) -> Result<TriangleCut, MapError> {
    if orient(z, x, y).is_eq() {
        return Err(MapError::Precondition("x, y and z are collinear".into()));
    }
    if color == 0 || color > map.k() {
        return Err(MapError::InvalidColor { region: usize::MAX, color, k: map.k() });
    }
    let xy_sq = x.dist_sq(y);
    if xy_sq >= int(4) {
        return Err(MapError::NoValidTriangle(format!("|xy|^2 = {xy_sq} >= 4")));
    }
    let (x, y) = if orient(z, x, y).is_gt() { (x, y) } else { (y, x) };
    for end in [x, y] {
        if let Some(w) = foreign_point_on(map, z, end, color) {
            return Err(MapError::Precondition(format!(
                "segment {z}-{end} is not colored {color} near {w}"
            )));
        }
    }

    let h = (1.0 - to_f64(&xy_sq) / 4.0).sqrt();
    let cross = x.sub(z).cross(&y.sub(z)).abs();
    let dist = to_f64(&cross) / to_f64(&xy_sq).sqrt();
    if dist <= 1.0 - h {
        return Err(MapError::NoValidTriangle(format!(
            "z is within {dist} of line xy, tangent offset is {}",
            1.0 - h
        )));
    }
    let s = 1.0 - (1.0 - h) / dist;
    let mut s_rat = floor_f64_grid(s * (1.0 - 1e-9), 48);
    if !s_rat.is_positive() {
        return Err(MapError::NoValidTriangle("tangent line passes too close to z".into()));
    }
    let half = Scalar::new(1.into(), 2.into());
    let mut last_err = None;
    for _ in 0..48 {
        let p = z.lerp(x, &s_rat);
        let q = z.lerp(y, &s_rat);
        match apply_cut(map, z, &p, &q, color) {
            Ok(m) => return Ok(TriangleCut { p, q, map: m }),
            Err(e) => last_err = Some(e),
        }
        s_rat = &s_rat * &half;
    }
    Err(last_err.unwrap_or_else(|| MapError::NoValidTriangle("no triangle fits".into())))
}

/// A point of the open segment `ab` interior to a region of another colour.
fn foreign_point_on(map: &PlanarMap, a: &Point, b: &Point, color: ColorId) -> Option<Point> {
    let two = int(2);
    for r in map.regions() {
        if r.color == color {
            continue;
        }
        let pts = split_points(a, b, &r.poly);
        for w in pts.windows(2) {
            let m = Point::new((&w[0].x + &w[1].x) / &two, (&w[0].y + &w[1].y) / &two);
            if r.poly.locate(&m) == Location::Inside {
                return Some(m);
            }
        }
    }
    None
}

fn apply_cut(
    map: &PlanarMap,
    z: &Point,
    p: &Point,
    q: &Point,
    color: ColorId,
) -> Result<PlanarMap, MapError> {
    let dp = p.sub(z);
    let dq = q.sub(z);
    let mut out: Vec<(Polygon, ColorId)> = Vec::with_capacity(map.regions().len() + 1);
    for r in map.regions() {
        let poly = r.poly.with_vertex_on_edge(z).unwrap_or_else(|| r.poly.clone());
        let Some(i) = poly.vertex_index(z) else {
            out.push((poly, r.color));
            continue;
        };
        let v = poly.vertices();
        let n = v.len();
        let next = &v[(i + 1) % n];
        let prev = &v[(i + n - 1) % n];
        let s = next.sub(z);
        let e = prev.sub(z);
        let p_in = strictly_inside_sweep(&s, &e, &dp);
        let q_in = strictly_inside_sweep(&s, &e, &dq);
        let within = |d: &Point| same_dir(d, &dp) || same_dir(d, &dq) || strictly_inside_sweep(&dp, &dq, d);
        let replacement: Vec<Point> = if p_in && q_in {
            return Err(MapError::Precondition("triangle lies inside a single region".into()));
        } else if p_in {
            let b = cut_point(prev, z, p, q)?;
            vec![b, p.clone(), z.clone()]
        } else if q_in {
            let a = cut_point(next, z, p, q)?;
            vec![z.clone(), q.clone(), a]
        } else if within(&s) && within(&e) {
            let b = cut_point(prev, z, p, q)?;
            let a = cut_point(next, z, p, q)?;
            vec![b, a]
        } else {
            out.push((poly, r.color));
            continue;
        };
        let mut verts = Vec::with_capacity(n + 2);
        verts.extend_from_slice(&v[..i]);
        verts.extend(replacement);
        verts.extend_from_slice(&v[i + 1..]);
        verts.dedup();
        let cut = Polygon::new(verts)
            .map_err(|e| MapError::NoValidTriangle(format!("cut region is invalid: {e}")))?;
        out.push((cut, r.color));
    }
    let tri = Polygon::new(vec![z.clone(), p.clone(), q.clone()])
        .map_err(|e| MapError::NoValidTriangle(e.to_string()))?;
    out.push((tri, color));
    let merged = merge_adjacent(out)?;
    build_map_with_unbounded(merged, map.window().clone(), map.k(), map.unbounded_color())
}

fn same_dir(a: &Point, b: &Point) -> bool {
    a.cross(b).is_zero() && a.dot(b).is_positive()
}

/// Where line `pq` meets the edge from `far` to `z`, required to lie strictly
/// between them.
fn cut_point(far: &Point, z: &Point, p: &Point, q: &Point) -> Result<Point, MapError> {
    if same_dir(&far.sub(z), &p.sub(z)) {
        return Ok(p.clone());
    }
    if same_dir(&far.sub(z), &q.sub(z)) {
        return Ok(q.clone());
    }
    let c = line_intersection(far, z, p, q);
    if on_open_segment(&c, far, z) {
        Ok(c)
    } else {
        Err(MapError::NoValidTriangle(format!("edge {far}-{z} is shorter than the cut")))
    }
}

/// Repeatedly merges same-coloured regions that share a boundary segment.
pub fn merge_adjacent(
    mut regions: Vec<(Polygon, ColorId)>,
) -> Result<Vec<(Polygon, ColorId)>, MapError> {
    'outer: loop {
        for i in 0..regions.len() {
            for j in (i + 1)..regions.len() {
                if regions[i].1 != regions[j].1 {
                    continue;
                }
                if !regions[i].0.bbox().gap_sq(&regions[j].0.bbox()).is_zero() {
                    continue;
                }
                if shared_segments(&regions[i].0, &regions[j].0).is_empty() {
                    continue;
                }
                let merged = merge_polygons(&regions[i].0, &regions[j].0).ok_or_else(|| {
                    MapError::Precondition(format!(
                        "union of same-colored regions {i} and {j} is not a simple polygon"
                    ))
                })?;
                regions[i].0 = merged;
                regions.remove(j);
                continue 'outer;
            }
        }
        return Ok(regions);
    }
}

fn refine(poly: &Polygon, other: &Polygon) -> Vec<Point> {
    let mut cur = poly.clone();
    for v in other.vertices() {
        if let Some(next) = cur.with_vertex_on_edge(v) {
            cur = next;
        }
    }
    cur.vertices().to_vec()
}

/// Union of two interior-disjoint polygons sharing boundary segments, when it
/// is a simple polygon.
pub fn merge_polygons(a: &Polygon, b: &Polygon) -> Option<Polygon> {
    let va = refine(a, b);
    let vb = refine(b, a);
    let mut edges: BTreeSet<(Point, Point)> = BTreeSet::new();
    for v in [&va, &vb] {
        let n = v.len();
        for i in 0..n {
            edges.insert((v[i].clone(), v[(i + 1) % n].clone()));
        }
    }
    let all: Vec<(Point, Point)> = edges.iter().cloned().collect();
    for (u, w) in &all {
        if edges.contains(&(w.clone(), u.clone())) {
            edges.remove(&(u.clone(), w.clone()));
            edges.remove(&(w.clone(), u.clone()));
        }
    }
    let mut succ: BTreeMap<Point, Point> = BTreeMap::new();
    for (u, w) in &edges {
        if succ.insert(u.clone(), w.clone()).is_some() {
            return None;
        }
    }
    let start = succ.keys().next()?.clone();
    let mut cycle = vec![start.clone()];
    let mut cur = succ[&start].clone();
    while cur != start {
        if cycle.len() > succ.len() {
            return None;
        }
        cycle.push(cur.clone());
        cur = succ.get(&cur)?.clone();
    }
    if cycle.len() != succ.len() {
        return None;
    }
    Polygon::new(cycle).ok().map(|p| p.simplified())
}

/// Direction strictly inside the sector swept counter-clockwise from `s` to
/// `e`, leaning towards `e` (or `s`) by the weight `w`.
fn inside_direction(s: &Point, e: &Point, towards_end: bool, w: i64) -> Point {
    let (s, e) = (normalize_dir(s), normalize_dir(e));
    if s.cross(&e).is_positive() {
        if towards_end {
            s.add(&e.scale(&int(w)))
        } else {
            s.scale(&int(w)).add(&e)
        }
    } else if towards_end {
        Point::new(e.y.clone(), -e.x.clone())
    } else {
        Point::new(-s.y.clone(), s.x.clone())
    }
}

/// Scale `t` with `|t d|` well inside the star neighbourhood of `z`.
fn short_step(map: &PlanarMap, z: &Point, d: &Point) -> Scalar {
    let mut reach: Option<Scalar> = None;
    for &r in &map.regions_at(z) {
        for (a, b) in map.regions()[r].poly.edges() {
            if a == z || b == z || on_open_segment(z, a, b) {
                continue;
            }
            let dd = segment_point_distance_sq(z, a, b).expect("valid polygon edge");
            if reach.as_ref().map_or(true, |m| &dd < m) {
                reach = Some(dd);
            }
        }
    }
    let limit = reach.unwrap_or_else(Scalar::one) / int(16);
    let len = d.norm_sq();
    let mut t = Scalar::one();
    let quarter = Scalar::new(1.into(), 4.into());
    while &t * &t * &len >= limit {
        t = &t * &quarter;
    }
    t
}

/// One recolouring step at `z` merging two non-adjacent sectors of one colour.
fn reduce_at(map: &PlanarMap, z: &Point) -> Result<PlanarMap, MapError> {
    let info = describe_point(map, z);
    let sec = &info.sectors;
    let n = sec.len();
    let mut cands = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let gap = (j + n - i - 1) % n;
            if i != j && sec[i].color == sec[j].color && gap >= 1 && (i + n - j - 1) % n >= 1 {
                cands.push((gap, i, j));
            }
        }
    }
    cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut last = MapError::Precondition(format!("no recolorable sector pair at {z}"));
    for (_, i, j) in cands {
        for (wx, wy) in [(1, 1), (3, 3), (1, 3), (3, 1)] {
            let dx = inside_direction(&sec[i].start, &sec[i].end, true, wx);
            let dy = inside_direction(&sec[j].start, &sec[j].end, false, wy);
            if !dx.cross(&dy).is_positive() {
                continue;
            }
            let x = z.add(&dx.scale(&short_step(map, z, &dx)));
            let y = z.add(&dy.scale(&short_step(map, z, &dy)));
            match recolor_triangle(map, z, &x, &y, sec[i].color) {
                Ok(cut) => return Ok(cut.map),
                Err(e) => last = e,
            }
        }
    }
    Err(last)
}

/// Removes trichromatic vertices of degree above 3 inside the closed disk of
/// radius `r` around the window centroid.
pub fn reduce_degree(map: &PlanarMap, r: &Scalar) -> Result<PlanarMap, MapError> {
    let center = map.window_centroid();
    let r_sq = r * r;
    let bound = 4 * map.vertices().len().max(1);
    let mut cur = map.clone();
    let mut ops = 0usize;
    let mut bad = high_degree_trichromatic(&cur, &center, &r_sq);
    while let Some(z) = bad.first().cloned() {
        let before = bad.len();
        loop {
            let info = describe_point(&cur, &z);
            if !(info.chromaticity == 3 && info.degree > 3) {
                break;
            }
            ops += 1;
            if ops > bound {
                return Err(MapError::NonConvergence(ops - 1));
            }
            cur = reduce_at(&cur, &z).map_err(|_| MapError::NonConvergence(ops))?;
        }
        bad = high_degree_trichromatic(&cur, &center, &r_sq);
        if bad.len() >= before {
            return Err(MapError::NonConvergence(ops));
        }
    }
    Ok(cur)
}
