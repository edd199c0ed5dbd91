//! Map generators: hexagonal 7-colourings, stripes, grids, random jittered
//! grids and named fixtures.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use num_traits::{Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::geom::{int, rat, Point, Polygon, Scalar};
use crate::planemap::{build_map, merge_adjacent, ColorId, MapError, PlanarMap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorpusError {
    #[error("unknown crafted fixture {0:?}")]
    UnknownCrafted(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusKind {
    /// Hexagons of diameter `d`, 7 colours.
    Hex7 { d: Scalar },
    /// [`CorpusKind::Hex7`] with colour 7 merged into a neighbour.
    Hex6Merged { d: Scalar },
    Stripes { k: ColorId, width: Scalar },
    Grid { k: ColorId, cell: Scalar },
    Crafted(String),
}

/// What to generate and over which window `[0, width] x [0, height]`;
/// crafted fixtures bring their own window.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub width: Scalar,
    pub height: Scalar,
}

pub const CRAFTED: [&str; 11] = [
    "t7",
    "f32",
    "l15",
    "grid4",
    "grid4-disk",
    "grid-3col-disk",
    "stripes-disk",
    "near-proper-disk",
    "hexagon-disk",
    "three-arc-disk",
    "empty-pseudo-disk",
];

pub fn generate(spec: &CorpusSpec) -> Result<PlanarMap, CorpusError> {
    let (w, h) = (&spec.width, &spec.height);
    if !matches!(spec.kind, CorpusKind::Crafted(_)) && (!w.is_positive() || !h.is_positive()) {
        return Err(CorpusError::InvalidParameter("window sides must be positive".into()));
    }
    match &spec.kind {
        CorpusKind::Hex7 { d } => hex7(d, w, h),
        CorpusKind::Hex6Merged { d } => hex6_merged(d, w, h),
        CorpusKind::Stripes { k, width } => stripes(*k, width, w, h),
        CorpusKind::Grid { k, cell } => grid(*k, cell, w, h),
        CorpusKind::Crafted(name) => crafted(name),
    }
}

fn rect(x0: Scalar, y0: Scalar, x1: Scalar, y1: Scalar) -> Polygon {
    Polygon::rect(x0, y0, x1, y1).expect("non-degenerate rectangle")
}

fn window(w: &Scalar, h: &Scalar) -> Polygon {
    rect(Scalar::zero(), Scalar::zero(), w.clone(), h.clone())
}

/// Sutherland-Hodgman clip of a convex polygon to an axis-aligned box.
fn clip(poly: &[Point], lo: &Point, hi: &Point) -> Vec<Point> {
    let mut pts = poly.to_vec();
    // (axis, bound, keep if coordinate >= bound)
    let planes = [(0, &lo.x, true), (0, &hi.x, false), (1, &lo.y, true), (1, &hi.y, false)];
    for (axis, bound, ge) in planes {
        let coord = |p: &Point| if axis == 0 { p.x.clone() } else { p.y.clone() };
        let inside = |p: &Point| if ge { &coord(p) >= bound } else { &coord(p) <= bound };
        let mut out = Vec::new();
        for i in 0..pts.len() {
            let a = &pts[i];
            let b = &pts[(i + 1) % pts.len()];
            let (ia, ib) = (inside(a), inside(b));
            if ia {
                out.push(a.clone());
            }
            if ia != ib {
                let t = (bound - coord(a)) / (coord(b) - coord(a));
                let p = a.lerp(b, &t);
                if out.last() != Some(&p) {
                    out.push(p);
                }
            }
        }
        out.dedup();
        while out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        pts = out;
        if pts.len() < 3 {
            return vec![];
        }
    }
    pts
}

/// Rational height slightly below `a * sqrt(3) / 2`.
fn hex_height(a: &Scalar) -> Scalar {
    let approx = crate::geom::floor_f64_grid(crate::geom::to_f64(a) * 3f64.sqrt() / 2.0 * (1.0 - 1e-6), 24);
    let limit = a * a * rat(3, 4);
    assert!(&approx * &approx < limit);
    approx
}

/// Flat-top hexagon cells keyed by axial coordinates, clipped to the window.
fn hex_cells(d: &Scalar, w: &Scalar, h: &Scalar) -> Result<BTreeMap<(i64, i64), Polygon>, CorpusError> {
    if !d.is_positive() || d >= &int(1) {
        return Err(CorpusError::InvalidParameter("hex diameter must lie in (0, 1)".into()));
    }
    let a = d / int(2);
    let hh = hex_height(&a);
    let half = &a / int(2);
    let lo = Point::origin();
    let hi = Point::new(w.clone(), h.clone());
    let col_w = &a * rat(3, 2);
    let qmax = (crate::geom::to_f64(w) / crate::geom::to_f64(&col_w)).ceil() as i64 + 1;
    let rspan = (crate::geom::to_f64(h) / (2.0 * crate::geom::to_f64(&hh))).ceil() as i64 + 1;
    let mut out = BTreeMap::new();
    for q in -1..=qmax {
        let rmin = -(q + 1) / 2 - 1;
        for r in rmin..=(rmin + rspan + 2) {
            let cx = &col_w * int(q);
            let cy = &hh * int(2) * (Scalar::from_integer(r.into()) + rat(q, 2));
            let hex: Vec<Point> = [
                (a.clone(), Scalar::zero()),
                (half.clone(), hh.clone()),
                (-half.clone(), hh.clone()),
                (-a.clone(), Scalar::zero()),
                (-half.clone(), -hh.clone()),
                (half.clone(), -hh.clone()),
            ]
            .into_iter()
            .map(|(x, y)| Point::new(&cx + x, &cy + y))
            .collect();
            let c = clip(&hex, &lo, &hi);
            if c.len() >= 3 {
                if let Ok(p) = Polygon::new(c) {
                    out.insert((q, r), p.simplified());
                }
            }
        }
    }
    Ok(out)
}

fn hex_color(q: i64, r: i64) -> ColorId {
    ((q + 3 * r).rem_euclid(7) + 1) as ColorId
}

/// Hexagonal tiling whose cell and six neighbours use all 7 colours.
pub fn hex7(d: &Scalar, w: &Scalar, h: &Scalar) -> Result<PlanarMap, CorpusError> {
    let cells = hex_cells(d, w, h)?;
    let regions = cells.into_iter().map(|((q, r), p)| (p, hex_color(q, r))).collect();
    Ok(build_map(regions, window(w, h), 7)?)
}

/// The 7-colour tiling with every colour-7 cell merged into its colour-1
/// neighbour.
pub fn hex6_merged(d: &Scalar, w: &Scalar, h: &Scalar) -> Result<PlanarMap, CorpusError> {
    let mut cells = hex_cells(d, w, h)?;
    let sevens: Vec<(i64, i64)> = cells.keys().copied().filter(|&(q, r)| hex_color(q, r) == 7).collect();
    for (q, r) in sevens {
        let cell = cells.remove(&(q, r)).expect("present");
        match cells.remove(&(q + 1, r)) {
            Some(nb) => {
                let merged = merge_adjacent(vec![(cell, 1), (nb, 1)])?;
                let [(p, _)] = <[_; 1]>::try_from(merged).map_err(|_| {
                    CorpusError::InvalidParameter("merged cells are not adjacent".into())
                })?;
                cells.insert((q + 1, r), p);
            }
            None => {
                cells.insert((q, r), cell);
            }
        }
    }
    let regions = cells
        .into_iter()
        .map(|((q, r), p)| (p, if hex_color(q, r) == 7 { 1 } else { hex_color(q, r) }))
        .collect();
    Ok(build_map(regions, window(w, h), 6)?)
}

/// Vertical stripes coloured `1, 2, ..., k, 1, ...`.
pub fn stripes(k: ColorId, width: &Scalar, w: &Scalar, h: &Scalar) -> Result<PlanarMap, CorpusError> {
    if k < 2 || !width.is_positive() {
        return Err(CorpusError::InvalidParameter("stripes need k >= 2 and positive width".into()));
    }
    let mut regions = Vec::new();
    let mut x = Scalar::zero();
    let mut i = 0u32;
    while &x < w {
        let x1 = (&x + width).min(w.clone());
        regions.push((rect(x.clone(), Scalar::zero(), x1.clone(), h.clone()), i % k + 1));
        x = x1;
        i += 1;
    }
    Ok(build_map(regions, window(w, h), k)?)
}

/// Square cells coloured `(i + 2j) mod k + 1`.
pub fn grid(k: ColorId, cell: &Scalar, w: &Scalar, h: &Scalar) -> Result<PlanarMap, CorpusError> {
    if k < 3 || !cell.is_positive() {
        return Err(CorpusError::InvalidParameter("grid needs k >= 3 and positive cell".into()));
    }
    let mut regions = Vec::new();
    let mut y = Scalar::zero();
    let mut j = 0u32;
    while &y < h {
        let y1 = (&y + cell).min(h.clone());
        let mut x = Scalar::zero();
        let mut i = 0u32;
        while &x < w {
            let x1 = (&x + cell).min(w.clone());
            regions.push((rect(x.clone(), y.clone(), x1.clone(), y1.clone()), (i + 2 * j) % k + 1));
            x = x1;
            i += 1;
        }
        y = y1;
        j += 1;
    }
    Ok(build_map(regions, window(w, h), k)?)
}

/// Jittered quadrilateral grid with at most `max_regions` cells and random
/// colours from `1..=k`; the window is the grid's outline.
pub fn random_map<R: Rng>(rng: &mut R, max_regions: usize, k: ColorId) -> PlanarMap {
    assert!(k >= 3 && max_regions >= 1);
    loop {
        let nx = rng.gen_range(1..=max_regions.min(10));
        let ny = rng.gen_range(1..=(max_regions / nx).clamp(1, 10));
        let cell = rat(rng.gen_range(20..=90), 100);
        let jitter = |rng: &mut R, edge: bool| if edge { Scalar::zero() } else { rat(rng.gen_range(-20..=20), 100) * &cell };
        let mut pts = vec![vec![Point::origin(); ny + 1]; nx + 1];
        for (i, col) in pts.iter_mut().enumerate() {
            for (j, p) in col.iter_mut().enumerate() {
                let jx = jitter(rng, i == 0 || i == nx);
                let jy = jitter(rng, j == 0 || j == ny);
                *p = Point::new(&cell * int(i as i64) + jx, &cell * int(j as i64) + jy);
            }
        }
        let mut colors = vec![vec![0; ny]; nx];
        let mut regions = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                let mut c;
                loop {
                    c = rng.gen_range(1..=k);
                    if (i == 0 || colors[i - 1][j] != c) && (j == 0 || colors[i][j - 1] != c) {
                        break;
                    }
                }
                colors[i][j] = c;
                let quad = vec![pts[i][j].clone(), pts[i + 1][j].clone(), pts[i + 1][j + 1].clone(), pts[i][j + 1].clone()];
                regions.push((Polygon::new(quad).expect("jittered quad is simple"), c));
            }
        }
        let mut outline = Vec::new();
        outline.extend((0..nx).map(|i| pts[i][0].clone()));
        outline.extend((0..ny).map(|j| pts[nx][j].clone()));
        outline.extend((0..nx).map(|i| pts[nx - i][ny].clone()));
        outline.extend((0..ny).map(|j| pts[0][ny - j].clone()));
        let win = Polygon::new(outline).expect("outline is simple").simplified();
        if let Ok(m) = build_map(regions, win, k) {
            return m;
        }
    }
}

fn r(n: i64, d: i64) -> Scalar {
    rat(n, d)
}

fn pt(xn: i64, xd: i64, yn: i64, yd: i64) -> Point {
    Point::from_ratios(xn, xd, yn, yd)
}

fn sq4() -> Polygon {
    rect(int(-4), int(-4), int(4), int(4))
}

/// Square window `[-4, 4]^2` split into four quadrants with colours
/// `[bottom-left, bottom-right, top-right, top-left]`.
fn quadrants(colors: [ColorId; 4]) -> Result<PlanarMap, CorpusError> {
    let (m, z, p) = (int(-4), int(0), int(4));
    let regions = vec![
        (rect(m.clone(), m.clone(), z.clone(), z.clone()), colors[0]),
        (rect(z.clone(), m.clone(), p.clone(), z.clone()), colors[1]),
        (rect(z.clone(), z.clone(), p.clone(), p.clone()), colors[2]),
        (rect(m.clone(), z.clone(), z, p), colors[3]),
    ];
    Ok(build_map(regions, sq4(), 6)?)
}

fn poly_err(region: usize, source: crate::geom::GeomError) -> MapError {
    MapError::InvalidPolygon { region, source }
}

/// Where the ray from the origin through `p` leaves `[-4, 4]^2`.
fn to_window(p: &Point) -> Point {
    let m = p.x.abs().max(p.y.abs());
    p.scale(&(int(4) / m))
}

/// Rings around the origin: three fans coloured 4, 5, 6 inside the polygon
/// `inner`, middle sectors `[P_k, Q_k, Q_k+1, P_k+1]` with `middle` colours,
/// and outer sectors coloured 4, 5, 6 split at the midpoints of the outer
/// polygon's edges. `inner.len()` must be a multiple of 3.
fn ring_fixture(inner: &[Point], outer: &[Point], middle: &[ColorId]) -> Result<PlanarMap, CorpusError> {
    let n = inner.len();
    assert!(n % 3 == 0 && outer.len() == n && middle.len() == n);
    let per = n / 3;
    let half = r(1, 2);
    let mid = |a: &Point, b: &Point| a.lerp(b, &half);
    let u = Point::origin();
    let mut regions = Vec::new();
    for j in 0..3 {
        let s = j * per;
        let mut poly = vec![u.clone(), mid(&inner[s], &inner[(s + 1) % n])];
        for k in 1..=per {
            poly.push(inner[(s + k) % n].clone());
        }
        poly.push(mid(&inner[(s + per) % n], &inner[(s + per + 1) % n]));
        regions.push((Polygon::new_any_orientation(poly).map_err(|e| poly_err(regions.len(), e))?, 4 + j as ColorId));
    }
    for k in 0..n {
        let k1 = (k + 1) % n;
        let quad = vec![inner[k].clone(), outer[k].clone(), outer[k1].clone(), inner[k1].clone()];
        regions.push((Polygon::new_any_orientation(quad).map_err(|e| poly_err(regions.len(), e))?, middle[k]));
    }
    let corners = [pt(4, 1, 4, 1), pt(-4, 1, 4, 1), pt(-4, 1, -4, 1), pt(4, 1, -4, 1)];
    let ang = |p: &Point| {
        let f = p.to_f64();
        (f[1].atan2(f[0]) / TAU).rem_euclid(1.0)
    };
    let mids: Vec<Point> = (0..n).map(|k| mid(&outer[k], &outer[(k + 1) % n])).collect();
    for k in 0..n {
        let (m0, m1) = (&mids[(k + n - 1) % n], &mids[k]);
        let (w0, w1) = (to_window(m0), to_window(m1));
        let (a0, a1) = (ang(&w0), ang(&w1));
        let span = (a1 - a0).rem_euclid(1.0);
        let mut cs: Vec<(f64, Point)> = corners
            .iter()
            .map(|c| ((ang(c) - a0).rem_euclid(1.0), c.clone()))
            .filter(|(o, _)| *o > 0.0 && *o < span)
            .collect();
        cs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut poly = vec![w0];
        poly.extend(cs.into_iter().map(|c| c.1));
        poly.extend([w1, m1.clone(), outer[k].clone(), m0.clone()]);
        regions.push((Polygon::new_any_orientation(poly).map_err(|e| poly_err(regions.len(), e))?, 4 + (k % 3) as ColorId));
    }
    Ok(build_map(regions, sq4(), 6)?)
}

/// Integer direction close to `turns`, scaled by `scale / 1000`.
fn ray_point(turns: f64, scale: &Scalar) -> Point {
    let (s, c) = (turns * TAU).sin_cos();
    Point::from_ints((c * 1000.0).round() as i64, (s * 1000.0).round() as i64).scale(&(scale / int(1000)))
}

fn radial_ring(n: usize, r_in: Scalar, r_out: Scalar) -> Result<PlanarMap, CorpusError> {
    let inner: Vec<Point> = (0..n).map(|k| ray_point(k as f64 / n as f64, &r_in)).collect();
    let outer: Vec<Point> = (0..n).map(|k| ray_point(k as f64 / n as f64, &r_out)).collect();
    let middle: Vec<ColorId> = (0..n).map(|k| (k % 3) as ColorId + 1).collect();
    ring_fixture(&inner, &outer, &middle)
}

/// Named fixtures; see [`CRAFTED`].
pub fn crafted(name: &str) -> Result<PlanarMap, CorpusError> {
    match name {
        "t7" => {
            let regions = vec![
                (rect(int(0), int(0), r(3, 4), int(2)), 4),
                (rect(r(3, 4), int(1), r(9, 4), int(2)), 5),
                (rect(r(3, 4), int(0), r(9, 4), int(1)), 6),
                (rect(r(9, 4), int(0), int(3), int(2)), 4),
            ];
            Ok(build_map(regions, rect(int(0), int(0), int(3), int(2)), 6)?)
        }
        "f32" => {
            let regions = vec![
                (rect(int(0), int(0), int(1), int(2)), 1),
                (rect(int(1), int(1), int(2), int(2)), 2),
                (rect(int(1), int(0), int(2), int(1)), 3),
                (rect(int(2), int(0), r(29, 10), int(2)), 4),
                (rect(r(29, 10), int(1), int(4), int(2)), 5),
                (rect(r(29, 10), int(0), int(4), int(1)), 6),
            ];
            Ok(build_map(regions, rect(int(0), int(0), int(4), int(2)), 6)?)
        }
        "l15" => {
            let regions = vec![
                (rect(int(0), int(0), int(1), r(1, 2)), 1),
                (rect(int(1), int(0), int(2), r(1, 2)), 2),
                (rect(int(2), int(0), int(3), r(1, 2)), 1),
            ];
            Ok(build_map(regions, rect(int(0), int(0), int(3), r(1, 2)), 6)?)
        }
        "grid4" => {
            let regions = vec![
                (rect(int(0), int(0), int(1), int(1)), 1),
                (rect(int(1), int(0), int(2), int(1)), 2),
                (rect(int(1), int(1), int(2), int(2)), 3),
                (rect(int(0), int(1), int(1), int(2)), 4),
            ];
            Ok(build_map(regions, rect(int(0), int(0), int(2), int(2)), 6)?)
        }
        "grid4-disk" => quadrants([1, 2, 3, 4]),
        "grid-3col-disk" => quadrants([1, 2, 1, 3]),
        "stripes-disk" => {
            let regions = (0..16)
                .map(|i| (rect(r(i - 8, 2), int(-4), r(i - 7, 2), int(4)), (i % 6) as ColorId + 1))
                .collect();
            Ok(build_map(regions, sq4(), 6)?)
        }
        "near-proper-disk" => radial_ring(9, r(1, 4), r(3, 2)),
        "three-arc-disk" => radial_ring(3, r(1, 4), r(3, 2)),
        "empty-pseudo-disk" => radial_ring(9, r(5, 4), int(2)),
        "hexagon-disk" => {
            let inner = vec![pt(1, 4, 0, 1), pt(1, 2, 1, 4), pt(-1, 2, 1, 4), pt(-1, 4, 0, 1), pt(-1, 2, -1, 4), pt(1, 2, -1, 4)];
            let outer = vec![pt(3, 2, 0, 1), pt(1, 2, 3, 2), pt(-1, 2, 3, 2), pt(-3, 2, 0, 1), pt(-1, 2, -3, 2), pt(1, 2, -3, 2)];
            ring_fixture(&inner, &outer, &[1, 2, 3, 1, 2, 3])
        }
        other => Err(CorpusError::UnknownCrafted(other.to_string())),
    }
}
