//! Coloured polygonal maps, their vertex structure and Conditions 2-8.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::geom::{
    cmp_angle, normalize_dir, on_open_segment, segment_contact, BBox,
    GeomError, Location, Point, Polygon, Scalar, SegmentContact,
};

mod recolor;

pub use recolor::{merge_adjacent, recolor_triangle, reduce_degree, TriangleCut};

pub type ColorId = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("invalid polygon in region {region}: {source}")]
    InvalidPolygon { region: usize, source: GeomError },
    #[error("invalid window: {0}")]
    InvalidWindow(GeomError),
    #[error("k must be at least 1")]
    ZeroColors,
    #[error("region {region} has color {color} outside 1..={k}")]
    InvalidColor { region: usize, color: ColorId, k: ColorId },
    #[error("region {region} leaves the window near {witness}")]
    OutsideWindow { region: usize, witness: Point },
    #[error("regions {a} and {b} overlap at {witness}")]
    Overlap { a: usize, b: usize, witness: Point },
    #[error("regions leave an uncovered area of {0}")]
    Gap(Scalar),
    #[error("regions {a} and {b} share edge {p}-{q} but both have color {color}")]
    AdjacentSameColor { a: usize, b: usize, p: Point, q: Point, color: ColorId },
    #[error("{0} is not a vertex of the map")]
    NotAVertex(Point),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no valid triangle: {0}")]
    NoValidTriangle(String),
    #[error("degree reduction did not converge after {0} iterations")]
    NonConvergence(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub poly: Polygon,
    pub color: ColorId,
}

/// Collinear boundary pieces shared by two regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    pub a: usize,
    pub b: usize,
    pub segments: Vec<(Point, Point)>,
}

/// Angular sector of one region at a vertex, swept counter-clockwise from
/// `start` up to the next sector's start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sector {
    pub start: Point,
    pub end: Point,
    pub region: usize,
    pub color: ColorId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexInfo {
    pub location: Point,
    pub degree: usize,
    pub multicolor: BTreeSet<ColorId>,
    pub chromaticity: usize,
    pub regions: Vec<usize>,
    /// Sorted counter-clockwise by start direction.
    pub sectors: Vec<Sector>,
}

impl VertexInfo {
    pub fn is_trichromatic(&self) -> bool {
        self.chromaticity == 3
    }

    /// Colour pairs separated by some boundary ray leaving the vertex.
    pub fn boundary_pairs(&self) -> BTreeSet<(ColorId, ColorId)> {
        let n = self.sectors.len();
        let mut out = BTreeSet::new();
        for i in 0..n {
            let a = self.sectors[i].color;
            let b = self.sectors[(i + n - 1) % n].color;
            if a != b {
                out.insert((a.min(b), a.max(b)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarMap {
    k: ColorId,
    regions: Vec<Region>,
    window: Polygon,
    unbounded_color: Option<ColorId>,
    bboxes: Vec<BBox>,
    adjacency: Vec<Adjacency>,
    vertices: Vec<VertexInfo>,
}

impl PlanarMap {
    pub fn k(&self) -> ColorId {
        self.k
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn window(&self) -> &Polygon {
        &self.window
    }

    pub fn unbounded_color(&self) -> Option<ColorId> {
        self.unbounded_color
    }

    pub fn bbox(&self, region: usize) -> &BBox {
        &self.bboxes[region]
    }

    pub fn adjacency(&self) -> &[Adjacency] {
        &self.adjacency
    }

    pub fn vertices(&self) -> &[VertexInfo] {
        &self.vertices
    }

    pub fn color(&self, region: usize) -> ColorId {
        self.regions[region].color
    }

    pub fn vertex_info(&self, v: &Point) -> Result<&VertexInfo, MapError> {
        self.vertices
            .binary_search_by(|vi| vi.location.cmp(v))
            .map(|i| &self.vertices[i])
            .map_err(|_| MapError::NotAVertex(v.clone()))
    }

    /// Regions whose closure contains `p`.
    pub fn regions_at(&self, p: &Point) -> Vec<usize> {
        (0..self.regions.len())
            .filter(|&i| self.bboxes[i].contains(p) && self.regions[i].poly.contains_closed(p))
            .collect()
    }

    /// Colours of all regions whose closure contains `p`.
    pub fn multicolor(&self, p: &Point) -> BTreeSet<ColorId> {
        self.regions_at(p).into_iter().map(|i| self.color(i)).collect()
    }

    /// Region containing `p` in its interior, if any.
    pub fn region_containing(&self, p: &Point) -> Option<usize> {
        (0..self.regions.len()).find(|&i| {
            self.bboxes[i].contains(p) && self.regions[i].poly.locate(p) == Location::Inside
        })
    }

    pub fn into_parts(self) -> (Vec<Region>, Polygon, ColorId, Option<ColorId>) {
        (self.regions, self.window, self.k, self.unbounded_color)
    }

    /// Same map with the complement colour set.
    pub fn with_unbounded_color(mut self, c: Option<ColorId>) -> Result<PlanarMap, MapError> {
        if let Some(col) = c {
            if col == 0 || col > self.k {
                return Err(MapError::InvalidColor { region: usize::MAX, color: col, k: self.k });
            }
        }
        self.unbounded_color = c;
        Ok(self)
    }

    /// Exact area centroid of the window.
    pub fn window_centroid(&self) -> Point {
        let v = self.window.vertices();
        let n = v.len();
        let mut cx = Scalar::zero();
        let mut cy = Scalar::zero();
        for i in 0..n {
            let (a, b) = (&v[i], &v[(i + 1) % n]);
            let c = a.cross(b);
            cx += (&a.x + &b.x) * &c;
            cy += (&a.y + &b.y) * &c;
        }
        let six_a = self.window.area2() * Scalar::from_integer(3.into());
        Point::new(cx / &six_a, cy / six_a)
    }
}

/// Builds and validates a map. Regions must be interior-disjoint, lie in the
/// window, cover it exactly and differently coloured across shared edges.
pub fn build_map(
    regions: Vec<(Polygon, ColorId)>,
    window: Polygon,
    k: ColorId,
) -> Result<PlanarMap, MapError> {
    if k == 0 {
        return Err(MapError::ZeroColors);
    }
    let regions: Vec<Region> = regions.into_iter().map(|(poly, color)| Region { poly, color }).collect();
    for (i, r) in regions.iter().enumerate() {
        if r.color == 0 || r.color > k {
            return Err(MapError::InvalidColor { region: i, color: r.color, k });
        }
    }
    let bboxes: Vec<BBox> = regions.iter().map(|r| r.poly.bbox()).collect();
    for (i, r) in regions.iter().enumerate() {
        if let Some(w) = escapes(&r.poly, &window) {
            return Err(MapError::OutsideWindow { region: i, witness: w });
        }
    }

    let mut adjacency = Vec::new();
    for i in 0..regions.len() {
        for j in (i + 1)..regions.len() {
            if !bboxes[i].gap_sq(&bboxes[j]).is_zero() {
                continue;
            }
            let (a, b) = (&regions[i].poly, &regions[j].poly);
            if let Some(w) = interiors_overlap(a, b) {
                return Err(MapError::Overlap { a: i, b: j, witness: w });
            }
            let segs = shared_segments(a, b);
            if !segs.is_empty() {
                if regions[i].color == regions[j].color {
                    let (p, q) = segs[0].clone();
                    return Err(MapError::AdjacentSameColor { a: i, b: j, p, q, color: regions[i].color });
                }
                adjacency.push(Adjacency { a: i, b: j, segments: segs });
            }
        }
    }

    let total: Scalar = regions.iter().map(|r| r.poly.area()).sum();
    let deficit = window.area() - total;
    if deficit.is_positive() {
        return Err(MapError::Gap(deficit));
    }

    let mut map = PlanarMap {
        k,
        regions,
        window,
        unbounded_color: None,
        bboxes,
        adjacency,
        vertices: Vec::new(),
    };
    map.vertices = compute_vertices(&map);
    Ok(map)
}

/// Builds a map with a colour for the complement of the window. Regions on
/// the window boundary must differ from it.
pub fn build_map_with_unbounded(
    regions: Vec<(Polygon, ColorId)>,
    window: Polygon,
    k: ColorId,
    unbounded: Option<ColorId>,
) -> Result<PlanarMap, MapError> {
    let map = build_map(regions, window, k)?.with_unbounded_color(unbounded)?;
    if let Some(c) = unbounded {
        for (i, r) in map.regions.iter().enumerate() {
            if r.color != c {
                continue;
            }
            let segs = shared_segments(&r.poly, &map.window);
            if let Some((p, q)) = segs.into_iter().next() {
                return Err(MapError::AdjacentSameColor { a: i, b: usize::MAX, p, q, color: c });
            }
        }
    }
    Ok(map)
}

/// Sorted points splitting edge `ab` at every vertex of `other` on it.
fn split_points(a: &Point, b: &Point, other: &Polygon) -> Vec<Point> {
    let mut pts = vec![a.clone(), b.clone()];
    for v in other.vertices() {
        if on_open_segment(v, a, b) {
            pts.push(v.clone());
        }
    }
    for (c, d) in other.edges() {
        if segment_contact(a, b, c, d) == SegmentContact::Proper {
            pts.push(line_intersection(a, b, c, d));
        }
    }
    let dir = b.sub(a);
    pts.sort_by(|p, q| p.sub(a).dot(&dir).cmp(&q.sub(a).dot(&dir)));
    pts.dedup();
    pts
}

/// Intersection of the lines `ab` and `cd` (assumed non-parallel).
pub fn line_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Point {
    let r = b.sub(a);
    let s = d.sub(c);
    let t = c.sub(a).cross(&s) / r.cross(&s);
    a.lerp(b, &t)
}

fn midpoint(a: &Point, b: &Point) -> Point {
    let two = Scalar::from_integer(2.into());
    Point::new((&a.x + &b.x) / &two, (&a.y + &b.y) / two)
}

/// A boundary point of `p` strictly outside `window`, if any.
fn escapes(p: &Polygon, window: &Polygon) -> Option<Point> {
    for v in p.vertices() {
        if window.locate(v) == Location::Outside {
            return Some(v.clone());
        }
    }
    for (a, b) in p.edges() {
        let pts = split_points(a, b, window);
        for w in pts.windows(2) {
            let m = midpoint(&w[0], &w[1]);
            if window.locate(&m) == Location::Outside {
                return Some(m);
            }
        }
    }
    None
}

/// A witness point in the common interior of two polygons, if any.
pub fn interiors_overlap(a: &Polygon, b: &Polygon) -> Option<Point> {
    for (p, q) in a.edges() {
        for (c, d) in b.edges() {
            if segment_contact(p, q, c, d) == SegmentContact::Proper {
                return Some(line_intersection(p, q, c, d));
            }
        }
    }
    for (x, y) in [(a, b), (b, a)] {
        for (p, q) in x.edges() {
            let pts = split_points(p, q, y);
            for w in pts.windows(2) {
                let m = midpoint(&w[0], &w[1]);
                if y.locate(&m) == Location::Inside {
                    return Some(m);
                }
            }
        }
    }
    let ia = a.interior_point();
    if b.locate(&ia) == Location::Inside {
        return Some(ia);
    }
    let ib = b.interior_point();
    if a.locate(&ib) == Location::Inside {
        return Some(ib);
    }
    None
}

/// Positive-length collinear overlaps between the boundaries of two polygons.
pub fn shared_segments(a: &Polygon, b: &Polygon) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    for (p, q) in a.edges() {
        for (c, d) in b.edges() {
            if segment_contact(p, q, c, d) != SegmentContact::Overlap {
                continue;
            }
            let dir = q.sub(p);
            let key = |x: &Point| x.sub(p).dot(&dir);
            let (c0, c1) = if key(c) <= key(d) { (c, d) } else { (d, c) };
            let lo = if key(c0) > Scalar::zero() { c0.clone() } else { p.clone() };
            let hi = if key(c1) < key(q) { c1.clone() } else { q.clone() };
            out.push((lo, hi));
        }
    }
    out.sort();
    out
}

/// Counter-clockwise sector `(start, end)` of `poly` at boundary point `v`.
fn sector_at(poly: &Polygon, v: &Point) -> Option<(Point, Point)> {
    let verts = poly.vertices();
    let n = verts.len();
    if let Some(i) = poly.vertex_index(v) {
        let next = &verts[(i + 1) % n];
        let prev = &verts[(i + n - 1) % n];
        return Some((normalize_dir(&next.sub(v)), normalize_dir(&prev.sub(v))));
    }
    for (a, b) in poly.edges() {
        if on_open_segment(v, a, b) {
            return Some((normalize_dir(&b.sub(v)), normalize_dir(&a.sub(v))));
        }
    }
    None
}

/// Vertex record for a point, regardless of whether it has 3 incident regions.
pub fn describe_point(map: &PlanarMap, v: &Point) -> VertexInfo {
    let regions = map.regions_at(v);
    let mut sectors: Vec<Sector> = regions
        .iter()
        .filter_map(|&r| {
            sector_at(&map.regions[r].poly, v).map(|(start, end)| Sector {
                start,
                end,
                region: r,
                color: map.regions[r].color,
            })
        })
        .collect();
    sectors.sort_by(|a, b| cmp_angle(&a.start, &b.start));
    let mut rays: Vec<Point> = sectors.iter().flat_map(|s| [s.start.clone(), s.end.clone()]).collect();
    rays.sort();
    rays.dedup();
    let multicolor: BTreeSet<ColorId> = regions.iter().map(|&r| map.regions[r].color).collect();
    VertexInfo {
        location: v.clone(),
        degree: rays.len(),
        chromaticity: multicolor.len(),
        multicolor,
        regions,
        sectors,
    }
}

fn compute_vertices(map: &PlanarMap) -> Vec<VertexInfo> {
    let mut candidates: BTreeMap<Point, ()> = BTreeMap::new();
    for r in &map.regions {
        for v in r.poly.vertices() {
            candidates.insert(v.clone(), ());
        }
    }
    candidates
        .into_keys()
        .filter(|p| map.window.locate(p) == Location::Inside)
        .filter_map(|p| {
            let count = (0..map.regions.len())
                .filter(|&i| map.bboxes[i].contains(&p) && map.regions[i].poly.on_boundary(&p))
                .count();
            (count >= 3).then(|| describe_point(map, &p))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    pub holds: bool,
    pub witnesses: Vec<Point>,
    pub note: Option<String>,
}

impl ConditionResult {
    fn from_witnesses(witnesses: Vec<Point>) -> Self {
        ConditionResult { holds: witnesses.is_empty(), witnesses, note: None }
    }

    fn trivially(note: &str) -> Self {
        ConditionResult { holds: true, witnesses: vec![], note: Some(note.to_string()) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub jordan: ConditionResult,
    pub locally_finite: ConditionResult,
    pub forbidden_arcs: ConditionResult,
    pub col3: ConditionResult,
    pub cubic: ConditionResult,
    pub poly: ConditionResult,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.entries().iter().all(|(_, c)| c.holds)
    }

    pub fn entries(&self) -> [(&'static str, &ConditionResult); 6] {
        [
            ("jordan", &self.jordan),
            ("locally_finite", &self.locally_finite),
            ("forbidden_arcs", &self.forbidden_arcs),
            ("3col", &self.col3),
            ("cubic", &self.cubic),
            ("poly", &self.poly),
        ]
    }
}

pub fn validate_conditions(map: &PlanarMap) -> ConditionReport {
    let verts = map.vertices();
    let jordan = ConditionResult::from_witnesses(
        verts.iter().filter(|v| v.degree < 3).map(|v| v.location.clone()).collect(),
    );
    let col3 = ConditionResult::from_witnesses(
        verts
            .iter()
            .filter(|v| v.chromaticity == 3 && v.degree > 3)
            .map(|v| v.location.clone())
            .collect(),
    );
    let cubic = ConditionResult::from_witnesses(
        verts.iter().filter(|v| v.degree != 3).map(|v| v.location.clone()).collect(),
    );
    let mut locally_finite =
        ConditionResult::trivially(&format!("finite map with {} regions", map.regions().len()));
    locally_finite.holds = true;
    ConditionReport {
        jordan,
        locally_finite,
        forbidden_arcs: ConditionResult::trivially("polygonal boundaries contain no circular arcs"),
        col3,
        cubic,
        poly: ConditionResult::trivially("all regions are polygons"),
    }
}

/// Vertices with chromaticity 3 and degree above 3 within the closed disk.
pub fn high_degree_trichromatic(map: &PlanarMap, center: &Point, r_sq: &Scalar) -> Vec<Point> {
    map.vertices()
        .iter()
        .filter(|v| v.chromaticity == 3 && v.degree > 3 && v.location.dist_sq(center) <= *r_sq)
        .map(|v| v.location.clone())
        .collect()
}
