//! Exact rational planar primitives.
//!
//! Every coordinate is a [`Scalar`] (an arbitrary precision rational kept in
//! lowest terms), so distance comparisons against 1 are decided on squared
//! values without rounding. The few operations that must produce irrational
//! output (circle intersections) return `f64` approximations next to an exact
//! discrete decision.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar. `BigRational` normalises after every operation, so
/// the denominator is always positive and the fraction is in lowest terms.
pub type Scalar = BigRational;

/// Builds `num / den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn to_f64(s: &Scalar) -> f64 {
    s.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: scale down by powers of two first.
        let n = s.numer().bits() as i64;
        let d = s.denom().bits() as i64;
        let shift = (n.max(d) - 1000).max(0) as usize;
        let nn = (s.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let dd = (s.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        nn / dd
    })
}

/// Nearest rational with denominator `2^bits` to a finite float.
pub fn from_f64_grid(x: f64, bits: u32) -> Scalar {
    let scale = (1u64 << bits) as f64;
    let n = (x * scale).round();
    Scalar::new(BigInt::from(n as i128), BigInt::from(1u64 << bits))
}

/// Largest rational on the `2^-bits` grid that is `<= x`.
pub fn floor_f64_grid(x: f64, bits: u32) -> Scalar {
    let scale = (1u64 << bits) as f64;
    let n = (x * scale).floor();
    Scalar::new(BigInt::from(n as i128), BigInt::from(1u64 << bits))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("degenerate segment: endpoints coincide at {0}")]
    DegenerateSegment(Point),
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon has repeated consecutive vertex {0}")]
    RepeatedVertex(Point),
    #[error("polygon is not simple: edges {0} and {1} intersect")]
    NotSimple(usize, usize),
    #[error("polygon is not counter-clockwise (signed area must be positive)")]
    NotCounterClockwise,
    #[error("circle radius must be positive")]
    NonPositiveRadius,
    #[error("infinite intersection: concentric equal circles")]
    InfiniteIntersection,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    /// Point from `(xnum/xden, ynum/yden)`.
    pub fn from_ratios(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point::new(rat(xn, xd), rat(yn, yd))
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Point::new(Scalar::zero(), Scalar::zero())
    }

    pub fn dist_sq(&self, other: &Point) -> Scalar {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, s: &Scalar) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn dot(&self, other: &Point) -> Scalar {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn cross(&self, other: &Point) -> Scalar {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn norm_sq(&self) -> Scalar {
        self.dot(self)
    }

    /// `self + t (other - self)`.
    pub fn lerp(&self, other: &Point, t: &Scalar) -> Point {
        self.add(&other.sub(self).scale(t))
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [to_f64(&self.x), to_f64(&self.y)]
    }
}

/// Sign of the turn `a -> b -> c`: `Greater` for counter-clockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    b.sub(a).cross(&c.sub(a)).cmp(&Scalar::zero())
}

/// Whether `p` lies on the closed segment `ab`.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if orient(a, b, p) != Ordering::Equal {
        return false;
    }
    let (lo_x, hi_x) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (lo_y, hi_y) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    &p.x >= lo_x && &p.x <= hi_x && &p.y >= lo_y && &p.y <= hi_y
}

/// Whether `p` lies on the open segment `ab` (endpoints excluded).
pub fn on_open_segment(p: &Point, a: &Point, b: &Point) -> bool {
    p != a && p != b && on_segment(p, a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentContact {
    Disjoint,
    /// Interiors cross at a single point that is not an endpoint of either.
    Proper,
    /// Segments meet only at endpoints or where an endpoint touches the other.
    Touch,
    /// Collinear with an overlap of positive length.
    Overlap,
}

pub fn segment_contact(a: &Point, b: &Point, c: &Point, d: &Point) -> SegmentContact {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    use Ordering::*;
    if o1 == Equal && o2 == Equal {
        // Collinear: project on the dominant axis.
        let key = |p: &Point| -> Scalar {
            if a.x != b.x {
                p.x.clone()
            } else {
                p.y.clone()
            }
        };
        let (a1, a2) = minmax(key(a), key(b));
        let (c1, c2) = minmax(key(c), key(d));
        let lo = if a1 > c1 { a1 } else { c1 };
        let hi = if a2 < c2 { a2 } else { c2 };
        return match lo.cmp(&hi) {
            Less => SegmentContact::Overlap,
            Equal => SegmentContact::Touch,
            Greater => SegmentContact::Disjoint,
        };
    }
    if o1 != Equal && o2 != Equal && o3 != Equal && o4 != Equal {
        if o1 != o2 && o3 != o4 {
            return SegmentContact::Proper;
        }
        return SegmentContact::Disjoint;
    }
    if on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d) {
        SegmentContact::Touch
    } else {
        SegmentContact::Disjoint
    }
}

fn minmax(a: Scalar, b: Scalar) -> (Scalar, Scalar) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Exact squared distance from `p` to the closed segment `ab`.
pub fn segment_point_distance_sq(p: &Point, a: &Point, b: &Point) -> Result<Scalar, GeomError> {
    if a == b {
        return Err(GeomError::DegenerateSegment(a.clone()));
    }
    let ab = b.sub(a);
    let t = p.sub(a).dot(&ab) / ab.norm_sq();
    let t = if t.is_negative() {
        Scalar::zero()
    } else if t > Scalar::one() {
        Scalar::one()
    } else {
        t
    };
    Ok(p.dist_sq(&a.lerp(b, &t)))
}

/// Squared distance between two closed segments.
pub fn segment_segment_distance_sq(a: &Point, b: &Point, c: &Point, d: &Point) -> Scalar {
    if segment_contact(a, b, c, d) != SegmentContact::Disjoint {
        return Scalar::zero();
    }
    let cands = [
        segment_point_distance_sq(a, c, d),
        segment_point_distance_sq(b, c, d),
        segment_point_distance_sq(c, a, b),
        segment_point_distance_sq(d, a, b),
    ];
    cands
        .into_iter()
        .filter_map(Result::ok)
        .min()
        .expect("non-degenerate segments")
}

/// Rescales a non-zero direction so that `max(|x|, |y|) = 1`. Parallel
/// directions with the same orientation map to equal points.
pub fn normalize_dir(d: &Point) -> Point {
    let ax = d.x.abs();
    let ay = d.y.abs();
    let m = if ax >= ay { ax } else { ay };
    Point::new(&d.x / &m, &d.y / &m)
}

fn upper_half(d: &Point) -> bool {
    d.y.is_positive() || (d.y.is_zero() && d.x.is_positive())
}

/// Compares the polar angles of two non-zero directions in `[0, 2pi)`.
pub fn cmp_angle(a: &Point, b: &Point) -> Ordering {
    match (upper_half(a), upper_half(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => Scalar::zero().cmp(&a.cross(b)),
    }
}

/// Compares the counter-clockwise angles of `a` and `b` measured from `base`,
/// each in `[0, 2pi)`.
pub fn cmp_angle_from(base: &Point, a: &Point, b: &Point) -> Ordering {
    let half = |d: &Point| {
        let c = base.cross(d);
        c.is_positive() || (c.is_zero() && base.dot(d).is_positive())
    };
    match (half(a), half(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => Scalar::zero().cmp(&a.cross(b)),
    }
}

/// Whether `d` lies strictly inside the counter-clockwise sweep from `start`
/// to `end`.
pub fn strictly_inside_sweep(start: &Point, end: &Point, d: &Point) -> bool {
    let same = |u: &Point, v: &Point| u.cross(v).is_zero() && u.dot(v).is_positive();
    if same(d, start) || same(d, end) {
        return false;
    }
    if same(start, end) {
        return true;
    }
    cmp_angle_from(start, d, end) == Ordering::Less
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn of<'a>(pts: impl IntoIterator<Item = &'a Point>) -> BBox {
        let mut it = pts.into_iter();
        let first = it.next().expect("bbox of empty set").clone();
        let mut min = first.clone();
        let mut max = first;
        for p in it {
            if p.x < min.x {
                min.x = p.x.clone();
            }
            if p.y < min.y {
                min.y = p.y.clone();
            }
            if p.x > max.x {
                max.x = p.x.clone();
            }
            if p.y > max.y {
                max.y = p.y.clone();
            }
        }
        BBox { min, max }
    }

    /// Exact squared gap between two boxes (0 if they touch or overlap).
    pub fn gap_sq(&self, other: &BBox) -> Scalar {
        let gx = axis_gap(&self.min.x, &self.max.x, &other.min.x, &other.max.x);
        let gy = axis_gap(&self.min.y, &self.max.y, &other.min.y, &other.max.y);
        &gx * &gx + &gy * &gy
    }

    /// Upper bound on the squared distance between any two points of the boxes.
    pub fn span_sq(&self, other: &BBox) -> Scalar {
        let dx = max_s(&self.max.x - &other.min.x, &other.max.x - &self.min.x);
        let dy = max_s(&self.max.y - &other.min.y, &other.max.y - &self.min.y);
        &dx * &dx + &dy * &dy
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn to_f64(&self) -> [f64; 4] {
        let a = self.min.to_f64();
        let b = self.max.to_f64();
        [a[0], a[1], b[0], b[1]]
    }
}

fn max_s(a: Scalar, b: Scalar) -> Scalar {
    if a >= b {
        a
    } else {
        b
    }
}

fn axis_gap(a0: &Scalar, a1: &Scalar, b0: &Scalar, b1: &Scalar) -> Scalar {
    if a1 < b0 {
        b0 - a1
    } else if b1 < a0 {
        a0 - b1
    } else {
        Scalar::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    OnBoundary,
    Outside,
}

/// Simple counter-clockwise polygon without holes.
#[derive(Clone, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl fmt::Debug for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.vertices.iter()).finish()
    }
}

impl Polygon {
    /// Validates simplicity, vertex count, distinct consecutive vertices and
    /// positive signed area.
    pub fn new(vertices: Vec<Point>) -> Result<Polygon, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices(n));
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(GeomError::RepeatedVertex(vertices[i].clone()));
            }
        }
        let poly = Polygon { vertices };
        poly.check_simple()?;
        if !poly.area2().is_positive() {
            return Err(GeomError::NotCounterClockwise);
        }
        Ok(poly)
    }

    /// Accepts either orientation and reverses clockwise input.
    pub fn new_any_orientation(mut vertices: Vec<Point>) -> Result<Polygon, GeomError> {
        if vertices.len() >= 3 && signed_area2(&vertices).is_negative() {
            vertices.reverse();
        }
        Polygon::new(vertices)
    }

    /// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
    pub fn rect(x0: Scalar, y0: Scalar, x1: Scalar, y1: Scalar) -> Result<Polygon, GeomError> {
        Polygon::new(vec![
            Point::new(x0.clone(), y0.clone()),
            Point::new(x1.clone(), y0),
            Point::new(x1, y1.clone()),
            Point::new(x0, y1),
        ])
    }

    fn check_simple(&self) -> Result<(), GeomError> {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            for j in (i + 1)..n {
                let (c, d) = self.edge(j);
                let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                let contact = segment_contact(a, b, c, d);
                if adjacent {
                    // Adjacent edges may only share their common vertex.
                    if contact == SegmentContact::Overlap || contact == SegmentContact::Proper {
                        return Err(GeomError::NotSimple(i, j));
                    }
                    if n == 3 {
                        continue;
                    }
                    let (shared, other_a, other_b) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                    if on_segment(other_a, c, d) && other_a != shared
                        || on_segment(other_b, a, b) && other_b != shared
                    {
                        return Err(GeomError::NotSimple(i, j));
                    }
                } else if contact != SegmentContact::Disjoint {
                    return Err(GeomError::NotSimple(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        let n = self.vertices.len();
        (&self.vertices[i], &self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    /// Twice the signed area.
    pub fn area2(&self) -> Scalar {
        signed_area2(&self.vertices)
    }

    pub fn area(&self) -> Scalar {
        self.area2() / int(2)
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(&self.vertices)
    }

    /// Maximum squared vertex-vertex distance, which is the squared diameter.
    pub fn diameter_sq(&self) -> Scalar {
        let mut best = Scalar::zero();
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                let d = a.dist_sq(b);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    pub fn locate(&self, p: &Point) -> Location {
        for (a, b) in self.edges() {
            if on_segment(p, a, b) {
                return Location::OnBoundary;
            }
        }
        // Winding number with exact orientation tests.
        let mut wn = 0i32;
        for (a, b) in self.edges() {
            if a.y <= p.y {
                if b.y > p.y && orient(a, b, p) == Ordering::Greater {
                    wn += 1;
                }
            } else if b.y <= p.y && orient(a, b, p) == Ordering::Less {
                wn -= 1;
            }
        }
        if wn != 0 {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    pub fn contains_closed(&self, p: &Point) -> bool {
        self.locate(p) != Location::Outside
    }

    /// Whether `p` lies on the boundary of the polygon.
    pub fn on_boundary(&self, p: &Point) -> bool {
        self.edges().any(|(a, b)| on_segment(p, a, b))
    }

    /// Index of a vertex equal to `p`.
    pub fn vertex_index(&self, p: &Point) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    /// Returns a copy with `p` inserted on the edge whose interior contains it.
    pub fn with_vertex_on_edge(&self, p: &Point) -> Option<Polygon> {
        for i in 0..self.vertices.len() {
            let (a, b) = self.edge(i);
            if on_open_segment(p, a, b) {
                let mut v = self.vertices.clone();
                v.insert(i + 1, p.clone());
                return Some(Polygon { vertices: v });
            }
        }
        None
    }

    /// Removes vertices whose two incident edges are collinear and continue
    /// in the same direction.
    pub fn simplified(&self) -> Polygon {
        let mut v = self.vertices.clone();
        loop {
            let n = v.len();
            if n <= 3 {
                break;
            }
            let mut removed = false;
            for i in 0..n {
                let prev = &v[(i + n - 1) % n];
                let next = &v[(i + 1) % n];
                if orient(prev, &v[i], next) == Ordering::Equal
                    && v[i].sub(prev).dot(&next.sub(&v[i])).is_positive()
                {
                    v.remove(i);
                    removed = true;
                    break;
                }
            }
            if !removed {
                break;
            }
        }
        Polygon { vertices: v }
    }

    /// A point strictly inside the polygon, found exactly from an ear.
    pub fn interior_point(&self) -> Point {
        let tris = self.triangulate();
        let [a, b, c] = &tris[0];
        Point::new(
            (&a.x + &b.x + &c.x) / int(3),
            (&a.y + &b.y + &c.y) / int(3),
        )
    }

    /// Ear-clipping triangulation (exact). Triangles are counter-clockwise.
    pub fn triangulate(&self) -> Vec<[Point; 3]> {
        let mut idx: Vec<usize> = (0..self.vertices.len()).collect();
        let v = &self.vertices;
        let mut out = Vec::with_capacity(v.len() - 2);
        let mut guard = 0usize;
        while idx.len() > 3 && guard < 10 * v.len() * v.len() {
            guard += 1;
            let n = idx.len();
            let mut clipped = false;
            for i in 0..n {
                let (ia, ib, ic) = (idx[(i + n - 1) % n], idx[i], idx[(i + 1) % n]);
                let (a, b, c) = (&v[ia], &v[ib], &v[ic]);
                if orient(a, b, c) != Ordering::Greater {
                    continue;
                }
                let blocked = idx.iter().any(|&j| {
                    j != ia && j != ib && j != ic && {
                        let p = &v[j];
                        orient(a, b, p) != Ordering::Less
                            && orient(b, c, p) != Ordering::Less
                            && orient(c, a, p) != Ordering::Less
                    }
                });
                if blocked {
                    continue;
                }
                out.push([a.clone(), b.clone(), c.clone()]);
                idx.remove(i);
                clipped = true;
                break;
            }
            if !clipped {
                // Only collinear runs remain; drop a flat vertex.
                let n = idx.len();
                let flat = (0..n).find(|&i| {
                    orient(&v[idx[(i + n - 1) % n]], &v[idx[i]], &v[idx[(i + 1) % n]])
                        == Ordering::Equal
                });
                match flat {
                    Some(i) => {
                        idx.remove(i);
                    }
                    None => break,
                }
            }
        }
        if idx.len() == 3 {
            let (a, b, c) = (&v[idx[0]], &v[idx[1]], &v[idx[2]]);
            if orient(a, b, c) == Ordering::Greater {
                out.push([a.clone(), b.clone(), c.clone()]);
            }
        }
        out
    }

    pub fn to_f64(&self) -> Vec<[f64; 2]> {
        self.vertices.iter().map(Point::to_f64).collect()
    }

    /// Exact centroid of the vertex set.
    pub fn vertex_centroid(&self) -> Point {
        let n = int(self.vertices.len() as i64);
        let sx: Scalar = self.vertices.iter().map(|p| p.x.clone()).sum();
        let sy: Scalar = self.vertices.iter().map(|p| p.y.clone()).sum();
        Point::new(sx / &n, sy / n)
    }
}

pub fn signed_area2(v: &[Point]) -> Scalar {
    let n = v.len();
    let mut acc = Scalar::zero();
    for i in 0..n {
        acc += v[i].cross(&v[(i + 1) % n]);
    }
    acc
}

/// Whether two closed polygons share at least one point.
pub fn polygons_touch(p: &Polygon, q: &Polygon) -> bool {
    for (a, b) in p.edges() {
        for (c, d) in q.edges() {
            if segment_contact(a, b, c, d) != SegmentContact::Disjoint {
                return true;
            }
        }
    }
    p.contains_closed(&q.vertices[0]) || q.contains_closed(&p.vertices[0])
}

/// Squared distances achieved between two closed polygonal regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceInterval {
    pub min_sq: Scalar,
    pub max_sq: Scalar,
}

impl DistanceInterval {
    pub fn contains_sq(&self, d_sq: &Scalar) -> bool {
        &self.min_sq <= d_sq && d_sq <= &self.max_sq
    }
}

/// Interval `[min_sq, max_sq]` of squared distances between points of `p`
/// and points of `q`. Both regions are connected and compact, so every value
/// in between is realised.
pub fn polygon_distance_interval(p: &Polygon, q: &Polygon) -> DistanceInterval {
    let mut max_sq = Scalar::zero();
    for a in p.vertices() {
        for b in q.vertices() {
            let d = a.dist_sq(b);
            if d > max_sq {
                max_sq = d;
            }
        }
    }
    let min_sq = if polygons_touch(p, q) {
        Scalar::zero()
    } else {
        let mut best: Option<Scalar> = None;
        let mut consider = |d: Scalar| {
            if best.as_ref().map_or(true, |b| &d < b) {
                best = Some(d);
            }
        };
        for a in p.vertices() {
            for (c, d) in q.edges() {
                consider(segment_point_distance_sq(a, c, d).expect("valid polygon edge"));
            }
        }
        for a in q.vertices() {
            for (c, d) in p.edges() {
                consider(segment_point_distance_sq(a, c, d).expect("valid polygon edge"));
            }
        }
        best.expect("polygons have vertices")
    };
    DistanceInterval { min_sq, max_sq }
}

/// Result of intersecting two circles: the count is exact, the points are
/// `f64` approximations (absolute error well below 1e-12 for unit-scale input).
#[derive(Debug, Clone, PartialEq)]
pub struct CircleIntersection {
    pub count: usize,
    pub points: Vec<[f64; 2]>,
}

pub fn circle_circle_intersection(
    c1: &Point,
    r1_sq: &Scalar,
    c2: &Point,
    r2_sq: &Scalar,
) -> Result<CircleIntersection, GeomError> {
    if !r1_sq.is_positive() || !r2_sq.is_positive() {
        return Err(GeomError::NonPositiveRadius);
    }
    let d_sq = c1.dist_sq(c2);
    if d_sq.is_zero() {
        if r1_sq == r2_sq {
            return Err(GeomError::InfiniteIntersection);
        }
        return Ok(CircleIntersection { count: 0, points: vec![] });
    }
    // Compare d with r1 + r2 and |r1 - r2| exactly. With s = r1^2 + r2^2 and
    // p = r1 r2 (possibly irrational): d^2 vs s +- 2p  <=>  (d^2 - s)^2 vs 4 r1^2 r2^2,
    // together with the sign of d^2 - s.
    let s = r1_sq + r2_sq;
    let e = &d_sq - &s;
    let e2 = &e * &e;
    let four_p2 = int(4) * r1_sq * r2_sq;
    let count = match e2.cmp(&four_p2) {
        Ordering::Less => 2,
        Ordering::Equal => 1,
        Ordering::Greater => 0,
    };
    let mut points = Vec::new();
    if count > 0 {
        let [x1, y1] = c1.to_f64();
        let [x2, y2] = c2.to_f64();
        let d2 = to_f64(&d_sq);
        let r1s = to_f64(r1_sq);
        let r2s = to_f64(r2_sq);
        let d = d2.sqrt();
        let a = (r1s - r2s + d2) / (2.0 * d);
        let h = if count == 1 { 0.0 } else { (r1s - a * a).max(0.0).sqrt() };
        let ux = (x2 - x1) / d;
        let uy = (y2 - y1) / d;
        let mx = x1 + a * ux;
        let my = y1 + a * uy;
        if count == 1 {
            points.push([mx, my]);
        } else {
            points.push([mx - h * uy, my + h * ux]);
            points.push([mx + h * uy, my - h * ux]);
        }
    }
    Ok(CircleIntersection { count, points })
}

/// Sign of `a + b * sqrt(d)` for rational `a`, `b` and `d >= 0`.
pub fn sign_with_sqrt(a: &Scalar, b: &Scalar, d: &Scalar) -> Ordering {
    let zero = Scalar::zero();
    let sa = a.cmp(&zero);
    let sb = if d.is_zero() { Ordering::Equal } else { b.cmp(&zero) };
    match (sa, sb) {
        (_, Ordering::Equal) => sa,
        (Ordering::Equal, _) => sb,
        (x, y) if x == y => x,
        _ => {
            // Opposite signs: compare a^2 with b^2 d.
            let lhs = a * a;
            let rhs = b * b * d;
            match lhs.cmp(&rhs) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

/// A root `(-b + sign * sqrt(disc)) / (2a)` of a rational quadratic, kept symbolic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticRoot {
    /// Rational part `-b / 2a`.
    pub base: Scalar,
    /// Coefficient of `sqrt(disc)`.
    pub coef: Scalar,
    pub disc: Scalar,
}

impl QuadraticRoot {
    pub fn is_rational(&self) -> bool {
        self.coef.is_zero() || self.disc.is_zero() || sqrt_exact(&self.disc).is_some()
    }

    /// The exact value when the discriminant is a perfect square.
    pub fn exact(&self) -> Option<Scalar> {
        if self.coef.is_zero() || self.disc.is_zero() {
            return Some(self.base.clone());
        }
        sqrt_exact(&self.disc).map(|r| &self.base + &self.coef * r)
    }

    pub fn approx(&self) -> f64 {
        to_f64(&self.base) + to_f64(&self.coef) * to_f64(&self.disc).sqrt()
    }

    /// Exact comparison of the root with a rational value.
    pub fn cmp_rational(&self, q: &Scalar) -> Ordering {
        sign_with_sqrt(&(&self.base - q), &self.coef, &self.disc)
    }
}

/// Exact square root of a rational, when it exists.
pub fn sqrt_exact(q: &Scalar) -> Option<Scalar> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Scalar::new(n, d))
    } else {
        None
    }
}

/// Parameters `t in [0, 1]` where segment `a + t (b - a)` meets the circle
/// `|x - c|^2 = r_sq`. Existence and multiplicity are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentCircleHit {
    pub t: QuadraticRoot,
    /// True when the segment's line is tangent to the circle at this root.
    pub tangent: bool,
}

pub fn segment_circle_intersection(
    a: &Point,
    b: &Point,
    c: &Point,
    r_sq: &Scalar,
) -> Result<Vec<SegmentCircleHit>, GeomError> {
    if a == b {
        return Err(GeomError::DegenerateSegment(a.clone()));
    }
    let d = b.sub(a);
    let f = a.sub(c);
    let qa = d.norm_sq();
    let qb = int(2) * d.dot(&f);
    let qc = f.norm_sq() - r_sq;
    let disc = &qb * &qb - int(4) * &qa * &qc;
    if disc.is_negative() {
        return Ok(vec![]);
    }
    let two_a = int(2) * &qa;
    let base = -&qb / &two_a;
    let zero = Scalar::zero();
    let one = Scalar::one();
    let in_unit = |r: &QuadraticRoot| {
        r.cmp_rational(&zero) != Ordering::Less && r.cmp_rational(&one) != Ordering::Greater
    };
    let mut out = Vec::new();
    if disc.is_zero() {
        let r = QuadraticRoot { base, coef: Scalar::zero(), disc: Scalar::zero() };
        if in_unit(&r) {
            out.push(SegmentCircleHit { t: r, tangent: true });
        }
        return Ok(out);
    }
    // sqrt(disc) / (2a) written as coef * sqrt(disc') with disc' = disc.
    let coef = Scalar::one() / &two_a;
    for sign in [-1i64, 1] {
        let r = QuadraticRoot { base: base.clone(), coef: &coef * int(sign), disc: disc.clone() };
        if in_unit(&r) {
            out.push(SegmentCircleHit { t: r, tangent: false });
        }
    }
    Ok(out)
}

/// Whether the open polyline `path` crosses or touches the circle `|x - c| = 1`.
pub fn polyline_meets_unit_circle(path: &[Point], c: &Point) -> bool {
    let one = Scalar::one();
    path.windows(2).any(|w| {
        w[0] != w[1]
            && !segment_circle_intersection(&w[0], &w[1], c, &one)
                .map(|h| h.is_empty())
                .unwrap_or(true)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: (i64, i64), y: (i64, i64)) -> Point {
        Point::from_ratios(x.0, x.1, y.0, y.1)
    }

    fn unit_square(dx: i64) -> Polygon {
        Polygon::rect(int(dx), int(0), int(dx + 1), int(1)).unwrap()
    }

    #[test]
    fn segment_distance_examples() {
        let o = Point::origin();
        assert_eq!(
            segment_point_distance_sq(&o, &Point::from_ints(1, -1), &Point::from_ints(1, 1)).unwrap(),
            int(1)
        );
        assert_eq!(
            segment_point_distance_sq(&o, &Point::from_ints(2, 3), &Point::from_ints(5, 3)).unwrap(),
            int(13)
        );
        assert_eq!(
            segment_point_distance_sq(&p((1, 2), (1, 2)), &o, &Point::from_ints(1, 0)).unwrap(),
            rat(1, 4)
        );
        assert!(matches!(
            segment_point_distance_sq(&o, &Point::from_ints(1, 1), &Point::from_ints(1, 1)),
            Err(GeomError::DegenerateSegment(_))
        ));
    }

    #[test]
    fn square_intervals() {
        let s = unit_square(0);
        let iv = polygon_distance_interval(&s, &s);
        assert_eq!(iv.min_sq, int(0));
        assert_eq!(iv.max_sq, int(2));
        let t = unit_square(3);
        let iv = polygon_distance_interval(&s, &t);
        assert_eq!(iv.min_sq, int(4));
        assert_eq!(iv.max_sq, int(17));
    }

    #[test]
    fn circle_examples() {
        let one = int(1);
        let o = Point::origin();
        let r = circle_circle_intersection(&o, &one, &Point::from_ints(2, 0), &one).unwrap();
        assert_eq!(r.count, 1);
        assert!((r.points[0][0] - 1.0).abs() < 1e-12 && r.points[0][1].abs() < 1e-12);
        let r = circle_circle_intersection(&o, &one, &Point::from_ints(3, 0), &one).unwrap();
        assert_eq!(r.count, 0);
        let r = circle_circle_intersection(&o, &one, &Point::from_ints(1, 0), &one).unwrap();
        assert_eq!(r.count, 2);
        let h = 3f64.sqrt() / 2.0;
        for q in &r.points {
            assert!((q[0] - 0.5).abs() < 1e-12);
            assert!((q[1].abs() - h).abs() < 1e-12);
        }
        assert_eq!(
            circle_circle_intersection(&o, &one, &o, &one),
            Err(GeomError::InfiniteIntersection)
        );
        // Internally tangent.
        let r = circle_circle_intersection(&o, &int(4), &Point::from_ints(1, 0), &one).unwrap();
        assert_eq!(r.count, 1);
    }

    #[test]
    fn polygon_validation() {
        assert!(matches!(
            Polygon::new(vec![Point::from_ints(0, 0), Point::from_ints(1, 0)]),
            Err(GeomError::TooFewVertices(2))
        ));
        let cw = vec![Point::from_ints(0, 0), Point::from_ints(0, 1), Point::from_ints(1, 0)];
        assert_eq!(Polygon::new(cw.clone()), Err(GeomError::NotCounterClockwise));
        assert!(Polygon::new_any_orientation(cw).is_ok());
        let bowtie = vec![
            Point::from_ints(0, 0),
            Point::from_ints(2, 2),
            Point::from_ints(2, 0),
            Point::from_ints(0, 2),
        ];
        assert!(matches!(Polygon::new(bowtie), Err(GeomError::NotSimple(_, _))));
    }

    #[test]
    fn locate_and_triangulate() {
        let l = Polygon::new(vec![
            Point::from_ints(0, 0),
            Point::from_ints(2, 0),
            Point::from_ints(2, 1),
            Point::from_ints(1, 1),
            Point::from_ints(1, 2),
            Point::from_ints(0, 2),
        ])
        .unwrap();
        assert_eq!(l.locate(&p((1, 2), (1, 2))), Location::Inside);
        assert_eq!(l.locate(&p((3, 2), (3, 2))), Location::Outside);
        assert_eq!(l.locate(&Point::from_ints(1, 1)), Location::OnBoundary);
        let tris = l.triangulate();
        let total: Scalar = tris.iter().map(|t| signed_area2(t)).sum();
        assert_eq!(total, l.area2());
        assert_eq!(l.locate(&l.interior_point()), Location::Inside);
    }

    #[test]
    fn segment_circle_exact() {
        let o = Point::origin();
        let one = int(1);
        let hits = segment_circle_intersection(&Point::from_ints(-2, 0), &Point::from_ints(2, 0), &o, &one)
            .unwrap();
        assert_eq!(hits.len(), 2);
        assert_eq!(hits[0].t.exact(), Some(rat(1, 4)));
        let tangent =
            segment_circle_intersection(&Point::from_ints(-2, 1), &Point::from_ints(2, 1), &o, &one).unwrap();
        assert_eq!(tangent.len(), 1);
        assert!(tangent[0].tangent);
        let miss = segment_circle_intersection(&Point::from_ints(-2, 2), &Point::from_ints(2, 2), &o, &one)
            .unwrap();
        assert!(miss.is_empty());
        // Irrational root: y = 1/2 chord.
        let h = segment_circle_intersection(
            &p((-2, 1), (1, 2)),
            &p((2, 1), (1, 2)),
            &o,
            &one,
        )
        .unwrap();
        assert_eq!(h.len(), 2);
        assert!(!h[0].t.is_rational());
    }

    #[test]
    fn sqrt_sign() {
        // 1 - sqrt(2) < 0, 2 - sqrt(2) > 0, 2 - sqrt(4) = 0
        assert_eq!(sign_with_sqrt(&int(1), &int(-1), &int(2)), Ordering::Less);
        assert_eq!(sign_with_sqrt(&int(2), &int(-1), &int(2)), Ordering::Greater);
        assert_eq!(sign_with_sqrt(&int(2), &int(-1), &int(4)), Ordering::Equal);
    }
}
