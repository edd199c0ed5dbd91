//! Exact properness checking against a forbidden distance band, plus a
//! seeded sampling oracle.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::geom::{
    int, polygon_distance_interval, segment_contact, to_f64, DistanceInterval, Location, Point,
    Polygon, Scalar, SegmentContact,
};
use crate::planemap::{ColorId, PlanarMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PropernessError {
    #[error("eps must satisfy 0 <= eps < 1, got {0}")]
    InvalidEps(Scalar),
    #[error("sample count must be at least 1")]
    ZeroSamples,
    #[error("path is empty")]
    EmptyPath,
    #[error("path is not monochromatic near {0}")]
    PathNotMonochromatic(Point),
}

/// Forbidden distances `[1 - eps, 1 + eps]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenInterval {
    eps: Scalar,
    lo_sq: Scalar,
    hi_sq: Scalar,
}

impl ForbiddenInterval {
    pub fn new(eps: Scalar) -> Result<Self, PropernessError> {
        if eps.is_negative() || eps >= Scalar::one() {
            return Err(PropernessError::InvalidEps(eps));
        }
        let one = Scalar::one();
        let lo = &one - &eps;
        let hi = &one + &eps;
        Ok(ForbiddenInterval { lo_sq: &lo * &lo, hi_sq: &hi * &hi, eps })
    }

    pub fn unit() -> Self {
        ForbiddenInterval::new(Scalar::zero()).expect("eps = 0 is valid")
    }

    pub fn eps(&self) -> &Scalar {
        &self.eps
    }

    pub fn lo_sq(&self) -> &Scalar {
        &self.lo_sq
    }

    pub fn hi_sq(&self) -> &Scalar {
        &self.hi_sq
    }

    /// Whether `d_sq` lies in the open band `((1-eps)^2, (1+eps)^2)`, or
    /// equals 1 when `eps = 0`.
    pub fn forbids_sq(&self, d_sq: &Scalar) -> bool {
        if self.eps.is_zero() {
            d_sq.is_one()
        } else {
            d_sq > &self.lo_sq && d_sq < &self.hi_sq
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStatus {
    Clear,
    Violation,
    Critical,
}

/// Classifies an achieved squared-distance interval against the band.
pub fn classify(iv: &DistanceInterval, band: &ForbiddenInterval) -> PairStatus {
    let (m, big_m) = (&iv.min_sq, &iv.max_sq);
    if band.eps.is_zero() {
        let one = Scalar::one();
        if m < &one && big_m > &one {
            PairStatus::Violation
        } else if m == &one || big_m == &one {
            PairStatus::Critical
        } else {
            PairStatus::Clear
        }
    } else if m < &band.hi_sq && big_m > &band.lo_sq {
        PairStatus::Violation
    } else if m == &band.hi_sq || big_m == &band.lo_sq {
        PairStatus::Critical
    } else {
        PairStatus::Clear
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PairWitness {
    pub a: usize,
    pub b: usize,
    pub min_sq: Scalar,
    pub max_sq: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropernessReport {
    pub proper: bool,
    pub violations: Vec<PairWitness>,
    pub critical: Vec<PairWitness>,
}

impl PropernessReport {
    /// Region pairs in `violations` or `critical`.
    pub fn flagged_pairs(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.violations.iter().chain(&self.critical).map(|w| (w.a, w.b)).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Same-coloured region pairs `(i, j)` with `i <= j`.
fn same_color_pairs(map: &PlanarMap) -> Vec<(usize, usize)> {
    let n = map.regions().len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i..n {
            if map.color(i) == map.color(j) {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn properness_check(map: &PlanarMap, band: &ForbiddenInterval) -> PropernessReport {
    let pairs = same_color_pairs(map);
    let results: Vec<(PairStatus, PairWitness)> = crate::pool().install(|| {
        pairs
            .par_iter()
            .filter_map(|&(i, j)| {
                let (bi, bj) = (map.bbox(i), map.bbox(j));
                if bi.gap_sq(bj) > band.hi_sq || bi.span_sq(bj) < band.lo_sq {
                    return None;
                }
                let iv = polygon_distance_interval(&map.regions()[i].poly, &map.regions()[j].poly);
                match classify(&iv, band) {
                    PairStatus::Clear => None,
                    s => Some((s, PairWitness { a: i, b: j, min_sq: iv.min_sq, max_sq: iv.max_sq })),
                }
            })
            .collect()
    });
    let mut violations = Vec::new();
    let mut critical = Vec::new();
    for (s, w) in results {
        match s {
            PairStatus::Violation => violations.push(w),
            PairStatus::Critical => critical.push(w),
            PairStatus::Clear => {}
        }
    }
    violations.sort();
    critical.sort();
    PropernessReport { proper: violations.is_empty(), violations, critical }
}

/// A sampled pair of interior points of same-coloured regions at a forbidden
/// distance, stored exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleHit {
    pub a: usize,
    pub b: usize,
    pub x: Point,
    pub y: Point,
    pub dist_sq: Scalar,
}

impl OracleHit {
    /// Exact recheck against the map: both points interior to their regions,
    /// equal colours and a forbidden distance.
    pub fn recheck(&self, map: &PlanarMap, band: &ForbiddenInterval) -> bool {
        let regions = map.regions();
        self.a < regions.len()
            && self.b < regions.len()
            && map.color(self.a) == map.color(self.b)
            && self.x.dist_sq(&self.y) == self.dist_sq
            && band.forbids_sq(&self.dist_sq)
            && (regions[self.a].poly.locate(&self.x) == Location::Inside
                && regions[self.b].poly.locate(&self.y) == Location::Inside
                || regions[self.b].poly.locate(&self.x) == Location::Inside
                    && regions[self.a].poly.locate(&self.y) == Location::Inside)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub proper: bool,
    pub samples: usize,
    /// One hit per region pair (the first found), sorted by pair.
    pub hits: Vec<OracleHit>,
}

impl OracleReport {
    pub fn flagged_pairs(&self) -> Vec<(usize, usize)> {
        self.hits.iter().map(|h| (h.a, h.b)).collect()
    }
}

struct FloatPoly {
    pts: Vec<[f64; 2]>,
    bbox: [f64; 4],
}

impl FloatPoly {
    fn new(p: &Polygon) -> Self {
        let pts = p.to_f64();
        let mut bbox = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for q in &pts {
            bbox[0] = bbox[0].min(q[0]);
            bbox[1] = bbox[1].min(q[1]);
            bbox[2] = bbox[2].max(q[0]);
            bbox[3] = bbox[3].max(q[1]);
        }
        FloatPoly { pts, bbox }
    }

    fn maybe_contains(&self, p: [f64; 2]) -> bool {
        let tol = 1e-9;
        if p[0] < self.bbox[0] - tol
            || p[0] > self.bbox[2] + tol
            || p[1] < self.bbox[1] - tol
            || p[1] > self.bbox[3] + tol
        {
            return false;
        }
        let n = self.pts.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (self.pts[i], self.pts[j]);
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let xc = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if p[0] < xc {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }
}

fn exact(x: f64) -> Scalar {
    BigRational::from_float(x).expect("finite sample coordinate")
}

/// Rational point on the unit circle from a rational parameter `t`.
fn unit_direction(t: &Scalar, quadrant: u8) -> Point {
    let one = Scalar::one();
    let den = &one + t * t;
    let c = (&one - t * t) / &den;
    let s = int(2) * t / den;
    match quadrant {
        0 => Point::new(c, s),
        1 => Point::new(-s, c),
        2 => Point::new(-c, -s),
        _ => Point::new(s, -c),
    }
}

const CHUNK: usize = 4096;

/// Samples `n` points `x` uniformly by area, pairs each with a point `y` at a
/// forbidden distance in a uniformly random rational direction, and reports
/// pairs of interior points of same-coloured regions. Every hit is rechecked
/// exactly before it is reported.
pub fn sampling_oracle(
    map: &PlanarMap,
    band: &ForbiddenInterval,
    n: usize,
    seed: u64,
) -> Result<OracleReport, PropernessError> {
    if n == 0 {
        return Err(PropernessError::ZeroSamples);
    }
    let regions = map.regions();
    let floats: Vec<FloatPoly> = regions.iter().map(|r| FloatPoly::new(&r.poly)).collect();
    let tris: Vec<Vec<[[f64; 2]; 3]>> = regions
        .iter()
        .map(|r| {
            r.poly
                .triangulate()
                .iter()
                .map(|t| [t[0].to_f64(), t[1].to_f64(), t[2].to_f64()])
                .collect()
        })
        .collect();
    let tri_areas: Vec<Vec<f64>> = tris
        .iter()
        .map(|ts| ts.iter().map(|t| tri_area(t)).collect())
        .collect();
    let areas: Vec<f64> = tri_areas.iter().map(|a| a.iter().sum()).collect();
    let total: f64 = areas.iter().sum();
    // Same-coloured partner candidates within reach of the band.
    let reach = (1.0 + to_f64(&band.eps)).powi(2);
    let partners: Vec<Vec<usize>> = (0..regions.len())
        .map(|i| {
            (0..regions.len())
                .filter(|&j| {
                    map.color(i) == map.color(j) && to_f64(&map.bbox(i).gap_sq(map.bbox(j))) <= reach + 1e-9
                })
                .collect()
        })
        .collect();
    let eps = to_f64(&band.eps);
    let chunks = n.div_ceil(CHUNK);

    let found: Vec<OracleHit> = crate::pool().install(|| {
        (0..chunks)
            .into_par_iter()
            .flat_map_iter(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let count = CHUNK.min(n - c * CHUNK);
                let mut hits = Vec::new();
                let mut seen = std::collections::HashSet::new();
                for _ in 0..count {
                    let i = pick(&mut rng, &areas, total);
                    let k = pick(&mut rng, &tri_areas[i], areas[i]);
                    let x = sample_triangle(&mut rng, &tris[i][k]);
                    let t = (rng.gen_range(0..=(1u64 << 30)) as f64) / (1u64 << 30) as f64;
                    let quadrant = rng.gen_range(0..4u8);
                    let r = if eps == 0.0 {
                        1.0
                    } else {
                        let f: f64 = rng.gen_range(1e-6..1.0 - 1e-6);
                        let g = ((1.0 - eps + 2.0 * eps * f) * (1u64 << 40) as f64).round();
                        g / (1u64 << 40) as f64
                    };
                    let den = 1.0 + t * t;
                    let (c0, s0) = ((1.0 - t * t) / den, 2.0 * t / den);
                    let (ux, uy) = match quadrant {
                        0 => (c0, s0),
                        1 => (-s0, c0),
                        2 => (-c0, -s0),
                        _ => (s0, -c0),
                    };
                    let y = [x[0] + r * ux, x[1] + r * uy];
                    for &j in &partners[i] {
                        if seen.contains(&(i.min(j), i.max(j))) || !floats[j].maybe_contains(y) {
                            continue;
                        }
                        if let Some(h) = confirm(map, band, i, j, x, t, quadrant, r) {
                            seen.insert((h.a, h.b));
                            hits.push(h);
                        }
                    }
                }
                hits
            })
            .collect()
    });
    let mut best: std::collections::BTreeMap<(usize, usize), OracleHit> = Default::default();
    for h in found {
        best.entry((h.a, h.b)).or_insert(h);
    }
    let hits: Vec<OracleHit> = best.into_values().collect();
    Ok(OracleReport { proper: hits.is_empty(), samples: n, hits })
}

#[allow(clippy::too_many_arguments)]
fn confirm(
    map: &PlanarMap,
    band: &ForbiddenInterval,
    i: usize,
    j: usize,
    x: [f64; 2],
    t: f64,
    quadrant: u8,
    r: f64,
) -> Option<OracleHit> {
    let xp = Point::new(exact(x[0]), exact(x[1]));
    let u = unit_direction(&exact(t), quadrant);
    let r = exact(r);
    let yp = xp.add(&u.scale(&r));
    let regions = map.regions();
    if regions[i].poly.locate(&xp) != Location::Inside || regions[j].poly.locate(&yp) != Location::Inside {
        return None;
    }
    let dist_sq = xp.dist_sq(&yp);
    if !band.forbids_sq(&dist_sq) {
        return None;
    }
    let (a, b, x, y) = if i <= j { (i, j, xp, yp) } else { (j, i, yp, xp) };
    Some(OracleHit { a, b, x, y, dist_sq })
}

fn tri_area(t: &[[f64; 2]; 3]) -> f64 {
    ((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[1][1] - t[0][1]) * (t[2][0] - t[0][0])).abs() / 2.0
}

fn pick<R: Rng>(rng: &mut R, weights: &[f64], total: f64) -> usize {
    let mut target = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if target < *w {
            return i;
        }
        target -= w;
    }
    weights.len() - 1
}

fn sample_triangle<R: Rng>(rng: &mut R, t: &[[f64; 2]; 3]) -> [f64; 2] {
    let (mut a, mut b): (f64, f64) = (rng.gen(), rng.gen());
    if a + b > 1.0 {
        a = 1.0 - a;
        b = 1.0 - b;
    }
    [
        t[0][0] + a * (t[1][0] - t[0][0]) + b * (t[2][0] - t[0][0]),
        t[0][1] + a * (t[1][1] - t[0][1]) + b * (t[2][1] - t[0][1]),
    ]
}

/// True iff `z` carries the path's colour and one path endpoint is closer
/// than 1 to `z` while the other is farther than 1.
pub fn monochromatic_path_conflict(
    map: &PlanarMap,
    path: &[Point],
    z: &Point,
) -> Result<bool, PropernessError> {
    let first = path.first().ok_or(PropernessError::EmptyPath)?;
    let color = path_color(map, path)?;
    if !map.multicolor(z).contains(&color) {
        return Ok(false);
    }
    let last = path.last().expect("non-empty");
    let one = Scalar::one();
    let (ds, de) = (z.dist_sq(first), z.dist_sq(last));
    Ok(ds < one && de > one || de < one && ds > one)
}

/// The single colour whose closed regions contain the whole polyline.
pub fn path_color(map: &PlanarMap, path: &[Point]) -> Result<ColorId, PropernessError> {
    let first = path.first().ok_or(PropernessError::EmptyPath)?;
    let mut candidates = map.multicolor(first);
    let two = int(2);
    let mut probes: Vec<Point> = path.to_vec();
    for w in path.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let mut cuts = vec![w[0].clone(), w[1].clone()];
        for r in map.regions() {
            for (c, d) in r.poly.edges() {
                match segment_contact(&w[0], &w[1], c, d) {
                    SegmentContact::Disjoint | SegmentContact::Overlap => {}
                    _ => {
                        for v in [c, d] {
                            if crate::geom::on_segment(v, &w[0], &w[1]) {
                                cuts.push(v.clone());
                            }
                        }
                        if segment_contact(&w[0], &w[1], c, d) == SegmentContact::Proper {
                            cuts.push(crate::planemap::line_intersection(&w[0], &w[1], c, d));
                        }
                    }
                }
            }
        }
        let dir = w[1].sub(&w[0]);
        cuts.sort_by(|p, q| p.sub(&w[0]).dot(&dir).cmp(&q.sub(&w[0]).dot(&dir)));
        cuts.dedup();
        for c in cuts.windows(2) {
            probes.push(Point::new((&c[0].x + &c[1].x) / &two, (&c[0].y + &c[1].y) / &two));
        }
    }
    for p in &probes {
        let here = map.multicolor(p);
        candidates.retain(|c| here.contains(c));
        if candidates.is_empty() {
            return Err(PropernessError::PathNotMonochromatic(p.clone()));
        }
    }
    Ok(*candidates.iter().next().expect("non-empty"))
}
