//! Arc colourings of a unit circle with angles in exact rational turns.
//!
//! Two points of the unit circle are at chord distance 1 exactly when their
//! angular separation is 1/6 turn, so every distance-1 test here is a
//! rational comparison against 1/6.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed};
use rand::Rng;
use thiserror::Error;

use crate::geom::{rat, to_f64, Scalar};
use crate::planemap::ColorId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircleError {
    #[error("breakpoints and colors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("a coloring needs at least one arc")]
    Empty,
    #[error("breakpoint {0} is outside [0, 1)")]
    OutOfRange(Scalar),
    #[error("breakpoints are not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("color {0} is not in 1..=3")]
    InvalidColor(ColorId),
    #[error("adjacent arcs {0} and {1} share a color")]
    AdjacentSameColor(usize, usize),
    #[error("operation needs at least 3 arcs, got {0}")]
    TooFewArcs(usize),
    #[error("coloring is not proper: {0}")]
    NotProper(ProperWitness),
    #[error("no recoloring step applies after {0} iterations")]
    NonTermination(usize),
}

/// Position on the circle in turns.
pub type Turn = Scalar;

fn sixth() -> Scalar {
    rat(1, 6)
}

/// Reduces an angle into `[0, 1)`.
pub fn wrap(t: &Scalar) -> Scalar {
    let f = t.floor();
    t - f
}

/// Circular separation in `[0, 1/2]`.
pub fn circular_distance(a: &Scalar, b: &Scalar) -> Scalar {
    let d = wrap(&(a - b));
    let e = Scalar::one() - &d;
    if d <= e {
        d
    } else {
        e
    }
}

/// Chord length strictly greater than 1.
pub fn farther_than_unit(a: &Scalar, b: &Scalar) -> bool {
    circular_distance(a, b) > sixth()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BichromaticPoint {
    pub angle: Turn,
    pub pair: (ColorId, ColorId),
}

impl BichromaticPoint {
    fn new(angle: Turn, a: ColorId, b: ColorId) -> Self {
        BichromaticPoint { angle, pair: (a.min(b), a.max(b)) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcColoring {
    breakpoints: Vec<Turn>,
    colors: Vec<ColorId>,
}

impl ArcColoring {
    pub fn new(breakpoints: Vec<Turn>, colors: Vec<ColorId>) -> Result<Self, CircleError> {
        if breakpoints.len() != colors.len() {
            return Err(CircleError::LengthMismatch(breakpoints.len(), colors.len()));
        }
        if breakpoints.is_empty() {
            return Err(CircleError::Empty);
        }
        for b in &breakpoints {
            if b.is_negative() || b >= &Scalar::one() {
                return Err(CircleError::OutOfRange(b.clone()));
            }
        }
        for i in 1..breakpoints.len() {
            if breakpoints[i] <= breakpoints[i - 1] {
                return Err(CircleError::NotIncreasing(i));
            }
        }
        for &c in &colors {
            if !(1..=3).contains(&c) {
                return Err(CircleError::InvalidColor(c));
            }
        }
        let n = colors.len();
        if n > 1 {
            for i in 0..n {
                if colors[i] == colors[(i + 1) % n] {
                    return Err(CircleError::AdjacentSameColor(i, (i + 1) % n));
                }
            }
        }
        Ok(ArcColoring { breakpoints, colors })
    }

    /// Arcs of equal length `1/n` starting at 0.
    pub fn uniform(colors: &[ColorId]) -> Result<Self, CircleError> {
        let n = colors.len() as i64;
        ArcColoring::new((0..n).map(|i| rat(i, n)).collect(), colors.to_vec())
    }

    pub fn breakpoints(&self) -> &[Turn] {
        &self.breakpoints
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Start and length of arc `i`.
    pub fn arc(&self, i: usize) -> (Scalar, Scalar) {
        let n = self.len();
        let start = self.breakpoints[i].clone();
        let end = if i + 1 < n { self.breakpoints[i + 1].clone() } else { &self.breakpoints[0] + Scalar::one() };
        let len = &end - &start;
        (start, len)
    }

    pub fn bichromatic_points(&self) -> Vec<BichromaticPoint> {
        let n = self.len();
        if n < 2 {
            return vec![];
        }
        (0..n)
            .map(|i| BichromaticPoint::new(self.breakpoints[i].clone(), self.colors[(i + n - 1) % n], self.colors[i]))
            .collect()
    }

    /// Colour at an angle that is not a breakpoint.
    pub fn color_at(&self, t: &Scalar) -> Option<ColorId> {
        let t = wrap(t);
        let n = self.len();
        if n == 1 {
            return (t != self.breakpoints[0]).then_some(self.colors[0]);
        }
        if self.breakpoints.contains(&t) {
            return None;
        }
        let idx = self.breakpoints.partition_point(|b| b < &t);
        Some(if idx == 0 { self.colors[n - 1] } else { self.colors[idx - 1] })
    }

    /// Multicolor of an angle: one colour inside an arc, two at a breakpoint.
    pub fn multicolor_at(&self, t: &Scalar) -> Vec<ColorId> {
        let t = wrap(t);
        let n = self.len();
        match self.breakpoints.iter().position(|b| b == &t) {
            Some(i) if n > 1 => {
                let mut v = vec![self.colors[(i + n - 1) % n], self.colors[i]];
                v.sort();
                v
            }
            _ => self.color_at(&t).into_iter().collect(),
        }
    }

    /// Recolours the listed arcs and merges equal neighbours.
    fn recolored(&self, changes: &[(usize, ColorId)]) -> ArcColoring {
        let mut colors = self.colors.clone();
        for &(i, c) in changes {
            colors[i] = c;
        }
        normalize(self.breakpoints.clone(), colors)
    }
}

/// Drops breakpoints with the same colour on both sides.
fn normalize(breakpoints: Vec<Turn>, colors: Vec<ColorId>) -> ArcColoring {
    let n = colors.len();
    let keep: Vec<usize> = (0..n).filter(|&i| colors[(i + n - 1) % n] != colors[i]).collect();
    if keep.is_empty() {
        return ArcColoring { breakpoints: vec![breakpoints[0].clone()], colors: vec![colors[0]] };
    }
    ArcColoring {
        breakpoints: keep.iter().map(|&i| breakpoints[i].clone()).collect(),
        colors: keep.iter().map(|&i| colors[i]).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProperWitness {
    /// Interior points of two same-coloured arcs at separation 1/6.
    SameColorArcs { arc_a: usize, arc_b: usize, angle_a: Turn, angle_b: Turn },
    /// Two bichromatic points with the same pair at separation 1/6.
    SamePair { a: BichromaticPoint, b: BichromaticPoint },
}

impl fmt::Display for ProperWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProperWitness::SameColorArcs { arc_a, arc_b, angle_a, angle_b } => {
                write!(f, "arcs {arc_a} and {arc_b} share a color at angles {angle_a} and {angle_b}")
            }
            ProperWitness::SamePair { a, b } => write!(
                f,
                "bichromatic points {} and {} share pair {{{}, {}}}",
                a.angle, b.angle, a.pair.0, a.pair.1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperCheck {
    pub proper: bool,
    pub witness: Option<ProperWitness>,
}

/// Overlap of arc `i` shifted by +1/6 with arc `j`, returning a witness angle
/// inside arc `i` when their interiors meet.
fn shifted_overlap(c: &ArcColoring, i: usize, j: usize) -> Option<Scalar> {
    let (a, l1) = c.arc(i);
    let (b, l2) = c.arc(j);
    let shift = &a + sixth();
    let d = wrap(&(&b - &shift));
    let two = Scalar::from_integer(2.into());
    let mid = if d < l1 {
        let hi = if &d + &l2 < l1 { &d + &l2 } else { l1.clone() };
        (&d + hi) / two
    } else if &d + &l2 > Scalar::one() {
        let over = &d + &l2 - Scalar::one();
        let hi = if over < l1 { over } else { l1.clone() };
        hi / two
    } else {
        return None;
    };
    Some(wrap(&(&a + mid)))
}

pub fn circle_proper(c: &ArcColoring) -> ProperCheck {
    let n = c.len();
    for i in 0..n {
        for j in 0..n {
            if c.colors[i] != c.colors[j] {
                continue;
            }
            if let Some(angle_a) = shifted_overlap(c, i, j) {
                let angle_b = wrap(&(&angle_a + sixth()));
                return ProperCheck {
                    proper: false,
                    witness: Some(ProperWitness::SameColorArcs { arc_a: i, arc_b: j, angle_a, angle_b }),
                };
            }
        }
    }
    let pts = c.bichromatic_points();
    for a in &pts {
        for b in &pts {
            if a.pair == b.pair && wrap(&(&b.angle - &a.angle)) == sixth() {
                return ProperCheck {
                    proper: false,
                    witness: Some(ProperWitness::SamePair { a: a.clone(), b: b.clone() }),
                };
            }
        }
    }
    ProperCheck { proper: true, witness: None }
}

pub fn is_cyclic(c: &ArcColoring) -> Result<bool, CircleError> {
    let n = c.len();
    if n < 3 {
        return Err(CircleError::TooFewArcs(n));
    }
    Ok((0..n).all(|i| c.colors[(i + n - 1) % n] != c.colors[(i + 1) % n]))
}

fn same_bordered(c: &ArcColoring, i: usize) -> bool {
    let n = c.len();
    n >= 3 && c.colors[(i + n - 1) % n] == c.colors[(i + 1) % n]
}

/// Arcs obtained by rotating arc `i` by `k/6` turns (k = 1..5) in direction
/// `sign`, when each rotated interval is itself an arc of the colouring.
fn rotated_arcs(c: &ArcColoring, i: usize, sign: i64) -> Option<Vec<usize>> {
    let (a, l) = c.arc(i);
    let mut out = Vec::with_capacity(5);
    for k in 1..6 {
        let s = wrap(&(&a + rat(sign * k, 6)));
        let j = c.breakpoints.iter().position(|b| b == &s)?;
        if c.arc(j).1 != l || !same_bordered(c, j) {
            return None;
        }
        out.push(j);
    }
    Some(out)
}

/// Recolours arcs until no arc is bordered on both sides by one colour,
/// keeping the colouring proper. The result's breakpoints are a subset of
/// the input's, each keeping its colour pair.
pub fn make_cyclic(c: &ArcColoring) -> Result<ArcColoring, CircleError> {
    let check = circle_proper(c);
    if let Some(w) = check.witness {
        return Err(CircleError::NotProper(w));
    }
    let n0 = c.len();
    if n0 < 3 {
        return Err(CircleError::TooFewArcs(n0));
    }
    let bound = n0 * n0;
    let mut cur = c.clone();
    for iter in 0..=bound {
        if cur.len() < 3 {
            return Err(CircleError::TooFewArcs(cur.len()));
        }
        if is_cyclic(&cur)? {
            return Ok(cur);
        }
        if iter == bound {
            break;
        }
        let mut cands: Vec<usize> = (0..cur.len()).filter(|&i| same_bordered(&cur, i)).collect();
        cands.sort_by(|&a, &b| {
            let (sa, la) = cur.arc(a);
            let (sb, lb) = cur.arc(b);
            la.cmp(&lb).then(sa.cmp(&sb))
        });
        let mut next = None;
        'search: for &i in &cands {
            let n = cur.len();
            let border = cur.colors[(i + n - 1) % n];
            let simple = cur.recolored(&[(i, border)]);
            if circle_proper(&simple).proper {
                next = Some(simple);
                break;
            }
            for sign in [-1, 1] {
                if let Some(rot) = rotated_arcs(&cur, i, sign) {
                    let mut changes = vec![(i, border)];
                    for &j in &rot {
                        changes.push((j, cur.colors[(j + n - 1) % n]));
                    }
                    let six = cur.recolored(&changes);
                    if circle_proper(&six).proper {
                        next = Some(six);
                        break 'search;
                    }
                }
            }
        }
        match next {
            Some(nx) => cur = nx,
            None => return Err(CircleError::NonTermination(iter)),
        }
    }
    Err(CircleError::NonTermination(bound))
}

/// Three bichromatic points with the given pair at pairwise chord distance
/// greater than 1, found by exhaustive search in angle order.
pub fn find_triple(c: &ArcColoring, pair: (ColorId, ColorId)) -> Option<[BichromaticPoint; 3]> {
    let pair = (pair.0.min(pair.1), pair.0.max(pair.1));
    let pts: Vec<BichromaticPoint> = c.bichromatic_points().into_iter().filter(|p| p.pair == pair).collect();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if !farther_than_unit(&pts[i].angle, &pts[j].angle) {
                continue;
            }
            for k in (j + 1)..pts.len() {
                if farther_than_unit(&pts[i].angle, &pts[k].angle)
                    && farther_than_unit(&pts[j].angle, &pts[k].angle)
                {
                    return Some([pts[i].clone(), pts[j].clone(), pts[k].clone()]);
                }
            }
        }
    }
    None
}

/// Six arcs of exactly 1/6 turn coloured cyclically.
pub fn hexagon_config_check(c: &ArcColoring) -> bool {
    c.len() == 6 && (0..6).all(|i| c.arc(i).1 == sixth()) && is_cyclic(c).unwrap_or(false)
}

/// Pairs of breakpoints whose separation lies within `tol` of 1/6 (or 5/6)
/// without being known exactly; decisions at these pairs are not trusted.
pub fn tolerance_ties(c: &ArcColoring, exact: &[bool], tol: &Scalar) -> Vec<(usize, usize)> {
    let b = c.breakpoints();
    let mut out = Vec::new();
    for i in 0..b.len() {
        for j in (i + 1)..b.len() {
            if exact.get(i).copied().unwrap_or(false) && exact.get(j).copied().unwrap_or(false) {
                continue;
            }
            let gap = (circular_distance(&b[i], &b[j]) - sixth()).abs();
            if &gap <= tol {
                out.push((i, j));
            }
        }
    }
    out
}

/// Declared separation tolerance for approximate angles: `2^-30` turns.
pub fn approx_tolerance() -> Scalar {
    Scalar::new(1.into(), num_bigint::BigInt::from(1u64 << 30))
}

/// A random proper colouring with between `min_arcs` and `max_arcs` arcs.
///
/// Angles are split into six rotated copies of a partition of `[0, 1/6)`;
/// each cell of the partition receives a proper colouring of the 6-cycle, so
/// points 1/6 apart always differ. Candidates failing [`circle_proper`] are
/// resampled.
pub fn random_proper<R: Rng>(rng: &mut R, min_arcs: usize, max_arcs: usize) -> ArcColoring {
    loop {
        let cells = rng.gen_range(1..=5usize);
        let den: i64 = rng.gen_range(7..=60) * 6;
        let mut cuts: Vec<i64> = (0..cells - 1).map(|_| rng.gen_range(1..den / 6)).collect();
        cuts.push(0);
        cuts.sort();
        cuts.dedup();
        let tuples: Vec<[ColorId; 6]> = cuts.iter().map(|_| random_six_cycle(rng)).collect();
        let mut bps = Vec::new();
        let mut cols = Vec::new();
        for k in 0..6i64 {
            for (j, &t) in cuts.iter().enumerate() {
                bps.push(rat(k * den / 6 + t, den));
                cols.push(tuples[j][k as usize]);
            }
        }
        let c = normalize(bps, cols);
        if c.len() < min_arcs.max(3) || c.len() > max_arcs {
            continue;
        }
        if circle_proper(&c).proper {
            return c;
        }
    }
}

fn random_six_cycle<R: Rng>(rng: &mut R) -> [ColorId; 6] {
    loop {
        let mut t = [0; 6];
        for v in t.iter_mut() {
            *v = rng.gen_range(1..=3);
        }
        if (0..6).all(|i| t[i] != t[(i + 1) % 6]) {
            return t;
        }
    }
}

/// Angle in turns as `f64`.
pub fn turn_to_radians(t: &Scalar) -> f64 {
    to_f64(t) * std::f64::consts::TAU
}

/// Least common multiple of breakpoint denominators.
pub fn common_denominator(c: &ArcColoring) -> num_bigint::BigInt {
    c.breakpoints().iter().fold(num_bigint::BigInt::one(), |acc, b| acc.lcm(b.denom()))
}
