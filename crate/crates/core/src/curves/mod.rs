//! Tri-coloured polylines, the colour index and complementary pairs.

use rand::Rng;
use thiserror::Error;

use crate::planemap::ColorId;

mod annulus;

pub use annulus::{
    build_annulus_curve, certify, count_circle_crossings, crossings_near_ideal, h_delta, second_largest_angle,
    annulus_sectors, AnnulusCertificate, AnnulusCurve, AnnulusSectors, BoundarySample, CrossingReport,
    NeighbourhoodCount, TurnArc,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("curve needs at least 2 points")]
    TooShort,
    #[error("curve has {colors} colors for {breaks} breaks")]
    ColorCount { colors: usize, breaks: usize },
    #[error("break indices must be strictly increasing and inside the curve")]
    BadBreaks,
    #[error("endpoint of the curve is bichromatic")]
    EndpointBichromatic,
    #[error("pieces {0} and {1} share a color")]
    RepeatedColor(usize, usize),
    #[error("color {0} is not in 1..=3")]
    InvalidColor(ColorId),
    #[error("curve is uncolored")]
    Uncolored,
    #[error("complementary curves must share a grid ({0} vs {1} points)")]
    GridMismatch(usize, usize),
    #[error("offset at grid point {index} has length {length}")]
    OffsetNotUnit { index: usize, length: f64 },
    #[error("curves share a color at grid point {0}")]
    SharedColor(usize),
    #[error("eta must be positive, got {0}")]
    NonPositiveEta(f64),
    #[error("need boundary samples for at least 2 distinct delta values")]
    TooFewSamples,
    #[error("sectors leave angle {0} turns uncovered")]
    CoverGap(f64),
    #[error("theta must satisfy 0 < theta < eta (theta = {theta}, eta = {eta})")]
    BadTheta { theta: f64, eta: f64 },
    #[error("sector overlaps are too narrow for a joining segment")]
    SectorsTooNarrow,
    #[error("polyline vertex {0} lies exactly on the circle")]
    TangentialContact(usize),
    #[error("curve must be closed")]
    NotClosed,
}

/// Declared proximity tolerance for floating-point curve checks.
pub const CURVE_TOL: f64 = 1e-9;

/// Polyline whose colour changes only at `breaks`; each break vertex is
/// bichromatic, every other vertex has the colour of its piece.
#[derive(Debug, Clone, PartialEq)]
pub struct TriColoredCurve {
    pub points: Vec<[f64; 2]>,
    pub breaks: Vec<usize>,
    pub colors: Vec<ColorId>,
    pub closed: bool,
}

impl TriColoredCurve {
    pub fn new(
        points: Vec<[f64; 2]>,
        breaks: Vec<usize>,
        colors: Vec<ColorId>,
        closed: bool,
    ) -> Result<Self, CurveError> {
        if points.len() < 2 {
            return Err(CurveError::TooShort);
        }
        if colors.is_empty() {
            if !breaks.is_empty() {
                return Err(CurveError::ColorCount { colors: 0, breaks: breaks.len() });
            }
        } else {
            if colors.len() != breaks.len() + 1 {
                return Err(CurveError::ColorCount { colors: colors.len(), breaks: breaks.len() });
            }
            for &c in &colors {
                if !(1..=3).contains(&c) {
                    return Err(CurveError::InvalidColor(c));
                }
            }
            for i in 1..colors.len() {
                if colors[i] == colors[i - 1] {
                    return Err(CurveError::RepeatedColor(i - 1, i));
                }
            }
        }
        let last = points.len() - 1;
        if breaks.windows(2).any(|w| w[0] >= w[1]) || breaks.iter().any(|&b| b > last) {
            return Err(CurveError::BadBreaks);
        }
        Ok(TriColoredCurve { points, breaks, colors, closed })
    }

    /// Uncoloured geometry.
    pub fn geometry(points: Vec<[f64; 2]>, closed: bool) -> Result<Self, CurveError> {
        TriColoredCurve::new(points, vec![], vec![], closed)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn check_endpoints(&self) -> Result<(), CurveError> {
        if self.colors.is_empty() {
            return Err(CurveError::Uncolored);
        }
        let last = self.points.len() - 1;
        if self.breaks.first() == Some(&0) || self.breaks.last() == Some(&last) {
            return Err(CurveError::EndpointBichromatic);
        }
        Ok(())
    }

    /// Piece index of vertex `i`, or the two pieces meeting there.
    pub fn vertex_colors(&self, i: usize) -> Vec<ColorId> {
        match self.breaks.binary_search(&i) {
            Ok(k) => {
                let mut v = vec![self.colors[k], self.colors[k + 1]];
                v.sort();
                v
            }
            Err(k) => vec![self.colors[k]],
        }
    }

    /// Colour of the open segment from vertex `i` to `i + 1`.
    pub fn segment_color(&self, i: usize) -> ColorId {
        self.colors[self.breaks.partition_point(|&b| b <= i)]
    }

    /// Same curve traversed backwards.
    pub fn reversed(&self) -> TriColoredCurve {
        let last = self.points.len() - 1;
        let mut points = self.points.clone();
        points.reverse();
        let mut breaks: Vec<usize> = self.breaks.iter().map(|&b| last - b).collect();
        breaks.reverse();
        let mut colors = self.colors.clone();
        colors.reverse();
        TriColoredCurve { points, breaks, colors, closed: self.closed }
    }
}

/// +1 for a cyclically increasing colour change (1→2, 2→3, 3→1), else −1.
pub fn transition_sign(from: ColorId, to: ColorId) -> i64 {
    if to == from {
        0
    } else if to == from % 3 + 1 {
        1
    } else {
        -1
    }
}

/// How the walk treats the last colour change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexConvention {
    /// Every change contributes; equals `f(end) - f(start)` for a
    /// colour-preserving piecewise-linear `f` onto the coloured line.
    #[default]
    AllTransitions,
    /// The final change is ignored, pinning `f` at the last break.
    ExcludeFinal,
}

pub fn curve_index(curve: &TriColoredCurve) -> Result<i64, CurveError> {
    curve_index_with(curve, IndexConvention::AllTransitions)
}

pub fn curve_index_with(curve: &TriColoredCurve, conv: IndexConvention) -> Result<i64, CurveError> {
    curve.check_endpoints()?;
    let signs: Vec<i64> = curve.colors.windows(2).map(|w| transition_sign(w[0], w[1])).collect();
    let take = match conv {
        IndexConvention::AllTransitions => signs.len(),
        IndexConvention::ExcludeFinal => signs.len().saturating_sub(1),
    };
    Ok(signs[..take].iter().sum())
}

/// Values of the colour-preserving map at each vertex: piece `k` sits at an
/// integer level `m_k` with `m_k ≡ c_k - 1 (mod 3)`, breaks sit halfway
/// between neighbouring levels.
pub fn levels(curve: &TriColoredCurve) -> Result<Vec<f64>, CurveError> {
    curve.check_endpoints()?;
    let mut m = vec![curve.colors[0] as i64 - 1];
    for w in curve.colors.windows(2) {
        let last = *m.last().expect("non-empty");
        m.push(last + transition_sign(w[0], w[1]));
    }
    Ok((0..curve.len())
        .map(|i| match curve.breaks.binary_search(&i) {
            Ok(k) => (m[k] + m[k + 1]) as f64 / 2.0,
            Err(k) => m[k] as f64,
        })
        .collect())
}

/// Two curves on a shared grid at pointwise distance 1 with disjoint colours.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementaryPair {
    gamma1: TriColoredCurve,
    gamma2: TriColoredCurve,
}

impl ComplementaryPair {
    /// `gamma2` is `gamma1` displaced by a unit vector at every grid point.
    pub fn new(gamma1: TriColoredCurve, gamma2: TriColoredCurve) -> Result<Self, CurveError> {
        if gamma1.len() != gamma2.len() {
            return Err(CurveError::GridMismatch(gamma1.len(), gamma2.len()));
        }
        for (i, (a, b)) in gamma1.points.iter().zip(&gamma2.points).enumerate() {
            let length = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            if (length - 1.0).abs() > 1e-12 {
                return Err(CurveError::OffsetNotUnit { index: i, length });
            }
        }
        if let Some(i) = shared_color_point(&gamma1, &gamma2) {
            return Err(CurveError::SharedColor(i));
        }
        Ok(ComplementaryPair { gamma1, gamma2 })
    }

    /// Builds `gamma2` from `gamma1` plus explicit unit offsets.
    pub fn from_offsets(
        gamma1: TriColoredCurve,
        offsets: &[[f64; 2]],
        breaks2: Vec<usize>,
        colors2: Vec<ColorId>,
    ) -> Result<Self, CurveError> {
        if offsets.len() != gamma1.len() {
            return Err(CurveError::GridMismatch(gamma1.len(), offsets.len()));
        }
        let pts = gamma1.points.iter().zip(offsets).map(|(p, o)| [p[0] + o[0], p[1] + o[1]]).collect();
        let g2 = TriColoredCurve::new(pts, breaks2, colors2, gamma1.closed)?;
        ComplementaryPair::new(gamma1, g2)
    }

    pub fn gamma1(&self) -> &TriColoredCurve {
        &self.gamma1
    }

    pub fn gamma2(&self) -> &TriColoredCurve {
        &self.gamma2
    }
}

/// First grid vertex or segment where the two curves' colours collide.
fn shared_color_point(g1: &TriColoredCurve, g2: &TriColoredCurve) -> Option<usize> {
    if g1.colors.is_empty() || g2.colors.is_empty() {
        return None;
    }
    for i in 0..g1.len() {
        let a = g1.vertex_colors(i);
        let b = g2.vertex_colors(i);
        let clash = match (a.len(), b.len()) {
            (1, 1) => a[0] == b[0],
            (1, _) => b.contains(&a[0]),
            (_, 1) => a.contains(&b[0]),
            _ => a == b,
        };
        if clash {
            return Some(i);
        }
        if i + 1 < g1.len() && g1.segment_color(i) == g2.segment_color(i) {
            return Some(i);
        }
    }
    None
}

/// Where `F = f1 - f2` reaches a multiple of 3 on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FWalkDiagnostic {
    pub segment: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexDifference {
    pub ind1: i64,
    pub ind2: i64,
    pub diff: u64,
    pub diagnostic: Option<FWalkDiagnostic>,
}

pub fn index_difference_bound(pair: &ComplementaryPair) -> Result<IndexDifference, CurveError> {
    let ind1 = curve_index(&pair.gamma1)?;
    let ind2 = curve_index(&pair.gamma2)?;
    let f1 = levels(&pair.gamma1)?;
    let f2 = levels(&pair.gamma2)?;
    let big_f: Vec<f64> = f1.iter().zip(&f2).map(|(a, b)| a - b).collect();
    let diagnostic = big_f.windows(2).enumerate().find_map(|(i, w)| {
        let (lo, hi) = if w[0] <= w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
        let k = (lo / 3.0).ceil() * 3.0;
        (k <= hi).then_some(FWalkDiagnostic { segment: i, value: k })
    });
    Ok(IndexDifference { ind1, ind2, diff: (ind1 - ind2).unsigned_abs(), diagnostic })
}

/// Colour sequence on the sample grid of a generated curve.
fn sample_colors<R: Rng>(rng: &mut R, t: usize, avoid: Option<&[ColorId]>, distinct_ends: bool) -> Option<Vec<ColorId>> {
    for _ in 0..200 {
        let mut s = Vec::with_capacity(t);
        let mut ok = true;
        for j in 0..t {
            let mut options: Vec<ColorId> = (1..=3).collect();
            if let Some(prev) = avoid {
                options.retain(|&c| c != prev[j]);
                if j > 0 {
                    // Both curves switching at one slot must not swap colours.
                    let (a, b) = (prev[j - 1], prev[j]);
                    let c = s[j - 1];
                    options.retain(|&d| !(a != b && c != d && a == d && b == c));
                }
            }
            if j > 0 && rng.gen_bool(0.5) && options.contains(&s[j - 1]) {
                s.push(s[j - 1]);
                continue;
            }
            if options.is_empty() {
                ok = false;
                break;
            }
            s.push(options[rng.gen_range(0..options.len())]);
        }
        if ok && (!distinct_ends || s[0] != s[t - 1]) {
            return Some(s);
        }
    }
    None
}

/// Curve on a `2t - 1` grid: even vertices carry the sample colours, odd
/// vertices are the only places where the colour may change.
fn curve_from_samples(points: Vec<[f64; 2]>, s: &[ColorId]) -> TriColoredCurve {
    let mut breaks = Vec::new();
    let mut colors = vec![s[0]];
    for j in 1..s.len() {
        if s[j] != s[j - 1] {
            breaks.push(2 * j - 1);
            colors.push(s[j]);
        }
    }
    TriColoredCurve::new(points, breaks, colors, false).expect("generated curve is valid")
}

fn random_path<R: Rng>(rng: &mut R, n: usize) -> Vec<[f64; 2]> {
    let mut p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let mut heading: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(p);
        heading += rng.gen_range(-0.5..0.5);
        let step = rng.gen_range(0.01..0.1);
        p = [p[0] + step * heading.cos(), p[1] + step * heading.sin()];
    }
    out
}

fn unit_offsets<R: Rng>(rng: &mut R, n: usize) -> Vec<[f64; 2]> {
    let mut phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (0..n)
        .map(|_| {
            phi += rng.gen_range(-0.2..0.2);
            [phi.cos(), phi.sin()]
        })
        .collect()
}

/// A random curve with `t` sample colours (monochromatic endpoints).
pub fn random_curve<R: Rng>(rng: &mut R, t: usize) -> TriColoredCurve {
    assert!(t >= 2, "need at least 2 samples");
    let s = sample_colors(rng, t, None, false).expect("unconstrained sampling succeeds");
    curve_from_samples(random_path(rng, 2 * t - 1), &s)
}

/// A random complementary pair on a shared grid of `2t - 1` vertices.
pub fn random_complementary_pair<R: Rng>(rng: &mut R, t: usize) -> ComplementaryPair {
    assert!(t >= 2, "need at least 2 samples");
    loop {
        let s1 = sample_colors(rng, t, None, false).expect("unconstrained sampling succeeds");
        let Some(s2) = sample_colors(rng, t, Some(&s1), false) else { continue };
        let g1 = curve_from_samples(random_path(rng, 2 * t - 1), &s1);
        let offs = unit_offsets(rng, 2 * t - 1);
        let g2 = curve_from_samples(
            g1.points.iter().zip(&offs).map(|(p, o)| [p[0] + o[0], p[1] + o[1]]).collect(),
            &s2,
        );
        if let Ok(pair) = ComplementaryPair::new(g1, g2) {
            return pair;
        }
    }
}

/// A chain of curves, consecutive ones complementary, each with different
/// end colours.
pub fn random_chain<R: Rng>(rng: &mut R, len: usize, t: usize) -> Vec<TriColoredCurve> {
    assert!(t >= 2, "need at least 2 samples");
    'retry: loop {
        let Some(first) = sample_colors(rng, t, None, true) else { continue };
        let mut samples = vec![first];
        while samples.len() < len {
            let prev = samples.last().expect("non-empty").clone();
            match sample_colors(rng, t, Some(&prev), true) {
                Some(s) => samples.push(s),
                None => continue 'retry,
            }
        }
        let mut pts = random_path(rng, 2 * t - 1);
        let mut out = Vec::with_capacity(len);
        for s in &samples {
            out.push(curve_from_samples(pts.clone(), s));
            let offs = unit_offsets(rng, pts.len());
            pts = pts.iter().zip(&offs).map(|(p, o)| [p[0] + o[0], p[1] + o[1]]).collect();
        }
        if out.windows(2).all(|w| ComplementaryPair::new(w[0].clone(), w[1].clone()).is_ok()) {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn curve(colors: &[ColorId]) -> TriColoredCurve {
        let n = (2 * colors.len() - 1).max(2);
        let pts = (0..n).map(|i| [i as f64, 0.0]).collect();
        curve_from_samples(pts, colors)
    }

    #[test]
    fn index_examples() {
        assert_eq!(curve_index(&curve(&[1])).unwrap(), 0);
        assert_eq!(curve_index(&curve(&[1, 2, 3, 1])).unwrap(), 3);
        assert_eq!(curve_index(&curve(&[1, 3, 2])).unwrap(), -2);
        let excl = IndexConvention::ExcludeFinal;
        assert_eq!(curve_index_with(&curve(&[1, 2, 3, 1]), excl).unwrap(), 2);
        assert_eq!(curve_index_with(&curve(&[1, 3, 2]), excl).unwrap(), -1);
        assert_eq!(curve_index_with(&curve(&[1]), excl).unwrap(), 0);
    }

    #[test]
    fn bichromatic_endpoint_rejected() {
        let c = TriColoredCurve::new(vec![[0.0, 0.0], [1.0, 0.0]], vec![0], vec![1, 2], false).unwrap();
        assert_eq!(curve_index(&c), Err(CurveError::EndpointBichromatic));
    }

    #[test]
    fn reversal_negates_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let c = random_curve(&mut rng, 8);
            assert_eq!(curve_index(&c.reversed()).unwrap(), -curve_index(&c).unwrap());
        }
    }

    #[test]
    fn translated_shifted_pair() {
        let g1 = curve(&[1, 2, 3, 1, 3]);
        let g2_colors: Vec<ColorId> = [1, 2, 3, 1, 3].iter().map(|c| c % 3 + 1).collect();
        let g2 = curve(&g2_colors);
        let g2 = TriColoredCurve::new(
            g2.points.iter().map(|p| [p[0], p[1] + 1.0]).collect(),
            g2.breaks,
            g2.colors,
            false,
        )
        .unwrap();
        let pair = ComplementaryPair::new(g1, g2).unwrap();
        let d = index_difference_bound(&pair).unwrap();
        assert_eq!(d.diff, 0);
        assert!(d.diagnostic.is_none());
    }

    #[test]
    fn random_pairs_respect_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let pair = random_complementary_pair(&mut rng, 10);
            let d = index_difference_bound(&pair).unwrap();
            assert!(d.diff <= 1, "{d:?}");
            assert!(d.diagnostic.is_none());
        }
    }

    #[test]
    fn extra_final_transition() {
        let g1 = curve(&[1, 2, 2]);
        let g1 = TriColoredCurve::new(g1.points, vec![1], vec![1, 2], false).unwrap();
        let g2 = TriColoredCurve::new(
            g1.points.iter().map(|p| [p[0], p[1] + 1.0]).collect(),
            vec![1, 3],
            vec![2, 3, 1],
            false,
        )
        .unwrap();
        let pair = ComplementaryPair::new(g1, g2).unwrap();
        let d = index_difference_bound(&pair).unwrap();
        assert_eq!((d.ind1, d.ind2, d.diff), (1, 2, 1));
    }

    #[test]
    fn shared_color_rejected() {
        let g1 = curve(&[1, 2]);
        let g2 = TriColoredCurve::new(
            g1.points.iter().map(|p| [p[0], p[1] + 1.0]).collect(),
            vec![],
            vec![2],
            false,
        )
        .unwrap();
        assert!(matches!(ComplementaryPair::new(g1, g2), Err(CurveError::SharedColor(_))));
    }
}
