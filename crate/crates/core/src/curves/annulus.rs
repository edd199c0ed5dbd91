//! Annulus sectors around a trichromatic point and the curve threaded
//! through them.

use std::f64::consts::{PI, TAU};

use super::{CurveError, TriColoredCurve, CURVE_TOL};

/// Radius at which a ray from `u` at angle `alpha` to the direction of a
/// point at distance `delta` leaves the unit circle around that point.
pub fn h_delta(alpha: f64, delta: f64) -> f64 {
    let s = alpha.sin();
    delta * alpha.cos() + (1.0 - delta * delta * s * s).sqrt()
}

/// Circular distance between two angles in turns, in radians.
fn turn_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d) * TAU
}

/// Middle one of the three angular distances from `ray` (all in turns),
/// returned in radians.
pub fn second_largest_angle(ray: f64, a45: f64, a46: f64, a56: f64) -> f64 {
    let mut d = [turn_gap(ray, a45), turn_gap(ray, a46), turn_gap(ray, a56)];
    d.sort_by(f64::total_cmp);
    d[1]
}

/// Boundary directions (in turns) of the three bichromatic boundary points
/// for one sampled `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySample {
    pub delta: f64,
    pub angles: [f64; 3],
}

/// Open arc of directions `(start, start + len)` in turns; `len >= 1` is the
/// whole circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurnArc {
    pub start: f64,
    pub len: f64,
}

impl TurnArc {
    pub fn full() -> TurnArc {
        TurnArc { start: 0.0, len: 1.0 }
    }

    pub fn is_full(&self) -> bool {
        self.len >= 1.0
    }

    /// Whether `t` lies inside the arc, at least `margin` away from its ends.
    pub fn contains(&self, t: f64, margin: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let o = (t - self.start).rem_euclid(1.0);
        o > margin && o < self.len - margin
    }
}

/// Families of arcs whose sectors sit inside (`inner`, radius `1 - eta`) or
/// outside (`outer`, radius `1 + eta`) the unit circle around `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusSectors {
    pub center: [f64; 2],
    pub eta: f64,
    pub inner: Vec<TurnArc>,
    pub outer: Vec<TurnArc>,
}

impl AnnulusSectors {
    /// Validates that the arc interiors cover the circle.
    pub fn new(center: [f64; 2], eta: f64, inner: Vec<TurnArc>, outer: Vec<TurnArc>) -> Result<Self, CurveError> {
        if !(eta > 0.0) {
            return Err(CurveError::NonPositiveEta(eta));
        }
        let s = AnnulusSectors { center, eta, inner, outer };
        if let Some(gap) = s.uncovered() {
            return Err(CurveError::CoverGap(gap));
        }
        Ok(s)
    }

    fn arcs(&self) -> impl Iterator<Item = (TurnArc, bool)> + '_ {
        self.inner.iter().map(|a| (*a, false)).chain(self.outer.iter().map(|a| (*a, true)))
    }

    /// An uncovered direction, if any. The complement of a union of open
    /// arcs is closed, so it contains an arc endpoint whenever non-empty.
    pub fn uncovered(&self) -> Option<f64> {
        let arcs: Vec<TurnArc> = self.arcs().map(|(a, _)| a).collect();
        if arcs.is_empty() {
            return Some(0.0);
        }
        if arcs.iter().any(TurnArc::is_full) {
            return None;
        }
        arcs.iter()
            .flat_map(|a| [a.start, a.start + a.len])
            .map(|t| t.rem_euclid(1.0))
            .find(|&t| !arcs.iter().any(|a| a.contains(t, CURVE_TOL)))
    }
}

/// Maximal arcs where `second_largest_angle - theta_star` keeps one sign.
fn sign_arcs(angles: [f64; 3], theta_star: f64) -> (Vec<TurnArc>, Vec<TurnArc>) {
    let w = theta_star / TAU;
    let mut cuts: Vec<f64> = angles
        .iter()
        .flat_map(|&a| [(a - w).rem_euclid(1.0), (a + w).rem_euclid(1.0)])
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let n = cuts.len();
    let mut pieces: Vec<(f64, f64, bool)> = (0..n)
        .map(|i| {
            let s = cuts[i];
            let e = if i + 1 < n { cuts[i + 1] } else { cuts[0] + 1.0 };
            let mid = second_largest_angle((s + e) / 2.0, angles[0], angles[1], angles[2]);
            (s, e - s, mid > theta_star)
        })
        .filter(|p| p.1 > 0.0)
        .collect();
    if pieces.iter().all(|p| p.2 == pieces[0].2) {
        let all = vec![TurnArc::full()];
        return if pieces[0].2 { (all, vec![]) } else { (vec![], all) };
    }
    while pieces[0].2 == pieces[pieces.len() - 1].2 {
        pieces.rotate_right(1);
    }
    let mut merged: Vec<(TurnArc, bool)> = Vec::new();
    for (s, l, above) in pieces {
        match merged.last_mut() {
            Some((arc, lab)) if *lab == above => arc.len += l,
            _ => merged.push((TurnArc { start: s, len: l }, above)),
        }
    }
    let (a, b): (Vec<_>, Vec<_>) = merged.into_iter().partition(|m| m.1);
    (a.into_iter().map(|m| m.0).collect(), b.into_iter().map(|m| m.0).collect())
}

/// Sets where `h_delta < 1` (inner) and `h_delta > 1` (outer) for each
/// sample, unioned over the samples.
pub fn annulus_sectors(center: [f64; 2], samples: &[BoundarySample], eta: f64) -> Result<AnnulusSectors, CurveError> {
    if !(eta > 0.0) {
        return Err(CurveError::NonPositiveEta(eta));
    }
    let mut deltas: Vec<f64> = samples.iter().map(|s| s.delta).collect();
    deltas.sort_by(f64::total_cmp);
    deltas.dedup();
    if deltas.len() < 2 {
        return Err(CurveError::TooFewSamples);
    }
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for s in samples {
        let theta_star = (s.delta / 2.0).acos();
        let (a, b) = sign_arcs(s.angles, theta_star);
        inner.extend(a);
        outer.extend(b);
    }
    AnnulusSectors::new(center, eta, inner, outer)
}

/// Checked postconditions of a constructed annulus curve.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusCertificate {
    pub winding: i64,
    pub max_radial_offset: f64,
    pub theta_prime: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusCurve {
    pub curve: TriColoredCurve,
    pub rho: f64,
    pub certificate: AnnulusCertificate,
}

/// Greedy cyclic cover: unwrapped `(start, end, outer)` triples, each one
/// containing the previous end strictly.
fn cover_chain(sectors: &AnnulusSectors) -> Result<Vec<(f64, f64, bool)>, CurveError> {
    let arcs: Vec<(TurnArc, bool)> = sectors.arcs().collect();
    let first = arcs
        .iter()
        .max_by(|a, b| a.0.len.total_cmp(&b.0.len))
        .copied()
        .ok_or(CurveError::CoverGap(0.0))?;
    let s0 = first.0.start;
    let mut chain = vec![(s0, s0 + first.0.len, first.1)];
    let mut pos = s0 + first.0.len;
    for _ in 0..=arcs.len() {
        if pos > s0 + 1.0 + CURVE_TOL {
            return Ok(chain);
        }
        let best = arcs
            .iter()
            .filter(|(a, _)| a.contains(pos, CURVE_TOL))
            .map(|(a, outer)| {
                let o = (pos - a.start).rem_euclid(1.0);
                (pos - o, pos - o + a.len, *outer)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(CurveError::CoverGap(pos.rem_euclid(1.0)))?;
        pos = best.1;
        chain.push(best);
    }
    Err(CurveError::CoverGap(pos.rem_euclid(1.0)))
}

/// Radius knots `(phi in turns, outer)` of the piecewise-linear profile:
/// each label change gets a ramp over the middle half of its overlap.
fn ramps(chain: &[(f64, f64, bool)]) -> Result<Vec<(f64, f64, bool, bool)>, CurveError> {
    let k = chain.len();
    let mut out = Vec::new();
    let first_zone_start;
    {
        let (s0, e0, _) = chain[0];
        let lo = if k > 1 { chain[1].0.max(s0) } else { s0 };
        first_zone_start = lo + (e0 - lo) / 4.0;
    }
    for i in 0..k {
        let (_, e, lab) = chain[i];
        let (ns, nlab) = if i + 1 < k { (chain[i + 1].0, chain[i + 1].2) } else { (chain[0].0 + 1.0, chain[0].2) };
        if lab == nlab {
            continue;
        }
        let prev_end = if i == 0 { chain[0].0 } else { chain[i - 1].1 };
        let lo = ns.max(prev_end);
        let hi = if i + 1 == k { e.min(first_zone_start + 1.0) } else { e };
        if !(hi - lo > CURVE_TOL) {
            return Err(CurveError::SectorsTooNarrow);
        }
        let w = hi - lo;
        out.push((lo + w / 4.0, hi - w / 4.0, lab, nlab));
    }
    Ok(out)
}

fn winding_number(pts: &[[f64; 2]], c: [f64; 2]) -> i64 {
    let mut total = 0.0;
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        let a0 = (a[1] - c[1]).atan2(a[0] - c[0]);
        let b0 = (b[1] - c[1]).atan2(b[0] - c[0]);
        let mut d = b0 - a0;
        if d > PI {
            d -= TAU;
        } else if d < -PI {
            d += TAU;
        }
        total += d;
    }
    (total / TAU).round() as i64
}

/// Winding, worst distance from the unit circle and worst deviation of a
/// segment from the tangent direction at its endpoints.
pub fn certify(pts: &[[f64; 2]], center: [f64; 2], eta: f64, theta: f64) -> AnnulusCertificate {
    let winding = winding_number(pts, center);
    let rel = |p: [f64; 2]| [p[0] - center[0], p[1] - center[1]];
    let mut max_off: f64 = 0.0;
    let mut theta_prime: f64 = 0.0;
    for i in 0..pts.len() {
        let a = rel(pts[i]);
        let b = rel(pts[(i + 1) % pts.len()]);
        let d = [b[0] - a[0], b[1] - a[1]];
        let dl = d[0].hypot(d[1]);
        let dd = d[0] * d[0] + d[1] * d[1];
        let t = if dd > 0.0 { (-(a[0] * d[0] + a[1] * d[1]) / dd).clamp(0.0, 1.0) } else { 0.0 };
        let near = [a[0] + t * d[0], a[1] + t * d[1]];
        for p in [a, near] {
            max_off = max_off.max((p[0].hypot(p[1]) - 1.0).abs());
        }
        if dl > 0.0 {
            for p in [a, b] {
                let r = p[0].hypot(p[1]);
                let cosang = ((p[0] * d[0] + p[1] * d[1]) / (r * dl)).abs().min(1.0);
                theta_prime = theta_prime.max(cosang.asin());
            }
        }
    }
    let passes = winding == 1 && max_off < eta && theta_prime < theta;
    AnnulusCertificate { winding, max_radial_offset: max_off, theta_prime, passes }
}

/// Closed polyline through the sectors: arcs at `1 - rho` over inner
/// sectors, `1 + rho` over outer ones, joined by gentle linear ramps in
/// the overlaps.
pub fn build_annulus_curve(sectors: &AnnulusSectors, theta: f64) -> Result<AnnulusCurve, CurveError> {
    let eta = sectors.eta;
    if !(theta > 0.0 && theta < eta) {
        return Err(CurveError::BadTheta { theta, eta });
    }
    if let Some(gap) = sectors.uncovered() {
        return Err(CurveError::CoverGap(gap));
    }
    let full_outer = sectors.outer.iter().any(TurnArc::is_full);
    let full_inner = sectors.inner.iter().any(TurnArc::is_full);
    let ramps = if full_outer || full_inner { Vec::new() } else { ramps(&cover_chain(sectors)?)? };
    let mut rho = eta / 2.0;
    for r in &ramps {
        let width = (r.1 - r.0) * TAU;
        rho = rho.min((theta / 2.0).tan() * width / 4.0);
    }
    if rho < 1e-9 {
        return Err(CurveError::SectorsTooNarrow);
    }
    let radius = |outer: bool| if outer { 1.0 + rho } else { 1.0 - rho };
    // Knots of the periodic radius profile, in turns.
    let knots: Vec<(f64, f64)> = if ramps.is_empty() {
        let r = radius(full_outer || sectors.inner.is_empty());
        vec![(0.0, r), (0.5, r)]
    } else {
        ramps.iter().flat_map(|r| [(r.0, radius(r.2)), (r.1, radius(r.3))]).collect()
    };
    let step = (theta / 4.0) / TAU;
    let mut pts = Vec::new();
    let n = knots.len();
    for i in 0..n {
        let (p0, r0) = knots[i];
        let (p1, r1) = if i + 1 < n { knots[i + 1] } else { (knots[0].0 + 1.0, knots[0].1) };
        let m = ((p1 - p0) / step).ceil().max(1.0) as usize;
        for j in 0..m {
            let f = j as f64 / m as f64;
            let phi = (p0 + f * (p1 - p0)) * TAU;
            let r = r0 + f * (r1 - r0);
            pts.push([sectors.center[0] + r * phi.cos(), sectors.center[1] + r * phi.sin()]);
        }
    }
    let certificate = certify(&pts, sectors.center, eta, theta);
    let curve = TriColoredCurve::geometry(pts, true)?;
    if !certificate.passes {
        return Err(CurveError::SectorsTooNarrow);
    }
    Ok(AnnulusCurve { curve, rho, certificate })
}

/// Sign changes of `|p - v|^2 - 1` along a closed polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingReport {
    pub count: usize,
    pub locations: Vec<[f64; 2]>,
}

pub fn count_circle_crossings(curve: &TriColoredCurve, v: [f64; 2]) -> Result<CrossingReport, CurveError> {
    if !curve.closed {
        return Err(CurveError::NotClosed);
    }
    let pts = &curve.points;
    let g = |p: [f64; 2]| (p[0] - v[0]).powi(2) + (p[1] - v[1]).powi(2) - 1.0;
    let vals: Vec<f64> = pts.iter().map(|&p| g(p)).collect();
    if let Some(i) = vals.iter().position(|&x| x == 0.0) {
        return Err(CurveError::TangentialContact(i));
    }
    let mut locations = Vec::new();
    for i in 0..pts.len() {
        let j = (i + 1) % pts.len();
        if (vals[i] < 0.0) == (vals[j] < 0.0) {
            continue;
        }
        let a = pts[i];
        let d = [pts[j][0] - a[0], pts[j][1] - a[1]];
        let w = [a[0] - v[0], a[1] - v[1]];
        let qa = d[0] * d[0] + d[1] * d[1];
        let qb = 2.0 * (w[0] * d[0] + w[1] * d[1]);
        let disc = (qb * qb - 4.0 * qa * vals[i]).max(0.0).sqrt();
        let t = [(-qb - disc) / (2.0 * qa), (-qb + disc) / (2.0 * qa)]
            .into_iter()
            .min_by(|x, y| (x - x.clamp(0.0, 1.0)).abs().total_cmp(&(y - y.clamp(0.0, 1.0)).abs()))
            .expect("two roots")
            .clamp(0.0, 1.0);
        locations.push([a[0] + t * d[0], a[1] + t * d[1]]);
    }
    Ok(CrossingReport { count: locations.len(), locations })
}

/// Crossings within `radius` of one ideal intersection of the unit circles
/// around `u` and `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighbourhoodCount {
    pub ideal: [f64; 2],
    pub count: usize,
}

/// Groups crossings by the ideal intersection points of `ω(u)` and `ω(v)`;
/// also returns the smallest intersection angle between `ω(v)` and circles
/// around `u` with radius in `[1 - eta, 1 + eta]`.
pub fn crossings_near_ideal(
    report: &CrossingReport,
    u: [f64; 2],
    v: [f64; 2],
    eta: f64,
    radius: f64,
) -> (Vec<NeighbourhoodCount>, f64) {
    let dx = v[0] - u[0];
    let dy = v[1] - u[1];
    let d = dx.hypot(dy);
    let mut ideals = Vec::new();
    if d > 0.0 && d < 2.0 {
        let h = (1.0 - d * d / 4.0).sqrt();
        let m = [u[0] + dx / 2.0, u[1] + dy / 2.0];
        for s in [1.0, -1.0] {
            ideals.push([m[0] - s * h * dy / d, m[1] + s * h * dx / d]);
        }
    }
    let counts = ideals
        .iter()
        .map(|&p| NeighbourhoodCount {
            ideal: p,
            count: report.locations.iter().filter(|q| (q[0] - p[0]).hypot(q[1] - p[1]) <= radius).count(),
        })
        .collect();
    let mut alpha_star = f64::INFINITY;
    for i in 0..=100 {
        let r = 1.0 - eta + 2.0 * eta * i as f64 / 100.0;
        let c = ((r * r + 1.0 - d * d) / (2.0 * r)).clamp(-1.0, 1.0);
        let g = c.acos();
        alpha_star = alpha_star.min(g.min(PI - g));
    }
    (counts, alpha_star)
}
