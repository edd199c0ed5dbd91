//! Acceptance criteria 1-10, one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chromap::circlecolor::{circle_proper, find_triple, is_cyclic, make_cyclic, random_proper, wrap};
use chromap::corpus::{self, crafted, random_map, CorpusKind, CorpusSpec, CRAFTED};
use chromap::curves::{
    annulus_sectors, build_annulus_curve, count_circle_crossings, crossings_near_ideal, curve_index, h_delta,
    index_difference_bound, random_chain, random_complementary_pair, random_curve, AnnulusCurve, BoundarySample,
    TriColoredCurve,
};
use chromap::geom::{int, polygon_distance_interval, rat, Point, Polygon, Scalar};
use chromap::io::{map_from_json, map_to_json, oracle_value, to_pretty, violations_value};
use chromap::planemap::{build_map, describe_point, validate_conditions, PlanarMap};
use chromap::properness::{properness_check, sampling_oracle, ForbiddenInterval};
use chromap::render::{render, RenderSpec};
use chromap::scanner::{disk_analysis, scan_all, DiskOutcome, HypothesisStep, ViolationKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn hex_spec(kind: CorpusKind) -> CorpusSpec {
    CorpusSpec { kind, width: int(10), height: int(10) }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("exact properness vs sampling oracle", c1_properness_vs_oracle),
        ("hexagonal 7-colouring soundness", c2_hex7),
        ("self-conflict rule", c3_self_conflict),
        ("circle calculus", c4_circle_calculus),
        ("index calculus", c5_index_calculus),
        ("h_delta formula and annulus certificates", c6_h_delta_and_annulus),
        ("crossing count", c7_crossings),
        ("scanner certification", c8_scanner),
        ("disk pipeline totality", c9_disk_totality),
        ("determinism and round-trip", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{t:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{t:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn c1_properness_vs_oracle() -> Check {
    let start = Instant::now();
    let band = ForbiddenInterval::unit();
    let (mut pairs, mut hits) = (0, 0);
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_map(&mut rng, 100, 6);
        ensure(map.regions().len() <= 100, || format!("seed {seed}: {} regions", map.regions().len()))?;
        let exact: BTreeSet<(usize, usize)> = properness_check(&map, &band).flagged_pairs().into_iter().collect();
        let oracle = sampling_oracle(&map, &band, 100_000, seed).map_err(|e| e.to_string())?;
        for h in &oracle.hits {
            ensure(h.recheck(&map, &band), || format!("seed {seed}: unconfirmed oracle hit {:?}", (h.a, h.b)))?;
            let key = (h.a.min(h.b), h.a.max(h.b));
            ensure(exact.contains(&key), || format!("seed {seed}: oracle pair {key:?} missed by exact check"))?;
        }
        pairs += exact.len();
        hits += oracle.hits.len();
    }
    within(start, Duration::from_secs(60), "50 maps")?;
    Ok(format!("50 maps, {hits} oracle pairs all confirmed and flagged ({pairs} exact flags)"))
}

fn c2_hex7() -> Check {
    let start = Instant::now();
    let map = corpus::generate(&hex_spec(CorpusKind::Hex7 { d: rat(9, 10) })).map_err(|e| e.to_string())?;
    let report = properness_check(&map, &ForbiddenInterval::unit());
    ensure(report.proper && report.critical.is_empty(), || format!("hex7 flagged {:?}", report.flagged_pairs()))?;
    let cond = validate_conditions(&map);
    for (name, c) in [("cubic", &cond.cubic), ("3col", &cond.col3), ("poly", &cond.poly)] {
        ensure(c.holds, || format!("hex7 fails {name} at {:?}", c.witnesses.first()))?;
    }
    within(start, Duration::from_secs(10), "hex7 check")?;
    let six = corpus::generate(&hex_spec(CorpusKind::Hex6Merged { d: rat(9, 10) })).map_err(|e| e.to_string())?;
    let bad = properness_check(&six, &ForbiddenInterval::unit());
    ensure(!bad.proper, || "6-colour variant passed properness".into())?;
    for w in &bad.violations {
        let (p, q) = (&six.regions()[w.a], &six.regions()[w.b]);
        let iv = polygon_distance_interval(&p.poly, &q.poly);
        ensure(
            p.color == q.color && iv.min_sq == w.min_sq && iv.max_sq == w.max_sq && iv.min_sq <= int(1) && iv.max_sq >= int(1),
            || format!("witness ({}, {}) does not recheck", w.a, w.b),
        )?;
    }
    Ok(format!(
        "{} hexagons proper and cubic; merged variant has {} witness pairs, first ({}, {})",
        map.regions().len(),
        bad.violations.len(),
        bad.violations[0].a,
        bad.violations[0].b
    ))
}

/// Star-shaped polygon around the origin with rational vertices.
fn random_star<R: Rng>(rng: &mut R) -> Polygon {
    loop {
        let n = rng.gen_range(3..=9);
        let scale: i64 = rng.gen_range(2..=12);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let pts: Vec<Point> = angles
            .iter()
            .map(|a| {
                let r = rng.gen_range(2..=10) as f64 * scale as f64 / 100.0;
                let x = (r * a.cos() * 1000.0).round() as i64;
                let y = (r * a.sin() * 1000.0).round() as i64;
                Point::from_ratios(x, 1000, y, 1000)
            })
            .collect();
        if let Ok(p) = Polygon::new(pts) {
            return p;
        }
    }
}

/// Polygon over a unit base with its other vertices inside the lens, so its
/// diameter is exactly 1.
fn unit_base_polygon<R: Rng>(rng: &mut R) -> Polygon {
    loop {
        let mut pts: Vec<Point> = (0..rng.gen_range(1..=4))
            .map(|_| Point::from_ratios(rng.gen_range(300..=700), 1000, rng.gen_range(1..=500), 1000))
            .collect();
        let mid = Point::from_ratios(1, 2, 0, 1);
        pts.sort_by(|a, b| chromap::geom::cmp_angle(&a.sub(&mid), &b.sub(&mid)));
        let mut v = vec![Point::from_ints(0, 0), Point::from_ints(1, 0)];
        v.extend(pts);
        if let Ok(p) = Polygon::new(v) {
            return p;
        }
    }
}

fn c3_self_conflict() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let band = ForbiddenInterval::unit();
    let (mut flagged, mut exact_one) = (0, 0);
    for i in 0..100 {
        let poly = if i % 10 == 9 { unit_base_polygon(&mut rng) } else { random_star(&mut rng) };
        let vs = poly.vertices();
        let mut diam = Scalar::from_integer(0.into());
        for a in vs {
            for b in vs {
                diam = diam.max(a.dist_sq(b));
            }
        }
        let map: PlanarMap = build_map(vec![(poly.clone(), 1)], poly, 1).map_err(|e| e.to_string())?;
        let is_flagged = properness_check(&map, &band).flagged_pairs().contains(&(0, 0));
        let expected = diam >= int(1);
        ensure(is_flagged == expected, || format!("polygon {i}: diameter^2 {diam}, flagged {is_flagged}"))?;
        flagged += is_flagged as usize;
        exact_one += (diam == int(1)) as usize;
    }
    Ok(format!("100 polygons, {flagged} flagged, {exact_one} with diameter exactly 1"))
}

fn c4_circle_calculus() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sixth = rat(1, 6);
    let five_sixths = rat(5, 6);
    let mut with_triples = 0;
    for i in 0..200 {
        let c = random_proper(&mut rng, 3, 30);
        let out = make_cyclic(&c).map_err(|e| format!("colouring {i}: {e}"))?;
        ensure(circle_proper(&out).proper, || format!("colouring {i}: output improper"))?;
        ensure(is_cyclic(&out) == Ok(true), || format!("colouring {i}: output not cyclic"))?;
        let input: BTreeSet<_> = c.breakpoints().iter().collect();
        ensure(out.breakpoints().iter().all(|b| input.contains(b)), || format!("colouring {i}: new breakpoint"))?;
        if out.bichromatic_points().len() < 9 {
            continue;
        }
        with_triples += 1;
        for pair in [(1, 2), (1, 3), (2, 3)] {
            let t = find_triple(&out, pair).ok_or_else(|| format!("colouring {i}: no triple for {pair:?}"))?;
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let sep = wrap(&(&t[a].angle - &t[b].angle));
                ensure(sep > sixth && sep < five_sixths, || format!("colouring {i}: triple {pair:?} too close"))?;
                ensure(t[a].pair == pair && t[b].pair == pair, || format!("colouring {i}: wrong pair"))?;
            }
        }
    }
    ensure(with_triples > 0, || "no cyclic output had 9 bichromatic points".into())?;
    Ok(format!("200 colourings made cyclic; {with_triples} with >= 9 bichromatic points, all triples found"))
}

/// Index from an explicitly built colour-preserving map to the 3-coloured
/// line `c(x) = (floor(x + 1/2) mod 3) + 1`.
fn f_oracle(c: &TriColoredCurve) -> i64 {
    let line = |x: i64| (x.rem_euclid(3) + 1) as u32;
    let mut level = c.colors[0] as i64 - 1;
    let first = level;
    assert_eq!(line(level), c.colors[0]);
    for &next in &c.colors[1..] {
        level = [level - 1, level + 1].into_iter().find(|&l| line(l) == next).expect("adjacent band");
    }
    level - first
}

fn c5_index_calculus() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..1000 {
        let t = rng.gen_range(2..=12);
        let c = random_curve(&mut rng, t);
        let ind = curve_index(&c).map_err(|e| e.to_string())?;
        ensure(ind == f_oracle(&c), || format!("curve {i}: index {ind} vs oracle {}", f_oracle(&c)))?;
        let rev = curve_index(&c.reversed()).map_err(|e| e.to_string())?;
        ensure(rev == -ind, || format!("curve {i}: reversal gives {rev} for {ind}"))?;
    }
    let mut max_diff = 0;
    for i in 0..1000 {
        let t = rng.gen_range(2..=12);
        let p = random_complementary_pair(&mut rng, t);
        let d = index_difference_bound(&p).map_err(|e| e.to_string())?;
        ensure(d.diff <= 1, || format!("pair {i}: |Ind1 - Ind2| = {}", d.diff))?;
        max_diff = max_diff.max(d.diff);
    }
    for i in 0..100 {
        let len = rng.gen_range(2..=6);
        let t = rng.gen_range(2..=8);
        let chain = random_chain(&mut rng, len, t);
        let inds: Vec<i64> = chain.iter().map(|c| curve_index(c).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        ensure(inds.iter().all(|&x| x > 0) || inds.iter().all(|&x| x < 0), || format!("chain {i}: indices {inds:?}"))?;
    }
    within(start, Duration::from_secs(30), "index calculus")?;
    Ok(format!("1000 curves match the oracle and reverse; 1000 pairs max diff {max_diff}; 100 chains keep sign"))
}

fn bisect_h(alpha: f64, delta: f64) -> f64 {
    let f = |r: f64| {
        let x = -delta + r * alpha.cos();
        let y = r * alpha.sin();
        x * x + y * y - 1.0
    };
    let (mut lo, mut hi) = (0.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Three boundary rays drifting linearly with `delta`.
fn sector_samples<R: Rng>(rng: &mut R) -> Vec<BoundarySample> {
    let a0: f64 = rng.gen_range(0.0..1.0);
    let g1: f64 = rng.gen_range(0.2..0.45);
    let g2: f64 = rng.gen_range(0.2..0.45);
    let drift: [f64; 3] = [rng.gen_range(-0.03..0.03), rng.gen_range(-0.03..0.03), rng.gen_range(-0.03..0.03)];
    [0.1, 0.3, 0.5, 0.7, 0.9]
        .iter()
        .map(|&delta| BoundarySample {
            delta,
            angles: [
                (a0 + drift[0] * delta).rem_euclid(1.0),
                (a0 + g1 + drift[1] * delta).rem_euclid(1.0),
                (a0 + g1 + g2 + drift[2] * delta).rem_euclid(1.0),
            ],
        })
        .collect()
}

fn annulus_curve(seed: u64, eta: f64, center: [f64; 2]) -> Result<AnnulusCurve, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = sector_samples(&mut rng);
    let sectors = annulus_sectors(center, &samples, eta).map_err(|e| format!("seed {seed}: {e}"))?;
    build_annulus_curve(&sectors, eta / 10.0).map_err(|e| format!("seed {seed}: {e}"))
}

fn c6_h_delta_and_annulus() -> Check {
    let mut worst = 0.0f64;
    for i in 0..100 {
        let alpha = std::f64::consts::PI * i as f64 / 99.0;
        for j in 0..100 {
            let delta = 0.99 * j as f64 / 99.0;
            let err = (h_delta(alpha, delta) - bisect_h(alpha, delta)).abs();
            ensure(err < 1e-9, || format!("alpha {alpha}, delta {delta}: error {err:e}"))?;
            worst = worst.max(err);
        }
    }
    for seed in 0..20u64 {
        let eta = 0.005 + 0.045 * (seed as f64 / 19.0);
        let c = annulus_curve(seed, eta, [0.0, 0.0])?;
        let cert = &c.certificate;
        ensure(
            cert.passes && cert.winding == 1 && cert.max_radial_offset < eta && cert.theta_prime <= eta / 10.0,
            || format!("seed {seed}: certificate {cert:?}"),
        )?;
    }
    Ok(format!("10^4 grid points, max error {worst:.1e}; 20 annulus certificates pass"))
}

fn c7_crossings() -> Check {
    let eta = 1e-2;
    let u = [0.0, 0.0];
    let mut checked = 0;
    for seed in 0..5u64 {
        let c = annulus_curve(100 + seed, eta, u)?;
        for d in [1.2, 1.5, 1.8] {
            for k in 0..8 {
                let phi = std::f64::consts::TAU * (k as f64 + 0.1 * seed as f64) / 8.0 + 0.05;
                let v = [d * phi.cos(), d * phi.sin()];
                let report = count_circle_crossings(&c.curve, v).map_err(|e| e.to_string())?;
                let (_, alpha_star) = crossings_near_ideal(&report, u, v, eta, 0.0);
                let radius = 4.0 * eta / alpha_star.sin();
                let (near, _) = crossings_near_ideal(&report, u, v, eta, radius);
                ensure(near.len() == 2 && near.iter().all(|n| n.count == 1) && report.count == 2, || {
                    format!("seed {seed}, d {d}, k {k}: {} crossings, per ideal {:?}", report.count, near)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} curve/circle configurations, exactly one crossing near each ideal point"))
}

fn fixture(name: &str) -> Result<PlanarMap, String> {
    crafted(name).map_err(|e| format!("{name}: {e}"))
}

fn c8_scanner() -> Check {
    let count = |m: &PlanarMap, k: ViolationKind| scan_all(m, &[k]).into_iter().filter(|v| v.kind == k).collect::<Vec<_>>();
    let t7 = fixture("t7")?;
    let v = count(&t7, ViolationKind::SameMulticolorPair);
    ensure(v.len() == 1, || format!("t7 fixture: {} same-multicolour pairs", v.len()))?;
    let d = v[0].dist_sq.clone().unwrap_or_default();
    ensure(d > int(1) && d < int(4), || format!("t7 distance^2 {d}"))?;
    let f32 = fixture("f32")?;
    let n = count(&f32, ViolationKind::DisjointMulticolorPair).len();
    ensure(n == 1, || format!("f32 fixture: {n} disjoint-multicolour pairs"))?;
    let grid = fixture("grid4")?;
    let n = count(&grid, ViolationKind::Chromaticity4).len();
    ensure(n == 1, || format!("2x2 grid: {n} chromaticity-4 reports"))?;
    let l15 = fixture("l15")?;
    let n = count(&l15, ViolationKind::BichromaticUnit).len();
    ensure(n >= 1, || "parallel-boundary fixture: no bichromatic unit pair".into())?;
    let mut total = 0;
    for name in CRAFTED {
        let m = fixture(name)?;
        let mut vs = scan_all(&m, &ViolationKind::ALL);
        vs.extend(disk_analysis(&m, &Point::origin()).violations().iter().cloned());
        for v in &vs {
            ensure(v.recheck(&m), || format!("{name}: {} violation fails recheck", v.kind))?;
        }
        total += vs.len();
    }
    Ok(format!("t7 d^2 = {d}, f32, t3 and l15 fixtures as expected; {total} violations recheck"))
}

/// Independent confirmation of a disk-pipeline outcome.
fn confirm(map: &PlanarMap, center: &Point, outcome: &DiskOutcome) -> Result<String, String> {
    match outcome {
        DiskOutcome::Violations(vs) => {
            ensure(!vs.is_empty(), || "silent pass".into())?;
            ensure(vs.iter().all(|v| v.recheck(map)), || "violation fails recheck".into())?;
            Ok(format!("{} x {}", vs.len(), vs[0].kind.short()))
        }
        DiskOutcome::HypothesisFailure { step, points, regions, .. } => {
            let ok = match step {
                HypothesisStep::SixColors => {
                    let used: BTreeSet<u32> = map.regions().iter().map(|r| r.color).collect();
                    map.k() > 6 && used.len() > 6
                }
                HypothesisStep::DiskInWindow => (0..64).any(|i| {
                    let t = rat(i - 32, 8);
                    let den = int(1) + &t * &t;
                    let p = Point::new(
                        &center.x + int(3) * (int(1) - &t * &t) / &den,
                        &center.y + int(6) * &t / &den,
                    );
                    !map.window().contains_closed(&p)
                }),
                HypothesisStep::ThreeColCondition => {
                    let c = validate_conditions(map).col3;
                    !c.holds && points.iter().all(|p| c.witnesses.contains(p))
                }
                HypothesisStep::TrichromaticPoint => map
                    .vertices()
                    .iter()
                    .all(|v| v.location.dist_sq(center) > int(1) || describe_point(map, &v.location).multicolor.len() != 3),
                HypothesisStep::Properness => {
                    let flagged = properness_check(map, &ForbiddenInterval::unit()).flagged_pairs();
                    !flagged.is_empty() && regions.iter().all(|r| flagged.contains(r))
                }
                other => return Err(format!("unexpected step {other}")),
            };
            ensure(ok, || format!("{step} not confirmed"))?;
            Ok(format!("{step}"))
        }
    }
}

fn c9_disk_totality() -> Check {
    let mut cases: Vec<(String, PlanarMap, Point)> = Vec::new();
    for (name, kind) in [
        ("hex7", CorpusKind::Hex7 { d: rat(9, 10) }),
        ("hex6", CorpusKind::Hex6Merged { d: rat(9, 10) }),
        ("stripes6", CorpusKind::Stripes { k: 6, width: rat(1, 2) }),
    ] {
        let m = corpus::generate(&hex_spec(kind)).map_err(|e| e.to_string())?;
        let c = m.window_centroid();
        cases.push((name.into(), m, c));
    }
    for name in [
        "grid4-disk",
        "grid-3col-disk",
        "stripes-disk",
        "near-proper-disk",
        "hexagon-disk",
        "three-arc-disk",
        "empty-pseudo-disk",
    ] {
        cases.push((name.into(), fixture(name)?, Point::origin()));
    }
    let mut summary = Vec::new();
    for (name, map, center) in &cases {
        let a = disk_analysis(map, center);
        let s = confirm(map, center, &a.outcome).map_err(|e| format!("{name}: {e}"))?;
        summary.push(format!("{name}={s}"));
    }
    Ok(summary.join(", "))
}

fn c10_determinism() -> Check {
    let mut maps: Vec<(String, PlanarMap)> = Vec::new();
    for name in CRAFTED {
        maps.push((name.into(), fixture(name)?));
    }
    for (name, kind) in [
        ("hex7", CorpusKind::Hex7 { d: rat(9, 10) }),
        ("hex6", CorpusKind::Hex6Merged { d: rat(9, 10) }),
        ("stripes", CorpusKind::Stripes { k: 6, width: rat(1, 2) }),
        ("grid", CorpusKind::Grid { k: 4, cell: int(1) }),
    ] {
        maps.push((name.into(), corpus::generate(&hex_spec(kind)).map_err(|e| e.to_string())?));
    }
    for seed in 0..5u64 {
        maps.push((format!("random{seed}"), random_map(&mut ChaCha8Rng::seed_from_u64(seed), 100, 6)));
    }
    for (name, m) in &maps {
        let s = map_to_json(m);
        let back = map_from_json(&s).map_err(|e| format!("{name}: {e}"))?;
        ensure(&back == m, || format!("{name}: round-trip changed the map"))?;
        ensure(map_to_json(&back) == s, || format!("{name}: re-serialisation differs"))?;
    }
    let run = |seed: u64| -> Result<(String, String, String, String), String> {
        let m = random_map(&mut ChaCha8Rng::seed_from_u64(seed), 100, 6);
        let mut spec = RenderSpec::all(40.0).map_err(|e| e.to_string())?;
        spec.violations = scan_all(&m, &ViolationKind::ALL);
        spec.unit_circles = m.vertices().iter().take(3).map(|v| v.location.clone()).collect();
        let oracle = sampling_oracle(&m, &ForbiddenInterval::unit(), 20_000, seed).map_err(|e| e.to_string())?;
        Ok((
            map_to_json(&m),
            render(&m, &spec),
            to_pretty(&violations_value(&spec.violations)),
            to_pretty(&oracle_value(&oracle, seed)),
        ))
    };
    for seed in [7u64, 8] {
        ensure(run(seed)? == run(seed)?, || format!("seed {seed}: outputs differ between runs"))?;
    }
    Ok(format!("{} corpus maps round-trip; map, SVG and report bytes repeat for equal seeds", maps.len()))
}
