use std::collections::BTreeSet;
use std::sync::OnceLock;

use chromap::circlecolor::{circle_proper, find_triple, make_cyclic, random_proper, wrap, ArcColoring};
use chromap::corpus::{hex7, random_map};
use chromap::curves::{
    annulus_sectors, build_annulus_curve, curve_index, h_delta, index_difference_bound, random_complementary_pair,
    random_curve, BoundarySample,
};
use chromap::geom::{
    circle_circle_intersection, int, polygon_distance_interval, rat, segment_point_distance_sq, to_f64, Location, Point,
    Polygon, Scalar,
};
use chromap::io::{map_from_json, map_to_json};
use chromap::planemap::{build_map, high_degree_trichromatic, reduce_degree, PlanarMap};
use chromap::properness::{properness_check, ForbiddenInterval};
use chromap::scanner::{pseudo_coloring, scan_all, ScanError, ViolationKind};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_map(seed: u64, k: u32) -> PlanarMap {
    random_map(&mut rng(seed), 30, k)
}

fn arbitrary_coloring() -> impl Strategy<Value = ArcColoring> {
    (3usize..12, 6i64..48, any::<u64>()).prop_filter_map("valid colouring", |(n, den, seed)| {
        use rand::Rng;
        let mut r = rng(seed);
        let mut cuts: BTreeSet<i64> = BTreeSet::new();
        while cuts.len() < n.min(den as usize) {
            cuts.insert(r.gen_range(0..den));
        }
        let bps: Vec<Scalar> = cuts.iter().map(|&c| rat(c, den)).collect();
        let mut cols: Vec<u32> = Vec::new();
        for i in 0..bps.len() {
            let mut c = r.gen_range(1..=3);
            while i > 0 && c == cols[i - 1] {
                c = r.gen_range(1..=3);
            }
            cols.push(c);
        }
        ArcColoring::new(bps, cols).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn map_json_round_trip(seed in any::<u64>()) {
        let m = small_map(seed, 6);
        let back = map_from_json(&map_to_json(&m)).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn chromaticity_at_most_degree(seed in any::<u64>()) {
        let m = small_map(seed, 6);
        for v in m.vertices() {
            prop_assert!(v.chromaticity <= v.degree);
            prop_assert!(v.degree >= 3);
        }
    }

    #[test]
    fn flags_grow_with_eps(seed in any::<u64>(), a in 0i64..20, b in 0i64..20) {
        let m = small_map(seed, 12);
        let (lo, hi) = (a.min(b), a.max(b));
        let small = properness_check(&m, &ForbiddenInterval::new(rat(lo, 40)).unwrap());
        let large = properness_check(&m, &ForbiddenInterval::new(rat(hi, 40)).unwrap());
        let big: BTreeSet<_> = large.flagged_pairs().into_iter().collect();
        prop_assert!(small.flagged_pairs().iter().all(|p| big.contains(p)));
        prop_assert!(!large.proper || small.proper);
    }

    #[test]
    fn self_pair_iff_diameter_at_least_one(
        pts in proptest::collection::vec((-60i64..60, -60i64..60), 3..7)
    ) {
        let pts: Vec<Point> = pts.iter().map(|&(x, y)| Point::from_ratios(x, 80, y, 80)).collect();
        let Ok(poly) = Polygon::new_any_orientation(pts) else { return Ok(()) };
        let m = build_map(vec![(poly.clone(), 1)], poly.clone(), 1).unwrap();
        let flagged = properness_check(&m, &ForbiddenInterval::unit()).flagged_pairs().contains(&(0, 0));
        prop_assert_eq!(flagged, poly.diameter_sq() >= int(1));
    }

    #[test]
    fn emitted_violations_recheck(seed in any::<u64>()) {
        let m = small_map(seed, 6);
        for v in scan_all(&m, &ViolationKind::ALL) {
            prop_assert!(v.recheck(&m), "{:?}", v.kind);
        }
    }

    #[test]
    fn make_cyclic_is_idempotent_and_shrinks(seed in any::<u64>()) {
        let c = random_proper(&mut rng(seed), 3, 30);
        let once = make_cyclic(&c).unwrap();
        prop_assert_eq!(make_cyclic(&once).unwrap(), once.clone());
        let before: BTreeSet<_> = c.bichromatic_points().into_iter().collect();
        prop_assert!(once.bichromatic_points().iter().all(|p| before.contains(p)));
    }

    #[test]
    fn proper_arcs_are_short(seed in any::<u64>()) {
        let c = random_proper(&mut rng(seed), 3, 30);
        for i in 0..c.len() {
            prop_assert!(c.arc(i).1 <= rat(1, 6));
        }
    }

    #[test]
    fn circle_proper_agrees_with_sampling(c in arbitrary_coloring(), seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let mut conflict = false;
        for _ in 0..2000 {
            let t = rat(r.gen_range(0..720 * 7), 720 * 7);
            let u = wrap(&(&t + rat(1, 6)));
            let (a, b) = (c.multicolor_at(&t), c.multicolor_at(&u));
            let mono = a.len() == 1 && a == b;
            let same_pair = a.len() == 2 && a == b;
            if mono || same_pair {
                conflict = true;
                break;
            }
        }
        if conflict {
            prop_assert!(!circle_proper(&c).proper);
        }
        if circle_proper(&c).proper {
            prop_assert!(!conflict);
        }
    }

    #[test]
    fn triples_satisfy_contract(seed in any::<u64>()) {
        let c = make_cyclic(&random_proper(&mut rng(seed), 3, 30)).unwrap();
        for pair in [(1, 2), (1, 3), (2, 3)] {
            if let Some(t) = find_triple(&c, pair) {
                for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                    let d = wrap(&(&t[a].angle - &t[b].angle));
                    prop_assert!(d > rat(1, 6) && d < rat(5, 6));
                }
            }
        }
    }

    #[test]
    fn reversal_negates_index(seed in any::<u64>(), t in 2usize..16) {
        let c = random_curve(&mut rng(seed), t);
        prop_assert_eq!(curve_index(&c.reversed()).unwrap(), -curve_index(&c).unwrap());
    }

    #[test]
    fn complementary_indices_differ_by_at_most_one(seed in any::<u64>(), t in 2usize..16) {
        let p = random_complementary_pair(&mut rng(seed), t);
        prop_assert!(index_difference_bound(&p).unwrap().diff <= 1);
    }

    #[test]
    fn h_delta_decreases_in_alpha(delta in 0.0f64..0.99, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let (lo, hi) = (a.min(b) * half_pi, a.max(b) * half_pi);
        prop_assert!(h_delta(lo, delta) >= h_delta(hi, delta) - 1e-12);
    }

    #[test]
    fn h_delta_tends_to_one(alpha in 0.0f64..std::f64::consts::PI) {
        prop_assert!((h_delta(alpha, 1e-9) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn annulus_certificate_holds_on_success(
        a0 in 0.0f64..1.0, g1 in 0.2f64..0.45, g2 in 0.2f64..0.45, eta in 0.002f64..0.05
    ) {
        let samples: Vec<BoundarySample> = [0.2, 0.5, 0.8]
            .iter()
            .map(|&delta| BoundarySample { delta, angles: [a0, (a0 + g1) % 1.0, (a0 + g1 + g2) % 1.0] })
            .collect();
        if let Ok(s) = annulus_sectors([0.5, -0.5], &samples, eta) {
            if let Ok(c) = build_annulus_curve(&s, eta / 10.0) {
                prop_assert!(c.certificate.passes);
                prop_assert_eq!(c.certificate.winding, 1);
            }
        }
    }
}

fn q(n: i64) -> Scalar {
    rat(n, 16)
}

fn pt((x, y): (i64, i64)) -> Point {
    Point::new(q(x), q(y))
}

fn unit_vector(t: i64) -> Point {
    let t = rat(t, 7);
    let d = int(1) + &t * &t;
    Point::new((int(1) - &t * &t) / &d, int(2) * &t / &d)
}

fn hex_map() -> &'static PlanarMap {
    static MAP: OnceLock<PlanarMap> = OnceLock::new();
    MAP.get_or_init(|| hex7(&rat(9, 10), &int(4), &int(4)).unwrap())
}

fn coords() -> impl Strategy<Value = (i64, i64)> {
    (-64i64..64, -64i64..64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn segment_distance_below_samples(p in coords(), a in coords(), b in coords()) {
        prop_assume!(a != b);
        let (p, a, b) = (pt(p), pt(a), pt(b));
        let exact = to_f64(&segment_point_distance_sq(&p, &a, &b).unwrap());
        let (pf, af, bf) = (p.to_f64(), a.to_f64(), b.to_f64());
        let n = 10_000;
        let sampled = (0..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                let x = af[0] + t * (bf[0] - af[0]) - pf[0];
                let y = af[1] + t * (bf[1] - af[1]) - pf[1];
                x * x + y * y
            })
            .fold(f64::INFINITY, f64::min);
        let len = ((bf[0] - af[0]).powi(2) + (bf[1] - af[1]).powi(2)).sqrt();
        let step = len / n as f64;
        prop_assert!(exact <= sampled + 1e-12);
        prop_assert!(sampled.sqrt() - exact.sqrt() <= step + 1e-9);
    }

    #[test]
    fn distance_interval_self_and_symmetry(seed in any::<u64>()) {
        let m = small_map(seed, 6);
        let rs = m.regions();
        for i in 0..rs.len().min(6) {
            let p = &rs[i].poly;
            let own = polygon_distance_interval(p, p);
            prop_assert_eq!(own.min_sq, int(0));
            prop_assert_eq!(own.max_sq, p.diameter_sq());
            for r in rs.iter().take(6) {
                prop_assert_eq!(polygon_distance_interval(p, &r.poly), polygon_distance_interval(&r.poly, p));
            }
        }
    }

    #[test]
    fn circle_count_invariant_under_translation(
        c1 in coords(), c2 in coords(), r1 in 1i64..400, r2 in 1i64..400, shift in coords()
    ) {
        let (c1, c2, s) = (pt(c1), pt(c2), pt(shift));
        let (r1, r2) = (rat(r1, 64), rat(r2, 64));
        let a = circle_circle_intersection(&c1, &r1, &c2, &r2);
        let b = circle_circle_intersection(&c1.add(&s), &r1, &c2.add(&s), &r2);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.count, b.count),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn proper_map_keeps_colour_off_unit_circle(seed in any::<u64>()) {
        use rand::Rng;
        let m = hex_map();
        let mut r = rng(seed);
        for _ in 0..200 {
            let region = &m.regions()[r.gen_range(0..m.regions().len())];
            let x = region.poly.interior_point();
            let y = x.add(&unit_vector(r.gen_range(-40..40)));
            if m.window().locate(&y) != Location::Inside {
                continue;
            }
            prop_assert!(!m.multicolor(&y).contains(&region.color));
        }
    }

    #[test]
    fn pseudo_colouring_reports_trichromatic_circle_points(seed in any::<u64>()) {
        let m = small_map(seed, 6);
        let found = scan_all(&m, &ViolationKind::ALL);
        for v in m.vertices().iter().filter(|v| v.chromaticity == 3) {
            match pseudo_coloring(&m, &v.location) {
                Ok(pc) => {
                    prop_assert!(pc.coloring.colors().iter().all(|c| (1..=3).contains(c)));
                    prop_assert_eq!(pc.exact.len(), pc.coloring.len());
                }
                Err(ScanError::TrichromaticOnCircle(w)) => {
                    prop_assert!(found.iter().any(|f| f.points.contains(&v.location) && f.points.contains(&w)
                        || f.kind == ViolationKind::Chromaticity4 && f.points.contains(&w)));
                }
                Err(_) => {}
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn reduce_degree_clears_high_degree_vertices(seed in any::<u64>()) {
        let m = small_map(seed, 6);
        let (center, r) = (m.window_centroid(), int(3));
        let before = high_degree_trichromatic(&m, &center, &(&r * &r)).len();
        if let Ok(out) = reduce_degree(&m, &r) {
            let after = high_degree_trichromatic(&out, &center, &(&r * &r)).len();
            prop_assert_eq!(after, 0);
            prop_assert!(before == 0 || after < before);
        }
    }
}
