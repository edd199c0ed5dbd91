use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use chromap::circlecolor::{circle_proper, find_triple, is_cyclic, make_cyclic, ArcColoring, ProperWitness};
use chromap::corpus::{self, CorpusKind, CorpusSpec};
use chromap::curves::{
    annulus_sectors, build_annulus_curve, curve_index_with, index_difference_bound, BoundarySample, ComplementaryPair,
    IndexConvention,
};
use chromap::geom::{Point, Scalar};
use chromap::io;
use chromap::planemap::{validate_conditions, ColorId, PlanarMap};
use chromap::properness::{properness_check, sampling_oracle, ForbiddenInterval};
use chromap::render::{render, Layer, RenderSpec};
use chromap::scanner::{disk_analysis, scan_all, DiskOutcome, ViolationKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{read, CircleOp, Command, CurveOp, GenerateArgs, GenerateKind};

pub const OK: u8 = 0;
pub const USAGE: u8 = 1;
pub const IMPROPER: u8 = 2;
pub const VIOLATIONS: u8 = 3;
pub const HYPOTHESIS: u8 = 4;
pub const INVALID: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Failure {
        Failure { code: INVALID, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: USAGE, message: message.into() }
    }
}

fn invalid<E: std::fmt::Display>(context: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::input(format!("{}: {e}", context.display()))
}

fn rational(s: &str, what: &str) -> Result<Scalar, Failure> {
    s.trim().parse::<Scalar>().map_err(|_| Failure::usage(format!("{what}: expected p/q, got {s:?}")))
}

fn load_map(path: &Path) -> Result<PlanarMap, Failure> {
    io::map_from_json(&read(path)?).map_err(invalid(path))
}

fn load_coloring(path: &Path) -> Result<ArcColoring, Failure> {
    io::coloring_from_json(&read(path)?).map_err(invalid(path))
}

fn emit(v: &Value) {
    print!("{}", io::to_pretty(v));
}

fn write_or_print(text: &str, output: &Option<PathBuf>) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Validate { map } => validate(&map),
        Command::Properness { map, eps, oracle, seed } => properness(&map, &eps, oracle, seed),
        Command::Circle { op } => circle(op),
        Command::Curve { op } => curve(op),
        Command::Scan { map, disk, kinds } => scan(&map, disk, kinds),
        Command::Generate(args) => generate(args),
        Command::Render { map, layers, scale, circles, curves, scan, output } => {
            render_cmd(&map, &layers, scale, &circles, &curves, scan, &output)
        }
    }
}

fn validate(path: &Path) -> Result<u8, Failure> {
    let map = load_map(path)?;
    let report = validate_conditions(&map);
    emit(&io::conditions_value(&report));
    Ok(if report.all_hold() { OK } else { HYPOTHESIS })
}

fn properness(path: &Path, eps: &str, oracle: Option<usize>, seed: u64) -> Result<u8, Failure> {
    let eps = rational(eps, "--eps")?;
    let band = ForbiddenInterval::new(eps.clone()).map_err(|e| Failure::usage(format!("--eps: {e}")))?;
    let map = load_map(path)?;
    let report = properness_check(&map, &band);
    let mut out = io::properness_value(&report, &eps);
    if let Some(n) = oracle {
        let o = sampling_oracle(&map, &band, n, seed).map_err(|e| Failure::usage(format!("--oracle: {e}")))?;
        out["oracle"] = io::oracle_value(&o, seed);
    }
    emit(&out);
    Ok(if report.proper { OK } else { IMPROPER })
}

fn witness_value(w: &ProperWitness) -> Value {
    match w {
        ProperWitness::SameColorArcs { arc_a, arc_b, angle_a, angle_b } => json!({
            "kind": "same-color-arcs",
            "arcs": [arc_a, arc_b],
            "angles": [io::scalar_value(angle_a), io::scalar_value(angle_b)],
        }),
        ProperWitness::SamePair { a, b } => json!({
            "kind": "same-pair",
            "pair": [a.pair.0, a.pair.1],
            "angles": [io::scalar_value(&a.angle), io::scalar_value(&b.angle)],
        }),
    }
}

fn parse_pair(s: &str) -> Result<(ColorId, ColorId), Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse(), b.parse()) {
            (Ok(a), Ok(b)) if a != b => Ok((a, b)),
            _ => Err(Failure::usage(format!("--pair: expected two distinct colours, got {s:?}"))),
        },
        _ => Err(Failure::usage(format!("--pair: expected a,b, got {s:?}"))),
    }
}

fn circle(op: CircleOp) -> Result<u8, Failure> {
    match op {
        CircleOp::Proper { file } => {
            let c = load_coloring(&file)?;
            let check = circle_proper(&c);
            emit(&json!({"proper": check.proper, "witness": check.witness.as_ref().map(witness_value)}));
            Ok(if check.proper { OK } else { IMPROPER })
        }
        CircleOp::Cyclic { file } => {
            let c = load_coloring(&file)?;
            let cyclic = is_cyclic(&c).map_err(invalid(&file))?;
            emit(&json!({"cyclic": cyclic}));
            Ok(OK)
        }
        CircleOp::Recolor { file, output } => {
            let c = load_coloring(&file)?;
            let out = make_cyclic(&c).map_err(|e| Failure { code: IMPROPER, message: format!("{}: {e}", file.display()) })?;
            write_or_print(&io::coloring_to_json(&out), &output)?;
            Ok(OK)
        }
        CircleOp::Triple { file, pair } => {
            let pairs = match pair {
                Some(p) => vec![parse_pair(&p)?],
                None => vec![(1, 2), (1, 3), (2, 3)],
            };
            let c = load_coloring(&file)?;
            let mut all = true;
            let mut found = Vec::new();
            for p in pairs {
                let t = find_triple(&c, p);
                all &= t.is_some();
                found.push(json!({
                    "pair": [p.0.min(p.1), p.0.max(p.1)],
                    "points": t.map(|t| t.iter().map(|b| io::scalar_value(&b.angle)).collect::<Vec<_>>()),
                }));
            }
            emit(&json!({"triples": found}));
            Ok(if all { OK } else { HYPOTHESIS })
        }
    }
}

fn load_curve(path: &Path) -> Result<chromap::curves::TriColoredCurve, Failure> {
    io::curve_from_json(&read(path)?).map_err(invalid(path))
}

fn samples_from(v: &Value, path: &Path) -> Result<([f64; 2], f64, Vec<BoundarySample>), Failure> {
    let err = |m: &str| Failure::input(format!("{}: {m}", path.display()));
    let f = |x: &Value| x.as_f64().filter(|x| x.is_finite());
    let center = match v.get("center").and_then(Value::as_array).map(Vec::as_slice) {
        Some([x, y]) => [f(x).ok_or_else(|| err("$.center: expected numbers"))?, f(y).ok_or_else(|| err("$.center: expected numbers"))?],
        _ => return Err(err("$.center: expected [x, y]")),
    };
    let eta = v.get("eta").and_then(f).ok_or_else(|| err("$.eta: expected a number"))?;
    let raw = v.get("samples").and_then(Value::as_array).ok_or_else(|| err("$.samples: expected an array"))?;
    let mut samples = Vec::with_capacity(raw.len());
    for (i, s) in raw.iter().enumerate() {
        let delta = s.get("delta").and_then(f).ok_or_else(|| err(&format!("$.samples[{i}].delta: expected a number")))?;
        let angles = match s.get("angles").and_then(Value::as_array).map(Vec::as_slice) {
            Some([a, b, c]) => match (f(a), f(b), f(c)) {
                (Some(a), Some(b), Some(c)) => [a, b, c],
                _ => return Err(err(&format!("$.samples[{i}].angles: expected numbers"))),
            },
            _ => return Err(err(&format!("$.samples[{i}].angles: expected three angles"))),
        };
        samples.push(BoundarySample { delta, angles });
    }
    Ok((center, eta, samples))
}

fn curve(op: CurveOp) -> Result<u8, Failure> {
    match op {
        CurveOp::Index { file, exclude_final } => {
            let c = load_curve(&file)?;
            let conv = if exclude_final { IndexConvention::ExcludeFinal } else { IndexConvention::AllTransitions };
            let ind = curve_index_with(&c, conv).map_err(invalid(&file))?;
            emit(&json!({"index": ind}));
            Ok(OK)
        }
        CurveOp::CheckPair { gamma1, gamma2 } => {
            let g1 = load_curve(&gamma1)?;
            let g2 = load_curve(&gamma2)?;
            let pair = ComplementaryPair::new(g1, g2).map_err(|e| Failure::input(e.to_string()))?;
            let d = index_difference_bound(&pair).map_err(|e| Failure::input(e.to_string()))?;
            emit(&json!({
                "ind1": d.ind1,
                "ind2": d.ind2,
                "diff": d.diff,
                "bound_holds": d.diff <= 1,
                "diagnostic": d.diagnostic.map(|x| json!({"segment": x.segment, "value": x.value})),
            }));
            Ok(if d.diff <= 1 { OK } else { HYPOTHESIS })
        }
        CurveOp::BuildAnnulus { file, theta, output } => {
            let v: Value = serde_json::from_str(&read(&file)?).map_err(invalid(&file))?;
            let (center, eta, samples) = samples_from(&v, &file)?;
            let sectors = annulus_sectors(center, &samples, eta).map_err(invalid(&file))?;
            let theta = theta.unwrap_or(eta / 10.0);
            let built = build_annulus_curve(&sectors, theta).map_err(|e| Failure { code: HYPOTHESIS, message: e.to_string() })?;
            let cert = &built.certificate;
            let out = json!({
                "curve": io::curve_value(&built.curve),
                "rho": built.rho,
                "certificate": {
                    "winding": cert.winding,
                    "max_radial_offset": cert.max_radial_offset,
                    "theta_prime": cert.theta_prime,
                    "passes": cert.passes,
                },
            });
            write_or_print(&io::to_pretty(&out), &output)?;
            Ok(OK)
        }
    }
}

fn parse_kinds(kinds: Option<Vec<String>>) -> Result<Vec<ViolationKind>, Failure> {
    let Some(kinds) = kinds else { return Ok(ViolationKind::ALL.to_vec()) };
    kinds
        .iter()
        .map(|k| ViolationKind::parse(k.trim()).ok_or_else(|| Failure::usage(format!("--kinds: unknown kind {k:?}"))))
        .collect()
}

fn scan(path: &Path, disk: Option<Vec<String>>, kinds: Option<Vec<String>>) -> Result<u8, Failure> {
    let kinds = parse_kinds(kinds)?;
    let center = match disk.as_deref() {
        Some([x, y]) => Some(Point::new(rational(x, "--disk")?, rational(y, "--disk")?)),
        Some(_) => return Err(Failure::usage("--disk: expected two coordinates")),
        None => None,
    };
    let map = load_map(path)?;
    match center {
        Some(c) => {
            let mut a = disk_analysis(&map, &c);
            if let DiskOutcome::Violations(vs) = &mut a.outcome {
                vs.retain(|v| kinds.contains(&v.kind));
            }
            emit(&io::disk_analysis_value(&a));
            Ok(match &a.outcome {
                DiskOutcome::Violations(vs) if vs.is_empty() => OK,
                DiskOutcome::Violations(_) => VIOLATIONS,
                DiskOutcome::HypothesisFailure { .. } => HYPOTHESIS,
            })
        }
        None => {
            let vs = scan_all(&map, &kinds);
            emit(&io::violations_value(&vs));
            Ok(if vs.iter().any(|v| !v.informational) { VIOLATIONS } else { OK })
        }
    }
}

fn generate(args: GenerateArgs) -> Result<u8, Failure> {
    let width = rational(&args.width, "--width")?;
    let height = rational(&args.height, "--height")?;
    let kind = match args.kind {
        GenerateKind::Hex7 { d } => CorpusKind::Hex7 { d: rational(&d, "--d")? },
        GenerateKind::Hex6 { d } => CorpusKind::Hex6Merged { d: rational(&d, "--d")? },
        GenerateKind::Stripes { k, stripe } => CorpusKind::Stripes { k, width: rational(&stripe, "--stripe")? },
        GenerateKind::Grid { k, cell } => CorpusKind::Grid { k, cell: rational(&cell, "--cell")? },
        GenerateKind::Crafted { name } => CorpusKind::Crafted(name),
        GenerateKind::Random { regions, k } => {
            if regions == 0 || k == 0 {
                return Err(Failure::usage("random: --regions and --k must be positive"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let map = corpus::random_map(&mut rng, regions, k);
            write_or_print(&io::map_to_json(&map), &args.output)?;
            return Ok(OK);
        }
    };
    let map = corpus::generate(&CorpusSpec { kind, width, height }).map_err(|e| Failure::usage(e.to_string()))?;
    write_or_print(&io::map_to_json(&map), &args.output)?;
    Ok(OK)
}

fn parse_circle(s: &str) -> Result<Point, Failure> {
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [x, y] => Ok(Point::new(rational(x, "--circle")?, rational(y, "--circle")?)),
        _ => Err(Failure::usage(format!("--circle: expected x,y, got {s:?}"))),
    }
}

fn render_cmd(
    path: &Path,
    layers: &[String],
    scale: f64,
    circles: &[String],
    curves: &[PathBuf],
    with_scan: bool,
    output: &Option<PathBuf>,
) -> Result<u8, Failure> {
    let layers = layers
        .iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Layer::parse(l.trim()).ok_or_else(|| Failure::usage(format!("--layers: unknown layer {l:?}"))))
        .collect::<Result<BTreeSet<_>, _>>()?;
    let mut spec = RenderSpec::new(layers, scale).map_err(|e| Failure::usage(format!("--scale: {e}")))?;
    spec.unit_circles = circles.iter().map(|c| parse_circle(c)).collect::<Result<_, _>>()?;
    let map = load_map(path)?;
    spec.curves = curves.iter().map(|c| load_curve(c)).collect::<Result<_, _>>()?;
    if with_scan {
        spec.violations = scan_all(&map, &ViolationKind::ALL);
    }
    write_or_print(&render(&map, &spec), output)?;
    Ok(OK)
}
