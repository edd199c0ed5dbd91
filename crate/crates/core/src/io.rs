//! JSON encodings of maps, circle colourings, curves and reports.
//!
//! Rationals are written as integer pairs in lowest terms. Integers that fit
//! in `i64` are JSON numbers, larger ones decimal strings; both are accepted
//! on input.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::circlecolor::{ArcColoring, CircleError};
use crate::curves::{CurveError, TriColoredCurve};
use crate::geom::{GeomError, Point, Polygon, Scalar};
use crate::planemap::{build_map_with_unbounded, ColorId, ConditionReport, MapError, PlanarMap};
use crate::properness::{OracleReport, PairWitness, PropernessReport};
use crate::scanner::{DiskAnalysis, DiskOutcome, Violation};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {msg}")]
    Format { path: String, msg: String },
    #[error("{path}: {source}")]
    Polygon { path: String, source: GeomError },
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Circle(#[from] CircleError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

fn bad(path: &str, msg: impl Into<String>) -> IoError {
    IoError::Format { path: path.to_string(), msg: msg.into() }
}

pub fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

fn parse_int(v: &Value, path: &str) -> Result<BigInt, IoError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(i.into())
            } else if let Some(u) = n.as_u64() {
                Ok(u.into())
            } else {
                Err(bad(path, "expected an integer"))
            }
        }
        Value::String(s) => s.trim().parse().map_err(|_| bad(path, format!("not an integer: {s:?}"))),
        _ => Err(bad(path, "expected an integer")),
    }
}

fn parse_ratio(num: &Value, den: &Value, path: &str) -> Result<Scalar, IoError> {
    let (n, d) = (parse_int(num, path)?, parse_int(den, path)?);
    if d.is_zero() {
        return Err(bad(path, "zero denominator"));
    }
    Ok(Scalar::new(n, d))
}

pub fn scalar_value(s: &Scalar) -> Value {
    json!([int_value(s.numer()), int_value(s.denom())])
}

pub fn parse_scalar(v: &Value, path: &str) -> Result<Scalar, IoError> {
    match v.as_array().map(Vec::as_slice) {
        Some([n, d]) => parse_ratio(n, d, path),
        _ => Err(bad(path, "expected [num, den]")),
    }
}

pub fn point_value(p: &Point) -> Value {
    json!([int_value(p.x.numer()), int_value(p.x.denom()), int_value(p.y.numer()), int_value(p.y.denom())])
}

pub fn parse_point(v: &Value, path: &str) -> Result<Point, IoError> {
    match v.as_array().map(Vec::as_slice) {
        Some([xn, xd, yn, yd]) => Ok(Point::new(parse_ratio(xn, xd, path)?, parse_ratio(yn, yd, path)?)),
        _ => Err(bad(path, "expected [xnum, xden, ynum, yden]")),
    }
}

fn polygon_value(p: &Polygon) -> Value {
    Value::Array(p.vertices().iter().map(point_value).collect())
}

fn parse_polygon(v: &Value, path: &str) -> Result<Polygon, IoError> {
    let arr = v.as_array().ok_or_else(|| bad(path, "expected an array of points"))?;
    let pts = arr
        .iter()
        .enumerate()
        .map(|(i, p)| parse_point(p, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Polygon::new_any_orientation(pts).map_err(|source| IoError::Polygon { path: path.to_string(), source })
}

fn field<'a>(obj: &'a Value, key: &str, path: &str) -> Result<&'a Value, IoError> {
    obj.get(key).ok_or_else(|| bad(path, format!("missing field {key:?}")))
}

fn parse_color(v: &Value, path: &str) -> Result<ColorId, IoError> {
    v.as_u64()
        .and_then(|c| ColorId::try_from(c).ok())
        .ok_or_else(|| bad(path, "expected a colour index"))
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialise");
    s.push('\n');
    s
}

pub fn map_value(map: &PlanarMap) -> Value {
    let regions: Vec<Value> = map
        .regions()
        .iter()
        .map(|r| json!({"color": r.color, "poly": polygon_value(&r.poly)}))
        .collect();
    let mut obj = Map::new();
    obj.insert("k".into(), json!(map.k()));
    obj.insert("window".into(), polygon_value(map.window()));
    obj.insert("regions".into(), Value::Array(regions));
    if let Some(c) = map.unbounded_color() {
        obj.insert("unbounded".into(), json!(c));
    }
    Value::Object(obj)
}

pub fn map_to_json(map: &PlanarMap) -> String {
    to_pretty(&map_value(map))
}

pub fn map_from_value(v: &Value) -> Result<PlanarMap, IoError> {
    let k = parse_color(field(v, "k", "$")?, "$.k")?;
    let window = parse_polygon(field(v, "window", "$")?, "$.window")?;
    let regions = field(v, "regions", "$")?.as_array().ok_or_else(|| bad("$.regions", "expected an array"))?;
    let mut parsed = Vec::with_capacity(regions.len());
    for (i, r) in regions.iter().enumerate() {
        let path = format!("$.regions[{i}]");
        let color = parse_color(field(r, "color", &path)?, &format!("{path}.color"))?;
        let poly = parse_polygon(field(r, "poly", &path)?, &format!("{path}.poly"))?;
        parsed.push((poly, color));
    }
    let unbounded = match v.get("unbounded") {
        None | Some(Value::Null) => None,
        Some(c) => Some(parse_color(c, "$.unbounded")?),
    };
    Ok(build_map_with_unbounded(parsed, window, k, unbounded)?)
}

pub fn map_from_json(s: &str) -> Result<PlanarMap, IoError> {
    map_from_value(&serde_json::from_str(s)?)
}

pub fn coloring_value(c: &ArcColoring) -> Value {
    json!({
        "breakpoints": c.breakpoints().iter().map(scalar_value).collect::<Vec<_>>(),
        "colors": c.colors(),
    })
}

pub fn coloring_to_json(c: &ArcColoring) -> String {
    to_pretty(&coloring_value(c))
}

pub fn coloring_from_value(v: &Value) -> Result<ArcColoring, IoError> {
    let bps = field(v, "breakpoints", "$")?.as_array().ok_or_else(|| bad("$.breakpoints", "expected an array"))?;
    let bps = bps
        .iter()
        .enumerate()
        .map(|(i, b)| parse_scalar(b, &format!("$.breakpoints[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let cols = field(v, "colors", "$")?.as_array().ok_or_else(|| bad("$.colors", "expected an array"))?;
    let cols = cols
        .iter()
        .enumerate()
        .map(|(i, c)| parse_color(c, &format!("$.colors[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ArcColoring::new(bps, cols)?)
}

pub fn coloring_from_json(s: &str) -> Result<ArcColoring, IoError> {
    coloring_from_value(&serde_json::from_str(s)?)
}

pub fn curve_value(c: &TriColoredCurve) -> Value {
    json!({"points": c.points, "breaks": c.breaks, "colors": c.colors, "closed": c.closed})
}

pub fn curve_to_json(c: &TriColoredCurve) -> String {
    to_pretty(&curve_value(c))
}

fn parse_f64(v: &Value, path: &str) -> Result<f64, IoError> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| bad(path, "expected a finite number"))
}

pub fn curve_from_value(v: &Value) -> Result<TriColoredCurve, IoError> {
    let pts = field(v, "points", "$")?.as_array().ok_or_else(|| bad("$.points", "expected an array"))?;
    let mut points = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        let path = format!("$.points[{i}]");
        match p.as_array().map(Vec::as_slice) {
            Some([x, y]) => points.push([parse_f64(x, &path)?, parse_f64(y, &path)?]),
            _ => return Err(bad(&path, "expected [x, y]")),
        }
    }
    let breaks = match v.get("breaks") {
        None => vec![],
        Some(b) => b
            .as_array()
            .ok_or_else(|| bad("$.breaks", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, x)| {
                x.as_u64().map(|x| x as usize).ok_or_else(|| bad(&format!("$.breaks[{i}]"), "expected an index"))
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    let colors = match v.get("colors") {
        None => vec![],
        Some(c) => c
            .as_array()
            .ok_or_else(|| bad("$.colors", "expected an array"))?
            .iter()
            .enumerate()
            .map(|(i, x)| parse_color(x, &format!("$.colors[{i}]")))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let closed = match v.get("closed") {
        None => false,
        Some(c) => c.as_bool().ok_or_else(|| bad("$.closed", "expected a boolean"))?,
    };
    Ok(TriColoredCurve::new(points, breaks, colors, closed)?)
}

pub fn curve_from_json(s: &str) -> Result<TriColoredCurve, IoError> {
    curve_from_value(&serde_json::from_str(s)?)
}

fn points_value(ps: &[Point]) -> Value {
    Value::Array(ps.iter().map(point_value).collect())
}

pub fn violation_value(v: &Violation) -> Value {
    json!({
        "kind": v.kind.name(),
        "tag": v.kind.short(),
        "points": points_value(&v.points),
        "multicolors": v.multicolors,
        "segments": v.segments.iter().map(|(a, b)| json!([point_value(a), point_value(b)])).collect::<Vec<_>>(),
        "dist_sq": v.dist_sq.as_ref().map(scalar_value),
        "informational": v.informational,
    })
}

pub fn violations_value(vs: &[Violation]) -> Value {
    json!({"violations": vs.iter().map(violation_value).collect::<Vec<_>>()})
}

pub fn disk_analysis_value(a: &DiskAnalysis) -> Value {
    let outcome = match &a.outcome {
        DiskOutcome::Violations(vs) => json!({
            "result": "violations",
            "violations": vs.iter().map(violation_value).collect::<Vec<_>>(),
        }),
        DiskOutcome::HypothesisFailure { step, points, regions, note } => json!({
            "result": "hypothesis-failure",
            "step": step.name(),
            "points": points_value(points),
            "regions": regions,
            "note": note,
        }),
    };
    json!({
        "center": point_value(&a.center),
        "u": a.u.as_ref().map(point_value),
        "census": a.census.iter().map(|(p, m)| json!({"point": point_value(p), "multicolor": m})).collect::<Vec<_>>(),
        "pseudo_coloring": a.pseudo.as_ref().map(|p| coloring_value(&p.coloring)),
        "cyclic": a.cyclic.as_ref().map(coloring_value),
        "traced": a.traced.iter().map(|t| json!({
            "angle": scalar_value(&t.angle),
            "pair": [t.pair.0, t.pair.1],
            "path": points_value(&t.path),
            "terminal": t.terminal.as_ref().map(point_value),
        })).collect::<Vec<_>>(),
        "outcome": outcome,
    })
}

fn witness_value(w: &PairWitness) -> Value {
    json!({"a": w.a, "b": w.b, "min_sq": scalar_value(&w.min_sq), "max_sq": scalar_value(&w.max_sq)})
}

pub fn properness_value(r: &PropernessReport, eps: &Scalar) -> Value {
    json!({
        "eps": scalar_value(eps),
        "proper": r.proper,
        "violations": r.violations.iter().map(witness_value).collect::<Vec<_>>(),
        "critical": r.critical.iter().map(witness_value).collect::<Vec<_>>(),
    })
}

pub fn oracle_value(r: &OracleReport, seed: u64) -> Value {
    json!({
        "seed": seed,
        "samples": r.samples,
        "proper": r.proper,
        "hits": r.hits.iter().map(|h| json!({
            "a": h.a,
            "b": h.b,
            "x": point_value(&h.x),
            "y": point_value(&h.y),
            "dist_sq": scalar_value(&h.dist_sq),
        })).collect::<Vec<_>>(),
    })
}

pub fn conditions_value(r: &ConditionReport) -> Value {
    let mut obj = Map::new();
    for (name, c) in r.entries() {
        obj.insert(
            name.to_string(),
            json!({"holds": c.holds, "witnesses": points_value(&c.witnesses), "note": c.note}),
        );
    }
    json!({"all_hold": r.all_hold(), "conditions": Value::Object(obj)})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{crafted, CRAFTED};
    use crate::geom::rat;

    #[test]
    fn crafted_maps_round_trip() {
        for name in CRAFTED {
            let m = crafted(name).unwrap();
            let s = map_to_json(&m);
            let back = map_from_json(&s).unwrap();
            assert_eq!(back, m, "{name}");
            assert_eq!(map_to_json(&back), s);
        }
    }

    #[test]
    fn large_integers_become_strings() {
        let big: BigInt = BigInt::from(i64::MAX) * 4;
        assert_eq!(int_value(&big), json!(big.to_string()));
        assert_eq!(int_value(&BigInt::from(-7)), json!(-7));
        assert_eq!(parse_int(&json!(big.to_string()), "$").unwrap(), big);
        assert_eq!(parse_int(&json!(u64::MAX), "$").unwrap(), BigInt::from(u64::MAX));
    }

    #[test]
    fn rationals_are_written_in_lowest_terms() {
        let s = parse_scalar(&json!([6, -8]), "$").unwrap();
        assert_eq!(s, rat(-3, 4));
        assert_eq!(scalar_value(&s), json!([-3, 4]));
        assert!(parse_scalar(&json!([1, 0]), "$.x").is_err());
    }

    #[test]
    fn clockwise_polygons_are_accepted() {
        let s = r#"{"k": 2, "window": [[0,1,0,1],[0,1,1,1],[1,1,1,1],[1,1,0,1]],
            "regions": [{"color": 1, "poly": [[0,1,0,1],[1,1,0,1],[1,1,1,1],[0,1,1,1]]}]}"#;
        let m = map_from_json(s).unwrap();
        assert_eq!(m.regions().len(), 1);
    }

    #[test]
    fn errors_carry_a_location() {
        let s = r#"{"k": 2, "window": [[0,1,0,1],[4,1,0,1],[4,1,4,1]], "regions": [{"color": 1, "poly": [[0,1,0,1]]}]}"#;
        let e = map_from_json(s).unwrap_err().to_string();
        assert!(e.starts_with("$.regions[0].poly"), "{e}");
        let e = map_from_json(r#"{"k": 2, "window": [[0,1]]}"#).unwrap_err().to_string();
        assert!(e.starts_with("$.window[0]"), "{e}");
    }

    #[test]
    fn coloring_round_trip() {
        let c = ArcColoring::new(vec![rat(0, 1), rat(1, 3), rat(2, 3)], vec![1, 2, 3]).unwrap();
        let s = coloring_to_json(&c);
        assert_eq!(coloring_from_json(&s).unwrap(), c);
        assert!(coloring_from_json(r#"{"breakpoints": [[1,2]], "colors": [1, 2]}"#).is_err());
    }

    #[test]
    fn curve_round_trip() {
        let c = TriColoredCurve::new(vec![[0.0, 0.0], [0.5, 0.1], [1.0, 0.0]], vec![1], vec![1, 2], false).unwrap();
        let s = curve_to_json(&c);
        assert_eq!(curve_from_json(&s).unwrap(), c);
        let g = curve_from_json(r#"{"points": [[0, 0], [1, 1]]}"#).unwrap();
        assert!(g.colors.is_empty() && !g.closed);
    }
}
