//! Scenario files, query evaluation, and SVG figures.
//!
//! The file format is JSON with a mandatory `version`. Strict parsing
//! rejects unknown fields so golden files cannot drift silently; lenient
//! parsing ignores them. Validation reports every problem it finds, each
//! with a path into the document.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::completion_circle::universal_circle_finite;
use crate::dynamics::{
    classify_fixed_points, closed_orbit_criterion, induced_circle_map, induced_end_map,
    CertReason, FixedPointKind, PlaneMap, Verdict,
};
use crate::error::{Error, ValidationIssue};
use crate::plane_model::{Cell, Continuum, Direction, GridArc, Ray, Scenario};
use crate::triad_order::{detect_separation, ends_order};
use crate::completion_circle::CirclePoint;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub version: u32,
    pub continua: Vec<ContinuumSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub queries: Vec<QuerySpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuumSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub core: Vec<[i64; 2]>,
    pub rays: Vec<RaySpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RaySpec {
    pub path: Vec<[i64; 2]>,
    pub direction: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapSpec {
    Translation { shift: [i64; 2] },
    Rotation { quarter_turns: u8, #[serde(default)] center: [i64; 2] },
}

impl MapSpec {
    pub fn to_plane_map(&self) -> PlaneMap {
        match self {
            MapSpec::Translation { shift } => PlaneMap::translation(shift[0], shift[1]),
            MapSpec::Rotation {
                quarter_turns,
                center,
            } => PlaneMap::rotation(*quarter_turns, Cell::new(center[0], center[1])),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuerySpec {
    pub name: String,
    pub op: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub args: BTreeMap<String, Value>,
}

fn parse_direction(s: &str) -> Option<Direction> {
    match s {
        "+x" => Some(Direction::PosX),
        "-x" => Some(Direction::NegX),
        "+y" => Some(Direction::PosY),
        "-y" => Some(Direction::NegY),
        _ => None,
    }
}

fn direction_str(d: Direction) -> &'static str {
    match d {
        Direction::PosX => "+x",
        Direction::NegX => "-x",
        Direction::PosY => "+y",
        Direction::NegY => "-y",
    }
}

/// Check a parsed JSON tree against the known field names, recording an
/// issue for every unknown key. Used only in strict mode.
fn check_unknown(value: &Value, issues: &mut Vec<ValidationIssue>) {
    let object_keys = |v: &Value, path: &str, allowed: &[&str], issues: &mut Vec<ValidationIssue>| {
        if let Value::Object(m) = v {
            for k in m.keys() {
                if !allowed.contains(&k.as_str()) {
                    issues.push(ValidationIssue {
                        path: format!("{path}.{k}"),
                        message: "unknown field".into(),
                    });
                }
            }
        }
    };
    object_keys(value, "$", &["version", "continua", "maps", "queries"], issues);
    if let Some(Value::Array(cs)) = value.get("continua") {
        for (i, c) in cs.iter().enumerate() {
            let p = format!("$.continua[{i}]");
            object_keys(c, &p, &["id", "core", "rays"], issues);
            if let Some(Value::Array(rs)) = c.get("rays") {
                for (j, r) in rs.iter().enumerate() {
                    object_keys(r, &format!("{p}.rays[{j}]"), &["path", "direction"], issues);
                }
            }
        }
    }
    if let Some(Value::Array(ms)) = value.get("maps") {
        for (i, m) in ms.iter().enumerate() {
            object_keys(
                m,
                &format!("$.maps[{i}]"),
                &["kind", "shift", "quarter_turns", "center"],
                issues,
            );
        }
    }
    if let Some(Value::Array(qs)) = value.get("queries") {
        for (i, q) in qs.iter().enumerate() {
            object_keys(q, &format!("$.queries[{i}]"), &["name", "op", "args"], issues);
        }
    }
}

pub fn parse_file(text: &str, strict: bool) -> Result<ScenarioFile, Error> {
    let raw: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut issues = Vec::new();
    if strict {
        check_unknown(&raw, &mut issues);
    }
    if raw.get("version").is_none() {
        issues.push(ValidationIssue {
            path: "$.version".into(),
            message: "mandatory field is missing".into(),
        });
    }
    if !issues.is_empty() {
        return Err(Error::Validation(issues));
    }
    let file: ScenarioFile =
        serde_json::from_value(raw).map_err(|e| Error::Parse(e.to_string()))?;
    if file.version != FORMAT_VERSION {
        return Err(Error::Validation(vec![ValidationIssue {
            path: "$.version".into(),
            message: format!("unsupported version {} (expected {FORMAT_VERSION})", file.version),
        }]));
    }
    Ok(file)
}

/// Build the scenario described by a file, collecting every validation
/// problem instead of stopping at the first.
pub fn build_scenario(file: &ScenarioFile) -> Result<Scenario, Error> {
    let mut issues = Vec::new();
    let mut continua = Vec::new();
    for (i, cs) in file.continua.iter().enumerate() {
        let mut rays = Vec::new();
        for (j, rs) in cs.rays.iter().enumerate() {
            match parse_direction(&rs.direction) {
                Some(d) => rays.push(Ray {
                    path: rs.path.iter().map(|p| Cell::new(p[0], p[1])).collect(),
                    direction: d,
                }),
                None => issues.push(ValidationIssue {
                    path: format!("$.continua[{i}].rays[{j}].direction"),
                    message: format!("unknown direction `{}`", rs.direction),
                }),
            }
        }
        let k = Continuum {
            id: cs.id.clone(),
            core: cs.core.iter().map(|p| Cell::new(p[0], p[1])).collect(),
            rays,
        };
        if let Err(e) = k.validate() {
            issues.push(ValidationIssue {
                path: format!("$.continua[{i}]"),
                message: e.to_string(),
            });
        }
        continua.push(k);
    }
    if !issues.is_empty() {
        return Err(Error::Validation(issues));
    }
    Scenario::new(continua).map_err(|e| {
        Error::Validation(vec![ValidationIssue {
            path: "$.continua".into(),
            message: e.to_string(),
        }])
    })
}

pub fn parse_scenario(text: &str, strict: bool) -> Result<Scenario, Error> {
    build_scenario(&parse_file(text, strict)?)
}

pub fn to_file(scenario: &Scenario) -> ScenarioFile {
    ScenarioFile {
        version: FORMAT_VERSION,
        continua: scenario
            .continua()
            .iter()
            .map(|k| ContinuumSpec {
                id: k.id.clone(),
                core: k.core.iter().map(|c| [c.x, c.y]).collect(),
                rays: k
                    .rays
                    .iter()
                    .map(|r| RaySpec {
                        path: r.path.iter().map(|c| [c.x, c.y]).collect(),
                        direction: direction_str(r.direction).to_string(),
                    })
                    .collect(),
            })
            .collect(),
        maps: Vec::new(),
        queries: Vec::new(),
    }
}

fn angle_str(p: &CirclePoint) -> String {
    p.to_string()
}

fn verdict_str(v: &Verdict) -> &'static str {
    match v {
        Verdict::Certified(CertReason::NoFixedPoints) => "certified:no-fixed-points",
        Verdict::Certified(CertReason::TwoIndifferent) => "certified:two-indifferent",
        Verdict::Certified(CertReason::MoreThanTwo) => "certified:more-than-two",
        Verdict::MoebiusLikeConsistent => "moebius-like-consistent",
    }
}

fn kind_str(k: FixedPointKind) -> &'static str {
    match k {
        FixedPointKind::Attracting => "attracting",
        FixedPointKind::Repelling => "repelling",
        FixedPointKind::Indifferent => "indifferent",
    }
}

fn ok(name: &str, value: Value, witnesses: Value) -> Value {
    json!({"query": name, "status": "ok", "value": value, "witnesses": witnesses})
}

fn err(name: &str, e: &Error) -> Value {
    json!({"query": name, "status": "error", "value": e.to_string(), "witnesses": Value::Null})
}

fn arg_str<'a>(q: &'a QuerySpec, key: &str) -> Result<&'a str, Error> {
    q.args
        .get(key)
        .and_then(|v| v.as_str())
        .ok_or_else(|| Error::Parse(format!("query `{}` needs string argument `{key}`", q.name)))
}

fn eval_query(q: &QuerySpec, file: &ScenarioFile, scenario: &Scenario) -> Value {
    let r = eval_query_inner(q, file, scenario);
    match r {
        Ok(v) => v,
        Err(e) => err(&q.name, &e),
    }
}

fn eval_query_inner(
    q: &QuerySpec,
    file: &ScenarioFile,
    scenario: &Scenario,
) -> Result<Value, Error> {
    match q.op.as_str() {
        "ends" => {
            let id = arg_str(q, "id")?;
            let sys = ends_order(scenario)?;
            let names: Vec<String> = sys.ends_of(id).iter().map(|e| e.to_string()).collect();
            if names.is_empty() {
                return Err(Error::InsufficientEnds(format!("no continuum `{id}`")));
            }
            Ok(ok(
                &q.name,
                json!({"r0": scenario.r0(), "ends": names}),
                Value::Null,
            ))
        }
        "order" => {
            let sys = ends_order(scenario)?;
            let cycle: Vec<String> = sys.order.to_cycle().iter().map(|e| e.to_string()).collect();
            let axioms = sys.order.verify_axioms().is_ok();
            Ok(ok(
                &q.name,
                json!({"cycle": cycle, "axioms_ok": axioms}),
                Value::Null,
            ))
        }
        "separates" => {
            let (k, l, m) = (arg_str(q, "k")?, arg_str(q, "l")?, arg_str(q, "m")?);
            let find = |id: &str| -> Result<&Continuum, Error> {
                scenario
                    .continua()
                    .iter()
                    .find(|c| c.id == id)
                    .ok_or_else(|| Error::InvalidScenario(format!("no continuum `{id}`")))
            };
            let report = detect_separation(find(k)?, find(l)?, find(m)?)?;
            let witnesses = match &report.witnesses {
                Some((a, b)) => json!([a.to_string(), b.to_string()]),
                None => Value::Null,
            };
            Ok(ok(
                &q.name,
                json!({"geometric": report.geometric, "order_theoretic": report.order_theoretic}),
                witnesses,
            ))
        }
        "circle" => {
            let sys = ends_order(scenario)?;
            let uc = universal_circle_finite(&sys.order)?;
            let marks: BTreeMap<String, String> = uc
                .marked
                .iter()
                .map(|(e, a)| (e.to_string(), angle_str(a)))
                .collect();
            Ok(ok(&q.name, json!({"marks": marks}), Value::Null))
        }
        "compactify" => {
            let id = arg_str(q, "id")?;
            let sys = ends_order(scenario)?;
            let trace = crate::compactification::boundary_trace(&sys, id)?;
            if trace.is_empty() {
                return Err(Error::InsufficientEnds(format!("no continuum `{id}`")));
            }
            let marks: BTreeMap<String, String> = trace
                .iter()
                .map(|(e, a)| (e.to_string(), angle_str(a)))
                .collect();
            Ok(ok(&q.name, json!({"trace": marks}), Value::Null))
        }
        "dynamics" => {
            let idx = q
                .args
                .get("map")
                .and_then(|v| v.as_u64())
                .ok_or_else(|| Error::Parse(format!("query `{}` needs integer `map`", q.name)))?
                as usize;
            let spec = file
                .maps
                .get(idx)
                .ok_or_else(|| Error::Parse(format!("no map with index {idx}")))?;
            let f = spec.to_plane_map();
            let sys = ends_order(scenario)?;
            let perm = induced_end_map(&f, &sys)?;
            let uc = universal_circle_finite(&sys.order)?;
            let m = induced_circle_map(&perm, &uc.marked)?;
            let report = classify_fixed_points(&m);
            let verdict = closed_orbit_criterion(&report);
            let fixed: Vec<Value> = report
                .fixed
                .iter()
                .map(|(p, k)| json!([angle_str(p), kind_str(*k)]))
                .collect();
            let arcs: Vec<Value> = report
                .fixed_arcs
                .iter()
                .map(|(a, b)| json!([angle_str(a), angle_str(b)]))
                .collect();
            Ok(ok(
                &q.name,
                json!({
                    "verdict": verdict_str(&verdict),
                    "fixed": fixed,
                    "fixed_arcs": arcs,
                    "none_flag": report.none_flag,
                }),
                Value::Null,
            ))
        }
        other => Err(Error::Parse(format!("unknown query op `{other}`"))),
    }
}

/// Default query set for an operation when the file lists none of its own.
fn default_queries(op: &str, file: &ScenarioFile, scenario: &Scenario) -> Vec<QuerySpec> {
    let mut qs = Vec::new();
    let arg = |v: &str| Value::String(v.to_string());
    match op {
        "ends" | "compactify" => {
            for k in scenario.continua() {
                qs.push(QuerySpec {
                    name: format!("{op}/{}", k.id),
                    op: op.to_string(),
                    args: BTreeMap::from([("id".to_string(), arg(&k.id))]),
                });
            }
        }
        "order" | "circle" => qs.push(QuerySpec {
            name: op.to_string(),
            op: op.to_string(),
            args: BTreeMap::new(),
        }),
        "separates" => {
            let ids: Vec<&str> = scenario.continua().iter().map(|c| c.id.as_str()).collect();
            for s in &ids {
                for l in &ids {
                    for m in &ids {
                        if s != l && s != m && l < m {
                            qs.push(QuerySpec {
                                name: format!("separates/{s}|{l}|{m}"),
                                op: "separates".to_string(),
                                args: BTreeMap::from([
                                    ("k".to_string(), arg(s)),
                                    ("l".to_string(), arg(l)),
                                    ("m".to_string(), arg(m)),
                                ]),
                            });
                        }
                    }
                }
            }
        }
        "dynamics" => {
            for i in 0..file.maps.len() {
                qs.push(QuerySpec {
                    name: format!("dynamics/{i}"),
                    op: "dynamics".to_string(),
                    args: BTreeMap::from([("map".to_string(), json!(i))]),
                });
            }
        }
        _ => {}
    }
    qs
}

/// Evaluate every query of one operation and return the results as a JSON
/// array sorted by query name.
pub fn run_op(op: &str, file: &ScenarioFile, scenario: &Scenario) -> Value {
    let mut queries: Vec<QuerySpec> = file
        .queries
        .iter()
        .filter(|q| q.op == op)
        .cloned()
        .collect();
    if queries.is_empty() {
        queries = default_queries(op, file, scenario);
    }
    let mut results: Vec<Value> = queries
        .iter()
        .map(|q| eval_query(q, file, scenario))
        .collect();
    results.sort_by(|a, b| a["query"].as_str().cmp(&b["query"].as_str()));
    Value::Array(results)
}

/// Extra layers drawn on top of the base scenario figure.
#[derive(Debug, Clone, Default)]
pub struct Overlays {
    pub arcs: Vec<GridArc>,
    pub regions: Vec<(String, Vec<Cell>)>,
    /// Named marks on the boundary circle, drawn around the frame.
    pub circle_marks: Vec<(String, CirclePoint)>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Deterministic SVG rendering: doubled integer coordinates for the grid
/// (each cell is a 2x2 square), stable element order and ids, no
/// timestamps. The vertical axis is flipped for display.
pub fn render_svg(scenario: &Scenario, overlays: &Overlays) -> String {
    let b = scenario.search_radius();
    let lo = -(2 * b + 2);
    let size = 4 * b + 4;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{lo} {lo} {size} {size}\">\n"
    ));
    out.push_str(&format!(
        "  <rect id=\"frame\" x=\"{x}\" y=\"{x}\" width=\"{w}\" height=\"{w}\" fill=\"none\" stroke=\"#000\" stroke-width=\"0.2\"/>\n",
        x = -(2 * b + 1),
        w = 4 * b + 2,
    ));
    let cell_rect = |id: &str, c: &Cell, fill: &str| {
        format!(
            "    <rect id=\"{id}\" x=\"{}\" y=\"{}\" width=\"2\" height=\"2\" fill=\"{fill}\"/>\n",
            2 * c.x - 1,
            -2 * c.y - 1,
        )
    };
    for (i, k) in scenario.continua().iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        out.push_str(&format!("  <g id=\"continuum-{}\">\n", k.id));
        let mut cells: Vec<Cell> = Vec::new();
        for c in &k.core {
            cells.push(*c);
        }
        for r in &k.rays {
            cells.extend(r.path.iter().copied());
            cells.extend(r.tail_line().cells_within(b));
        }
        cells.sort();
        cells.dedup();
        for (j, c) in cells.iter().enumerate() {
            out.push_str(&cell_rect(&format!("{}-cell-{j}", k.id), c, color));
        }
        out.push_str("  </g>\n");
    }
    if !overlays.regions.is_empty() {
        out.push_str("  <g id=\"regions\" fill-opacity=\"0.3\">\n");
        for (label, cells) in &overlays.regions {
            let mut sorted = cells.clone();
            sorted.sort();
            sorted.dedup();
            for (j, c) in sorted.iter().enumerate() {
                out.push_str(&cell_rect(&format!("region-{label}-{j}"), c, "#999"));
            }
        }
        out.push_str("  </g>\n");
    }
    if !overlays.arcs.is_empty() {
        out.push_str("  <g id=\"arcs\" fill=\"none\" stroke=\"#000\" stroke-width=\"0.6\">\n");
        for (i, arc) in overlays.arcs.iter().enumerate() {
            let pts: Vec<String> = arc
                .cells
                .iter()
                .map(|c| format!("{},{}", 2 * c.x, -2 * c.y))
                .collect();
            out.push_str(&format!(
                "    <polyline id=\"arc-{i}\" points=\"{}\"/>\n",
                pts.join(" ")
            ));
        }
        out.push_str("  </g>\n");
    }
    if !overlays.circle_marks.is_empty() {
        let r = (2 * b + 2) as f64;
        out.push_str("  <g id=\"circle\">\n");
        out.push_str(&format!(
            "    <circle id=\"boundary\" cx=\"0\" cy=\"0\" r=\"{r}\" fill=\"none\" stroke=\"#000\" stroke-width=\"0.2\"/>\n"
        ));
        let mut marks = overlays.circle_marks.clone();
        marks.sort_by(|a, b| a.0.cmp(&b.0));
        for (name, p) in &marks {
            // Angle 0 points right; the circle runs counterclockwise on
            // screen because the vertical flip cancels the flip of the
            // mathematical orientation.
            let theta = rational_to_f64(p) * std::f64::consts::TAU;
            let (x, y) = (r * theta.cos(), -r * theta.sin());
            out.push_str(&format!(
                "    <circle id=\"mark-{name}\" cx=\"{x:.4}\" cy=\"{y:.4}\" r=\"1\" fill=\"#d62728\"/>\n"
            ));
            out.push_str(&format!(
                "    <text id=\"label-{name}\" x=\"{x:.4}\" y=\"{y:.4}\" font-size=\"3\">{name}</text>\n"
            ));
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn rational_to_f64(p: &CirclePoint) -> f64 {
    use num_traits::ToPrimitive;
    p.angle().to_f64().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "version": 1,
        "continua": [
            {"id": "k", "rays": [{"path": [[0,0]], "direction": "+x"}]}
        ]
    }"#;

    #[test]
    fn minimal_file_parses() {
        let s = parse_scenario(MINIMAL, true).unwrap();
        assert_eq!(s.continua().len(), 1);
        assert_eq!(s.r0(), 0);
    }

    #[test]
    fn strict_mode_rejects_unknown_fields() {
        let text = r#"{
            "version": 1,
            "continua": [
                {"id": "k", "color": "red", "rays": [{"path": [[0,0]], "direction": "+x"}]}
            ]
        }"#;
        let e = parse_scenario(text, true).unwrap_err();
        match e {
            Error::Validation(issues) => {
                assert_eq!(issues.len(), 1);
                assert_eq!(issues[0].path, "$.continua[0].color");
            }
            other => panic!("expected validation error, got {other}"),
        }
        assert!(parse_scenario(text, false).is_ok());
    }

    #[test]
    fn all_errors_are_reported_with_paths() {
        let text = r#"{
            "version": 1,
            "continua": [
                {"id": "a", "rays": [{"path": [[0,0]], "direction": "northwest"}]},
                {"id": "b", "rays": []}
            ]
        }"#;
        let e = parse_scenario(text, true).unwrap_err();
        match e {
            Error::Validation(issues) => {
                let paths: Vec<&str> = issues.iter().map(|i| i.path.as_str()).collect();
                assert!(paths.contains(&"$.continua[0].rays[0].direction"));
                assert!(paths.iter().any(|p| p.starts_with("$.continua[1]")));
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn missing_version_is_rejected() {
        let text = r#"{"continua": []}"#;
        assert!(matches!(
            parse_scenario(text, false),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn round_trip_preserves_the_scenario() {
        let s = parse_scenario(MINIMAL, true).unwrap();
        let text = serde_json::to_string(&to_file(&s)).unwrap();
        let again = parse_scenario(&text, true).unwrap();
        assert_eq!(s.continua(), again.continua());
        let text2 = serde_json::to_string(&to_file(&again)).unwrap();
        assert_eq!(text, text2);
    }

    #[test]
    fn svg_is_deterministic() {
        let text = r#"{
            "version": 1,
            "continua": [
                {"id": "a", "rays": [{"path": [[0,0]], "direction": "+x"}]},
                {"id": "b", "rays": [{"path": [[0,4]], "direction": "+y"}]},
                {"id": "c", "rays": [{"path": [[-4,0]], "direction": "-x"}]}
            ]
        }"#;
        let s = parse_scenario(text, true).unwrap();
        let sys = ends_order(&s).unwrap();
        let uc = universal_circle_finite(&sys.order).unwrap();
        let overlays = Overlays {
            circle_marks: uc
                .marked
                .iter()
                .map(|(e, p)| (e.to_string(), p.clone()))
                .collect(),
            ..Overlays::default()
        };
        let a = render_svg(&s, &overlays);
        let b = render_svg(&s, &overlays);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("continuum-a"));
    }

    #[test]
    fn query_results_are_sorted_by_name() {
        let text = r#"{
            "version": 1,
            "continua": [
                {"id": "a", "rays": [{"path": [[0,0]], "direction": "+x"}]},
                {"id": "b", "rays": [{"path": [[0,4]], "direction": "+y"}]},
                {"id": "c", "rays": [{"path": [[-4,0]], "direction": "-x"}]}
            ]
        }"#;
        let file = parse_file(text, true).unwrap();
        let s = build_scenario(&file).unwrap();
        let out = run_op("ends", &file, &s);
        let names: Vec<&str> = out
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v["query"].as_str().unwrap())
            .collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert!(out[0]["status"] == "ok");
    }
}
