//! Metric files in, reports out.
//!
//! A metric file is TOML:
//!
//! ```toml
//! schema = "curvlab-metric/1"
//! name = "som-raychaudhuri"
//! coordinates = ["t", "phi", "r", "z"]
//! parameters = ["a"]
//!
//! [assumptions]
//! a = "nonzero"
//!
//! [components]
//! "1,1" = "1"
//! "2,1" = "a*r^2"
//! "2,2" = "a^2*r^4 - r^2"
//! "3,3" = "-1"
//! "4,4" = "-1"
//! ```
//!
//! Keys of `components` are 1-based `"i,j"` with `i >= j`; omitted entries
//! are zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use curvlab_expr::{parse_expr, Assumption, BigRational, Expr, ParseError, SymbolTable, ZeroCertificate};
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::classify::{
    CheckOutcome, ClassifyConfig, DecompositionOutcome, PseudoOutcome, RelationResult, StructureReport,
};
use crate::curvature::CurvatureBundle;
use crate::metric::{MetricError, MetricSpec};
use crate::tensor::Tensor;
use crate::verify::TensorVerdict;

pub const METRIC_SCHEMA: &str = "curvlab-metric/1";
pub const REPORT_SCHEMA: &str = "curvlab-report/1";

#[derive(Debug, thiserror::Error)]
pub enum MetricFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("component \"{key}\": {source}")]
    Parse { key: String, source: ParseError },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFile {
    pub schema: String,
    pub name: String,
    pub coordinates: Vec<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    #[serde(default)]
    pub assumptions: BTreeMap<String, String>,
    #[serde(default)]
    pub components: BTreeMap<String, String>,
}

fn parse_key(key: &str, n: usize) -> Result<(usize, usize), MetricFileError> {
    let bad = || MetricFileError::Schema(format!("component key \"{key}\" must be \"i,j\" with 1 <= j <= i <= {n}"));
    let (i, j) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if j == 0 || j > i || i > n {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

impl MetricFile {
    pub fn from_toml(text: &str) -> Result<Self, MetricFileError> {
        let file: MetricFile = toml::from_str(text).map_err(|e| MetricFileError::Syntax(e.to_string()))?;
        if file.schema != METRIC_SCHEMA {
            return Err(MetricFileError::Schema(format!(
                "expected schema \"{METRIC_SCHEMA}\", found \"{}\"",
                file.schema
            )));
        }
        Ok(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain data serializes")
    }

    pub fn to_spec(&self) -> Result<MetricSpec, MetricFileError> {
        let mut table = SymbolTable::new(&self.coordinates, &self.parameters)
            .map_err(|e| MetricFileError::Schema(e.to_string()))?;
        for (name, a) in &self.assumptions {
            let a = Assumption::parse(a)
                .ok_or_else(|| MetricFileError::Schema(format!("unknown assumption \"{a}\" for `{name}`")))?;
            if !self.parameters.contains(name) {
                return Err(MetricFileError::Schema(format!("assumption on undeclared parameter `{name}`")));
            }
            table.assume(name, a).map_err(|e| MetricFileError::Schema(e.to_string()))?;
        }
        let n = self.coordinates.len();
        let mut entries = Vec::new();
        for (key, text) in &self.components {
            let ij = parse_key(key, n)?;
            let e = parse_expr(text, &table).map_err(|source| MetricFileError::Parse {
                key: key.clone(),
                source,
            })?;
            entries.push((ij, e));
        }
        Ok(MetricSpec::from_lower(table, entries)?)
    }

    pub fn from_spec(name: &str, spec: &MetricSpec) -> Self {
        let table = spec.symbols();
        let mut components = BTreeMap::new();
        for i in 0..spec.dimension() {
            for j in 0..=i {
                let e = spec.component(i, j);
                if !e.is_zero() {
                    components.insert(format!("{},{}", i + 1, j + 1), e.to_string());
                }
            }
        }
        MetricFile {
            schema: METRIC_SCHEMA.into(),
            name: name.into(),
            coordinates: table.coordinates().iter().map(|s| s.name().to_string()).collect(),
            parameters: table.parameters().iter().map(|s| s.name().to_string()).collect(),
            assumptions: table
                .assumptions()
                .iter()
                .map(|(s, a)| (s.name().to_string(), a.as_str().to_string()))
                .collect(),
            components,
        }
    }
}

/// Reads and validates a metric file.
pub fn load_metric_file(path: &Path) -> Result<(String, MetricSpec), MetricFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| MetricFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file = MetricFile::from_toml(&text)?;
    Ok((file.name.clone(), file.to_spec()?))
}

pub fn emit_metric_file(name: &str, spec: &MetricSpec) -> String {
    MetricFile::from_spec(name, spec).to_toml()
}

/// Subscript label: `1212`, or `1223,2` for a derivative slot.
pub fn index_label(idx: &[usize], derivative: bool) -> String {
    let mut s: String = idx.iter().map(|i| (i + 1).to_string()).collect();
    if derivative && s.len() > 1 {
        s.insert(s.len() - 1, ',');
    }
    s
}

/// Nonzero orbit representatives in lexicographic order.
pub fn component_table(t: &Tensor<Expr>) -> Vec<(Vec<usize>, Expr)> {
    t.symmetry()
        .orbits(t.dim(), t.order())
        .into_iter()
        .filter(|o| !o.vanishes)
        .map(|o| o.representative().to_vec())
        .filter_map(|idx| {
            let v = t.get(&idx);
            (!v.is_zero()).then(|| (idx, v.clone()))
        })
        .collect()
}

/// `R_1212 = -a^2*r^2` lines, or `all components zero`.
pub fn render_components(label: &str, t: &Tensor<Expr>, derivative: bool) -> String {
    if t.order() == 0 {
        return format!("{label} = {}\n", t.get(&[]));
    }
    let rows = component_table(t);
    if rows.is_empty() {
        return format!("{label}: all components zero\n");
    }
    let mut out = String::new();
    for (idx, v) in rows {
        let _ = writeln!(out, "{label}_{} = {v}", index_label(&idx, derivative));
    }
    out
}

fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn certificate_json(c: &ZeroCertificate) -> Value {
    match c {
        ZeroCertificate::ProvedZero => json!({"kind": "proved_zero"}),
        ZeroCertificate::ProbablyZero { samples, digits } => {
            json!({"kind": "probably_zero", "samples": samples, "digits": digits})
        }
        ZeroCertificate::ProvedNonzero { witness, value } => json!({
            "kind": "proved_nonzero",
            "value": value,
            "witness": witness.iter().map(|(s, q)| (s.name().to_string(), Value::from(rational_text(q)))).collect::<Map<_, _>>(),
        }),
    }
}

fn verdict_json(v: &TensorVerdict) -> Value {
    let mut m = Map::new();
    m.insert("zero".into(), v.zero.into());
    m.insert("proved".into(), v.proved.into());
    m.insert("components_tested".into(), v.components_tested.into());
    if let Some(w) = &v.counterexample {
        m.insert(
            "counterexample".into(),
            json!({
                "index": index_label(&w.index, false),
                "value": w.value.to_string(),
                "certificate": certificate_json(&w.certificate),
            }),
        );
    }
    Value::Object(m)
}

fn exprs(v: &[Expr]) -> Value {
    v.iter().map(|e| Value::from(e.to_string())).collect()
}

fn relation_json(r: &RelationResult) -> Value {
    let mut m = Map::new();
    m.insert("holds".into(), r.holds.into());
    m.insert("rank".into(), r.rank.into());
    m.insert("unknowns".into(), r.names.iter().map(|n| Value::from(n.as_str())).collect());
    if let Some(s) = &r.solution {
        let coeffs: Map<String, Value> = r
            .names
            .iter()
            .zip(&s.particular)
            .map(|(n, e)| (n.clone(), Value::from(e.to_string())))
            .collect();
        m.insert("coefficients".into(), Value::Object(coeffs));
        m.insert("free_dimension".into(), s.dimension().into());
        m.insert("null_space".into(), s.null_space.iter().map(|v| exprs(v)).collect());
        m.insert("residual".into(), verdict_json(&s.residual));
    }
    if let Some(w) = &r.witness {
        m.insert(
            "witness".into(),
            json!({
                "point": w.point.iter().map(|(s, q)| (s.clone(), Value::from(rational_text(q)))).collect::<Map<_, _>>(),
                "rows": w.rows.iter().map(|i| Value::from(index_label(i, false))).collect::<Vec<_>>(),
                "residual": w.residual.as_ref().map(verdict_json),
            }),
        );
    }
    Value::Object(m)
}

fn decomposition_json(d: &DecompositionOutcome) -> Value {
    json!({
        "holds": d.holds(),
        "decomposes": verdict_json(&d.decomposes),
        "side_conditions": d.side_conditions.iter().map(|(l, v)| (l.clone(), verdict_json(v))).collect::<Map<_, _>>(),
    })
}

fn pseudo_json(p: &PseudoOutcome) -> Value {
    json!({
        "lhs": p.lhs.to_string(),
        "rhs": p.rhs.to_string(),
        "relation": relation_json(&p.result),
    })
}

/// JSON value of one check's outcome.
pub fn outcome_json(o: &CheckOutcome) -> Value {
    match o {
        CheckOutcome::RicciDerivative(r) => json!({
            "codazzi": verdict_json(&r.codazzi),
            "cyclic_parallel": verdict_json(&r.cyclic_parallel),
        }),
        CheckOutcome::QuasiEinstein(q) => {
            let mut m = Map::new();
            m.insert("k".into(), q.k.into());
            m.insert("alpha".into(), q.alpha.as_ref().map_or(Value::Null, |a| a.to_string().into()));
            m.insert("numeric_only".into(), q.numeric_only.into());
            m.insert("candidates".into(), exprs(&q.candidates));
            if let Some(c) = &q.certificate {
                m.insert(
                    "certificate".into(),
                    json!({
                        "rank": c.rank,
                        "minor_rows": c.minor_rows.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "minor_cols": c.minor_cols.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "minor": c.minor.to_string(),
                        "minor_certificate": certificate_json(&c.minor_certificate),
                        "higher_minors": c.higher_minors,
                    }),
                );
            }
            Value::Object(m)
        }
        CheckOutcome::Ein(e) => json!({
            "level": e.level,
            "attempts": e.attempts.iter().map(|(l, r)| (l.to_string(), relation_json(r))).collect::<Map<_, _>>(),
        }),
        CheckOutcome::Decompositions(ds) => {
            Value::Object(ds.iter().map(|d| (d.name.to_string(), decomposition_json(d))).collect())
        }
        CheckOutcome::Semisymmetric(v) => verdict_json(v),
        CheckOutcome::Pseudosymmetry(ps) => Value::Object(ps.iter().map(|p| (p.name.to_string(), pseudo_json(p))).collect()),
        CheckOutcome::Roter(r) => json!({
            "roter": relation_json(&r.roter),
            "generalized": relation_json(&r.generalized),
            "tau": r.tau.as_ref().map(|t| json!({
                "tau": t.tau.to_string(),
                "certificate": certificate_json(&t.certificate),
                "relation": t.relation.as_ref().map(relation_json),
            })),
        }),
        CheckOutcome::RelationFamily(r) => relation_json(r),
        CheckOutcome::Compatibility(c) => {
            let mut m: Map<String, Value> = Map::new();
            for (label, kind, v) in &c.entries {
                let entry = m.entry(label.clone()).or_insert_with(|| Value::Object(Map::new()));
                entry
                    .as_object_mut()
                    .expect("object")
                    .insert(kind.letter().to_string(), verdict_json(v));
            }
            Value::Object(m)
        }
    }
}

/// Identity of the metric a report is about.
pub fn metric_json(name: &str, spec: &MetricSpec) -> Value {
    let file = MetricFile::from_spec(name, spec);
    json!({
        "name": file.name,
        "coordinates": file.coordinates,
        "parameters": file.parameters,
        "assumptions": file.assumptions,
        "components": file.components,
    })
}

pub fn config_json(cfg: &ClassifyConfig) -> Value {
    json!({
        "seed": cfg.zero.seed,
        "samples": cfg.zero.samples,
        "digits": cfg.zero.digits,
        "tolerance_exponent": cfg.zero.tolerance_exponent,
        "max_retries": cfg.zero.max_retries,
        "points": cfg.points,
    })
}

/// A complete classification report.
pub fn report_json(
    name: &str,
    bundle: &CurvatureBundle,
    report: &StructureReport,
    components: &[(String, Tensor<Expr>, bool)],
    cfg: &ClassifyConfig,
) -> Value {
    let results: Map<String, Value> = report
        .results
        .iter()
        .map(|(c, o)| (c.name().to_string(), outcome_json(o)))
        .collect();
    let mut doc = Map::new();
    doc.insert("schema".into(), REPORT_SCHEMA.into());
    doc.insert(
        "tool".into(),
        json!({"name": "curvlab", "version": env!("CARGO_PKG_VERSION")}),
    );
    doc.insert("metric".into(), metric_json(name, bundle.metric().spec()));
    doc.insert("config".into(), config_json(cfg));
    doc.insert(
        "checks".into(),
        report.results.iter().map(|(c, _)| Value::from(c.name())).collect(),
    );
    doc.insert("results".into(), Value::Object(results));
    if !components.is_empty() {
        let comps: Map<String, Value> = components
            .iter()
            .map(|(label, t, d)| {
                let rows: Map<String, Value> = component_table(t)
                    .into_iter()
                    .map(|(i, v)| (index_label(&i, *d), Value::from(v.to_string())))
                    .collect();
                (label.clone(), Value::Object(rows))
            })
            .collect();
        doc.insert("components".into(), Value::Object(comps));
    }
    Value::Object(doc)
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn verdict_word(v: &TensorVerdict) -> &'static str {
    match (v.zero, v.proved) {
        (true, true) => "yes (identically)",
        (true, false) => "yes (at every sample)",
        (false, _) => "no",
    }
}

fn relation_text(r: &RelationResult) -> String {
    match &r.solution {
        Some(s) if r.holds => {
            let coeffs: Vec<String> = r.names.iter().zip(&s.particular).map(|(n, e)| format!("{n} = {e}")).collect();
            let free = if s.dimension() > 0 {
                format!(" (+ {}-dimensional family)", s.dimension())
            } else {
                String::new()
            };
            format!("holds: {}{free}", coeffs.join(", "))
        }
        _ => "no solution".into(),
    }
}

fn ein_text(level: usize, r: &RelationResult) -> String {
    let Some(s) = r.solution.as_ref().filter(|_| r.holds) else {
        return format!("S^{level}: no solution");
    };
    if s.dimension() > 0 {
        return format!("S^{level}: {}", relation_text(r));
    }
    let terms: Vec<String> = r
        .names
        .iter()
        .zip(&s.particular)
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| match c.as_rational() {
            Some(q) if q.is_one() => n.clone(),
            Some(q) => format!("{} {n}", rational_text(&q)),
            None => format!("({c}) {n}"),
        })
        .collect();
    let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    format!("S^{level} = {rhs}")
}

/// Plain-text rendering of a report.
pub fn render_text(name: &str, report: &StructureReport, cfg: &ClassifyConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "metric: {name}");
    let _ = writeln!(out, "seed: {}", cfg.zero.seed);
    for (check, o) in &report.results {
        let _ = writeln!(out, "\n[{check}]");
        match o {
            CheckOutcome::RicciDerivative(r) => {
                let _ = writeln!(out, "codazzi: {}", verdict_word(&r.codazzi));
                let _ = writeln!(out, "cyclic parallel: {}", verdict_word(&r.cyclic_parallel));
            }
            CheckOutcome::QuasiEinstein(q) => {
                let alpha = q.alpha.as_ref().map_or("undetermined".into(), |a| a.to_string());
                let _ = writeln!(out, "rank(S - alpha g) = {} with alpha = {alpha}", q.k);
            }
            CheckOutcome::Ein(e) => {
                match e.level {
                    Some(l) => {
                        let _ = writeln!(out, "Ein({l})");
                    }
                    None => {
                        let _ = writeln!(out, "no Ein(k) relation for k <= 4");
                    }
                }
                for (l, r) in &e.attempts {
                    let _ = writeln!(out, "  {}", ein_text(*l, r));
                }
            }
            CheckOutcome::Decompositions(ds) => {
                if ds.is_empty() {
                    let _ = writeln!(out, "no decompositions supplied");
                }
                for d in ds {
                    let _ = writeln!(out, "{}: {}", d.name, if d.holds() { "verified" } else { "fails" });
                }
            }
            CheckOutcome::Semisymmetric(v) => {
                let _ = writeln!(out, "R.R = 0: {}", verdict_word(v));
            }
            CheckOutcome::Pseudosymmetry(ps) => {
                for p in ps {
                    let _ = writeln!(out, "{} = L {} ({}): {}", p.lhs, p.rhs, p.name, relation_text(&p.result));
                }
            }
            CheckOutcome::Roter(r) => {
                let _ = writeln!(out, "Roter: {}", relation_text(&r.roter));
                let _ = writeln!(out, "generalized Roter: {}", relation_text(&r.generalized));
                if let Some(t) = &r.tau {
                    let _ = writeln!(out, "tau = {}", t.tau);
                    if let Some(rel) = &t.relation {
                        let _ = writeln!(out, "R = L1 S^S + L2 S^S2 + L3 S2^S2: {}", relation_text(rel));
                    }
                }
            }
            CheckOutcome::RelationFamily(r) => {
                let _ = writeln!(
                    out,
                    "x1 R.R + x2 R.C + x3 C.R + x4 C.C = y1 Q(S,R) + y2 Q(g,C) + y3 Q(S,C): {}",
                    relation_text(r)
                );
                if let Some(s) = &r.solution {
                    for v in &s.null_space {
                        let terms: Vec<String> = r
                            .names
                            .iter()
                            .zip(v)
                            .filter(|(_, e)| !e.is_zero())
                            .map(|(n, e)| format!("{n}: {e}"))
                            .collect();
                        let _ = writeln!(out, "  basis: {}", terms.join(", "));
                    }
                }
            }
            CheckOutcome::Compatibility(c) => {
                for (label, kind, v) in &c.entries {
                    let _ = writeln!(out, "{label} {}-compatible: {}", kind.letter(), verdict_word(v));
                }
            }
        }
    }
    out
}

/// A qualitative property, with the detail shown to the reader.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feature {
    pub key: String,
    pub class: String,
    pub detail: String,
}

fn feature(key: impl Into<String>, class: impl Into<String>, detail: impl Into<String>) -> Feature {
    Feature {
        key: key.into(),
        class: class.into(),
        detail: detail.into(),
    }
}

fn pseudo_feature(p: &PseudoOutcome) -> Feature {
    let key = format!("{} = L {}", p.lhs, p.rhs);
    let r = &p.result;
    let Some(s) = r.solution.as_ref().filter(|_| r.holds) else {
        return feature(key, "no", format!("{} is not a multiple of {}", p.lhs, p.rhs));
    };
    if s.dimension() > 0 {
        return feature(key, "trivial", format!("{} and {} both vanish", p.lhs, p.rhs));
    }
    let l = &s.particular[0];
    if l.is_zero() {
        feature(key, format!("{} = 0", p.lhs), format!("{} = 0", p.lhs))
    } else if let Some(q) = l.as_rational() {
        let detail = format!("{} = {} {}", p.lhs, rational_text(&q), p.rhs);
        feature(key, detail.clone(), detail)
    } else {
        feature(
            key,
            format!("{} = L {} with non-numeric L", p.lhs, p.rhs),
            format!("{} = ({l}) {}", p.lhs, p.rhs),
        )
    }
}

/// Qualitative features of a classification, for comparing metrics.
pub fn features(report: &StructureReport) -> Vec<Feature> {
    let mut out = Vec::new();
    for (_, o) in &report.results {
        match o {
            CheckOutcome::RicciDerivative(r) => {
                let class = match (r.cyclic_parallel.zero, r.codazzi.zero) {
                    (true, true) => "cyclic parallel and Codazzi",
                    (true, false) => "cyclic parallel, not Codazzi",
                    (false, true) => "Codazzi, not cyclic parallel",
                    (false, false) => "neither cyclic parallel nor Codazzi",
                };
                out.push(feature("Ricci tensor", class, class));
            }
            CheckOutcome::QuasiEinstein(q) => {
                let class = match q.k {
                    0 => "Einstein".to_string(),
                    1 => "quasi-Einstein".to_string(),
                    k => format!("proper {k}-quasi-Einstein"),
                };
                let alpha = q.alpha.as_ref().map_or("undetermined".into(), |a| a.to_string());
                out.push(feature("quasi-Einstein", class.clone(), format!("{class}, alpha = {alpha}")));
            }
            CheckOutcome::Ein(e) => {
                let class = e.level.map_or("not Ein(k), k <= 4".into(), |l| format!("Ein({l})"));
                out.push(feature("Ein", class.clone(), class));
            }
            CheckOutcome::Semisymmetric(v) => {
                let class = if v.zero { "semisymmetric" } else { "not semisymmetric" };
                out.push(feature("R.R = 0", class, class));
            }
            CheckOutcome::Pseudosymmetry(ps) => out.extend(ps.iter().map(pseudo_feature)),
            CheckOutcome::Roter(r) => {
                let yes = |b: bool| if b { "yes" } else { "no" };
                out.push(feature("Roter type", yes(r.roter.holds), yes(r.roter.holds)));
                let mut detail = yes(r.generalized.holds).to_string();
                if let Some(t) = &r.tau {
                    if t.certificate.is_zero() {
                        detail.push_str(" (tau = 0)");
                    }
                }
                out.push(feature("generalized Roter type", yes(r.generalized.holds), detail));
            }
            CheckOutcome::Compatibility(c) => {
                for (label, kind, v) in &c.entries {
                    let class = if v.zero { "compatible" } else { "not compatible" };
                    out.push(feature(format!("{label} {}-compatible", kind.letter()), class, class));
                }
            }
            CheckOutcome::Decompositions(_) | CheckOutcome::RelationFamily(_) => {}
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub similarities: Vec<Feature>,
    /// Same key, different class: `(a, b)`.
    pub dissimilarities: Vec<(Feature, Feature)>,
}

/// Features present in both reports, split by agreement.
pub fn compare(a: &StructureReport, b: &StructureReport) -> Comparison {
    let fa = features(a);
    let fb = features(b);
    let mut similarities = Vec::new();
    let mut dissimilarities = Vec::new();
    for x in &fa {
        let Some(y) = fb.iter().find(|y| y.key == x.key) else { continue };
        if x.class == y.class {
            let mut f = x.clone();
            if x.detail != y.detail {
                f.detail = f.class.clone();
            }
            similarities.push(f);
        } else {
            dissimilarities.push((x.clone(), y.clone()));
        }
    }
    Comparison {
        similarities,
        dissimilarities,
    }
}

pub fn comparison_json(names: (&str, &str), c: &Comparison, cfg: &ClassifyConfig) -> Value {
    json!({
        "schema": REPORT_SCHEMA,
        "tool": {"name": "curvlab", "version": env!("CARGO_PKG_VERSION")},
        "config": config_json(cfg),
        "metrics": [names.0, names.1],
        "similarity": c.similarities.iter().map(|f| json!({"property": f.key, "value": f.detail})).collect::<Vec<_>>(),
        "dissimilarity": c.dissimilarities.iter().map(|(x, y)| {
            let mut m = Map::new();
            m.insert("property".into(), x.key.clone().into());
            m.insert(names.0.into(), x.detail.clone().into());
            m.insert(names.1.into(), y.detail.clone().into());
            Value::Object(m)
        }).collect::<Vec<_>>(),
    })
}

pub fn render_comparison(names: (&str, &str), c: &Comparison) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "A. Similarity ({} and {}):", names.0, names.1);
    if c.similarities.is_empty() {
        let _ = writeln!(out, "  none");
    }
    for f in &c.similarities {
        let _ = writeln!(out, "  {}: {}", f.key, f.detail);
    }
    let _ = writeln!(out, "B. Dissimilarity:");
    if c.dissimilarities.is_empty() {
        let _ = writeln!(out, "  none");
    }
    for (x, y) in &c.dissimilarities {
        let _ = writeln!(out, "  {}: {} = {} | {} = {}", x.key, names.0, x.detail, names.1, y.detail);
    }
    out
}

/// One expected value that the report does not reproduce.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectationMismatch {
    pub path: String,
    pub expected: Value,
    /// `None` when the path is absent from the report.
    pub actual: Option<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectFile {
    #[serde(default)]
    schema: Option<String>,
    expect: BTreeMap<String, toml::Value>,
}

fn toml_to_json(v: &toml::Value) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn lookup_path<'a>(root: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(root, |v, k| match v {
        Value::Object(m) => m.get(k),
        Value::Array(a) => a.get(k.parse::<usize>().ok()?),
        _ => None,
    })
}

fn same(expected: &Value, actual: &Value, table: &SymbolTable) -> bool {
    match (expected, actual) {
        (Value::String(e), Value::String(a)) => match (parse_expr(e, table), parse_expr(a, table)) {
            (Ok(x), Ok(y)) => x == y,
            _ => e == a,
        },
        (Value::Number(e), Value::Number(a)) => e.as_f64() == a.as_f64(),
        _ => expected == actual,
    }
}

/// Compares a report's `results` against an expectation file:
///
/// ```toml
/// schema = "curvlab-expect/1"
/// [expect]
/// "quasi_einstein.k" = 2
/// "quasi_einstein.alpha" = "2*a^2"
/// ```
///
/// Paths are dot-separated keys into `results`; strings that parse as
/// expressions compare canonically.
pub fn check_expectations(
    results: &Value,
    expect_toml: &str,
    table: &SymbolTable,
) -> Result<Vec<ExpectationMismatch>, MetricFileError> {
    let file: ExpectFile = toml::from_str(expect_toml).map_err(|e| MetricFileError::Syntax(e.to_string()))?;
    if let Some(s) = &file.schema {
        if s != "curvlab-expect/1" {
            return Err(MetricFileError::Schema(format!(
                "expected schema \"curvlab-expect/1\", found \"{s}\""
            )));
        }
    }
    Ok(file
        .expect
        .iter()
        .filter_map(|(path, v)| {
            let expected = toml_to_json(v);
            let actual = lookup_path(results, path);
            match actual {
                Some(a) if same(&expected, a, table) => None,
                _ => Some(ExpectationMismatch {
                    path: path.clone(),
                    expected,
                    actual: actual.cloned(),
                }),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn metric_file_round_trip() {
        let sr = catalog::som_raychaudhuri();
        let text = emit_metric_file("som-raychaudhuri", &sr.spec);
        let back = MetricFile::from_toml(&text).unwrap().to_spec().unwrap();
        assert_eq!(back.matrix(), sr.spec.matrix());
        assert_eq!(back.symbols(), sr.spec.symbols());
    }

    #[test]
    fn keys_must_be_lower_triangle() {
        assert!(parse_key("1,2", 4).is_err());
        assert!(parse_key("5,1", 4).is_err());
        assert!(parse_key("0,0", 4).is_err());
        assert_eq!(parse_key("2,1", 4).unwrap(), (1, 0));
    }

    #[test]
    fn expectations_compare_canonically() {
        let t = SymbolTable::new(&["r"], &["a"]).unwrap();
        let results = json!({"quasi_einstein": {"k": 2, "alpha": "2*a^2"}, "ein": {"level": 3}});
        let ok = "[expect]\n\"quasi_einstein.k\" = 2\n\"quasi_einstein.alpha\" = \"a^2 + a^2\"\n";
        assert!(check_expectations(&results, ok, &t).unwrap().is_empty());
        let bad = "[expect]\n\"ein.level\" = 2\n\"missing.path\" = true\n";
        let m = check_expectations(&results, bad, &t).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].path, "ein.level");
        assert!(m[1].actual.is_none());
    }

    #[test]
    fn derivative_labels_get_a_comma() {
        assert_eq!(index_label(&[0, 1, 1, 2, 1], true), "1223,2");
        assert_eq!(index_label(&[0, 1, 0, 1], false), "1212");
    }
}
