//! TOML instance documents.
//!
//! Every numeric field takes either a TOML number or a string holding a
//! decimal or a fraction such as `"1/2"`; each literal is converted to `f64`
//! exactly once. Intervals are written `"(-1, 4)"`, `"[0, 1/2)"` or `"{3}"`.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::checker::{Budgets, TheoremId};
use crate::comparison::ComparisonFunction;
use crate::contraction::{ConditionKind, ContractionInstance};
use crate::map::{AffinePiece, SelfMap};
use crate::relation::Relation;
use crate::space::{Interval, MetricSpace, PointSet};

pub const SCHEMA: &str = include_str!("../schema/instance.schema.json");

const BUILTIN: [(&str, &str); 3] = [
    ("4.1", include_str!("../instances/example4_1.toml")),
    ("4.2", include_str!("../instances/example4_2.toml")),
    ("4.3", include_str!("../instances/example4_3.toml")),
];

/// The shipped document for `4.1`, `example4.1` and so on.
pub fn builtin(id: &str) -> Option<&'static str> {
    let id = id.strip_prefix("example").unwrap_or(id);
    BUILTIN.iter().find(|(k, _)| *k == id).map(|(_, text)| *text)
}

pub fn builtin_ids() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(k, _)| *k)
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Number {
    pub fn value(&self) -> Result<f64, String> {
        match self {
            Number::Int(i) => Ok(*i as f64),
            Number::Float(x) => Ok(*x),
            Number::Text(s) => parse_real(s),
        }
    }
}

impl From<f64> for Number {
    fn from(x: f64) -> Self {
        Number::Float(x)
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let scalar = |u: &str| -> Result<f64, String> {
        let u = u.trim();
        match u {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ if u.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')) && !u.is_empty() => {
                u.parse::<f64>().map_err(|_| format!("malformed number {u:?}"))
            }
            _ => Err(format!("malformed number {u:?}")),
        }
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let (n, d) = (scalar(n)?, scalar(d)?);
            if d == 0.0 || !n.is_finite() || !d.is_finite() {
                return Err(format!("malformed fraction {t:?}"));
            }
            Ok(n / d)
        }
        None => scalar(t),
    }
}

pub fn parse_interval(s: &str) -> Result<Interval, String> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        return Interval::point(parse_real(inner)?).map_err(|e| e.to_string());
    }
    let lo_closed = match t.chars().next() {
        Some('[') => true,
        Some('(') => false,
        _ => return Err(format!("interval {t:?} must start with '[' or '('")),
    };
    let hi_closed = match t.chars().last() {
        Some(']') => true,
        Some(')') => false,
        _ => return Err(format!("interval {t:?} must end with ']' or ')'")),
    };
    let (lo, hi) = t[1..t.len() - 1].split_once(',').ok_or_else(|| format!("interval {t:?} needs two endpoints"))?;
    Interval::new(parse_real(lo)?, parse_real(hi)?, lo_closed, hi_closed).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub theorems: Vec<Spanned<String>>,
    pub space: Spanned<SpaceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace_y: Option<Spanned<SetDoc>>,
    pub relation: Spanned<RelationDoc>,
    pub map: MapDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Spanned<PhiDoc>>,
    pub condition: Spanned<ConditionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<Spanned<SolverDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budgets: Option<Spanned<BudgetsDoc>>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Number>>,
    /// `"usual"` (the default) or `"matrix"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<Number>>>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Number>>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    /// `geq`, `leq`, `universal` or `pairs`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<(Number, Number)>>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<PieceDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(Number, Number)>>,
}

/// An affine piece `slope * x + intercept`, or a constant `value`.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub domain: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intercept: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Number>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PhiDoc {
    /// `linear`, `rational`, `hyperbolic` or `table`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<(Number, Number)>>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionDoc {
    /// `phi_m`, `phi_n`, `lambda_n`, `banach`, `ciric`, `rational_abc`,
    /// `kannan` or `chatterjea`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Number>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SolverDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<Number>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A rejection with a 1-based position in the source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub key: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}: {}", self.line, self.column, self.key, self.message)
    }
}

impl std::error::Error for Diagnostic {}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

#[derive(Clone, Debug)]
pub struct ParsedInstance {
    pub document: InstanceDocument,
    pub instance: ContractionInstance,
    pub theorems: Vec<TheoremId>,
    pub budgets: Budgets,
    pub x0: Option<f64>,
    pub seed: Option<u64>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn at(&self, span: Range<usize>, key: &str, message: impl fmt::Display) -> Diagnostic {
        let (line, column) = position(self.text, span.start);
        Diagnostic { line, column, key: key.into(), message: message.to_string() }
    }

    fn num(&self, n: &Option<Number>, span: &Range<usize>, key: &str) -> Result<f64, Diagnostic> {
        match n {
            Some(n) => n.value().map_err(|m| self.at(span.clone(), key, m)),
            None => Err(self.at(span.clone(), key, "missing value")),
        }
    }

    fn set(&self, intervals: &Option<Vec<String>>, points: &Option<Vec<Number>>, span: &Range<usize>, key: &str) -> Result<PointSet, Diagnostic> {
        match (intervals, points) {
            (Some(ivs), None) => {
                let ivs = ivs
                    .iter()
                    .map(|s| parse_interval(s).map_err(|m| self.at(span.clone(), &format!("{key}.intervals"), m)))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(PointSet::intervals(ivs))
            }
            (None, Some(ps)) => {
                let ps = ps
                    .iter()
                    .map(|n| n.value().map_err(|m| self.at(span.clone(), &format!("{key}.points"), m)))
                    .collect::<Result<Vec<_>, _>>()?;
                PointSet::finite(ps).map_err(|e| self.at(span.clone(), &format!("{key}.points"), e))
            }
            _ => Err(self.at(span.clone(), key, "give exactly one of `intervals` or `points`")),
        }
    }

    fn pairs(&self, pairs: &[(Number, Number)], span: &Range<usize>, key: &str) -> Result<Vec<(f64, f64)>, Diagnostic> {
        pairs
            .iter()
            .map(|(a, b)| Ok((a.value().map_err(|m| self.at(span.clone(), key, m))?, b.value().map_err(|m| self.at(span.clone(), key, m))?)))
            .collect()
    }
}

/// Parses and validates a document.
pub fn parse_instance(text: &str) -> Result<ParsedInstance, Diagnostic> {
    let document: InstanceDocument = toml::from_str(text).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        let key = text.get(span.clone()).map(|s| s.lines().next().unwrap_or("").trim().to_string()).unwrap_or_default();
        let (line, column) = position(text, span.start);
        Diagnostic { line, column, key, message: e.message().trim().to_string() }
    })?;
    let cx = Ctx { text };
    let d = &document;

    let space_span = d.space.span();
    let space = d.space.get_ref();
    let carrier = cx.set(&space.intervals, &space.points, &space_span, "space")?;
    let space = match (space.metric.as_deref().unwrap_or("usual"), &space.matrix) {
        ("usual", None) => MetricSpace::usual(carrier).map_err(|e| cx.at(space_span.clone(), "space", e))?,
        ("matrix", Some(rows)) => {
            let Some(points) = carrier.points() else {
                return Err(cx.at(space_span, "space.matrix", "a distance matrix needs a finite `points` carrier"));
            };
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|n| n.value().map_err(|m| cx.at(space_span.clone(), "space.matrix", m))).collect())
                .collect::<Result<Vec<Vec<f64>>, _>>()?;
            MetricSpace::with_matrix(points.to_vec(), rows).map_err(|e| cx.at(space_span.clone(), "space.matrix", e))?
        }
        (m, _) => return Err(cx.at(space_span, "space.metric", format!("metric {m:?} needs `matrix` exactly when it is \"matrix\""))),
    };

    let y = match &d.subspace_y {
        Some(s) => Some(cx.set(&s.get_ref().intervals, &s.get_ref().points, &s.span(), "subspace_y")?),
        None => None,
    };

    let rspan = d.relation.span();
    let r = d.relation.get_ref();
    let relation = match (r.kind.as_str(), &r.pairs) {
        ("geq", None) => Relation::Geq,
        ("leq", None) => Relation::Leq,
        ("universal", None) => Relation::Universal,
        ("pairs", Some(p)) => Relation::pairs(cx.pairs(p, &rspan, "relation.pairs")?).map_err(|e| cx.at(rspan.clone(), "relation.pairs", e))?,
        ("pairs", None) => return Err(cx.at(rspan, "relation.pairs", "missing value")),
        ("geq" | "leq" | "universal", Some(_)) => return Err(cx.at(rspan, "relation.pairs", "only a `pairs` relation lists pairs")),
        (k, _) => return Err(cx.at(rspan, "relation.kind", format!("unknown relation kind {k:?}"))),
    };

    let mspan = section_span(text, "map");
    let m = &d.map;
    let map = match (&m.pieces, &m.table) {
        (Some(pieces), None) => {
            let pieces = pieces
                .iter()
                .map(|p| {
                    let domain = parse_interval(&p.domain).map_err(|e| cx.at(mspan.clone(), "map.pieces.domain", e))?;
                    let piece = match (&p.value, &p.slope) {
                        (Some(v), None) if p.intercept.is_none() => AffinePiece::constant(domain, cx.num(&Some(v.clone()), &mspan, "map.pieces.value")?),
                        (None, Some(_)) => AffinePiece::new(
                            domain,
                            cx.num(&p.slope, &mspan, "map.pieces.slope")?,
                            cx.num(&p.intercept.clone().or(Some(Number::Int(0))), &mspan, "map.pieces.intercept")?,
                        ),
                        _ => return Err(cx.at(mspan.clone(), "map.pieces", "a piece has either `value` or `slope` with optional `intercept`")),
                    };
                    piece.map_err(|e| cx.at(mspan.clone(), "map.pieces", e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            SelfMap::piecewise(pieces).map_err(|e| cx.at(mspan.clone(), "map.pieces", e))?
        }
        (None, Some(t)) => SelfMap::table(cx.pairs(t, &mspan, "map.table")?).map_err(|e| cx.at(mspan.clone(), "map.table", e))?,
        _ => return Err(cx.at(mspan, "map", "give exactly one of `pieces` or `table`")),
    };

    let phi = match &d.phi {
        None => None,
        Some(p) => {
            let span = p.span();
            let p = p.get_ref();
            let f = match p.kind.as_str() {
                "linear" => ComparisonFunction::linear(cx.num(&p.k, &span, "phi.k")?),
                "rational" => ComparisonFunction::rational(cx.num(&p.c, &span, "phi.c")?),
                "hyperbolic" => ComparisonFunction::hyperbolic(cx.num(&p.c, &span, "phi.c")?),
                "table" => match &p.points {
                    Some(points) => ComparisonFunction::table(cx.pairs(points, &span, "phi.points")?),
                    None => return Err(cx.at(span, "phi.points", "missing value")),
                },
                k => return Err(cx.at(span, "phi.kind", format!("unknown comparison function kind {k:?}"))),
            };
            Some(f.map_err(|e| cx.at(span.clone(), "phi", e))?)
        }
    };

    let cspan = d.condition.span();
    let c = d.condition.get_ref();
    let k = || cx.num(&c.k, &cspan, "condition.k");
    let condition = match c.kind.as_str() {
        "phi_m" => ConditionKind::PhiM,
        "phi_n" => ConditionKind::PhiN,
        "lambda_n" => ConditionKind::LambdaN,
        "banach" => ConditionKind::LinearBanach { k: k()? },
        "ciric" => ConditionKind::LinearCiric { k: k()? },
        "kannan" => ConditionKind::Kannan { k: k()? },
        "chatterjea" => ConditionKind::Chatterjea { k: k()? },
        "rational_abc" => ConditionKind::RationalAbc {
            a: cx.num(&c.a, &cspan, "condition.a")?,
            b: cx.num(&c.b, &cspan, "condition.b")?,
            c: cx.num(&c.c, &cspan, "condition.c")?,
        },
        other => return Err(cx.at(cspan, "condition.kind", format!("unknown condition kind {other:?}"))),
    };
    condition.validate().map_err(|e| cx.at(cspan.clone(), "condition", strip_prefix(&e)))?;

    let instance = ContractionInstance::new(space, y, relation, map, phi, condition).map_err(|e| {
        let span = match &e {
            crate::Error::InvalidCondition(_) => cspan.clone(),
            _ => mspan.clone(),
        };
        cx.at(span, "instance", e)
    })?;

    let theorems = d
        .theorems
        .iter()
        .map(|t| t.get_ref().parse::<TheoremId>().map_err(|e| cx.at(t.span(), "theorems", strip_prefix(&e))))
        .collect::<Result<Vec<_>, _>>()?;

    let mut budgets = Budgets::default();
    let mut x0 = None;
    if let Some(s) = &d.solver {
        let span = s.span();
        let s = s.get_ref();
        if s.x0.is_some() {
            x0 = Some(cx.num(&s.x0, &span, "solver.x0")?);
        }
        budgets.max_iters = s.max_iters.unwrap_or(budgets.max_iters);
        if s.tol.is_some() {
            budgets.tol = cx.num(&s.tol, &span, "solver.tol")?;
            if !(budgets.tol > 0.0) {
                return Err(cx.at(span, "solver.tol", "tol must be positive"));
            }
        }
    }
    let mut seed = None;
    if let Some(b) = &d.budgets {
        let b = b.get_ref();
        budgets.pairs = b.pairs.unwrap_or(budgets.pairs);
        budgets.terms = b.terms.unwrap_or(budgets.terms);
        budgets.quad_points = b.quad_points.unwrap_or(budgets.quad_points);
        seed = b.seed;
    }
    Ok(ParsedInstance { document, instance, theorems, budgets, x0, seed })
}

/// Offset of the first header or dotted key opening `section`; arrays of
/// tables leave no span on their parent table.
fn section_span(text: &str, section: &str) -> Range<usize> {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let l = line.trim_start().trim_start_matches('[').trim_start();
        if l.starts_with(section) && l[section.len()..].trim_start().starts_with(['.', ']', '=']) {
            let start = offset + line.len() - line.trim_start().len();
            return start..start + line.trim().len();
        }
        offset += line.len();
    }
    0..0
}

fn strip_prefix(e: &crate::Error) -> String {
    match e {
        crate::Error::InvalidCondition(m) | crate::Error::InvalidArgument(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Serializes a document back to TOML.
pub fn to_toml(document: &InstanceDocument) -> String {
    toml::to_string(document).expect("documents serialize")
}
