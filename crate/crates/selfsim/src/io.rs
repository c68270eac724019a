//! JSON system files and the JSON forms of paths, triples, points and germs.
//!
//! A path is an array of edge names, or a vertex name for a length-zero
//! path. A triple is `{"alpha", "g", "beta"}` or the string `"0"`. A point
//! is `{"prefix", "period", "vertex"}` where `vertex` is needed only when
//! both lists are empty. A germ is a triple with an extra `"xi"` point.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::action::{validate_action, ActionSpec, SelfSimilarAction};
use crate::boundary::BoundaryPoint;
use crate::germ::Germ;
use crate::graph::{validate_graph, Graph, GraphSpec, Path};
use crate::groupoid::{validate_groupoid, GroupoidSpec, Model};
use crate::invsemi::SemigroupElement;
use crate::twist::{validate_twist, Twist, TwistSpec};
use crate::validation::Validation;
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub graph: GraphSpec,
    pub groupoid: GroupoidSpec,
    pub action: ActionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<TwistSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system file serializes")
    }

    /// Runs every validator and collects all violations.
    pub fn validate(&self) -> Validation {
        let mut report = validate_graph(&self.graph);
        if !report.is_ok() {
            return report;
        }
        let graph = match Graph::from_spec(&self.graph) {
            Ok(g) => g,
            Err(e) => {
                report.push(e.to_string());
                return report;
            }
        };
        let model = match Model::from_spec(&self.groupoid, &graph) {
            Ok(m) => m,
            Err(e) => {
                report.push(format!("groupoid: {e}"));
                return report;
            }
        };
        report.extend(validate_groupoid(&model));
        let a = match SelfSimilarAction::build_unchecked(graph, model, &self.action) {
            Ok(a) => a,
            Err(e) => {
                report.push(format!("action: {e}"));
                return report;
            }
        };
        report.extend(validate_action(&a));
        if let Some(ts) = &self.twist {
            match Twist::from_spec(&a, ts) {
                Err(e) => report.push(format!("twist: {e}")),
                Ok(t) if report.is_ok() && a.model.is_explicit() => {
                    if let Ok(v) = validate_twist(&a, &t) {
                        report.extend(v);
                    }
                }
                Ok(_) => {}
            }
        }
        report
    }
}

/// A loaded, validated system.
#[derive(Clone, Debug)]
pub struct System {
    pub action: SelfSimilarAction,
    pub twist: Option<Twist>,
    pub file: SystemFile,
}

impl System {
    pub fn from_file(file: SystemFile) -> Result<Self> {
        file.validate().into_result()?;
        let graph = Graph::from_spec(&file.graph)?;
        let model = Model::from_spec(&file.groupoid, &graph)?;
        let action = SelfSimilarAction::build_unchecked(graph, model, &file.action)?;
        let twist = file.twist.as_ref().map(|t| Twist::from_spec(&action, t)).transpose()?;
        Ok(System { action, twist, file })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(SystemFile::parse(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn name(&self) -> Option<String> {
        self.file.metadata.as_ref().and_then(|m| m.name.clone())
    }

    /// The file regenerated from the loaded structures.
    pub fn to_file(&self) -> SystemFile {
        SystemFile {
            graph: self.action.graph.to_spec(),
            groupoid: self.file.groupoid.clone(),
            action: self.file.action.clone(),
            twist: self.twist.as_ref().map(|t| t.to_spec(&self.action)),
            metadata: self.file.metadata.clone(),
        }
    }
}

pub fn path_json(graph: &Graph, p: &Path) -> Value {
    if p.is_empty() {
        json!(graph.vertex_name(p.base))
    } else {
        json!(graph.path_names(p))
    }
}

pub fn parse_path(graph: &Graph, v: &Value) -> Result<Path> {
    match v {
        Value::String(s) => Ok(Path::vertex(graph.vertex(s)?)),
        Value::Array(items) => {
            let names = string_list(items)?;
            graph.path_from_names(None, &names)
        }
        _ => Err(Error::Parse(format!("expected a path, got {v}"))),
    }
}

fn string_list(items: &[Value]) -> Result<Vec<String>> {
    items
        .iter()
        .map(|x| x.as_str().map(String::from).ok_or_else(|| Error::Parse(format!("expected a name, got {x}"))))
        .collect()
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn name_field<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| Error::Parse(format!("field `{key}` must be a string")))
}

pub fn element_json(a: &SelfSimilarAction, s: &SemigroupElement) -> Value {
    match s {
        SemigroupElement::Zero => json!("0"),
        SemigroupElement::Triple { alpha, g, beta } => json!({
            "alpha": path_json(&a.graph, alpha),
            "g": a.model.name(*g),
            "beta": path_json(&a.graph, beta),
        }),
    }
}

pub fn parse_element(a: &SelfSimilarAction, v: &Value) -> Result<SemigroupElement> {
    if v.as_str() == Some("0") {
        return Ok(SemigroupElement::Zero);
    }
    let alpha = parse_path(&a.graph, field(v, "alpha")?)?;
    let beta = parse_path(&a.graph, field(v, "beta")?)?;
    let g = a.model.element(name_field(v, "g")?)?;
    SemigroupElement::triple(a, alpha, g, beta)
}

pub fn point_json(graph: &Graph, x: &BoundaryPoint) -> Value {
    let names = |es: &[usize]| es.iter().map(|&e| graph.edge_name(e).to_string()).collect::<Vec<_>>();
    json!({
        "prefix": names(&x.prefix),
        "period": names(&x.period),
        "vertex": graph.vertex_name(x.base),
    })
}

pub fn parse_point(graph: &Graph, v: &Value) -> Result<BoundaryPoint> {
    let list = |key: &str| -> Result<Vec<usize>> {
        match v.get(key) {
            None => Ok(Vec::new()),
            Some(Value::Array(items)) => string_list(items)?.iter().map(|n| graph.edge(n)).collect(),
            Some(x) => Err(Error::Parse(format!("field `{key}` must be a list, got {x}"))),
        }
    };
    let prefix = list("prefix")?;
    let period = list("period")?;
    let base = match (v.get("vertex"), prefix.first().or(period.first())) {
        (Some(Value::String(s)), _) => graph.vertex(s)?,
        (None, Some(&e)) => graph.rng(e),
        _ => return Err(Error::Parse("a point needs edges or a `vertex`".into())),
    };
    BoundaryPoint::new(graph, base, prefix, period)
}

pub fn germ_json(a: &SelfSimilarAction, x: &Germ) -> Value {
    json!({
        "alpha": path_json(&a.graph, &x.alpha),
        "g": a.model.name(x.g),
        "beta": path_json(&a.graph, &x.beta),
        "xi": point_json(&a.graph, &x.xi),
    })
}

pub fn parse_germ(a: &SelfSimilarAction, v: &Value) -> Result<Germ> {
    let alpha = parse_path(&a.graph, field(v, "alpha")?)?;
    let beta = parse_path(&a.graph, field(v, "beta")?)?;
    let g = a.model.element(name_field(v, "g")?)?;
    let xi = parse_point(&a.graph, field(v, "xi")?)?;
    Germ::new(a, alpha, g, beta, xi)
}
