//! JSON instance format and DOT export.
//!
//! ```json
//! {"vertices": ["a","b"], "edges": [{"u":"a","v":"b","sign":-1}],
//!  "lists": {"a":[1,2]}, "rotation": {"a":["b"]}, "outer": ["a","b"]}
//! ```
//! `lists`, `rotation` and `outer` are optional; `outer` names a dart of the
//! outer face. Output is canonical, so writing a parsed document reproduces
//! it byte for byte.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Color, Coloring, GraphError, ListAssignment, Sign, SignedGraph, Vertex};
use crate::planar::{PlanarError, RotationEmbedding};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Planar(#[from] PlanarError),
    #[error("outer dart {0}-{1} is not an edge")]
    BadOuter(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub u: String,
    pub v: String,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lists: Option<IndexMap<String, Vec<Color>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<IndexMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<[String; 2]>,
}

/// A parsed instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: SignedGraph,
    pub lists: Option<ListAssignment>,
    pub embedding: Option<RotationEmbedding>,
}

impl GraphDoc {
    pub fn from_graph(g: &SignedGraph) -> GraphDoc {
        let name = |v: Vertex| g.name(v).to_string();
        GraphDoc {
            vertices: g.names().to_vec(),
            edges: g.edges().map(|(u, v, sign)| EdgeDoc { u: name(u), v: name(v), sign }).collect(),
            lists: None,
            rotation: None,
            outer: None,
        }
    }

    pub fn with_lists(mut self, g: &SignedGraph, l: &ListAssignment) -> GraphDoc {
        self.lists = Some(g.vertices().map(|v| (g.name(v).to_string(), l.get(v).to_vec())).collect());
        self
    }

    /// Graph, rotation and outer dart of `emb`.
    pub fn from_embedding(emb: &RotationEmbedding) -> GraphDoc {
        let g = emb.graph();
        let mut doc = GraphDoc::from_graph(g);
        doc.rotation = Some(
            g.vertices()
                .map(|v| (g.name(v).to_string(), emb.rotation(v).iter().map(|&u| g.name(u).to_string()).collect()))
                .collect(),
        );
        doc.outer = emb.outer_dart().map(|(a, b)| [g.name(a).to_string(), g.name(b).to_string()]);
        doc
    }

    pub fn into_instance(self) -> Result<Instance, IoError> {
        let edges: Vec<(&str, &str, Sign)> = self.edges.iter().map(|e| (e.u.as_str(), e.v.as_str(), e.sign)).collect();
        let graph = SignedGraph::build(&self.vertices.iter().map(String::as_str).collect::<Vec<_>>(), &edges)?;
        let lists = match &self.lists {
            None => None,
            Some(m) => {
                for k in m.keys() {
                    graph.require(k)?;
                }
                let raw = graph
                    .vertices()
                    .map(|v| m.get(graph.name(v)).cloned().ok_or_else(|| GraphError::MissingList(graph.name(v).into())))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(ListAssignment::new(&graph, raw)?)
            }
        };
        let embedding = match &self.rotation {
            None => None,
            Some(m) => {
                let mut rot = vec![Vec::new(); graph.len()];
                for (k, nbrs) in m {
                    let v = graph.require(k)?;
                    rot[v] = nbrs.iter().map(|u| graph.require(u)).collect::<Result<_, _>>()?;
                }
                let mut emb = RotationEmbedding::new(graph.clone(), rot)?;
                if let Some([a, b]) = &self.outer {
                    let (x, y) = (graph.require(a)?, graph.require(b)?);
                    if !emb.set_outer_dart(x, y) {
                        return Err(IoError::BadOuter(a.clone(), b.clone()));
                    }
                }
                Some(emb)
            }
        };
        Ok(Instance { graph, lists, embedding })
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    serde_json::from_str::<GraphDoc>(text)?.into_instance()
}

/// Canonical JSON for a graph with optional lists and embedding.
pub fn write_instance(g: &SignedGraph, lists: Option<&ListAssignment>, emb: Option<&RotationEmbedding>) -> String {
    let mut doc = match emb {
        Some(e) => GraphDoc::from_embedding(e),
        None => GraphDoc::from_graph(g),
    };
    if let Some(l) = lists {
        doc = doc.with_lists(g, l);
    }
    to_pretty(&doc)
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// `{"name": color, ...}` in vertex order.
pub fn coloring_json(g: &SignedGraph, c: &Coloring) -> serde_json::Value {
    serde_json::Value::Object(g.vertices().map(|v| (g.name(v).to_string(), serde_json::json!(c.get(v)))).collect())
}

/// Reads a coloring map; every vertex must be present.
pub fn parse_coloring(g: &SignedGraph, text: &str) -> Result<Coloring, IoError> {
    let m: IndexMap<String, Color> = serde_json::from_str(text)?;
    let mut partial = vec![None; g.len()];
    for (k, c) in m {
        partial[g.require(&k)?] = Some(c);
    }
    Ok(Coloring::from_partial(g, &partial)?)
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz text; negative edges are dashed and labelled "−".
pub fn to_dot(g: &SignedGraph, lists: Option<&ListAssignment>) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        match lists {
            Some(l) => {
                let label = format!("{} {:?}", g.name(v), l.get(v));
                out += &format!("  {} [label={}];\n", dot_id(g.name(v)), dot_id(&label));
            }
            None => out += &format!("  {};\n", dot_id(g.name(v))),
        }
    }
    for (u, v, s) in g.edges() {
        let style = match s {
            Sign::Positive => "[style=solid]",
            Sign::Negative => "[style=dashed, label=\"−\"]",
        };
        out += &format!("  {} -- {} {};\n", dot_id(g.name(u)), dot_id(g.name(v)), style);
    }
    out + "}\n"
}
