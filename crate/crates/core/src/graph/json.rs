//! The graph interchange format:
//! `{"vertices":["a","b"],"edges":[{"id":0,"u":"a","v":"b","len":"3/2"}]}`.

use serde::{Deserialize, Serialize};

use super::WeightedMultigraph;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: usize,
    pub u: String,
    pub v: String,
    pub len: String,
}

impl TryFrom<&GraphJson> for WeightedMultigraph {
    type Error = Error;

    fn try_from(doc: &GraphJson) -> Result<Self> {
        let mut g = WeightedMultigraph::with_vertices(doc.vertices.iter().cloned())?;
        let mut edges: Vec<&EdgeJson> = doc.edges.iter().collect();
        edges.sort_by_key(|e| e.id);
        for (expected, e) in edges.iter().enumerate() {
            if e.id != expected {
                return Err(Error::InvalidGraph(format!(
                    "edge ids must be exactly 0..{}; found {}",
                    doc.edges.len(),
                    e.id
                )));
            }
            let len: Rational = e.len.parse()?;
            let u = g.vertex_id(&e.u)?;
            let v = g.vertex_id(&e.v)?;
            g.add_edge(u, v, len)?;
        }
        Ok(g)
    }
}

impl From<&WeightedMultigraph> for GraphJson {
    fn from(g: &WeightedMultigraph) -> Self {
        GraphJson {
            vertices: g.names().to_vec(),
            edges: g
                .edges()
                .map(|(id, e)| EdgeJson {
                    id,
                    u: g.name(e.u).to_string(),
                    v: g.name(e.v).to_string(),
                    len: e.len.to_string(),
                })
                .collect(),
        }
    }
}

impl WeightedMultigraph {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let doc: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        WeightedMultigraph::try_from(&doc)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson::from(self)
    }

    /// Compact single-line JSON in the interchange format.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("graph serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_wire_format() {
        let mut g = WeightedMultigraph::with_vertices(["a", "b"]).unwrap();
        g.add_named_edge("a", "b", Rational::new(3, 2)).unwrap();
        g.add_named_edge("b", "a", 2).unwrap();
        assert_eq!(
            g.to_json_string(),
            r#"{"vertices":["a","b"],"edges":[{"id":0,"u":"a","v":"b","len":"3/2"},{"id":1,"u":"b","v":"a","len":"2"}]}"#
        );
        assert_eq!(WeightedMultigraph::from_json_str(&g.to_json_string()).unwrap(), g);
    }

    #[test]
    fn edges_may_be_listed_out_of_order() {
        let s = r#"{"vertices":["a","b","c"],"edges":[
            {"id":1,"u":"b","v":"c","len":"1"},
            {"id":0,"u":"a","v":"b","len":"4/6"}]}"#;
        let g = WeightedMultigraph::from_json_str(s).unwrap();
        assert_eq!(g.len(0), Rational::new(2, 3));
        assert_eq!(g.edge(1).u, 1);
    }

    #[test]
    fn rejects_malformed_input() {
        let cases = [
            r#"{"vertices":["a","b"],"edges":[{"id":0,"u":"a","v":"b","len":"0"}]}"#,
            r#"{"vertices":["a","b"],"edges":[{"id":0,"u":"a","v":"b","len":"-1/2"}]}"#,
            r#"{"vertices":["a","b"],"edges":[{"id":0,"u":"a","v":"a","len":"1"}]}"#,
            r#"{"vertices":["a","b"],"edges":[{"id":0,"u":"a","v":"z","len":"1"}]}"#,
            r#"{"vertices":["a","b"],"edges":[{"id":3,"u":"a","v":"b","len":"1"}]}"#,
            r#"{"vertices":["a","a"],"edges":[]}"#,
            r#"{"vertices":["a","b"],"edges":[{"id":0,"u":"a","v":"b","len":"x"}]}"#,
            "",
            "[]",
        ];
        for c in cases {
            assert!(WeightedMultigraph::from_json_str(c).is_err(), "accepted {c}");
        }
    }
}
