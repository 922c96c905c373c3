//! JSON document holding a hierarchy together with its judgments.
//!
//! ```json
//! {"goal": "...",
//!  "layers": [{"name": "...", "nodes": [{"name": "...", "parent": "..."}]}],
//!  "alternatives": ["..."],
//!  "judgments": [{"context": "...", "row": "...", "col": "...", "grade": 3, "inverted": false}]}
//! ```

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{CriterionLayer, CriterionNode, DecisionHierarchy, Intensity, ModelError};

/// Whether unknown fields in a document are an error.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Strictness {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDocument {
    pub name: String,
    pub parent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerDocument {
    pub name: String,
    pub nodes: Vec<NodeDocument>,
}

/// A judgment addressed by node names: `row` compared to `col` under `context`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JudgmentRecord {
    pub context: String,
    pub row: String,
    pub col: String,
    pub grade: i64,
    #[serde(default)]
    pub inverted: bool,
}

impl JudgmentRecord {
    pub fn new(
        context: impl Into<String>,
        row: impl Into<String>,
        col: impl Into<String>,
        intensity: Intensity,
    ) -> Self {
        Self {
            context: context.into(),
            row: row.into(),
            col: col.into(),
            grade: i64::from(intensity.grade()),
            inverted: intensity.inverted(),
        }
    }

    pub fn intensity(&self) -> Result<Intensity, ModelError> {
        Intensity::from_parts(self.grade, self.inverted)
    }

    /// True when both records address the same unordered pair in the same context.
    pub fn same_cell(&self, other: &JudgmentRecord) -> bool {
        self.context == other.context
            && ((self.row == other.row && self.col == other.col)
                || (self.row == other.col && self.col == other.row))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HierarchyDocument {
    pub goal: String,
    pub layers: Vec<LayerDocument>,
    pub alternatives: Vec<String>,
    #[serde(default)]
    pub judgments: Vec<JudgmentRecord>,
}

const DOC_KEYS: &[&str] = &["goal", "layers", "alternatives", "judgments"];
const LAYER_KEYS: &[&str] = &["name", "nodes"];
const NODE_KEYS: &[&str] = &["name", "parent"];
const JUDGMENT_KEYS: &[&str] = &["context", "row", "col", "grade", "inverted"];

impl HierarchyDocument {
    /// Parses a document. Errors carry serde's line/column anchor.
    pub fn from_json_str(text: &str, strictness: Strictness) -> Result<Self, ModelError> {
        match strictness {
            Strictness::Strict => {
                serde_json::from_str(text).map_err(|e| ModelError::Document(e.to_string()))
            }
            Strictness::Lenient => {
                let mut value: Value =
                    serde_json::from_str(text).map_err(|e| ModelError::Document(e.to_string()))?;
                Self::strip_unknown(&mut value);
                serde_json::from_value(value).map_err(|e| ModelError::Document(e.to_string()))
            }
        }
    }

    pub fn from_value(value: Value, strictness: Strictness) -> Result<Self, ModelError> {
        let mut value = value;
        if strictness == Strictness::Lenient {
            Self::strip_unknown(&mut value);
        }
        serde_json::from_value(value).map_err(|e| ModelError::Document(e.to_string()))
    }

    fn strip_unknown(value: &mut Value) {
        fn retain(v: &mut Value, keys: &[&str]) {
            if let Value::Object(map) = v {
                map.retain(|k, _| keys.contains(&k.as_str()));
            }
        }
        fn each(v: &mut Value, key: &str, f: impl Fn(&mut Value)) {
            if let Some(Value::Array(items)) = v.get_mut(key) {
                items.iter_mut().for_each(f);
            }
        }
        retain(value, DOC_KEYS);
        each(value, "layers", |layer| {
            retain(layer, LAYER_KEYS);
            each(layer, "nodes", |n| retain(n, NODE_KEYS));
        });
        each(value, "judgments", |j| retain(j, JUDGMENT_KEYS));
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Validates the tree part of the document.
    pub fn hierarchy(&self) -> Result<DecisionHierarchy, ModelError> {
        let layers = self
            .layers
            .iter()
            .map(|l| CriterionLayer {
                name: l.name.clone(),
                nodes: l
                    .nodes
                    .iter()
                    .map(|n| CriterionNode {
                        name: n.name.clone(),
                        parent: n.parent.clone(),
                    })
                    .collect(),
            })
            .collect();
        DecisionHierarchy::new(self.goal.clone(), layers, self.alternatives.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{
        "goal": "Select",
        "layers": [{"name": "criteria", "nodes": [{"name": "c1", "parent": "Select"}]}],
        "alternatives": ["a", "b"],
        "judgments": [{"context": "c1", "row": "a", "col": "b", "grade": 3}]
    }"#;

    #[test]
    fn parses_and_builds() {
        let doc = HierarchyDocument::from_json_str(DOC, Strictness::Strict).unwrap();
        assert_eq!(doc.judgments.len(), 1);
        assert!(!doc.judgments[0].inverted);
        let h = doc.hierarchy().unwrap();
        assert_eq!(h.alternatives().len(), 2);
    }

    #[test]
    fn strict_rejects_unknown_fields_with_location() {
        let text = DOC.replace("\"grade\": 3", "\"grade\": 3, \"weight\": 0.5");
        let err = HierarchyDocument::from_json_str(&text, Strictness::Strict).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown field `weight`"), "{msg}");
        assert!(msg.contains("line 5"), "{msg}");
        let doc = HierarchyDocument::from_json_str(&text, Strictness::Lenient).unwrap();
        assert_eq!(doc.judgments[0].grade, 3);
    }

    #[test]
    fn same_cell_is_unordered() {
        let a = JudgmentRecord::new("c", "x", "y", Intensity::EQUAL);
        let b = JudgmentRecord::new("c", "y", "x", Intensity::EQUAL);
        let c = JudgmentRecord::new("d", "y", "x", Intensity::EQUAL);
        assert!(a.same_cell(&b));
        assert!(!a.same_cell(&c));
    }
}
