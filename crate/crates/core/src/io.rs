//! Interchange formats.
//!
//! Text:
//!
//! ```text
//! # optional comments
//! n 7 r 3
//! 0 1 2
//! 0 3 4
//! ```
//!
//! The header is `n <count> r <order|mixed>`; each further non-comment line is
//! one edge as ascending space-separated vertex indices.
//!
//! Structured: a JSON object `{"n": 7, "r": 3, "edges": [[0,1,2], ...]}` with
//! an optional `labels` array parallel to `edges`. `r` may be omitted or
//! `null` for mixed hypergraphs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{EdgeLabel, Hypergraph, HypergraphError, LabeledHypergraph, Uniformity};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `n <count> r <order>` header")]
    MissingHeader,
    #[error("line {line}: edge vertices must be strictly ascending")]
    NotAscending { line: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] HypergraphError),
}

pub fn to_text(h: &Hypergraph) -> String {
    let mut out = format!("n {} r {}\n", h.vertex_count(), h.uniformity());
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn from_text(text: &str) -> Result<Hypergraph, FormatError> {
    let mut header: Option<(usize, Option<usize>)> = None;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(line, line_no)?);
            continue;
        }
        let edge = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| FormatError::Syntax {
                    line: line_no,
                    message: format!("`{tok}` is not a vertex index"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if edge.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FormatError::NotAscending { line: line_no });
        }
        edges.push(edge);
    }
    let (n, r) = header.ok_or(FormatError::MissingHeader)?;
    let h = Hypergraph::new(n, edges, r)?;
    if r.is_none() && h.edge_count() > 0 {
        // "mixed" is kept even when every edge happens to share one order.
        return Ok(Hypergraph::from_sorted_unchecked(
            h.vertex_count(),
            h.edges().to_vec(),
            Uniformity::Mixed,
        ));
    }
    if r.is_none() {
        return Ok(Hypergraph::empty(n, Uniformity::Mixed));
    }
    Ok(h)
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, Option<usize>), FormatError> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let bad = |message: &str| FormatError::Syntax {
        line: line_no,
        message: message.to_string(),
    };
    match toks.as_slice() {
        ["n", n, "r", r] => {
            let n = n
                .parse()
                .map_err(|_| bad("vertex count is not an integer"))?;
            let r = match *r {
                "mixed" => None,
                other => Some(
                    other
                        .parse()
                        .map_err(|_| bad("r must be an integer or `mixed`"))?,
                ),
            };
            Ok((n, r))
        }
        _ => Err(FormatError::MissingHeader),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct HypergraphDoc {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub edges: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<EdgeLabel>>,
}

impl HypergraphDoc {
    pub fn from_graph(h: &Hypergraph) -> Self {
        HypergraphDoc {
            n: h.vertex_count(),
            r: h.uniformity().order(),
            edges: h.edges().to_vec(),
            labels: None,
        }
    }

    pub fn from_labeled(h: &LabeledHypergraph) -> Self {
        HypergraphDoc {
            labels: Some(h.labels().to_vec()),
            ..HypergraphDoc::from_graph(h.graph())
        }
    }

    pub fn into_labeled(self) -> Result<LabeledHypergraph, FormatError> {
        let Some(labels) = self.labels.clone() else {
            return Ok(LabeledHypergraph::plain(self.into_graph()?));
        };
        if labels.len() != self.edges.len() {
            return Err(HypergraphError::LabelCountMismatch {
                labels: labels.len(),
                edges: self.edges.len(),
            }
            .into());
        }
        let doc_edges = self.edges.clone();
        let graph = self.into_graph()?;
        // Labels are parallel to the document's edge order, not the sorted one.
        let pairs = doc_edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e
            })
            .zip(labels)
            .collect();
        Ok(LabeledHypergraph::from_pairs(
            graph.vertex_count(),
            pairs,
            graph.uniformity(),
        ))
    }

    pub fn into_graph(self) -> Result<Hypergraph, FormatError> {
        let h = Hypergraph::new(self.n, &self.edges, self.r)?;
        if self.r.is_none() {
            return Ok(Hypergraph::from_sorted_unchecked(
                h.vertex_count(),
                h.edges().to_vec(),
                Uniformity::Mixed,
            ));
        }
        Ok(h)
    }
}

impl From<Hypergraph> for HypergraphDoc {
    fn from(h: Hypergraph) -> Self {
        HypergraphDoc::from_graph(&h)
    }
}

impl From<LabeledHypergraph> for HypergraphDoc {
    fn from(h: LabeledHypergraph) -> Self {
        HypergraphDoc::from_labeled(&h)
    }
}

impl TryFrom<HypergraphDoc> for Hypergraph {
    type Error = FormatError;

    fn try_from(doc: HypergraphDoc) -> Result<Self, FormatError> {
        doc.into_graph()
    }
}

impl TryFrom<HypergraphDoc> for LabeledHypergraph {
    type Error = FormatError;

    fn try_from(doc: HypergraphDoc) -> Result<Self, FormatError> {
        doc.into_labeled()
    }
}

pub fn to_json(h: &Hypergraph) -> String {
    serde_json::to_string(&HypergraphDoc::from_graph(h)).expect("hypergraph serializes")
}

pub fn labeled_to_json(h: &LabeledHypergraph) -> String {
    serde_json::to_string(&HypergraphDoc::from_labeled(h)).expect("hypergraph serializes")
}

pub fn from_json(text: &str) -> Result<Hypergraph, FormatError> {
    serde_json::from_str::<HypergraphDoc>(text)?.into_graph()
}

pub fn labeled_from_json(text: &str) -> Result<LabeledHypergraph, FormatError> {
    serde_json::from_str::<HypergraphDoc>(text)?.into_labeled()
}

/// Reads either format, choosing by the first non-blank character.
pub fn parse_any(text: &str) -> Result<LabeledHypergraph, FormatError> {
    if text.trim_start().starts_with('{') {
        labeled_from_json(text)
    } else {
        from_text(text).map(LabeledHypergraph::plain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let h = Hypergraph::new(6, [[0, 1, 2], [2, 3, 4]], Some(3)).unwrap();
        let text = to_text(&h);
        assert_eq!(text, "n 6 r 3\n0 1 2\n2 3 4\n");
        assert_eq!(from_text(&text).unwrap(), h);
    }

    #[test]
    fn text_comments_and_mixed() {
        let text = "# a comment\nn 4 r mixed\n0 1 2 # trailing\n\n2 3\n";
        let h = from_text(text).unwrap();
        assert_eq!(h.uniformity(), Uniformity::Mixed);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(from_text(&to_text(&h)).unwrap(), h);
    }

    #[test]
    fn text_errors() {
        assert!(matches!(
            from_text("0 1 2\n"),
            Err(FormatError::MissingHeader)
        ));
        assert!(matches!(
            from_text("n 3 r 3\n2 1 0\n"),
            Err(FormatError::NotAscending { line: 2 })
        ));
        assert!(matches!(
            from_text("n 3 r 3\n0 1 x\n"),
            Err(FormatError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            from_text("n 3 r 3\n0 1\n"),
            Err(FormatError::Invalid(HypergraphError::NonUniformEdge { .. }))
        ));
    }

    #[test]
    fn json_labels_survive() {
        let g = crate::hypergraph::integer_lattice(3, 2, 1000).unwrap();
        let text = labeled_to_json(&g);
        assert_eq!(labeled_from_json(&text).unwrap(), g);
        let unlabeled = from_json(r#"{"n":3,"r":3,"edges":[[0,1,2]]}"#).unwrap();
        assert_eq!(unlabeled.edge_count(), 1);
        assert!(from_json(r#"{"n":3,"edges":[[0,1,2]],"extra":1}"#).is_err());
    }

    #[test]
    fn json_labels_follow_document_order() {
        let doc = r#"{"n":5,"edges":[[2,3,4],[0,1,2]],"labels":[{"kind":"inserted","index":1},{"kind":"plain"}]}"#;
        let g = labeled_from_json(doc).unwrap();
        assert_eq!(g.graph().edges()[0], vec![0, 1, 2]);
        assert_eq!(g.labels(), &[EdgeLabel::Plain, EdgeLabel::Inserted(1)]);
    }
}
