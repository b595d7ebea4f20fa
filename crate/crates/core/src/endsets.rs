//! End-vertex machinery around an embedded linear path `P_{ell-1}`.
//!
//! Path vertices are labelled `v_1, ..., v_{(ell-1)(r-1)+1}` along the path;
//! `labels()[i]` is the host vertex carrying `v_{i+1}`. Edge `e_i` of the path
//! is `{v_{(i-1)(r-1)+1}, ..., v_{i(r-1)+1}}`.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detect::{self, Embedding, Symmetry};
use crate::hypergraph::Hypergraph;
use crate::pattern::{Component, ForbiddenPattern};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndsetsError {
    #[error("embedding is not a verified P_{expected} embedding")]
    NotAPathEmbedding { expected: usize },
    #[error("host is not linear")]
    HostNotLinear,
    #[error("host contains P_{ell}")]
    HostContainsPath { ell: usize, witness: Box<Embedding> },
    #[error("invalid parameters: {0}")]
    BadParameters(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexClass {
    LeftEnd,
    Interior,
    RightEnd,
    Exterior,
}

#[derive(Debug, Clone)]
pub struct PathFrame<'h> {
    host: &'h Hypergraph,
    r: usize,
    ell: usize,
    labels: Vec<usize>,
    class: Vec<VertexClass>,
}

impl<'h> PathFrame<'h> {
    pub fn host(&self) -> &'h Hypergraph {
        self.host
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Host vertex carrying `v_j` (1-based).
    pub fn v(&self, j: usize) -> usize {
        self.labels[j - 1]
    }

    pub fn class(&self, vertex: usize) -> VertexClass {
        self.class[vertex]
    }

    fn members(&self, c: VertexClass) -> Vec<usize> {
        (0..self.class.len())
            .filter(|&v| self.class[v] == c)
            .collect()
    }

    pub fn left_ends(&self) -> Vec<usize> {
        self.labels[..self.r - 1].to_vec()
    }

    pub fn right_ends(&self) -> Vec<usize> {
        self.labels[(self.ell - 2) * (self.r - 1) + 1..].to_vec()
    }

    pub fn interior(&self) -> Vec<usize> {
        self.labels[self.r - 1..(self.ell - 2) * (self.r - 1) + 1].to_vec()
    }

    pub fn exterior(&self) -> Vec<usize> {
        self.members(VertexClass::Exterior)
    }

    fn on_path(&self, v: usize) -> bool {
        self.class[v] != VertexClass::Exterior
    }
}

/// Classifies host vertices relative to an embedded `P_{ell-1}`.
pub fn build_frame<'h>(
    host: &'h Hypergraph,
    emb: &Embedding,
    ell: usize,
) -> Result<PathFrame<'h>, EndsetsError> {
    if ell < 3 {
        return Err(EndsetsError::BadParameters(format!(
            "need ell >= 3, got {ell}"
        )));
    }
    let r = emb.pattern.r();
    if emb.pattern.components() != [Component::Path(ell - 1)]
        || !detect::verify_embedding(host, emb).unwrap_or(false)
    {
        return Err(EndsetsError::NotAPathEmbedding { expected: ell - 1 });
    }
    frame_from_labels(host, r, ell, emb.vertex_map.clone())
}

fn frame_from_labels(
    host: &Hypergraph,
    r: usize,
    ell: usize,
    labels: Vec<usize>,
) -> Result<PathFrame<'_>, EndsetsError> {
    if !host.is_linear() {
        return Err(EndsetsError::HostNotLinear);
    }
    let mut class = vec![VertexClass::Exterior; host.vertex_count()];
    let right_from = (ell - 2) * (r - 1) + 1;
    for (i, &v) in labels.iter().enumerate() {
        class[v] = if i < r - 1 {
            VertexClass::LeftEnd
        } else if i >= right_from {
            VertexClass::RightEnd
        } else {
            VertexClass::Interior
        };
    }
    Ok(PathFrame {
        host,
        r,
        ell,
        labels,
        class,
    })
}

/// `a[k][i]` is `A_k(v_{i+1})` and `b[k][i]` is `B_k` of the `(i+1)`-th right
/// end, as ascending host-edge indices; index `k = 0` is unused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndSets {
    pub a: Vec<Vec<Vec<usize>>>,
    pub b: Vec<Vec<Vec<usize>>>,
}

impl EndSets {
    pub fn a1(&self) -> Vec<usize> {
        union(&self.a[1])
    }

    pub fn b1(&self) -> Vec<usize> {
        union(&self.b[1])
    }

    pub fn a_total(&self, i: usize) -> usize {
        self.a
            .iter()
            .map(|per| per.get(i).map_or(0, Vec::len))
            .sum()
    }

    pub fn b_total(&self, i: usize) -> usize {
        self.b
            .iter()
            .map(|per| per.get(i).map_or(0, Vec::len))
            .sum()
    }

    pub fn a_weighted(&self, i: usize) -> usize {
        self.a
            .iter()
            .enumerate()
            .map(|(k, per)| k * per.get(i).map_or(0, Vec::len))
            .sum()
    }

    pub fn b_weighted(&self, i: usize) -> usize {
        self.b
            .iter()
            .enumerate()
            .map(|(k, per)| k * per.get(i).map_or(0, Vec::len))
            .sum()
    }
}

fn union(sets: &[Vec<usize>]) -> Vec<usize> {
    let mut all: Vec<usize> = sets.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all
}

/// A violated cardinality bound; only possible on a non-linear host or
/// through a bug.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundFailure {
    pub what: String,
    pub value: usize,
    pub bound: usize,
}

pub fn end_edge_sets(frame: &PathFrame<'_>) -> EndSets {
    let r = frame.r;
    let sets_for = |ends: Vec<usize>| -> Vec<Vec<Vec<usize>>> {
        let mut out = vec![vec![Vec::new(); ends.len()]; r];
        for (i, &u) in ends.iter().enumerate() {
            for (idx, e) in frame.host.edges().iter().enumerate() {
                if e.len() != r || !e.contains(&u) {
                    continue;
                }
                let meet: Vec<usize> = e
                    .iter()
                    .copied()
                    .filter(|&w| w != u && frame.on_path(w))
                    .collect();
                let k = meet.len();
                if k == 0 {
                    continue;
                }
                if k == 1 && frame.class[meet[0]] != VertexClass::Interior {
                    continue;
                }
                out[k][i].push(idx);
            }
        }
        out
    };
    EndSets {
        a: sets_for(frame.left_ends()),
        b: sets_for(frame.right_ends()),
    }
}

/// The bounds every linear host satisfies: `|A_1(u)| <= (r-1)(ell-3)`,
/// `|A_1 ∪ B_1| <= 2(r-1)^2(ell-3)`, `sum_k k|A_k(u)| <= (r-1)(ell-1)` and the
/// mirror statements for right ends, plus disjointness of `A_1` and `B_1`.
pub fn cardinality_failures(frame: &PathFrame<'_>, sets: &EndSets) -> Vec<BoundFailure> {
    let (r, ell) = (frame.r, frame.ell);
    let mut out = Vec::new();
    let mut check = |what: String, value: usize, bound: usize| {
        if value > bound {
            out.push(BoundFailure { what, value, bound });
        }
    };
    for i in 0..r - 1 {
        check(
            format!("|A_1(left end {})|", i + 1),
            sets.a[1][i].len(),
            (r - 1) * (ell - 3),
        );
        check(
            format!("|B_1(right end {})|", i + 1),
            sets.b[1][i].len(),
            (r - 1) * (ell - 3),
        );
        check(
            format!("sum k|A_k(left end {})|", i + 1),
            sets.a_weighted(i),
            (r - 1) * (ell - 1),
        );
        check(
            format!("sum k|B_k(right end {})|", i + 1),
            sets.b_weighted(i),
            (r - 1) * (ell - 1),
        );
    }
    let (a1, b1) = (sets.a1(), sets.b1());
    let shared = a1.iter().filter(|e| b1.contains(e)).count();
    check("|A_1 ∩ B_1|".into(), shared, 0);
    check(
        "|A_1 ∪ B_1|".into(),
        a1.len() + b1.len() - shared,
        2 * (r - 1) * (r - 1) * (ell - 3),
    );
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Traversal {
    pub f1: usize,
    pub f2: usize,
    pub i: usize,
}

/// Pairs `f1 ∈ A_1`, `f2 ∈ B_1` with `v_{i(r-1)+1} ∈ f1` and `v_{i(r-1)} ∈ f2`
/// for `2 <= i <= ell-2`.
pub fn traversing_pairs(frame: &PathFrame<'_>, sets: &EndSets) -> Vec<Traversal> {
    let r = frame.r;
    let (a1, b1) = (sets.a1(), sets.b1());
    let mut out = Vec::new();
    for i in 2..=frame.ell.saturating_sub(2) {
        let hi = frame.v(i * (r - 1) + 1);
        let lo = frame.v(i * (r - 1));
        for &f1 in a1.iter().filter(|&&f| frame.host.edge(f).contains(&hi)) {
            for &f2 in b1.iter().filter(|&&f| frame.host.edge(f).contains(&lo)) {
                out.push(Traversal { f1, f2, i });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// `v_j` lies in an `A_1` edge and a `B_1` edge.
    SharedInterior {
        i: usize,
        j: usize,
        f1: usize,
        f2: usize,
    },
    /// A traversing pair with disjoint edges.
    DisjointTraversal {
        i: usize,
        f1: usize,
        f2: usize,
    },
    /// No other left end avoids `A_1` together with `v_{i(r-1)+1}`, or the
    /// mirror statement on the right.
    NoFreeEnd {
        i: usize,
        f1: usize,
        f2: usize,
        side: String,
    },
    /// For some `t`, every right end shares a `B_1` edge with `v_t`.
    NoFreeRightEndForT {
        i: usize,
        t: usize,
        f1: usize,
        f2: usize,
    },
    /// Every end pair has `|A_1(u)| + |B_1(v)|` above the bound.
    EndPairBound {
        min: usize,
        bound: usize,
    },
    /// An end vertex whose degree exceeds `sum_k |A_k| + r - 1`.
    EndDegree {
        vertex: usize,
        degree: usize,
        bound: usize,
    },
    Cardinality(BoundFailure),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Section2Status {
    Passed,
    Failed {
        counterexamples: Vec<Counterexample>,
    },
    NotApplicable {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section2Report {
    pub labels: Vec<usize>,
    pub status: Section2Status,
    pub traversing_pairs: usize,
    /// Smallest `|A_1(u)| + |B_1(v)|` over left ends `u` and right ends `v`.
    pub min_end_pair: Option<usize>,
    pub end_pair_bound: Option<usize>,
    /// Whether one right end works for every `t` at once in the `r >= 4`
    /// statement; informational only.
    pub uniform_right_end: bool,
}

impl Section2Report {
    pub fn passed(&self) -> bool {
        !matches!(self.status, Section2Status::Failed { .. })
    }
}

fn in_some(host: &Hypergraph, edges: &[usize], x: usize, y: usize) -> bool {
    edges.iter().any(|&f| {
        let e = host.edge(f);
        e.contains(&x) && e.contains(&y)
    })
}

/// Checks the end-set lemmas on one labelled path, assuming the host is
/// linear and `P_ell`-free.
pub fn check_frame(frame: &PathFrame<'_>) -> Section2Report {
    let (r, ell, host) = (frame.r, frame.ell, frame.host);
    let base = Section2Report {
        labels: frame.labels.clone(),
        status: Section2Status::Passed,
        traversing_pairs: 0,
        min_end_pair: None,
        end_pair_bound: None,
        uniform_right_end: true,
    };
    if ell < 4 {
        return Section2Report {
            status: Section2Status::NotApplicable {
                reason: format!("lemma checks need ell >= 4, got {ell}"),
            },
            ..base
        };
    }
    let sets = end_edge_sets(frame);
    let (a1, b1) = (sets.a1(), sets.b1());
    let lefts = frame.left_ends();
    let rights = frame.right_ends();
    let mut bad: Vec<Counterexample> = cardinality_failures(frame, &sets)
        .into_iter()
        .map(Counterexample::Cardinality)
        .collect();

    for i in 2..=ell - 2 {
        for j in (i - 1) * (r - 1) + 2..=i * (r - 1) {
            let vj = frame.v(j);
            let f1 = a1.iter().find(|&&f| host.edge(f).contains(&vj));
            let f2 = b1.iter().find(|&&f| host.edge(f).contains(&vj));
            if let (Some(&f1), Some(&f2)) = (f1, f2) {
                bad.push(Counterexample::SharedInterior { i, j, f1, f2 });
            }
        }
    }

    let pairs = traversing_pairs(frame, &sets);
    let mut uniform = true;
    for t in &pairs {
        let (e1, e2) = (host.edge(t.f1), host.edge(t.f2));
        if !e1.iter().any(|v| e2.contains(v)) {
            bad.push(Counterexample::DisjointTraversal {
                i: t.i,
                f1: t.f1,
                f2: t.f2,
            });
        }
        let hi = frame.v(t.i * (r - 1) + 1);
        let lo = frame.v(t.i * (r - 1));
        let vj = *lefts
            .iter()
            .find(|u| e1.contains(u))
            .expect("A_1 edge holds a left end");
        let vk = *rights
            .iter()
            .find(|u| e2.contains(u))
            .expect("B_1 edge holds a right end");
        if !lefts.iter().any(|&u| u != vj && !in_some(host, &a1, u, hi)) {
            bad.push(Counterexample::NoFreeEnd {
                i: t.i,
                f1: t.f1,
                f2: t.f2,
                side: "left".into(),
            });
        }
        if !rights
            .iter()
            .any(|&w| w != vk && !in_some(host, &b1, w, lo))
        {
            bad.push(Counterexample::NoFreeEnd {
                i: t.i,
                f1: t.f1,
                f2: t.f2,
                side: "right".into(),
            });
        }
        if r >= 4 {
            let ts: Vec<usize> = ((t.i - 1) * (r - 1) + 2..=(t.i - 1) * (r - 1) + r - 2).collect();
            for &tt in &ts {
                let vt = frame.v(tt);
                if !rights.iter().any(|&w| !in_some(host, &b1, w, vt)) {
                    bad.push(Counterexample::NoFreeRightEndForT {
                        i: t.i,
                        t: tt,
                        f1: t.f1,
                        f2: t.f2,
                    });
                }
            }
            uniform &= rights
                .iter()
                .any(|&w| ts.iter().all(|&tt| !in_some(host, &b1, w, frame.v(tt))));
        }
    }

    let bound = 2 * (r - 2) * (ell - 3);
    let min = (0..r - 1)
        .flat_map(|i| (0..r - 1).map(move |j| (i, j)))
        .map(|(i, j)| sets.a[1][i].len() + sets.b[1][j].len())
        .min()
        .expect("r >= 2");
    if min > bound {
        bad.push(Counterexample::EndPairBound { min, bound });
    }

    for (i, &u) in lefts.iter().enumerate() {
        let d = host.degree(u).expect("label in range");
        let cap = sets.a_total(i) + r - 1;
        if d > cap {
            bad.push(Counterexample::EndDegree {
                vertex: u,
                degree: d,
                bound: cap,
            });
        }
    }
    for (i, &u) in rights.iter().enumerate() {
        let d = host.degree(u).expect("label in range");
        let cap = sets.b_total(i) + r - 1;
        if d > cap {
            bad.push(Counterexample::EndDegree {
                vertex: u,
                degree: d,
                bound: cap,
            });
        }
    }

    Section2Report {
        status: if bad.is_empty() {
            Section2Status::Passed
        } else {
            Section2Status::Failed {
                counterexamples: bad,
            }
        },
        traversing_pairs: pairs.len(),
        min_end_pair: Some(min),
        end_pair_bound: Some(bound),
        uniform_right_end: uniform,
        ..base
    }
}

fn precheck(host: &Hypergraph, r: usize, ell: usize) -> Result<(), EndsetsError> {
    if !host.is_linear() {
        return Err(EndsetsError::HostNotLinear);
    }
    let pattern =
        ForbiddenPattern::path(r, ell).map_err(|e| EndsetsError::BadParameters(e.to_string()))?;
    if let Some(w) = detect::contains_forest(host, &pattern) {
        return Err(EndsetsError::HostContainsPath {
            ell,
            witness: Box::new(w),
        });
    }
    Ok(())
}

/// Verifies the lemmas for one embedding of `P_{ell-1}` in a linear
/// `P_ell`-free host.
pub fn verify_section2(
    host: &Hypergraph,
    emb: &Embedding,
    ell: usize,
) -> Result<Section2Report, EndsetsError> {
    let frame = build_frame(host, emb, ell)?;
    precheck(host, frame.r, ell)?;
    Ok(check_frame(&frame))
}

/// Runs [`check_frame`] over every labelled embedding of `P_{ell-1}`: both
/// directions of every copy and every order of the non-junction vertices of
/// each interior edge.
pub fn verify_all_embeddings(
    host: &Hypergraph,
    r: usize,
    ell: usize,
) -> Result<Vec<Section2Report>, EndsetsError> {
    if ell < 3 {
        return Err(EndsetsError::BadParameters(format!(
            "need ell >= 3, got {ell}"
        )));
    }
    precheck(host, r, ell)?;
    let pattern = ForbiddenPattern::path(r, ell - 1)
        .map_err(|e| EndsetsError::BadParameters(e.to_string()))?;
    let mut reports = Vec::new();
    let _ = detect::for_each_embedding(host, &pattern, Symmetry::Full, |emb| {
        for labels in relabelings(&emb.vertex_map, r, ell) {
            let frame = frame_from_labels(host, r, ell, labels).expect("host checked linear");
            reports.push(check_frame(&frame));
        }
        ControlFlow::Continue(())
    });
    Ok(reports)
}

fn relabelings(labels: &[usize], r: usize, ell: usize) -> Vec<Vec<usize>> {
    let mut out = vec![labels.to_vec()];
    for i in 2..=ell.saturating_sub(2) {
        let lo = (i - 1) * (r - 1) + 1;
        let hi = i * (r - 1);
        let mut next = Vec::new();
        for base in &out {
            for perm in permutations(&base[lo..hi]) {
                let mut l = base.clone();
                l[lo..hi].copy_from_slice(&perm);
                next.push(l);
            }
        }
        out = next;
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}
