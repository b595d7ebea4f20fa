//! Exact finite hypergraphs over contiguous vertex indices.
//!
//! A [`Hypergraph`] is immutable once built. Edges are stored as strictly
//! ascending vertex lists and the edge list itself is kept in lexicographic
//! order, so edge indices are stable for a given edge set.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on vertex and edge counts for products and lattices.
pub const DEFAULT_SIZE_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("vertex {vertex} is out of range for a hypergraph on {n} vertices")]
    OutOfRangeVertex { vertex: usize, n: usize },
    #[error("edge {edge:?} repeats vertex {vertex}")]
    RepeatedVertexInEdge { edge: Vec<usize>, vertex: usize },
    #[error("edge {0:?} appears more than once")]
    DuplicateEdge(Vec<usize>),
    #[error("edge {edge:?} has {found} vertices but the hypergraph is {expected}-uniform")]
    NonUniformEdge {
        edge: Vec<usize>,
        expected: usize,
        found: usize,
    },
    #[error("edges must contain at least one vertex")]
    EmptyEdge,
    #[error("label count {labels} does not match edge count {edges}")]
    LabelCountMismatch { labels: usize, edges: usize },
    #[error("result would have {vertices} vertices and {edges} edges, above the cap of {cap}")]
    ProductTooLarge {
        vertices: usize,
        edges: usize,
        cap: usize,
    },
    #[error("invalid parameters: {0}")]
    BadParameters(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Uniformity {
    Uniform(usize),
    Mixed,
}

impl Uniformity {
    pub fn order(self) -> Option<usize> {
        match self {
            Uniformity::Uniform(r) => Some(r),
            Uniformity::Mixed => None,
        }
    }
}

impl fmt::Display for Uniformity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Uniformity::Uniform(r) => write!(f, "{r}"),
            Uniformity::Mixed => f.write_str("mixed"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(
    into = "crate::io::HypergraphDoc",
    try_from = "crate::io::HypergraphDoc"
)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    uniformity: Uniformity,
}

/// Sizes of the three edge classes cut out by a vertex set `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutCounts {
    /// Edges meeting both `U` and its complement.
    pub crossing: usize,
    /// Edges inside `U`.
    pub inside: usize,
    /// Edges inside the complement of `U`.
    pub outside: usize,
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each edge and the edge list.
    ///
    /// When `r` is `None` the uniformity is inferred: `Uniform(s)` if there is
    /// at least one edge and all edges have `s` vertices, `Mixed` otherwise.
    pub fn new<I, E>(n: usize, edges: I, r: Option<usize>) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[usize]>,
    {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for raw in edges {
            let raw = raw.as_ref();
            if raw.is_empty() {
                return Err(HypergraphError::EmptyEdge);
            }
            let mut edge = raw.to_vec();
            edge.sort_unstable();
            for &v in &edge {
                if v >= n {
                    return Err(HypergraphError::OutOfRangeVertex { vertex: v, n });
                }
            }
            if let Some(w) = edge.windows(2).find(|w| w[0] == w[1]) {
                return Err(HypergraphError::RepeatedVertexInEdge {
                    edge: raw.to_vec(),
                    vertex: w[0],
                });
            }
            if let Some(r) = r {
                if edge.len() != r {
                    return Err(HypergraphError::NonUniformEdge {
                        found: edge.len(),
                        edge,
                        expected: r,
                    });
                }
            }
            out.push(edge);
        }
        out.sort();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            return Err(HypergraphError::DuplicateEdge(w[0].clone()));
        }
        let uniformity = match r {
            Some(r) => Uniformity::Uniform(r),
            None => infer_uniformity(&out),
        };
        Ok(Hypergraph {
            n,
            edges: out,
            uniformity,
        })
    }

    /// `n` isolated vertices, no edges.
    pub fn empty(n: usize, uniformity: Uniformity) -> Self {
        Hypergraph {
            n,
            edges: Vec::new(),
            uniformity,
        }
    }

    /// Internal constructor for edges already known to be valid; sorts and
    /// checks in debug builds only.
    pub(crate) fn from_sorted_unchecked(
        n: usize,
        mut edges: Vec<Vec<usize>>,
        uniformity: Uniformity,
    ) -> Self {
        edges.sort();
        debug_assert!(edges.windows(2).all(|w| w[0] != w[1]));
        debug_assert!(edges
            .iter()
            .all(|e| e.windows(2).all(|w| w[0] < w[1]) && e.iter().all(|&v| v < n)));
        Hypergraph {
            n,
            edges,
            uniformity,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &[usize] {
        &self.edges[index]
    }

    pub fn uniformity(&self) -> Uniformity {
        self.uniformity
    }

    /// Index of `edge` (any vertex order) in the sorted edge list.
    pub fn edge_index(&self, edge: &[usize]) -> Option<usize> {
        let mut key = edge.to_vec();
        key.sort_unstable();
        self.edges.binary_search(&key).ok()
    }

    /// True iff any two distinct edges share at most one vertex.
    pub fn is_linear(&self) -> bool {
        // Each vertex pair may be covered by at most one edge.
        let mut seen = BTreeSet::new();
        for e in &self.edges {
            for (i, &a) in e.iter().enumerate() {
                for &b in &e[i + 1..] {
                    if !seen.insert((a, b)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn degree(&self, v: usize) -> Result<usize, HypergraphError> {
        self.check_vertex(v)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.binary_search(&v).is_ok())
            .count())
    }

    /// Degrees of all vertices, indexed by vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// Deletes the vertices in `removed` together with every edge meeting
    /// them. Survivors are renumbered in increasing order.
    pub fn remove_vertices(&self, removed: &[usize]) -> Result<Hypergraph, HypergraphError> {
        let mut gone = vec![false; self.n];
        for &v in removed {
            self.check_vertex(v)?;
            gone[v] = true;
        }
        let mut relabel = vec![usize::MAX; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if !gone[v] {
                relabel[v] = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| !gone[v]))
            .map(|e| e.iter().map(|&v| relabel[v]).collect())
            .collect();
        Ok(Hypergraph::from_sorted_unchecked(
            next,
            edges,
            self.uniformity,
        ))
    }

    /// Sub-hypergraph induced on `keep` (edges entirely inside it), renumbered
    /// in increasing vertex order.
    pub fn induced(&self, keep: &[usize]) -> Result<Hypergraph, HypergraphError> {
        let mut inside = vec![false; self.n];
        for &v in keep {
            self.check_vertex(v)?;
            inside[v] = true;
        }
        let removed: Vec<usize> = (0..self.n).filter(|&v| !inside[v]).collect();
        self.remove_vertices(&removed)
    }

    /// Counts of crossing, inside and outside edges for the cut (`U`, complement).
    pub fn edges_between(&self, u: &[usize]) -> Result<CutCounts, HypergraphError> {
        let part = VertexPartition::bipartition(self.n, u)?;
        let in_u = part.membership(0);
        let mut counts = CutCounts {
            crossing: 0,
            inside: 0,
            outside: 0,
        };
        for e in &self.edges {
            let hits = e.iter().filter(|&&v| in_u[v]).count();
            if hits == 0 {
                counts.outside += 1;
            } else if hits == e.len() {
                counts.inside += 1;
            } else {
                counts.crossing += 1;
            }
        }
        Ok(counts)
    }

    /// Vertex sets of connected components, each ascending, ordered by their
    /// smallest vertex. Isolated vertices form singleton components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.edges {
            let root = find(&mut parent, e[0]);
            for &v in &e[1..] {
                let other = find(&mut parent, v);
                if other != root {
                    parent[other] = root;
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..self.n {
            let root = find(&mut parent, v);
            groups.entry(root).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort_by_key(|c| c[0]);
        out
    }

    fn check_vertex(&self, v: usize) -> Result<(), HypergraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(HypergraphError::OutOfRangeVertex {
                vertex: v,
                n: self.n,
            })
        }
    }
}

fn infer_uniformity(edges: &[Vec<usize>]) -> Uniformity {
    match edges.first() {
        Some(first) if edges.iter().all(|e| e.len() == first.len()) => {
            Uniformity::Uniform(first.len())
        }
        _ => Uniformity::Mixed,
    }
}

fn merge_uniformity<I: IntoIterator<Item = Uniformity>>(parts: I) -> Uniformity {
    let mut acc: Option<Uniformity> = None;
    for u in parts {
        acc = Some(match acc {
            None => u,
            Some(prev) if prev == u => prev,
            Some(_) => Uniformity::Mixed,
        });
    }
    acc.unwrap_or(Uniformity::Mixed)
}

/// Disjoint union; the vertices of `parts[i]` are shifted past those of all
/// earlier parts.
pub fn disjoint_union(parts: &[&Hypergraph]) -> Hypergraph {
    let mut offset = 0;
    let mut edges = Vec::new();
    for h in parts {
        edges.extend(
            h.edges
                .iter()
                .map(|e| e.iter().map(|&v| v + offset).collect::<Vec<_>>()),
        );
        offset += h.n;
    }
    let uniformity = merge_uniformity(parts.iter().map(|h| h.uniformity));
    Hypergraph::from_sorted_unchecked(offset, edges, uniformity)
}

/// `k` vertex-disjoint copies of `h`.
pub fn k_copies(h: &Hypergraph, k: usize) -> Hypergraph {
    let parts: Vec<&Hypergraph> = std::iter::repeat_n(h, k).collect();
    if parts.is_empty() {
        return Hypergraph::empty(0, h.uniformity);
    }
    disjoint_union(&parts)
}

/// Where an edge of a composite hypergraph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum EdgeLabel {
    /// `e x {g}`: a left-factor edge copied at right-factor vertex `g`.
    LeftFactor(usize),
    /// A lattice line varying coordinate `d`.
    LatticeDirection(usize),
    /// A colour class that received an extra vertex.
    Inserted(usize),
    Plain,
}

/// A hypergraph with exactly one [`EdgeLabel`] per edge, parallel to
/// [`Hypergraph::edges`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    into = "crate::io::HypergraphDoc",
    try_from = "crate::io::HypergraphDoc"
)]
pub struct LabeledHypergraph {
    graph: Hypergraph,
    labels: Vec<EdgeLabel>,
}

impl LabeledHypergraph {
    pub fn new(graph: Hypergraph, labels: Vec<EdgeLabel>) -> Result<Self, HypergraphError> {
        if labels.len() != graph.edge_count() {
            return Err(HypergraphError::LabelCountMismatch {
                labels: labels.len(),
                edges: graph.edge_count(),
            });
        }
        Ok(LabeledHypergraph { graph, labels })
    }

    /// Every edge labelled [`EdgeLabel::Plain`].
    pub fn plain(graph: Hypergraph) -> Self {
        let labels = vec![EdgeLabel::Plain; graph.edge_count()];
        LabeledHypergraph { graph, labels }
    }

    /// Builds from unsorted (edge, label) pairs; the pairs are sorted together.
    pub(crate) fn from_pairs(
        n: usize,
        mut pairs: Vec<(Vec<usize>, EdgeLabel)>,
        uniformity: Uniformity,
    ) -> Self {
        pairs.sort();
        let (edges, labels): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        LabeledHypergraph {
            graph: Hypergraph::from_sorted_unchecked(n, edges, uniformity),
            labels,
        }
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn labels(&self) -> &[EdgeLabel] {
        &self.labels
    }

    pub fn into_parts(self) -> (Hypergraph, Vec<EdgeLabel>) {
        (self.graph, self.labels)
    }

    /// Indices of edges carrying `label`.
    pub fn edges_labeled(&self, label: EdgeLabel) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |(_, &l)| l == label)
            .map(|(i, _)| i)
    }
}

/// Encodes the product vertex `(h, g)` as `h * |V(G)| + g`.
pub fn product_vertex(h: usize, g: usize, right_order: usize) -> usize {
    h * right_order + g
}

/// Inverse of [`product_vertex`].
pub fn product_vertex_parts(v: usize, right_order: usize) -> (usize, usize) {
    (v / right_order, v % right_order)
}

/// Cartesian product `H □ G`.
///
/// Left-factor edges `e x {g}` are labelled `LeftFactor(g)`; right-factor
/// edges `{h} x e'` keep the label `e'` carries in `right`.
pub fn cartesian_product(
    left: &Hypergraph,
    right: &LabeledHypergraph,
    cap: usize,
) -> Result<LabeledHypergraph, HypergraphError> {
    let g = right.graph();
    let vertices = left.n.checked_mul(g.n);
    let edges = left
        .edge_count()
        .checked_mul(g.n)
        .zip(g.edge_count().checked_mul(left.n))
        .and_then(|(a, b)| a.checked_add(b));
    let (vertices, edges) = match (vertices, edges) {
        (Some(v), Some(e)) if v <= cap && e <= cap => (v, e),
        (v, e) => {
            return Err(HypergraphError::ProductTooLarge {
                vertices: v.unwrap_or(usize::MAX),
                edges: e.unwrap_or(usize::MAX),
                cap,
            })
        }
    };
    let mut pairs = Vec::with_capacity(edges);
    for e in left.edges() {
        for u in 0..g.n {
            let image = e.iter().map(|&h| product_vertex(h, u, g.n)).collect();
            pairs.push((image, EdgeLabel::LeftFactor(u)));
        }
    }
    for (e, &label) in g.edges().iter().zip(right.labels()) {
        for h in 0..left.n {
            let image = e.iter().map(|&u| product_vertex(h, u, g.n)).collect();
            pairs.push((image, label));
        }
    }
    let uniformity = match (left.edge_count(), g.edge_count()) {
        (0, 0) => merge_uniformity([left.uniformity, g.uniformity]),
        (0, _) => g.uniformity,
        (_, 0) => left.uniformity,
        _ => merge_uniformity([left.uniformity, g.uniformity]),
    };
    let product = LabeledHypergraph::from_pairs(vertices, pairs, uniformity);
    debug_assert!(!(left.is_linear() && g.is_linear()) || product.graph.is_linear());
    Ok(product)
}

/// Row-major index of a lattice point: `x[0]` is the most significant digit.
pub fn lattice_index(point: &[usize], side: usize) -> usize {
    point.iter().fold(0, |acc, &x| acc * side + x)
}

/// Inverse of [`lattice_index`] for a `dim`-dimensional lattice.
pub fn lattice_point(mut index: usize, side: usize, dim: usize) -> Vec<usize> {
    let mut point = vec![0; dim];
    for slot in point.iter_mut().rev() {
        *slot = index % side;
        index /= side;
    }
    point
}

/// The integer lattice `[side]^dim` as a hypergraph: each axis-parallel line is
/// an edge, labelled with the coordinate it varies.
pub fn integer_lattice(
    side: usize,
    dim: usize,
    cap: usize,
) -> Result<LabeledHypergraph, HypergraphError> {
    if side < 2 || dim < 1 {
        return Err(HypergraphError::BadParameters(format!(
            "lattice needs side >= 2 and dimension >= 1, got side {side}, dimension {dim}"
        )));
    }
    let too_large = || HypergraphError::ProductTooLarge {
        vertices: usize::MAX,
        edges: usize::MAX,
        cap,
    };
    let vertices = u32::try_from(dim)
        .ok()
        .and_then(|d| side.checked_pow(d))
        .ok_or_else(too_large)?;
    let edges = (vertices / side).checked_mul(dim).ok_or_else(too_large)?;
    if vertices > cap || edges > cap {
        return Err(HypergraphError::ProductTooLarge {
            vertices,
            edges,
            cap,
        });
    }
    let stride = |d: usize| side.pow((dim - 1 - d) as u32);
    let mut pairs = Vec::with_capacity(edges);
    for d in 0..dim {
        let step = stride(d);
        for v in 0..vertices {
            if (v / step) % side != 0 {
                continue;
            }
            let line = (0..side).map(|t| v + t * step).collect();
            pairs.push((line, EdgeLabel::LatticeDirection(d)));
        }
    }
    Ok(LabeledHypergraph::from_pairs(
        vertices,
        pairs,
        Uniformity::Uniform(side),
    ))
}

/// Named, pairwise disjoint vertex sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPartition {
    n: usize,
    parts: Vec<(String, Vec<usize>)>,
}

impl VertexPartition {
    pub fn new(n: usize, parts: Vec<(String, Vec<usize>)>) -> Result<Self, HypergraphError> {
        let mut owner = vec![false; n];
        let mut normalized = Vec::with_capacity(parts.len());
        for (name, mut set) in parts {
            set.sort_unstable();
            set.dedup();
            for &v in &set {
                if v >= n {
                    return Err(HypergraphError::OutOfRangeVertex { vertex: v, n });
                }
                if owner[v] {
                    return Err(HypergraphError::BadParameters(format!(
                        "vertex {v} belongs to two parts"
                    )));
                }
                owner[v] = true;
            }
            normalized.push((name, set));
        }
        Ok(VertexPartition {
            n,
            parts: normalized,
        })
    }

    /// `U` and its complement, named "U" and "complement".
    pub fn bipartition(n: usize, u: &[usize]) -> Result<Self, HypergraphError> {
        let mut inside = vec![false; n];
        for &v in u {
            if v >= n {
                return Err(HypergraphError::OutOfRangeVertex { vertex: v, n });
            }
            inside[v] = true;
        }
        let rest = (0..n).filter(|&v| !inside[v]).collect();
        VertexPartition::new(
            n,
            vec![("U".into(), u.to_vec()), ("complement".into(), rest)],
        )
    }

    pub fn parts(&self) -> &[(String, Vec<usize>)] {
        &self.parts
    }

    /// Indicator vector of part `index`.
    pub fn membership(&self, index: usize) -> Vec<bool> {
        let mut mark = vec![false; self.n];
        for &v in &self.parts[index].1 {
            mark[v] = true;
        }
        mark
    }
}
