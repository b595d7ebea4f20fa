//! Exact containment of linear paths, stars, cycles and their disjoint unions.
//!
//! Only host edges whose order equals the pattern's uniformity take part, so
//! in a mixed host the other edges are invisible.
//!
//! A witness is reported as an [`Embedding`]. In deterministic mode the witness
//! is the lexicographically least host-edge sequence, where pattern edges are
//! listed component by component in canonical order, paths and cycles in
//! traversal order and stars in ascending host order.

mod search;

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::pattern::{Component, ForbiddenPattern, PatternError};

use search::{hitting_set, Host, Search};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error("malformed embedding: {0}")]
    MalformedEmbedding(String),
}

/// Pattern edges and vertices mapped into a host. `edge_map[i]` is the host
/// edge for edge `i` of `pattern.realize()`; `vertex_map[v]` likewise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub pattern: ForbiddenPattern,
    pub edge_map: Vec<usize>,
    pub vertex_map: Vec<usize>,
}

impl Embedding {
    pub fn host_edges(&self) -> Vec<usize> {
        let mut e = self.edge_map.clone();
        e.sort_unstable();
        e
    }

    pub fn host_vertices(&self) -> Vec<usize> {
        let mut v = self.vertex_map.clone();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Single-threaded; the witness is the lexicographically least one.
    #[default]
    Deterministic,
    /// Parallel over first edges; only presence or absence is guaranteed.
    Parallel,
}

/// Whether enumeration lists each copy once or every labelled sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Reduced,
    Full,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    pub mode: SearchMode,
    /// Required centre; honoured only for a single-star pattern.
    pub centre: Option<usize>,
    /// Host edge that every reported embedding must use.
    pub forced_edge: Option<usize>,
}

/// Per-component structural edge lists in pattern vertex ids, plus the
/// position of each structural edge in the realized pattern.
struct Layout {
    r: usize,
    comps: Vec<(Component, usize, Vec<Vec<usize>>)>,
    realized_index: Vec<Vec<usize>>,
    vertex_count: usize,
    edge_count: usize,
}

impl Layout {
    fn new(pattern: &ForbiddenPattern) -> Self {
        let r = pattern.r();
        let realized = pattern.realize();
        let mut comps = Vec::new();
        let mut realized_index = Vec::new();
        let mut offset = 0;
        for &c in pattern.components() {
            let nv = c.vertex_count(r);
            let edges: Vec<Vec<usize>> =
                (0..c.length()).map(|i| structural_edge(c, r, i)).collect();
            realized_index.push(
                edges
                    .iter()
                    .map(|e| {
                        let mut shifted: Vec<usize> = e.iter().map(|v| v + offset).collect();
                        shifted.sort_unstable();
                        realized
                            .edge_index(&shifted)
                            .expect("layout matches realization")
                    })
                    .collect(),
            );
            comps.push((c, offset, edges));
            offset += nv;
        }
        Layout {
            r,
            comps,
            realized_index,
            vertex_count: realized.vertex_count(),
            edge_count: realized.edge_count(),
        }
    }

    fn embedding(
        &self,
        pattern: &ForbiddenPattern,
        host: &Host<'_>,
        seq: &[usize],
        centre: Option<usize>,
    ) -> Embedding {
        let mut edge_map = vec![0; self.edge_count];
        let mut vertex_map = vec![usize::MAX; self.vertex_count];
        let mut at = 0;
        for (ci, (comp, offset, edges)) in self.comps.iter().enumerate() {
            let len = comp.length();
            let images: Vec<&[usize]> = seq[at..at + len].iter().map(|&f| host.edge(f)).collect();
            for (i, &f) in seq[at..at + len].iter().enumerate() {
                edge_map[self.realized_index[ci][i]] = host.host_index(f);
            }
            let nv = comp.vertex_count(self.r);
            let mut local = vec![usize::MAX; nv];
            match comp {
                Component::Path(_) | Component::Cycle(_) => {
                    let links = if matches!(comp, Component::Cycle(_)) {
                        len
                    } else {
                        len - 1
                    };
                    for i in 0..links {
                        let j = (i + 1) % len;
                        local[((i + 1) * (self.r - 1)) % nv] = meet(images[i], images[j]);
                    }
                }
                Component::Star(_) => {
                    local[0] = if len >= 2 {
                        meet(images[0], images[1])
                    } else {
                        centre
                            .filter(|z| images[0].contains(z))
                            .unwrap_or(images[0][0])
                    };
                }
            }
            for (i, pe) in edges.iter().enumerate() {
                let taken: Vec<usize> = pe
                    .iter()
                    .filter(|&&p| local[p] != usize::MAX)
                    .map(|&p| local[p])
                    .collect();
                let mut free_pattern: Vec<usize> = pe
                    .iter()
                    .copied()
                    .filter(|&p| local[p] == usize::MAX)
                    .collect();
                free_pattern.sort_unstable();
                let free_host = images[i].iter().copied().filter(|v| !taken.contains(v));
                for (p, v) in free_pattern.into_iter().zip(free_host) {
                    local[p] = v;
                }
            }
            for (p, v) in local.into_iter().enumerate() {
                vertex_map[offset + p] = v;
            }
            at += len;
        }
        Embedding {
            pattern: pattern.clone(),
            edge_map,
            vertex_map,
        }
    }
}

fn structural_edge(c: Component, r: usize, i: usize) -> Vec<usize> {
    match c {
        Component::Path(_) => (i * (r - 1)..=(i + 1) * (r - 1)).collect(),
        Component::Star(_) => std::iter::once(0)
            .chain(i * (r - 1) + 1..=(i + 1) * (r - 1))
            .collect(),
        Component::Cycle(l) => {
            let n = l * (r - 1);
            (i * (r - 1)..=(i + 1) * (r - 1)).map(|v| v % n).collect()
        }
    }
}

fn meet(a: &[usize], b: &[usize]) -> usize {
    *a.iter()
        .find(|v| b.contains(v))
        .expect("consecutive witness edges meet")
}

fn too_small(host: &Host<'_>, pattern: &ForbiddenPattern) -> bool {
    pattern.edge_count() > host.edge_count() || pattern.vertex_count() > host.touched_vertices()
}

/// Searches `host` for `pattern`.
pub fn find(
    host: &Hypergraph,
    pattern: &ForbiddenPattern,
    opts: SearchOptions,
) -> Option<Embedding> {
    let index = Host::new(host, pattern.r());
    if too_small(&index, pattern) {
        return None;
    }
    let forced = match opts.forced_edge {
        Some(e) => Some(index.local_index(e)?),
        None => None,
    };
    let comps = pattern.components().to_vec();
    let hitting = if comps.len() > 1 {
        hitting_set(&index, &comps)
    } else {
        None
    };
    if hitting.as_ref().is_some_and(|u| u.len() < comps.len()) {
        return None;
    }
    let mut search = Search::new(&index, comps, true)
        .with_centre(opts.centre)
        .with_forced(forced)
        .with_hitting(hitting);
    let seq = match opts.mode {
        SearchMode::Deterministic => search.first(),
        SearchMode::Parallel => search.any_parallel(),
    }?;
    Some(Layout::new(pattern).embedding(pattern, &index, &seq, opts.centre))
}

pub fn contains_forest(host: &Hypergraph, pattern: &ForbiddenPattern) -> Option<Embedding> {
    find(host, pattern, SearchOptions::default())
}

pub fn contains_path(
    host: &Hypergraph,
    r: usize,
    ell: usize,
) -> Result<Option<Embedding>, PatternError> {
    Ok(contains_forest(host, &ForbiddenPattern::path(r, ell)?))
}

pub fn contains_cycle(
    host: &Hypergraph,
    r: usize,
    ell: usize,
) -> Result<Option<Embedding>, PatternError> {
    Ok(contains_forest(host, &ForbiddenPattern::cycle(r, ell)?))
}

pub fn contains_star(
    host: &Hypergraph,
    r: usize,
    ell: usize,
    centre: Option<usize>,
) -> Result<Option<Embedding>, PatternError> {
    let pattern = ForbiddenPattern::star(r, ell)?;
    Ok(find(
        host,
        &pattern,
        SearchOptions {
            centre,
            ..SearchOptions::default()
        },
    ))
}

/// Embeddings that use the given host edge.
pub fn contains_using_edge(
    host: &Hypergraph,
    pattern: &ForbiddenPattern,
    edge: usize,
) -> Option<Embedding> {
    find(
        host,
        pattern,
        SearchOptions {
            forced_edge: Some(edge),
            ..SearchOptions::default()
        },
    )
}

/// Degree test for stars: in a linear host any `ell` edges through one vertex
/// form a linear star. `None` when the host is not linear.
pub fn star_shortcut(host: &Hypergraph, r: usize, ell: usize) -> Option<bool> {
    let index = Host::new(host, r);
    let edges: Vec<Vec<usize>> = (0..index.edge_count())
        .map(|l| index.edge(l).to_vec())
        .collect();
    let sub = Hypergraph::new(host.vertex_count(), edges, Some(r)).ok()?;
    sub.is_linear().then(|| sub.max_degree() >= ell)
}

pub fn is_free(host: &Hypergraph, pattern: &ForbiddenPattern) -> bool {
    if let [Component::Star(ell)] = pattern.components() {
        if let Some(present) = star_shortcut(host, pattern.r(), *ell) {
            return !present;
        }
    }
    contains_forest(host, pattern).is_none()
}

/// Visits every embedding. With [`Symmetry::Reduced`] each copy of the pattern
/// is visited once; with [`Symmetry::Full`] every labelled edge sequence is
/// visited (both directions of a path, every ordering of star edges and of
/// identical components, every rotation and reflection of a cycle).
pub fn for_each_embedding(
    host: &Hypergraph,
    pattern: &ForbiddenPattern,
    symmetry: Symmetry,
    mut visit: impl FnMut(&Embedding) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let index = Host::new(host, pattern.r());
    if too_small(&index, pattern) {
        return ControlFlow::Continue(());
    }
    let layout = Layout::new(pattern);
    let mut search = Search::new(
        &index,
        pattern.components().to_vec(),
        symmetry == Symmetry::Reduced,
    );
    search.run(&mut |seq| visit(&layout.embedding(pattern, &index, seq, None)))
}

pub fn count_embeddings(
    host: &Hypergraph,
    pattern: &ForbiddenPattern,
    symmetry: Symmetry,
) -> usize {
    let mut count = 0;
    let _ = for_each_embedding(host, pattern, symmetry, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// Rechecks an embedding from scratch: both maps injective and every pattern
/// edge carried exactly onto its host edge.
pub fn verify_embedding(host: &Hypergraph, emb: &Embedding) -> Result<bool, DetectError> {
    let pattern = emb.pattern.realize();
    if emb.edge_map.len() != pattern.edge_count() {
        return Err(DetectError::MalformedEmbedding(format!(
            "{} edge images for {} pattern edges",
            emb.edge_map.len(),
            pattern.edge_count()
        )));
    }
    if emb.vertex_map.len() != pattern.vertex_count() {
        return Err(DetectError::MalformedEmbedding(format!(
            "{} vertex images for {} pattern vertices",
            emb.vertex_map.len(),
            pattern.vertex_count()
        )));
    }
    let distinct = |xs: &[usize]| {
        let mut s = xs.to_vec();
        s.sort_unstable();
        s.windows(2).all(|w| w[0] != w[1])
    };
    if !distinct(&emb.edge_map) || !distinct(&emb.vertex_map) {
        return Ok(false);
    }
    if emb.vertex_map.iter().any(|&v| v >= host.vertex_count()) {
        return Ok(false);
    }
    for (i, pe) in pattern.edges().iter().enumerate() {
        let h = emb.edge_map[i];
        if h >= host.edge_count() {
            return Ok(false);
        }
        let mut image: Vec<usize> = pe.iter().map(|&p| emb.vertex_map[p]).collect();
        image.sort_unstable();
        if image != host.edge(h) {
            return Ok(false);
        }
    }
    Ok(true)
}
