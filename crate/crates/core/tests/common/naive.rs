//! Brute-force containment: try every ordered sequence of distinct host
//! edges and compare vertex incidence signatures with the realized pattern.

use std::collections::BTreeMap;

use hyperturan::{ForbiddenPattern, Hypergraph};

/// Multiset of incidence signatures: for each vertex, the set of edge
/// positions containing it.
fn signatures(edges: &[&[usize]]) -> BTreeMap<u64, usize> {
    let mut per_vertex: BTreeMap<usize, u64> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        for &v in e.iter() {
            *per_vertex.entry(v).or_default() |= 1 << i;
        }
    }
    let mut out = BTreeMap::new();
    for sig in per_vertex.into_values() {
        *out.entry(sig).or_default() += 1;
    }
    out
}

fn extend(
    host: &[&[usize]],
    want: &BTreeMap<u64, usize>,
    size: usize,
    used: &mut Vec<bool>,
    seq: &mut Vec<usize>,
) -> bool {
    if seq.len() == size {
        let chosen: Vec<&[usize]> = seq.iter().map(|&i| host[i]).collect();
        return &signatures(&chosen) == want;
    }
    for i in 0..host.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        seq.push(i);
        let found = extend(host, want, size, used, seq);
        seq.pop();
        used[i] = false;
        if found {
            return true;
        }
    }
    false
}

pub fn contains(host: &Hypergraph, pattern: &ForbiddenPattern) -> bool {
    let realized = pattern.realize();
    let pattern_edges: Vec<&[usize]> = realized.edges().iter().map(Vec::as_slice).collect();
    let want = signatures(&pattern_edges);
    let host_edges: Vec<&[usize]> = host
        .edges()
        .iter()
        .filter(|e| e.len() == pattern.r())
        .map(Vec::as_slice)
        .collect();
    if host_edges.len() < pattern_edges.len() {
        return false;
    }
    let mut used = vec![false; host_edges.len()];
    extend(
        &host_edges,
        &want,
        pattern_edges.len(),
        &mut used,
        &mut Vec::new(),
    )
}

/// Linearity from the definition: every pair of distinct edges shares at
/// most one vertex.
pub fn is_linear(host: &Hypergraph) -> bool {
    let e = host.edges();
    (0..e.len())
        .all(|i| (i + 1..e.len()).all(|j| e[i].iter().filter(|v| e[j].contains(v)).count() <= 1))
}
