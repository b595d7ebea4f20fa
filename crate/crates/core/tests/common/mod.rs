#![allow(dead_code)]

pub mod naive;

use hyperturan::Hypergraph;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random `r`-graph on `n` vertices with at most `max_edges` edges. When
/// `linear` is set, edges meeting an earlier edge in two vertices are skipped.
pub fn random_host<R: Rng>(
    rng: &mut R,
    n: usize,
    r: usize,
    max_edges: usize,
    linear: bool,
) -> Hypergraph {
    let target = rng.gen_range(0..=max_edges);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let vertices: Vec<usize> = (0..n).collect();
    for _ in 0..target * 20 {
        if edges.len() == target {
            break;
        }
        let mut e: Vec<usize> = vertices.choose_multiple(rng, r).copied().collect();
        e.sort_unstable();
        if edges.contains(&e) {
            continue;
        }
        if linear
            && edges
                .iter()
                .any(|f| f.iter().filter(|v| e.contains(v)).count() > 1)
        {
            continue;
        }
        edges.push(e);
    }
    Hypergraph::new(n, &edges, Some(r)).expect("valid random host")
}
