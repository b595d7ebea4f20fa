//! 2-(n, r, 1) designs: admissibility, small constructions and verification.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, Uniformity};
use crate::{ratio, Exact};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("invalid design parameters: {0}")]
    BadParameters(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DesignParams {
    pub n: usize,
    pub r: usize,
}

impl DesignParams {
    pub fn new(n: usize, r: usize) -> Result<Self, DesignError> {
        if r < 2 || n < r {
            return Err(DesignError::BadParameters(format!(
                "need n >= r >= 2, got n={n}, r={r}"
            )));
        }
        Ok(DesignParams { n, r })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "q", rename_all = "snake_case")]
pub enum Strategy {
    SingleBlock,
    Bose,
    Skolem,
    ProjectivePlane(usize),
    AffinePlane(usize),
    Backtracking,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::SingleBlock => f.write_str("single block"),
            Strategy::Bose => f.write_str("Bose construction"),
            Strategy::Skolem => f.write_str("Skolem construction"),
            Strategy::ProjectivePlane(q) => write!(f, "projective plane PG(2,{q})"),
            Strategy::AffinePlane(q) => write!(f, "affine plane AG(2,{q})"),
            Strategy::Backtracking => f.write_str("backtracking search"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Design {
    pub params: DesignParams,
    pub graph: Hypergraph,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DesignOutcome {
    Built(Design),
    Inadmissible,
    NotAttempted { reason: String },
}

impl DesignOutcome {
    pub fn design(self) -> Option<Design> {
        match self {
            DesignOutcome::Built(d) => Some(d),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DesignCaps {
    pub backtrack_r3: usize,
    pub backtrack_r4: usize,
    pub backtrack_other: usize,
    pub max_prime: usize,
    pub node_limit: u64,
}

impl Default for DesignCaps {
    fn default() -> Self {
        DesignCaps {
            backtrack_r3: 15,
            backtrack_r4: 13,
            backtrack_other: 13,
            max_prime: 7,
            node_limit: 5_000_000,
        }
    }
}

impl DesignCaps {
    fn backtrack_cap(&self, r: usize) -> usize {
        match r {
            3 => self.backtrack_r3,
            4 => self.backtrack_r4,
            _ => self.backtrack_other,
        }
    }
}

pub fn is_admissible(n: usize, r: usize) -> Result<bool, DesignError> {
    DesignParams::new(n, r)?;
    Ok((n - 1).is_multiple_of(r - 1) && (n * (n - 1)).is_multiple_of(r * (r - 1)))
}

/// Blocks through each point, `(n-1)/(r-1)`.
pub fn replication(n: usize, r: usize) -> Exact {
    ratio(n as i64 - 1, r as i64 - 1)
}

/// Total blocks, `n(n-1)/(r(r-1))`.
pub fn block_count(n: usize, r: usize) -> Exact {
    ratio((n * (n - 1)) as i64, (r * (r - 1)) as i64)
}

pub fn verify_design(h: &Hypergraph) -> bool {
    let n = h.vertex_count();
    if h.edge_count() == 0 {
        return n <= 1;
    }
    let r = h.edges()[0].len();
    if h.edges().iter().any(|e| e.len() != r) {
        return false;
    }
    let mut cover = vec![0u32; n * n];
    for e in h.edges() {
        for (i, &a) in e.iter().enumerate() {
            for &b in &e[i + 1..] {
                cover[a * n + b] += 1;
            }
        }
    }
    (0..n).all(|a| (a + 1..n).all(|b| cover[a * n + b] == 1))
}

pub fn build_design(n: usize, r: usize) -> Result<DesignOutcome, DesignError> {
    build_design_with(n, r, &DesignCaps::default())
}

/// Tries, in order: a single block, Bose or Skolem triple systems,
/// PG(2,q) and AG(2,q) for prime `q`, then exact-cover backtracking.
pub fn build_design_with(
    n: usize,
    r: usize,
    caps: &DesignCaps,
) -> Result<DesignOutcome, DesignError> {
    let params = DesignParams::new(n, r)?;
    if !is_admissible(n, r)? {
        return Ok(DesignOutcome::Inadmissible);
    }
    let direct = if n == r {
        Some((Strategy::SingleBlock, vec![(0..r).collect::<Vec<_>>()]))
    } else if r == 3 && n % 6 == 3 {
        Some((Strategy::Bose, bose(n)))
    } else if r == 3 && n % 6 == 1 {
        Some((Strategy::Skolem, skolem(n)))
    } else {
        plane(n, r, caps.max_prime)
    };
    let (strategy, blocks) = match direct {
        Some(found) => found,
        None if n <= caps.backtrack_cap(r) => match backtrack(n, r, caps.node_limit) {
            Some(blocks) => (Strategy::Backtracking, blocks),
            None => {
                return Ok(DesignOutcome::NotAttempted {
                    reason: format!("backtracking gave up after {} nodes", caps.node_limit),
                })
            }
        },
        None => {
            return Ok(DesignOutcome::NotAttempted {
                reason: format!("no construction for ({n},{r}) within the configured caps"),
            })
        }
    };
    Ok(DesignOutcome::Built(finish(params, strategy, blocks)))
}

/// Runs only the backtracking search, bypassing the direct constructions.
pub fn build_by_search(n: usize, r: usize, node_limit: u64) -> Result<Option<Design>, DesignError> {
    let params = DesignParams::new(n, r)?;
    if !is_admissible(n, r)? {
        return Ok(None);
    }
    Ok(backtrack(n, r, node_limit).map(|b| finish(params, Strategy::Backtracking, b)))
}

fn finish(params: DesignParams, strategy: Strategy, blocks: Vec<Vec<usize>>) -> Design {
    let graph = Hypergraph::new(params.n, blocks, Some(params.r))
        .expect("constructions emit well-formed blocks");
    assert!(
        verify_design(&graph),
        "{strategy} produced a non-design for {params:?}"
    );
    Design {
        params,
        graph,
        strategy,
    }
}

/// Steiner triple system on `6t+3` points over `Z_{2t+1} x Z_3`.
fn bose(n: usize) -> Vec<Vec<usize>> {
    let m = n / 3;
    let t = (m - 1) / 2;
    let op = |x: usize, y: usize| ((x + y) * (t + 1)) % m;
    let pt = |x: usize, i: usize| 3 * x + (i % 3);
    let mut blocks = Vec::new();
    for x in 0..m {
        blocks.push(vec![pt(x, 0), pt(x, 1), pt(x, 2)]);
    }
    for x in 0..m {
        for y in x + 1..m {
            for i in 0..3 {
                blocks.push(vec![pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    blocks
}

/// Steiner triple system on `6t+1` points over `Z_{2t} x Z_3` plus a point at
/// infinity, via the half-idempotent commutative quasigroup of order `2t`.
fn skolem(n: usize) -> Vec<Vec<usize>> {
    let m = (n - 1) / 3;
    let t = m / 2;
    let op = |x: usize, y: usize| {
        let s = (x + y) % m;
        if s.is_multiple_of(2) {
            s / 2
        } else {
            t + (s - 1) / 2
        }
    };
    let pt = |x: usize, i: usize| 3 * x + (i % 3);
    let inf = n - 1;
    let mut blocks = Vec::new();
    for x in 0..t {
        blocks.push(vec![pt(x, 0), pt(x, 1), pt(x, 2)]);
        for i in 0..3 {
            blocks.push(vec![inf, pt(t + x, i), pt(x, i + 1)]);
        }
    }
    for x in 0..m {
        for y in x + 1..m {
            for i in 0..3 {
                blocks.push(vec![pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    blocks
}

fn is_prime(q: usize) -> bool {
    q >= 2
        && (2..q)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

fn plane(n: usize, r: usize, max_prime: usize) -> Option<(Strategy, Vec<Vec<usize>>)> {
    let q = r - 1;
    if q * q + q + 1 == n && is_prime(q) && q <= max_prime {
        return Some((Strategy::ProjectivePlane(q), projective_plane(q)));
    }
    let q = r;
    if q * q == n && is_prime(q) && q <= max_prime {
        return Some((Strategy::AffinePlane(q), affine_plane(q)));
    }
    None
}

fn projective_points(q: usize) -> Vec<[usize; 3]> {
    let mut pts = Vec::new();
    for b in 0..q {
        for c in 0..q {
            pts.push([1, b, c]);
        }
    }
    for c in 0..q {
        pts.push([0, 1, c]);
    }
    pts.push([0, 0, 1]);
    pts
}

fn projective_plane(q: usize) -> Vec<Vec<usize>> {
    let pts = projective_points(q);
    pts.iter()
        .map(|l| {
            (0..pts.len())
                .filter(|&i| (0..3).map(|k| l[k] * pts[i][k]).sum::<usize>() % q == 0)
                .collect()
        })
        .collect()
}

fn affine_plane(q: usize) -> Vec<Vec<usize>> {
    let pt = |x: usize, y: usize| x * q + y;
    let mut lines = Vec::new();
    for m in 0..q {
        for b in 0..q {
            lines.push((0..q).map(|x| pt(x, (m * x + b) % q)).collect());
        }
    }
    for c in 0..q {
        lines.push((0..q).map(|y| pt(c, y)).collect());
    }
    lines
}

struct Cover {
    n: usize,
    r: usize,
    covered: Vec<bool>,
    touched: Vec<bool>,
    blocks: Vec<Vec<usize>>,
    nodes: u64,
    limit: u64,
}

impl Cover {
    fn pair(&self, a: usize, b: usize) -> usize {
        a.min(b) * self.n + a.max(b)
    }

    fn first_open(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| (a + 1..self.n).map(move |b| (a, b)))
            .find(|&(a, b)| !self.covered[self.pair(a, b)])
    }

    fn set(&mut self, block: &[usize], value: bool) {
        for (i, &a) in block.iter().enumerate() {
            for &b in &block[i + 1..] {
                let p = self.pair(a, b);
                self.covered[p] = value;
            }
        }
    }

    fn solve(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return None;
        }
        let Some((a, b)) = self.first_open() else {
            return Some(true);
        };
        let pool: Vec<usize> = (0..self.n)
            .filter(|&c| c != a && c != b)
            .filter(|&c| !self.covered[self.pair(a, c)] && !self.covered[self.pair(b, c)])
            .collect();
        let mut chosen = vec![a, b];
        self.extend(&pool, 0, &mut chosen)
    }

    fn extend(&mut self, pool: &[usize], from: usize, chosen: &mut Vec<usize>) -> Option<bool> {
        if chosen.len() == self.r {
            let mut block = chosen.clone();
            block.sort_unstable();
            let fresh: Vec<usize> = block
                .iter()
                .copied()
                .filter(|&v| !self.touched[v])
                .collect();
            self.set(&block, true);
            for &v in &fresh {
                self.touched[v] = true;
            }
            self.blocks.push(block.clone());
            let res = self.solve();
            if res != Some(false) {
                return res;
            }
            self.blocks.pop();
            for &v in &fresh {
                self.touched[v] = false;
            }
            self.set(&block, false);
            return Some(false);
        }
        let mut skipped_fresh = false;
        for i in from..pool.len() {
            let c = pool[i];
            // untouched points are interchangeable: take them in order only
            if !self.touched[c] {
                if skipped_fresh {
                    continue;
                }
                skipped_fresh = true;
            }
            if chosen[2..].iter().any(|&d| self.covered[self.pair(c, d)]) {
                continue;
            }
            chosen.push(c);
            let res = self.extend(pool, i + 1, chosen);
            chosen.pop();
            if res != Some(false) {
                return res;
            }
        }
        Some(false)
    }
}

/// Exact cover of point pairs by `r`-sets; the first block is `{0..r-1}`.
fn backtrack(n: usize, r: usize, limit: u64) -> Option<Vec<Vec<usize>>> {
    let mut cover = Cover {
        n,
        r,
        covered: vec![false; n * n],
        touched: vec![false; n],
        blocks: Vec::new(),
        nodes: 0,
        limit,
    };
    let first: Vec<usize> = (0..r).collect();
    cover.set(&first, true);
    for &v in &first {
        cover.touched[v] = true;
    }
    cover.blocks.push(first);
    match cover.solve() {
        Some(true) => Some(cover.blocks),
        _ => None,
    }
}

/// Largest admissible `m <= max_points` for which a design is built.
pub fn largest_available(max_points: usize, r: usize, caps: &DesignCaps) -> Option<Design> {
    (r..=max_points)
        .rev()
        .filter(|&m| is_admissible(m, r).unwrap_or(false))
        .find_map(|m| build_design_with(m, r, caps).ok()?.design())
}

/// The trivial design with no points, used when a construction needs
/// `D_{k,r}` for `k < r`.
pub fn degenerate(k: usize, r: usize) -> Option<Hypergraph> {
    (k <= 1).then(|| Hypergraph::empty(k, Uniformity::Uniform(r)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility() {
        assert!(is_admissible(7, 3).unwrap());
        assert!(!is_admissible(6, 3).unwrap());
        assert!(!is_admissible(8, 3).unwrap());
        assert!(is_admissible(13, 4).unwrap());
        for r in 3..=6 {
            for l in 2..=8 {
                assert!(!is_admissible(l * (r - 1), r).unwrap(), "r={r} l={l}");
            }
        }
        assert!(is_admissible(2, 3).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(replication(7, 3), crate::exact(3));
        assert_eq!(block_count(7, 3), crate::exact(7));
        assert_eq!(replication(9, 3), crate::exact(4));
        assert_eq!(block_count(9, 3), crate::exact(12));
        assert_eq!(block_count(5, 5), crate::exact(1));
        assert_eq!(replication(6, 3), ratio(5, 2));
    }

    #[test]
    fn triple_systems() {
        for n in [7, 9, 13, 15, 19, 21, 25, 27] {
            let d = build_design(n, 3).unwrap().design().unwrap();
            assert!(verify_design(&d.graph));
            assert_eq!(crate::exact(d.graph.edge_count() as i64), block_count(n, 3));
            assert!(d.graph.is_linear());
            assert!(d.graph.degrees().iter().all(|&x| 2 * x == n - 1));
        }
        assert_eq!(build_design(6, 3).unwrap(), DesignOutcome::Inadmissible);
        assert_eq!(
            build_design(3, 3).unwrap().design().unwrap().strategy,
            Strategy::SingleBlock
        );
    }

    #[test]
    fn planes() {
        let d = build_design(13, 4).unwrap().design().unwrap();
        assert_eq!(d.strategy, Strategy::ProjectivePlane(3));
        assert_eq!(d.graph.edge_count(), 13);
        let d = build_design(25, 5).unwrap().design().unwrap();
        assert_eq!(d.strategy, Strategy::AffinePlane(5));
        assert_eq!(d.graph.edge_count(), 30);
        let d = build_design(31, 6).unwrap().design().unwrap();
        assert_eq!(d.strategy, Strategy::ProjectivePlane(5));
        assert!(matches!(
            build_design(16, 4).unwrap(),
            DesignOutcome::NotAttempted { .. }
        ));
    }

    #[test]
    fn search_finds_small_designs() {
        for (n, r) in [(7, 3), (9, 3), (13, 3), (13, 4), (4, 2), (5, 2)] {
            let d = build_by_search(n, r, 1_000_000).unwrap().unwrap();
            assert!(verify_design(&d.graph), "({n},{r})");
        }
        assert!(build_by_search(8, 3, 1000).unwrap().is_none());
    }

    #[test]
    fn verification() {
        let fano = build_design(7, 3).unwrap().design().unwrap().graph;
        assert!(verify_design(&fano));
        let minus = Hypergraph::new(7, fano.edges()[1..].to_vec(), Some(3)).unwrap();
        assert!(!verify_design(&minus));
        assert!(verify_design(
            &Hypergraph::new(3, [[0, 1, 2]], Some(3)).unwrap()
        ));
    }

    #[test]
    fn fallback_choice() {
        let d = largest_available(8, 3, &DesignCaps::default()).unwrap();
        assert_eq!(d.params.n, 7);
        let d = largest_available(6, 3, &DesignCaps::default()).unwrap();
        assert_eq!(d.params.n, 3);
    }
}
