//! Forbidden configurations: linear paths, linear stars, linear cycles and
//! vertex-disjoint unions of them.
//!
//! Stars are always linear: their edges pairwise meet only in the centre.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{disjoint_union, Hypergraph, Uniformity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("invalid pattern parameters: {0}")]
    BadParameters(String),
    #[error("cannot parse pattern `{input}`: {message}")]
    Parse { input: String, message: String },
}

/// A connected member of a forbidden family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "length", rename_all = "snake_case")]
pub enum Component {
    Path(usize),
    Star(usize),
    Cycle(usize),
}

impl Component {
    pub fn length(self) -> usize {
        match self {
            Component::Path(l) | Component::Star(l) | Component::Cycle(l) => l,
        }
    }

    pub fn edge_count(self) -> usize {
        self.length()
    }

    pub fn vertex_count(self, r: usize) -> usize {
        match self {
            Component::Path(l) | Component::Star(l) => l * (r - 1) + 1,
            Component::Cycle(l) => l * (r - 1),
        }
    }

    // paths, then stars, then cycles; longer first within a kind
    fn sort_key(self) -> (u8, std::cmp::Reverse<usize>) {
        let kind = match self {
            Component::Path(_) => 0,
            Component::Star(_) => 1,
            Component::Cycle(_) => 2,
        };
        (kind, std::cmp::Reverse(self.length()))
    }

    fn validate(self, r: usize) -> Result<(), PatternError> {
        match self {
            Component::Path(0) | Component::Star(0) => Err(PatternError::BadParameters(
                "paths and stars need at least one edge".into(),
            )),
            Component::Cycle(l) if l < 3 => Err(PatternError::BadParameters(format!(
                "cycles need length at least 3, got {l}"
            ))),
            Component::Cycle(_) if r < 3 => Err(PatternError::BadParameters(
                "linear cycles need uniformity at least 3".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn realize(self, r: usize) -> Result<Hypergraph, PatternError> {
        match self {
            Component::Path(l) => linear_path(r, l),
            Component::Star(l) => linear_star(r, l),
            Component::Cycle(l) => linear_cycle(r, l),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Path(l) => write!(f, "P{l}"),
            Component::Star(l) => write!(f, "S{l}"),
            Component::Cycle(l) => write!(f, "C{l}"),
        }
    }
}

/// A forbidden r-graph: one component, or a vertex-disjoint union of several
/// kept in canonical order (paths before stars before cycles, each by
/// descending length).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ForbiddenPattern {
    r: usize,
    components: Vec<Component>,
}

impl ForbiddenPattern {
    pub fn new(r: usize, mut components: Vec<Component>) -> Result<Self, PatternError> {
        if r < 2 {
            return Err(PatternError::BadParameters(format!(
                "uniformity must be at least 2, got {r}"
            )));
        }
        if components.is_empty() {
            return Err(PatternError::BadParameters(
                "a pattern needs a component".into(),
            ));
        }
        for &c in &components {
            c.validate(r)?;
        }
        components.sort_by_key(|c| c.sort_key());
        Ok(ForbiddenPattern { r, components })
    }

    pub fn path(r: usize, ell: usize) -> Result<Self, PatternError> {
        Self::new(r, vec![Component::Path(ell)])
    }

    pub fn star(r: usize, ell: usize) -> Result<Self, PatternError> {
        Self::new(r, vec![Component::Star(ell)])
    }

    pub fn cycle(r: usize, ell: usize) -> Result<Self, PatternError> {
        Self::new(r, vec![Component::Cycle(ell)])
    }

    /// `k` disjoint copies of `pattern`.
    pub fn copies(k: usize, pattern: &ForbiddenPattern) -> Result<Self, PatternError> {
        if k == 0 {
            return Err(PatternError::BadParameters("need at least one copy".into()));
        }
        let components = (0..k)
            .flat_map(|_| pattern.components.iter().copied())
            .collect();
        Self::new(pattern.r, components)
    }

    /// Disjoint union of two patterns of the same uniformity.
    pub fn union(&self, other: &ForbiddenPattern) -> Result<Self, PatternError> {
        if self.r != other.r {
            return Err(PatternError::BadParameters(format!(
                "cannot join a {}-uniform and a {}-uniform pattern",
                self.r, other.r
            )));
        }
        let mut components = self.components.clone();
        components.extend_from_slice(&other.components);
        Self::new(self.r, components)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(|c| c.vertex_count(self.r)).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.components.iter().map(|c| c.edge_count()).sum()
    }

    /// The pattern as a concrete hypergraph: components laid out left to right
    /// in canonical order.
    pub fn realize(&self) -> Hypergraph {
        let parts: Vec<Hypergraph> = self
            .components
            .iter()
            .map(|c| c.realize(self.r).expect("validated at construction"))
            .collect();
        let refs: Vec<&Hypergraph> = parts.iter().collect();
        disjoint_union(&refs)
    }

    /// Parses the expression grammar `P4+2*S4@r3`. The `@r<k>` suffix is
    /// optional when `default_r` is given.
    pub fn parse(input: &str, default_r: Option<usize>) -> Result<Self, PatternError> {
        let err = |message: String| PatternError::Parse {
            input: input.to_string(),
            message,
        };
        let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, r) = match text.split_once('@') {
            Some((body, suffix)) => {
                let digits = suffix
                    .strip_prefix('r')
                    .ok_or_else(|| err("uniformity suffix must look like `@r3`".into()))?;
                let r = digits
                    .parse::<usize>()
                    .map_err(|_| err(format!("bad uniformity `{digits}`")))?;
                if let Some(d) = default_r {
                    if d != r {
                        return Err(err(format!(
                            "expression says r={r} but r={d} was requested"
                        )));
                    }
                }
                (body.to_string(), r)
            }
            None => (
                text.clone(),
                default_r.ok_or_else(|| err("missing `@r<k>` uniformity suffix".into()))?,
            ),
        };
        if body.is_empty() {
            return Err(err("empty pattern".into()));
        }
        let mut components = Vec::new();
        for term in body.split('+') {
            let (count, atom) = match term.split_once('*') {
                Some((k, atom)) => (
                    k.parse::<usize>()
                        .map_err(|_| err(format!("bad multiplicity `{k}`")))?,
                    atom,
                ),
                None => (1, term),
            };
            let mut chars = atom.chars();
            let kind = chars.next().ok_or_else(|| err("empty term".into()))?;
            let len: usize = chars
                .as_str()
                .parse()
                .map_err(|_| err(format!("bad length in `{atom}`")))?;
            let component = match kind.to_ascii_uppercase() {
                'P' => Component::Path(len),
                'S' => Component::Star(len),
                'C' => Component::Cycle(len),
                other => return Err(err(format!("unknown component kind `{other}`"))),
            };
            if count == 0 {
                return Err(err("multiplicity must be positive".into()));
            }
            components.extend(std::iter::repeat_n(component, count));
        }
        Self::new(r, components)
    }
}

impl fmt::Display for ForbiddenPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.components.len() {
            let c = self.components[i];
            let run = self.components[i..].iter().take_while(|&&d| d == c).count();
            if !first {
                f.write_str("+")?;
            }
            if run > 1 {
                write!(f, "{run}*")?;
            }
            write!(f, "{c}")?;
            first = false;
            i += run;
        }
        write!(f, "@r{}", self.r)
    }
}

impl FromStr for ForbiddenPattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ForbiddenPattern::parse(s, None)
    }
}

fn check_basic(r: usize, ell: usize) -> Result<(), PatternError> {
    if r < 2 || ell < 1 {
        return Err(PatternError::BadParameters(format!(
            "need r >= 2 and length >= 1, got r={r}, length={ell}"
        )));
    }
    Ok(())
}

/// `P_ell^r`: edge `i` (0-based) is `{i(r-1), ..., (i+1)(r-1)}`.
pub fn linear_path(r: usize, ell: usize) -> Result<Hypergraph, PatternError> {
    check_basic(r, ell)?;
    let edges: Vec<Vec<usize>> = (0..ell)
        .map(|i| (i * (r - 1)..=(i + 1) * (r - 1)).collect())
        .collect();
    Ok(Hypergraph::from_sorted_unchecked(
        ell * (r - 1) + 1,
        edges,
        Uniformity::Uniform(r),
    ))
}

/// `S_ell^r` with centre 0; edge `i` is `{0} ∪ {i(r-1)+1, ..., (i+1)(r-1)}`.
pub fn linear_star(r: usize, ell: usize) -> Result<Hypergraph, PatternError> {
    check_basic(r, ell)?;
    let edges: Vec<Vec<usize>> = (0..ell)
        .map(|i| {
            std::iter::once(0)
                .chain(i * (r - 1) + 1..=(i + 1) * (r - 1))
                .collect()
        })
        .collect();
    Ok(Hypergraph::from_sorted_unchecked(
        ell * (r - 1) + 1,
        edges,
        Uniformity::Uniform(r),
    ))
}

/// `C_ell^r`: the path layout with the last edge wrapped onto vertex 0.
pub fn linear_cycle(r: usize, ell: usize) -> Result<Hypergraph, PatternError> {
    if r < 3 || ell < 3 {
        return Err(PatternError::BadParameters(format!(
            "linear cycles need r >= 3 and length >= 3, got r={r}, length={ell}"
        )));
    }
    let n = ell * (r - 1);
    let edges: Vec<Vec<usize>> = (0..ell)
        .map(|i| {
            let mut e: Vec<usize> = (i * (r - 1)..=(i + 1) * (r - 1)).map(|v| v % n).collect();
            e.sort_unstable();
            e
        })
        .collect();
    Ok(Hypergraph::from_sorted_unchecked(
        n,
        edges,
        Uniformity::Uniform(r),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths() {
        let p = linear_path(3, 2).unwrap();
        assert_eq!(p.vertex_count(), 5);
        assert_eq!(p.edges(), &[vec![0, 1, 2], vec![2, 3, 4]]);
        let p = linear_path(3, 4).unwrap();
        assert_eq!((p.vertex_count(), p.edge_count()), (9, 4));
        assert_eq!(linear_path(4, 1).unwrap().edges(), &[vec![0, 1, 2, 3]]);
        assert!(linear_path(3, 0).is_err());
        assert!(linear_path(1, 2).is_err());
    }

    #[test]
    fn stars() {
        let s = linear_star(3, 3).unwrap();
        assert_eq!(s.vertex_count(), 7);
        assert_eq!(s.edges(), &[vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6]]);
        assert_eq!(linear_star(3, 1).unwrap().edge_count(), 1);
        let s = linear_star(4, 2).unwrap();
        assert_eq!(s.vertex_count(), 7);
        assert_eq!(
            s.edges()[0]
                .iter()
                .filter(|v| s.edges()[1].contains(v))
                .count(),
            1
        );
    }

    #[test]
    fn cycles() {
        let c = linear_cycle(3, 3).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (6, 3));
        assert!(c.is_linear());
        assert!(linear_cycle(3, 2).is_err());
        let c = linear_cycle(4, 3).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (9, 3));
        for i in 0..3 {
            for j in i + 1..3 {
                let shared = c.edges()[i]
                    .iter()
                    .filter(|v| c.edges()[j].contains(v))
                    .count();
                assert_eq!(shared, 1);
            }
        }
    }

    #[test]
    fn vertex_count_formulas() {
        for r in 3..=6 {
            for l in 1..=8 {
                assert_eq!(linear_path(r, l).unwrap().vertex_count(), l * (r - 1) + 1);
                assert_eq!(linear_star(r, l).unwrap().vertex_count(), l * (r - 1) + 1);
                assert!(linear_path(r, l).unwrap().is_linear());
                assert!(linear_star(r, l).unwrap().is_linear());
                if l >= 3 {
                    assert_eq!(linear_cycle(r, l).unwrap().vertex_count(), l * (r - 1));
                    assert!(linear_cycle(r, l).unwrap().is_linear());
                }
            }
        }
    }

    #[test]
    fn realize_forests() {
        let f = ForbiddenPattern::new(3, vec![Component::Star(2), Component::Path(2)]).unwrap();
        assert_eq!(f.components(), &[Component::Path(2), Component::Star(2)]);
        let h = f.realize();
        assert_eq!((h.vertex_count(), h.edge_count()), (10, 4));

        let two_paths =
            ForbiddenPattern::copies(2, &ForbiddenPattern::path(3, 4).unwrap()).unwrap();
        let h = two_paths.realize();
        assert_eq!((h.vertex_count(), h.edge_count()), (18, 8));

        let f = ForbiddenPattern::new(
            3,
            vec![Component::Star(3), Component::Path(4), Component::Star(4)],
        )
        .unwrap();
        assert_eq!(
            f.components(),
            &[Component::Path(4), Component::Star(4), Component::Star(3)]
        );
        let h = f.realize();
        assert_eq!((h.vertex_count(), h.edge_count()), (25, 11));
        assert_eq!(h.uniformity(), Uniformity::Uniform(3));
        assert!(h.is_linear());
    }

    #[test]
    fn parse_and_display() {
        let p = ForbiddenPattern::parse("P4+2*S4@r3", None).unwrap();
        assert_eq!(
            p.components(),
            &[Component::Path(4), Component::Star(4), Component::Star(4)]
        );
        assert_eq!(p.to_string(), "P4+2*S4@r3");
        assert_eq!(ForbiddenPattern::parse("P2", Some(3)).unwrap().r(), 3);
        assert_eq!(
            ForbiddenPattern::parse("S3 + P5@r4", None)
                .unwrap()
                .to_string(),
            "P5+S3@r4"
        );
        assert!(ForbiddenPattern::parse("P2", None).is_err());
        assert!(ForbiddenPattern::parse("Q2@r3", None).is_err());
        assert!(ForbiddenPattern::parse("C2@r3", None).is_err());
        assert!(ForbiddenPattern::parse("0*P2@r3", None).is_err());
        assert!(ForbiddenPattern::parse("P2@r3", Some(4)).is_err());
        let p: ForbiddenPattern = "C4@r3".parse().unwrap();
        assert_eq!(p, ForbiddenPattern::cycle(3, 4).unwrap());
    }
}
