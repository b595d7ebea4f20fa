//! Exact evaluators for the extremal bounds.
//!
//! Every value is an exact rational. Results that only hold for sufficiently
//! large `n` carry `applicable = false`, since that hypothesis cannot be
//! certified for a concrete `n`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::is_admissible;
use crate::{exact, exact_serde, ratio, Exact};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
}

type Result<T> = std::result::Result<T, BoundsError>;

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(BoundsError::BadParameters(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    /// Linear path, `(2r-3) ell n / 2`.
    LinearPath,
    /// Linear `P_3`, at most `n`.
    LinearP3,
    /// Linear `P_2`, exactly `floor(n/r)`.
    LinearP2,
    /// Disjoint linear stars `k S_ell`.
    StarForest,
    /// Path plus stars in linear hosts.
    PathStarForest,
    /// Lower bound from disjoint design copies.
    DesignCopies,
    /// Path plus stars via the linear path number.
    PathStarViaPath,
    /// Lower bound from the design and lattice product.
    DesignLattice,
    /// General hosts, single path.
    Path,
    /// General hosts, `k` disjoint paths.
    PathCopies,
    /// General hosts, single star.
    Star,
    /// General hosts, path plus `k` stars.
    PathPlusStars,
    /// General hosts, `k1` paths plus `k2` stars.
    PathsPlusStars,
}

impl TheoremId {
    pub const ALL: [TheoremId; 13] = [
        TheoremId::LinearPath,
        TheoremId::LinearP3,
        TheoremId::LinearP2,
        TheoremId::StarForest,
        TheoremId::PathStarForest,
        TheoremId::DesignCopies,
        TheoremId::PathStarViaPath,
        TheoremId::DesignLattice,
        TheoremId::Path,
        TheoremId::PathCopies,
        TheoremId::Star,
        TheoremId::PathPlusStars,
        TheoremId::PathsPlusStars,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::LinearPath => "linear-path",
            TheoremId::LinearP3 => "linear-p3",
            TheoremId::LinearP2 => "linear-p2",
            TheoremId::StarForest => "star-forest",
            TheoremId::PathStarForest => "path-star-forest",
            TheoremId::DesignCopies => "design-copies",
            TheoremId::PathStarViaPath => "path-star-via-path",
            TheoremId::DesignLattice => "design-lattice",
            TheoremId::Path => "path",
            TheoremId::PathCopies => "path-copies",
            TheoremId::Star => "star",
            TheoremId::PathPlusStars => "path-plus-stars",
            TheoremId::PathsPlusStars => "paths-plus-stars",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| BoundsError::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Upper,
    Lower,
    Exact,
    /// `value` is the upper end; `lower` holds the other.
    TwoSided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub params: BTreeMap<String, String>,
    #[serde(with = "exact_serde")]
    pub value: Exact,
    #[serde(
        default,
        with = "exact_serde::option",
        skip_serializing_if = "Option::is_none"
    )]
    pub lower: Option<Exact>,
    pub side: Side,
    pub applicable: bool,
    pub caveats: Vec<String>,
}

impl BoundReport {
    fn new(theorem: TheoremId, value: Exact, side: Side) -> Self {
        BoundReport {
            theorem,
            params: BTreeMap::new(),
            value,
            lower: None,
            side,
            applicable: true,
            caveats: Vec::new(),
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    fn asymptotic(mut self) -> Self {
        self.applicable = false;
        self.caveats
            .push("holds for sufficiently large n; asymptotic regime not certified".into());
        self
    }

    fn caveat(mut self, text: impl Into<String>) -> Self {
        self.caveats.push(text.into());
        self
    }
}

/// `C(n, k)` with `C(n, k) = 0` whenever `n < k` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k || n < 0 {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn binom(n: i64, k: i64) -> Exact {
    Exact::from_integer(binomial(n, k))
}

fn int(x: usize) -> i64 {
    x as i64
}

/// Linear hosts, single path: `(2r-3) ell n / 2` for `ell >= 4`, `n` for
/// `ell = 3`, exactly `floor(n/r)` for `ell = 2`.
pub fn linear_path_upper(r: usize, ell: usize, n: usize) -> Result<BoundReport> {
    if r < 3 || ell < 2 {
        return bad(format!("need r >= 3 and ell >= 2, got r={r}, ell={ell}"));
    }
    let report = match ell {
        2 => BoundReport::new(TheoremId::LinearP2, exact(int(n / r)), Side::Exact),
        3 => BoundReport::new(TheoremId::LinearP3, exact(int(n)), Side::Upper),
        _ => BoundReport::new(
            TheoremId::LinearPath,
            ratio(int((2 * r - 3) * ell * n), 2),
            Side::Upper,
        ),
    };
    Ok(report.param("r", r).param("ell", ell).param("n", n))
}

/// Linear hosts, `k` disjoint stars:
/// `((ell-1)/r + (k-1)/(r-1))(n-k+1) + C(k-1,2)/C(r,2)`.
pub fn star_forest_upper(r: usize, ell: usize, k: usize, n: usize) -> Result<BoundReport> {
    if r < 2 || ell < 1 || k < 1 {
        return bad(format!(
            "need r >= 2, ell >= 1, k >= 1, got r={r}, ell={ell}, k={k}"
        ));
    }
    let (r_, l_, k_, n_) = (int(r), int(ell), int(k), int(n));
    let value = (ratio(l_ - 1, r_) + ratio(k_ - 1, r_ - 1)) * exact(n_ - k_ + 1)
        + binom(k_ - 1, 2) / binom(r_, 2);
    Ok(BoundReport::new(TheoremId::StarForest, value, Side::Upper)
        .param("r", r)
        .param("ell", ell)
        .param("k", k)
        .param("n", n)
        .asymptotic())
}

/// Linear hosts, `P_ell0 ∪ S_ell1 ∪ ... ∪ S_ellk` with `ell = max(ell0, ell1)`:
/// `(k/(r-1) + (2r-3) ell / 2)(n-k) + k(k-1)/(r(r-1))`.
pub fn path_star_forest_upper(
    r: usize,
    ell0: usize,
    stars: &[usize],
    n: usize,
) -> Result<BoundReport> {
    if r < 3 || ell0 < 4 {
        return bad(format!("need r >= 3 and ell0 >= 4, got r={r}, ell0={ell0}"));
    }
    if stars.windows(2).any(|w| w[0] < w[1]) {
        return bad("star lengths must be listed in descending order");
    }
    if stars.contains(&0) {
        return bad("star lengths must be positive");
    }
    let k = stars.len();
    let ell = stars.first().map_or(ell0, |&l1| ell0.max(l1));
    let (r_, k_, n_) = (int(r), int(k), int(n));
    let value = (ratio(k_, r_ - 1) + ratio(int((2 * r - 3) * ell), 2)) * exact(n_ - k_)
        + ratio(k_ * (k_ - 1), r_ * (r_ - 1));
    let mut report = BoundReport::new(TheoremId::PathStarForest, value, Side::Upper)
        .param("r", r)
        .param("ell0", ell0)
        .param("stars", format!("{stars:?}"))
        .param("n", n);
    if k > 0 {
        report = report.asymptotic();
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerKind {
    DesignCopies,
    DesignLattice,
    PathStarViaPath,
}

fn admissibility_caveat(r: usize, ell: usize) -> Option<String> {
    let m = ell * (r - 1);
    let ok = m >= r && is_admissible(m, r).unwrap_or(false);
    (!ok).then(|| {
        format!(
            "requires a 2-({m},{r},1) design, but ({m},{r}) fails the divisibility conditions; value is the nominal target"
        )
    })
}

/// `(ell/r - 1/(r(r-1))) n`: disjoint copies of a design on `ell(r-1)` points.
pub fn design_copies_lower(r: usize, ell: usize, n: usize) -> Result<BoundReport> {
    if r < 3 || ell < 4 {
        return bad(format!("need r >= 3 and ell >= 4, got r={r}, ell={ell}"));
    }
    let (r_, l_, n_) = (int(r), int(ell), int(n));
    let value = (ratio(l_, r_) - ratio(1, r_ * (r_ - 1))) * exact(n_);
    let mut report = BoundReport::new(TheoremId::DesignCopies, value, Side::Lower)
        .param("r", r)
        .param("ell", ell)
        .param("n", n);
    if !n.is_multiple_of(ell * (r - 1)) {
        report = report.caveat(format!("n is not a multiple of {}", ell * (r - 1)));
        report.applicable = false;
    }
    if let Some(c) = admissibility_caveat(r, ell) {
        report.applicable = false;
        report = report.caveat(c);
    }
    Ok(report)
}

/// `(k/(r-1) + (ell(r-1)-1)/(r(r-1)))(n-k) + k(k-1)/(r(r-1))`: the design and
/// lattice product with inserted vertices.
pub fn design_lattice_lower(r: usize, ell: usize, k: usize, n: usize) -> Result<BoundReport> {
    if r < 3 || ell < 4 || k < 1 || n < k {
        return bad(format!(
            "need r >= 3, ell >= 4, k >= 1, n >= k, got r={r}, ell={ell}, k={k}, n={n}"
        ));
    }
    let (r_, l_, k_, n_) = (int(r), int(ell), int(k), int(n));
    let rr = r_ * (r_ - 1);
    let value = (ratio(k_, r_ - 1) + ratio(l_ * (r_ - 1) - 1, rr)) * exact(n_ - k_)
        + ratio(k_ * (k_ - 1), rr);
    let mut report = BoundReport::new(TheoremId::DesignLattice, value, Side::Lower)
        .param("r", r)
        .param("ell", ell)
        .param("k", k)
        .param("n", n);
    let block = ell * (r - 1).pow(k as u32 + 1);
    if !(n - k).is_multiple_of(block) {
        report.applicable = false;
        report = report.caveat(format!("n - k is not a multiple of {block}"));
    }
    if k >= r && !is_admissible(k, r).unwrap_or(false) {
        report.applicable = false;
        report = report.caveat(format!("({k},{r}) fails the divisibility conditions"));
    }
    if let Some(c) = admissibility_caveat(r, ell) {
        report.applicable = false;
        report = report.caveat(c);
    }
    Ok(report)
}

/// `k(n-k)/(r-1) + k(k-1)/(r(r-1)) + ex_lin(n-k, P_ell)` for a supplied
/// linear path number.
pub fn path_star_via_path_upper(
    r: usize,
    ell: usize,
    k: usize,
    n: usize,
    ex_path: &Exact,
) -> Result<BoundReport> {
    if r < 3 || ell < 4 || n < k {
        return bad(format!(
            "need r >= 3, ell >= 4, n >= k, got r={r}, ell={ell}, n={n}"
        ));
    }
    let (r_, k_, n_) = (int(r), int(k), int(n));
    let value = ratio(k_ * (n_ - k_), r_ - 1) + ratio(k_ * (k_ - 1), r_ * (r_ - 1)) + ex_path;
    let mut report = BoundReport::new(TheoremId::PathStarViaPath, value, Side::Upper)
        .param("r", r)
        .param("ell", ell)
        .param("k", k)
        .param("n", n)
        .param("ex_path", ex_path)
        .asymptotic();
    if let Some(c) = admissibility_caveat(r, ell) {
        report = report.caveat(c);
    }
    Ok(report)
}

/// The three lower-side evaluators behind one entry point.
pub fn lower_bounds(
    kind: LowerKind,
    r: usize,
    ell: usize,
    k: usize,
    n: usize,
    ex_path: Option<&Exact>,
) -> Result<BoundReport> {
    match kind {
        LowerKind::DesignCopies => design_copies_lower(r, ell, n),
        LowerKind::DesignLattice => design_lattice_lower(r, ell, k, n),
        LowerKind::PathStarViaPath => match ex_path {
            Some(ex) => path_star_via_path_upper(r, ell, k, n, ex),
            None => bad("the path-star-via-path bound needs an ex_path value"),
        },
    }
}

/// General hosts: `C(n,r) - C(n - floor((ell-1)/2), r)`, plus
/// `C(n - floor((ell-1)/2) - 2, r-2)` when `ell` is even.
pub fn path_exact(r: usize, ell: usize, n: usize) -> Result<BoundReport> {
    if r < 3 || ell < 4 {
        return bad(format!("need r >= 3 and ell >= 4, got r={r}, ell={ell}"));
    }
    let (r_, n_) = (int(r), int(n));
    let h = int((ell - 1) / 2);
    let mut value = binom(n_, r_) - binom(n_ - h, r_);
    if ell.is_multiple_of(2) {
        value += binom(n_ - h - 2, r_ - 2);
    }
    Ok(BoundReport::new(TheoremId::Path, value, Side::Exact)
        .param("r", r)
        .param("ell", ell)
        .param("n", n)
        .asymptotic())
}

/// General hosts, `k` disjoint paths, `s = k floor((ell+1)/2)`:
/// `C(n-1,r-1) + ... + C(n-s+1,r-1)`, plus `C(n-s-1, r-2)` when `ell` is even.
pub fn path_copies_exact(r: usize, ell: usize, k: usize, n: usize) -> Result<BoundReport> {
    if r < 3 || ell < 1 || k < 1 {
        return bad(format!(
            "need r >= 3, ell >= 1, k >= 1, got r={r}, ell={ell}, k={k}"
        ));
    }
    let (r_, n_) = (int(r), int(n));
    let s = int(k * ell.div_ceil(2));
    let mut value = Exact::zero();
    for i in 1..s {
        value += binom(n_ - i, r_ - 1);
    }
    if ell.is_multiple_of(2) {
        value += binom(n_ - s - 1, r_ - 2);
    }
    let mut report = BoundReport::new(TheoremId::PathCopies, value, Side::Exact)
        .param("r", r)
        .param("ell", ell)
        .param("k", k)
        .param("n", n)
        .asymptotic();
    if k < 2 {
        report = report.caveat("stated for k >= 2");
    }
    Ok(report)
}

/// General hosts, single star: `c(r) ell (ell-1) n^(r-2)`. The constant
/// has no known value, so the caller supplies it.
pub fn star_upper(r: usize, ell: usize, n: usize, c: &Exact) -> Result<BoundReport> {
    if r < 3 || ell < 2 {
        return bad(format!("need r >= 3 and ell >= 2, got r={r}, ell={ell}"));
    }
    if !c.is_positive() {
        return bad(format!("c(r) must be positive, got {c}"));
    }
    let power = Exact::from_integer(BigInt::from(n).pow(r as u32 - 2));
    let value = c.clone() * exact(int(ell * (ell - 1))) * power;
    Ok(BoundReport::new(TheoremId::Star, value, Side::Upper)
        .param("r", r)
        .param("ell", ell)
        .param("n", n)
        .param("c", c)
        .caveat("c(r) is caller-supplied; the value is only as good as that constant")
        .asymptotic())
}

/// General hosts, `P_ell ∪ k S_ell`: between
/// `C(n,r) - C(n-k,r) + ex(n-k, S_ell)` and `C(n,r) - C(n-k,r) + ex(n-k, P_ell)`.
/// Missing star numbers are replaced by 0 on the lower side; missing path
/// numbers come from [`path_exact`].
pub fn path_plus_stars(
    r: usize,
    ell: usize,
    k: usize,
    n: usize,
    ex_star: Option<&Exact>,
    ex_path: Option<&Exact>,
) -> Result<BoundReport> {
    if r < 3 || ell < 4 || n < k {
        return bad(format!(
            "need r >= 3, ell >= 4, n >= k, got r={r}, ell={ell}, n={n}"
        ));
    }
    let (r_, k_, n_) = (int(r), int(k), int(n));
    let cone = binom(n_, r_) - binom(n_ - k_, r_);
    let mut report = BoundReport::new(TheoremId::PathPlusStars, Exact::zero(), Side::TwoSided)
        .param("r", r)
        .param("ell", ell)
        .param("k", k)
        .param("n", n)
        .asymptotic();
    let upper_ex = match ex_path {
        Some(v) => v.clone(),
        None => {
            report = report.caveat("ex(n-k, P_ell) taken from the general-host path formula");
            path_exact(r, ell, n - k)?.value
        }
    };
    let lower_ex = match ex_star {
        Some(v) => v.clone(),
        None => {
            report = report.caveat("ex(n-k, S_ell) not supplied; 0 used on the lower side");
            Exact::zero()
        }
    };
    report.value = cone.clone() + upper_ex;
    report.lower = Some(cone + lower_ex);
    Ok(report)
}

/// General hosts, `k1 P_ell ∪ k2 S_ell`: at most
/// `C(n,r) - C(n-k2,r) + ex(n-k2, k1 P_ell)` and at least
/// `C(n,r) - C(n-k1-k2+1,r) + ex(n-k1-k2+1, S_ell)`.
pub fn paths_plus_stars(
    r: usize,
    ell: usize,
    k1: usize,
    k2: usize,
    n: usize,
    ex_star: Option<&Exact>,
    ex_paths: Option<&Exact>,
) -> Result<BoundReport> {
    if r < 3 || ell < 4 || k1 < 2 || n + 1 < k1 + k2 {
        return bad(format!(
            "need r >= 3, ell >= 4, k1 >= 2, n >= k1+k2-1, got r={r}, ell={ell}, k1={k1}, k2={k2}, n={n}"
        ));
    }
    let (r_, n_) = (int(r), int(n));
    let (k1_, k2_) = (int(k1), int(k2));
    let mut report = BoundReport::new(TheoremId::PathsPlusStars, Exact::zero(), Side::TwoSided)
        .param("r", r)
        .param("ell", ell)
        .param("k1", k1)
        .param("k2", k2)
        .param("n", n)
        .asymptotic();
    let upper_ex = match ex_paths {
        Some(v) => v.clone(),
        None => {
            report =
                report.caveat("ex(n-k2, k1 P_ell) taken from the general-host path-copies formula");
            path_copies_exact(r, ell, k1, n - k2)?.value
        }
    };
    let lower_ex = match ex_star {
        Some(v) => v.clone(),
        None => {
            report = report.caveat("ex(n-k1-k2+1, S_ell) not supplied; 0 used on the lower side");
            Exact::zero()
        }
    };
    report.value = binom(n_, r_) - binom(n_ - k2_, r_) + upper_ex;
    report.lower = Some(binom(n_, r_) - binom(n_ - k1_ - k2_ + 1, r_) + lower_ex);
    Ok(report)
}

/// Parameters for [`evaluate`]; unused fields are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundQuery {
    pub r: usize,
    pub n: usize,
    pub ell: Option<usize>,
    pub stars: Vec<usize>,
    pub k: Option<usize>,
    pub k1: Option<usize>,
    pub k2: Option<usize>,
    pub c: Option<Exact>,
    pub ex_path: Option<Exact>,
    pub ex_star: Option<Exact>,
}

fn need(x: Option<usize>, name: &str) -> Result<usize> {
    x.ok_or_else(|| BoundsError::BadParameters(format!("missing parameter `{name}`")))
}

fn fixed_ell(given: Option<usize>, ell: usize) -> Result<usize> {
    match given {
        Some(g) if g != ell => Err(BoundsError::BadParameters(format!(
            "this bound has ell = {ell}, got {g}"
        ))),
        _ => Ok(ell),
    }
}

pub fn evaluate(theorem: TheoremId, q: &BoundQuery) -> Result<BoundReport> {
    let ell = || need(q.ell, "ell");
    match theorem {
        TheoremId::LinearPath => linear_path_upper(q.r, ell()?, q.n),
        TheoremId::LinearP3 => linear_path_upper(q.r, fixed_ell(q.ell, 3)?, q.n),
        TheoremId::LinearP2 => linear_path_upper(q.r, fixed_ell(q.ell, 2)?, q.n),
        TheoremId::StarForest => star_forest_upper(q.r, ell()?, need(q.k, "k")?, q.n),
        TheoremId::PathStarForest => path_star_forest_upper(q.r, ell()?, &q.stars, q.n),
        TheoremId::DesignCopies => design_copies_lower(q.r, ell()?, q.n),
        TheoremId::DesignLattice => design_lattice_lower(q.r, ell()?, need(q.k, "k")?, q.n),
        TheoremId::PathStarViaPath => {
            let ex = q
                .ex_path
                .as_ref()
                .ok_or_else(|| BoundsError::BadParameters("missing parameter `ex_path`".into()))?;
            path_star_via_path_upper(q.r, ell()?, need(q.k, "k")?, q.n, ex)
        }
        TheoremId::Path => path_exact(q.r, ell()?, q.n),
        TheoremId::PathCopies => path_copies_exact(q.r, ell()?, need(q.k, "k")?, q.n),
        TheoremId::Star => match &q.c {
            Some(c) => star_upper(q.r, ell()?, q.n, c),
            None => Ok(star_upper(q.r, ell()?, q.n, &exact(1))?
                .caveat("c(r) has no known value; c(r) = 1 used by default")),
        },
        TheoremId::PathPlusStars => path_plus_stars(
            q.r,
            ell()?,
            need(q.k, "k")?,
            q.n,
            q.ex_star.as_ref(),
            q.ex_path.as_ref(),
        ),
        TheoremId::PathsPlusStars => paths_plus_stars(
            q.r,
            ell()?,
            need(q.k1, "k1")?,
            need(q.k2, "k2")?,
            q.n,
            q.ex_star.as_ref(),
            q.ex_path.as_ref(),
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub tight_lower: bool,
    pub tight_upper: bool,
    pub violations: Vec<String>,
}

/// Checks `lower <= exact <= upper` for whichever values are present.
pub fn consistency_check(
    exact_value: Option<&Exact>,
    lower: Option<&Exact>,
    upper: Option<&Exact>,
) -> Result<ConsistencyReport> {
    let present = [exact_value, lower, upper]
        .iter()
        .filter(|x| x.is_some())
        .count();
    if present < 2 {
        return bad("consistency needs at least two of exact, lower, upper");
    }
    let mut violations = Vec::new();
    if let (Some(l), Some(u)) = (lower, upper) {
        if l > u {
            violations.push(format!("lower {l} exceeds upper {u}"));
        }
    }
    if let (Some(l), Some(x)) = (lower, exact_value) {
        if l > x {
            violations.push(format!("lower {l} exceeds exact {x}"));
        }
    }
    if let (Some(x), Some(u)) = (exact_value, upper) {
        if x > u {
            violations.push(format!("exact {x} exceeds upper {u}"));
        }
    }
    Ok(ConsistencyReport {
        consistent: violations.is_empty(),
        tight_lower: matches!((lower, exact_value), (Some(l), Some(x)) if l == x),
        tight_upper: matches!((upper, exact_value), (Some(u), Some(x)) if u == x),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(-2, 1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(
            binomial(60, 30),
            "118264581564861424".parse::<BigInt>().unwrap()
        );
    }

    #[test]
    fn linear_path_cases() {
        let r = linear_path_upper(3, 4, 100).unwrap();
        assert_eq!((r.value.clone(), r.side), (exact(600), Side::Upper));
        for ell in 4..12 {
            for n in [1, 7, 50, 333] {
                let v = linear_path_upper(3, ell, n).unwrap().value;
                assert_eq!(v, ratio(3, 2) * exact((ell * n) as i64));
            }
        }
        let r = linear_path_upper(5, 2, 12).unwrap();
        assert_eq!((r.value, r.side), (exact(2), Side::Exact));
        assert_eq!(linear_path_upper(3, 3, 7).unwrap().value, exact(7));
        assert_eq!(linear_path_upper(3, 5, 3).unwrap().value, ratio(45, 2));
        assert!(linear_path_upper(2, 4, 10).is_err());
    }

    #[test]
    fn star_forest() {
        assert_eq!(star_forest_upper(3, 2, 1, 10).unwrap().value, ratio(10, 3));
        for n in 1..20 {
            assert_eq!(star_forest_upper(3, 1, 1, n).unwrap().value, exact(0));
        }
        assert_eq!(star_forest_upper(3, 4, 2, 20).unwrap().value, ratio(57, 2));
    }

    #[test]
    fn path_star_forest() {
        assert_eq!(
            path_star_forest_upper(3, 4, &[], 100).unwrap().value,
            exact(600)
        );
        // k = 1 makes the k(k-1) term vanish
        assert_eq!(
            path_star_forest_upper(3, 4, &[4], 100).unwrap().value,
            ratio(1287, 2)
        );
        assert_eq!(
            path_star_forest_upper(3, 4, &[5], 100).unwrap().value,
            exact(792)
        );
        assert_eq!(
            path_star_forest_upper(3, 4, &[4, 4], 100).unwrap().value,
            (ratio(2, 2) + exact(6)) * exact(98) + ratio(2, 6)
        );
        assert!(path_star_forest_upper(3, 4, &[3, 4], 100).is_err());
        for ell in 4..9 {
            for n in [10, 55] {
                assert_eq!(
                    path_star_forest_upper(3, ell, &[], n).unwrap().value,
                    linear_path_upper(3, ell, n).unwrap().value
                );
            }
        }
    }

    #[test]
    fn lower_side() {
        let r = design_copies_lower(3, 4, 12).unwrap();
        assert_eq!(r.value, exact(14));
        assert!(!r.applicable);
        assert_eq!(design_copies_lower(3, 4, 14).unwrap().value, ratio(49, 3));
        let r = design_lattice_lower(3, 4, 3, 59).unwrap();
        assert_eq!(r.value, ratio(451, 3));
        assert!(!r.applicable);
        let ex = exact(600);
        let r = lower_bounds(LowerKind::PathStarViaPath, 3, 4, 1, 101, Some(&ex)).unwrap();
        assert_eq!(r.value, exact(650));
    }

    #[test]
    fn general_host_formulas() {
        assert_eq!(path_exact(3, 5, 10).unwrap().value, exact(64));
        assert_eq!(path_exact(3, 4, 10).unwrap().value, exact(43));
        assert_eq!(path_copies_exact(3, 1, 2, 10).unwrap().value, exact(36));
        assert_eq!(path_copies_exact(3, 2, 2, 10).unwrap().value, exact(36 + 7));
        // single path agrees with the k-copies formula at k = 1
        for r in 3..=5 {
            for ell in 4..=9 {
                for n in 10..=25 {
                    assert_eq!(
                        path_exact(r, ell, n).unwrap().value,
                        path_copies_exact(r, ell, 1, n).unwrap().value,
                        "r={r} ell={ell} n={n}"
                    );
                }
            }
        }
        let s = star_upper(3, 4, 10, &exact(1)).unwrap();
        assert_eq!(s.value, exact(120));
        assert!(s.caveats.iter().any(|c| c.contains("c(r)")));
        assert!(star_upper(3, 4, 10, &exact(0)).is_err());
        let q = BoundQuery {
            r: 3,
            n: 10,
            ell: Some(4),
            ..Default::default()
        };
        let d = evaluate(TheoremId::Star, &q).unwrap();
        assert_eq!(d.value, exact(120));
        assert!(d.caveats.iter().any(|c| c.contains("by default")));
    }

    #[test]
    fn cone_shaped_bounds() {
        let r = path_plus_stars(3, 4, 1, 10, None, None).unwrap();
        let cone = exact(120 - 84);
        assert_eq!(r.lower, Some(cone.clone()));
        assert_eq!(r.value, cone + path_exact(3, 4, 9).unwrap().value);
        let r = paths_plus_stars(3, 4, 2, 1, 12, None, None).unwrap();
        assert!(r.lower.clone().unwrap() <= r.value);
    }

    #[test]
    fn consistency() {
        let c = consistency_check(Some(&exact(7)), None, Some(&exact(7))).unwrap();
        assert!(c.consistent && c.tight_upper);
        let c = consistency_check(Some(&exact(2)), Some(&exact(2)), None).unwrap();
        assert!(c.consistent && c.tight_lower);
        let c = consistency_check(Some(&exact(15)), Some(&exact(14)), Some(&exact(10))).unwrap();
        assert!(!c.consistent);
        assert_eq!(c.violations.len(), 2);
        assert!(consistency_check(Some(&exact(1)), None, None).is_err());
    }

    #[test]
    fn ids_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.name().parse::<TheoremId>().unwrap(), t);
        }
        assert!("nope".parse::<TheoremId>().is_err());
    }
}
