//! Acceptance suite. Prints one line per criterion and exits non-zero when
//! any criterion fails.
//!
//! `DEVIATION` marks a criterion whose checks all pass but whose quoted
//! constant disagrees with the value recomputed from the formula; the
//! recomputed value is what gets asserted.

mod common;

use std::ops::ControlFlow;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hyperturan::bounds::{self, binomial};
use hyperturan::construction::{self, CertificateMethod};
use hyperturan::design::{self, DesignCaps, DesignOutcome};
use hyperturan::detect;
use hyperturan::endsets::{self, Section2Status};
use hyperturan::hypergraph::{cartesian_product, integer_lattice, DEFAULT_SIZE_CAP};
use hyperturan::oracle::{self, HostKind, OracleResult, SearchBudget};
use hyperturan::pattern::{linear_cycle, linear_path, linear_star};
use hyperturan::{
    exact, ratio, Exact, ForbiddenPattern, Hypergraph, LabeledHypergraph, Uniformity,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{naive, random_host};

enum Outcome {
    Pass(String),
    Deviation(String),
    Fail(String),
}

type Check = Result<Outcome, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.1?}, limit {limit:?}"))
}

fn linear_max(n: usize, r: usize, pattern: &ForbiddenPattern) -> Result<OracleResult, String> {
    let res = oracle::max_edges(n, r, pattern, HostKind::Linear, &SearchBudget::unlimited())
        .map_err(|e| e.to_string())?;
    ensure(res.is_exact(), || format!("oracle interrupted at n={n}"))?;
    Ok(res)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let p2 = ForbiddenPattern::path(3, 2).unwrap();
    let mut values = Vec::new();
    for n in 3..=8 {
        let res = linear_max(n, 3, &p2)?;
        ensure(res.value == n / 3, || {
            format!("n={n}: oracle {} vs floor(n/3) = {}", res.value, n / 3)
        })?;
        values.push(res.value);
    }
    ensure(values == [1, 1, 1, 2, 2, 2], || {
        format!("values {values:?}")
    })?;
    within(Duration::from_secs(30), start)?;
    Ok(Outcome::Pass(format!(
        "ex_lin(n, P2) for n=3..8 = {values:?} in {:.1?}",
        start.elapsed()
    )))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let res = linear_max(7, 3, &ForbiddenPattern::path(3, 3).unwrap())?;
    ensure(res.value == 7, || format!("oracle value {}", res.value))?;
    ensure(design::verify_design(&res.witness), || {
        "witness is not a 2-(7,3,1) design".into()
    })?;
    let upper = bounds::linear_path_upper(3, 3, 7).unwrap().value;
    let c = bounds::consistency_check(Some(&exact(7)), None, Some(&upper)).unwrap();
    ensure(c.consistent && c.tight_upper, || {
        format!("consistency {c:?}")
    })?;
    within(Duration::from_secs(600), start)?;
    Ok(Outcome::Pass(format!(
        "ex_lin(7, P3) = 7, witness is a Fano plane, bound n = 7 met with equality ({:.1?})",
        start.elapsed()
    )))
}

fn criterion_3() -> Check {
    let mut checked = 0;
    let mut rows: Vec<(usize, usize, usize)> = Vec::new();
    let p2 = ForbiddenPattern::path(3, 2).unwrap();
    for n in 3..=8 {
        rows.push((2, n, linear_max(n, 3, &p2)?.value));
    }
    rows.push((
        3,
        7,
        linear_max(7, 3, &ForbiddenPattern::path(3, 3).unwrap())?.value,
    ));
    let p4 = ForbiddenPattern::path(3, 4).unwrap();
    for n in 3..=7 {
        rows.push((4, n, linear_max(n, 3, &p4)?.value));
    }
    let mut violations = Vec::new();
    for &(ell, n, value) in &rows {
        let upper = bounds::linear_path_upper(3, ell, n).unwrap();
        let c = bounds::consistency_check(Some(&exact(value as i64)), None, Some(&upper.value))
            .unwrap();
        checked += 1;
        if !c.consistent || (upper.side == bounds::Side::Exact && !c.tight_upper) {
            violations.push(format!(
                "ell={ell} n={n}: exact {value} vs bound {}",
                upper.value
            ));
        }
    }
    ensure(violations.is_empty(), || violations.join("; "))?;
    let p4_values: Vec<usize> = rows.iter().filter(|r| r.0 == 4).map(|r| r.2).collect();
    Ok(Outcome::Pass(format!(
        "{checked} exact values, zero violations (P4 grid n=3..7: {p4_values:?} vs 6n)"
    )))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let caps = DesignCaps::default();
    let mut summary = Vec::new();
    for (n, blocks) in [(7, 7), (9, 12), (13, 26), (15, 35)] {
        let outcome = design::build_design_with(n, 3, &caps).map_err(|e| e.to_string())?;
        let DesignOutcome::Built(d) = outcome else {
            return Err(format!("({n},3) not built: {outcome:?}"));
        };
        ensure(d.graph.edge_count() == blocks, || {
            format!("({n},3): {} blocks", d.graph.edge_count())
        })?;
        ensure(design::block_count(n, 3) == exact(blocks as i64), || {
            format!("({n},3) count formula")
        })?;
        ensure(design::verify_design(&d.graph), || {
            format!("({n},3) fails verification")
        })?;
        summary.push(format!("({n},3)={blocks} via {}", d.strategy));
    }
    for n in [6, 8] {
        let outcome = design::build_design_with(n, 3, &caps).map_err(|e| e.to_string())?;
        ensure(outcome == DesignOutcome::Inadmissible, || {
            format!("({n},3): {outcome:?}")
        })?;
    }
    within(Duration::from_secs(60), start)?;
    Ok(Outcome::Pass(format!(
        "{}; (6,3) and (8,3) inadmissible",
        summary.join(", ")
    )))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let p4 = ForbiddenPattern::path(3, 4).unwrap();
    let (mut hosts, mut embeddings, mut counterexamples) = (0u64, 0u64, Vec::new());
    let mut worst_pair = 0;
    for n in 3..=7 {
        let mut failure = None;
        let res = oracle::for_each_free(
            n,
            3,
            &p4,
            HostKind::Linear,
            None,
            &SearchBudget::unlimited(),
            |h| {
                if detect::contains_path(h, 3, 3).unwrap().is_none() {
                    return ControlFlow::Continue(());
                }
                hosts += 1;
                match endsets::verify_all_embeddings(h, 3, 4) {
                    Ok(reports) => {
                        for rep in reports {
                            embeddings += 1;
                            worst_pair = worst_pair.max(rep.min_end_pair.unwrap_or(usize::MAX));
                            if let Section2Status::Failed { counterexamples: c } = rep.status {
                                counterexamples.push(format!("{:?}: {c:?}", h.edges()));
                            }
                        }
                    }
                    Err(e) => {
                        failure = Some(format!("{:?}: {e}", h.edges()));
                        return ControlFlow::Break(());
                    }
                }
                ControlFlow::Continue(())
            },
        )
        .map_err(|e| e.to_string())?;
        if let Some(f) = failure {
            return Err(f);
        }
        ensure(res.status == oracle::OracleStatus::Exact, || {
            "enumeration interrupted".into()
        })?;
    }
    ensure(hosts > 0, || "no host contains P3".into())?;
    // on at most 7 vertices an embedded P3 leaves no exterior vertex, so
    // sample larger hosts where the end sets can be non-empty
    let mut rng = ChaCha8Rng::seed_from_u64(0xe4d5);
    let (mut sampled, mut sampled_embeddings, mut exterior) = (0u64, 0u64, 0u64);
    for _ in 0..6000 {
        let r = rng.gen_range(3..=4);
        let ell = rng.gen_range(4..=5);
        let n = rng.gen_range(8..=13);
        let h = random_host(&mut rng, n, r, 9, true);
        if detect::contains_path(&h, r, ell).unwrap().is_some()
            || detect::contains_path(&h, r, ell - 1).unwrap().is_none()
        {
            continue;
        }
        sampled += 1;
        let reports = endsets::verify_all_embeddings(&h, r, ell)
            .map_err(|e| format!("{:?}: {e}", h.edges()))?;
        for rep in reports {
            sampled_embeddings += 1;
            exterior +=
                u64::from(rep.min_end_pair.is_some_and(|m| m > 0) || rep.traversing_pairs > 0);
            if let (Some(m), Some(b)) = (rep.min_end_pair, rep.end_pair_bound) {
                ensure(m <= b, || {
                    format!("{:?}: min end pair {m} above {b}", h.edges())
                })?;
            }
            if let Section2Status::Failed { counterexamples: c } = rep.status {
                counterexamples.push(format!("r={r} ell={ell} {:?}: {c:?}", h.edges()));
            }
        }
    }
    ensure(sampled > 0 && exterior > 0, || {
        "sample never produced non-empty end sets".into()
    })?;
    ensure(counterexamples.is_empty(), || {
        format!(
            "{} counterexamples, first {}",
            counterexamples.len(),
            counterexamples[0]
        )
    })?;
    ensure(worst_pair <= 2, || {
        format!("min |A1(u)|+|B1(v)| reached {worst_pair}")
    })?;
    within(Duration::from_secs(1800), start)?;
    Ok(Outcome::Pass(format!(
        "exhaustive n<=7: {hosts} hosts, {embeddings} labelled embeddings, max over embeddings of min |A1|+|B1| = {worst_pair}; \
         sampled n=8..13, r=3..4, ell=4..5: {sampled} hosts, {sampled_embeddings} embeddings, {exterior} with exterior activity; \
         zero counterexamples ({:.1?})",
        start.elapsed()
    )))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let rep = construction::thm47_construction(3, 4, 3, 1, &DesignCaps::default(), true)
        .map_err(|e| e.to_string())?;
    let g = rep.graph();
    ensure(g.vertex_count() == 59 && g.edge_count() == 141, || {
        format!("{} vertices, {} edges", g.vertex_count(), g.edge_count())
    })?;
    ensure(g.is_linear(), || "not linear".into())?;
    ensure(g.uniformity() == Uniformity::Uniform(3), || {
        "not 3-uniform".into()
    })?;
    ensure(rep.params["m"] == "7", || {
        "fallback design is not on 7 points".into()
    })?;
    ensure(rep.caveats.iter().any(|c| c.contains("fallback")), || {
        "fallback caveat missing".into()
    })?;
    let pattern = construction::path_and_stars(3, 4, 3).unwrap();
    ensure(detect::is_free(g, &pattern), || {
        "detect finds P4 + 3 S4".into()
    })?;
    let cert = |m: CertificateMethod| {
        rep.certificates
            .iter()
            .find(|c| c.method == m)
            .map(|c| c.holds)
    };
    ensure(cert(CertificateMethod::Detect) == Some(true), || {
        "detect certificate".into()
    })?;
    ensure(cert(CertificateMethod::Structural) == Some(true), || {
        "structural certificate".into()
    })?;
    let rest = g.remove_vertices(&[0, 1, 2]).unwrap();
    let fanos = rest
        .components()
        .into_iter()
        .filter(|c| {
            rest.induced(c)
                .is_ok_and(|h| h.edge_count() == 7 && design::verify_design(&h))
        })
        .count();
    ensure(fanos == 8, || {
        format!("{fanos} Fano components after removing U")
    })?;
    within(Duration::from_secs(300), start)?;
    // (3/2 + 7/6) * (59 - 3) + 3*2/6, computed independently of the evaluator
    let nominal = (ratio(3, 2) + ratio(7, 6)) * exact(56) + ratio(6, 6);
    ensure(nominal == ratio(451, 3) && rep.target == nominal, || {
        format!("nominal {}", rep.target)
    })?;
    let line = format!(
        "59 vertices, 141 edges, linear, 3-uniform, P4+3*S4-free by detect and by structure (8 Fano copies); nominal value {} vs achieved 141 with fallback caveat ({:.1?})",
        rep.target,
        start.elapsed()
    );
    Ok(Outcome::Deviation(format!(
        "{line}; the quoted nominal 449/3 does not match the formula, which gives 451/3"
    )))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = 0;
    for n in 3..=12 {
        for k in 1..=3usize.min(n) {
            for trial in 0..3 {
                let kernel = if trial == 0 || n - k < 3 {
                    Hypergraph::empty(n - k, Uniformity::Uniform(3))
                } else {
                    random_host(&mut rng, n - k, 3, 10, trial == 1)
                };
                let rep = construction::cone_construction(n, 3, k, &kernel, None)
                    .map_err(|e| e.to_string())?;
                let enumerated = oracle::candidate_edges(n, 3)
                    .into_iter()
                    .filter(|e| e.iter().any(|&v| v < k))
                    .count()
                    + kernel.edge_count();
                let formula =
                    binomial(n as i64, 3) - binomial((n - k) as i64, 3) + kernel.edge_count();
                ensure(
                    rep.achieved == enumerated
                        && Exact::from_integer(formula.clone()) == exact(enumerated as i64),
                    || {
                        format!(
                            "n={n} k={k}: built {} enumerated {enumerated} formula {formula}",
                            rep.achieved
                        )
                    },
                )?;
                cases += 1;
            }
        }
    }
    let (kernel, _) = construction::star_free_kernel(
        8,
        3,
        4,
        8,
        &SearchBudget::default(),
        &DesignCaps::default(),
    )
    .map_err(|e| e.to_string())?;
    ensure(kernel.edge_count() == 56, || {
        format!("kernel has {} edges", kernel.edge_count())
    })?;
    let pattern = construction::path_and_stars(3, 4, 1).unwrap();
    let rep = construction::cone_construction(9, 3, 1, &kernel, Some(&pattern))
        .map_err(|e| e.to_string())?;
    ensure(detect::is_free(rep.graph(), &pattern), || {
        "cone contains P4 + S4".into()
    })?;
    ensure(rep.certified(), || format!("{:?}", rep.certificates))?;
    Ok(Outcome::Pass(format!(
        "{cases} cones match C(n,3)-C(n-k,3)+|E(kernel)|; n=9 cone over the 56-edge S4-free kernel is P4+S4-free"
    )))
}

fn criterion_8() -> Check {
    for (dim, v, e) in [(2, 16, 8), (3, 64, 48)] {
        let l = integer_lattice(4, dim, DEFAULT_SIZE_CAP).map_err(|e| e.to_string())?;
        let g = l.graph();
        ensure(g.vertex_count() == v && g.edge_count() == e, || {
            format!(
                "[4]^{dim}: {} vertices, {} edges",
                g.vertex_count(),
                g.edge_count()
            )
        })?;
        ensure(g.is_linear(), || format!("[4]^{dim} not linear"))?;
    }
    let fano = design::build_design(7, 3).unwrap().design().unwrap().graph;
    let factors: Vec<(Hypergraph, LabeledHypergraph)> = vec![
        (
            fano.clone(),
            integer_lattice(2, 1, DEFAULT_SIZE_CAP).unwrap(),
        ),
        (
            fano.clone(),
            integer_lattice(2, 3, DEFAULT_SIZE_CAP).unwrap(),
        ),
        (fano.clone(), LabeledHypergraph::plain(fano.clone())),
        (
            linear_path(3, 3).unwrap(),
            integer_lattice(3, 2, DEFAULT_SIZE_CAP).unwrap(),
        ),
        (
            linear_star(3, 4).unwrap(),
            LabeledHypergraph::plain(linear_path(3, 2).unwrap()),
        ),
        (
            linear_cycle(3, 4).unwrap(),
            integer_lattice(4, 2, DEFAULT_SIZE_CAP).unwrap(),
        ),
        (
            linear_path(4, 2).unwrap(),
            LabeledHypergraph::plain(linear_cycle(3, 3).unwrap()),
        ),
        (
            integer_lattice(3, 2, DEFAULT_SIZE_CAP)
                .unwrap()
                .graph()
                .clone(),
            integer_lattice(3, 2, DEFAULT_SIZE_CAP).unwrap(),
        ),
        (
            design::build_design(9, 3).unwrap().design().unwrap().graph,
            integer_lattice(2, 2, DEFAULT_SIZE_CAP).unwrap(),
        ),
        (
            Hypergraph::empty(5, Uniformity::Uniform(3)),
            LabeledHypergraph::plain(fano.clone()),
        ),
    ];
    for (i, (h, g)) in factors.iter().enumerate() {
        let p = cartesian_product(h, g, DEFAULT_SIZE_CAP).map_err(|e| e.to_string())?;
        let gg = g.graph();
        let want = h.edge_count() * gg.vertex_count() + gg.edge_count() * h.vertex_count();
        ensure(p.graph().edge_count() == want, || {
            format!("pair {i}: {} vs {want}", p.graph().edge_count())
        })?;
        ensure(p.graph().is_linear(), || {
            format!("pair {i}: product not linear")
        })?;
    }
    Ok(Outcome::Pass(format!(
        "[4]^2 = (16, 8), [4]^3 = (64, 48); {} products match |E(H)||V(G)| + |E(G)||V(H)| and are linear",
        factors.len()
    )))
}

fn criterion_9() -> Check {
    let a = bounds::path_exact(3, 5, 10).unwrap();
    let b = bounds::path_exact(3, 4, 10).unwrap();
    let c = bounds::path_copies_exact(3, 1, 2, 10).unwrap();
    for rep in [&a, &b, &c] {
        ensure(
            !rep.applicable && rep.caveats.iter().any(|c| c.contains("not certified")),
            || format!("{} lacks the asymptotic flag", rep.theorem),
        )?;
    }
    ensure(a.value == exact(64), || {
        format!("single path, ell=5: {}", a.value)
    })?;
    ensure(b.value == exact(43), || {
        format!("single path, ell=4: {}", b.value)
    })?;
    // k floor((ell+1)/2) = 2, so the sum runs over C(n-1, r-1) alone
    let independent = binomial(9, 2);
    ensure(c.value == Exact::from_integer(independent.clone()), || {
        format!("k copies: {}", c.value)
    })?;
    Ok(Outcome::Deviation(format!(
        "64 and 43 reproduced; the k-copies formula gives {} = C(9,2), not the quoted 64 = C(9,2)+C(8,2) (the quoted value sums one term too many); all flagged as asymptotic",
        c.value
    )))
}

fn criterion_10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut linear_hosts = 0;
    let mut positives = 0;
    for i in 0..500 {
        let r = rng.gen_range(3..=4);
        let n = rng.gen_range(r..=12);
        let host = random_host(&mut rng, n, r, 8, i % 2 == 0);
        linear_hosts += usize::from(host.is_linear());
        for ell in 1..=4 {
            let p = ForbiddenPattern::path(r, ell).unwrap();
            let got = detect::contains_path(&host, r, ell).unwrap().is_some();
            ensure(got == naive::contains(&host, &p), || {
                format!("path {ell} on {:?}", host.edges())
            })?;
            positives += usize::from(got);
            let s = ForbiddenPattern::star(r, ell).unwrap();
            let got = detect::contains_star(&host, r, ell, None)
                .unwrap()
                .is_some();
            ensure(got == naive::contains(&host, &s), || {
                format!("star {ell} on {:?}", host.edges())
            })?;
        }
        for ell in 3..=4 {
            let p = ForbiddenPattern::cycle(r, ell).unwrap();
            let got = detect::contains_cycle(&host, r, ell).unwrap().is_some();
            ensure(got == naive::contains(&host, &p), || {
                format!("cycle {ell} on {:?}", host.edges())
            })?;
        }
        for text in ["2*P1", "P2+S2", "P1+S2", "2*S2", "P2+P1"] {
            let p = ForbiddenPattern::parse(text, Some(r)).unwrap();
            let got = detect::contains_forest(&host, &p).is_some();
            ensure(got == naive::contains(&host, &p), || {
                format!("{text} on {:?}", host.edges())
            })?;
        }
    }
    Ok(Outcome::Pass(format!(
        "500 hosts ({linear_hosts} linear), all path/star/cycle/forest queries agree with the naive enumerator ({positives} positive path queries)"
    )))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("exact small values", criterion_1),
        ("tightness instance", criterion_2),
        ("bound dominance", criterion_3),
        ("design suite", criterion_4),
        ("end-set lemma suite", criterion_5),
        ("construction verification", criterion_6),
        ("cone identity", criterion_7),
        ("product and lattice counts", criterion_8),
        ("general-host formula values", criterion_9),
        ("detector equivalence", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run().unwrap_or_else(Outcome::Fail);
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Deviation(d) => ("DEVIATION", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} [{tag}] {name}: {detail}", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
