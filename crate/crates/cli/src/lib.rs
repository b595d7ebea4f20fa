//! Command-line front end. [`run`] parses arguments, dispatches, and returns
//! the process exit code: 0 success, 1 usage or internal error, 2 property
//! fails or pattern found, 3 search budget exhausted.

pub mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hyperturan::bounds::{self, BoundQuery, TheoremId};
use hyperturan::construction::{self, CertificateMethod, ConstructionReport};
use hyperturan::design::{self, DesignOutcome};
use hyperturan::detect;
use hyperturan::endsets::{self, Section2Status};
use hyperturan::hypergraph::{self, DEFAULT_SIZE_CAP};
use hyperturan::io;
use hyperturan::oracle::{self, HostKind, OracleStatus, ResultKey, ResultStore};
use hyperturan::pattern::{self, Component};
use hyperturan::{Exact, ForbiddenPattern, Hypergraph, LabeledHypergraph};
use serde::Serialize;
use thiserror::Error;

use config::{Config, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILS: i32 = 2;
pub const EXIT_INTERRUPTED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error("{0}")]
    Library(String),
}

fn lib_err(e: impl std::fmt::Display) -> CliError {
    CliError::Library(e.to_string())
}

type CliResult = Result<i32, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "hyperturan",
    version,
    about = "Linear hypergraphs, forbidden paths and stars, exact Turán numbers"
)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format for hypergraphs and reports.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Directory for the results store.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Accepted for reproducible scripting; the exact algorithms do not use it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a hypergraph or construction.
    #[command(subcommand)]
    Build(Build),
    /// Check a property of a hypergraph file.
    #[command(subcommand)]
    Check(Check),
    /// Exact (linear) Turán number by exhaustive search.
    Turan(TuranArgs),
    /// Evaluate a bound formula.
    Bound(BoundArgs),
    /// Verify lemma properties, constructions, or the built-in suite.
    #[command(subcommand)]
    Verify(Verify),
    /// Summarise the results store.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Write the hypergraph here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the construction report (structured) here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Build {
    Path {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        output: Output,
    },
    Star {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        output: Output,
    },
    Cycle {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        ell: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Realize a pattern expression such as `P4+2*S4@r3`.
    Forest {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        r: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    Lattice {
        #[arg(long)]
        side: usize,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        output: Output,
    },
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    Design {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        output: Output,
    },
    Thm45 {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    Thm47 {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Skip the detect certificate and keep only the structural one.
        #[arg(long)]
        no_detect: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Cone over a kernel file, or over an S_ell-free kernel built for `--ell`.
    Cone {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "ell")]
        kernel: Option<PathBuf>,
        #[arg(long, required_unless_present = "kernel")]
        ell: Option<usize>,
        /// Pattern to certify; defaults to `P_ell + k*S_ell` when `--ell` is given.
        #[arg(long)]
        certify: Option<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
enum Check {
    Linear {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Design {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Free {
        #[arg(long)]
        pattern: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug, Args)]
struct TuranArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    pattern: String,
    /// Restrict to linear hosts.
    #[arg(long)]
    linear: bool,
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long)]
    time_limit_ms: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Do not read or write the results store.
    #[arg(long)]
    no_store: bool,
    /// Recompute even when the store holds an exact value.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
struct BoundArgs {
    /// One of: linear-path, linear-p3, linear-p2, star-forest, path-star-forest,
    /// design-copies, path-star-via-path, design-lattice, path, path-copies,
    /// star, path-plus-stars, paths-plus-stars.
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: Option<usize>,
    /// Comma-separated star lengths, descending.
    #[arg(long, value_delimiter = ',')]
    stars: Vec<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    k2: Option<usize>,
    /// The constant c(r), as `p/q` or an integer.
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    ex_path: Option<String>,
    #[arg(long)]
    ex_star: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Verify {
    /// End-set lemmas over every embedded `P_{ell-1}`.
    Section2 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        ell: usize,
    },
    /// Re-verify a constructed hypergraph file.
    Construction {
        #[arg(long = "in")]
        input: PathBuf,
        /// Pattern that must be absent.
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long)]
        linear: bool,
        #[arg(long)]
        uniform: Option<usize>,
    },
    /// Quick built-in self-check.
    Suite,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Results directory; defaults to the configured output directory.
    #[arg(long)]
    dir: Option<PathBuf>,
}

struct Ctx {
    config: Config,
}

impl Ctx {
    fn format(&self) -> Format {
        self.config.format
    }
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cli: Cli) -> CliResult {
    let mut config = Config::load(cli.config.as_deref())?;
    if let Some(f) = cli.format {
        config.format = f;
    }
    if let Some(dir) = cli.output_dir {
        config.output_dir = dir;
    }
    let ctx = Ctx { config };
    match cli.command {
        Command::Build(b) => build(&ctx, b),
        Command::Check(c) => check(c),
        Command::Turan(t) => turan(&ctx, t),
        Command::Bound(b) => bound(&ctx, b),
        Command::Verify(v) => verify(&ctx, v),
        Command::Report(r) => report(&ctx, r),
    }
}

fn read_graph(path: &Path) -> Result<LabeledHypergraph, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    io::parse_any(&text).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn render(graph: &LabeledHypergraph, format: Format) -> String {
    match format {
        Format::Text => io::to_text(graph.graph()),
        Format::Structured => io::labeled_to_json(graph) + "\n",
    }
}

fn emit(graph: &LabeledHypergraph, output: &Output, format: Format) -> Result<(), CliError> {
    let text = render(graph, format);
    match &output.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn emit_report(report: &ConstructionReport, output: &Output, format: Format) -> CliResult {
    emit(&report.result, output, format)?;
    if let Some(path) = &output.report {
        write_file(path, &(json(report) + "\n"))?;
    }
    eprintln!(
        "{}: {} vertices, {} edges, target {}, linear {}",
        report.name, report.vertices, report.achieved, report.target, report.linear
    );
    for c in &report.certificates {
        let verdict = match (c.holds, c.method) {
            (true, _) => "absent",
            (false, CertificateMethod::Detect) => "FOUND",
            (false, CertificateMethod::Structural) => "argument does not apply",
        };
        eprintln!(
            "certificate {:?} {}: {verdict} ({})",
            c.method, c.pattern, c.detail
        );
    }
    for c in &report.caveats {
        eprintln!("caveat: {c}");
    }
    Ok(if report.certificates.is_empty() || report.certified() {
        EXIT_OK
    } else {
        EXIT_FAILS
    })
}

fn build(ctx: &Ctx, b: Build) -> CliResult {
    let fmt = ctx.format();
    let plain = |g: Hypergraph| LabeledHypergraph::plain(g);
    match b {
        Build::Path { r, ell, output } => {
            emit(
                &plain(pattern::linear_path(r, ell).map_err(lib_err)?),
                &output,
                fmt,
            )?;
        }
        Build::Star { r, ell, output } => {
            emit(
                &plain(pattern::linear_star(r, ell).map_err(lib_err)?),
                &output,
                fmt,
            )?;
        }
        Build::Cycle { r, ell, output } => {
            emit(
                &plain(pattern::linear_cycle(r, ell).map_err(lib_err)?),
                &output,
                fmt,
            )?;
        }
        Build::Forest { pattern, r, output } => {
            let p = ForbiddenPattern::parse(&pattern, r).map_err(lib_err)?;
            emit(&plain(p.realize()), &output, fmt)?;
        }
        Build::Lattice { side, dim, output } => {
            let l = hypergraph::integer_lattice(side, dim, DEFAULT_SIZE_CAP).map_err(lib_err)?;
            emit(&l, &output, fmt)?;
        }
        Build::Product {
            left,
            right,
            output,
        } => {
            let left = read_graph(&left)?;
            let right = read_graph(&right)?;
            let p = hypergraph::cartesian_product(left.graph(), &right, DEFAULT_SIZE_CAP)
                .map_err(lib_err)?;
            emit(&p, &output, fmt)?;
        }
        Build::Design { n, r, output } => {
            match design::build_design_with(n, r, &ctx.config.design_caps).map_err(lib_err)? {
                DesignOutcome::Built(d) => {
                    emit(&plain(d.graph), &output, fmt)?;
                    eprintln!("2-({n},{r},1) design, strategy: {}", d.strategy);
                }
                DesignOutcome::Inadmissible => {
                    eprintln!("({n},{r}) fails the divisibility conditions; no design exists");
                    return Ok(EXIT_FAILS);
                }
                DesignOutcome::NotAttempted { reason } => {
                    eprintln!("no design built: {reason}");
                    return Ok(EXIT_FAILS);
                }
            }
        }
        Build::Thm45 { r, ell, n, output } => {
            let rep = construction::thm45_construction(r, ell, n, &ctx.config.design_caps)
                .map_err(lib_err)?;
            return emit_report(&rep, &output, fmt);
        }
        Build::Thm47 {
            r,
            ell,
            k,
            copies,
            no_detect,
            output,
        } => {
            let rep = construction::thm47_construction(
                r,
                ell,
                k,
                copies,
                &ctx.config.design_caps,
                !no_detect,
            )
            .map_err(lib_err)?;
            return emit_report(&rep, &output, fmt);
        }
        Build::Cone {
            n,
            r,
            k,
            kernel,
            ell,
            certify,
            output,
        } => {
            if k > n {
                return Err(CliError::Usage(format!("k = {k} exceeds n = {n}")));
            }
            let (kernel, note) = match (kernel, ell) {
                (Some(path), _) => (read_graph(&path)?.into_parts().0, None),
                (None, Some(ell)) => construction::star_free_kernel(
                    n - k,
                    r,
                    ell,
                    ctx.config.kernel_oracle_cap,
                    &ctx.config.budget,
                    &ctx.config.design_caps,
                )
                .map_err(lib_err)?,
                (None, None) => return Err(CliError::Usage("give --kernel or --ell".into())),
            };
            let pattern = match (certify, ell) {
                (Some(text), _) => Some(ForbiddenPattern::parse(&text, Some(r)).map_err(lib_err)?),
                (None, Some(ell)) => {
                    Some(construction::path_and_stars(r, ell, k).map_err(lib_err)?)
                }
                (None, None) => None,
            };
            let mut rep = construction::cone_construction(n, r, k, &kernel, pattern.as_ref())
                .map_err(lib_err)?;
            rep.caveats.extend(note);
            return emit_report(&rep, &output, fmt);
        }
    }
    Ok(EXIT_OK)
}

fn note_star_reading(p: &ForbiddenPattern) {
    if p.components()
        .iter()
        .any(|c| matches!(c, Component::Star(_)))
    {
        eprintln!("note: {}", construction::STAR_READING);
    }
}

fn check(c: Check) -> CliResult {
    match c {
        Check::Linear { input } => {
            let g = read_graph(&input)?;
            let linear = g.graph().is_linear();
            println!("{}", if linear { "linear" } else { "not linear" });
            Ok(if linear { EXIT_OK } else { EXIT_FAILS })
        }
        Check::Design { input } => {
            let g = read_graph(&input)?;
            let ok = design::verify_design(g.graph());
            println!(
                "{}",
                if ok {
                    "design"
                } else {
                    "not a 2-(n,r,1) design"
                }
            );
            Ok(if ok { EXIT_OK } else { EXIT_FAILS })
        }
        Check::Free { pattern, input } => {
            let g = read_graph(&input)?;
            let p = ForbiddenPattern::parse(&pattern, g.graph().uniformity().order())
                .map_err(lib_err)?;
            note_star_reading(&p);
            match detect::contains_forest(g.graph(), &p) {
                None => {
                    println!("{p}-free");
                    Ok(EXIT_OK)
                }
                Some(emb) => {
                    let witness = Hypergraph::new(
                        g.graph().vertex_count(),
                        emb.host_edges().iter().map(|&e| g.graph().edge(e)),
                        None,
                    )
                    .map_err(lib_err)?;
                    println!("{}", io::to_json(&witness));
                    eprintln!("{p} found on host edges {:?}", emb.host_edges());
                    Ok(EXIT_FAILS)
                }
            }
        }
    }
}

fn turan(ctx: &Ctx, t: TuranArgs) -> CliResult {
    let pattern = ForbiddenPattern::parse(&t.pattern, Some(t.r)).map_err(lib_err)?;
    if pattern.r() != t.r {
        return Err(CliError::Usage(format!(
            "pattern uniformity {} differs from --r {}",
            pattern.r(),
            t.r
        )));
    }
    let host = if t.linear {
        HostKind::Linear
    } else {
        HostKind::General
    };
    let mut budget = ctx.config.budget.clone();
    if let Some(v) = t.node_limit {
        budget.node_limit = Some(v);
    }
    if let Some(v) = t.time_limit_ms {
        budget.time_limit_ms = Some(v);
    }
    if let Some(v) = t.threads {
        budget.threads = v;
    }
    let mut store = if t.no_store {
        None
    } else {
        Some(ResultStore::open(&ctx.config.output_dir).map_err(lib_err)?)
    };
    let key = ResultKey::new(t.n, t.r, &pattern, host);
    let cached = match (&store, t.force) {
        (Some(s), false) => s.exact(&key).map_err(lib_err)?,
        _ => None,
    };
    let result = match cached {
        Some(r) => {
            eprintln!("exact value read from the results store");
            r
        }
        None => {
            let r = oracle::max_edges(t.n, t.r, &pattern, host, &budget).map_err(lib_err)?;
            if let Some(s) = store.as_mut() {
                s.append(&r).map_err(lib_err)?;
            }
            r
        }
    };
    match ctx.format() {
        Format::Text => println!("{}", result.value),
        Format::Structured => println!("{}", json(&result)),
    }
    eprintln!(
        "ex({}, {pattern}) {} hosts: {} [{:?}, {} nodes, {} ms]",
        t.n, host, result.value, result.status, result.stats.nodes, result.stats.elapsed_ms
    );
    Ok(match result.status {
        OracleStatus::Exact => EXIT_OK,
        OracleStatus::Interrupted => EXIT_INTERRUPTED,
    })
}

fn parse_exact(text: &Option<String>, name: &str) -> Result<Option<Exact>, CliError> {
    text.as_ref()
        .map(|t| {
            t.trim().parse::<Exact>().map_err(|_| {
                CliError::Usage(format!(
                    "--{name} must be a rational such as 3/2, got `{t}`"
                ))
            })
        })
        .transpose()
}

fn bound(ctx: &Ctx, b: BoundArgs) -> CliResult {
    let theorem: TheoremId = b.theorem.parse().map_err(lib_err)?;
    let query = BoundQuery {
        r: b.r,
        n: b.n,
        ell: b.ell,
        stars: b.stars,
        k: b.k,
        k1: b.k1,
        k2: b.k2,
        c: parse_exact(&b.c, "c")?,
        ex_path: parse_exact(&b.ex_path, "ex-path")?,
        ex_star: parse_exact(&b.ex_star, "ex-star")?,
    };
    let rep = bounds::evaluate(theorem, &query).map_err(lib_err)?;
    match ctx.format() {
        Format::Structured => println!("{}", json(&rep)),
        Format::Text => {
            let mut line = format!("{} = {} ({:?})", rep.theorem, rep.value, rep.side);
            if let Some(l) = &rep.lower {
                let _ = write!(line, ", lower side {l}");
            }
            if !rep.applicable {
                line.push_str(", hypotheses not certified");
            }
            println!("{line}");
            for c in &rep.caveats {
                println!("  caveat: {c}");
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Section2Output {
    embeddings: usize,
    failed: usize,
    reports: Vec<endsets::Section2Report>,
}

fn verify(ctx: &Ctx, v: Verify) -> CliResult {
    match v {
        Verify::Section2 { input, ell } => {
            let g = read_graph(&input)?;
            let r = g
                .graph()
                .uniformity()
                .order()
                .ok_or_else(|| CliError::Usage("section2 needs a uniform host".into()))?;
            let reports = endsets::verify_all_embeddings(g.graph(), r, ell).map_err(lib_err)?;
            let failed = reports
                .iter()
                .filter(|r| matches!(r.status, Section2Status::Failed { .. }))
                .count();
            let out = Section2Output {
                embeddings: reports.len(),
                failed,
                reports,
            };
            println!("{}", json(&out));
            Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILS })
        }
        Verify::Construction {
            input,
            pattern,
            linear,
            uniform,
        } => {
            let g = read_graph(&input)?;
            let h = g.graph();
            let mut ok = true;
            if linear {
                let l = h.is_linear();
                println!("linear: {l}");
                ok &= l;
            }
            if let Some(r) = uniform {
                let u = h.uniformity() == hyperturan::Uniformity::Uniform(r);
                println!("uniform({r}): {u}");
                ok &= u;
            }
            if let Some(text) = pattern {
                let p = ForbiddenPattern::parse(&text, h.uniformity().order()).map_err(lib_err)?;
                note_star_reading(&p);
                let free = detect::is_free(h, &p);
                println!("{p}-free: {free}");
                ok &= free;
            }
            println!("{} vertices, {} edges", h.vertex_count(), h.edge_count());
            Ok(if ok { EXIT_OK } else { EXIT_FAILS })
        }
        Verify::Suite => suite(ctx),
    }
}

fn suite(ctx: &Ctx) -> CliResult {
    let mut failures = 0;
    let mut line = |name: &str, ok: bool, detail: String| {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        failures += usize::from(!ok);
    };
    let budget = ctx.config.budget.clone();
    let p2 = ForbiddenPattern::path(3, 2).map_err(lib_err)?;
    let values: Vec<usize> = (3..=8)
        .map(|n| oracle::max_edges(n, 3, &p2, HostKind::Linear, &budget).map(|r| r.value))
        .collect::<Result<_, _>>()
        .map_err(lib_err)?;
    line(
        "small path values",
        values == [1, 1, 1, 2, 2, 2],
        format!("{values:?}"),
    );
    let p3 = ForbiddenPattern::path(3, 3).map_err(lib_err)?;
    let fano = oracle::max_edges(7, 3, &p3, HostKind::Linear, &budget).map_err(lib_err)?;
    line(
        "Fano tightness",
        fano.value == 7 && design::verify_design(&fano.witness),
        format!("value {}", fano.value),
    );
    let caps = &ctx.config.design_caps;
    let counts: Vec<usize> = [7, 9, 13, 15]
        .iter()
        .filter_map(|&n| design::build_design_with(n, 3, caps).ok()?.design())
        .filter(|d| design::verify_design(&d.graph))
        .map(|d| d.graph.edge_count())
        .collect();
    line(
        "triple systems",
        counts == [7, 12, 26, 35],
        format!("{counts:?}"),
    );
    let rep = construction::thm47_construction(3, 4, 3, 1, caps, true).map_err(lib_err)?;
    line(
        "design-lattice construction",
        rep.vertices == 59 && rep.achieved == 141 && rep.linear && rep.certified(),
        format!(
            "{} vertices, {} edges, target {}",
            rep.vertices, rep.achieved, rep.target
        ),
    );
    let star = pattern::linear_star(3, 3).map_err(lib_err)?;
    let s3 = ForbiddenPattern::star(3, 3).map_err(lib_err)?;
    line(
        "star detection",
        !detect::is_free(&star, &s3),
        "S3 found in itself".into(),
    );
    Ok(if failures == 0 { EXIT_OK } else { EXIT_FAILS })
}

#[derive(Serialize)]
struct ReportRow {
    n: usize,
    r: usize,
    pattern: String,
    host: HostKind,
    value: usize,
    status: OracleStatus,
    bound: Option<String>,
    bound_side: Option<String>,
    consistent: Option<bool>,
    construction: Option<usize>,
}

/// Linear-host bound that applies at every `n`, when one is known.
fn applicable_bound(key: &ResultKey) -> Option<bounds::BoundReport> {
    if key.host != HostKind::Linear {
        return None;
    }
    let p = ForbiddenPattern::parse(&key.pattern, Some(key.r)).ok()?;
    match p.components() {
        [Component::Path(ell)] => bounds::linear_path_upper(key.r, *ell, key.n).ok(),
        _ => None,
    }
}

fn report(ctx: &Ctx, args: ReportArgs) -> CliResult {
    let dir = args.dir.unwrap_or_else(|| ctx.config.output_dir.clone());
    if !dir.join(ResultStore::FILE).exists() {
        return Err(CliError::File {
            path: dir.join(ResultStore::FILE),
            message: "no results file".into(),
        });
    }
    let store = ResultStore::open(&dir).map_err(lib_err)?;
    let mut rows = Vec::new();
    let mut violations = 0;
    for entry in store.entries() {
        let key = &entry.key;
        let bound = applicable_bound(key);
        let consistent = bound
            .as_ref()
            .filter(|_| entry.status == OracleStatus::Exact)
            .map(|b| {
                let value = Exact::from_integer(entry.value.into());
                bounds::consistency_check(Some(&value), None, Some(&b.value))
                    .map(|c| c.consistent)
                    .unwrap_or(false)
            });
        violations += usize::from(consistent == Some(false));
        let construction = ForbiddenPattern::parse(&key.pattern, Some(key.r))
            .ok()
            .and_then(|p| match p.components() {
                [Component::Path(ell)]
                    if key.host == HostKind::Linear && *ell >= 4 && key.r >= 3 =>
                {
                    construction::thm45_construction(key.r, *ell, key.n, &ctx.config.design_caps)
                        .ok()
                        .map(|c| c.achieved)
                }
                _ => None,
            });
        rows.push(ReportRow {
            n: key.n,
            r: key.r,
            pattern: key.pattern.clone(),
            host: key.host,
            value: entry.value,
            status: entry.status,
            bound: bound.as_ref().map(|b| b.value.to_string()),
            bound_side: bound
                .as_ref()
                .map(|b| format!("{:?}", b.side).to_lowercase()),
            consistent,
            construction,
        });
    }
    match ctx.format() {
        Format::Structured => println!("{}", json(&rows)),
        Format::Text => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(
                out,
                "{:>4} {:>3} {:<14} {:<8} {:>6} {:<12} {:>10} {:<6} {:>12}",
                "n", "r", "pattern", "host", "value", "status", "bound", "ok", "construction"
            );
            for row in &rows {
                let _ = writeln!(
                    out,
                    "{:>4} {:>3} {:<14} {:<8} {:>6} {:<12} {:>10} {:<6} {:>12}",
                    row.n,
                    row.r,
                    row.pattern,
                    row.host.to_string(),
                    row.value,
                    format!("{:?}", row.status).to_lowercase(),
                    row.bound.clone().unwrap_or_else(|| "-".into()),
                    match row.consistent {
                        Some(true) => "yes",
                        Some(false) => "NO",
                        None => "-",
                    },
                    row.construction
                        .map_or_else(|| "-".into(), |c| c.to_string()),
                );
            }
        }
    }
    Ok(if violations == 0 { EXIT_OK } else { EXIT_FAILS })
}
