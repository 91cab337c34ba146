//! Command drivers. Each `cmd_*` function does the whole job for one
//! subcommand and returns the process exit code: 0 success, 1 benchmark
//! bound violation or other runtime failure, 2 unreadable/invalid input,
//! 3 certificate failure, 4 round cap exceeded.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use num_rational::BigRational;
use rayon::prelude::*;

use parcover::certificate::CertificateReport;
use parcover::engine::{
    round_bound, run_cover, scale_weights_integer, work_bound, CoverResult, EngineError,
    RunOptions,
};
use parcover::model::Hypergraph;
use parcover::numeric::{big_rational_to_f64, Epsilon, Numeric, NumericMode};
use parcover::oracle::{brute_force_min_cover, OracleResult, MAX_ORACLE_VERTICES};
use parcover::setcover::IdMapping;

use crate::document::{
    build_document, to_json, DocumentInputs, OracleBlock, ResultDocument,
};
use crate::format::{parse_instance, ParsedInstance};
use crate::generate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_BOUND_VIOLATED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_CERT_FAILED: i32 = 3;
pub const EXIT_ROUND_CAP: i32 = 4;

/// Above this many vertex-edge touches the default switches from exact
/// rationals to binary64.
const DEFAULT_RATIONAL_TOUCH_LIMIT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Float,
    Rational,
    Int,
}

impl ModeArg {
    fn mode(self) -> NumericMode {
        match self {
            ModeArg::Float => NumericMode::Float64,
            ModeArg::Rational => NumericMode::Rational,
            ModeArg::Int => NumericMode::ScaledInteger,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance file (`p hg` or `p sc` format).
    pub instance: PathBuf,
    /// Deletion slack, a decimal in (0, 1).
    #[arg(long, default_value = "0.1")]
    pub eps: String,
    /// Arithmetic mode; the default picks rational for small instances and
    /// float above 10^5 vertex-edge touches.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Compare against the exhaustive optimum (instances up to 24 vertices).
    #[arg(long)]
    pub oracle: bool,
    /// Write the result document here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Evaluate rounds with parallel workers (the result is identical).
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Instance files, directories of instance files, or generator specs
    /// like `random-hg:n=200,m=800,rank=3,seed=1,count=4`.
    #[arg(required = true)]
    pub suite: Vec<String>,
    /// Comma-separated list of slack values to run per instance.
    #[arg(long, default_value = "0.1")]
    pub eps: String,
    /// Arithmetic mode for every run (default as in solve).
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    RandomHg,
    RandomSc,
    Star,
    Path,
    Clique,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: GenerateKind,
    /// Vertices (random-hg, path, clique).
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Edges (random-hg).
    #[arg(long, default_value_t = 20)]
    pub m: usize,
    /// Maximum edge size (random-hg) or sets per element (random-sc).
    #[arg(long, default_value_t = 3)]
    pub rank: usize,
    /// Sets (random-sc).
    #[arg(long, default_value_t = 10)]
    pub sets: usize,
    /// Elements (random-sc).
    #[arg(long, default_value_t = 20)]
    pub elements: usize,
    /// Leaves (star).
    #[arg(long, default_value_t = 3)]
    pub leaves: usize,
    /// Center weight (star), a decimal.
    #[arg(long, default_value = "2")]
    pub center_weight: String,
    #[arg(long, default_value_t = 1)]
    pub min_weight: u64,
    #[arg(long, default_value_t = 1)]
    pub max_weight: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the instance here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn fail(code: i32, message: impl Display) -> i32 {
    eprintln!("error: {message}");
    code
}

fn default_mode(n: usize, m: usize) -> NumericMode {
    if n.saturating_mul(m) <= DEFAULT_RATIONAL_TOUCH_LIMIT {
        NumericMode::Rational
    } else {
        NumericMode::Float64
    }
}

#[derive(Clone)]
struct LoadedInstance {
    kind: &'static str,
    /// The hypergraph the engine runs on, with exact weights.
    base: Hypergraph<BigRational>,
    /// Present for `sc` inputs: translates ids back to sets and elements.
    mapping: Option<IdMapping>,
}

fn load(parsed: ParsedInstance) -> LoadedInstance {
    match parsed {
        ParsedInstance::Graph(base) => LoadedInstance {
            kind: "hg",
            base,
            mapping: None,
        },
        ParsedInstance::SetCover(sc) => {
            let reduction = sc.reduce().expect("parsing checked coverage");
            LoadedInstance {
                kind: "sc",
                base: reduction.hypergraph,
                mapping: Some(reduction.mapping),
            }
        }
    }
}

/// Mode-independent leftovers of a run, ready for document assembly.
struct Outcome {
    document: ResultDocument,
    all_pass: bool,
    summary: String,
}

fn finish<N: Numeric + Display>(
    loaded: &LoadedInstance,
    result: &CoverResult<N>,
    certificate: &CertificateReport<N>,
    cover_weight_string: String,
    cover_weight_f64: f64,
    scaled_by: Option<String>,
    oracle: Option<&OracleResult<BigRational>>,
) -> Outcome {
    let (cover_ids, packing) = match &loaded.mapping {
        None => (
            result.cover.clone(),
            result.packing.iter().map(|p| p.to_string()).collect(),
        ),
        Some(mapping) => (
            mapping
                .cover_to_sets(&result.cover)
                .expect("cover vertices come from the reduced graph"),
            mapping
                .packing_to_elements(&result.packing)
                .expect("packing is edge-indexed")
                .iter()
                .map(|p| p.to_string())
                .collect(),
        ),
    };
    let oracle_block = oracle.map(|opt| {
        let optimum_cover = match &loaded.mapping {
            None => opt.cover.clone(),
            Some(mapping) => mapping
                .cover_to_sets(&opt.cover)
                .expect("optimum is over the reduced graph"),
        };
        let opt_weight = big_rational_to_f64(&opt.weight);
        OracleBlock {
            optimum_weight: opt.weight.to_string(),
            optimum_cover,
            ratio: (cover_weight_f64 / opt_weight).to_string(),
            subsets_examined: opt.subsets_examined,
        }
    });
    let all_pass = certificate.all_pass();
    let summary = format!(
        "{} n={} m={} rank={}: mode {} eps {} -> cover weight {} in {} rounds, work {}, certificates {}",
        loaded.kind,
        result.stats.n,
        result.stats.m,
        result.stats.rank,
        result.mode.token(),
        crate::document::eps_to_string(&result.eps),
        cover_weight_string,
        result.rounds(),
        result.work_edges(),
        if all_pass { "ok" } else { "FAILED" },
    );
    let document = build_document(DocumentInputs {
        kind: loaded.kind,
        result,
        certificate,
        cover_ids,
        cover_weight: cover_weight_string,
        packing,
        scaled_by,
        oracle: oracle_block,
    });
    Outcome {
        document,
        all_pass,
        summary,
    }
}

fn solve_outcome(
    loaded: &LoadedInstance,
    eps: Epsilon,
    mode: NumericMode,
    options: RunOptions,
    oracle: Option<&OracleResult<BigRational>>,
) -> Result<Outcome, i32> {
    match mode {
        NumericMode::Rational => {
            let result = run_cover(&loaded.base, eps, options).map_err(engine_exit)?;
            let certificate =
                CertificateReport::compute(&loaded.base, &result.cover, &result.packing, eps)
                    .expect("engine output is well-formed");
            let w_f64 = big_rational_to_f64(&result.cover_weight);
            Ok(finish(
                loaded,
                &result,
                &certificate,
                result.cover_weight.to_string(),
                w_f64,
                None,
                oracle,
            ))
        }
        NumericMode::Float64 => {
            let graph = loaded
                .base
                .to_f64_weights()
                .map_err(|e| fail(EXIT_BAD_INPUT, e))?;
            let result = run_cover(&graph, eps, options).map_err(engine_exit)?;
            let certificate =
                CertificateReport::compute(&graph, &result.cover, &result.packing, eps)
                    .expect("engine output is well-formed");
            Ok(finish(
                loaded,
                &result,
                &certificate,
                result.cover_weight.to_string(),
                result.cover_weight,
                None,
                oracle,
            ))
        }
        NumericMode::ScaledInteger => {
            let original = loaded
                .base
                .to_integer_weights()
                .map_err(|e| fail(EXIT_BAD_INPUT, e))?;
            let (scaled, factor) =
                scale_weights_integer(&original, &eps).map_err(|e| fail(EXIT_BAD_INPUT, e))?;
            let result = run_cover(&scaled, eps, options).map_err(engine_exit)?;
            let certificate =
                CertificateReport::compute(&scaled, &result.cover, &result.packing, eps)
                    .expect("engine output is well-formed");
            let original_weight = original
                .subset_weight(&result.cover)
                .expect("cover vertices are in range");
            Ok(finish(
                loaded,
                &result,
                &certificate,
                original_weight.to_string(),
                original_weight as f64,
                Some(factor.to_string()),
                oracle,
            ))
        }
    }
}

fn engine_exit(e: EngineError) -> i32 {
    match e {
        EngineError::RoundBoundExceeded { .. } => fail(EXIT_ROUND_CAP, e),
        other => fail(EXIT_BAD_INPUT, other),
    }
}

pub fn cmd_solve(args: &SolveArgs) -> i32 {
    let text = match std::fs::read_to_string(&args.instance) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_BAD_INPUT, format!("{}: {e}", args.instance.display())),
    };
    let parsed = match parse_instance(&text) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_BAD_INPUT, format!("{}: {e}", args.instance.display())),
    };
    let eps = match Epsilon::from_decimal_str(&args.eps) {
        Ok(e) => e,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    let loaded = load(parsed);
    let mode = args
        .mode
        .map(ModeArg::mode)
        .unwrap_or_else(|| default_mode(loaded.base.n(), loaded.base.m()));
    let oracle = if args.oracle {
        if loaded.base.n() > MAX_ORACLE_VERTICES {
            return fail(
                EXIT_BAD_INPUT,
                format!(
                    "--oracle handles at most {MAX_ORACLE_VERTICES} vertices, instance has {}",
                    loaded.base.n()
                ),
            );
        }
        match brute_force_min_cover(&loaded.base) {
            Ok(opt) => Some(opt),
            Err(e) => return fail(EXIT_BAD_INPUT, e),
        }
    } else {
        None
    };
    let options = RunOptions {
        parallel: args.parallel,
    };
    let outcome = match solve_outcome(&loaded, eps, mode, options, oracle.as_ref()) {
        Ok(o) => o,
        Err(code) => return code,
    };
    let json = to_json(&outcome.document);
    match &args.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                return fail(EXIT_FAILURE, format!("{}: {e}", path.display()));
            }
            println!("{}", outcome.summary);
        }
        None => print!("{json}"),
    }
    if outcome.all_pass {
        EXIT_OK
    } else {
        eprintln!("error: certificate failed");
        EXIT_CERT_FAILED
    }
}

pub fn cmd_generate(args: &GenerateArgs) -> i32 {
    let text = match args.kind {
        GenerateKind::RandomHg => generate::random_hypergraph(
            args.n,
            args.m,
            args.rank,
            args.min_weight,
            args.max_weight,
            args.seed,
        ),
        GenerateKind::RandomSc => generate::random_set_cover(
            args.sets,
            args.elements,
            args.rank,
            args.min_weight,
            args.max_weight,
            args.seed,
        ),
        GenerateKind::Star => generate::star(args.leaves, &args.center_weight),
        GenerateKind::Path => generate::path(args.n, args.min_weight, args.max_weight, args.seed),
        GenerateKind::Clique => {
            generate::clique(args.n, args.min_weight, args.max_weight, args.seed)
        }
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return fail(EXIT_FAILURE, format!("{}: {e}", path.display()));
            }
        }
        None => print!("{text}"),
    }
    EXIT_OK
}

struct BenchJob {
    label: String,
    loaded: LoadedInstance,
    eps: Epsilon,
    mode: NumericMode,
}

struct BenchRow {
    label: String,
    mode: NumericMode,
    m: usize,
    rank: usize,
    size: usize,
    eps: Epsilon,
    outcome: Result<(usize, usize, f64), String>,
}

impl BenchRow {
    /// (effective round bound, effective work bound) with the mode's factor
    /// applied.
    fn bounds(&self) -> (f64, f64) {
        let factor = self.mode.bound_factor();
        if self.m == 0 {
            return (0.0, 0.0);
        }
        (
            factor * round_bound(self.rank, self.m, &self.eps),
            factor * work_bound(self.size, self.m, &self.eps),
        )
    }

    fn violated(&self) -> bool {
        let (rb, wb) = self.bounds();
        match &self.outcome {
            Ok((rounds, work, _)) => *rounds as f64 > rb || *work as f64 > wb,
            Err(_) => true,
        }
    }
}

fn generator_spec(spec: &str) -> Result<Vec<(String, String)>, String> {
    let (kind, params) = spec.split_once(':').unwrap_or((spec, ""));
    let mut n = 10usize;
    let mut m = 20usize;
    let mut rank = 3usize;
    let mut sets = 10usize;
    let mut elements = 20usize;
    let mut leaves = 3usize;
    let mut center_weight = String::from("2");
    let mut min_weight = 1u64;
    let mut max_weight = 100u64;
    let mut seed = 0u64;
    let mut count = 1u64;
    for pair in params.split(',').filter(|p| !p.is_empty()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("bad generator parameter `{pair}`"))?;
        let parse_usize =
            |v: &str| v.parse::<usize>().map_err(|_| format!("bad value `{v}` for `{key}`"));
        let parse_u64 =
            |v: &str| v.parse::<u64>().map_err(|_| format!("bad value `{v}` for `{key}`"));
        match key {
            "n" => n = parse_usize(value)?,
            "m" => m = parse_usize(value)?,
            "rank" => rank = parse_usize(value)?,
            "sets" => sets = parse_usize(value)?,
            "elements" => elements = parse_usize(value)?,
            "leaves" => leaves = parse_usize(value)?,
            "center-weight" => center_weight = value.to_string(),
            "min-weight" => min_weight = parse_u64(value)?,
            "max-weight" => max_weight = parse_u64(value)?,
            "seed" => seed = parse_u64(value)?,
            "count" => count = parse_u64(value)?,
            other => return Err(format!("unknown generator parameter `{other}`")),
        }
    }
    let mut out = Vec::new();
    for k in 0..count.max(1) {
        let s = seed + k;
        let text = match kind {
            "random-hg" => generate::random_hypergraph(n, m, rank, min_weight, max_weight, s),
            "random-sc" => {
                generate::random_set_cover(sets, elements, rank, min_weight, max_weight, s)
            }
            "star" => generate::star(leaves, &center_weight),
            "path" => generate::path(n, min_weight, max_weight, s),
            "clique" => generate::clique(n, min_weight, max_weight, s),
            other => return Err(format!("unknown generator kind `{other}`")),
        }
        .map_err(|e| e.to_string())?;
        out.push((format!("{kind}-seed{s}"), text));
    }
    Ok(out)
}

fn collect_suite(entries: &[String]) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for entry in entries {
        let path = Path::new(entry);
        if path.is_dir() {
            let mut files: Vec<PathBuf> = std::fs::read_dir(path)
                .map_err(|e| format!("{entry}: {e}"))?
                .filter_map(|r| r.ok().map(|d| d.path()))
                .filter(|p| p.is_file())
                .collect();
            files.sort();
            for file in files {
                let text =
                    std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
                out.push((file.display().to_string(), text));
            }
        } else if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{entry}: {e}"))?;
            out.push((entry.clone(), text));
        } else {
            out.extend(generator_spec(entry)?);
        }
    }
    if out.is_empty() {
        return Err("empty suite".into());
    }
    Ok(out)
}

pub fn cmd_bench(args: &BenchArgs) -> i32 {
    let suite = match collect_suite(&args.suite) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_BAD_INPUT, e),
    };
    let mut eps_list = Vec::new();
    for part in args.eps.split(',') {
        match Epsilon::from_decimal_str(part.trim()) {
            Ok(e) => eps_list.push(e),
            Err(e) => return fail(EXIT_BAD_INPUT, format!("`{part}`: {e}")),
        }
    }
    let mut jobs = Vec::new();
    for (label, text) in suite {
        let parsed = match parse_instance(&text) {
            Ok(p) => p,
            Err(e) => return fail(EXIT_BAD_INPUT, format!("{label}: {e}")),
        };
        let loaded = load(parsed);
        let mode = args
            .mode
            .map(ModeArg::mode)
            .unwrap_or_else(|| default_mode(loaded.base.n(), loaded.base.m()));
        for &eps in &eps_list {
            // Each job owns its instance copy; rows share nothing mutable.
            jobs.push(BenchJob {
                label: label.clone(),
                loaded: loaded.clone(),
                eps,
                mode,
            });
        }
    }
    let rows: Vec<BenchRow> = jobs
        .par_iter()
        .map(|job| {
            let stats = job.loaded.base.stats();
            let started = Instant::now();
            let outcome = bench_run(job).map(|(rounds, work)| {
                (rounds, work, started.elapsed().as_secs_f64() * 1e3)
            });
            BenchRow {
                label: job.label.clone(),
                mode: job.mode,
                m: stats.m,
                rank: stats.rank,
                size: stats.size,
                eps: job.eps,
                outcome,
            }
        })
        .collect();
    println!("instance\tmode\tm\trank\tM\teps\trounds\tround_bound\twork\twork_bound\twall_ms");
    let mut violations = 0usize;
    for row in &rows {
        let (rb, wb) = row.bounds();
        match &row.outcome {
            Ok((rounds, work, wall)) => println!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.2}\t{}\t{:.2}\t{:.2}",
                row.label,
                row.mode.token(),
                row.m,
                row.rank,
                row.size,
                crate::document::eps_to_string(&row.eps),
                rounds,
                rb,
                work,
                wb,
                wall,
            ),
            Err(e) => println!(
                "{}\t{}\t{}\t{}\t{}\t{}\tFAILED: {e}\t{:.2}\t-\t{:.2}\t-",
                row.label,
                row.mode.token(),
                row.m,
                row.rank,
                row.size,
                crate::document::eps_to_string(&row.eps),
                rb,
                wb,
            ),
        }
        if row.violated() {
            violations += 1;
            eprintln!(
                "error: bound violated on {} at eps {}",
                row.label,
                crate::document::eps_to_string(&row.eps)
            );
        }
    }
    if violations > 0 {
        eprintln!("error: {violations} benchmark rows exceeded their bounds");
        EXIT_BOUND_VIOLATED
    } else {
        EXIT_OK
    }
}

fn bench_run(job: &BenchJob) -> Result<(usize, usize), String> {
    let stringify = |e: EngineError| e.to_string();
    match job.mode {
        NumericMode::Rational => {
            let result =
                run_cover(&job.loaded.base, job.eps, RunOptions::default()).map_err(stringify)?;
            Ok((result.rounds(), result.work_edges()))
        }
        NumericMode::Float64 => {
            let graph = job.loaded.base.to_f64_weights().map_err(|e| e.to_string())?;
            let result = run_cover(&graph, job.eps, RunOptions::default()).map_err(stringify)?;
            Ok((result.rounds(), result.work_edges()))
        }
        NumericMode::ScaledInteger => {
            let original = job
                .loaded
                .base
                .to_integer_weights()
                .map_err(|e| e.to_string())?;
            let (scaled, _) = scale_weights_integer(&original, &job.eps).map_err(stringify)?;
            let result = run_cover(&scaled, job.eps, RunOptions::default()).map_err(stringify)?;
            Ok((result.rounds(), result.work_edges()))
        }
    }
}
