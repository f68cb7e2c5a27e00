//! `fibgirth` command-line front end.

mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use fibgirth::construction::{build_pair_with_max, exponent_table, DepthMode, Variant, DEFAULT_MAX_LEVEL};
use fibgirth::girth::alpha;
use fibgirth::laws::catalog::BUNDLED;
use fibgirth::laws::{is_law, load_group, nilpotency_class, nilpotent_law_word, FiniteGroup, LawCertificate, NilpotencyClass};
use fibgirth::magnus::{lcs_depth, DEFAULT_CAP, MAX_CAP, UNGATED_CAP};
use fibgirth::report::Report;
use fibgirth::suite;
use fibgirth::unitary::almost::{
    commutator_contraction, decay_report, empirical_constants, find_seed_pair, monotonicity_violations,
    product_form_counterexample, recursion_violations, DecayRow, FreenessCertificate, DEFAULT_REFINE,
};
use fibgirth::Word;

use cache::{Cache, CacheEntry, Kind, CACHE_ENV};

#[derive(Parser, Debug)]
#[command(name = "fibgirth", version, about = "Fibonacci commutator words in the free group of rank two")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Standard,
    Primed,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::Primed => Variant::Primed,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DepthModeArg {
    Bound,
    Magnus,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the words a_n and b_n.
    Build {
        #[arg(short = 'n', long = "level")]
        n: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
        variant: VariantArg,
        #[arg(long)]
        json: bool,
    },
    /// Lower central series depth of a word.
    Depth {
        #[arg(short = 'w', long = "word", allow_hyphen_values = true)]
        word: String,
        #[arg(long)]
        cap: usize,
        #[arg(long)]
        json: bool,
        /// Permit caps above 20 (memory grows like 2^cap).
        #[arg(long)]
        allow_large_cap: bool,
    },
    /// Girth of the n-th term of the lower central series.
    Alpha {
        #[arg(short = 'n', long = "index")]
        n: usize,
        #[arg(long)]
        radius: usize,
        #[arg(short = 'j', long = "threads", default_value_t = 0)]
        threads: usize,
        #[arg(long, env = CACHE_ENV)]
        cache: Option<PathBuf>,
        /// Recompute even on a cache hit and fail if the payload differs.
        #[arg(long, requires = "cache")]
        audit: bool,
    },
    /// Run every identity suite.
    Verify {
        #[arg(long, default_value_t = suite::DEFAULT_LEVEL)]
        level: usize,
        #[arg(long)]
        json: bool,
        #[arg(short = 'j', long = "threads")]
        threads: Option<usize>,
    },
    /// Law for nilpotent groups of bounded order, checked on finite groups.
    Law {
        #[arg(long)]
        order: u64,
        #[arg(long, conflicts_with = "catalog")]
        group: Option<PathBuf>,
        /// Check every bundled group.
        #[arg(long)]
        catalog: bool,
        #[arg(long)]
        json: bool,
    },
    /// Sampled decay of the construction applied to a seed pair in SU(k).
    Almost {
        #[arg(short = 'k', default_value_t = 2)]
        k: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4096)]
        length_cap: usize,
        #[arg(long, default_value_t = DEFAULT_REFINE)]
        refine: usize,
        #[arg(long)]
        json: bool,
        #[arg(short = 'j', long = "threads")]
        threads: Option<usize>,
        #[arg(long, env = CACHE_ENV)]
        cache: Option<PathBuf>,
    },
    /// Length, depth and exponent estimate per level.
    Table {
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long, value_enum, default_value_t = DepthModeArg::Bound)]
        depth_mode: DepthModeArg,
        #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
        variant: VariantArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

type Outcome = Result<String, CliError>;

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

fn install_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(j) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().map_err(CliError::usage)?;
    }
    Ok(())
}

fn build(n: usize, variant: Variant, json: bool) -> Outcome {
    let pair = build_pair_with_max(n, variant, DEFAULT_MAX_LEVEL).map_err(CliError::usage)?;
    if json {
        return Ok(to_json(&pair));
    }
    let prime = if variant == Variant::Primed { "′" } else { "" };
    Ok(format!(
        "a{prime}_{n} = {}\nb{prime}_{n} = {}\nlengths {}/{}, depth ≥ {}",
        pair.a,
        pair.b,
        pair.a.len(),
        pair.b.len(),
        pair.depth_bound
    ))
}

fn depth(text: &str, cap: usize, json: bool, allow_large: bool) -> Outcome {
    let word: Word = text.parse().map_err(CliError::usage)?;
    if cap == 0 || cap > MAX_CAP {
        return Err(CliError::Usage(format!("--cap must be in 1..={MAX_CAP}")));
    }
    if cap > UNGATED_CAP && !allow_large {
        return Err(CliError::Usage(format!("--cap above {UNGATED_CAP} needs --allow-large-cap")));
    }
    let d = lcs_depth(&word, cap);
    if json {
        return Ok(to_json(&json!({ "word": word, "length": word.len(), "cap": cap, "depth": d })));
    }
    Ok(d.to_string())
}

fn alpha_cmd(n: usize, radius: usize, threads: usize, cache: Option<PathBuf>, audit: bool) -> Outcome {
    let cache = cache.map(|dir| Cache::open(&dir)).transpose().map_err(CliError::usage)?;
    let key = json!({ "n": n, "radius": radius });
    let cached = match &cache {
        Some(c) => c.lookup(Kind::Alpha, &key).map_err(CliError::usage)?,
        None => None,
    };
    if let Some(entry) = &cached {
        if !audit {
            eprintln!("cached result from {}", entry.created);
            return Ok(entry.payload().to_string());
        }
    }
    let record = alpha(n, radius, threads).map_err(CliError::usage)?;
    let payload = to_json(&record.deterministic());
    eprintln!("{} candidates in {:.3} s", record.candidates, record.seconds);
    if let Some(entry) = cached {
        if entry.payload() != payload {
            return Err(CliError::Failed(format!("payload differs from cache\ncached:   {}\ncomputed: {payload}", entry.payload())));
        }
        eprintln!("matches cache entry from {}", entry.created);
    } else if let Some(c) = &cache {
        let entry = CacheEntry::new(Kind::Alpha, key, payload.clone(), Some(record.seconds)).map_err(CliError::usage)?;
        c.append(&entry).map_err(CliError::usage)?;
    }
    Ok(payload)
}

fn report_outcome(reports: &[Report], json: bool, header: serde_json::Value) -> Outcome {
    let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    let failed: usize = reports.iter().map(|r| r.failures().count()).sum();
    let out = if json {
        let mut obj = header;
        obj["passed"] = json!(failed == 0);
        obj["reports"] = json!(reports);
        to_json(&obj)
    } else {
        let mut s = String::new();
        for r in reports {
            write!(s, "{r}").expect("string write");
        }
        write!(s, "{checks} checks, {failed} failed").expect("string write");
        s
    };
    if failed == 0 {
        Ok(out)
    } else {
        Err(CliError::Failed(out))
    }
}

fn verify(level: usize, json: bool) -> Outcome {
    if level > suite::max_level() {
        return Err(CliError::Usage(format!("--level must be at most {}", suite::max_level())));
    }
    report_outcome(&suite::all(level), json, json!({ "level": level }))
}

#[derive(Serialize)]
struct LawResult {
    group: String,
    order: usize,
    class: NilpotencyClass,
    /// Nilpotent of order at most the bound, so the law must hold.
    covered: bool,
    certificate: LawCertificate,
}

fn law(order: u64, group: Option<PathBuf>, catalog: bool, json: bool) -> Outcome {
    if order < 2 {
        return Err(CliError::Usage("--order must be at least 2".into()));
    }
    let law = nilpotent_law_word(order);
    let groups: Vec<FiniteGroup> = if let Some(path) = group {
        vec![load_group(&path).map_err(CliError::usage)?]
    } else if catalog {
        BUNDLED
            .iter()
            .map(|(_, text)| FiniteGroup::from_json(text))
            .collect::<Result<_, _>>()
            .map_err(CliError::usage)?
    } else {
        Vec::new()
    };
    let results: Vec<LawResult> = groups
        .iter()
        .map(|g| {
            let class = nilpotency_class(g);
            LawResult {
                group: g.name().to_string(),
                order: g.order(),
                class,
                covered: matches!(class, NilpotencyClass::Class(_)) && g.order() as u64 <= order,
                certificate: is_law(g, &law.word),
            }
        })
        .collect();
    let broken: Vec<&str> = results.iter().filter(|r| r.covered && !r.certificate.holds).map(|r| r.group.as_str()).collect();
    let out = if json {
        to_json(&json!({ "law": law, "results": results }))
    } else {
        let mut s = format!(
            "order ≤ {order}: a_{} (length {}, depth ≥ {})\n{}",
            law.level,
            law.word.len(),
            law.required_depth,
            law.word
        );
        for r in &results {
            let class = match r.class {
                NilpotencyClass::Class(c) => format!("class {c}"),
                NilpotencyClass::NotNilpotent { .. } => "not nilpotent".to_string(),
            };
            let verdict = match r.certificate.counterexample {
                None => "law holds".to_string(),
                Some((g, h)) => format!("fails at ({g}, {h})"),
            };
            let scope = if r.covered { "" } else { " [not covered]" };
            write!(s, "\n{:<12} order {:>3}, {class}: {verdict}{scope}", r.group, r.order).expect("string write");
        }
        s
    };
    if broken.is_empty() {
        Ok(out)
    } else {
        Err(CliError::Failed(format!("{out}\nlaw fails on covered groups: {}", broken.join(", "))))
    }
}

#[derive(Serialize)]
struct SeedSummary<'a> {
    leaves: usize,
    len_w: usize,
    len_v: usize,
    estimate_w: f64,
    estimate_v: f64,
    freeness: &'a FreenessCertificate,
}

#[derive(Serialize)]
struct AlmostOutput<'a> {
    k: usize,
    n_max: usize,
    budget: usize,
    refine: usize,
    seed: u64,
    seed_pair: SeedSummary<'a>,
    rows: &'a [DecayRow],
    constant_c: Option<f64>,
    constant_d: Option<f64>,
    checks: &'a Report,
}

#[allow(clippy::too_many_arguments)]
fn almost(
    k: usize,
    n_max: usize,
    budget: usize,
    seed: u64,
    length_cap: usize,
    refine: usize,
    json: bool,
    cache: Option<PathBuf>,
) -> Outcome {
    let cache = cache.map(|dir| Cache::open(&dir)).transpose().map_err(CliError::usage)?;
    let start = Instant::now();
    let pair = find_seed_pair(k, length_cap, budget, refine, seed).map_err(CliError::usage)?;
    eprintln!("seed pair: {} leaves, lengths {}/{}, estimate {:.4}", pair.leaves, pair.w.len(), pair.v.len(), pair.estimate());
    let rows = decay_report(&pair, k, n_max, budget, refine, seed).map_err(CliError::usage)?;
    let (c, d) = empirical_constants(&rows);

    let mut checks = Report::new("decay");
    let stats = commutator_contraction(k, budget, seed);
    checks.check("commutator contraction", stats.violations == 0, format!("{} violations", stats.violations));
    let (lhs, rhs) = product_form_counterexample(k);
    checks.check("product form refuted at u₂ = 1", lhs > rhs, format!("{lhs} vs {rhs}"));
    let rec = recursion_violations(&rows);
    checks.check("Fibonacci recursion of −ln 2L̂", rec.is_empty(), format!("violated at {rec:?}"));
    let mono = monotonicity_violations(&rows);
    checks.check("L̂ strictly decreasing from n = 2", mono.is_empty(), format!("violated at {mono:?}"));
    let seconds = start.elapsed().as_secs_f64();
    eprintln!("{seconds:.2} s");

    let output = AlmostOutput {
        k,
        n_max,
        budget,
        refine,
        seed,
        seed_pair: SeedSummary {
            leaves: pair.leaves,
            len_w: pair.w.len(),
            len_v: pair.v.len(),
            estimate_w: pair.estimate_w,
            estimate_v: pair.estimate_v,
            freeness: &pair.freeness,
        },
        rows: &rows,
        constant_c: c,
        constant_d: d,
        checks: &checks,
    };
    let payload = to_json(&output);
    if let Some(c) = &cache {
        let key = json!({ "k": k, "n_max": n_max, "budget": budget, "seed": seed, "length_cap": length_cap, "refine": refine });
        match c.lookup(Kind::Decay, &key).map_err(CliError::usage)? {
            Some(entry) if entry.payload() != payload => {
                return Err(CliError::Failed("decay payload differs from the cached one".into()));
            }
            Some(_) => {}
            None => c
                .append(&CacheEntry::new(Kind::Decay, key, payload.clone(), Some(seconds)).map_err(CliError::usage)?)
                .map_err(CliError::usage)?,
        }
    }
    let out = if json {
        payload
    } else {
        let fmt_opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:e}"));
        let mut s = format!(
            "# k={k} budget={budget} refine={refine} seed={seed}\n# seed pair: {} leaves, lengths {}/{}, estimates {:.6}/{:.6}\n# C = {} D = {}\n",
            pair.leaves,
            pair.w.len(),
            pair.v.len(),
            pair.estimate_w,
            pair.estimate_v,
            fmt_opt(c),
            fmt_opt(d)
        );
        s.push_str("n,len,L_hat,neg_log,samples,seed");
        for r in &rows {
            write!(s, "\n{},{},{:e},{},{},{}", r.n, r.len, r.l_hat, fmt_opt(r.neg_log), r.samples, r.seed).expect("string write");
        }
        for line in checks.to_string().lines().skip(1) {
            write!(s, "\n# {line}").expect("string write");
        }
        s
    };
    if checks.passed() {
        Ok(out)
    } else {
        Err(CliError::Failed(out))
    }
}

fn table(n_max: usize, format: Format, mode: DepthModeArg, variant: Variant, cap: usize) -> Outcome {
    if cap == 0 || cap > UNGATED_CAP {
        return Err(CliError::Usage(format!("--cap must be in 1..={UNGATED_CAP}")));
    }
    let mode = match mode {
        DepthModeArg::Bound => DepthMode::Bound,
        DepthModeArg::Magnus => DepthMode::Magnus,
    };
    let rows = exponent_table(n_max, variant, mode, cap).map_err(CliError::usage)?;
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("n,variant,len_a,len_b,depth_bound,depth_exact,cap_exhausted,estimate");
            for r in &rows {
                write!(
                    s,
                    "\n{},{},{},{},{},{},{},{}",
                    r.n,
                    r.variant.name(),
                    r.len_a,
                    r.len_b,
                    r.depth_bound,
                    r.depth_exact.map_or(String::new(), |d| d.to_string()),
                    r.cap_exhausted,
                    r.estimate.map_or(String::new(), |e| e.to_string())
                )
                .expect("string write");
            }
            s
        }
    })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Build { n, variant, json } => build(n, variant.into(), json),
        Command::Depth { word, cap, json, allow_large_cap } => depth(&word, cap, json, allow_large_cap),
        Command::Alpha { n, radius, threads, cache, audit } => alpha_cmd(n, radius, threads, cache, audit),
        Command::Verify { level, json, threads } => {
            install_threads(threads)?;
            verify(level, json)
        }
        Command::Law { order, group, catalog, json } => law(order, group, catalog, json),
        Command::Almost { k, n_max, budget, seed, length_cap, refine, json, threads, cache } => {
            install_threads(threads)?;
            almost(k, n_max, budget, seed, length_cap, refine, json, cache)
        }
        Command::Table { n_max, format, depth_mode, variant, cap } => {
            table(n_max, format, depth_mode, variant.into(), cap)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            match &e {
                CliError::Failed(out) => println!("{out}"),
                CliError::Usage(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(e.code())
        }
    }
}
