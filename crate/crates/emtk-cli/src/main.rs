//! `emtk`: solve, generate, verify, and benchmark exact matching instances.
//!
//! The exit code is the machine contract; reports are human-oriented.
//! 0 = yes/holds, 1 = no/violated, 2 = inconclusive or solver failure,
//! 3 = parse or parameter error.

mod instance;

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use emtk_core::exec::{self, ExecMode};
use emtk_core::generators::{
    gen_bip_interval, gen_bip_unit_interval, gen_chain, gen_chain_counterexample,
    gen_complete_r_partite, gen_gnp, gen_interval, gen_neighborhood_diversity, gen_unit_interval,
    random_coloring, Certificate, ColoringSpec, TypeClassSpec,
};
use emtk_core::graph::{Color, ColoredGraph, PerfectMatching};
use emtk_core::karzanov::{
    check_chord_property, karzanov_counterexample, solve_em_via_karzanov,
    verify_karzanov_property, verify_weak_karzanov, ChordPropertyOptions, ChordRequirement,
    ChordVerdict, PropertyVerdict,
};
use emtk_core::local_search::{local_search_em, LocalSearchOptions, LocalSearchOutcome};
use emtk_core::oracle;
use emtk_core::structure::{verify_pshort, PshortOptions, PshortVerification};
use emtk_core::Rational;
use instance::InstanceFile;

const EXIT_YES: i32 = 0;
const EXIT_NO: i32 = 1;
const EXIT_INCONCLUSIVE: i32 = 2;
const EXIT_USAGE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "emtk",
    version,
    about = "Exact matching toolkit: perfect matchings with exactly k red edges"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide one instance and print the verdict with any witness matching.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Target red count; falls back to the instance's `k` line.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Neighborhood radius for the local strategy.
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Parallel)]
        mode: ModeArg,
    },
    /// Write an instance file for a generated graph class.
    Generate {
        #[arg(long, value_enum)]
        class: ClassArg,
        /// Vertex count for n-indexed classes.
        #[arg(long)]
        n: Option<usize>,
        /// Left side size for bipartite interval classes.
        #[arg(long)]
        nx: Option<usize>,
        /// Right side size for bipartite interval classes.
        #[arg(long)]
        ny: Option<usize>,
        /// Part sizes for complete_r_partite, comma separated.
        #[arg(long, value_delimiter = ',')]
        parts: Option<Vec<usize>>,
        /// Nondecreasing left degree profile for chain, comma separated.
        #[arg(long, value_delimiter = ',')]
        profile: Option<Vec<usize>>,
        /// Pairs per side for chain_pshort_counterexample.
        #[arg(long)]
        pairs: Option<usize>,
        /// Edge probability for gnp, as a rational like 1/2.
        #[arg(long)]
        p: Option<String>,
        /// Type classes for neighborhood_diversity, like 3c,2i (size then c or i).
        #[arg(long, value_delimiter = ',')]
        nd_classes: Option<Vec<String>>,
        /// Joined class pairs for neighborhood_diversity, like 0-1,1-2.
        #[arg(long, value_delimiter = ',')]
        type_edges: Option<Vec<String>>,
        /// Red coloring: none, bernoulli=<p>, or exact=<count>.
        #[arg(long, default_value = "none")]
        coloring: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Embed a target red count in the file.
        #[arg(long)]
        k: Option<usize>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a structural property of an instance.
    Verify {
        #[arg(long, value_enum)]
        property: PropertyArg,
        #[arg(long)]
        instance: PathBuf,
        /// Selection size t for pshort.
        #[arg(long, default_value_t = 3)]
        t: usize,
        /// Enumeration budget: perfect matchings for pshort and the sandwich
        /// checks, even cycles for chord.
        #[arg(long)]
        budget: Option<usize>,
        /// Largest n the exhaustive pshort check accepts.
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        /// Longest even cycle the chord check examines.
        #[arg(long, default_value_t = 12)]
        max_cycle_len: usize,
        /// Spot-check this many random paths instead of exhausting (pshort).
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::Parallel)]
        mode: ModeArg,
    },
    /// Print the sorted set of achievable red counts.
    Landscape {
        #[arg(long)]
        instance: PathBuf,
        /// Cap on enumerated perfect matchings.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Sweep local search over classes, sizes, and radii; one CSV row per trial.
    Bench {
        /// Classes to sweep, comma separated; must be n-indexed families.
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        classes: Vec<ClassArg>,
        /// Vertex counts to sweep, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n_values: Vec<usize>,
        /// Neighborhood radii to sweep, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<usize>,
        /// Seeded trials per (class, n, radius) cell.
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge probability for gnp instances.
        #[arg(long, default_value = "1/2")]
        p: String,
        /// Red coloring probability applied to every instance.
        #[arg(long, default_value = "1/2")]
        color_p: String,
        /// Compute the oracle verdict whenever n is at most this.
        #[arg(long, default_value_t = 12)]
        oracle_max_n: usize,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Trial-level concurrency; solvers inside a trial run sequentially.
        #[arg(long, value_enum, default_value_t = ModeArg::Parallel)]
        mode: ModeArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Auto,
    Local,
    Karzanov,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    #[value(name = "sequential", alias = "seq")]
    Sequential,
    #[value(name = "parallel", alias = "par")]
    Parallel,
}

impl From<ModeArg> for ExecMode {
    fn from(m: ModeArg) -> ExecMode {
        match m {
            ModeArg::Sequential => ExecMode::Sequential,
            ModeArg::Parallel => ExecMode::Parallel,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    #[value(name = "chain")]
    Chain,
    #[value(name = "chain_pshort_counterexample")]
    ChainPshortCounterexample,
    #[value(name = "unit_interval")]
    UnitInterval,
    #[value(name = "bip_unit_interval")]
    BipUnitInterval,
    #[value(name = "interval")]
    Interval,
    #[value(name = "bip_interval")]
    BipInterval,
    #[value(name = "complete_r_partite")]
    CompleteRPartite,
    #[value(name = "neighborhood_diversity")]
    NeighborhoodDiversity,
    #[value(name = "gnp")]
    Gnp,
    #[value(name = "karzanov_counterexample")]
    KarzanovCounterexample,
}

impl ClassArg {
    fn tag(self) -> &'static str {
        match self {
            ClassArg::Chain => "chain",
            ClassArg::ChainPshortCounterexample => "chain_pshort_counterexample",
            ClassArg::UnitInterval => "unit_interval",
            ClassArg::BipUnitInterval => "bip_unit_interval",
            ClassArg::Interval => "interval",
            ClassArg::BipInterval => "bip_interval",
            ClassArg::CompleteRPartite => "complete_r_partite",
            ClassArg::NeighborhoodDiversity => "neighborhood_diversity",
            ClassArg::Gnp => "gnp",
            ClassArg::KarzanovCounterexample => "karzanov_counterexample",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    Pshort,
    Chord,
    Karzanov,
    #[value(name = "weak-karzanov")]
    WeakKarzanov,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_YES };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.cmd {
        Cmd::Solve { instance, k, strategy, radius, mode } => {
            cmd_solve(&instance, k, strategy, radius, mode.into())
        }
        Cmd::Generate {
            class,
            n,
            nx,
            ny,
            parts,
            profile,
            pairs,
            p,
            nd_classes,
            type_edges,
            coloring,
            seed,
            k,
            out,
        } => cmd_generate(GenerateArgs {
            class,
            n,
            nx,
            ny,
            parts,
            profile,
            pairs,
            p,
            nd_classes,
            type_edges,
            coloring,
            seed,
            k,
            out,
        }),
        Cmd::Verify { property, instance, t, budget, max_n, max_cycle_len, sample, seed, mode } => {
            cmd_verify(&instance, property, t, budget, max_n, max_cycle_len, sample, seed, mode.into())
        }
        Cmd::Landscape { instance, limit } => cmd_landscape(&instance, limit),
        Cmd::Bench {
            classes,
            n_values,
            radii,
            trials,
            seed,
            p,
            color_p,
            oracle_max_n,
            out,
            mode,
        } => cmd_bench(BenchArgs {
            classes,
            n_values,
            radii,
            trials,
            seed,
            p,
            color_p,
            oracle_max_n,
            out,
            mode: mode.into(),
        }),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

/// Which solver answers. Auto sends classes with the chord property through
/// the rank-reduction pipeline, classes whose neighborhoods stay informative
/// through local search, and everything else to exhaustive enumeration.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Picked {
    Local,
    Karzanov,
    Oracle,
}

impl Picked {
    fn name(self) -> &'static str {
        match self {
            Picked::Local => "local",
            Picked::Karzanov => "karzanov",
            Picked::Oracle => "oracle",
        }
    }
}

fn resolve_strategy(arg: StrategyArg, tag: &str) -> Picked {
    match arg {
        StrategyArg::Local => Picked::Local,
        StrategyArg::Karzanov => Picked::Karzanov,
        StrategyArg::Oracle => Picked::Oracle,
        StrategyArg::Auto => match tag {
            "chain" | "unit_interval" | "bip_unit_interval" | "complete_r_partite"
            | "chain_pshort_counterexample" => Picked::Karzanov,
            "neighborhood_diversity" | "gnp" | "bounded_bip_independence" => Picked::Local,
            _ => Picked::Oracle,
        },
    }
}

fn fmt_matching(g: &ColoredGraph, pm: &PerfectMatching) -> String {
    let edges: Vec<String> = pm
        .edges()
        .iter()
        .map(|&e| {
            let (u, v) = e.endpoints();
            let c = if g.color(e).expect("matching edge") == Color::Red { 'r' } else { 'b' };
            format!("{u}-{v}:{c}")
        })
        .collect();
    format!("{} (red {})", edges.join(" "), pm.red_count())
}

fn cmd_solve(
    path: &std::path::Path,
    k_flag: Option<usize>,
    strategy: StrategyArg,
    radius: usize,
    mode: ExecMode,
) -> Result<i32, String> {
    let inst = instance::read(path)?;
    let Some(k) = k_flag.or(inst.k) else {
        return Err("no target: pass --k or add a `k` line to the instance".into());
    };
    let g = &inst.graph;
    let picked = resolve_strategy(strategy, &inst.class_tag);
    let started = Instant::now();
    let (code, detail) = match picked {
        Picked::Oracle => match oracle::brute_force_em(g, k) {
            Some(pm) => (EXIT_YES, vec![format!("matching: {}", fmt_matching(g, &pm))]),
            None => (EXIT_NO, Vec::new()),
        },
        Picked::Karzanov => match solve_em_via_karzanov(g, k, true, mode) {
            Ok(res) if res.feasible => {
                let pm = res.certificate.expect("feasible solves carry a certificate");
                (
                    EXIT_YES,
                    vec![
                        format!("matching: {}", fmt_matching(g, &pm)),
                        format!("reduction steps: {}", res.reduction_steps),
                    ],
                )
            }
            Ok(_) => (EXIT_NO, Vec::new()),
            Err(e) => (EXIT_INCONCLUSIVE, vec![format!("reason: {e}")]),
        },
        Picked::Local => match local_search_em(g, k, &LocalSearchOptions { radius, mode }) {
            Ok(run) => {
                let (code, mut detail) = match run.outcome {
                    LocalSearchOutcome::Found(pm) => {
                        (EXIT_YES, vec![format!("matching: {}", fmt_matching(g, &pm))])
                    }
                    LocalSearchOutcome::NoPerfectMatching => {
                        (EXIT_NO, vec!["reason: the graph has no perfect matching".into()])
                    }
                    LocalSearchOutcome::BelowMinimum { minimum } => {
                        (EXIT_NO, vec![format!("reason: minimum red count is {minimum}")])
                    }
                    LocalSearchOutcome::AboveMaximum { maximum } => {
                        (EXIT_NO, vec![format!("reason: maximum red count is {maximum}")])
                    }
                    LocalSearchOutcome::Stalled { reached } => (
                        EXIT_INCONCLUSIVE,
                        vec![format!("reason: stalled at red count {reached} with radius {radius}")],
                    ),
                };
                detail.push(format!("profiles computed: {}", run.profiles_computed));
                let steps: Vec<String> = run.trajectory.iter().map(|r| r.to_string()).collect();
                detail.push(format!("trajectory: {}", steps.join(" ")));
                (code, detail)
            }
            Err(e) => (EXIT_INCONCLUSIVE, vec![format!("reason: {e}")]),
        },
    };
    let verdict = match code {
        EXIT_YES => "yes",
        EXIT_NO => "no",
        _ => "inconclusive",
    };
    println!("verdict: {verdict}");
    for line in detail {
        println!("{line}");
    }
    println!("strategy: {}", picked.name());
    println!("time: {:.6} s", started.elapsed().as_secs_f64());
    Ok(code)
}

struct GenerateArgs {
    class: ClassArg,
    n: Option<usize>,
    nx: Option<usize>,
    ny: Option<usize>,
    parts: Option<Vec<usize>>,
    profile: Option<Vec<usize>>,
    pairs: Option<usize>,
    p: Option<String>,
    nd_classes: Option<Vec<String>>,
    type_edges: Option<Vec<String>>,
    coloring: String,
    seed: u64,
    k: Option<usize>,
    out: Option<PathBuf>,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s).map_err(|e| format!("invalid rational `{s}`: {e}"))
}

fn parse_coloring(s: &str) -> Result<Option<ColoringSpec>, String> {
    if s == "none" {
        return Ok(None);
    }
    if let Some(p) = s.strip_prefix("bernoulli=") {
        return Ok(Some(ColoringSpec::Bernoulli(parse_rational(p)?)));
    }
    if let Some(count) = s.strip_prefix("exact=") {
        let count = count.parse().map_err(|_| format!("invalid count `{count}`"))?;
        return Ok(Some(ColoringSpec::ExactCount(count)));
    }
    Err(format!("unknown coloring `{s}`; use none, bernoulli=<p>, or exact=<count>"))
}

fn parse_nd_class(s: &str) -> Result<TypeClassSpec, String> {
    if s.len() < 2 {
        return Err(format!("type class `{s}` must be a size followed by c or i"));
    }
    let (size, kind) = s.split_at(s.len() - 1);
    let size = size.parse().map_err(|_| format!("invalid class size `{size}`"))?;
    let clique = match kind {
        "c" => true,
        "i" => false,
        other => return Err(format!("class kind must be c or i, got `{other}`")),
    };
    Ok(TypeClassSpec { size, clique })
}

fn parse_type_edge(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once('-')
        .ok_or_else(|| format!("type edge `{s}` must look like 0-1"))?;
    let a = a.parse().map_err(|_| format!("invalid class index `{a}`"))?;
    let b = b.parse().map_err(|_| format!("invalid class index `{b}`"))?;
    Ok((a, b))
}

fn require<T>(value: Option<T>, flag: &str, class: ClassArg) -> Result<T, String> {
    value.ok_or_else(|| format!("--{flag} is required for class {}", class.tag()))
}

/// Returns the generated graph, its certificate, and whether the class comes
/// pre-colored (in which case `--coloring` must stay `none`).
fn build_instance(args: &GenerateArgs) -> Result<(ColoredGraph, Option<Certificate>, bool), String> {
    let class = args.class;
    let core = |r: Result<(ColoredGraph, Certificate), emtk_core::Error>| {
        r.map(|(g, c)| (g, Some(c), false)).map_err(|e| e.to_string())
    };
    match class {
        ClassArg::Chain => {
            let profile = require(args.profile.clone(), "profile", class)?;
            core(gen_chain(&profile))
        }
        ClassArg::ChainPshortCounterexample => {
            let pairs = require(args.pairs, "pairs", class)?;
            let (g, _, _) = gen_chain_counterexample(pairs).map_err(|e| e.to_string())?;
            let cert = Certificate::Chain { profile: (1..=pairs).collect() };
            Ok((g, Some(cert), true))
        }
        ClassArg::UnitInterval => {
            let n = require(args.n, "n", class)?;
            core(gen_unit_interval(n, args.seed))
        }
        ClassArg::Interval => {
            let n = require(args.n, "n", class)?;
            core(gen_interval(n, args.seed))
        }
        ClassArg::BipUnitInterval => {
            let nx = require(args.nx, "nx", class)?;
            let ny = require(args.ny, "ny", class)?;
            core(gen_bip_unit_interval(nx, ny, args.seed))
        }
        ClassArg::BipInterval => {
            let nx = require(args.nx, "nx", class)?;
            let ny = require(args.ny, "ny", class)?;
            core(gen_bip_interval(nx, ny, args.seed))
        }
        ClassArg::CompleteRPartite => {
            let parts = require(args.parts.clone(), "parts", class)?;
            core(gen_complete_r_partite(&parts))
        }
        ClassArg::NeighborhoodDiversity => {
            let specs = require(args.nd_classes.clone(), "nd-classes", class)?
                .iter()
                .map(|s| parse_nd_class(s))
                .collect::<Result<Vec<_>, _>>()?;
            let joins = args
                .type_edges
                .clone()
                .unwrap_or_default()
                .iter()
                .map(|s| parse_type_edge(s))
                .collect::<Result<Vec<_>, _>>()?;
            core(gen_neighborhood_diversity(&specs, &joins))
        }
        ClassArg::Gnp => {
            let n = require(args.n, "n", class)?;
            let p = parse_rational(&require(args.p.clone(), "p", class)?)?;
            core(gen_gnp(n, p, args.seed))
        }
        ClassArg::KarzanovCounterexample => {
            let (g, cert) = karzanov_counterexample();
            Ok((g, Some(cert), true))
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<i32, String> {
    let (g, certificate, precolored) = build_instance(&args)?;
    let g = match parse_coloring(&args.coloring)? {
        None => g,
        Some(spec) => {
            if precolored {
                return Err(format!(
                    "class {} is pre-colored; use --coloring none",
                    args.class.tag()
                ));
            }
            random_coloring(&g, spec, args.seed).map_err(|e| e.to_string())?
        }
    };
    let inst = InstanceFile {
        class_tag: args.class.tag().into(),
        k: args.k,
        graph: g,
        certificate,
    };
    let text = instance::render(&inst);
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(EXIT_YES)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    path: &std::path::Path,
    property: PropertyArg,
    t: usize,
    budget: Option<usize>,
    max_n: usize,
    max_cycle_len: usize,
    sample: Option<usize>,
    seed: u64,
    mode: ExecMode,
) -> Result<i32, String> {
    let inst = instance::read(path)?;
    let g = &inst.graph;
    let code = match property {
        PropertyArg::Pshort => {
            let opts = PshortOptions {
                t,
                max_n,
                pm_limit: budget.unwrap_or(oracle::DEFAULT_PM_LIMIT),
                sample: sample.map(|trials| (trials, seed)),
                mode,
            };
            match verify_pshort(g, &opts) {
                Ok(PshortVerification::Holds) => {
                    println!("pshort({t}): holds");
                    EXIT_YES
                }
                Ok(PshortVerification::Violated(query)) => {
                    println!("pshort({t}): violated");
                    println!("query: {query:?}");
                    EXIT_NO
                }
                Ok(PshortVerification::Inconclusive(why)) => {
                    println!("pshort({t}): inconclusive ({why})");
                    EXIT_INCONCLUSIVE
                }
                Err(e) => {
                    println!("pshort({t}): inconclusive ({e})");
                    EXIT_INCONCLUSIVE
                }
            }
        }
        PropertyArg::Chord => {
            let mut opts = ChordPropertyOptions { max_cycle_len, mode, ..Default::default() };
            if let Some(b) = budget {
                opts.cycle_budget = b;
            }
            match check_chord_property(g, &opts) {
                Ok(ChordVerdict::Holds) => {
                    println!("chord: holds");
                    EXIT_YES
                }
                Ok(ChordVerdict::Violated { cycle, requirement }) => {
                    let what = match requirement {
                        ChordRequirement::OddChordOrAllEvenChords => {
                            "an odd chord or the full set of even chords"
                        }
                        ChordRequirement::AdjacentOddPairOrAllWideEvenChords => {
                            "two adjacent odd chords or the full set of wide even chords"
                        }
                    };
                    let verts: Vec<String> = cycle.iter().map(|v| v.to_string()).collect();
                    println!("chord: violated");
                    println!("cycle: {}", verts.join(" "));
                    println!("missing: {what}");
                    EXIT_NO
                }
                Ok(ChordVerdict::Inconclusive { cycles_examined }) => {
                    println!("chord: inconclusive ({cycles_examined} cycles examined)");
                    EXIT_INCONCLUSIVE
                }
                Err(e) => {
                    println!("chord: inconclusive ({e})");
                    EXIT_INCONCLUSIVE
                }
            }
        }
        PropertyArg::Karzanov | PropertyArg::WeakKarzanov => {
            let limit = budget.unwrap_or(oracle::DEFAULT_PM_LIMIT);
            let (label, verdict) = if property == PropertyArg::Karzanov {
                ("karzanov", verify_karzanov_property(g, limit))
            } else {
                ("weak-karzanov", verify_weak_karzanov(g, limit))
            };
            match verdict {
                PropertyVerdict::Holds => {
                    println!("{label}: holds");
                    EXIT_YES
                }
                PropertyVerdict::Violated { missing, lower, upper } => {
                    println!("{label}: violated");
                    println!("missing: no perfect matching with {missing} red edges");
                    println!("lower: {}", fmt_matching(g, &lower));
                    println!("upper: {}", fmt_matching(g, &upper));
                    EXIT_NO
                }
                PropertyVerdict::Inconclusive { pm_count } => {
                    println!("{label}: inconclusive (enumeration stopped at {pm_count} matchings)");
                    EXIT_INCONCLUSIVE
                }
            }
        }
    };
    Ok(code)
}

fn cmd_landscape(path: &std::path::Path, limit: Option<usize>) -> Result<i32, String> {
    let inst = instance::read(path)?;
    let scape = oracle::em_landscape(&inst.graph, limit.unwrap_or(oracle::DEFAULT_PM_LIMIT));
    let values: Vec<String> = scape.values().map(|v| v.to_string()).collect();
    println!("{}", values.join(" "));
    if scape.truncated {
        eprintln!("enumeration truncated; the set may be incomplete");
        return Ok(EXIT_INCONCLUSIVE);
    }
    Ok(EXIT_YES)
}

struct BenchArgs {
    classes: Vec<ClassArg>,
    n_values: Vec<usize>,
    radii: Vec<usize>,
    trials: usize,
    seed: u64,
    p: String,
    color_p: String,
    oracle_max_n: usize,
    out: PathBuf,
    mode: ExecMode,
}

struct TrialRow {
    trial_id: usize,
    n: usize,
    p_label: String,
    class: &'static str,
    k: usize,
    radius: usize,
    verdict: &'static str,
    oracle_verdict: String,
    iterations: usize,
    seconds: f64,
}

/// splitmix64 step: decorrelates per-trial seeds derived from one flag.
fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed.wrapping_add(salt.wrapping_mul(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn bench_instance(class: ClassArg, n: usize, p: Rational, seed: u64) -> Result<ColoredGraph, String> {
    let g = match class {
        ClassArg::Gnp => gen_gnp(n, p, seed),
        ClassArg::UnitInterval => gen_unit_interval(n, seed),
        ClassArg::BipUnitInterval => gen_bip_unit_interval(n / 2, n - n / 2, seed),
        ClassArg::Interval => gen_interval(n, seed),
        ClassArg::BipInterval => gen_bip_interval(n / 2, n - n / 2, seed),
        ClassArg::CompleteRPartite => {
            let (b, r) = (n / 3, n % 3);
            gen_complete_r_partite(&[b + usize::from(r > 0), b + usize::from(r > 1), b])
        }
        ClassArg::Chain => gen_chain(&(1..=n / 2).collect::<Vec<_>>()),
        ClassArg::ChainPshortCounterexample
        | ClassArg::NeighborhoodDiversity
        | ClassArg::KarzanovCounterexample => {
            return Err(format!("class {} is not an n-indexed family", class.tag()))
        }
    };
    g.map(|(g, _)| g).map_err(|e| format!("{} at n = {n}: {e}", class.tag()))
}

fn run_trial(
    spec: (usize, ClassArg, usize, usize),
    args: &BenchArgs,
    p: Rational,
    color_p: Rational,
) -> Result<TrialRow, String> {
    let (trial_id, class, n, radius) = spec;
    let s = mix(args.seed, trial_id as u64);
    let g = bench_instance(class, n, p, s)?;
    let g = random_coloring(&g, ColoringSpec::Bernoulli(color_p), mix(s, 1))
        .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix(s, 2));
    let k = rng.random_range(0..=g.n() / 2);
    let started = Instant::now();
    let run = local_search_em(&g, k, &LocalSearchOptions { radius, mode: ExecMode::Sequential })
        .map_err(|e| e.to_string())?;
    let seconds = started.elapsed().as_secs_f64();
    let verdict = match run.outcome {
        LocalSearchOutcome::Found(_) => "yes",
        LocalSearchOutcome::Stalled { .. } => "inconclusive",
        _ => "no",
    };
    let oracle_verdict = if g.n() <= args.oracle_max_n {
        if oracle::brute_force_em(&g, k).is_some() { "yes".into() } else { "no".into() }
    } else {
        String::new()
    };
    Ok(TrialRow {
        trial_id,
        n: g.n(),
        p_label: if class == ClassArg::Gnp { p.to_string() } else { color_p.to_string() },
        class: class.tag(),
        k,
        radius,
        verdict,
        oracle_verdict,
        iterations: run.profiles_computed,
        seconds,
    })
}

fn cmd_bench(args: BenchArgs) -> Result<i32, String> {
    let p = parse_rational(&args.p)?;
    let color_p = parse_rational(&args.color_p)?;
    let mut specs = Vec::new();
    for &class in &args.classes {
        for &n in &args.n_values {
            for &radius in &args.radii {
                for _ in 0..args.trials {
                    specs.push((specs.len(), class, n, radius));
                }
            }
        }
    }
    let rows = exec::map_collect(args.mode, specs, |spec| run_trial(spec, &args, p, color_p));
    let mut writer =
        csv::Writer::from_path(&args.out).map_err(|e| format!("{}: {e}", args.out.display()))?;
    writer
        .write_record([
            "trial_id",
            "n",
            "p",
            "class",
            "k",
            "strategy",
            "radius",
            "verdict",
            "oracle_verdict",
            "iterations",
            "seconds",
        ])
        .map_err(|e| e.to_string())?;
    let mut count = 0usize;
    for row in rows {
        let row = row?;
        writer
            .write_record([
                row.trial_id.to_string(),
                row.n.to_string(),
                row.p_label,
                row.class.to_string(),
                row.k.to_string(),
                "local".to_string(),
                row.radius.to_string(),
                row.verdict.to_string(),
                row.oracle_verdict,
                row.iterations.to_string(),
                format!("{:.6}", row.seconds),
            ])
            .map_err(|e| e.to_string())?;
        count += 1;
    }
    writer.flush().map_err(|e| e.to_string())?;
    println!("wrote {count} rows to {}", args.out.display());
    Ok(EXIT_YES)
}
