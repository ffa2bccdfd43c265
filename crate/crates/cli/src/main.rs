//! `roig`: batch front end over robust-oig.
//!
//! Exit codes: 0 success, 1 domain or I/O error, 2 usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use robust_oig::boost::{AgnosticLearner, BoostedLearner, WeakFromOptimal};
use robust_oig::dims::{d_dimension, dimension_report, DimConfig};
use robust_oig::eval::{
    draw_sample, exact_expected_risk, fixture_generator, sandwich_bounds, thm1_experiment, EvalConfig, FixtureKind,
};
use robust_oig::fixtures::{
    example1, example2_discrete, f1, f2, with_target_distribution, with_uniform_realizable,
};
use robust_oig::learners::{learner_by_name, Learner};
use robust_oig::orient::{learner_induced_orientation, solve_orientation, weighted_learner_orientation, SolverConfig};
use robust_oig::rational::parse_rational;
use robust_oig::{parse_instance, Error, Example, GlobalOig, GraphConfig, ProblemInstance};

#[derive(Parser, Debug)]
#[command(name = "roig", version, about = "Robust learning with global one-inclusion graphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Largest |support|^m enumerated exactly before falling back to Monte Carlo.
    #[arg(long, global = true)]
    exact_cap: Option<u64>,
    /// Refuse to build graphs with more vertices than this.
    #[arg(long, global = true)]
    vertex_cap: Option<usize>,
    /// Wall-clock budget for the orientation solver, in milliseconds.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the global one-inclusion graph on n-element multisets.
    Graph {
        instance: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Optimal orientation, or the one a learner induces (n must be even).
    Orient {
        instance: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        learner: Option<String>,
        /// Use the weighted per-vertex law with this weight (e.g. 1/2).
        #[arg(long, requires = "learner")]
        eps: Option<String>,
    },
    /// All dimensions with replayable witnesses.
    Dims {
        instance: PathBuf,
        #[arg(long, default_value_t = 6)]
        n_cap: usize,
    },
    /// Expected robust risk of a learner trained on n draws.
    Eval {
        instance: PathBuf,
        #[arg(long)]
        learner: String,
        #[arg(long)]
        n: usize,
        /// Named distribution in the instance; defaults to the first.
        #[arg(long)]
        distribution: Option<String>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Lower/upper chain on G_2n for the optimal and named learners.
    Sandwich {
        instance: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "rerm,constant:+1,constant:-1,classical-oig")]
        learners: Vec<String>,
    },
    /// Boost the optimal learner on a realizable sample.
    Boost {
        instance: PathBuf,
        #[command(flatten)]
        sample: SampleArgs,
        /// Weak-learner training size; defaults to the exact d_dimension.
        #[arg(long)]
        m0: Option<usize>,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long, default_value_t = 0.125)]
        alpha: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
    },
    /// Agnostic reduction on a sample (optionally with label noise).
    Agnostic {
        instance: PathBuf,
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        m0: Option<usize>,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
    },
    /// Local-versus-global separation experiment.
    Thm1 {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value = "rerm")]
        learner: String,
        #[arg(long, default_value_t = 512)]
        pattern_cap: usize,
    },
    /// Write the standard fixture instances as JSON files.
    Fixtures {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
    },
}

#[derive(Args, Debug)]
struct SampleArgs {
    /// Explicit sample, e.g. `a:+1,b:-1`.
    #[arg(long, conflicts_with = "draws")]
    sample: Option<String>,
    /// Number of i.i.d. draws from the distribution.
    #[arg(long)]
    draws: Option<usize>,
    #[arg(long)]
    distribution: Option<String>,
    /// Probability of flipping each drawn label.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn load(path: &Path) -> Outcome<ProblemInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    Ok(parse_instance(&text)?)
}

fn graph_config(g: &Global) -> GraphConfig {
    let mut cfg = GraphConfig::default();
    if let Some(cap) = g.vertex_cap {
        cfg.vertex_cap = cap;
    }
    cfg
}

fn solver_config(g: &Global) -> SolverConfig {
    let mut cfg = SolverConfig::default();
    if let Some(ms) = g.budget_ms {
        cfg.time_budget = Some(Duration::from_millis(ms));
    }
    cfg
}

fn eval_config(g: &Global, trials: usize) -> EvalConfig {
    let mut cfg = EvalConfig { trials, seed: Some(g.seed), ..EvalConfig::default() };
    if let Some(cap) = g.exact_cap {
        cfg.exact_cap = cap;
    }
    cfg
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn parse_sample(inst: &ProblemInstance, text: &str) -> Outcome<Vec<Example>> {
    let mut pairs = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (p, y) = item.rsplit_once(':').ok_or_else(|| Failure::Usage(format!("expected point:label, got `{item}`")))?;
        let y: i8 = y.trim_start_matches('+').parse().map_err(|_| Failure::Usage(format!("bad label in `{item}`")))?;
        pairs.push((p, y));
    }
    Ok(inst.examples(&pairs)?)
}

fn sample_from(inst: &ProblemInstance, args: &SampleArgs, seed: u64) -> Outcome<Vec<Example>> {
    match (&args.sample, args.draws) {
        (Some(text), _) => parse_sample(inst, text),
        (None, Some(m)) => {
            let dist = match &args.distribution {
                Some(name) => inst.distribution(name)?,
                None => &inst
                    .distributions()
                    .first()
                    .ok_or_else(|| Failure::Domain("instance has no distributions".into()))?
                    .distribution,
            };
            Ok(draw_sample(dist, m, args.noise, seed)?)
        }
        (None, None) => Err(Failure::Usage("give --sample or --draws".into())),
    }
}

/// The exact d_dimension, used as the default weak-learner training size.
fn default_m0(inst: &ProblemInstance, g: &Global) -> Outcome<usize> {
    let cfg = DimConfig {
        n_cap: 3 * inst.num_points(),
        graph: graph_config(g),
        solver: solver_config(g),
        ..DimConfig::default()
    };
    d_dimension(inst, &cfg)?
        .value
        .exact()
        .ok_or_else(|| Failure::Domain("d_dimension is not exact within the budget; pass --m0".into()))
}

/// Hypothesis robustly correct on the most points; ties go to the one
/// nearest the middle of the class.
fn target_hypothesis(inst: &ProblemInstance) -> usize {
    let mid = inst.hypotheses().len() / 2;
    (0..inst.hypotheses().len())
        .max_by_key(|&h| {
            let covered = inst
                .point_ids()
                .filter(|&x| inst.consistent_set(h).contains(Example::new(x, inst.hypotheses()[h].label(x))))
                .count();
            (covered, std::cmp::Reverse(h.abs_diff(mid)))
        })
        .unwrap_or(0)
}

fn run(cli: Cli) -> Outcome<Value> {
    let g = &cli.global;
    Ok(match cli.command {
        Command::Graph { instance, n } => {
            let inst = load(&instance)?;
            let graph = GlobalOig::build(&inst, n, graph_config(g))?;
            let export = graph.to_export(&inst);
            json!({
                "n": n,
                "num_vertices": graph.num_vertices(),
                "num_edges": graph.edges().len(),
                "max_adv_degree": graph.max_adv_degree(),
                "graph": export,
            })
        }
        Command::Orient { instance, n, learner, eps } => {
            let inst = load(&instance)?;
            let graph = GlobalOig::build(&inst, n, graph_config(g))?;
            match learner {
                None => {
                    let out = solve_orientation(&graph, solver_config(g));
                    json!({ "n": n, "kind": "optimal", "outcome": out })
                }
                Some(name) => {
                    let l = learner_by_name(&name, &inst, n.saturating_sub(1))?;
                    let cfg = eval_config(g, 1000);
                    let induced = match eps {
                        None => learner_induced_orientation(&inst, &graph, l.as_ref(), &cfg)?,
                        Some(text) => {
                            let eps = parse_rational(&text).ok_or_else(|| Failure::Usage(format!("bad --eps `{text}`")))?;
                            weighted_learner_orientation(&inst, &graph, l.as_ref(), &eps, &cfg)?
                        }
                    };
                    json!({ "n": n, "kind": "learner-induced", "learner": l.name(), "outcome": induced })
                }
            }
        }
        Command::Dims { instance, n_cap } => {
            let inst = load(&instance)?;
            let cfg = DimConfig { n_cap, graph: graph_config(g), solver: solver_config(g), ..DimConfig::default() };
            to_value(&dimension_report(&inst, &cfg)?)
        }
        Command::Eval { instance, learner, n, distribution, trials } => {
            let inst = load(&instance)?;
            let named = match &distribution {
                Some(name) => inst.distributions().iter().find(|d| &d.name == name),
                None => inst.distributions().first(),
            }
            .ok_or_else(|| Failure::Domain("distribution not found".into()))?;
            let l = learner_by_name(&learner, &inst, n)?;
            let est = exact_expected_risk(&inst, l.as_ref(), &named.distribution, n, &eval_config(g, trials))?;
            json!({ "learner": l.name(), "distribution": named.name, "n": n, "risk": est })
        }
        Command::Sandwich { instance, n, learners } => {
            let inst = load(&instance)?;
            let boxed: Vec<Box<dyn Learner>> =
                learners.iter().map(|name| learner_by_name(name, &inst, 2 * n - 1)).collect::<Result<_, _>>()?;
            let refs: Vec<&dyn Learner> = boxed.iter().map(|b| b.as_ref()).collect();
            let report = sandwich_bounds(&inst, n, &refs, graph_config(g), solver_config(g), &eval_config(g, 1000))?;
            to_value(&report)
        }
        Command::Boost { instance, sample, m0, rounds, alpha, delta } => {
            let inst = load(&instance)?;
            let s = sample_from(&inst, &sample, g.seed)?;
            let m0 = match m0 {
                Some(m) => m,
                None => default_m0(&inst, g)?,
            };
            let weak = WeakFromOptimal::with_config(&inst, m0, graph_config(g), solver_config(g))?;
            let mut learner = BoostedLearner::with_weak(weak);
            learner.alpha = alpha;
            learner.delta = delta;
            learner.rounds = rounds;
            let out = learner.run(&inst, &s)?;
            json!({ "m0": m0, "sample_size": s.len(), "output": out })
        }
        Command::Agnostic { instance, sample, m0, delta } => {
            let inst = load(&instance)?;
            let s = sample_from(&inst, &sample, g.seed)?;
            let m0 = match m0 {
                Some(m) => m,
                None => default_m0(&inst, g)?,
            };
            let mut learner = BoostedLearner::with_weak(WeakFromOptimal::with_config(
                &inst,
                m0,
                graph_config(g),
                solver_config(g),
            )?);
            learner.delta = delta;
            let agnostic = AgnosticLearner::with_boosted(learner);
            let out = agnostic.run(&inst, &s)?;
            json!({ "m0": m0, "sample_size": s.len(), "output": out })
        }
        Command::Thm1 { m, trials, learner, pattern_cap } => {
            let l = learner_by_name(&learner, &f1(), 0)?;
            to_value(&thm1_experiment(m, trials, g.seed, l.as_ref(), pattern_cap)?)
        }
        Command::Fixtures { dir } => {
            std::fs::create_dir_all(&dir).map_err(|e| Failure::Domain(format!("{}: {e}", dir.display())))?;
            let items: Vec<(&str, ProblemInstance)> = vec![
                ("f1", f1()),
                ("f2", f2()),
                ("example1-3", example1(3)?),
                ("example2", example2_discrete(2, 1, 64, g.seed)?),
                ("thm1-m1", fixture_generator(&FixtureKind::Thm1 { m: 1, pattern_cap: 64 }, g.seed)?),
            ];
            // A realizable `target` law comes first so it is the default.
            let items = items
                .into_iter()
                .map(|(name, inst)| {
                    let h = target_hypothesis(&inst);
                    let inst = if inst.distributions().is_empty() { with_target_distribution(inst, h)? } else { inst };
                    Ok((name, with_uniform_realizable(inst)?))
                })
                .collect::<Outcome<Vec<_>>>()?;
            let mut written = Vec::new();
            for (name, inst) in items {
                let path = dir.join(format!("{name}.json"));
                std::fs::write(&path, inst.to_json()).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
                written.push(json!({ "name": name, "path": path.display().to_string(), "points": inst.num_points(), "hypotheses": inst.hypotheses().len() }));
            }
            json!({ "written": written })
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.global.out.clone();
    match run(cli) {
        Ok(value) => {
            let text = serde_json::to_string_pretty(&value).expect("json") + "\n";
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
