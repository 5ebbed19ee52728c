use clap::{Args, Parser, Subcommand};
use minorlab::embedder::{
    embed_dense, embed_sparse, CoverPiece, DenseConfig, DenseSpec, EmbeddingReport, SparseConfig,
};
use minorlab::family::{gamma_match_experiment, sample_family, FamilySpec, MatchConfig};
use minorlab::gamma::{
    alpha, gamma_classic, gamma_r, gamma_vec, GammaInstance, GammaRMode, OBJECTIVE_TOL,
};
use minorlab::graphcore::{enk_check, parse_graph, Graph};
use minorlab::lowerbound::{
    build_bipartite_lowerbound, build_lowerbound_graph, desk_scale_lowerbound_experiment,
    sample_base_graph, Certification, LbExperimentConfig,
};
use minorlab::oracle::{
    is_minor, is_rooted_minor, prevalence_check, MinorOutcome, PrevalenceMode, PrevalenceResult,
};
use minorlab::par::{set_threads, Exec};
use minorlab::partitioner::{blocked_partition, BlockedPartitionParams};
use minorlab::Error;
use num_rational::Ratio;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const SUCCESS: u8 = 0;
const USAGE: u8 = 1;
const FAILURE: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "minorlab", version, about = "Extremal graph minor toolkit")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every randomized stage.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for exact minor searches.
    #[arg(long, global = true, default_value_t = 5_000_000)]
    budget: u64,
    /// Retry cap for randomized constructions.
    #[arg(long, global = true, default_value_t = 64)]
    retries: usize,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The constant alpha and its maximiser p*.
    Alpha,
    /// gamma(sigma, D) for an instance file.
    GammaVec {
        #[arg(long)]
        inst: PathBuf,
        #[arg(long, default_value_t = OBJECTIVE_TOL)]
        tol: f64,
    },
    /// gamma_r(H).
    GammaR {
        #[arg(long)]
        h: PathBuf,
        #[arg(long)]
        r: usize,
        /// Simulated annealing instead of exhaustive search.
        #[arg(long)]
        heuristic: bool,
        #[arg(long, default_value_t = 20_000)]
        iterations: usize,
        #[arg(long, default_value_t = 1e7)]
        cap: f64,
    },
    /// gamma(H) with base t and singleton parts.
    GammaClassic {
        #[arg(long)]
        h: PathBuf,
        #[arg(long, default_value_t = OBJECTIVE_TOL)]
        tol: f64,
    },
    /// Sample a member of the structured family.
    SampleFamily {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Compare gamma_r(H) with gamma(sigma, D) over sampled H.
    GammaMatch {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 4_000)]
        anneal_iterations: usize,
    },
    /// Blocked randomized partition of a graph.
    BlockedPartition {
        #[arg(long)]
        g: PathBuf,
        /// JSON with fields a, b, l, omega, eta.
        #[arg(long)]
        params: PathBuf,
    },
    /// Dense embedding pipeline.
    EmbedDense {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        /// JSON dense spec; generic when absent.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Comma-separated roots, one per H-vertex.
        #[arg(long, value_delimiter = ',')]
        roots: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0.05)]
        eta: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Sparse embedding pipeline.
    EmbedSparse {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        /// JSON list of cover pieces; H itself when absent.
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        m: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Exact (rooted) minor test.
    MinorCheck {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        #[arg(long, value_delimiter = ',')]
        roots: Option<Vec<usize>>,
    },
    /// Rooted minor for every (or sampled) root choice.
    Prevalence {
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        h: PathBuf,
        /// Sample this many root assignments instead of all of them.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 1e6)]
        cap: f64,
    },
    /// Blowup lower-bound graph for an instance.
    BuildLowerbound {
        #[arg(long)]
        inst: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0.715)]
        p: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Blowup lower-bound graph for books.
    BuildBipartiteLowerbound {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        f: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Pseudorandom base graph with Monte Carlo property checks.
    BaseGraph {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0.715)]
        p: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Tiny-scale non-minor certification experiment.
    LbExperiment {
        #[arg(long)]
        inst: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0.715)]
        p: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Membership in E(m, k) and the minimality properties.
    EnkCheck {
        #[arg(long)]
        g: PathBuf,
        /// Rational, e.g. 7 or 15/2.
        #[arg(long)]
        m: String,
        #[arg(long)]
        k: String,
    },
}

/// A failed command: exit code and message.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_)
            | Error::Parse { .. }
            | Error::MalformedModel(_)
            | Error::MalformedPartition(_)
            | Error::InvalidContraction { .. } => USAGE,
            _ => FAILURE,
        };
        Fail(code, e.to_string())
    }
}

struct Ctx {
    inputs: Vec<Value>,
    exec: Exec,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String, Fail> {
        let bytes =
            std::fs::read(path).map_err(|e| Fail(USAGE, format!("{}: {e}", path.display())))?;
        self.inputs.push(json!({
            "path": path.display().to_string(),
            "sha256": hex::encode(Sha256::digest(&bytes)),
        }));
        String::from_utf8(bytes)
            .map_err(|_| Fail(USAGE, format!("{} is not UTF-8", path.display())))
    }

    fn graph(&mut self, path: &Path) -> Result<Graph, Fail> {
        let text = self.read(path)?;
        Ok(parse_graph(&text)?)
    }

    fn json<T: serde::de::DeserializeOwned>(&mut self, path: &Path) -> Result<T, Fail> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| Fail(USAGE, format!("{}: {e}", path.display())))
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn rational(s: &str) -> Result<Ratio<i64>, Fail> {
    s.parse()
        .map_err(|_| Fail(USAGE, format!("{s:?} is not a rational number")))
}

fn embedding(rep: EmbeddingReport) -> (u8, Value) {
    let code = if rep.is_model() { SUCCESS } else { FAILURE };
    (code, to_value(&rep))
}

fn run(cmd: &Command, g: &Global, ctx: &mut Ctx) -> Result<(u8, Value), Fail> {
    let seed = g.seed;
    Ok(match cmd {
        Command::Alpha => (SUCCESS, to_value(&alpha())),
        Command::GammaVec { inst, tol } => {
            let inst: GammaInstance = ctx.json(inst)?;
            (SUCCESS, to_value(&gamma_vec(&inst, *tol)?))
        }
        Command::GammaR {
            h,
            r,
            heuristic,
            iterations,
            cap,
        } => {
            let h = ctx.graph(h)?;
            let mode = if *heuristic {
                GammaRMode::Heuristic {
                    seed,
                    iterations: *iterations,
                    start: None,
                }
            } else {
                GammaRMode::Exhaustive { cap: *cap }
            };
            (SUCCESS, to_value(&gamma_r(&h, *r, &mode, ctx.exec)?))
        }
        Command::GammaClassic { h, tol } => {
            let h = ctx.graph(h)?;
            (SUCCESS, to_value(&gamma_classic(&h, *tol)?))
        }
        Command::SampleFamily { spec } => {
            let spec: FamilySpec = ctx.json(spec)?;
            (SUCCESS, to_value(&sample_family(&spec, seed)?))
        }
        Command::GammaMatch {
            spec,
            r,
            samples,
            epsilon,
            anneal_iterations,
        } => {
            let spec: FamilySpec = ctx.json(spec)?;
            let cfg = MatchConfig {
                r: *r,
                samples: *samples,
                seed,
                epsilon: *epsilon,
                anneal_iterations: *anneal_iterations,
                exec: ctx.exec,
            };
            (SUCCESS, to_value(&gamma_match_experiment(&spec, &cfg)?))
        }
        Command::BlockedPartition { g: gp, params } => {
            let graph = ctx.graph(gp)?;
            let params: BlockedPartitionParams = ctx.json(params)?;
            (
                SUCCESS,
                to_value(&blocked_partition(
                    &graph, &params, seed, g.retries, ctx.exec,
                )?),
            )
        }
        Command::EmbedDense {
            g: gp,
            h,
            spec,
            roots,
            eta,
            epsilon,
        } => {
            let graph = ctx.graph(gp)?;
            let h = ctx.graph(h)?;
            let spec: DenseSpec = match spec {
                Some(p) => ctx.json(p)?,
                None => DenseSpec::Generic,
            };
            let cfg = DenseConfig {
                eta: *eta,
                epsilon: *epsilon,
                seed,
                retries: g.retries,
                exec: ctx.exec,
            };
            embedding(embed_dense(&graph, &h, &spec, roots.as_deref(), &cfg))
        }
        Command::EmbedSparse {
            g: gp,
            h,
            cover,
            m,
            epsilon,
        } => {
            let graph = ctx.graph(gp)?;
            let h = ctx.graph(h)?;
            let cover: Vec<CoverPiece> = match cover {
                Some(p) => ctx.json(p)?,
                None => vec![CoverPiece::induced(&h, (0..h.n()).collect())],
            };
            let mut cfg = SparseConfig::new(*m, seed);
            cfg.epsilon = *epsilon;
            cfg.budget = g.budget;
            cfg.exec = ctx.exec;
            cfg.dense.retries = g.retries;
            embedding(embed_sparse(&graph, &h, &cover, &cfg))
        }
        Command::MinorCheck { g: gp, h, roots } => {
            let graph = ctx.graph(gp)?;
            let h = ctx.graph(h)?;
            let res = match roots {
                Some(r) => is_rooted_minor(&graph, &h, r, g.budget)?,
                None => is_minor(&graph, &h, g.budget)?,
            };
            let code = if res.outcome == MinorOutcome::Timeout {
                INCONCLUSIVE
            } else {
                SUCCESS
            };
            (code, to_value(&res))
        }
        Command::Prevalence {
            g: gp,
            h,
            trials,
            cap,
        } => {
            let graph = ctx.graph(gp)?;
            let h = ctx.graph(h)?;
            let mode = match trials {
                Some(t) => PrevalenceMode::Sampled { trials: *t, seed },
                None => PrevalenceMode::Exhaustive { cap: *cap },
            };
            let res = prevalence_check(&graph, &h, mode, g.budget, ctx.exec)?;
            let code = if matches!(res, PrevalenceResult::Inconclusive { .. }) {
                INCONCLUSIVE
            } else {
                SUCCESS
            };
            (code, to_value(&res))
        }
        Command::BuildLowerbound {
            inst,
            t,
            d,
            p,
            epsilon,
        } => {
            let inst: GammaInstance = ctx.json(inst)?;
            (
                SUCCESS,
                to_value(&build_lowerbound_graph(&inst, *t, *d, *p, *epsilon, seed)?),
            )
        }
        Command::BuildBipartiteLowerbound { t, f, epsilon } => (
            SUCCESS,
            to_value(&build_bipartite_lowerbound(*t, *f, *epsilon, seed)?),
        ),
        Command::BaseGraph {
            d,
            p,
            epsilon,
            trials,
        } => (
            SUCCESS,
            to_value(&sample_base_graph(
                *d, *p, *epsilon, seed, *trials, ctx.exec,
            )?),
        ),
        Command::LbExperiment {
            inst,
            t,
            d,
            samples,
            p,
            epsilon,
            k,
        } => {
            let inst: GammaInstance = ctx.json(inst)?;
            let mut cfg = LbExperimentConfig::new(*t, *d, *samples, seed);
            cfg.p = *p;
            cfg.epsilon = *epsilon;
            cfg.budget = g.budget;
            cfg.k_override = *k;
            cfg.exec = ctx.exec;
            let rep = desk_scale_lowerbound_experiment(&inst, &cfg)?;
            let code = if rep
                .samples
                .iter()
                .any(|s| matches!(s.certification, Certification::Inconclusive { .. }))
            {
                INCONCLUSIVE
            } else {
                SUCCESS
            };
            (code, to_value(&rep))
        }
        Command::EnkCheck { g: gp, m, k } => {
            let graph = ctx.graph(gp)?;
            (
                SUCCESS,
                to_value(&enk_check(&graph, rational(m)?, rational(k)?)?),
            )
        }
    })
}

fn emit(out: &Option<PathBuf>, doc: &Value) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(doc).expect("json") + "\n";
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { SUCCESS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let exec = match cli.global.threads {
        Some(1) => Exec::Sequential,
        Some(n) => {
            set_threads(n);
            Exec::Parallel
        }
        None => Exec::Parallel,
    };
    let mut ctx = Ctx {
        inputs: Vec::new(),
        exec,
    };
    let (code, body) = match run(&cli.command, &cli.global, &mut ctx) {
        Ok((code, result)) => (code, json!({ "result": result })),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            if code == USAGE {
                return ExitCode::from(USAGE);
            }
            (code, json!({ "error": msg }))
        }
    };
    let mut doc = json!({
        "tool": "minorlab",
        "version": env!("CARGO_PKG_VERSION"),
        "command_line": std::env::args().collect::<Vec<_>>(),
        "seed": cli.global.seed,
        "budget": cli.global.budget,
        "retries": cli.global.retries,
        "inputs": ctx.inputs,
        "exit_code": code,
    });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    if let Err(e) = emit(&cli.global.out, &doc) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(FAILURE);
    }
    ExitCode::from(code)
}
