//! Command-line front end: evolve Turing machines and hypergraph
//! rewriting systems, build multiway/branchial/causal/glocal graphs,
//! generate free complexity categories, and report additivity defects.
//!
//! Exit codes: 0 success, 1 usage error, 2 internal consistency error.

mod inputs;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use irrex_core::category::{free_category, FreeCategory};
use irrex_core::defect;
use irrex_core::dot;
use irrex_core::error::Error as CoreError;
use irrex_core::hypergraph::{
    apply_match, canonical_form, find_matches, successors as hg_successors, Hypergraph,
};
use irrex_core::multiway::{
    branchial_graph_with_radius, build_multiway, causal_graph, glocal_branchial_graph, token_event_graph,
    DedupMode, HgSystem, MultiwayGraph, System, TmSystem,
};
use irrex_core::tm::{tm_evolve, TmSpec};
use irrex_core::to_canonical_json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
enum SystemKind {
    Tm,
    Hg,
}

#[derive(Parser)]
#[command(
    name = "irrex",
    about = "Multiway evolution, complexity categories, and irreducibility reports",
    version
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Reserved for randomized property-test helpers; outputs never depend
    /// on it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for frontier expansion; must not change output.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SystemArgs {
    /// System kind for the generic commands.
    #[arg(long, value_enum, default_value = "tm")]
    system: SystemKind,
    /// Rule list: canonical numbers or JSON files for tm, JSON files or
    /// inline JSON for hg.
    #[arg(long = "rules", alias = "rule", value_delimiter = ',', required = true)]
    rules: Vec<String>,
    /// Machine shape s,k (tm only).
    #[arg(long, default_value = "2,2")]
    spec: String,
    /// Initial condition: tape cells from position 0 (tm), or a named
    /// condition / file / inline JSON (hg).
    #[arg(long, required = true)]
    init: String,
    /// Initial head position (tm only).
    #[arg(long, default_value_t = 0)]
    head: i64,
    /// Initial head state (tm only).
    #[arg(long, default_value_t = 1)]
    state: u32,
    /// Key tape configurations up to translation (tm only).
    #[arg(long, default_value_t = false)]
    translation_invariant: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Turing machine commands.
    Tm {
        #[command(subcommand)]
        command: TmCommand,
    },
    /// Hypergraph rewriting commands.
    Hg {
        #[command(subcommand)]
        command: HgCommand,
    },
    /// Branchial graphs of a multiway evolution.
    Branchial {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        depth: usize,
        /// Restrict to one layer; all layers otherwise.
        #[arg(long)]
        layer: Option<usize>,
        /// Common-ancestor radius in layers.
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, value_enum, default_value = "per-layer")]
        dedup: DedupArg,
    },
    /// Causal graph of a multiway evolution.
    Causal {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "per-layer")]
        dedup: DedupArg,
    },
    /// Token-event (glocal) graph; with --layer, the glocal branchial
    /// graph at that layer.
    Glocal {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        layer: Option<usize>,
    },
    /// Free category generated by the evolution quiver.
    Category {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "per-layer")]
        dedup: DedupArg,
        /// Composite bound; defaults to the multiway depth.
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Sequential/parallel additivity-defect report.
    Report {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "global")]
        dedup: DedupArg,
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Execute a pipeline described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum TmCommand {
    /// Deterministic evolution of a single rule.
    Evolve {
        #[arg(long)]
        rule: String,
        #[arg(long, default_value = "2,2")]
        spec: String,
        #[arg(long)]
        init: String,
        #[arg(long, default_value_t = 0)]
        head: i64,
        #[arg(long, default_value_t = 1)]
        state: u32,
        #[arg(long)]
        steps: usize,
    },
    /// Multiway evolution of one or more rules.
    Multiway {
        #[arg(long = "rules", alias = "rule", value_delimiter = ',', required = true)]
        rules: Vec<String>,
        #[arg(long, default_value = "2,2")]
        spec: String,
        #[arg(long)]
        init: String,
        #[arg(long, default_value_t = 0)]
        head: i64,
        #[arg(long, default_value_t = 1)]
        state: u32,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "per-layer")]
        dedup: DedupArg,
        #[arg(long, default_value_t = false)]
        translation_invariant: bool,
    },
}

#[derive(Subcommand)]
enum HgCommand {
    /// Canonical form and certificate of a hypergraph.
    Canon {
        #[arg(long)]
        input: String,
    },
    /// Enumerate matches of a rule in a host.
    Matches {
        #[arg(long)]
        rule: String,
        #[arg(long)]
        host: String,
    },
    /// Apply rewrites: all successors, or one selected match.
    Rewrite {
        #[arg(long = "rules", alias = "rule", value_delimiter = ',', required = true)]
        rules: Vec<String>,
        #[arg(long)]
        host: String,
        /// Apply only the rule-0 match with this index.
        #[arg(long = "match")]
        match_index: Option<usize>,
    },
    /// Multiway evolution of one or more rules.
    Multiway {
        #[arg(long = "rules", alias = "rule", value_delimiter = ',', required = true)]
        rules: Vec<String>,
        #[arg(long)]
        init: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value = "per-layer")]
        dedup: DedupArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
enum DedupArg {
    PerLayer,
    Global,
}

impl From<DedupArg> for DedupMode {
    fn from(value: DedupArg) -> Self {
        match value {
            DedupArg::PerLayer => DedupMode::PerLayer,
            DedupArg::Global => DedupMode::Global,
        }
    }
}

/// The config-file schema mirrors the flags one to one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    command: String,
    #[serde(default)]
    system: Option<SystemKind>,
    #[serde(default)]
    rules: Vec<String>,
    #[serde(default)]
    spec: Option<String>,
    #[serde(default)]
    init: Option<String>,
    #[serde(default)]
    head: i64,
    #[serde(default = "default_state")]
    state: u32,
    #[serde(default)]
    steps: Option<usize>,
    #[serde(default)]
    depth: Option<usize>,
    #[serde(default)]
    dedup: Option<DedupArg>,
    #[serde(default)]
    layer: Option<usize>,
    #[serde(default = "default_radius")]
    radius: usize,
    #[serde(default)]
    max_steps: Option<usize>,
    #[serde(default, rename = "match")]
    match_index: Option<usize>,
    #[serde(default)]
    host: Option<String>,
    #[serde(default)]
    input: Option<String>,
    #[serde(default)]
    format: Format,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default = "default_threads")]
    threads: usize,
    #[serde(default)]
    translation_invariant: bool,
}

fn default_state() -> u32 {
    1
}

fn default_threads() -> usize {
    1
}

fn default_radius() -> usize {
    1
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<CoreError> for Failure {
    fn from(error: CoreError) -> Self {
        match error {
            CoreError::InternalConsistency(msg) => Failure::Internal(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure::Usage(message)
    }
}

type Outcome = Result<String, Failure>;

fn json<T: Serialize>(value: &T) -> Outcome {
    to_canonical_json(value).map_err(Failure::from)
}

fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Failure::Usage(format!("cannot build thread pool: {e}")))
}

fn build_tm_system(
    args: &SystemArgs,
) -> Result<(TmSystem, Vec<irrex_core::tm::TmConfig>), Failure> {
    let spec: TmSpec = inputs::parse_spec(&args.spec)?;
    let rules = inputs::parse_tm_rules(&args.rules, spec)?;
    let init = inputs::parse_tm_init(&args.init, args.head, args.state)?;
    let mut system = TmSystem::new(rules);
    system.translation_invariant = args.translation_invariant;
    Ok((system, vec![init]))
}

fn build_hg_system(args: &SystemArgs) -> Result<(HgSystem, Vec<Hypergraph>), Failure> {
    let rules = inputs::parse_hg_rules(&args.rules)?;
    let init = inputs::parse_hg_init(&args.init)?;
    Ok((HgSystem::new(rules), vec![init]))
}

fn graph_for<S: System + Sync>(
    system: &S,
    inits: &[S::State],
    depth: usize,
    dedup: DedupArg,
    threads: usize,
) -> Result<MultiwayGraph, Failure> {
    let pool = thread_pool(threads)?;
    build_multiway(system, inits, depth, dedup.into(), Some(&pool)).map_err(Failure::from)
}

/// Object-safe wrapper over the two concrete systems so generic commands
/// share one code path.
trait ErasedSystem {
    fn multiway(
        &self,
        depth: usize,
        dedup: DedupArg,
        threads: usize,
    ) -> Result<MultiwayGraph, Failure>;
    fn teg(&self, depth: usize) -> Result<irrex_core::multiway::TokenEventGraph, Failure>;
}

struct TmErased {
    system: TmSystem,
    inits: Vec<irrex_core::tm::TmConfig>,
}

struct HgErased {
    system: HgSystem,
    inits: Vec<Hypergraph>,
}

impl ErasedSystem for TmErased {
    fn multiway(
        &self,
        depth: usize,
        dedup: DedupArg,
        threads: usize,
    ) -> Result<MultiwayGraph, Failure> {
        graph_for(&self.system, &self.inits, depth, dedup, threads)
    }
    fn teg(&self, depth: usize) -> Result<irrex_core::multiway::TokenEventGraph, Failure> {
        token_event_graph(&self.system, &self.inits, depth).map_err(Failure::from)
    }
}

impl ErasedSystem for HgErased {
    fn multiway(
        &self,
        depth: usize,
        dedup: DedupArg,
        threads: usize,
    ) -> Result<MultiwayGraph, Failure> {
        graph_for(&self.system, &self.inits, depth, dedup, threads)
    }
    fn teg(&self, depth: usize) -> Result<irrex_core::multiway::TokenEventGraph, Failure> {
        token_event_graph(&self.system, &self.inits, depth).map_err(Failure::from)
    }
}

fn with_system<T>(
    args: &SystemArgs,
    run: impl FnOnce(&dyn ErasedSystem) -> Result<T, Failure>,
) -> Result<T, Failure> {
    match args.system {
        SystemKind::Tm => {
            let (system, inits) = build_tm_system(args)?;
            run(&TmErased { system, inits })
        }
        SystemKind::Hg => {
            let (system, inits) = build_hg_system(args)?;
            run(&HgErased { system, inits })
        }
    }
}

fn category_of(graph: &MultiwayGraph, max_steps: Option<usize>) -> Result<FreeCategory, Failure> {
    let bound = max_steps.unwrap_or(graph.depth).max(1);
    free_category(&graph.quiver(), Some(bound)).map_err(Failure::from)
}

fn run_command(command: &Command, format: Format, threads: usize) -> Outcome {
    match command {
        Command::Tm { command } => run_tm(command, format, threads),
        Command::Hg { command } => run_hg(command, format, threads),
        Command::Branchial {
            system,
            depth,
            layer,
            radius,
            dedup,
        } => with_system(system, |sys| {
            let graph = sys.multiway(*depth, *dedup, threads)?;
            let layers: Vec<usize> = match layer {
                Some(t) => vec![*t],
                None => (0..=graph.depth).collect(),
            };
            let graphs = layers
                .into_iter()
                .map(|t| {
                    branchial_graph_with_radius(&graph, t, *radius).map_err(Failure::from)
                })
                .collect::<Result<Vec<_>, _>>()?;
            match format {
                Format::Json => json(&serde_json::json!({ "layers": graphs })),
                Format::Dot => Ok(graphs.iter().map(dot::branchial_dot).collect()),
            }
        }),
        Command::Causal {
            system,
            depth,
            dedup,
        } => with_system(system, |sys| {
            let graph = sys.multiway(*depth, *dedup, threads)?;
            let causal = causal_graph(&graph)?;
            match format {
                Format::Json => json(&causal),
                Format::Dot => Ok(dot::causal_dot(&causal)),
            }
        }),
        Command::Glocal {
            system,
            depth,
            layer,
        } => with_system(system, |sys| {
            let teg = sys.teg(*depth)?;
            match layer {
                Some(t) => {
                    let glocal = glocal_branchial_graph(&teg, *t)?;
                    match format {
                        Format::Json => json(&glocal),
                        Format::Dot => Ok(dot::glocal_branchial_dot(&glocal)),
                    }
                }
                None => match format {
                    Format::Json => json(&teg),
                    Format::Dot => Ok(dot::token_event_dot(&teg)),
                },
            }
        }),
        Command::Category {
            system,
            depth,
            dedup,
            max_steps,
        } => with_system(system, |sys| {
            let graph = sys.multiway(*depth, *dedup, threads)?;
            let fc = category_of(&graph, *max_steps)?;
            match format {
                Format::Json => json(&fc),
                Format::Dot => Ok(dot::category_dot(&fc)),
            }
        }),
        Command::Report {
            system,
            depth,
            dedup,
            max_steps,
        } => with_system(system, |sys| {
            let graph = sys.multiway(*depth, *dedup, threads)?;
            let fc = category_of(&graph, *max_steps)?;
            let report = defect::report(&graph, &fc)?;
            match format {
                Format::Json => json(&report),
                Format::Dot => Err(Failure::Usage(
                    "report has no dot rendering; use --format json".into(),
                )),
            }
        }),
        Command::Run { config } => {
            let text = fs::read_to_string(config)
                .map_err(|e| Failure::Usage(format!("cannot read config file: {e}")))?;
            let parsed: RunConfig = serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("bad config: {e}")))?;
            run_config(&parsed)
        }
    }
}

fn run_tm(command: &TmCommand, format: Format, threads: usize) -> Outcome {
    match command {
        TmCommand::Evolve {
            rule,
            spec,
            init,
            head,
            state,
            steps,
        } => {
            let machine_spec = inputs::parse_spec(spec)?;
            let machine = inputs::parse_tm_rule(rule, machine_spec)?;
            let start = inputs::parse_tm_init(init, *head, *state)?;
            match format {
                Format::Json => {
                    let evolution = tm_evolve(&machine, &start, *steps);
                    json(&serde_json::json!({
                        "configs": evolution.configs,
                        "halted": evolution.halted,
                    }))
                }
                Format::Dot => {
                    let system = TmSystem::new(vec![machine]);
                    let graph = graph_for(&system, &[start], *steps, DedupArg::Global, threads)?;
                    Ok(dot::evolution_dot(&graph))
                }
            }
        }
        TmCommand::Multiway {
            rules,
            spec,
            init,
            head,
            state,
            depth,
            dedup,
            translation_invariant,
        } => {
            let machine_spec = inputs::parse_spec(spec)?;
            let machines = inputs::parse_tm_rules(rules, machine_spec)?;
            let start = inputs::parse_tm_init(init, *head, *state)?;
            let mut system = TmSystem::new(machines);
            system.translation_invariant = *translation_invariant;
            let graph = graph_for(&system, &[start], *depth, *dedup, threads)?;
            match format {
                Format::Json => json(&graph),
                Format::Dot => Ok(dot::evolution_dot(&graph)),
            }
        }
    }
}

fn run_hg(command: &HgCommand, format: Format, threads: usize) -> Outcome {
    match command {
        HgCommand::Canon { input } => {
            let host = inputs::parse_hg_init(input)?;
            let canon = canonical_form(&host);
            match format {
                Format::Json => json(&serde_json::json!({
                    "certificate": canon.certificate,
                    "graph": canon.graph,
                })),
                Format::Dot => Err(Failure::Usage(
                    "canon has no dot rendering; use --format json".into(),
                )),
            }
        }
        HgCommand::Matches { rule, host } => {
            let rewrite = inputs::parse_hg_rule(rule)?;
            let graph = inputs::parse_hg_init(host)?;
            let matches = find_matches(&rewrite, &graph);
            json(&serde_json::json!({ "matches": matches }))
        }
        HgCommand::Rewrite {
            rules,
            host,
            match_index,
        } => {
            let rule_list = inputs::parse_hg_rules(rules)?;
            let graph = inputs::parse_hg_init(host)?;
            match match_index {
                Some(index) => {
                    let matches = find_matches(&rule_list[0], &graph);
                    let chosen = matches.get(*index).ok_or_else(|| {
                        Failure::Usage(format!(
                            "match index {index} out of range ({} matches)",
                            matches.len()
                        ))
                    })?;
                    let result = apply_match(&rule_list[0], &graph, chosen)?;
                    json(&serde_json::json!({ "match": chosen, "result": result }))
                }
                None => {
                    let all: Vec<_> = hg_successors(&rule_list, &graph)
                        .into_iter()
                        .map(|(event, result)| {
                            serde_json::json!({ "event": event, "result": result })
                        })
                        .collect();
                    json(&serde_json::json!({ "successors": all }))
                }
            }
        }
        HgCommand::Multiway {
            rules,
            init,
            depth,
            dedup,
        } => {
            let rule_list = inputs::parse_hg_rules(rules)?;
            let start = inputs::parse_hg_init(init)?;
            let system = HgSystem::new(rule_list);
            let graph = graph_for(&system, &[start], *depth, *dedup, threads)?;
            match format {
                Format::Json => json(&graph),
                Format::Dot => Ok(dot::evolution_dot(&graph)),
            }
        }
    }
}

/// Lower a config file onto the same pipelines the flags use.
fn run_config(config: &RunConfig) -> Outcome {
    let system_args = |cfg: &RunConfig| -> Result<SystemArgs, Failure> {
        Ok(SystemArgs {
            system: cfg.system.unwrap_or(SystemKind::Tm),
            rules: cfg.rules.clone(),
            spec: cfg.spec.clone().unwrap_or_else(|| "2,2".to_string()),
            init: cfg
                .init
                .clone()
                .ok_or_else(|| Failure::Usage("missing field: init".into()))?,
            head: cfg.head,
            state: cfg.state,
            translation_invariant: cfg.translation_invariant,
        })
    };
    let need_depth = |cfg: &RunConfig| {
        cfg.depth
            .ok_or_else(|| Failure::Usage("missing field: depth".into()))
    };
    let dedup_or = |cfg: &RunConfig, fallback: DedupArg| cfg.dedup.unwrap_or(fallback);

    let command = match config.command.as_str() {
        "evolve" => Command::Tm {
            command: TmCommand::Evolve {
                rule: config
                    .rules
                    .first()
                    .cloned()
                    .ok_or_else(|| Failure::Usage("missing field: rules".into()))?,
                spec: config.spec.clone().unwrap_or_else(|| "2,2".to_string()),
                init: config
                    .init
                    .clone()
                    .ok_or_else(|| Failure::Usage("missing field: init".into()))?,
                head: config.head,
                state: config.state,
                steps: config
                    .steps
                    .ok_or_else(|| Failure::Usage("missing field: steps".into()))?,
            },
        },
        "multiway" => match config.system.unwrap_or(SystemKind::Tm) {
            SystemKind::Tm => Command::Tm {
                command: TmCommand::Multiway {
                    rules: config.rules.clone(),
                    spec: config.spec.clone().unwrap_or_else(|| "2,2".to_string()),
                    init: config
                        .init
                        .clone()
                        .ok_or_else(|| Failure::Usage("missing field: init".into()))?,
                    head: config.head,
                    state: config.state,
                    depth: need_depth(config)?,
                    dedup: dedup_or(config, DedupArg::PerLayer),
                    translation_invariant: config.translation_invariant,
                },
            },
            SystemKind::Hg => Command::Hg {
                command: HgCommand::Multiway {
                    rules: config.rules.clone(),
                    init: config
                        .init
                        .clone()
                        .ok_or_else(|| Failure::Usage("missing field: init".into()))?,
                    depth: need_depth(config)?,
                    dedup: dedup_or(config, DedupArg::PerLayer),
                },
            },
        },
        "branchial" => Command::Branchial {
            system: system_args(config)?,
            depth: need_depth(config)?,
            layer: config.layer,
            radius: config.radius,
            dedup: dedup_or(config, DedupArg::PerLayer),
        },
        "causal" => Command::Causal {
            system: system_args(config)?,
            depth: need_depth(config)?,
            dedup: dedup_or(config, DedupArg::PerLayer),
        },
        "glocal" => Command::Glocal {
            system: system_args(config)?,
            depth: need_depth(config)?,
            layer: config.layer,
        },
        "category" => Command::Category {
            system: system_args(config)?,
            depth: need_depth(config)?,
            dedup: dedup_or(config, DedupArg::PerLayer),
            max_steps: config.max_steps,
        },
        "report" => Command::Report {
            system: system_args(config)?,
            depth: need_depth(config)?,
            dedup: dedup_or(config, DedupArg::Global),
            max_steps: config.max_steps,
        },
        "matches" => Command::Hg {
            command: HgCommand::Matches {
                rule: config
                    .rules
                    .first()
                    .cloned()
                    .ok_or_else(|| Failure::Usage("missing field: rules".into()))?,
                host: config
                    .host
                    .clone()
                    .ok_or_else(|| Failure::Usage("missing field: host".into()))?,
            },
        },
        "rewrite" => Command::Hg {
            command: HgCommand::Rewrite {
                rules: config.rules.clone(),
                host: config
                    .host
                    .clone()
                    .ok_or_else(|| Failure::Usage("missing field: host".into()))?,
                match_index: config.match_index,
            },
        },
        "canon" => Command::Hg {
            command: HgCommand::Canon {
                input: config
                    .input
                    .clone()
                    .ok_or_else(|| Failure::Usage("missing field: input".into()))?,
            },
        },
        other => {
            return Err(Failure::Usage(format!(
                "unknown command {other:?} (field: command)"
            )))
        }
    };
    let output = run_command(&command, config.format, config.threads)?;
    if let Some(path) = &config.out {
        fs::write(path, &output)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
        return Ok(String::new());
    }
    Ok(output)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            use clap::error::ErrorKind;
            let _ = error.print();
            return match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(0),
                _ => ExitCode::from(1),
            };
        }
    };
    match run_command(&cli.command, cli.format, cli.threads) {
        Ok(output) => {
            if let Some(path) = &cli.out {
                if let Err(error) = fs::write(path, &output) {
                    eprintln!("error: cannot write {}: {error}", path.display());
                    return ExitCode::from(1);
                }
            } else if !output.is_empty() {
                print!("{output}");
            }
            ExitCode::from(0)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(message)) => {
            eprintln!("internal consistency error: {message}");
            ExitCode::from(2)
        }
    }
}
