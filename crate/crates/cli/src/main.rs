use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use eonroute_core::sim::{
    derive_seed, reliability, run, run_campaign, run_on_graph, write_csv, CampaignSpec,
    Reliability, RunConfig, RunResults, TrafficConfig,
};
use eonroute_core::topology::io::{load_graph, write_graph};
use eonroute_core::topology::{gabriel_seeded, graph_stats, population_stats, GabrielParams};
use eonroute_core::{AllocationPolicy, Cost, Demand, Multigraph, NodeId, Router, RouterKind};

#[derive(Parser)]
#[command(
    name = "eonroute",
    version,
    about = "Routing and spectrum assignment for elastic optical networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Route one demand on a graph file.
    Route(RouteArgs),
    /// Simulate one run of dynamic traffic.
    Run(RunArgs),
    /// Run a grid of populations and write one CSV row per population.
    Campaign(CampaignArgs),
    /// Print topology statistics for a graph file or generated graphs.
    Stats(StatsArgs),
    /// Generate a Gabriel graph and write it as a graph file.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct RouteArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Source node id.
    source: usize,
    /// Target node id.
    target: usize,
    /// Contiguous slices demanded.
    slices: usize,
    #[arg(long, default_value_t = 2000)]
    limit_km: Cost,
    #[arg(long, default_value = "proposed")]
    router: RouterKind,
    #[arg(long, default_value = "first")]
    policy: AllocationPolicy,
    #[arg(long, default_value_t = 10)]
    k: usize,
}

#[derive(Args, Clone, Copy)]
struct NetworkArgs {
    /// Slices per link.
    #[arg(long, default_value_t = 400)]
    slices: usize,
    #[arg(long, default_value_t = 100)]
    nodes: usize,
    /// Placement area in km, as WIDTHxHEIGHT.
    #[arg(long, default_value = "1000x1000", value_parser = parse_area)]
    area: (f64, f64),
}

impl NetworkArgs {
    fn params(&self) -> GabrielParams {
        GabrielParams {
            nodes: self.nodes,
            width: self.area.0,
            height: self.area.1,
            slices: self.slices,
        }
    }
}

fn parse_area(text: &str) -> Result<(f64, f64), String> {
    let (w, h) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {text:?}"))?;
    let parse = |v: &str| {
        v.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite() && *v > 0.0)
            .ok_or_else(|| format!("invalid area dimension {v:?}"))
    };
    Ok((parse(w)?, parse(h)?))
}

#[derive(Args)]
struct RunArgs {
    /// Seed for the graph and the traffic.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Use this topology instead of generating one.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Demand arrivals per day.
    #[arg(long, default_value_t = 35.0)]
    lambda: f64,
    #[arg(long, default_value = "proposed")]
    router: RouterKind,
    #[arg(long, default_value = "fittest")]
    policy: AllocationPolicy,
    #[command(flatten)]
    network: NetworkArgs,
    #[arg(long, default_value_t = 2000)]
    limit_km: Cost,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    days: u32,
    /// Mean holding time in days.
    #[arg(long, default_value_t = 10.0)]
    holding: f64,
    /// Report p_establish as established / attempted over the whole run.
    #[arg(long)]
    pooled: bool,
    /// Measure wall-clock search time.
    #[arg(long)]
    time: bool,
    /// Check slice conservation and every route at every event.
    #[arg(long)]
    verify: bool,
    /// Also print one line per simulated day.
    #[arg(long)]
    daily: bool,
}

#[derive(Args)]
struct CampaignArgs {
    /// Campaign file (TOML).
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Override the base seed of the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the sample count of the config file.
    #[arg(long)]
    samples: Option<usize>,
    /// Fail when a population's p_establish relative standard error exceeds 5%.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct StatsArgs {
    /// Statistics of this file instead of generated graphs.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Number of generated graphs.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    network: NetworkArgs,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    network: NetworkArgs,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(path: &Path) -> Result<Multigraph> {
    load_graph(path).with_context(|| format!("cannot read graph {}", path.display()))
}

fn node(g: &Multigraph, id: usize) -> Result<NodeId> {
    if id >= g.node_count() {
        bail!(
            "node {id} does not exist (graph has {} nodes)",
            g.node_count()
        );
    }
    Ok(NodeId::from(id))
}

fn route(args: RouteArgs) -> Result<ExitCode> {
    let g = load(&args.graph)?;
    let demand = Demand::new(node(&g, args.source)?, node(&g, args.target)?, args.slices)?;
    if args.k == 0 {
        bail!("--k must be at least 1");
    }
    let router = Router::new(args.router, args.limit_km).with_k(args.k);
    let Some(found) = router.route(&g, &demand).route else {
        println!("BLOCKED");
        return Ok(ExitCode::from(1));
    };
    let slot = args.policy.allocate(&found.sigma, demand.slices)?;
    let edges: Vec<String> = found
        .path
        .iter()
        .map(|&e| format!("e{}", g.link_of(e).label))
        .collect();
    println!(
        "{} | cost {} | sigma {} | slot {}",
        edges.join(" "),
        found.cost,
        found.sigma,
        slot
    );
    Ok(ExitCode::SUCCESS)
}

fn print_run(results: &RunResults, daily: bool) {
    if daily {
        println!("day,utilization,arrivals,established,active,capacity,fragments");
        for (i, d) in results.days.iter().enumerate() {
            println!(
                "{},{},{},{},{},{},{}",
                i + 1,
                d.utilization,
                d.arrivals,
                d.established,
                d.active_connections,
                d.capacity_served,
                d.mean_edge_fragments
            );
        }
    }
    println!("arrivals {}", results.arrivals);
    println!("established {}", results.established);
    let s = &results.summary;
    for (name, value) in eonroute_core::sim::Metrics::NAMES.iter().zip(s.values()) {
        println!("{name} {value}");
    }
}

fn simulate(args: RunArgs) -> Result<ExitCode> {
    let cfg = RunConfig {
        network: args.network.params(),
        traffic: TrafficConfig {
            lambda: args.lambda,
            holding_mean: args.holding,
            days: args.days,
            ..TrafficConfig::default()
        },
        router: args.router,
        policy: args.policy,
        limit_km: args.limit_km,
        k: args.k,
        pooled_p_establish: args.pooled,
        measure_time: args.time,
        verify: args.verify,
        ..RunConfig::default()
    };
    cfg.validate()?;
    let graph_seed = derive_seed(args.seed, 0, 0);
    let traffic_seed = derive_seed(args.seed, 1, 0);
    let results = match &args.graph {
        Some(path) => run_on_graph(load(path)?, traffic_seed, &cfg),
        None => run(graph_seed, traffic_seed, &cfg),
    };
    print_run(&results, args.daily);
    Ok(ExitCode::SUCCESS)
}

fn campaign(args: CampaignArgs) -> Result<ExitCode> {
    let mut spec = CampaignSpec::load(&args.config)
        .with_context(|| format!("cannot load campaign {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(samples) = args.samples {
        spec.samples = samples;
    }
    spec.validate()?;
    // open the output first so an unwritable path fails before the work starts
    let file =
        File::create(&args.out).with_context(|| format!("cannot write {}", args.out.display()))?;

    let total = spec.run_count();
    eprintln!("{} populations, {total} runs", spec.populations().len());
    let step = (total / 100).max(1);
    let rows = run_campaign(&spec, args.jobs, &|done, total| {
        if done % step == 0 || done == total {
            eprintln!("{done}/{total} runs");
        }
    })?;
    write_csv(&rows, BufWriter::new(file))?;

    let unreliable = rows
        .iter()
        .filter(|r| {
            r.results.samples >= 2
                && reliability(r.results.rse.p_establish) == Reliability::Unreliable
        })
        .count();
    if unreliable > 0 {
        eprintln!("{unreliable} populations have a p_establish relative standard error above 5%");
        if args.strict {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn stats(args: StatsArgs) -> Result<ExitCode> {
    let stats = match &args.graph {
        Some(path) => graph_stats(&load(path)?),
        None => {
            if args.samples == 0 {
                bail!("--samples must be at least 1");
            }
            let params = args.network.params();
            if params.nodes < 2 {
                bail!("--nodes must be at least 2");
            }
            let graphs: Vec<Multigraph> = (0..args.samples as u64)
                .map(|i| gabriel_seeded(&params, derive_seed(args.seed, 0, i)))
                .collect();
            population_stats(&graphs)
        }
    };
    println!("graphs {}", stats.graphs);
    print!("{stats}");
    Ok(ExitCode::SUCCESS)
}

fn generate(args: GenerateArgs) -> Result<ExitCode> {
    let params = args.network.params();
    if params.nodes < 2 {
        bail!("--nodes must be at least 2");
    }
    let g = gabriel_seeded(&params, derive_seed(args.seed, 0, 0));
    match &args.out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            write_graph(&g, BufWriter::new(file))?;
        }
        None => write_graph(&g, io::stdout().lock())?,
    }
    io::stdout().flush()?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Route(args) => route(args),
        Command::Run(args) => simulate(args),
        Command::Campaign(args) => campaign(args),
        Command::Stats(args) => stats(args),
        Command::Generate(args) => generate(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
