//! Command-line front end: configure, run, and export the overlay
//! experiments as CSV, and render the scripted routing walkthroughs.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use transnet::routing::{detect_and_jump, greedy_lookup, MoveRecord};
use transnet::sim::{
    self, chord_baseline, derive_seed, ftn_graph_props, Algorithm, ExperimentRun, Metrics,
    SimConfig,
};
use transnet::{Network, PermutationId, SchemeConfig};

const CSV_HEADER: &str = "experiment,scheme,n,m,K,seed,repetition,algorithm,mean_hops,p95_hops,\
max_hops,success_rate,mean_distinct_entries,load_metric_A,jump_rate";

/// Output directory override for relative CSV paths.
const OUTPUT_DIR_ENV: &str = "TRANSNET_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "transnet",
    about = "Permutation-overlay experiment runner",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean lookup hops for random keys from random initiators.
    LookupPerf(ExperimentArgs),
    /// Mean distinct routing-table targets as the network grows.
    TableSize(ExperimentArgs),
    /// Relative deviation of adjacent identifier gaps from the perfect load.
    LoadBalance(ExperimentArgs),
    /// Structural checks of the complete transposition graph.
    GraphProps(GraphArgs),
    /// Scripted routing walkthroughs.
    Fixture(FixtureArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    A,
    B,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    Greedy,
    Heuristic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BaselineArg {
    None,
    Chord,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Key scheme: positional (a) or rank-block (b).
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    /// Identifier arity.
    #[arg(long)]
    n: Option<u8>,
    /// Node counts (lookup/table experiments) or sampled-identifier counts
    /// (load balance); comma separated.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Keys per peer (scheme B only).
    #[arg(long)]
    k: Option<u128>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    algorithm: Option<AlgorithmArg>,
    /// Comparison baseline for lookup-perf.
    #[arg(long, value_enum)]
    baseline: Option<BaselineArg>,
    #[arg(long)]
    initiators: Option<usize>,
    #[arg(long)]
    lookups: Option<usize>,
    #[arg(long)]
    repetitions: Option<usize>,
    /// CSV output path; relative paths land in $TRANSNET_OUTPUT_DIR.
    #[arg(long)]
    output: Option<PathBuf>,
    /// key = value defaults, overridden by explicit flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    n: u8,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct FixtureArgs {
    /// Fixture name; `fig2` renders the serial-move and jump walkthrough.
    name: String,
}

/// Experiment parameters after merging flags over the optional config file.
struct RunSpec {
    scheme: SchemeArg,
    n: u8,
    populations: Vec<usize>,
    keys_per_peer: u128,
    seed: u64,
    algorithm: AlgorithmArg,
    baseline: BaselineArg,
    initiators: usize,
    lookups: usize,
    repetitions: usize,
    output: PathBuf,
}

fn parse_config_file(path: &PathBuf) -> Result<Vec<(String, String)>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "{}:{}: expected `key = value`, got `{raw}`",
                path.display(),
                lineno + 1
            ));
        };
        pairs.push((key.trim().to_lowercase(), value.trim().to_string()));
    }
    Ok(pairs)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| format!("config {key}: {e}"))
}

impl RunSpec {
    fn resolve(args: &ExperimentArgs, experiment: &str) -> Result<Self, String> {
        let mut scheme = args.scheme;
        let mut n = args.n;
        let mut populations = args.m.clone();
        let mut keys_per_peer = args.k;
        let mut seed = args.seed;
        let mut algorithm = args.algorithm;
        let mut baseline = args.baseline;
        let mut initiators = args.initiators;
        let mut lookups = args.lookups;
        let mut repetitions = args.repetitions;
        let mut output = args.output.clone();

        if let Some(path) = &args.config {
            for (key, value) in parse_config_file(path)? {
                match key.as_str() {
                    "scheme" => {
                        let v = match value.to_lowercase().as_str() {
                            "a" => SchemeArg::A,
                            "b" => SchemeArg::B,
                            other => return Err(format!("config scheme: unknown `{other}`")),
                        };
                        scheme.get_or_insert(v);
                    }
                    "n" => {
                        n.get_or_insert(parse_num("n", &value)?);
                    }
                    "m" => {
                        let mut list = Vec::new();
                        for part in value.split(',') {
                            list.push(parse_num("m", part.trim())?);
                        }
                        populations.get_or_insert(list);
                    }
                    "k" => {
                        keys_per_peer.get_or_insert(parse_num("k", &value)?);
                    }
                    "seed" => {
                        seed.get_or_insert(parse_num("seed", &value)?);
                    }
                    "algorithm" => {
                        let v = match value.to_lowercase().as_str() {
                            "greedy" => AlgorithmArg::Greedy,
                            "heuristic" => AlgorithmArg::Heuristic,
                            other => return Err(format!("config algorithm: unknown `{other}`")),
                        };
                        algorithm.get_or_insert(v);
                    }
                    "baseline" => {
                        let v = match value.to_lowercase().as_str() {
                            "none" => BaselineArg::None,
                            "chord" => BaselineArg::Chord,
                            other => return Err(format!("config baseline: unknown `{other}`")),
                        };
                        baseline.get_or_insert(v);
                    }
                    "initiators" => {
                        initiators.get_or_insert(parse_num("initiators", &value)?);
                    }
                    "lookups" => {
                        lookups.get_or_insert(parse_num("lookups", &value)?);
                    }
                    "repetitions" => {
                        repetitions.get_or_insert(parse_num("repetitions", &value)?);
                    }
                    "output" => {
                        output.get_or_insert(PathBuf::from(value));
                    }
                    other => return Err(format!("config: unknown key `{other}`")),
                }
            }
        }

        let scheme = scheme.unwrap_or(SchemeArg::B);
        let n = n.ok_or("missing --n (or `n` in the config file)")?;
        let populations = populations.ok_or("missing --m (or `m` in the config file)")?;
        if populations.is_empty() {
            return Err("--m needs at least one value".into());
        }
        if scheme == SchemeArg::A && keys_per_peer.is_some() {
            return Err("--k only applies to scheme b".into());
        }
        let keys_per_peer = keys_per_peer.unwrap_or(1);

        let output = output.unwrap_or_else(|| PathBuf::from(format!("{experiment}.csv")));
        let output = if output.is_relative() {
            match std::env::var_os(OUTPUT_DIR_ENV) {
                Some(dir) => PathBuf::from(dir).join(output),
                None => output,
            }
        } else {
            output
        };

        Ok(RunSpec {
            scheme,
            n,
            populations,
            keys_per_peer,
            seed: seed.unwrap_or(42),
            algorithm: algorithm.unwrap_or(AlgorithmArg::Greedy),
            baseline: baseline.unwrap_or(BaselineArg::None),
            initiators: initiators.unwrap_or(100),
            lookups: lookups.unwrap_or(100),
            repetitions: repetitions.unwrap_or(40),
            output,
        })
    }

    fn scheme_config(&self) -> Result<SchemeConfig, String> {
        match self.scheme {
            SchemeArg::A => SchemeConfig::positional(self.n).map_err(|e| e.to_string()),
            SchemeArg::B => {
                SchemeConfig::rank_block(self.n, self.keys_per_peer).map_err(|e| e.to_string())
            }
        }
    }

    fn scheme_label(&self) -> &'static str {
        match self.scheme {
            SchemeArg::A => "A",
            SchemeArg::B => "B",
        }
    }

    fn algorithm(&self) -> Algorithm {
        match self.algorithm {
            AlgorithmArg::Greedy => Algorithm::Greedy,
            AlgorithmArg::Heuristic => Algorithm::Heuristic,
        }
    }

    /// Per-population seed: the i-th population in the list runs with
    /// `base_seed + i`, so single-population reruns reproduce any cell.
    fn seed_for(&self, index: usize) -> u64 {
        self.seed + index as u64
    }
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_opt_u32(v: Option<u32>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_row(
    experiment: &str,
    spec: &RunSpec,
    m: usize,
    seed: u64,
    repetition: usize,
    algorithm: &str,
    metrics: &Metrics,
) -> String {
    format!(
        "{experiment},{scheme},{n},{m},{k},{seed},{repetition},{algorithm},{mean},{p95},{max},{succ},{tbl},{load},{jump}",
        scheme = spec.scheme_label(),
        n = spec.n,
        k = spec.keys_per_peer,
        mean = fmt_opt_f64(metrics.mean_hops),
        p95 = fmt_opt_f64(metrics.p95_hops),
        max = fmt_opt_u32(metrics.max_hops),
        succ = fmt_opt_f64(metrics.success_rate),
        tbl = fmt_opt_f64(metrics.mean_distinct_table_entries),
        load = fmt_opt_f64(metrics.load_metric_a_mean),
        jump = fmt_opt_f64(metrics.jump_rate),
    )
}

fn write_csv(path: &PathBuf, rows: &[String]) -> Result<(), String> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
        }
    }
    let mut text = String::with_capacity(rows.len() * 80 + CSV_HEADER.len() + 1);
    text.push_str(CSV_HEADER);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn run_experiment(kind: &str, args: &ExperimentArgs) -> Result<(), String> {
    let spec = RunSpec::resolve(args, kind)?;
    let scheme = spec.scheme_config()?;
    let mut rows = Vec::new();
    let mut summary = String::new();

    for (i, &m) in spec.populations.iter().enumerate() {
        let seed = spec.seed_for(i);
        let cfg = SimConfig::new(scheme, m.max(1), seed, spec.algorithm()).with_counts(
            spec.initiators,
            spec.lookups,
            spec.repetitions,
        );

        let (run, algorithm_label): (ExperimentRun, String) = match kind {
            "lookup-perf" => (
                sim::experiment_lookup_perf(&cfg).map_err(|e| e.to_string())?,
                spec.algorithm().to_string(),
            ),
            "table-size" => (
                sim::experiment_routing_table(&cfg).map_err(|e| e.to_string())?,
                spec.algorithm().to_string(),
            ),
            "load-balance" => (
                sim::experiment_load_balance(&cfg, m).map_err(|e| e.to_string())?,
                String::new(),
            ),
            other => unreachable!("unknown experiment {other}"),
        };

        for (rep, metrics) in run.per_repetition.iter().enumerate() {
            rows.push(csv_row(
                kind,
                &spec,
                m,
                seed,
                rep,
                &algorithm_label,
                metrics,
            ));
        }

        let agg = &run.aggregate;
        match kind {
            "lookup-perf" => {
                let _ = writeln!(
                    summary,
                    "{kind} n={} m={m} ({}): mean_hops={:.4} p95={} max={} success={:.4} jump_rate={}",
                    spec.n,
                    algorithm_label,
                    agg.mean_hops.unwrap_or(f64::NAN),
                    fmt_opt_f64(agg.p95_hops),
                    fmt_opt_u32(agg.max_hops),
                    agg.success_rate.unwrap_or(f64::NAN),
                    fmt_opt_f64(agg.jump_rate),
                );
            }
            "table-size" => {
                let _ = writeln!(
                    summary,
                    "{kind} n={} m={m}: mean_distinct_entries={:.4} (max possible {})",
                    spec.n,
                    agg.mean_distinct_table_entries.unwrap_or(f64::NAN),
                    spec.n as usize * (spec.n as usize - 1) / 2,
                );
            }
            "load-balance" => {
                let _ = writeln!(
                    summary,
                    "{kind} n={} count={m}: mean_A={:.5} (perfect load {})",
                    spec.n,
                    agg.load_metric_a_mean.unwrap_or(f64::NAN),
                    scheme.perfect_load(m as u64),
                );
            }
            _ => unreachable!(),
        }

        if kind == "lookup-perf" && spec.baseline == BaselineArg::Chord {
            let lookups = spec.initiators * spec.lookups;
            for rep in 0..spec.repetitions {
                let metrics = chord_baseline(m, derive_seed(seed, rep as u64), lookups);
                rows.push(csv_row(kind, &spec, m, seed, rep, "chord", &metrics));
            }
            let pooled = chord_baseline(m, seed, lookups * spec.repetitions);
            let _ = writeln!(
                summary,
                "{kind} n={} m={m} (chord): mean_hops={:.4}",
                spec.n,
                pooled.mean_hops.unwrap_or(f64::NAN),
            );
        }
    }

    write_csv(&spec.output, &rows)?;
    print!("{summary}");
    println!("wrote {} rows to {}", rows.len(), spec.output.display());
    Ok(())
}

fn run_graph_props(args: &GraphArgs) -> Result<(), String> {
    if args.n < 3 || args.n > 25 {
        return Err(format!("--n {} outside the supported range 3..=25", args.n));
    }
    let props = ftn_graph_props(args.n, args.seed);
    let fmt_u32 = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_else(|| "skipped".into());
    let fmt_usize = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_else(|| "skipped".into());
    println!(
        "graph n={}: nodes={} degree={} diameter={} vertex_connectivity={}",
        args.n,
        props.node_count,
        props.degree,
        fmt_u32(props.diameter),
        fmt_usize(props.vertex_connectivity),
    );
    Ok(())
}

/// The scripted walkthrough: a lookup that prefers the ring successor over a
/// corrected-but-absent neighbour, then the forced jump along the
/// first-symbol-correcting link once a successor streak has stalled.
fn run_fixture(args: &FixtureArgs) -> Result<(), String> {
    if args.name != "fig2" {
        return Err(format!("unknown fixture `{}`; available: fig2", args.name));
    }

    let perm = |symbols: &[u8]| PermutationId::new(symbols.to_vec()).unwrap();
    let scheme = SchemeConfig::positional(6).map_err(|e| e.to_string())?;
    let owner = perm(&[4, 1, 3, 5, 6, 2]);
    let key = owner.positional_value();

    println!("fixture fig2: serial move and digit-correcting jump (n = 6)");
    println!("lookup target: key {key}, full-network owner id {owner}\n");

    // Part 1: with the initiator at the ring maximum, its successor link and
    // its corrected links all wrap to the ring minimum, so the greedy step
    // picks the ring successor; the corrected id 465231 is not live.
    let mut net = Network::new(scheme);
    let mut bootstrap = None;
    for symbols in [
        &[3u8, 6, 5, 2, 4, 1],
        &[3, 6, 5, 1, 2, 4],
        &[3, 6, 5, 1, 4, 2],
        &[3, 6, 5, 2, 1, 4],
    ] {
        let out = net
            .join(perm(symbols), bootstrap)
            .map_err(|e| e.to_string())?;
        bootstrap.get_or_insert(out.key);
    }
    net.refresh_all();
    let initiator = scheme.node_key(&perm(&[3, 6, 5, 2, 4, 1])).unwrap();

    println!("part 1: successor substitution wins the greedy comparison");
    println!("  live ids: 365124 365142 365214 365241; initiator 365241 (ring maximum)");
    let node = net.node(initiator).unwrap();
    let corrected = node
        .routing_table()
        .iter()
        .find(|e| e.ideal_perm() == &perm(&[4, 6, 5, 2, 3, 1]))
        .unwrap();
    println!(
        "  corrected neighbour 465231 (key {}) is absent; its link resolves to live {}",
        corrected.ideal_key(),
        net.node(corrected.resolved_key()).unwrap().perm(),
    );
    let res = greedy_lookup(&net, initiator, key).map_err(|e| e.to_string())?;
    let path: Vec<String> = res
        .path
        .iter()
        .map(|k| net.node(*k).unwrap().perm().to_string())
        .collect();
    println!(
        "  greedy path: {} ({} hop, {} jumps) -> chose the ring successor {}\n",
        path.join(" -> "),
        res.hops,
        res.jumps,
        path[1],
    );

    // Part 2: the jump. With 465231 live and a primed streak of stagnant
    // successor hops, the detector forces the link that corrects symbol 1.
    let mut net = Network::new(scheme);
    let mut bootstrap = None;
    for symbols in [
        &[3u8, 6, 5, 2, 4, 1],
        &[3, 6, 5, 4, 1, 2],
        &[3, 6, 5, 4, 2, 1],
        &[4, 1, 3, 6, 2, 5],
        &[4, 6, 5, 2, 3, 1],
    ] {
        let out = net
            .join(perm(symbols), bootstrap)
            .map_err(|e| e.to_string())?;
        bootstrap.get_or_insert(out.key);
    }
    net.refresh_all();
    let current = scheme.node_key(&perm(&[3, 6, 5, 2, 4, 1])).unwrap();
    let node = net.node(current).unwrap();

    println!("part 2: forced jump out of a serial-move streak");
    println!("  live ids: 365241 365412 365421 413625 465231; current node 365241");
    println!("  primed streak: two successor hops without any prefix gain toward {owner}");
    let streak = vec![
        MoveRecord {
            destination: 0,
            via_successor: true,
            prefix_after: 0,
            improved_prefix: false,
        };
        2
    ];
    let entry =
        detect_and_jump(&streak, node, &owner, 2, 0).ok_or("jump detector unexpectedly idle")?;
    println!(
        "  jump: positions ({},{}) correct symbol 1 -> ideal id {} -> live node {}",
        entry.generator().first(),
        entry.generator().second(),
        entry.ideal_perm(),
        net.node(entry.resolved_key()).unwrap().perm(),
    );
    let landed = net.node(entry.resolved_key()).unwrap();
    println!(
        "  landing interval ({}, {}] {} key {key}",
        landed.interval().left(),
        landed.interval().right(),
        if landed.interval().contains(key) {
            "contains"
        } else {
            "does not contain"
        },
    );
    let rest = greedy_lookup(&net, entry.resolved_key(), key).map_err(|e| e.to_string())?;
    let rest_path: Vec<String> = rest
        .path
        .iter()
        .map(|k| net.node(*k).unwrap().perm().to_string())
        .collect();
    println!(
        "  continuing from {}: {} ({} hops) -> responsible node {}",
        rest_path[0],
        rest_path.join(" -> "),
        rest.hops,
        net.node(rest.found.unwrap()).unwrap().perm(),
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::LookupPerf(args) => run_experiment("lookup-perf", args),
        Command::TableSize(args) => run_experiment("table-size", args),
        Command::LoadBalance(args) => run_experiment("load-balance", args),
        Command::GraphProps(args) => run_graph_props(args),
        Command::Fixture(args) => run_fixture(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
