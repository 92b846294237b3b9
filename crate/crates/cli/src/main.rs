use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use degentest::characterize::{cactus_reps, family_testable, obstacles, render_report, Obstacle};
use degentest::diagnostics::{analyze, Constants};
use degentest::experiment::{run_experiment, run_to_file, write_csv, ExperimentSpec, Tester};
use degentest::graph::degeneracy;
use degentest::graph::io::{parse_family, parse_graph, write_graph};
use degentest::instances::{
    disjoint_copies_instance, lb_construction, lb_size_for_m, two_hub_instance, yes_instance, Fraction,
    InstanceBundle, LBParams, YesStyle,
};
use degentest::oracle::{OracleHandle, TesterConfig};
use degentest::patterns::named;
use degentest::Graph;
use serde::Deserialize;
use serde_json::json;

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;

fn long_version() -> &'static str {
    if cfg!(debug_assertions) {
        concat!(env!("CARGO_PKG_VERSION"), " (debug build)")
    } else {
        concat!(env!("CARGO_PKG_VERSION"), " (release build)")
    }
}

#[derive(Parser)]
#[command(name = "degentest", version, long_version = long_version(), about = "Forbidden-subgraph testability on degenerate graphs")]
struct Cli {
    /// Master seed for every random choice (default 0; an experiment
    /// spec's own seed unless given).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether freeness of a family is testable. Exit 0 when
    /// testable, 3 when not.
    Decide {
        family_file: PathBuf,
        /// Print the verdict as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Generate an instance; also writes `<output>.truth.json`.
    Generate {
        #[arg(value_enum)]
        generator: Generator,
        #[arg(short, long)]
        output: PathBuf,
        /// Number of vertices.
        #[arg(long)]
        n: Option<usize>,
        /// Hub count for lower-bound hosts, instead of `--n`.
        #[arg(long)]
        m: Option<usize>,
        /// Base pattern for lower-bound and two-hub hosts.
        #[arg(long, default_value = "C4")]
        base: String,
        /// Separator, as letters (`a,c`) or indices; the first obstacle when absent.
        #[arg(long)]
        obstacle: Option<String>,
        /// Pattern copied by disjoint-copies.
        #[arg(long, default_value = "K3")]
        pattern: String,
        #[arg(long, default_value = "3/10")]
        fraction: String,
        /// Patterns a yes-instance must avoid, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "C4")]
        family: Vec<String>,
        #[arg(long, value_enum, default_value_t = Style::Forest)]
        style: Style,
    },
    /// Run one tester on a graph. Exit 0 on accept, 3 on reject.
    Test {
        graph: PathBuf,
        /// A JSON config file, or `key=value` pairs separated by commas
        /// (`q_prime=8,depth=2,witnesses=C4:ST10`). May be repeated.
        #[arg(long)]
        config: Vec<String>,
        /// Family file the witness names are looked up in first.
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TesterChoice::Canonical)]
        tester: TesterChoice,
        /// Pattern with the obstacle, for the hub and cactus testers.
        #[arg(long)]
        h1: Option<String>,
        #[arg(long)]
        obstacle: Option<String>,
        /// Pattern the cactus tester embeds.
        #[arg(long)]
        cactus: Option<String>,
        /// Total query budget.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Diagnostics pipeline for one pattern on a graph.
    Analyze {
        graph: PathBuf,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        obstacle: Option<String>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Degeneracy bound; the graph's own degeneracy when absent.
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Run an experiment spec and write its CSV.
    Experiment {
        spec: PathBuf,
        /// Overrides the experiment file's output path; `-` writes to stdout.
        #[arg(short, long)]
        output: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    LowerBound,
    TwoHub,
    DisjointCopies,
    Yes,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Forest,
    BoundedDegreeRandom,
}

#[derive(Clone, Copy, ValueEnum)]
enum TesterChoice {
    Canonical,
    HubAssembly,
    CactusEmbedding,
}

/// Failure with the exit code it maps to.
struct Failure(u8, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn input(msg: impl Into<String>) -> Failure {
    Failure(EXIT_IO, msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    parse_graph(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn pattern(name: &str) -> Result<Graph, Failure> {
    named(name).ok_or_else(|| usage(format!("unknown pattern {name:?}")))
}

/// `a,c` or `0,2`.
fn parse_separator(text: &str) -> Result<Vec<usize>, Failure> {
    let mut s = text
        .split(',')
        .map(|t| {
            let t = t.trim();
            match t.as_bytes() {
                [c @ b'a'..=b'z'] => Ok((c - b'a') as usize),
                _ => t.parse().map_err(|_| usage(format!("bad separator vertex {t:?}"))),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    s.sort_unstable();
    Ok(s)
}

fn pick_obstacle(h: &Graph, sep: Option<&str>) -> Result<Obstacle, Failure> {
    let all = obstacles(h).map_err(|e| usage(e.to_string()))?;
    match sep {
        None => all.into_iter().next().ok_or_else(|| usage("the pattern has no obstacle")),
        Some(text) => {
            let s = parse_separator(text)?;
            all.into_iter()
                .find(|o| o.s_set == s)
                .ok_or_else(|| usage(format!("{text} is not an obstacle of the pattern")))
        }
    }
}

fn decide(path: &Path, as_json: bool) -> Result<u8, Failure> {
    let family = parse_family(&read(path)?).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let names: Vec<String> = family.iter().map(|(n, _)| n.clone()).collect();
    let graphs: Vec<Graph> = family.into_iter().map(|(_, g)| g).collect();
    let verdict = family_testable(&graphs).map_err(|e| input(e.to_string()))?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
    } else {
        print!("{}", render_report(&verdict, &names));
    }
    Ok(if verdict.testable { 0 } else { EXIT_NEGATIVE })
}

#[allow(clippy::too_many_arguments)]
fn generate(
    generator: Generator,
    output: &Path,
    n: Option<usize>,
    m: Option<usize>,
    base: &str,
    obstacle: Option<&str>,
    pat: &str,
    fraction: &str,
    family: &[String],
    style: Style,
    seed: u64,
) -> Result<u8, Failure> {
    let need_n = || n.ok_or_else(|| usage("--n is required for this generator"));
    let bundle: InstanceBundle = match generator {
        Generator::LowerBound => {
            let base = pattern(base)?;
            let obs = pick_obstacle(&base, obstacle)?;
            let n = match (n, m) {
                (Some(n), None) => n,
                (None, Some(m)) => {
                    let total = base.vertex_count() - obs.r();
                    lb_size_for_m(total, obs.r(), m)
                }
                _ => return Err(usage("give exactly one of --n and --m")),
            };
            lb_construction(&LBParams::new(base, obs, n, seed)).map_err(|e| usage(e.to_string()))?
        }
        Generator::TwoHub => {
            let base = pattern(base)?;
            let obs = pick_obstacle(&base, obstacle)?;
            two_hub_instance(&base, &obs, need_n()?, seed).map_err(|e| usage(e.to_string()))?
        }
        Generator::DisjointCopies => {
            let f: Fraction = fraction.parse().map_err(usage)?;
            disjoint_copies_instance(&pattern(pat)?, need_n()?, f, seed).map_err(|e| usage(e.to_string()))?
        }
        Generator::Yes => {
            let fam = family.iter().map(|f| pattern(f)).collect::<Result<Vec<_>, _>>()?;
            let style = match style {
                Style::Forest => YesStyle::Forest,
                Style::BoundedDegreeRandom => YesStyle::BoundedDegreeRandom,
            };
            yes_instance(&fam, need_n()?, style, seed).map_err(|e| usage(e.to_string()))?
        }
    };
    write(output, &write_graph(&bundle.graph))?;
    let truth = json!({
        "ground_truth": bundle.ground_truth,
        "provenance": bundle.provenance,
    });
    let mut sidecar = output.as_os_str().to_owned();
    sidecar.push(".truth.json");
    write(Path::new(&sidecar), &serde_json::to_string_pretty(&truth).unwrap())?;
    eprintln!(
        "wrote {} ({} vertices, {} edges)",
        output.display(),
        bundle.graph.vertex_count(),
        bundle.graph.edge_count()
    );
    Ok(0)
}

/// Tester fields accepted in a config document or as `key=value` pairs.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TesterFile {
    q_prime: Option<usize>,
    depth: Option<usize>,
    samples: Option<usize>,
    heavy_threshold: Option<usize>,
    witnesses: Option<Vec<String>>,
    seed: Option<u64>,
}

impl TesterFile {
    fn merge(&mut self, other: TesterFile) {
        self.q_prime = other.q_prime.or(self.q_prime);
        self.depth = other.depth.or(self.depth);
        self.samples = other.samples.or(self.samples);
        self.heavy_threshold = other.heavy_threshold.or(self.heavy_threshold);
        self.witnesses = other.witnesses.or(self.witnesses.take());
        self.seed = other.seed.or(self.seed);
    }

    fn parse_pairs(text: &str) -> Result<Self, Failure> {
        let mut out = TesterFile::default();
        for pair in text.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| usage(format!("expected key=value, got {pair:?}")))?;
            let num = |v: &str| v.trim().parse::<u64>().map_err(|_| usage(format!("{k}: not a number: {v:?}")));
            match k.trim() {
                "q_prime" => out.q_prime = Some(num(v)? as usize),
                "depth" => out.depth = Some(num(v)? as usize),
                "samples" => out.samples = Some(num(v)? as usize),
                "heavy_threshold" => out.heavy_threshold = Some(num(v)? as usize),
                "seed" => out.seed = Some(num(v)?),
                "witnesses" => out.witnesses = Some(v.split(':').map(|s| s.trim().to_string()).collect()),
                other => return Err(usage(format!("unknown config key {other:?}"))),
            }
        }
        Ok(out)
    }
}

fn load_config(items: &[String]) -> Result<TesterFile, Failure> {
    let mut cfg = TesterFile::default();
    for item in items {
        let path = Path::new(item);
        let part = if !item.contains('=') && path.exists() {
            serde_json::from_str(&read(path)?).map_err(|e| input(format!("{item}: {e}")))?
        } else if !item.contains('=') {
            return Err(input(format!("{item}: no such config file")));
        } else {
            TesterFile::parse_pairs(item)?
        };
        cfg.merge(part);
    }
    Ok(cfg)
}

#[allow(clippy::too_many_arguments)]
fn test(
    graph_path: &Path,
    config: &[String],
    family_path: Option<&Path>,
    choice: TesterChoice,
    h1: Option<&str>,
    obstacle: Option<&str>,
    cactus: Option<&str>,
    budget: Option<u64>,
    seed: u64,
) -> Result<u8, Failure> {
    let host = read_graph(graph_path)?;
    let cfg_file = load_config(config)?;
    let family = match family_path {
        Some(p) => parse_family(&read(p)?).map_err(|e| input(format!("{}: {e}", p.display())))?,
        None => Vec::new(),
    };
    let lookup = |name: &str| -> Result<Graph, Failure> {
        match family.iter().find(|(n, _)| n == name) {
            Some((_, g)) => Ok(g.clone()),
            None => pattern(name),
        }
    };
    let witnesses = cfg_file
        .witnesses
        .clone()
        .unwrap_or_default()
        .iter()
        .map(|w| lookup(w))
        .collect::<Result<Vec<_>, _>>()?;
    let h = cfg_file.heavy_threshold.unwrap_or(8);
    let mut cfg = TesterConfig::new(cfg_file.q_prime.unwrap_or(16), cfg_file.depth.unwrap_or(2), h, witnesses);
    if let Some(s) = cfg_file.samples {
        cfg = cfg.with_samples(s);
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let h1_obstacle = || -> Result<Obstacle, Failure> {
        let h1 = lookup(h1.ok_or_else(|| usage("--h1 is required for this tester"))?)?;
        pick_obstacle(&h1, obstacle)
    };
    let tester = match choice {
        TesterChoice::Canonical => {
            if cfg.witness_family.is_empty() {
                return Err(usage("the canonical tester needs witnesses"));
            }
            Tester::Canonical(cfg)
        }
        TesterChoice::HubAssembly => Tester::HubAssembly(cfg, h1_obstacle()?),
        TesterChoice::CactusEmbedding => {
            let obs = h1_obstacle()?;
            let c = lookup(cactus.ok_or_else(|| usage("--cactus is required for this tester"))?)?;
            let rep = cactus_reps(&c, &obs.pattern, &obs, 1)
                .map_err(|e| usage(e.to_string()))?
                .pop()
                .ok_or_else(|| usage("the cactus pattern has no representation for this obstacle"))?;
            Tester::CactusEmbedding(cfg, Box::new(rep))
        }
    };
    let seed = cfg_file.seed.unwrap_or(seed);
    let handle_seed = degentest::rng::derive_seed(seed, &[0]);
    let tester_seed = degentest::rng::derive_seed(seed, &[1]);
    let mut handle = match budget {
        Some(b) => OracleHandle::with_budget(&host, handle_seed, b),
        None => OracleHandle::new(&host, handle_seed),
    };
    let verdict = tester.run(&mut handle, tester_seed).map_err(|e| usage(e.to_string()))?;
    println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
    Ok(if verdict.accept() { 0 } else { EXIT_NEGATIVE })
}

#[allow(clippy::too_many_arguments)]
fn run_analyze(
    graph_path: &Path,
    pat: &str,
    obstacle: Option<&str>,
    epsilon: f64,
    p: Option<usize>,
    h: Option<usize>,
    gamma: Option<f64>,
    seed: u64,
) -> Result<u8, Failure> {
    let host = read_graph(graph_path)?;
    let h1 = pattern(pat)?;
    let obs = pick_obstacle(&h1, obstacle)?;
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(usage("--epsilon must be in (0, 1]"));
    }
    let p = p.unwrap_or_else(|| degeneracy(&host).p.max(1));
    let mut constants = Constants::defaults(p, epsilon, h1.vertex_count());
    if let Some(h) = h {
        constants.h = h;
    }
    if let Some(g) = gamma {
        constants.gamma = g;
    }
    let report = analyze(&host, &obs, constants, p, seed).map_err(|e| usage(format!("analysis failed: {e}")))?;
    let steps: Vec<_> = report
        .prune
        .trace
        .iter()
        .map(|d| {
            json!({
                "roles": d.roles,
                "edges": d.edges.iter().map(|e| json!({
                    "from": e.from,
                    "to": e.to,
                    "locked": e.locked,
                    "witness_size": e.u_set.len(),
                    "volume": e.volume,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let out = json!({
        "constants": report.constants,
        "p": p,
        "separator": report.s_set,
        "packing_size": report.packing_size,
        "delta_good_size": report.delta_good_size,
        "extracted_size": report.extracted_size,
        "refined_size": report.refined_size,
        "trace": steps,
        "status": report.prune.status,
        "final_size": report.prune.final_packing.len(),
        "violations": report.prune.violations,
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(0)
}

fn experiment(spec_path: &Path, output: Option<&str>, seed: Option<u64>) -> Result<u8, Failure> {
    let mut spec = ExperimentSpec::from_json(&read(spec_path)?).map_err(|e| input(format!("{}: {e}", spec_path.display())))?;
    if let Some(s) = seed {
        spec.master_seed = s;
    }
    if let Some(o) = output {
        spec.output_path = o.to_string();
    }
    if spec.output_path.is_empty() || spec.output_path == "-" {
        let rows = run_experiment(&spec).map_err(|e| input(e.to_string()))?;
        write_csv(&rows, std::io::stdout().lock()).map_err(|e| input(e.to_string()))?;
    } else {
        let rows = run_to_file(&spec).map_err(|e| input(e.to_string()))?;
        eprintln!("wrote {} rows to {}", rows.len(), spec.output_path);
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = cli.seed.unwrap_or(0);
    let result = match cli.command {
        Command::Decide { family_file, json } => decide(&family_file, json),
        Command::Generate {
            generator,
            output,
            n,
            m,
            base,
            obstacle,
            pattern,
            fraction,
            family,
            style,
        } => generate(
            generator,
            &output,
            n,
            m,
            &base,
            obstacle.as_deref(),
            &pattern,
            &fraction,
            &family,
            style,
            seed,
        ),
        Command::Test {
            graph,
            config,
            family,
            tester,
            h1,
            obstacle,
            cactus,
            budget,
        } => test(
            &graph,
            &config,
            family.as_deref(),
            tester,
            h1.as_deref(),
            obstacle.as_deref(),
            cactus.as_deref(),
            budget,
            seed,
        ),
        Command::Analyze {
            graph,
            pattern,
            obstacle,
            epsilon,
            p,
            h,
            gamma,
        } => run_analyze(&graph, &pattern, obstacle.as_deref(), epsilon, p, h, gamma, seed),
        Command::Experiment { spec, output } => experiment(&spec, output.as_deref(), cli.seed),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
