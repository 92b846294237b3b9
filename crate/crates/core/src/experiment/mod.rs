//! Parameter-grid experiments: generate a host per grid point, run many
//! independent tester trials on it and aggregate reject rates and query
//! counts into CSV rows.
//!
//! Every random choice is a function of the master seed, the grid index and
//! the trial index, and trials are reduced in index order, so the CSV is
//! identical across runs and thread counts apart from `wall_ms`.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characterize::{cactus_reps, obstacles, CactusRep, Obstacle};
use crate::graph::{s_components, Graph};
use crate::instances::{
    disjoint_copies_instance, lb_construction, lb_layout, lb_size_for_m, two_hub_instance, yes_instance,
    Fraction, InstanceBundle, InstanceError, LBParams, YesStyle,
};
use crate::oracle::{
    cactus_budget, cactus_embedding_tester, canonical_tester, hub_assembly_tester, hub_budget, OracleError,
    OracleHandle, TesterConfig, Verdict,
};
use crate::patterns::named;
use crate::rng::derive_seed;

pub const CSV_HEADER: &str = "experiment,n,m_param,budget,trials,rejections,reject_rate,mean_queries,seed,wall_ms";

/// Caps the worker count; unset or 0 means one worker per core.
pub const THREADS_ENV: &str = "DEGENTEST_THREADS";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Hub sets of size `m`; the grid gives either `n` or `m`.
    LowerBound {
        base: String,
        #[serde(default)]
        obstacle: Option<Vec<usize>>,
    },
    TwoHub {
        base: String,
        #[serde(default)]
        obstacle: Option<Vec<usize>>,
    },
    DisjointCopies { pattern: String, fraction: String },
    Yes { family: Vec<String>, style: YesStyle },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TesterKind {
    Canonical,
    HubAssembly,
    CactusEmbedding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TesterSpec {
    pub kind: TesterKind,
    pub q_prime: usize,
    pub depth: usize,
    /// Queries per explored vertex; derived from `heavy_threshold` and
    /// `depth` when absent.
    #[serde(default)]
    pub samples: Option<usize>,
    pub heavy_threshold: usize,
    /// Pattern names the canonical tester looks for.
    #[serde(default)]
    pub witnesses: Vec<String>,
    /// Base pattern for the hub and cactus testers.
    #[serde(default)]
    pub h1: Option<String>,
    /// Separator of `h1`; its first obstacle when absent.
    #[serde(default)]
    pub obstacle: Option<Vec<usize>>,
    /// Pattern embedded by the cactus tester.
    #[serde(default)]
    pub cactus: Option<String>,
}

/// Lists to sweep. An empty list keeps the template value; exactly one of
/// `n` and `m` must be given.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    /// Total query budget per trial; unlimited when empty.
    pub budget: Vec<u64>,
    pub q_prime: Vec<usize>,
    pub depth: Vec<usize>,
    pub samples: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub generator: GeneratorSpec,
    pub tester: TesterSpec,
    pub grid: GridSpec,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub output_path: String,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let spec: ExperimentSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::InvalidSpec(m.to_string()));
        if self.name.is_empty() || self.name.contains([',', '"', '\n']) {
            return bad("name must be nonempty and free of commas, quotes and newlines");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.grid.n.is_empty() == self.grid.m.is_empty() {
            return bad("grid needs exactly one of n and m");
        }
        if !self.grid.m.is_empty() && !matches!(self.generator, GeneratorSpec::LowerBound { .. }) {
            return bad("an m grid only applies to the lower_bound generator");
        }
        build_tester(&self.tester, None).map(|_| ()).map_err(ExperimentError::InvalidSpec)?;
        Ok(())
    }

    pub fn grid_points(&self) -> Vec<GridPoint> {
        let g = &self.grid;
        let or = |v: &Vec<usize>, d: usize| if v.is_empty() { vec![d] } else { v.clone() };
        let sizes: Vec<(Option<usize>, Option<usize>)> = if g.m.is_empty() {
            g.n.iter().map(|&n| (Some(n), None)).collect()
        } else {
            g.m.iter().map(|&m| (None, Some(m))).collect()
        };
        let budgets: Vec<Option<u64>> = if g.budget.is_empty() {
            vec![None]
        } else {
            g.budget.iter().map(|&b| Some(b)).collect()
        };
        let t = &self.tester;
        let mut out = Vec::new();
        for &(n, m) in &sizes {
            for &budget in &budgets {
                for q in or(&g.q_prime, t.q_prime) {
                    for d in or(&g.depth, t.depth) {
                        let samples: Vec<Option<usize>> = if g.samples.is_empty() {
                            vec![t.samples]
                        } else {
                            g.samples.iter().map(|&s| Some(s)).collect()
                        };
                        for s in samples {
                            out.push(GridPoint {
                                n,
                                m,
                                budget,
                                q_prime: q,
                                depth: d,
                                samples: s,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridPoint {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub budget: Option<u64>,
    pub q_prime: usize,
    pub depth: usize,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub experiment: String,
    pub n: usize,
    pub m_param: Option<usize>,
    /// The handle's budget, or the tester's closed-form bound when the
    /// trial is unbudgeted.
    pub budget: u64,
    pub trials: usize,
    pub rejections: usize,
    pub reject_rate: f64,
    pub mean_queries: f64,
    /// Seed the instance was generated with.
    pub seed: u64,
    pub wall_ms: u128,
    /// Set on rows for grid points that could not run.
    pub error: Option<String>,
}

/// A tester ready to run: the configuration plus whatever it searches for.
#[derive(Debug, Clone)]
pub enum Tester {
    Canonical(TesterConfig),
    HubAssembly(TesterConfig, Obstacle),
    CactusEmbedding(TesterConfig, Box<CactusRep>),
}

impl Tester {
    pub fn config(&self) -> &TesterConfig {
        match self {
            Tester::Canonical(c) | Tester::HubAssembly(c, _) | Tester::CactusEmbedding(c, _) => c,
        }
    }

    /// Closed-form upper bound on queries per run.
    pub fn budget(&self) -> u64 {
        match self {
            Tester::Canonical(c) => c.canonical_budget(),
            Tester::HubAssembly(c, obs) => hub_budget(c, obs.r()),
            Tester::CactusEmbedding(c, rep) => cactus_budget(c, rep),
        }
    }

    pub fn run(&self, handle: &mut OracleHandle<'_>, seed: u64) -> Result<Verdict, OracleError> {
        match self {
            Tester::Canonical(c) => canonical_tester(handle, c, seed),
            Tester::HubAssembly(c, obs) => hub_assembly_tester(handle, &obs.pattern, obs, c, seed),
            Tester::CactusEmbedding(c, rep) => cactus_embedding_tester(handle, rep, c, seed),
        }
    }
}

fn pattern(name: &str) -> Result<Graph, String> {
    named(name).ok_or_else(|| format!("unknown pattern {name:?}"))
}

fn pick_obstacle(h1: &Graph, s_set: Option<&Vec<usize>>) -> Result<Obstacle, String> {
    let all = obstacles(h1).map_err(|e| e.to_string())?;
    match s_set {
        None => all.into_iter().next().ok_or_else(|| "pattern has no obstacle".to_string()),
        Some(s) => {
            let mut s = s.clone();
            s.sort_unstable();
            all.into_iter()
                .find(|o| o.s_set == s)
                .ok_or_else(|| format!("{s:?} is not an obstacle of the pattern"))
        }
    }
}

/// Builds the tester described by `spec`, with grid overrides applied.
pub fn build_tester(spec: &TesterSpec, point: Option<&GridPoint>) -> Result<Tester, String> {
    let q = point.map_or(spec.q_prime, |p| p.q_prime);
    let depth = point.map_or(spec.depth, |p| p.depth);
    let samples = point.map_or(spec.samples, |p| p.samples);
    let witnesses = spec.witnesses.iter().map(|w| pattern(w)).collect::<Result<Vec<_>, _>>()?;
    let mut cfg = TesterConfig::new(q, depth, spec.heavy_threshold, witnesses);
    if let Some(s) = samples {
        cfg = cfg.with_samples(s);
    }
    cfg.validate().map_err(|e| e.to_string())?;
    let h1_obstacle = || -> Result<Obstacle, String> {
        let h1 = pattern(spec.h1.as_deref().ok_or("this tester needs h1")?)?;
        pick_obstacle(&h1, spec.obstacle.as_ref())
    };
    match spec.kind {
        TesterKind::Canonical => {
            if cfg.witness_family.is_empty() {
                return Err("the canonical tester needs at least one witness".into());
            }
            Ok(Tester::Canonical(cfg))
        }
        TesterKind::HubAssembly => Ok(Tester::HubAssembly(cfg, h1_obstacle()?)),
        TesterKind::CactusEmbedding => {
            let obs = h1_obstacle()?;
            let cactus = pattern(spec.cactus.as_deref().ok_or("the cactus tester needs a cactus pattern")?)?;
            let rep = cactus_reps(&cactus, &obs.pattern, &obs, 1)
                .map_err(|e| e.to_string())?
                .pop()
                .ok_or("the pattern is not a cactus for this obstacle")?;
            Ok(Tester::CactusEmbedding(cfg, Box::new(rep)))
        }
    }
}

/// Generates the grid point's host. Returns the bundle and the `m` used.
pub fn generate(gen: &GeneratorSpec, point: &GridPoint, seed: u64) -> Result<(InstanceBundle, Option<usize>), String> {
    let err = |e: InstanceError| e.to_string();
    match gen {
        GeneratorSpec::LowerBound { base, obstacle } => {
            let base = pattern(base)?;
            let obs = pick_obstacle(&base, obstacle.as_ref())?;
            let r = obs.r();
            let n = match (point.n, point.m) {
                (Some(n), _) => n,
                (None, Some(m)) => {
                    let total: usize = s_components(&base, &obs.s_set).iter().map(|c| c.component.len()).sum();
                    lb_size_for_m(total, r, m)
                }
                (None, None) => return Err("grid point without a size".into()),
            };
            let p = LBParams::new(base, obs, n, seed);
            let m = lb_layout(&p).map_err(err)?.m;
            Ok((lb_construction(&p).map_err(err)?, Some(m)))
        }
        GeneratorSpec::TwoHub { base, obstacle } => {
            let base = pattern(base)?;
            let obs = pick_obstacle(&base, obstacle.as_ref())?;
            let n = point.n.ok_or("two_hub needs n")?;
            Ok((two_hub_instance(&base, &obs, n, seed).map_err(err)?, None))
        }
        GeneratorSpec::DisjointCopies { pattern: p, fraction } => {
            let g = pattern(p)?;
            let f: Fraction = fraction.parse()?;
            let n = point.n.ok_or("disjoint_copies needs n")?;
            Ok((disjoint_copies_instance(&g, n, f, seed).map_err(err)?, None))
        }
        GeneratorSpec::Yes { family, style } => {
            let fam = family.iter().map(|f| pattern(f)).collect::<Result<Vec<_>, _>>()?;
            let n = point.n.ok_or("yes needs n")?;
            Ok((yes_instance(&fam, n, *style, seed).map_err(err)?, None))
        }
    }
}

/// Worker pool sized from `DEGENTEST_THREADS`.
pub fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

/// Runs `trials` independent executions of `tester` on `host`. Trial `i`
/// uses handle seed `derive_seed(seed, [i, 0])` and tester seed
/// `derive_seed(seed, [i, 1])`. Results come back in trial order.
pub fn run_trials(
    host: &Graph,
    tester: &Tester,
    budget: Option<u64>,
    trials: usize,
    seed: u64,
) -> Result<Vec<Verdict>, OracleError> {
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let hs = derive_seed(seed, &[i as u64, 0]);
            let ts = derive_seed(seed, &[i as u64, 1]);
            let mut handle = match budget {
                Some(b) => OracleHandle::with_budget(host, hs, b),
                None => OracleHandle::new(host, hs),
            };
            tester.run(&mut handle, ts)
        })
        .collect()
}

/// One row per grid point, in grid order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>, ExperimentError> {
    spec.validate()?;
    let pool = thread_pool();
    let mut rows = Vec::new();
    for (gi, point) in spec.grid_points().iter().enumerate() {
        let clock = Instant::now();
        let instance_seed = derive_seed(spec.master_seed, &[gi as u64]);
        let trial_seed = derive_seed(spec.master_seed, &[gi as u64, u64::MAX]);
        let mut row = ResultRow {
            experiment: spec.name.clone(),
            n: point.n.unwrap_or(0),
            m_param: point.m,
            budget: point.budget.unwrap_or(0),
            trials: spec.trials,
            rejections: 0,
            reject_rate: 0.0,
            mean_queries: 0.0,
            seed: instance_seed,
            wall_ms: 0,
            error: None,
        };
        let outcome = (|| -> Result<(), String> {
            let tester = build_tester(&spec.tester, Some(point))?;
            let (bundle, m) = generate(&spec.generator, point, instance_seed)?;
            row.n = bundle.graph.vertex_count();
            row.m_param = m.or(point.m);
            row.budget = point.budget.map_or(tester.budget(), |b| b.min(tester.budget()));
            let verdicts = pool
                .install(|| run_trials(&bundle.graph, &tester, point.budget, spec.trials, trial_seed))
                .map_err(|e| e.to_string())?;
            row.rejections = verdicts.iter().filter(|v| !v.accept()).count();
            row.reject_rate = row.rejections as f64 / spec.trials as f64;
            row.mean_queries = verdicts.iter().map(|v| v.queries_used() as f64).sum::<f64>() / spec.trials as f64;
            Ok(())
        })();
        if let Err(e) = outcome {
            row.error = Some(e);
        }
        row.wall_ms = clock.elapsed().as_millis();
        rows.push(row);
    }
    Ok(rows)
}

/// Writes the header and one line per row. Rows with an error carry
/// `error: <message>` in the `reject_rate` column and nothing in
/// `rejections` and `mean_queries`.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<(), ExperimentError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for r in rows {
        let m = r.m_param.map(|m| m.to_string()).unwrap_or_default();
        let (rejections, rate, mean) = match &r.error {
            Some(e) => (String::new(), format!("error: {e}"), String::new()),
            None => (
                r.rejections.to_string(),
                format!("{:.6}", r.reject_rate),
                format!("{:.3}", r.mean_queries),
            ),
        };
        w.write_record([
            r.experiment.clone(),
            r.n.to_string(),
            m,
            r.budget.to_string(),
            r.trials.to_string(),
            rejections,
            rate,
            mean,
            r.seed.to_string(),
            r.wall_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the experiment and writes its CSV to `output_path` (relative paths are
/// taken from the working directory).
pub fn run_to_file(spec: &ExperimentSpec) -> Result<Vec<ResultRow>, ExperimentError> {
    if spec.output_path.is_empty() {
        return Err(ExperimentError::InvalidSpec("output_path is empty".into()));
    }
    let rows = run_experiment(spec)?;
    let path = Path::new(&spec.output_path);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_csv(&rows, std::fs::File::create(path)?)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smoke_spec() -> ExperimentSpec {
        ExperimentSpec::from_json(
            r#"{
                "name": "smoke",
                "generator": {"kind": "disjoint_copies", "pattern": "K3", "fraction": "0.3"},
                "tester": {"kind": "canonical", "q_prime": 8, "depth": 2, "samples": 8,
                           "heavy_threshold": 8, "witnesses": ["K3"]},
                "grid": {"n": [300, 600]},
                "trials": 5,
                "master_seed": 7
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn rows_per_grid_point() {
        let rows = run_experiment(&smoke_spec()).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert!(r.error.is_none());
            assert!(r.mean_queries <= r.budget as f64);
            assert_eq!(r.reject_rate, r.rejections as f64 / r.trials as f64);
        }
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with(&format!("{CSV_HEADER}\n")));
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = smoke_spec();
        s.trials = 0;
        assert!(s.validate().is_err());
        let mut s = smoke_spec();
        s.grid.m = vec![5];
        assert!(s.validate().is_err());
        let mut s = smoke_spec();
        s.tester.witnesses = vec!["Q9".into()];
        assert!(s.validate().is_err());
        assert!(ExperimentSpec::from_json(r#"{"name": "x"}"#).is_err());
    }

    #[test]
    fn generator_failures_become_error_rows() {
        let mut s = smoke_spec();
        s.generator = GeneratorSpec::LowerBound {
            base: "C4".into(),
            obstacle: None,
        };
        s.grid.n = vec![5, 200];
        let rows = run_experiment(&s).unwrap();
        assert!(rows[0].error.is_some());
        assert!(rows[1].error.is_none());
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().contains("error: "));
    }
}
