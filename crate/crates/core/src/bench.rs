//! Experiment runner: repeated seeded runs of one algorithm on one graph,
//! aggregation into min / mean / success-count rows, CSV and partition
//! output, and the brute-force cross-check for small graphs.

use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::budget::{Budget, SearchResult, DEFAULT_STAGNATION_LIMIT};
use crate::conductance::Conductance;
use crate::genetic::{aga_run, Crossover, GaConfig};
use crate::graph::Graph;
use crate::local_search::{als1_run, arls12_run, ls1_run, SamplerConfig, DEFAULT_FLIP_PROBABILITY};
use crate::memetic::{sts_ama_run, AmaConfig};
use crate::oracle::{brute_force_min_conductance, OracleError};
use crate::partition::conductance_of;

/// Environment variable capping the number of concurrent runs.
pub const THREADS_ENV: &str = "CONDUCTANCE_THREADS";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no run records to aggregate")]
    EmptyRecords,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("run {run} reported an undefined conductance")]
    UndefinedResult { run: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Ls1,
    Als1,
    Arls12,
    Aga1px,
    AgaUx,
    StsAma,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Ls1,
        Algorithm::Als1,
        Algorithm::Arls12,
        Algorithm::Aga1px,
        Algorithm::AgaUx,
        Algorithm::StsAma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ls1 => "ls1",
            Algorithm::Als1 => "als1",
            Algorithm::Arls12 => "arls12",
            Algorithm::Aga1px => "aga-1px",
            Algorithm::AgaUx => "aga-ux",
            Algorithm::StsAma => "sts-ama",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| BenchError::InvalidConfig(format!("unknown algorithm {s:?}")))
    }
}

/// Tunable algorithm parameters. Fields an algorithm does not use are
/// ignored by it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgorithmParams {
    pub population_size: usize,
    pub tournament_size: usize,
    pub ls_length: u64,
    pub stagnation_limit: u64,
    /// Probability that RLS1,2 tests a flip rather than a swap.
    pub flip_probability: f64,
    /// Lower bound on the sampling probability; `None` means `2/n`.
    pub ps_floor: Option<f64>,
}

impl Default for AlgorithmParams {
    fn default() -> Self {
        AlgorithmParams {
            population_size: 100,
            tournament_size: 2,
            ls_length: 1_000_000,
            stagnation_limit: DEFAULT_STAGNATION_LIMIT,
            flip_probability: DEFAULT_FLIP_PROBABILITY,
            ps_floor: None,
        }
    }
}

impl AlgorithmParams {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: &str| Err(BenchError::InvalidConfig(msg.to_owned()));
        if self.population_size < 2 {
            return bad("population size must be at least 2");
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return bad("tournament size must lie in 1..=population size");
        }
        if self.stagnation_limit == 0 {
            return bad("stagnation limit must be positive");
        }
        if !(0.0..=1.0).contains(&self.flip_probability) {
            return bad("move mix must lie in [0, 1]");
        }
        if let Some(f) = self.ps_floor {
            if !(f > 0.0 && f <= 0.5) {
                return bad("ps floor must lie in (0, 0.5]");
            }
        }
        Ok(())
    }

    fn sampler(&self, n: usize) -> SamplerConfig {
        let mut s = SamplerConfig::for_graph(n);
        if let Some(f) = self.ps_floor {
            s.ps_floor = f;
        }
        s
    }
}

/// Per-run stopping rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetMode {
    Time(Duration),
    /// Objective-evaluation count; makes every run deterministic.
    Iterations(u64),
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub graph_name: String,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub budget: BudgetMode,
    pub base_seed: u64,
    pub params: AlgorithmParams,
    /// Stop a run early once it reaches this value.
    pub target: Option<Conductance>,
    /// Concurrent runs; `None` reads [`THREADS_ENV`], falling back to the
    /// number of available cores.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(
        graph_name: impl Into<String>,
        algorithm: Algorithm,
        runs: usize,
        budget: BudgetMode,
    ) -> Self {
        ExperimentConfig {
            graph_name: graph_name.into(),
            algorithm,
            runs,
            budget,
            base_seed: 0,
            params: AlgorithmParams::default(),
            target: None,
            threads: None,
        }
    }

    /// Budget for run `i`, which uses seed `base_seed + i`.
    pub fn run_budget(&self, i: usize) -> Budget {
        let seed = self.base_seed.wrapping_add(i as u64);
        let mut b = match self.budget {
            BudgetMode::Time(d) => Budget::time(d, seed),
            BudgetMode::Iterations(k) => Budget::evaluations(k, seed),
        }
        .with_stagnation_limit(self.params.stagnation_limit);
        b.target = self.target;
        b
    }
}

/// Runs one algorithm once.
pub fn run_algorithm(
    graph: &Graph,
    algorithm: Algorithm,
    params: &AlgorithmParams,
    budget: &Budget,
) -> SearchResult {
    let sampler = params.sampler(graph.n());
    match algorithm {
        Algorithm::Ls1 => ls1_run(graph, budget),
        Algorithm::Als1 => als1_run(graph, budget, sampler),
        Algorithm::Arls12 => arls12_run(graph, budget, sampler, params.flip_probability),
        Algorithm::Aga1px | Algorithm::AgaUx => {
            let crossover = if algorithm == Algorithm::Aga1px {
                Crossover::OnePoint
            } else {
                Crossover::Uniform
            };
            let config = GaConfig {
                population_size: params.population_size,
                tournament_size: params.tournament_size,
                crossover,
                sampler,
                mutation_rate: None,
            };
            aga_run(graph, &config, budget)
        }
        Algorithm::StsAma => {
            let config = AmaConfig {
                population_size: params.population_size,
                tournament_size: params.tournament_size,
                ls_length: params.ls_length,
                flip_probability: params.flip_probability,
                ..AmaConfig::default()
            };
            sts_ama_run(graph, &config, budget)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub phi: Conductance,
    pub membership: Vec<bool>,
    pub elapsed: Duration,
    pub evaluations: u64,
    pub restarts: u64,
    pub seeding_overran: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub graph: String,
    pub algorithm: String,
    pub min_phi: Conductance,
    /// Exact mean of the per-run values.
    pub mean_phi: BigRational,
    /// Runs whose value equals `min_phi` exactly.
    pub success: usize,
    pub runs: usize,
}

impl SummaryRow {
    pub fn mean_decimal(&self) -> String {
        rational_to_decimal(&self.mean_phi)
    }
}

/// Rounds a non-negative rational half-up to eight fractional digits.
pub fn rational_to_decimal(r: &BigRational) -> String {
    let scale = BigInt::from(100_000_000u64);
    let two = BigInt::from(2u8);
    let q = (&two * r.numer() * &scale + r.denom()) / (&two * r.denom());
    let int = &q / &scale;
    let frac = &q % &scale;
    format!("{int}.{frac:0>8}")
}

fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
}

/// Executes `cfg.runs` independent runs (concurrently, up to the configured
/// thread count) and aggregates them. Records are ordered by run index.
pub fn run_experiment(
    graph: &Graph,
    cfg: &ExperimentConfig,
) -> Result<(Vec<RunRecord>, SummaryRow), BenchError> {
    if cfg.runs == 0 {
        return Err(BenchError::InvalidConfig("runs must be at least 1".into()));
    }
    if graph.n() < 2 {
        return Err(BenchError::InvalidConfig(
            "graph needs at least two vertices".into(),
        ));
    }
    cfg.params.validate()?;
    let threads = cfg.threads.or_else(threads_from_env).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| BenchError::InvalidConfig(e.to_string()))?;
    let records: Vec<RunRecord> = pool.install(|| {
        (0..cfg.runs)
            .into_par_iter()
            .map(|i| {
                let budget = cfg.run_budget(i);
                let r = run_algorithm(graph, cfg.algorithm, &cfg.params, &budget);
                debug_assert_eq!(conductance_of(graph, &r.membership), r.phi);
                RunRecord {
                    run: i,
                    seed: budget.seed,
                    phi: r.phi,
                    membership: r.membership,
                    elapsed: r.elapsed,
                    evaluations: r.evaluations,
                    restarts: r.restarts,
                    seeding_overran: r.seeding_overran,
                }
            })
            .collect()
    });
    let summary = aggregate_stats(&cfg.graph_name, cfg.algorithm.name(), &records)?;
    Ok((records, summary))
}

/// Minimum, exact mean and success count over `records`.
pub fn aggregate_stats(
    graph: &str,
    algorithm: &str,
    records: &[RunRecord],
) -> Result<SummaryRow, BenchError> {
    let mut sum = BigRational::zero();
    let mut min = Conductance::Undefined;
    for r in records {
        let (num, den) = r
            .phi
            .ratio()
            .ok_or(BenchError::UndefinedResult { run: r.run })?;
        sum += BigRational::new(BigInt::from(num), BigInt::from(den));
        min = min.min(r.phi);
    }
    if records.is_empty() {
        return Err(BenchError::EmptyRecords);
    }
    let runs = records.len();
    Ok(SummaryRow {
        graph: graph.to_owned(),
        algorithm: algorithm.to_owned(),
        min_phi: min,
        mean_phi: sum / BigRational::from_integer(BigInt::from(runs)),
        success: records.iter().filter(|r| r.phi == min).count(),
        runs,
    })
}

pub const SUMMARY_HEADER: [&str; 6] = [
    "graph",
    "algorithm",
    "min_phi",
    "mean_phi",
    "success",
    "runs",
];
pub const RUNS_HEADER: [&str; 6] = [
    "run",
    "seed",
    "phi",
    "elapsed_ms",
    "evaluations",
    "restarts",
];

pub fn write_summary_csv<W: Write>(writer: W, rows: &[SummaryRow]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.graph.clone(),
            r.algorithm.clone(),
            r.min_phi.to_decimal(),
            r.mean_decimal(),
            r.success.to_string(),
            r.runs.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_runs_csv<W: Write>(writer: W, records: &[RunRecord]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(RUNS_HEADER)?;
    for r in records {
        w.write_record([
            r.run.to_string(),
            r.seed.to_string(),
            r.phi.to_decimal(),
            r.elapsed.as_millis().to_string(),
            r.evaluations.to_string(),
            r.restarts.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the summary and per-run CSV files.
pub fn emit_csv(
    rows: &[SummaryRow],
    records: &[RunRecord],
    summary_path: impl AsRef<Path>,
    runs_path: impl AsRef<Path>,
) -> Result<(), BenchError> {
    write_summary_csv(std::fs::File::create(summary_path)?, rows)?;
    write_runs_csv(std::fs::File::create(runs_path)?, records)
}

/// Partition file: a `# conductance` header, then one `label side` line per
/// vertex with side 1 for members of `S`.
pub fn write_partition<W: Write>(
    mut writer: W,
    graph: &Graph,
    membership: &[bool],
) -> io::Result<()> {
    writeln!(
        writer,
        "# conductance {}",
        conductance_of(graph, membership).to_decimal()
    )?;
    for (v, &inside) in membership.iter().enumerate() {
        writeln!(writer, "{} {}", graph.label(v), u8::from(inside))?;
    }
    writer.flush()
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyEntry {
    pub algorithm: Algorithm,
    pub phi: Conductance,
    pub reached_optimum: bool,
    /// Reported value below the exhaustive optimum, or not matching its own
    /// membership.
    pub violation: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub optimum: Conductance,
    pub witness: Vec<bool>,
    pub entries: Vec<VerifyEntry>,
}

impl VerifyReport {
    pub fn has_violation(&self) -> bool {
        self.entries.iter().any(|e| e.violation)
    }

    pub fn all_reached(&self) -> bool {
        self.entries.iter().all(|e| e.reached_optimum)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "optimum {}", self.optimum.to_decimal())?;
        for e in &self.entries {
            let status = if e.violation {
                "VIOLATION"
            } else if e.reached_optimum {
                "optimal"
            } else {
                "suboptimal"
            };
            writeln!(
                f,
                "{:<8} {} {}",
                e.algorithm.name(),
                e.phi.to_decimal(),
                status
            )?;
        }
        Ok(())
    }
}

/// Default short budget used by [`verify_small`].
pub fn verify_budget(seed: u64) -> Budget {
    Budget::evaluations(200_000, seed).with_stagnation_limit(10_000)
}

/// Parameters used by [`verify_small`]: small-graph scale for `l`.
pub fn verify_params() -> AlgorithmParams {
    AlgorithmParams {
        ls_length: 10_000,
        ..AlgorithmParams::default()
    }
}

/// Computes the exact optimum, then runs every algorithm once under
/// `budget` and compares.
pub fn verify_small(
    graph: &Graph,
    params: &AlgorithmParams,
    budget: &Budget,
) -> Result<VerifyReport, BenchError> {
    let (optimum, witness) = brute_force_min_conductance(graph)?;
    let entries = Algorithm::ALL
        .into_iter()
        .map(|algorithm| {
            let r = run_algorithm(graph, algorithm, params, budget);
            let consistent = conductance_of(graph, &r.membership) == r.phi;
            VerifyEntry {
                algorithm,
                phi: r.phi,
                reached_optimum: r.phi == optimum,
                violation: r.phi < optimum || !consistent,
            }
        })
        .collect();
    Ok(VerifyReport {
        optimum,
        witness,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(run: usize, cut: u64, vol: u64) -> RunRecord {
        RunRecord {
            run,
            seed: run as u64,
            phi: Conductance::new(cut, vol),
            membership: vec![],
            elapsed: Duration::from_millis(3),
            evaluations: 10,
            restarts: 0,
            seeding_overran: false,
        }
    }

    fn barbell() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("ga".parse::<Algorithm>().is_err());
    }

    #[test]
    fn aggregate_example() {
        let rows = [record(0, 1, 7), record(1, 1, 7), record(2, 2, 4)];
        let s = aggregate_stats("g", "ls1", &rows).unwrap();
        assert_eq!(s.min_phi, Conductance::new(1, 7));
        assert_eq!(s.success, 2);
        assert_eq!(s.runs, 3);
        // (1/7 + 1/7 + 1/2) / 3 = 11/42
        assert_eq!(s.mean_phi, BigRational::new(11.into(), 42.into()));
        assert_eq!(s.mean_decimal(), "0.26190476");
    }

    #[test]
    fn aggregate_single_and_equal() {
        let s = aggregate_stats("g", "ls1", &[record(0, 10, 78)]).unwrap();
        assert_eq!((s.success, s.runs), (1, 1));
        assert_eq!(s.mean_decimal(), s.min_phi.to_decimal());
        let all = [record(0, 1, 7), record(1, 2, 14), record(2, 3, 21)];
        let s = aggregate_stats("g", "ls1", &all).unwrap();
        assert_eq!(s.success, 3);
        assert_eq!(s.mean_decimal(), "0.14285714");
        assert!(matches!(
            aggregate_stats("g", "ls1", &[]),
            Err(BenchError::EmptyRecords)
        ));
    }

    #[test]
    fn rational_rounding() {
        let r = |a: i64, b: i64| rational_to_decimal(&BigRational::new(a.into(), b.into()));
        assert_eq!(r(1, 1), "1.00000000");
        assert_eq!(r(10, 78), "0.12820513");
        assert_eq!(r(1, 200_000_000), "0.00000001");
        assert_eq!(r(0, 5), "0.00000000");
    }

    #[test]
    fn csv_format() {
        let rows = [SummaryRow {
            graph: "zachary".into(),
            algorithm: "sts-ama".into(),
            min_phi: Conductance::new(10, 78),
            mean_phi: BigRational::new(10.into(), 78.into()),
            success: 100,
            runs: 100,
        }];
        let mut out = Vec::new();
        write_summary_csv(&mut out, &rows).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "graph,algorithm,min_phi,mean_phi,success,runs\nzachary,sts-ama,0.12820513,0.12820513,100,100\n"
        );
        let mut out = Vec::new();
        write_summary_csv(&mut out, &[]).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "graph,algorithm,min_phi,mean_phi,success,runs\n"
        );
        let mut out = Vec::new();
        write_runs_csv(&mut out, &[record(0, 1, 1)]).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "run,seed,phi,elapsed_ms,evaluations,restarts\n0,0,1.00000000,3,10,0\n"
        );
    }

    #[test]
    fn partition_file() {
        let g = barbell();
        let mut out = Vec::new();
        write_partition(&mut out, &g, &[false, false, false, true, true, true]).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# conductance 0.14285714"));
        assert_eq!(lines.next(), Some("0 0"));
        assert_eq!(text.lines().count(), 7);
    }

    #[test]
    fn experiment_is_deterministic_across_thread_counts() {
        let g = barbell();
        for algorithm in Algorithm::ALL {
            let mut cfg =
                ExperimentConfig::new("barbell", algorithm, 4, BudgetMode::Iterations(3_000));
            cfg.base_seed = 17;
            cfg.params.population_size = 10;
            cfg.params.ls_length = 200;
            cfg.threads = Some(1);
            let (a, sa) = run_experiment(&g, &cfg).unwrap();
            cfg.threads = Some(3);
            let (b, sb) = run_experiment(&g, &cfg).unwrap();
            assert_eq!(sa, sb);
            assert_eq!(
                a.iter().map(|r| r.seed).collect::<Vec<_>>(),
                vec![17, 18, 19, 20]
            );
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(
                    (x.phi, &x.membership, x.evaluations),
                    (y.phi, &y.membership, y.evaluations)
                );
            }
        }
    }

    #[test]
    fn invalid_configs() {
        let g = barbell();
        let mut cfg = ExperimentConfig::new("b", Algorithm::Ls1, 0, BudgetMode::Iterations(10));
        assert!(matches!(
            run_experiment(&g, &cfg),
            Err(BenchError::InvalidConfig(_))
        ));
        cfg.runs = 1;
        cfg.params.tournament_size = 0;
        assert!(matches!(
            run_experiment(&g, &cfg),
            Err(BenchError::InvalidConfig(_))
        ));
    }

    #[test]
    fn verify_barbell_and_k4() {
        let g = barbell();
        let report = verify_small(&g, &verify_params(), &verify_budget(0)).unwrap();
        assert_eq!(report.optimum, Conductance::new(1, 7));
        assert!(!report.has_violation());
        assert!(report.all_reached(), "{report}");
        let edges: Vec<_> = (0..4)
            .flat_map(|u| (u + 1..4).map(move |v| (u, v)))
            .collect();
        let k4 = Graph::from_edges(4, &edges).unwrap();
        let report = verify_small(&k4, &verify_params(), &verify_budget(0)).unwrap();
        assert_eq!(report.optimum, Conductance::new(2, 3));
        assert!(report.all_reached(), "{report}");
    }
}
