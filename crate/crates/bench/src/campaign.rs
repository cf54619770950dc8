//! Running a grid of independent solves.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tr1da::problems::{by_name, catalog};
use tr1da::solver::{solve, IterationRecord, RecomputeRule, SolveResult, SolverConfig, Variant};
use tr1da::Problem;

use crate::error::{BenchError, Result};

pub const DEFAULT_EPSILONS: [f64; 3] = [1e-3, 1e-5, 1e-7];
pub const DEFAULT_REPLICATES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemFilter {
    All,
    Names(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Markdown,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "md" | "markdown" => Ok(Format::Markdown),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(BenchError::Usage(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub variants: Vec<Variant>,
    pub epsilons: Vec<f64>,
    pub replicates: usize,
    pub problems: ProblemFilter,
    pub seed_base: u64,
    pub format: Format,
    /// Worker threads; `None` uses rayon's default.
    pub workers: Option<usize>,
    pub trace: bool,
    pub recompute: RecomputeRule,
}

impl Default for CampaignSpec {
    fn default() -> Self {
        Self {
            variants: Variant::ALL.to_vec(),
            epsilons: DEFAULT_EPSILONS.to_vec(),
            replicates: DEFAULT_REPLICATES,
            problems: ProblemFilter::All,
            seed_base: 42,
            format: Format::Markdown,
            workers: None,
            trace: false,
            recompute: RecomputeRule::Achieved,
        }
    }
}

impl CampaignSpec {
    pub fn validate(&self) -> Result<()> {
        if self.variants.is_empty() {
            return Err(BenchError::Usage("no variants selected".into()));
        }
        if self.epsilons.is_empty() {
            return Err(BenchError::Usage("no tolerances selected".into()));
        }
        if let Some(bad) = self.epsilons.iter().find(|e| !(**e > 0.0 && **e <= 1.0)) {
            return Err(BenchError::Usage(format!("tolerance {bad} is outside (0, 1]")));
        }
        if self.replicates == 0 {
            return Err(BenchError::Usage("replicates must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(BenchError::Usage("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Resolves the problem filter, failing on the first unknown name.
    pub fn resolve_problems(&self) -> Result<Vec<Problem>> {
        match &self.problems {
            ProblemFilter::All => Ok(catalog()),
            ProblemFilter::Names(names) => {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                for name in names {
                    if !seen.insert(name.as_str()) {
                        continue;
                    }
                    out.push(by_name(name).map_err(|_| {
                        BenchError::Usage(format!("unknown problem '{name}'"))
                    })?);
                }
                if out.is_empty() {
                    return Err(BenchError::Usage("no problems selected".into()));
                }
                Ok(out)
            }
        }
    }
}

/// Seed for one run. Depends only on its own coordinates, so adding or
/// removing other runs never changes it.
pub fn derive_seed(seed_base: u64, problem: &str, variant: Variant, epsilon: f64, replicate: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(seed_base.to_le_bytes());
    h.update((problem.len() as u64).to_le_bytes());
    h.update(problem.as_bytes());
    h.update(variant.as_str().as_bytes());
    h.update([0u8]);
    h.update(epsilon.to_bits().to_le_bytes());
    h.update((replicate as u64).to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// One solve with its coordinates in the campaign grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: String,
    pub dim: usize,
    pub variant: Variant,
    pub epsilon: f64,
    pub replicate: usize,
    pub seed: u64,
    pub success: bool,
    pub result: SolveResult,
}

/// One trace line: the run's coordinates plus one iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceLine {
    pub problem: String,
    pub variant: Variant,
    pub epsilon: f64,
    pub replicate: usize,
    #[serde(flatten)]
    pub record: IterationRecord,
}

struct Job<'a> {
    problem: &'a Problem,
    variant: Variant,
    epsilon: f64,
    replicate: usize,
}

/// Runs every (ε, variant, problem, replicate) combination. Records come
/// back in that lexicographic order regardless of scheduling.
pub fn run_campaign(spec: &CampaignSpec) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let problems = spec.resolve_problems()?;
    let mut configs = Vec::new();
    for &epsilon in &spec.epsilons {
        for &variant in &spec.variants {
            let mut c = SolverConfig::new(variant, epsilon)?.with_trace(spec.trace);
            c.recompute = spec.recompute;
            configs.push(c);
        }
    }
    let mut jobs = Vec::new();
    for &epsilon in &spec.epsilons {
        for &variant in &spec.variants {
            for problem in &problems {
                for replicate in 0..spec.replicates {
                    jobs.push(Job {
                        problem,
                        variant,
                        epsilon,
                        replicate,
                    });
                }
            }
        }
    }

    let run = |job: &Job<'_>| -> Result<RunRecord> {
        let config = configs
            .iter()
            .find(|c| c.variant == job.variant && c.epsilon == job.epsilon)
            .expect("config built for every pair");
        let seed = derive_seed(spec.seed_base, job.problem.name(), job.variant, job.epsilon, job.replicate);
        let result = solve(job.problem, config, seed)?;
        Ok(RunRecord {
            problem: job.problem.name().to_string(),
            dim: job.problem.dim(),
            variant: job.variant,
            epsilon: job.epsilon,
            replicate: job.replicate,
            seed,
            success: result.succeeded(job.epsilon),
            result,
        })
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers.unwrap_or(0))
        .build()
        .map_err(|e| BenchError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| jobs.par_iter().map(run).collect())
}

/// Flattens the traces of `records` into trace lines.
pub fn trace_lines(records: &[RunRecord]) -> impl Iterator<Item = TraceLine> + '_ {
    records.iter().flat_map(|r| {
        r.result.trace.iter().map(move |t| TraceLine {
            problem: r.problem.clone(),
            variant: r.variant,
            epsilon: r.epsilon,
            replicate: r.replicate,
            record: t.clone(),
        })
    })
}
