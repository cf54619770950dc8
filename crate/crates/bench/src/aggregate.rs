//! Reduction of run records to one table row per (ε, variant).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use tr1da::Variant;

use crate::campaign::RunRecord;
use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub epsilon: f64,
    pub variant: Variant,
    /// Problems where at least half of the replicates succeeded.
    pub nsucc: usize,
    /// Problems attempted.
    pub nprob: usize,
    pub mean_its: f64,
    pub mean_costf: f64,
    pub mean_costg: f64,
    pub rel_its: Option<f64>,
    pub rel_costf: Option<f64>,
    pub rel_costg: Option<f64>,
}

impl AggregateRow {
    pub fn success_fraction(&self) -> f64 {
        self.nsucc as f64 / self.nprob as f64
    }
}

/// Per-problem means over successful replicates.
#[derive(Debug, Clone, Copy, Default)]
struct ProblemStats {
    runs: usize,
    successes: usize,
    its: f64,
    costf: f64,
    costg: f64,
}

impl ProblemStats {
    fn solved(&self) -> bool {
        2 * self.successes >= self.runs
    }
}

type Key = (u64, Variant);

fn eps_key(epsilon: f64) -> u64 {
    epsilon.to_bits()
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Builds the result table. Rows are ordered by decreasing ε (loosest
/// first), then by variant. Ratios compare with the LMQN row at the same ε
/// over problems solved by both; they are absent on the LMQN row and when no
/// LMQN records exist.
pub fn aggregate(records: &[RunRecord]) -> Result<Vec<AggregateRow>> {
    if records.is_empty() {
        return Err(BenchError::Usage("no run records to aggregate".into()));
    }
    // Sums are accumulated in sorted replicate order so the result does not
    // depend on the input order.
    let mut grouped: BTreeMap<Key, BTreeMap<&str, Vec<&RunRecord>>> = BTreeMap::new();
    for r in records {
        grouped
            .entry((eps_key(r.epsilon), r.variant))
            .or_default()
            .entry(r.problem.as_str())
            .or_default()
            .push(r);
    }
    let mut stats: BTreeMap<Key, BTreeMap<&str, ProblemStats>> = BTreeMap::new();
    for (key, problems) in &grouped {
        let entry = stats.entry(*key).or_default();
        for (name, runs) in problems {
            let mut runs = runs.clone();
            runs.sort_by_key(|r| (r.replicate, r.seed));
            let ok: Vec<_> = runs.iter().filter(|r| r.success).collect();
            entry.insert(
                name,
                ProblemStats {
                    runs: runs.len(),
                    successes: ok.len(),
                    its: mean(ok.iter().map(|r| r.result.iterations as f64)),
                    costf: mean(ok.iter().map(|r| r.result.ledger.cost_f())),
                    costg: mean(ok.iter().map(|r| r.result.ledger.cost_g())),
                },
            );
        }
    }

    let mut rows = Vec::new();
    for (&(ek, variant), problems) in &stats {
        let solved: Vec<&ProblemStats> = problems.values().filter(|s| s.solved()).collect();
        let baseline = stats.get(&(ek, Variant::Lmqn));
        let (rel_its, rel_costf, rel_costg) = match baseline {
            Some(base) if variant != Variant::Lmqn => {
                let both: Vec<(&ProblemStats, &ProblemStats)> = problems
                    .iter()
                    .filter_map(|(name, s)| {
                        let b = base.get(name)?;
                        (s.solved() && b.solved()).then_some((s, b))
                    })
                    .collect();
                if both.is_empty() {
                    (None, None, None)
                } else {
                    let ratio = |f: fn(&ProblemStats) -> f64| {
                        mean(both.iter().map(|(s, _)| f(s))) / mean(both.iter().map(|(_, b)| f(b)))
                    };
                    (
                        Some(ratio(|s| s.its)),
                        Some(ratio(|s| s.costf)),
                        Some(ratio(|s| s.costg)),
                    )
                }
            }
            _ => (None, None, None),
        };
        rows.push(AggregateRow {
            epsilon: f64::from_bits(ek),
            variant,
            nsucc: solved.len(),
            nprob: problems.len(),
            mean_its: mean(solved.iter().map(|s| s.its)),
            mean_costf: mean(solved.iter().map(|s| s.costf)),
            mean_costg: mean(solved.iter().map(|s| s.costg)),
            rel_its,
            rel_costf,
            rel_costg,
        });
    }
    rows.sort_by(|a, b| {
        b.epsilon
            .total_cmp(&a.epsilon)
            .then_with(|| a.variant.cmp(&b.variant))
    });
    Ok(rows)
}

/// Looks up the row for `(epsilon, variant)`.
pub fn find_row(rows: &[AggregateRow], epsilon: f64, variant: Variant) -> Option<&AggregateRow> {
    rows.iter().find(|r| r.epsilon == epsilon && r.variant == variant)
}
