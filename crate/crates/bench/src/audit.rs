//! Checks of the convergence theory against recorded iteration traces.
//!
//! Hard checks (a failure fails the audit):
//! - the exact objective never increases along accepted iterates, for the
//!   exact and dynamic-accuracy variants;
//! - iterations split exactly into successful and unsuccessful ones, and
//!   `accepted ⇔ ρ ≥ η₁`;
//! - the split obeys `k ≤ |S|(1 − ln γ₃/ln γ₂) + ln(Δ₀/Δ_k)/|ln γ₂|` with the
//!   recorded radii.
//!
//! Informational checks use estimated constants (`κ_H` from the Hessian
//! model's norm bounds, `κ_∇` from finite-difference Hessians, `κ_low` the
//! smallest objective seen): the radius floor `min(Δ₀, θε)` and the
//! complexity bounds on successful and total iterations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use tr1da::problems::by_name;
use tr1da::solver::{split_bound_holds, update_radius, IterationRecord, SolverConfig, Variant};

use crate::campaign::{RunRecord, TraceLine};
use crate::error::{BenchError, Result};

/// Largest dimension for which finite-difference Hessians are formed.
pub const FD_HESSIAN_MAX_DIM: usize = 12;

/// The iteration trace of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub problem: String,
    pub variant: Variant,
    pub epsilon: f64,
    pub replicate: usize,
    pub records: Vec<IterationRecord>,
}

/// Groups trace lines by run, ordering each run's records by iteration.
pub fn group_trace_lines(lines: impl IntoIterator<Item = TraceLine>) -> Vec<RunTrace> {
    let mut runs: BTreeMap<(String, Variant, u64, usize), Vec<IterationRecord>> = BTreeMap::new();
    for line in lines {
        runs.entry((line.problem, line.variant, line.epsilon.to_bits(), line.replicate))
            .or_default()
            .push(line.record);
    }
    runs.into_iter()
        .map(|((problem, variant, eps, replicate), mut records)| {
            records.sort_by_key(|r| r.k);
            RunTrace {
                problem,
                variant,
                epsilon: f64::from_bits(eps),
                replicate,
                records,
            }
        })
        .collect()
}

pub fn traces_from_records(records: &[RunRecord]) -> Vec<RunTrace> {
    records
        .iter()
        .filter(|r| !r.result.trace.is_empty())
        .map(|r| RunTrace {
            problem: r.problem.clone(),
            variant: r.variant,
            epsilon: r.epsilon,
            replicate: r.replicate,
            records: r.result.trace.clone(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub checked: u64,
    pub held: u64,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if ok {
            self.held += 1;
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub runs: u64,
    pub monotone_steps_checked: u64,
    pub monotone_violations: u64,
    pub partition_violations: u64,
    pub acceptance_flag_violations: u64,
    pub split_checks: u64,
    pub split_violations: u64,
    /// Runs whose smallest radius stayed above `min(Δ₀, θε)`.
    pub radius_floor: Tally,
    /// Runs with `|S| ≤ τ_S` and `k ≤ τ_tot`.
    pub iteration_budget: Tally,
    /// First few failing runs, for the report.
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.monotone_violations == 0
            && self.partition_violations == 0
            && self.acceptance_flag_violations == 0
            && self.split_violations == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "runs audited: {}\n\
             monotonicity: {} violations over {} accepted steps\n\
             partition identity: {} violations\n\
             acceptance flags: {} violations\n\
             iteration split: {} violations over {} prefixes\n\
             radius floor (informational): {}/{} runs\n\
             iteration budget (informational): {}/{} runs\n\
             result: {}\n",
            self.runs,
            self.monotone_violations,
            self.monotone_steps_checked,
            self.partition_violations,
            self.acceptance_flag_violations,
            self.split_violations,
            self.split_checks,
            self.radius_floor.held,
            self.radius_floor.checked,
            self.iteration_budget.held,
            self.iteration_budget.checked,
            if self.passed() { "PASS" } else { "FAIL" },
        )
    }
}

const MAX_LISTED_FAILURES: usize = 20;

/// Central-difference Hessian; returns its Frobenius norm, an upper bound on
/// the spectral norm.
fn fd_hessian_norm(problem: &tr1da::Problem, x: &[f64]) -> Option<f64> {
    let n = x.len();
    let mut sum = 0.0;
    let mut xp = x.to_vec();
    for j in 0..n {
        let h = 1e-5 * x[j].abs().max(1.0);
        xp[j] = x[j] + h;
        let gp = problem.exact_g(&xp).ok()?;
        xp[j] = x[j] - h;
        let gm = problem.exact_g(&xp).ok()?;
        xp[j] = x[j];
        for i in 0..n {
            let d = (gp[i] - gm[i]) / (2.0 * h);
            sum += d * d;
        }
    }
    let v = sum.sqrt();
    v.is_finite().then_some(v)
}

pub fn audit_runs(runs: &[RunTrace]) -> Result<AuditReport> {
    if runs.is_empty() {
        return Err(BenchError::Usage("no traces to audit".into()));
    }
    let mut report = AuditReport::default();
    for run in runs {
        report.runs += 1;
        let config = SolverConfig::new(run.variant, run.epsilon)?;
        let fail = |report: &mut AuditReport, what: &str| {
            if report.failures.len() < MAX_LISTED_FAILURES {
                report.failures.push(format!(
                    "{} {} eps={:e} rep={}: {what}",
                    run.problem, run.variant, run.epsilon, run.replicate
                ));
            }
        };

        let recs = &run.records;
        let k_ok = recs.iter().enumerate().all(|(i, r)| r.k == i);
        let n_succ = recs.iter().filter(|r| r.accepted).count();
        let n_unsucc = recs.iter().filter(|r| !r.accepted).count();
        if !k_ok || n_succ + n_unsucc != recs.len() {
            report.partition_violations += 1;
            fail(&mut report, "iteration indices do not partition");
        }
        let flags_bad = recs.iter().filter(|r| r.accepted != (r.rho >= config.eta1)).count();
        if flags_bad > 0 {
            report.acceptance_flag_violations += flags_bad as u64;
            fail(&mut report, "accepted flag disagrees with rho");
        }

        if run.variant.forced_level().is_none() {
            for r in recs.iter().filter(|r| r.accepted) {
                report.monotone_steps_checked += 1;
                if r.exact_f_trial.map_or(true, |ft| ft > r.exact_f) {
                    report.monotone_violations += 1;
                    fail(&mut report, &format!("exact f increased at k={}", r.k));
                }
            }
        }

        let mut successes = 0;
        let mut min_delta = config.delta0;
        for (i, r) in recs.iter().enumerate() {
            successes += usize::from(r.accepted);
            let next_delta = recs
                .get(i + 1)
                .map_or_else(|| update_radius(&config, r.rho, r.delta), |n| n.delta);
            min_delta = min_delta.min(r.delta).min(next_delta);
            report.split_checks += 1;
            if !split_bound_holds(i + 1, successes, config.delta0, next_delta, config.gamma2, config.gamma3) {
                report.split_violations += 1;
                fail(&mut report, &format!("split bound fails after {} iterations", i + 1));
            }
        }

        // Informational bounds with estimated constants.
        let Ok(problem) = by_name(&run.problem) else {
            continue;
        };
        if problem.dim() > FD_HESSIAN_MAX_DIM || recs.is_empty() {
            continue;
        }
        let kappa_h = recs.iter().map(|r| r.h_norm_lb).fold(0.0, f64::max);
        let mut kappa_grad = 0.0f64;
        let mut kappa_low = f64::INFINITY;
        for r in recs {
            if let Some(h) = fd_hessian_norm(&problem, &r.x) {
                kappa_grad = kappa_grad.max(h);
            }
            kappa_low = kappa_low.min(r.exact_f);
            if let Some(ft) = r.exact_f_trial {
                kappa_low = kappa_low.min(ft);
            }
        }
        let kappa_hg = 1.0 + kappa_h.max(kappa_grad);
        let c = &config;
        let theta = c.gamma1 * (0.5 * (1.0 - c.eta1) - c.eta0 - c.kappa_g) / (kappa_hg * (1.0 + c.kappa_g));
        let floor = c.delta0.min(theta * c.epsilon);
        report.radius_floor.record(min_delta >= floor);

        let f0 = recs[0].exact_f;
        let tau_s = 2.0 * (f0 - kappa_low) * (1.0 + c.kappa_g)
            / ((c.eta1 - 2.0 * c.eta0) * theta)
            / (c.epsilon * c.epsilon);
        let l2 = c.gamma2.ln();
        let tau_tot = tau_s * (1.0 - c.gamma3.ln() / l2) + (c.delta0 / (theta * c.epsilon)).ln() / l2.abs();
        report
            .iteration_budget
            .record(n_succ as f64 <= tau_s && recs.len() as f64 <= tau_tot);
    }
    Ok(report)
}
