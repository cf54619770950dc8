//! The dynamic-accuracy trust-region loop and the five benchmark variants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{add, norm, sub};
use crate::lsr1::{HessianModel, Lsr1State, DEFAULT_MEMORY, DEFAULT_SKIP_TOL};
use crate::oracle::{ContractTally, EnergyLedger, FEval, GEval, Oracle, PrecisionLevel};
use crate::problems::Problem;
use crate::subproblem::solve_tr;

/// Accuracy policy of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// Exact evaluations throughout.
    #[serde(rename = "lmqn")]
    Lmqn,
    /// Every evaluation in single precision.
    #[serde(rename = "lmqn-s")]
    LmqnS,
    /// Every evaluation in half precision.
    #[serde(rename = "lmqn-h")]
    LmqnH,
    /// Dynamic accuracy with `ω_g = κ_g/2`.
    #[serde(rename = "ilmqn-a")]
    IlmqnA,
    /// Dynamic accuracy with `ω_g = min(κ_g, ω_f)`.
    #[serde(rename = "ilmqn-b")]
    IlmqnB,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Lmqn,
        Variant::LmqnS,
        Variant::LmqnH,
        Variant::IlmqnA,
        Variant::IlmqnB,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Lmqn => "lmqn",
            Variant::LmqnS => "lmqn-s",
            Variant::LmqnH => "lmqn-h",
            Variant::IlmqnA => "ilmqn-a",
            Variant::IlmqnB => "ilmqn-b",
        }
    }

    /// Display label used in result tables.
    pub fn label(self) -> &'static str {
        match self {
            Variant::Lmqn => "LMQN",
            Variant::LmqnS => "LMQN-s",
            Variant::LmqnH => "LMQN-h",
            Variant::IlmqnA => "iLMQN-a",
            Variant::IlmqnB => "iLMQN-b",
        }
    }

    /// The fixed tier of the forced-precision variants.
    pub fn forced_level(self) -> Option<PrecisionLevel> {
        match self {
            Variant::LmqnS => Some(PrecisionLevel::Single),
            Variant::LmqnH => Some(PrecisionLevel::Half),
            _ => None,
        }
    }

    pub fn is_dynamic(self) -> bool {
        matches!(self, Variant::IlmqnA | Variant::IlmqnB)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown variant '{s}'")))
    }
}

/// When the objective at the current iterate is re-evaluated before the
/// acceptance test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecomputeRule {
    /// Whenever `ω⁺_f < ω_f`.
    Requested,
    /// Only when `ω⁺_f` is below the accuracy the stored value actually has
    /// (the tier's perturbation bound).
    Achieved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub eta0: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub kappa_g: f64,
    pub delta0: f64,
    pub epsilon: f64,
    pub max_iters: usize,
    pub omega_f0: f64,
    pub variant: Variant,
    pub shrink_factor: f64,
    pub grow_factor: f64,
    pub midrange_factor: f64,
    pub recompute: RecomputeRule,
    pub lsr1_memory: usize,
    pub lsr1_skip_tol: f64,
    /// Keep an `IterationRecord` per iteration.
    pub record_trace: bool,
}

impl SolverConfig {
    /// Default constants for `variant` at tolerance `epsilon`, validated.
    pub fn new(variant: Variant, epsilon: f64) -> Result<Self> {
        let config = Self {
            eta0: 0.01,
            eta1: 0.05,
            eta2: 0.75,
            gamma1: 0.25,
            gamma2: 0.5,
            gamma3: 2.5,
            kappa_g: 0.1,
            delta0: 1.0,
            epsilon,
            max_iters: 1000,
            omega_f0: if variant.is_dynamic() { 0.01 } else { 0.0 },
            variant,
            shrink_factor: 0.5,
            grow_factor: 2.0,
            midrange_factor: 0.75,
            recompute: RecomputeRule::Achieved,
            lsr1_memory: DEFAULT_MEMORY,
            lsr1_skip_tol: DEFAULT_SKIP_TOL,
            record_trace: false,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_trace(mut self, on: bool) -> Self {
        self.record_trace = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        let finite = [
            self.eta0,
            self.eta1,
            self.eta2,
            self.gamma1,
            self.gamma2,
            self.gamma3,
            self.kappa_g,
            self.delta0,
            self.epsilon,
            self.omega_f0,
            self.shrink_factor,
            self.grow_factor,
            self.midrange_factor,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return fail("constants must be finite");
        }
        if !(0.0 < self.eta1 && self.eta1 <= self.eta2 && self.eta2 < 1.0) {
            return fail("need 0 < eta1 <= eta2 < 1");
        }
        if !(0.0 < self.gamma1
            && self.gamma1 <= self.gamma2
            && self.gamma2 < 1.0
            && 1.0 <= self.gamma3)
        {
            return fail("need 0 < gamma1 <= gamma2 < 1 <= gamma3");
        }
        if !(0.0 < self.eta0 && self.eta0 < 0.5 * self.eta1) {
            return fail("need 0 < eta0 < eta1/2");
        }
        if !(self.kappa_g > 0.0 && self.eta0 + self.kappa_g < 0.5 * (1.0 - self.eta2)) {
            return fail("need kappa_g > 0 and eta0 + kappa_g < (1 - eta2)/2");
        }
        if !(1.0 <= self.grow_factor && self.grow_factor < self.gamma3) {
            return fail("grow_factor must lie in [1, gamma3)");
        }
        if !(self.gamma2 <= self.midrange_factor && self.midrange_factor < 1.0) {
            return fail("midrange_factor must lie in [gamma2, 1)");
        }
        if !(self.gamma1 <= self.shrink_factor && self.shrink_factor <= self.gamma2) {
            return fail("shrink_factor must lie in [gamma1, gamma2]");
        }
        if !(self.delta0 > 0.0) {
            return fail("delta0 must be positive");
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return fail("epsilon must lie in (0, 1]");
        }
        if self.max_iters == 0 {
            return fail("max_iters must be positive");
        }
        if self.omega_f0 < 0.0 {
            return fail("omega_f0 must be nonnegative");
        }
        if self.lsr1_memory == 0 || !(self.lsr1_skip_tol >= 0.0) {
            return fail("invalid limited-memory options");
        }
        Ok(())
    }
}

/// Gradient accuracy requested at a new iterate. Zero means exact.
pub fn policy_omega_g(variant: Variant, config: &SolverConfig, omega_f: f64) -> f64 {
    match variant {
        Variant::IlmqnA => 0.5 * config.kappa_g,
        Variant::IlmqnB => config.kappa_g.min(omega_f),
        Variant::Lmqn | Variant::LmqnS | Variant::LmqnH => 0.0,
    }
}

/// Objective accuracy `ω⁺_f` requested at the trial point for a model decrease `pred`.
pub fn policy_omega_f(variant: Variant, config: &SolverConfig, pred: f64) -> f64 {
    match variant {
        Variant::IlmqnA | Variant::IlmqnB => 0.1f64.min(0.04 * config.eta1 * pred),
        Variant::Lmqn | Variant::LmqnS | Variant::LmqnH => 0.0,
    }
}

pub fn update_radius(config: &SolverConfig, rho: f64, delta: f64) -> f64 {
    if rho >= config.eta2 {
        config.grow_factor * delta
    } else if rho >= config.eta1 {
        config.midrange_factor * delta
    } else {
        config.shrink_factor * delta
    }
}

pub fn check_termination(gbar_norm: f64, config: &SolverConfig) -> bool {
    gbar_norm <= config.epsilon / (1.0 + config.kappa_g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Converged,
    IterLimit,
    EvalError,
}

/// Which oracle call a tier was used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CallKind {
    Gradient,
    TrialObjective,
    Recompute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TierUse {
    pub call: CallKind,
    pub level: PrecisionLevel,
}

/// JSON has no infinities: a rejected step's `ρ = −∞` and an unbounded final
/// gradient norm are written as `null` and read back as the infinity.
mod null_as_infinity {
    use serde::{Deserialize, Deserializer, Serializer};

    fn write<S: Serializer>(v: f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(v)
        } else {
            s.serialize_none()
        }
    }

    pub mod negative {
        use super::*;

        pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
            write(*v, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
            Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
        }
    }

    pub mod positive {
        use super::*;

        pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
            write(*v, s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
            Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub x: Vec<f64>,
    pub delta: f64,
    pub omega_f: f64,
    pub omega_g: f64,
    pub gbar_norm: f64,
    pub pred: f64,
    #[serde(with = "null_as_infinity::negative")]
    pub rho: f64,
    pub accepted: bool,
    pub tiers_used: Vec<TierUse>,
    /// `f(x_k)` in double precision; not charged.
    pub exact_f: f64,
    /// `f(x_k + s_k)` in double precision, if it was finite.
    pub exact_f_trial: Option<f64>,
    pub h_norm_lb: f64,
}

/// Verification counters gathered during a run from the zero-cost exact channel.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunAudit {
    pub oracle: ContractTally,
    pub cauchy_checks: u64,
    pub cauchy_violations: u64,
    /// Accepted steps where the exact objective increased.
    pub monotone_violations: u64,
    /// Prefixes `0..=k` where the successful/unsuccessful split broke the
    /// radius-trajectory bound.
    pub split_checks: u64,
    pub split_violations: u64,
    /// Requested `ω⁺_f` above `η₀·pred`, or `ω_g` above `κ_g`.
    pub omega_violations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: Status,
    pub iterations: usize,
    pub n_successful: usize,
    pub ledger: EnergyLedger,
    pub x_final: Vec<f64>,
    #[serde(with = "null_as_infinity::positive")]
    pub exact_grad_norm_final: f64,
    pub delta_final: f64,
    pub audit: RunAudit,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<IterationRecord>,
}

impl SolveResult {
    /// Converged and the exact gradient meets the tolerance.
    pub fn succeeded(&self, epsilon: f64) -> bool {
        self.status == Status::Converged && self.exact_grad_norm_final <= epsilon
    }

    pub fn n_unsuccessful(&self) -> usize {
        self.iterations - self.n_successful
    }
}

/// Slack on the logarithmic split bound; covers rounding in `ln`.
const SPLIT_LOG_TOL: f64 = 1e-9;

/// Radius-trajectory form of the successful/unsuccessful split bound:
/// `k ≤ |S|(1 − ln γ₃/ln γ₂) + ln(Δ₀/Δ_k)/|ln γ₂|` where `k` iterations
/// have been completed and `Δ_k` is the radius after them.
pub fn split_bound_holds(
    iterations: usize,
    n_successful: usize,
    delta0: f64,
    delta_now: f64,
    gamma2: f64,
    gamma3: f64,
) -> bool {
    let l2 = gamma2.ln();
    let bound = n_successful as f64 * (1.0 - gamma3.ln() / l2) + (delta0 / delta_now).ln() / l2.abs();
    iterations as f64 <= bound + SPLIT_LOG_TOL * (1.0 + bound.abs())
}

struct Evaluator<'p> {
    oracle: Oracle<'p>,
    forced: Option<PrecisionLevel>,
}

impl Evaluator<'_> {
    fn f(&mut self, x: &[f64], omega: f64) -> Result<FEval> {
        match self.forced {
            Some(level) => self.oracle.f_bar_forced(x, level),
            None => self.oracle.f_bar(x, omega),
        }
    }

    fn g(&mut self, x: &[f64], omega: f64) -> Result<GEval> {
        match self.forced {
            Some(level) => self.oracle.g_bar_forced(x, level),
            None => self.oracle.g_bar(x, omega),
        }
    }
}

/// Runs the trust-region method from `problem.x0()`; `seed` drives the
/// oracle's noise stream.
pub fn solve(problem: &Problem, config: &SolverConfig, seed: u64) -> Result<SolveResult> {
    config.validate()?;
    let n = problem.dim();
    let variant = config.variant;
    let mut ev = Evaluator {
        oracle: Oracle::new(problem, seed),
        forced: variant.forced_level(),
    };
    let mut audit = RunAudit::default();
    let mut trace = Vec::new();
    let mut lsr1 = Lsr1State::with_options(n, config.lsr1_memory, config.lsr1_skip_tol, 1.0)?;

    let mut x = problem.x0().to_vec();
    let mut delta = config.delta0;
    let mut omega_f = config.omega_f0;
    let mut omega_g = 0.0;
    let mut k = 0usize;
    let mut n_successful = 0usize;

    let finish = |status: Status,
                  x: Vec<f64>,
                  k: usize,
                  n_successful: usize,
                  delta: f64,
                  ev: Evaluator<'_>,
                  mut audit: RunAudit,
                  trace: Vec<IterationRecord>| {
        audit.oracle = *ev.oracle.tally();
        let exact_grad_norm_final = problem
            .exact_g(&x)
            .map(|g| norm(&g))
            .unwrap_or(f64::INFINITY);
        let exact_grad_norm_final = if exact_grad_norm_final.is_finite() {
            exact_grad_norm_final
        } else {
            f64::INFINITY
        };
        SolveResult {
            status,
            iterations: k,
            n_successful,
            ledger: ev.oracle.ledger().clone(),
            x_final: x,
            exact_grad_norm_final,
            delta_final: delta,
            audit,
            trace,
        }
    };

    let mut fk = match ev.f(&x, omega_f) {
        Ok(e) => e,
        Err(_) => return Ok(finish(Status::EvalError, x, 0, 0, delta, ev, audit, trace)),
    };
    let mut gk: Option<GEval> = None;
    // Step taken on the previous iteration, when it was accepted.
    let mut last_step: Option<(Vec<f64>, Vec<f64>)> = None;

    loop {
        // Gradient at a new iterate, then the termination test.
        let mut tiers_used = Vec::new();
        if gk.is_none() {
            omega_g = policy_omega_g(variant, config, omega_f);
            if omega_g > config.kappa_g {
                audit.omega_violations += 1;
            }
            let g_new = match ev.g(&x, omega_g) {
                Ok(g) => g,
                Err(_) => {
                    return Ok(finish(Status::EvalError, x, k, n_successful, delta, ev, audit, trace))
                }
            };
            tiers_used.extend(g_new.attempts.iter().map(|&level| TierUse {
                call: CallKind::Gradient,
                level,
            }));
            gk = Some(g_new);
        }
        let g = gk.as_ref().expect("gradient evaluated above");
        if let Some((s, g_prev)) = last_step.take() {
            // Secant pair for the step accepted on the previous iteration.
            let y = sub(&g.grad, &g_prev);
            let _ = lsr1.update(&s, &y);
        }
        let gbar_norm = norm(&g.grad);
        if check_termination(gbar_norm, config) {
            return Ok(finish(Status::Converged, x, k, n_successful, delta, ev, audit, trace));
        }
        if k >= config.max_iters {
            return Ok(finish(Status::IterLimit, x, k, n_successful, delta, ev, audit, trace));
        }

        let step = solve_tr(&g.grad, &lsr1, delta)?;
        audit.cauchy_checks += 1;
        if !(step.pred >= step.cauchy_floor(gbar_norm, delta)) {
            audit.cauchy_violations += 1;
        }
        let pred = step.pred;
        let trial = add(&x, &step.s);

        let omega_plus = policy_omega_f(variant, config, pred);
        if variant.is_dynamic() && !(omega_plus > 0.0 && omega_plus <= config.eta0 * pred) {
            audit.omega_violations += 1;
        }
        let f_trial = ev.f(&trial, omega_plus);
        if let Ok(e) = &f_trial {
            tiers_used.push(TierUse {
                call: CallKind::TrialObjective,
                level: e.level,
            });
        }
        if ev.forced.is_none() {
            let stale = match config.recompute {
                RecomputeRule::Requested => omega_plus < omega_f,
                RecomputeRule::Achieved => omega_plus < fk.level.noise_halfwidth(),
            };
            if stale {
                match ev.f(&x, omega_plus) {
                    Ok(e) => {
                        tiers_used.push(TierUse {
                            call: CallKind::Recompute,
                            level: e.level,
                        });
                        fk = e;
                        omega_f = omega_plus;
                    }
                    Err(_) => {
                        return Ok(finish(Status::EvalError, x, k, n_successful, delta, ev, audit, trace))
                    }
                }
            }
        }

        let rho = match &f_trial {
            Ok(ft) if pred > 0.0 && pred.is_finite() => (fk.value - ft.value) / pred,
            _ => f64::NEG_INFINITY,
        };
        let rho = if rho.is_nan() { f64::NEG_INFINITY } else { rho };
        let accepted = rho >= config.eta1;

        if config.record_trace {
            trace.push(IterationRecord {
                k,
                x: x.clone(),
                delta,
                omega_f,
                omega_g,
                gbar_norm,
                pred,
                rho,
                accepted,
                tiers_used,
                exact_f: fk.exact,
                exact_f_trial: f_trial.as_ref().ok().map(|e| e.exact),
                h_norm_lb: step.h_norm_lb,
            });
        }

        if accepted {
            let ft = f_trial.expect("accepted trial has a value");
            if ft.exact > fk.exact {
                audit.monotone_violations += 1;
            }
            x = trial;
            fk = ft;
            omega_f = omega_plus;
            n_successful += 1;
            let g_prev = gk.take().expect("gradient present").grad;
            last_step = Some((step.s, g_prev));
        }

        delta = update_radius(config, rho, delta);
        k += 1;
        audit.split_checks += 1;
        if !split_bound_holds(k, n_successful, config.delta0, delta, config.gamma2, config.gamma3) {
            audit.split_violations += 1;
        }
        debug_assert_eq!(lsr1.dim(), n);
    }
}
