//! Simulated multi-precision evaluation of `f` and `∇f`.
//!
//! Reduced precision is modelled by perturbing the exact double-precision value
//! with uniform noise of the tier's half-width. Each evaluation is charged in
//! equivalent double-precision units, proportional to the squared number of
//! significant digits: double 1, single 1/4, half 1/16.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{all_finite, norm};
use crate::problems::Problem;

/// One of the three simulated arithmetic tiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionLevel {
    Half,
    Single,
    Double,
}

impl PrecisionLevel {
    /// Cheapest first.
    pub const ALL: [PrecisionLevel; 3] = [Self::Half, Self::Single, Self::Double];

    /// Half-width `u` of the uniform perturbation.
    pub fn noise_halfwidth(self) -> f64 {
        match self {
            Self::Double => 0.0,
            Self::Single => 1e-8,
            Self::Half => 1e-4,
        }
    }

    /// Cost in sixteenths of a double-precision evaluation.
    pub fn cost_sixteenths(self) -> u64 {
        match self {
            Self::Double => 16,
            Self::Single => 4,
            Self::Half => 1,
        }
    }

    /// Cost in equivalent double-precision units.
    pub fn cost(self) -> f64 {
        self.cost_sixteenths() as f64 / 16.0
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Cheapest tier whose perturbation cannot exceed `omega`.
    pub fn cheapest_within(omega: f64) -> Self {
        Self::ALL
            .into_iter()
            .find(|t| t.noise_halfwidth() <= omega)
            .unwrap_or(Self::Double)
    }
}

impl fmt::Display for PrecisionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Half => "half",
            Self::Single => "single",
            Self::Double => "double",
        };
        f.write_str(s)
    }
}

/// Evaluation counts per tier.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TierCounts {
    pub half: u64,
    pub single: u64,
    pub double: u64,
}

impl TierCounts {
    fn as_array(&self) -> [u64; 3] {
        [self.half, self.single, self.double]
    }

    fn bump(&mut self, level: PrecisionLevel) {
        match level {
            PrecisionLevel::Half => self.half += 1,
            PrecisionLevel::Single => self.single += 1,
            PrecisionLevel::Double => self.double += 1,
        }
    }

    pub fn get(&self, level: PrecisionLevel) -> u64 {
        self.as_array()[level.index()]
    }

    pub fn total(&self) -> u64 {
        self.half + self.single + self.double
    }

    fn sixteenths(&self) -> u64 {
        PrecisionLevel::ALL
            .into_iter()
            .map(|t| self.get(t) * t.cost_sixteenths())
            .sum()
    }
}

/// Accumulated equivalent double-precision evaluation costs.
///
/// Costs are kept as integer tier counts, so the totals are exact rationals
/// with denominator 16.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnergyLedger {
    f_counts: TierCounts,
    g_counts: TierCounts,
}

impl EnergyLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge_f(&mut self, level: PrecisionLevel) {
        self.f_counts.bump(level);
    }

    pub fn charge_g(&mut self, level: PrecisionLevel) {
        self.g_counts.bump(level);
    }

    pub fn cost_f(&self) -> f64 {
        self.f_counts.sixteenths() as f64 / 16.0
    }

    pub fn cost_g(&self) -> f64 {
        self.g_counts.sixteenths() as f64 / 16.0
    }

    pub fn f_counts(&self) -> &TierCounts {
        &self.f_counts
    }

    pub fn g_counts(&self) -> &TierCounts {
        &self.g_counts
    }
}

#[derive(Serialize, Deserialize)]
struct LedgerRecord {
    costf: f64,
    costg: f64,
    f_counts: TierCounts,
    g_counts: TierCounts,
}

impl Serialize for EnergyLedger {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LedgerRecord {
            costf: self.cost_f(),
            costg: self.cost_g(),
            f_counts: self.f_counts,
            g_counts: self.g_counts,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EnergyLedger {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = LedgerRecord::deserialize(d)?;
        Ok(Self {
            f_counts: rec.f_counts,
            g_counts: rec.g_counts,
        })
    }
}

/// Seeded source of the simulated rounding perturbations.
#[derive(Debug, Clone)]
pub struct NoiseStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl NoiseStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from `[-u, u]`; zero without consuming state when `u == 0`.
    pub fn draw(&mut self, u: f64) -> f64 {
        if u > 0.0 {
            self.rng.gen_range(-u..=u)
        } else {
            0.0
        }
    }
}

/// Tally of oracle-contract checks made against the exact shadow values.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractTally {
    pub f_checks: u64,
    pub f_violations: u64,
    pub g_checks: u64,
    pub g_violations: u64,
}

impl ContractTally {
    pub fn merge(&mut self, other: &ContractTally) {
        self.f_checks += other.f_checks;
        self.f_violations += other.f_violations;
        self.g_checks += other.g_checks;
        self.g_violations += other.g_violations;
    }

    pub fn violations(&self) -> u64 {
        self.f_violations + self.g_violations
    }

    pub fn checks(&self) -> u64 {
        self.f_checks + self.g_checks
    }
}

/// Approximate objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FEval {
    pub value: f64,
    pub level: PrecisionLevel,
    /// Double-precision value, available to verification code at no cost.
    pub exact: f64,
}

/// Approximate gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct GEval {
    pub grad: Vec<f64>,
    pub level: PrecisionLevel,
    /// Tiers attempted, in order; the last one is `level`.
    pub attempts: Vec<PrecisionLevel>,
    /// Double-precision gradient, available to verification code at no cost.
    pub exact: Vec<f64>,
}

/// Adds the perturbation, then pulls the rounded sum back inside `[exact - u, exact + u]`.
fn perturb(exact: f64, delta: f64, u: f64) -> f64 {
    let mut v = exact + delta;
    while (v - exact).abs() > u {
        v = if v > exact { v.next_down() } else { v.next_up() };
    }
    v
}

/// Simulated multi-precision evaluator for one solver run.
///
/// Owns the run's ledger and noise stream; nothing is shared between runs.
#[derive(Debug, Clone)]
pub struct Oracle<'p> {
    problem: &'p Problem,
    ledger: EnergyLedger,
    noise: NoiseStream,
    tally: ContractTally,
}

impl<'p> Oracle<'p> {
    pub fn new(problem: &'p Problem, seed: u64) -> Self {
        Self {
            problem,
            ledger: EnergyLedger::new(),
            noise: NoiseStream::new(seed),
            tally: ContractTally::default(),
        }
    }

    pub fn problem(&self) -> &Problem {
        self.problem
    }

    pub fn ledger(&self) -> &EnergyLedger {
        &self.ledger
    }

    pub fn tally(&self) -> &ContractTally {
        &self.tally
    }

    fn exact_f(&self, x: &[f64]) -> Result<f64> {
        let f = self.problem.exact_f(x)?;
        if f.is_finite() {
            Ok(f)
        } else {
            Err(Error::NonFinite { what: "objective" })
        }
    }

    fn exact_g(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g = self.problem.exact_g(x)?;
        if all_finite(&g) {
            Ok(g)
        } else {
            Err(Error::NonFinite { what: "gradient" })
        }
    }

    fn eval_f_at(&mut self, x: &[f64], level: PrecisionLevel, bound: f64) -> Result<FEval> {
        self.ledger.charge_f(level);
        let exact = self.exact_f(x)?;
        let u = level.noise_halfwidth();
        let value = perturb(exact, self.noise.draw(u), u);
        self.tally.f_checks += 1;
        if (value - exact).abs() > bound {
            self.tally.f_violations += 1;
        }
        Ok(FEval {
            value,
            level,
            exact,
        })
    }

    /// `f̄(x, ω_f)`: evaluates at the cheapest tier whose perturbation is at most `omega_f`,
    /// so that `|f̄ − f(x)| ≤ ω_f`. `omega_f == 0` selects double precision.
    pub fn f_bar(&mut self, x: &[f64], omega_f: f64) -> Result<FEval> {
        if !(omega_f >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "objective accuracy must be nonnegative, got {omega_f}"
            )));
        }
        let level = PrecisionLevel::cheapest_within(omega_f);
        self.eval_f_at(x, level, omega_f)
    }

    /// Evaluates `f` at exactly `level`, with no accuracy target.
    pub fn f_bar_forced(&mut self, x: &[f64], level: PrecisionLevel) -> Result<FEval> {
        self.eval_f_at(x, level, level.noise_halfwidth())
    }

    /// `ḡ(x, ω_g)` satisfying `‖ḡ − ∇f(x)‖ ≤ ω_g ‖ḡ‖`.
    ///
    /// Tiers are tried cheapest first. A perturbed gradient is accepted when its
    /// guaranteed error `u·√n` is within `ω_g ‖ḡ‖`; double precision always
    /// accepts. Every attempt is charged. `omega_g == 0` goes straight to double.
    pub fn g_bar(&mut self, x: &[f64], omega_g: f64) -> Result<GEval> {
        if !(omega_g >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "gradient accuracy must be nonnegative, got {omega_g}"
            )));
        }
        let exact = self.exact_g(x)?;
        let sqrt_n = (x.len() as f64).sqrt();
        let tiers: &[PrecisionLevel] = if omega_g == 0.0 {
            &[PrecisionLevel::Double]
        } else {
            &PrecisionLevel::ALL
        };
        let mut attempts = Vec::with_capacity(3);
        for &level in tiers {
            self.ledger.charge_g(level);
            attempts.push(level);
            let u = level.noise_halfwidth();
            let grad: Vec<f64> = exact.iter().map(|&e| perturb(e, self.noise.draw(u), u)).collect();
            if level == PrecisionLevel::Double || u * sqrt_n <= omega_g * norm(&grad) {
                self.record_g_check(&grad, &exact, omega_g * norm(&grad));
                return Ok(GEval {
                    grad,
                    level,
                    attempts,
                    exact,
                });
            }
        }
        unreachable!("double precision always accepts")
    }

    /// Evaluates `∇f` at exactly `level`, with no accuracy target.
    pub fn g_bar_forced(&mut self, x: &[f64], level: PrecisionLevel) -> Result<GEval> {
        let exact = self.exact_g(x)?;
        self.ledger.charge_g(level);
        let u = level.noise_halfwidth();
        let grad: Vec<f64> = exact.iter().map(|&e| perturb(e, self.noise.draw(u), u)).collect();
        self.record_g_check(&grad, &exact, u * (x.len() as f64).sqrt());
        Ok(GEval {
            grad,
            level,
            attempts: vec![level],
            exact,
        })
    }

    fn record_g_check(&mut self, grad: &[f64], exact: &[f64], bound: f64) {
        let err = grad
            .iter()
            .zip(exact)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        // Each component is clamped exactly; only the norm itself carries rounding.
        let slack = 8.0 * grad.len() as f64 * f64::EPSILON;
        self.tally.g_checks += 1;
        if err > bound * (1.0 + slack) {
            self.tally.g_violations += 1;
        }
    }
}
