//! Limited-memory symmetric rank-one Hessian approximation.
//!
//! `H = σI + Σ_i u_i u_iᵀ / (u_iᵀ s_i)`, where `u_i = y_i − H_{i−1} s_i` is
//! recomputed from the retained secant pairs, oldest first. Only products
//! with `H` are ever formed.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{axpy, dot, norm};

/// Symmetric operator used as the quadratic model's curvature.
pub trait HessianModel {
    fn dim(&self) -> usize;

    /// Returns `H v`.
    fn apply(&self, v: &[f64]) -> Vec<f64>;

    /// A lower bound on `‖H‖₂`.
    fn norm_lower_bound(&self) -> f64;
}

pub const DEFAULT_MEMORY: usize = 15;
pub const DEFAULT_SKIP_TOL: f64 = 1e-8;
const POWER_STEPS: usize = 10;
const POWER_SEED: u64 = 0x5eed_0f_5e_c4a7;

/// Whether an offered secant pair entered the memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOutcome {
    Accepted,
    Skipped,
}

#[derive(Debug, Clone)]
struct Correction {
    u: Vec<f64>,
    denom: f64,
}

#[derive(Debug, Clone)]
pub struct Lsr1State {
    n: usize,
    memory: usize,
    skip_tol: f64,
    init_scale: f64,
    scale_set: bool,
    pairs: VecDeque<(Vec<f64>, Vec<f64>)>,
    corrections: Vec<Correction>,
    norm_lb: f64,
}

impl Lsr1State {
    /// Empty memory with `H₀ = I`.
    pub fn new(n: usize) -> Self {
        Self::with_options(n, DEFAULT_MEMORY, DEFAULT_SKIP_TOL, 1.0)
            .expect("default options are valid")
    }

    pub fn with_options(n: usize, memory: usize, skip_tol: f64, init_scale: f64) -> Result<Self> {
        if n == 0 || memory == 0 {
            return Err(Error::InvalidArgument(
                "dimension and memory must be positive".into(),
            ));
        }
        if !(init_scale >= 0.0 && init_scale.is_finite()) || !(skip_tol >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "invalid scale {init_scale} or skip tolerance {skip_tol}"
            )));
        }
        let mut state = Self {
            n,
            memory,
            skip_tol,
            init_scale,
            scale_set: false,
            pairs: VecDeque::with_capacity(memory),
            corrections: Vec::with_capacity(memory),
            norm_lb: 0.0,
        };
        state.norm_lb = state.power_iteration();
        Ok(state)
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn init_scale(&self) -> f64 {
        self.init_scale
    }

    /// Retained `(s, y)` pairs, oldest first.
    pub fn pairs(&self) -> impl Iterator<Item = (&[f64], &[f64])> {
        self.pairs.iter().map(|(s, y)| (s.as_slice(), y.as_slice()))
    }

    fn passes_skip_test(&self, s: &[f64], u: &[f64]) -> Option<f64> {
        let denom = dot(s, u);
        let unorm = norm(u);
        if unorm > 0.0 && denom.abs() >= self.skip_tol * norm(s) * unorm && denom.is_finite() {
            Some(denom)
        } else {
            None
        }
    }

    fn residual(&self, s: &[f64], y: &[f64]) -> Vec<f64> {
        let hs = self.apply(s);
        y.iter().zip(&hs).map(|(a, b)| a - b).collect()
    }

    /// Rebuilds every correction from the retained pairs; pairs that no longer
    /// pass the skip test are dropped.
    fn rebuild(&mut self) {
        let pairs = std::mem::take(&mut self.pairs);
        self.corrections.clear();
        for (s, y) in pairs {
            let u = self.residual(&s, &y);
            if let Some(denom) = self.passes_skip_test(&s, &u) {
                self.corrections.push(Correction { u, denom });
                self.pairs.push_back((s, y));
            }
        }
    }

    /// Offers the secant pair `(s, y)`.
    ///
    /// The first pair with positive curvature also sets `H₀ = (yᵀy / yᵀs) I`.
    /// The pair is kept only if `|sᵀ(y − Hs)| ≥ skip_tol ‖s‖ ‖y − Hs‖`; a full
    /// memory drops its oldest pair first.
    pub fn update(&mut self, s: &[f64], y: &[f64]) -> Result<UpdateOutcome> {
        check_dim(self.n, s.len())?;
        check_dim(self.n, y.len())?;
        if norm(s) == 0.0 {
            return Err(Error::InvalidArgument("zero step in secant pair".into()));
        }
        let ys = dot(y, s);
        if !self.scale_set && ys > 0.0 {
            let scale = dot(y, y) / ys;
            if scale.is_finite() && scale > 0.0 {
                self.init_scale = scale;
                self.scale_set = true;
                self.rebuild();
            }
        }
        let u = self.residual(s, y);
        if self.passes_skip_test(s, &u).is_none() {
            self.norm_lb = self.power_iteration();
            return Ok(UpdateOutcome::Skipped);
        }
        let u = if self.pairs.len() == self.memory {
            self.pairs.pop_front();
            self.rebuild();
            self.residual(s, y)
        } else {
            u
        };
        let outcome = match self.passes_skip_test(s, &u) {
            Some(denom) => {
                self.corrections.push(Correction { u, denom });
                self.pairs.push_back((s.to_vec(), y.to_vec()));
                UpdateOutcome::Accepted
            }
            None => UpdateOutcome::Skipped,
        };
        self.norm_lb = self.power_iteration();
        Ok(outcome)
    }

    fn apply_unchecked(&self, v: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = v.iter().map(|x| self.init_scale * x).collect();
        for c in &self.corrections {
            axpy(dot(&c.u, v) / c.denom, &c.u, &mut out);
        }
        out
    }

    /// `H v` with a dimension check.
    pub fn try_apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.n, v.len())?;
        Ok(self.apply_unchecked(v))
    }

    /// Power iteration from a fixed pseudo-random start; every `‖H v‖` with
    /// `‖v‖ = 1` is a lower bound on `‖H‖₂`, the largest one is returned.
    fn power_iteration(&self) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
        let mut v: Vec<f64> = (0..self.n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let vn = norm(&v);
        v.iter_mut().for_each(|x| *x /= vn);
        let mut best: f64 = 0.0;
        for _ in 0..POWER_STEPS {
            let w = self.apply_unchecked(&v);
            let wn = norm(&w);
            if !(wn > 0.0 && wn.is_finite()) {
                break;
            }
            best = best.max(wn);
            v = w.into_iter().map(|x| x / wn).collect();
        }
        best
    }
}

impl HessianModel for Lsr1State {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "dimension mismatch in Hessian product");
        self.apply_unchecked(v)
    }

    fn norm_lower_bound(&self) -> f64 {
        self.norm_lb
    }
}
