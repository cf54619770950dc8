//! Trust-region step computation.
//!
//! Steps come from Steihaug–Toint truncated conjugate gradients, whose first
//! iterate is the Cauchy point, so every returned step achieves at least the
//! Cauchy decrease `½‖g‖ min(‖g‖/(1+‖H‖), Δ)`.

use crate::error::{Error, Result};
use crate::linalg::{all_finite, axpy, dot, norm};
use crate::lsr1::HessianModel;

/// A trial step and its predicted model decrease.
#[derive(Debug, Clone, PartialEq)]
pub struct TrStep {
    pub s: Vec<f64>,
    /// `m(x, 0) − m(x, s)`.
    pub pred: f64,
    pub boundary_hit: bool,
    pub cg_iters: usize,
    /// Lower bound on `‖H‖` used for the Cauchy-decrease check.
    pub h_norm_lb: f64,
}

impl TrStep {
    /// Required decrease for a step computed from gradient norm `gnorm` in radius `delta`.
    pub fn cauchy_floor(&self, gnorm: f64, delta: f64) -> f64 {
        cauchy_floor(gnorm, self.h_norm_lb, delta)
    }
}

/// `½‖g‖ min(‖g‖/(1+‖H‖), Δ)`.
pub fn cauchy_floor(gnorm: f64, h_norm: f64, delta: f64) -> f64 {
    0.5 * gnorm * (gnorm / (1.0 + h_norm)).min(delta)
}

/// `m(x, 0) − m(x, s) = −gᵀs − ½ sᵀHs`.
pub fn model_decrease<H: HessianModel + ?Sized>(g: &[f64], h: &H, s: &[f64]) -> f64 {
    -(dot(g, s) + 0.5 * dot(s, &h.apply(s)))
}

fn check_inputs<H: HessianModel + ?Sized>(g: &[f64], h: &H, delta: f64) -> Result<f64> {
    if g.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: g.len(),
        });
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "trust-region radius must be positive, got {delta}"
        )));
    }
    let gnorm = norm(g);
    if !(gnorm > 0.0 && gnorm.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "gradient norm must be positive and finite, got {gnorm}"
        )));
    }
    Ok(gnorm)
}

/// The `‖H‖` lower bound combines the model's own bound with the Rayleigh
/// quotient along the gradient; both are lower bounds, so is their maximum.
fn norm_bound<H: HessianModel + ?Sized>(h: &H, curvature_along_g: f64) -> f64 {
    let lb = h.norm_lower_bound().max(curvature_along_g.abs());
    if lb.is_finite() {
        lb
    } else {
        h.norm_lower_bound()
    }
}

/// Minimizer of the model along `−g` inside the ball of radius `delta`.
pub fn cauchy_point<H: HessianModel + ?Sized>(g: &[f64], h: &H, delta: f64) -> Result<TrStep> {
    let gnorm = check_inputs(g, h, delta)?;
    let gg = gnorm * gnorm;
    let ghg = dot(g, &h.apply(g));
    let t_boundary = delta / gnorm;
    let (t, boundary_hit) = if ghg <= 0.0 {
        (t_boundary, true)
    } else {
        let t_star = gg / ghg;
        if t_star >= t_boundary {
            (t_boundary, true)
        } else {
            (t_star, false)
        }
    };
    let s: Vec<f64> = g.iter().map(|v| -t * v).collect();
    let pred = t * gg - 0.5 * t * t * ghg;
    Ok(TrStep {
        s,
        pred,
        boundary_hit,
        cg_iters: 1,
        h_norm_lb: norm_bound(h, ghg / gg),
    })
}

/// Largest `τ ≥ 0` with `‖s + τ d‖ = Δ`.
fn to_boundary(s: &[f64], d: &[f64], delta: f64) -> f64 {
    let sd = dot(s, d);
    let dd = dot(d, d);
    let gap = (delta * delta - dot(s, s)).max(0.0);
    let disc = (sd * sd + dd * gap).sqrt();
    if sd >= 0.0 {
        gap / (sd + disc)
    } else {
        (disc - sd) / dd
    }
}

/// Truncated CG step with the iteration cap equal to the dimension.
pub fn solve_tr<H: HessianModel + ?Sized>(g: &[f64], h: &H, delta: f64) -> Result<TrStep> {
    solve_tr_capped(g, h, delta, g.len())
}

/// Steihaug–Toint truncated conjugate gradients from `s = 0`.
///
/// Stops on a small residual `‖r‖ ≤ min(0.1, √‖g‖)‖g‖`, at the boundary, or
/// on negative curvature (then moves to the boundary). Falls back to the
/// Cauchy point if the arithmetic breaks down or the CG step decreases the
/// model less than the Cauchy point's floor.
pub fn solve_tr_capped<H: HessianModel + ?Sized>(
    g: &[f64],
    h: &H,
    delta: f64,
    max_iters: usize,
) -> Result<TrStep> {
    let gnorm = check_inputs(g, h, delta)?;
    let n = g.len();
    let tol = 0.1f64.min(gnorm.sqrt()) * gnorm;

    let mut s = vec![0.0; n];
    let mut r = g.to_vec();
    let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
    let mut rr = gnorm * gnorm;
    let mut boundary_hit = false;
    let mut iters = 0;
    let mut curvature_along_g = f64::NAN;

    for it in 0..max_iters.max(1) {
        iters = it + 1;
        let hd = h.apply(&d);
        let dhd = dot(&d, &hd);
        if it == 0 {
            curvature_along_g = dhd / rr;
        }
        if !dhd.is_finite() {
            return cauchy_point(g, h, delta);
        }
        if dhd <= 0.0 {
            let tau = to_boundary(&s, &d, delta);
            axpy(tau, &d, &mut s);
            boundary_hit = true;
            break;
        }
        let alpha = rr / dhd;
        let mut trial = s.clone();
        axpy(alpha, &d, &mut trial);
        if norm(&trial) >= delta {
            let tau = to_boundary(&s, &d, delta);
            axpy(tau, &d, &mut s);
            boundary_hit = true;
            break;
        }
        s = trial;
        axpy(alpha, &hd, &mut r);
        let rr_next = dot(&r, &r);
        if rr_next.sqrt() <= tol {
            break;
        }
        let beta = rr_next / rr;
        for (di, ri) in d.iter_mut().zip(&r) {
            *di = -ri + beta * *di;
        }
        rr = rr_next;
    }

    let snorm = norm(&s);
    if snorm > delta {
        let scale = delta / snorm;
        s.iter_mut().for_each(|v| *v *= scale);
    }
    let pred = model_decrease(g, h, &s);
    if !all_finite(&s) || !pred.is_finite() {
        return cauchy_point(g, h, delta);
    }
    let step = TrStep {
        s,
        pred,
        boundary_hit,
        cg_iters: iters,
        h_norm_lb: norm_bound(h, curvature_along_g),
    };
    if step.pred >= step.cauchy_floor(gnorm, delta) {
        Ok(step)
    } else {
        let cp = cauchy_point(g, h, delta)?;
        Ok(if cp.pred > step.pred { cp } else { step })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lsr1::Lsr1State;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Dense symmetric matrix test double.
    struct Dense {
        a: Vec<Vec<f64>>,
    }

    impl HessianModel for Dense {
        fn dim(&self) -> usize {
            self.a.len()
        }
        fn apply(&self, v: &[f64]) -> Vec<f64> {
            self.a.iter().map(|row| dot(row, v)).collect()
        }
        fn norm_lower_bound(&self) -> f64 {
            // Frobenius norm over √n is a valid lower bound on the spectral norm.
            let fro: f64 = self.a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
            fro / (self.dim() as f64).sqrt()
        }
    }

    fn diag12() -> Lsr1State {
        let mut h = Lsr1State::new(2);
        h.update(&[1.0, 0.0], &[1.0, 0.0]).unwrap();
        h.update(&[0.0, 1.0], &[0.0, 2.0]).unwrap();
        h
    }

    #[test]
    fn cauchy_interior_identity() {
        let h = Lsr1State::new(2);
        let cp = cauchy_point(&[1.0, 0.0], &h, 10.0).unwrap();
        assert_relative_eq!(cp.s[..], [-1.0, 0.0][..], epsilon = 1e-15);
        assert_relative_eq!(cp.pred, 0.5, epsilon = 1e-15);
        assert!(!cp.boundary_hit);
    }

    #[test]
    fn cauchy_linear_model_hits_boundary() {
        let h = Lsr1State::with_options(2, 15, 1e-8, 0.0).unwrap();
        let cp = cauchy_point(&[1.0, 0.0], &h, 0.5).unwrap();
        assert_relative_eq!(cp.s[..], [-0.5, 0.0][..], epsilon = 1e-15);
        assert_relative_eq!(cp.pred, 0.5, epsilon = 1e-15);
        assert!(cp.boundary_hit);
    }

    #[test]
    fn cauchy_on_diagonal_quadratic() {
        let cp = cauchy_point(&[1.0, 1.0], &diag12(), 10.0).unwrap();
        let t = 2.0 / 3.0;
        assert_relative_eq!(cp.s[..], [-t, -t][..], epsilon = 1e-13);
        assert_relative_eq!(cp.pred, 2.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn single_cg_iteration_is_the_cauchy_point() {
        let h = diag12();
        for delta in [10.0, 0.5, 0.1] {
            let cg = solve_tr_capped(&[1.0, 1.0], &h, delta, 1).unwrap();
            let cp = cauchy_point(&[1.0, 1.0], &h, delta).unwrap();
            assert_relative_eq!(cg.s[..], cp.s[..], epsilon = 1e-13);
            assert_relative_eq!(cg.pred, cp.pred, epsilon = 1e-13);
        }
    }

    #[test]
    fn interior_newton_step() {
        let step = solve_tr(&[1.0, 1.0], &diag12(), 10.0).unwrap();
        assert_relative_eq!(step.s[..], [-1.0, -0.5][..], epsilon = 1e-12);
        assert_relative_eq!(step.pred, 0.75, epsilon = 1e-12);
        assert!(!step.boundary_hit);
    }

    #[test]
    fn small_radius_boundary_step() {
        let h = diag12();
        let step = solve_tr(&[1.0, 1.0], &h, 0.1).unwrap();
        let cp = cauchy_point(&[1.0, 1.0], &h, 0.1).unwrap();
        assert!(step.boundary_hit);
        assert_relative_eq!(norm(&step.s), 0.1, epsilon = 1e-14);
        assert!(step.pred >= cp.pred - 1e-15);
        // Boundary point along -g: 0.1·√2 − ½·0.01·(3/2).
        assert_relative_eq!(step.pred, 0.1 * 2f64.sqrt() - 0.0075, epsilon = 1e-12);
    }

    #[test]
    fn negative_curvature_goes_to_boundary() {
        let h = Dense {
            a: vec![vec![-1.0, 0.0], vec![0.0, 2.0]],
        };
        let step = solve_tr(&[1.0, 0.1], &h, 2.0).unwrap();
        assert!(step.boundary_hit);
        assert_relative_eq!(norm(&step.s), 2.0, epsilon = 1e-12);
        assert!(step.pred > 0.0);
    }

    #[test]
    fn rejects_degenerate_input() {
        let h = Lsr1State::new(2);
        assert!(cauchy_point(&[0.0, 0.0], &h, 1.0).is_err());
        assert!(solve_tr(&[1.0, 0.0], &h, 0.0).is_err());
        assert!(solve_tr(&[1.0, 0.0, 1.0], &h, 1.0).is_err());
    }

    fn sym(n: usize, e: &[f64]) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| (0..n).map(|j| 0.5 * (e[i * n + j] + e[j * n + i])).collect())
            .collect()
    }

    proptest! {
        #[test]
        fn steps_are_feasible_and_beat_cauchy(
            e in prop::collection::vec(-3.0f64..3.0, 25),
            g in prop::collection::vec(-2.0f64..2.0, 5),
            delta in 1e-3f64..10.0,
        ) {
            prop_assume!(norm(&g) > 1e-6);
            let h = Dense { a: sym(5, &e) };
            let step = solve_tr(&g, &h, delta).unwrap();
            let cp = cauchy_point(&g, &h, delta).unwrap();
            prop_assert!(norm(&step.s) <= delta * (1.0 + 1e-12));
            let direct = model_decrease(&g, &h, &step.s);
            prop_assert!((step.pred - direct).abs() <= 1e-10 * direct.abs().max(1e-300));
            prop_assert!(step.pred >= cp.pred * (1.0 - 1e-12));
            prop_assert!(step.pred > 0.0);
            let gn = norm(&g);
            let floor = cauchy_floor(gn, h.norm_lower_bound(), delta);
            prop_assert!(step.pred >= floor * (1.0 - 1e-12));
        }
    }
}
