//! Smooth unconstrained test problems with analytic gradients.
//!
//! Most entries are the classical Moré–Garbow–Hillstrom and Buckley problems;
//! the variable-dimension ones are exposed through constructors taking `n`,
//! with the catalog fixing the benchmark dimension.

mod least_squares;
mod mgh;
mod separable;

use std::fmt;
use std::sync::Arc;

use crate::error::{check_dim, Error, Result};

pub use mgh::{
    arglina, arglinb, arglinc, bard, beale, biggs6, box3, broyden3d, broydenbd, brownal, brownbs,
    brownden, chebyqad, cube, engval2, freuroth, gulf, helix, jensmp, kowosb, meyer3, morebv,
    osbornea, osborneb, penalty1, penalty2, powellbs, powellsg, rosenbr, vardim, watson, woods,
};
pub use separable::{
    arwhead, cliff, cosine, dixmaana, dixmaanj, dqrtic, edensch, engval1, sisser, tridia,
};

/// Default per-coordinate relative tolerance for finite-difference gradient checks.
pub const FD_TOLERANCE: f64 = 1e-5;
/// Fallback tolerance for the badly scaled problems.
pub const FD_TOLERANCE_BADLY_SCALED: f64 = 1e-4;

/// Exact objective and gradient of a test function.
pub trait Objective: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64], g: &mut [f64]);
}

/// A named test problem: objective, analytic gradient and standard start.
#[derive(Clone)]
pub struct Problem {
    name: &'static str,
    x0: Vec<f64>,
    f_lower_hint: Option<f64>,
    fd_tolerance: f64,
    objective: Arc<dyn Objective>,
}

impl Problem {
    pub fn new(name: &'static str, x0: Vec<f64>, objective: impl Objective + 'static) -> Self {
        assert!(!x0.is_empty(), "problem {name} has an empty start point");
        Self {
            name,
            x0,
            f_lower_hint: None,
            fd_tolerance: FD_TOLERANCE,
            objective: Arc::new(objective),
        }
    }

    pub(crate) fn with_lower_hint(mut self, f: f64) -> Self {
        self.f_lower_hint = Some(f);
        self
    }

    pub(crate) fn badly_scaled(mut self) -> Self {
        self.fd_tolerance = FD_TOLERANCE_BADLY_SCALED;
        self
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    /// Standard starting point.
    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    /// Known optimal value, when documented. Metadata only.
    pub fn f_lower_hint(&self) -> Option<f64> {
        self.f_lower_hint
    }

    /// Relative tolerance the analytic gradient is held to against central differences.
    pub fn fd_tolerance(&self) -> f64 {
        self.fd_tolerance
    }

    /// Objective value in double precision.
    pub fn exact_f(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.objective.value(x))
    }

    /// Analytic gradient in double precision.
    pub fn exact_g(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let mut g = vec![0.0; x.len()];
        self.objective.gradient(x, &mut g);
        Ok(g)
    }
}

/// Outcome of comparing the analytic gradient with finite differences.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientCheck {
    /// Coordinate with the largest relative error.
    pub coordinate: usize,
    pub analytic: f64,
    pub finite_difference: f64,
    pub rel_error: f64,
    pub tolerance: f64,
}

impl GradientCheck {
    pub fn passed(&self) -> bool {
        self.rel_error <= self.tolerance
    }
}

impl Problem {
    /// Compares the analytic gradient at `x` with a five-point central
    /// difference whose step is chosen, per coordinate, where two successive
    /// halvings agree best. Errors are relative to the coordinate, or to a
    /// thousandth of the gradient's largest entry for small coordinates.
    pub fn gradient_check(&self, x: &[f64]) -> Result<GradientCheck> {
        let g = self.exact_g(x)?;
        if !self.exact_f(x)?.is_finite() {
            return Err(Error::NonFinite { what: "objective" });
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "gradient" });
        }
        let mut y = x.to_vec();
        let mut fd = Vec::with_capacity(x.len());
        for i in 0..x.len() {
            let mut at = |t: f64| {
                y[i] = x[i] + t;
                let v = self.objective.value(&y);
                y[i] = x[i];
                v
            };
            let mut stencil =
                |h: f64| (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
            let base = 1.0 + x[i].abs();
            let estimates: Vec<f64> = (2..=16).map(|e| stencil(base * 0.5f64.powi(e))).collect();
            let best = estimates
                .windows(2)
                .min_by(|a, b| (a[0] - a[1]).abs().total_cmp(&(b[0] - b[1]).abs()))
                .map(|w| w[1])
                .expect("several step sizes");
            fd.push(best);
        }
        let scale = g.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let mut worst = GradientCheck {
            coordinate: 0,
            analytic: g[0],
            finite_difference: fd[0],
            rel_error: 0.0,
            tolerance: self.fd_tolerance,
        };
        for (i, (a, b)) in g.iter().zip(&fd).enumerate() {
            let err = (a - b).abs() / a.abs().max(1e-3 * scale);
            if !(err <= worst.rel_error) {
                worst.coordinate = i;
                worst.analytic = *a;
                worst.finite_difference = *b;
                worst.rel_error = err;
            }
        }
        Ok(worst)
    }
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .finish()
    }
}

/// Every registered problem at its benchmark dimension.
pub fn catalog() -> Vec<Problem> {
    vec![
        rosenbr(),
        beale(),
        helix(),
        powellsg(),
        powellbs(),
        brownbs(),
        brownden(),
        bard(),
        gulf(),
        kowosb(),
        box3(),
        freuroth(4),
        watson(12),
        penalty1(10),
        penalty2(10),
        vardim(10),
        broyden3d(10),
        broydenbd(10),
        arglina(10),
        arglinb(10),
        arglinc(10),
        chebyqad(10),
        morebv(12),
        biggs6(),
        osbornea(),
        osborneb(),
        meyer3(),
        jensmp(),
        brownal(10),
        engval1(10),
        engval2(),
        cliff(),
        cube(),
        sisser(),
        woods(12),
        tridia(10),
        dqrtic(10),
        dixmaana(12),
        dixmaanj(12),
        edensch(5),
        cosine(2),
        arwhead(10),
    ]
}

/// Looks a catalog problem up by name.
pub fn by_name(name: &str) -> Result<Problem> {
    catalog()
        .into_iter()
        .find(|p| p.name() == name)
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn central_diff(p: &Problem, x: &[f64]) -> Vec<f64> {
        let mut xp = x.to_vec();
        (0..x.len())
            .map(|i| {
                let h = 1e-6 * (1.0 + x[i].abs());
                xp[i] = x[i] + h;
                let fp = p.exact_f(&xp).unwrap();
                xp[i] = x[i] - h;
                let fm = p.exact_f(&xp).unwrap();
                xp[i] = x[i];
                (fp - fm) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn rosenbrock_values() {
        let p = rosenbr();
        assert_eq!(p.exact_f(&[1.0, 1.0]).unwrap(), 0.0);
        assert!((p.exact_f(&[-1.2, 1.0]).unwrap() - 24.2).abs() < 1e-12);
        assert_eq!(p.exact_g(&[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn beale_minimizer() {
        assert_eq!(beale().exact_f(&[3.0, 0.5]).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let p = rosenbr();
        assert!(matches!(
            p.exact_f(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
        assert!(p.exact_g(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn catalog_is_complete_and_unique() {
        let cat = catalog();
        assert_eq!(cat.len(), 42);
        let names: HashSet<_> = cat.iter().map(|p| p.name()).collect();
        assert_eq!(names.len(), cat.len());
        let rosen = cat.iter().find(|p| p.name() == "rosenbr").unwrap();
        assert_eq!(rosen.dim(), 2);
        let watson = cat.iter().find(|p| p.name() == "watson").unwrap();
        assert_eq!(watson.dim(), 12);
        assert!(by_name("lminsurf").is_err());
    }

    #[test]
    fn start_points_are_finite() {
        for p in catalog() {
            let f = p.exact_f(p.x0()).unwrap();
            assert!(f.is_finite(), "{}: f(x0) = {f}", p.name());
            let g = p.exact_g(p.x0()).unwrap();
            assert_eq!(g.len(), p.dim());
            assert!(g.iter().all(|v| v.is_finite()), "{}", p.name());
        }
    }

    #[test]
    fn gradient_matches_central_differences_at_start() {
        for p in catalog() {
            let x = p.x0().to_vec();
            let g = p.exact_g(&x).unwrap();
            let fd = central_diff(&p, &x);
            let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
            for i in 0..x.len() {
                let err = (g[i] - fd[i]).abs() / (g[i].abs().max(1e-3 * scale));
                assert!(
                    err <= p.fd_tolerance(),
                    "{} coord {i}: analytic {} vs fd {} (rel {err:e})",
                    p.name(),
                    g[i],
                    fd[i]
                );
            }
        }
    }

    #[test]
    fn tridia_gradient_is_affine() {
        let p = tridia(10);
        let x: Vec<f64> = (0..10).map(|i| 0.3 * i as f64 - 1.0).collect();
        let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let g0 = p.exact_g(&[0.0; 10]).unwrap();
        let g1 = p.exact_g(&x).unwrap();
        let g2 = p.exact_g(&x2).unwrap();
        for i in 0..10 {
            let lhs = g2[i] - g0[i];
            let rhs = 2.0 * (g1[i] - g0[i]);
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn variable_dimension_constructors() {
        assert_eq!(arwhead(25).dim(), 25);
        assert_eq!(tridia(4).dim(), 4);
        assert_eq!(dixmaana(6).dim(), 6);
        assert_eq!(watson(6).dim(), 6);
    }

    #[test]
    fn known_optimal_values() {
        // Published optimal points of the data-fitting problems.
        let cases: &[(Problem, &[f64], f64, f64)] = &[
            (
                osbornea(),
                &[0.37541005, 1.9358469, -1.4646871, 0.01286753, 0.02212270],
                5.46489e-5,
                1e-3,
            ),
            (
                osborneb(),
                &[
                    1.30997715, 0.43155379, 0.63366169, 0.59943066, 0.75418320, 0.90428855,
                    1.36581182, 4.82369881, 2.39868679, 4.56887444, 5.67534147,
                ],
                4.01377e-2,
                1e-4,
            ),
            (meyer3(), &[5.6096365e-3, 6181.3463, 345.22363], 87.9458, 1e-4),
            (kowosb(), &[0.192807, 0.191282, 0.123056, 0.136062], 3.07505e-4, 1e-4),
            (bard(), &[0.0824106, 1.13304, 2.3437], 8.21487e-3, 1e-4),
        ];
        for (p, x, fstar, tol) in cases {
            let f = p.exact_f(x).unwrap();
            assert!(
                ((f - fstar) / fstar).abs() < *tol,
                "{}: f = {f}, expected {fstar}",
                p.name()
            );
        }
    }
}
