use super::Objective;

type ResidualFn = dyn Fn(&[f64], &mut [f64], Option<&mut [f64]>) + Send + Sync;

/// `f(x) = Σ r_i(x)²` with `∇f = 2 Jᵀ r`.
///
/// The residual callback fills `r` (length `m`) and, when asked, the row-major
/// `m × n` Jacobian.
pub(crate) struct SumOfSquares {
    m: usize,
    residuals: Box<ResidualFn>,
}

impl SumOfSquares {
    pub(crate) fn new(
        m: usize,
        residuals: impl Fn(&[f64], &mut [f64], Option<&mut [f64]>) + Send + Sync + 'static,
    ) -> Self {
        Self {
            m,
            residuals: Box::new(residuals),
        }
    }
}

impl Objective for SumOfSquares {
    fn value(&self, x: &[f64]) -> f64 {
        let mut r = vec![0.0; self.m];
        (self.residuals)(x, &mut r, None);
        r.iter().map(|v| v * v).sum()
    }

    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        let n = x.len();
        let mut r = vec![0.0; self.m];
        let mut jac = vec![0.0; self.m * n];
        (self.residuals)(x, &mut r, Some(&mut jac));
        g.fill(0.0);
        for (ri, row) in r.iter().zip(jac.chunks_exact(n)) {
            for (gj, jij) in g.iter_mut().zip(row) {
                *gj += 2.0 * ri * jij;
            }
        }
    }
}

/// Objective given by a pair of plain functions.
pub(crate) struct Smooth {
    pub(crate) f: fn(&[f64]) -> f64,
    pub(crate) g: fn(&[f64], &mut [f64]),
}

impl Objective for Smooth {
    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        (self.g)(x, g)
    }
}

/// Objective given by closures, for parameterised families.
pub(crate) struct SmoothWith<F, G> {
    pub(crate) f: F,
    pub(crate) g: G,
}

impl<F, G> Objective for SmoothWith<F, G>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    fn value(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        (self.g)(x, g)
    }
}
