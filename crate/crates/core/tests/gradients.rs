//! Analytic gradients against finite differences, at the start point and at
//! random points in the box `[x0 − 1, x0 + 1]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tr1da::{catalog, Problem};

const RANDOM_POINTS: usize = 5;

fn check(p: &Problem, x: &[f64], label: &str) -> Option<String> {
    match p.gradient_check(x) {
        Ok(c) if c.passed() => None,
        Ok(c) => Some(format!(
            "{} {label}: coordinate {} analytic {:e} vs fd {:e} (rel {:.2e}, tol {:e})",
            p.name(),
            c.coordinate,
            c.analytic,
            c.finite_difference,
            c.rel_error,
            c.tolerance
        )),
        Err(e) => Some(format!("{} {label}: {e}", p.name())),
    }
}

#[test]
fn gradients_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut failures = Vec::new();
    let problems = catalog();
    assert_eq!(problems.len(), 42);
    for p in &problems {
        failures.extend(check(p, p.x0(), "x0"));
        for j in 0..RANDOM_POINTS {
            let x: Vec<f64> = p.x0().iter().map(|v| v + rng.gen_range(-1.0..=1.0)).collect();
            failures.extend(check(p, &x, &format!("random point {j}")));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

struct WrongGradient;

impl tr1da::problems::Objective for WrongGradient {
    fn value(&self, x: &[f64]) -> f64 {
        x[0] * x[0] + x[0] * x[1]
    }
    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        g[0] = 2.0 * x[0] + x[1];
        // Off by a relative 1e-4 in the second coordinate.
        g[1] = x[0] * (1.0 + 1e-4);
    }
}

#[test]
fn a_wrong_gradient_is_caught() {
    let p = Problem::new("wrong", vec![1.0, 2.0], WrongGradient);
    let c = p.gradient_check(&[1.0, 2.0]).unwrap();
    assert!(!c.passed(), "{c:?}");
    assert_eq!(c.coordinate, 1);
}

#[test]
fn badly_scaled_problems_use_the_looser_tolerance() {
    for p in catalog() {
        let loose = matches!(p.name(), "powellbs" | "brownbs" | "meyer3");
        let expected = if loose { 1e-4 } else { 1e-5 };
        assert_eq!(p.fd_tolerance(), expected, "{}", p.name());
    }
}
