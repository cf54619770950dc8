//! Problems that are not naturally sums of squares, mostly from the CUTE(r) collection.

use super::least_squares::{Smooth, SmoothWith};
use super::Problem;

pub fn cliff() -> Problem {
    fn f(x: &[f64]) -> f64 {
        (0.01 * x[0] - 0.1).powi(2) - x[0] + x[1] + (20.0 * (x[0] - x[1])).exp()
    }
    fn g(x: &[f64], g: &mut [f64]) {
        let e = 20.0 * (20.0 * (x[0] - x[1])).exp();
        g[0] = 0.02 * (0.01 * x[0] - 0.1) - 1.0 + e;
        g[1] = 1.0 - e;
    }
    Problem::new("cliff", vec![0.0, -1.0], Smooth { f, g }).with_lower_hint(0.199786)
}

pub fn sisser() -> Problem {
    fn f(x: &[f64]) -> f64 {
        let (a, b) = (x[0] * x[0], x[1] * x[1]);
        3.0 * a * a - 2.0 * a * b + 3.0 * b * b
    }
    fn g(x: &[f64], g: &mut [f64]) {
        let (a, b) = (x[0] * x[0], x[1] * x[1]);
        g[0] = 12.0 * a * x[0] - 4.0 * x[0] * b;
        g[1] = 12.0 * b * x[1] - 4.0 * a * x[1];
    }
    Problem::new("sisser", vec![1.0, 0.1], Smooth { f, g }).with_lower_hint(0.0)
}

fn engval1_f(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| {
            let q = w[0] * w[0] + w[1] * w[1];
            q * q - 4.0 * w[0] + 3.0
        })
        .sum()
}

fn engval1_g(x: &[f64], g: &mut [f64]) {
    g.fill(0.0);
    for i in 0..x.len() - 1 {
        let q = x[i] * x[i] + x[i + 1] * x[i + 1];
        g[i] += 4.0 * q * x[i] - 4.0;
        g[i + 1] += 4.0 * q * x[i + 1];
    }
}

pub fn engval1(n: usize) -> Problem {
    assert!(n >= 2);
    let obj = Smooth {
        f: engval1_f,
        g: engval1_g,
    };
    Problem::new("engval1", vec![2.0; n], obj)
}

fn arwhead_f(x: &[f64]) -> f64 {
    let n = x.len();
    let xn2 = x[n - 1] * x[n - 1];
    x[..n - 1]
        .iter()
        .map(|v| {
            let q = v * v + xn2;
            q * q - 4.0 * v + 3.0
        })
        .sum()
}

fn arwhead_g(x: &[f64], g: &mut [f64]) {
    let n = x.len();
    let xn = x[n - 1];
    g.fill(0.0);
    for i in 0..n - 1 {
        let q = x[i] * x[i] + xn * xn;
        g[i] += 4.0 * q * x[i] - 4.0;
        g[n - 1] += 4.0 * q * xn;
    }
}

/// Arrowhead function.
pub fn arwhead(n: usize) -> Problem {
    assert!(n >= 2);
    let obj = Smooth {
        f: arwhead_f,
        g: arwhead_g,
    };
    Problem::new("arwhead", vec![1.0; n], obj).with_lower_hint(0.0)
}

fn edensch_f(x: &[f64]) -> f64 {
    16.0 + x
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            (a - 2.0).powi(4) + (a * b - 2.0 * b).powi(2) + (b + 1.0).powi(2)
        })
        .sum::<f64>()
}

fn edensch_g(x: &[f64], g: &mut [f64]) {
    g.fill(0.0);
    for i in 0..x.len() - 1 {
        let (a, b) = (x[i], x[i + 1]);
        let p = a * b - 2.0 * b;
        g[i] += 4.0 * (a - 2.0).powi(3) + 2.0 * p * b;
        g[i + 1] += 2.0 * p * (a - 2.0) + 2.0 * (b + 1.0);
    }
}

pub fn edensch(n: usize) -> Problem {
    assert!(n >= 2);
    let obj = Smooth {
        f: edensch_f,
        g: edensch_g,
    };
    Problem::new("edensch", vec![0.0; n], obj)
}

fn cosine_f(x: &[f64]) -> f64 {
    x.windows(2).map(|w| (w[0] * w[0] - 0.5 * w[1]).cos()).sum()
}

fn cosine_g(x: &[f64], g: &mut [f64]) {
    g.fill(0.0);
    for i in 0..x.len() - 1 {
        let s = (x[i] * x[i] - 0.5 * x[i + 1]).sin();
        g[i] -= 2.0 * x[i] * s;
        g[i + 1] += 0.5 * s;
    }
}

pub fn cosine(n: usize) -> Problem {
    assert!(n >= 2);
    let obj = Smooth {
        f: cosine_f,
        g: cosine_g,
    };
    Problem::new("cosine", vec![1.0; n], obj).with_lower_hint(-((n - 1) as f64))
}

fn dqrtic_f(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| (v - (i + 1) as f64).powi(4))
        .sum()
}

fn dqrtic_g(x: &[f64], g: &mut [f64]) {
    for (i, (gi, v)) in g.iter_mut().zip(x).enumerate() {
        *gi = 4.0 * (v - (i + 1) as f64).powi(3);
    }
}

pub fn dqrtic(n: usize) -> Problem {
    let obj = Smooth {
        f: dqrtic_f,
        g: dqrtic_g,
    };
    Problem::new("dqrtic", vec![2.0; n], obj).with_lower_hint(0.0)
}

fn tridia_f(x: &[f64]) -> f64 {
    let mut f = (x[0] - 1.0).powi(2);
    for i in 1..x.len() {
        f += (i + 1) as f64 * (2.0 * x[i] - x[i - 1]).powi(2);
    }
    f
}

fn tridia_g(x: &[f64], g: &mut [f64]) {
    g.fill(0.0);
    g[0] = 2.0 * (x[0] - 1.0);
    for i in 1..x.len() {
        let w = 2.0 * (i + 1) as f64 * (2.0 * x[i] - x[i - 1]);
        g[i] += 2.0 * w;
        g[i - 1] -= w;
    }
}

/// Convex tridiagonal quadratic.
pub fn tridia(n: usize) -> Problem {
    let obj = Smooth {
        f: tridia_f,
        g: tridia_g,
    };
    Problem::new("tridia", vec![1.0; n], obj).with_lower_hint(0.0)
}

#[derive(Clone, Copy)]
struct Dixmaan {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    k: [i32; 4],
}

impl Dixmaan {
    fn weight(&self, which: usize, i: usize, n: usize) -> f64 {
        ((i + 1) as f64 / n as f64).powi(self.k[which])
    }

    fn value(&self, x: &[f64]) -> f64 {
        let n = x.len();
        let m = n / 3;
        let mut f = 1.0;
        for i in 0..n {
            f += self.alpha * x[i] * x[i] * self.weight(0, i, n);
        }
        for i in 0..n - 1 {
            let q = x[i + 1] + x[i + 1] * x[i + 1];
            f += self.beta * x[i] * x[i] * q * q * self.weight(1, i, n);
        }
        for i in 0..2 * m {
            f += self.gamma * x[i] * x[i] * x[i + m].powi(4) * self.weight(2, i, n);
        }
        for i in 0..m {
            f += self.delta * x[i] * x[i + 2 * m] * self.weight(3, i, n);
        }
        f
    }

    fn gradient(&self, x: &[f64], g: &mut [f64]) {
        let n = x.len();
        let m = n / 3;
        g.fill(0.0);
        for i in 0..n {
            g[i] += 2.0 * self.alpha * x[i] * self.weight(0, i, n);
        }
        for i in 0..n - 1 {
            let w = self.beta * self.weight(1, i, n);
            let q = x[i + 1] + x[i + 1] * x[i + 1];
            g[i] += 2.0 * w * x[i] * q * q;
            g[i + 1] += 2.0 * w * x[i] * x[i] * q * (1.0 + 2.0 * x[i + 1]);
        }
        for i in 0..2 * m {
            let w = self.gamma * self.weight(2, i, n);
            g[i] += 2.0 * w * x[i] * x[i + m].powi(4);
            g[i + m] += 4.0 * w * x[i] * x[i] * x[i + m].powi(3);
        }
        for i in 0..m {
            let w = self.delta * self.weight(3, i, n);
            g[i] += w * x[i + 2 * m];
            g[i + 2 * m] += w * x[i];
        }
    }
}

fn dixmaan(name: &'static str, n: usize, params: Dixmaan) -> Problem {
    assert!(n % 3 == 0 && n > 0, "dixmaan dimension must be a multiple of 3");
    let obj = SmoothWith {
        f: move |x: &[f64]| params.value(x),
        g: move |x: &[f64], g: &mut [f64]| params.gradient(x, g),
    };
    Problem::new(name, vec![2.0; n], obj).with_lower_hint(1.0)
}

/// Dixon–Maany function, variant A.
pub fn dixmaana(n: usize) -> Problem {
    dixmaan(
        "dixmaana",
        n,
        Dixmaan {
            alpha: 1.0,
            beta: 0.0,
            gamma: 0.125,
            delta: 0.125,
            k: [0, 0, 0, 0],
        },
    )
}

/// Dixon–Maany function, variant J.
pub fn dixmaanj(n: usize) -> Problem {
    dixmaan(
        "dixmaanj",
        n,
        Dixmaan {
            alpha: 1.0,
            beta: 0.0625,
            gamma: 0.0625,
            delta: 0.0625,
            k: [2, 0, 0, 2],
        },
    )
}
