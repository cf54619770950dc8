//! Nonlinear least-squares problems, mostly from Moré, Garbow & Hillstrom (1981).

use std::f64::consts::PI;

use super::least_squares::SumOfSquares;
use super::Problem;

/// Writes `J[i][j]` into a row-major Jacobian.
macro_rules! jset {
    ($jac:expr, $n:expr, $i:expr, $j:expr, $v:expr) => {
        $jac[$i * $n + $j] = $v
    };
}

pub fn rosenbr() -> Problem {
    let obj = SumOfSquares::new(2, |x, r, jac| {
        r[0] = 10.0 * (x[1] - x[0] * x[0]);
        r[1] = 1.0 - x[0];
        if let Some(j) = jac {
            j.copy_from_slice(&[-20.0 * x[0], 10.0, -1.0, 0.0]);
        }
    });
    Problem::new("rosenbr", vec![-1.2, 1.0], obj).with_lower_hint(0.0)
}

pub fn beale() -> Problem {
    const C: [f64; 3] = [1.5, 2.25, 2.625];
    let obj = SumOfSquares::new(3, |x, r, jac| {
        for i in 0..3 {
            let p = (i + 1) as i32;
            r[i] = C[i] - x[0] * (1.0 - x[1].powi(p));
        }
        if let Some(j) = jac {
            for i in 0..3 {
                let p = (i + 1) as i32;
                jset!(j, 2, i, 0, -(1.0 - x[1].powi(p)));
                jset!(j, 2, i, 1, x[0] * p as f64 * x[1].powi(p - 1));
            }
        }
    });
    Problem::new("beale", vec![1.0, 1.0], obj).with_lower_hint(0.0)
}

/// Helical valley.
pub fn helix() -> Problem {
    let obj = SumOfSquares::new(3, |x, r, jac| {
        let theta = if x[0] == 0.0 {
            0.25f64.copysign(x[1])
        } else if x[0] > 0.0 {
            (x[1] / x[0]).atan() / (2.0 * PI)
        } else {
            (x[1] / x[0]).atan() / (2.0 * PI) + 0.5
        };
        let rho2 = x[0] * x[0] + x[1] * x[1];
        let rho = rho2.sqrt();
        r[0] = 10.0 * (x[2] - 10.0 * theta);
        r[1] = 10.0 * (rho - 1.0);
        r[2] = x[2];
        if let Some(j) = jac {
            let d = 2.0 * PI * rho2;
            j.copy_from_slice(&[
                100.0 * x[1] / d,
                -100.0 * x[0] / d,
                10.0,
                10.0 * x[0] / rho,
                10.0 * x[1] / rho,
                0.0,
                0.0,
                0.0,
                1.0,
            ]);
        }
    });
    Problem::new("helix", vec![-1.0, 0.0, 0.0], obj).with_lower_hint(0.0)
}

/// Powell singular function.
pub fn powellsg() -> Problem {
    let s5 = 5f64.sqrt();
    let s10 = 10f64.sqrt();
    let obj = SumOfSquares::new(4, move |x, r, jac| {
        r[0] = x[0] + 10.0 * x[1];
        r[1] = s5 * (x[2] - x[3]);
        r[2] = (x[1] - 2.0 * x[2]).powi(2);
        r[3] = s10 * (x[0] - x[3]).powi(2);
        if let Some(j) = jac {
            let a = 2.0 * (x[1] - 2.0 * x[2]);
            let b = 2.0 * s10 * (x[0] - x[3]);
            j.copy_from_slice(&[
                1.0, 10.0, 0.0, 0.0, //
                0.0, 0.0, s5, -s5, //
                0.0, a, -2.0 * a, 0.0, //
                b, 0.0, 0.0, -b,
            ]);
        }
    });
    Problem::new("powellsg", vec![3.0, -1.0, 0.0, 1.0], obj).with_lower_hint(0.0)
}

/// Powell badly scaled function.
pub fn powellbs() -> Problem {
    let obj = SumOfSquares::new(2, |x, r, jac| {
        let e0 = (-x[0]).exp();
        let e1 = (-x[1]).exp();
        r[0] = 1e4 * x[0] * x[1] - 1.0;
        r[1] = e0 + e1 - 1.0001;
        if let Some(j) = jac {
            j.copy_from_slice(&[1e4 * x[1], 1e4 * x[0], -e0, -e1]);
        }
    });
    Problem::new("powellbs", vec![0.0, 1.0], obj)
        .with_lower_hint(0.0)
        .badly_scaled()
}

/// Brown badly scaled function.
pub fn brownbs() -> Problem {
    let obj = SumOfSquares::new(3, |x, r, jac| {
        r[0] = x[0] - 1e6;
        r[1] = x[1] - 2e-6;
        r[2] = x[0] * x[1] - 2.0;
        if let Some(j) = jac {
            j.copy_from_slice(&[1.0, 0.0, 0.0, 1.0, x[1], x[0]]);
        }
    });
    Problem::new("brownbs", vec![1.0, 1.0], obj)
        .with_lower_hint(0.0)
        .badly_scaled()
}

/// Brown and Dennis function, m = 20.
pub fn brownden() -> Problem {
    const M: usize = 20;
    let obj = SumOfSquares::new(M, |x, r, jac| {
        let mut jac = jac;
        for i in 0..M {
            let t = (i + 1) as f64 / 5.0;
            let (s, c) = t.sin_cos();
            let a = x[0] + t * x[1] - t.exp();
            let b = x[2] + x[3] * s - c;
            r[i] = a * a + b * b;
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, 4, i, 0, 2.0 * a);
                jset!(j, 4, i, 1, 2.0 * a * t);
                jset!(j, 4, i, 2, 2.0 * b);
                jset!(j, 4, i, 3, 2.0 * b * s);
            }
        }
    });
    Problem::new("brownden", vec![25.0, 5.0, -5.0, -1.0], obj).with_lower_hint(85822.2)
}

pub fn bard() -> Problem {
    const Y: [f64; 15] = [
        0.14, 0.18, 0.22, 0.25, 0.29, 0.32, 0.35, 0.39, 0.37, 0.58, 0.73, 0.96, 1.34, 2.10, 4.39,
    ];
    let obj = SumOfSquares::new(15, |x, r, jac| {
        let mut jac = jac;
        for i in 0..15 {
            let u = (i + 1) as f64;
            let v = (15 - i) as f64;
            let w = u.min(v);
            let d = v * x[1] + w * x[2];
            r[i] = Y[i] - (x[0] + u / d);
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, 3, i, 0, -1.0);
                jset!(j, 3, i, 1, u * v / (d * d));
                jset!(j, 3, i, 2, u * w / (d * d));
            }
        }
    });
    Problem::new("bard", vec![1.0, 1.0, 1.0], obj).with_lower_hint(8.21487e-3)
}

/// Gulf research and development function, m = 99.
pub fn gulf() -> Problem {
    const M: usize = 99;
    let obj = SumOfSquares::new(M, |x, r, jac| {
        let mut jac = jac;
        for i in 0..M {
            let t = (i + 1) as f64 / 100.0;
            let y = 25.0 + (-50.0 * t.ln()).powf(2.0 / 3.0);
            let d = y - x[1];
            let ad = d.abs();
            let a = ad.powf(x[2]);
            let e = (-a / x[0]).exp();
            r[i] = e - t;
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, 3, i, 0, e * a / (x[0] * x[0]));
                let dad = if ad > 0.0 {
                    x[2] * ad.powf(x[2] - 1.0) * d.signum()
                } else {
                    0.0
                };
                jset!(j, 3, i, 1, e * dad / x[0]);
                let la = if ad > 0.0 { a * ad.ln() } else { 0.0 };
                jset!(j, 3, i, 2, -e * la / x[0]);
            }
        }
    });
    Problem::new("gulf", vec![5.0, 2.5, 0.15], obj).with_lower_hint(0.0)
}

/// Kowalik and Osborne function.
pub fn kowosb() -> Problem {
    const Y: [f64; 11] = [
        0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246,
    ];
    const U: [f64; 11] = [
        4.0, 2.0, 1.0, 0.5, 0.25, 0.167, 0.125, 0.1, 0.0833, 0.0714, 0.0625,
    ];
    let obj = SumOfSquares::new(11, |x, r, jac| {
        let mut jac = jac;
        for i in 0..11 {
            let u = U[i];
            let num = u * u + u * x[1];
            let den = u * u + u * x[2] + x[3];
            r[i] = Y[i] - x[0] * num / den;
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, 4, i, 0, -num / den);
                jset!(j, 4, i, 1, -x[0] * u / den);
                let q = x[0] * num / (den * den);
                jset!(j, 4, i, 2, q * u);
                jset!(j, 4, i, 3, q);
            }
        }
    });
    Problem::new("kowosb", vec![0.25, 0.39, 0.415, 0.39], obj).with_lower_hint(3.07505e-4)
}

/// Box three-dimensional function, m = 10.
pub fn box3() -> Problem {
    let obj = SumOfSquares::new(10, |x, r, jac| {
        let mut jac = jac;
        for i in 0..10 {
            let t = 0.1 * (i + 1) as f64;
            let e0 = (-t * x[0]).exp();
            let e1 = (-t * x[1]).exp();
            let c = (-t).exp() - (-10.0 * t).exp();
            r[i] = e0 - e1 - x[2] * c;
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, 3, i, 0, -t * e0);
                jset!(j, 3, i, 1, t * e1);
                jset!(j, 3, i, 2, -c);
            }
        }
    });
    Problem::new("box", vec![0.0, 10.0, 20.0], obj).with_lower_hint(0.0)
}

/// Extended Freudenstein and Roth function (chained over consecutive pairs).
pub fn freuroth(n: usize) -> Problem {
    assert!(n >= 2);
    let obj = SumOfSquares::new(2 * (n - 1), move |x, r, jac| {
        let mut jac = jac;
        if let Some(j) = jac.as_deref_mut() {
            j.fill(0.0);
        }
        for i in 0..n - 1 {
            let z = x[i + 1];
            r[2 * i] = x[i] - 13.0 + ((5.0 - z) * z - 2.0) * z;
            r[2 * i + 1] = x[i] - 29.0 + ((z + 1.0) * z - 14.0) * z;
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, n, 2 * i, i, 1.0);
                jset!(j, n, 2 * i, i + 1, 10.0 * z - 3.0 * z * z - 2.0);
                jset!(j, n, 2 * i + 1, i, 1.0);
                jset!(j, n, 2 * i + 1, i + 1, 3.0 * z * z + 2.0 * z - 14.0);
            }
        }
    });
    let x0 = (0..n).map(|i| if i % 2 == 0 { 0.5 } else { -2.0 }).collect();
    Problem::new("freuroth", x0, obj)
}

/// Watson function, m = 31.
pub fn watson(n: usize) -> Problem {
    assert!((2..=31).contains(&n));
    let obj = SumOfSquares::new(31, move |x, r, jac| {
        let mut jac = jac;
        for i in 0..29 {
            let t = (i + 1) as f64 / 29.0;
            let mut s1 = 0.0;
            let mut s2 = 0.0;
            let mut tp = 1.0;
            for (k, xk) in x.iter().enumerate() {
                if k > 0 {
                    s1 += k as f64 * xk * tp / t;
                }
                s2 += xk * tp;
                tp *= t;
            }
            r[i] = s1 - s2 * s2 - 1.0;
            if let Some(j) = jac.as_deref_mut() {
                let mut tp = 1.0;
                for k in 0..n {
                    let d1 = if k > 0 { k as f64 * tp / t } else { 0.0 };
                    jset!(j, n, i, k, d1 - 2.0 * s2 * tp);
                    tp *= t;
                }
            }
        }
        r[29] = x[0];
        r[30] = x[1] - x[0] * x[0] - 1.0;
        if let Some(j) = jac {
            for k in 0..n {
                jset!(j, n, 29, k, 0.0);
                jset!(j, n, 30, k, 0.0);
            }
            jset!(j, n, 29, 0, 1.0);
            jset!(j, n, 30, 0, -2.0 * x[0]);
            jset!(j, n, 30, 1, 1.0);
        }
    });
    Problem::new("watson", vec![0.0; n], obj)
}

/// Penalty function I.
pub fn penalty1(n: usize) -> Problem {
    let sa = 1e-5f64.sqrt();
    let obj = SumOfSquares::new(n + 1, move |x, r, jac| {
        for i in 0..n {
            r[i] = sa * (x[i] - 1.0);
        }
        r[n] = x.iter().map(|v| v * v).sum::<f64>() - 0.25;
        if let Some(j) = jac {
            j.fill(0.0);
            for i in 0..n {
                jset!(j, n, i, i, sa);
                jset!(j, n, n, i, 2.0 * x[i]);
            }
        }
    });
    let x0 = (1..=n).map(|j| j as f64).collect();
    Problem::new("penalty1", x0, obj)
}

/// Penalty function II.
pub fn penalty2(n: usize) -> Problem {
    assert!(n >= 2);
    let sa = 1e-5f64.sqrt();
    let em = (-0.1f64).exp();
    let obj = SumOfSquares::new(2 * n, move |x, r, jac| {
        let e: Vec<f64> = x.iter().map(|v| (v / 10.0).exp()).collect();
        r[0] = x[0] - 0.2;
        for i in 1..n {
            let y = ((i + 1) as f64 / 10.0).exp() + (i as f64 / 10.0).exp();
            r[i] = sa * (e[i] + e[i - 1] - y);
        }
        for i in n..2 * n - 1 {
            r[i] = sa * (e[i - n + 1] - em);
        }
        r[2 * n - 1] = x
            .iter()
            .enumerate()
            .map(|(j, v)| (n - j) as f64 * v * v)
            .sum::<f64>()
            - 1.0;
        if let Some(j) = jac {
            j.fill(0.0);
            jset!(j, n, 0, 0, 1.0);
            for i in 1..n {
                jset!(j, n, i, i, sa * e[i] / 10.0);
                jset!(j, n, i, i - 1, sa * e[i - 1] / 10.0);
            }
            for i in n..2 * n - 1 {
                jset!(j, n, i, i - n + 1, sa * e[i - n + 1] / 10.0);
            }
            for k in 0..n {
                jset!(j, n, 2 * n - 1, k, 2.0 * (n - k) as f64 * x[k]);
            }
        }
    });
    Problem::new("penalty2", vec![0.5; n], obj)
}

/// Variably dimensioned function.
pub fn vardim(n: usize) -> Problem {
    let obj = SumOfSquares::new(n + 2, move |x, r, jac| {
        let mut s = 0.0;
        for i in 0..n {
            r[i] = x[i] - 1.0;
            s += (i + 1) as f64 * (x[i] - 1.0);
        }
        r[n] = s;
        r[n + 1] = s * s;
        if let Some(j) = jac {
            j.fill(0.0);
            for i in 0..n {
                jset!(j, n, i, i, 1.0);
                jset!(j, n, n, i, (i + 1) as f64);
                jset!(j, n, n + 1, i, 2.0 * s * (i + 1) as f64);
            }
        }
    });
    let x0 = (1..=n).map(|j| 1.0 - j as f64 / n as f64).collect();
    Problem::new("vardim", x0, obj).with_lower_hint(0.0)
}

/// Broyden tridiagonal function.
pub fn broyden3d(n: usize) -> Problem {
    let obj = SumOfSquares::new(n, move |x, r, jac| {
        for i in 0..n {
            let prev = if i > 0 { x[i - 1] } else { 0.0 };
            let next = if i + 1 < n { x[i + 1] } else { 0.0 };
            r[i] = (3.0 - 2.0 * x[i]) * x[i] - prev - 2.0 * next + 1.0;
        }
        if let Some(j) = jac {
            j.fill(0.0);
            for i in 0..n {
                jset!(j, n, i, i, 3.0 - 4.0 * x[i]);
                if i > 0 {
                    jset!(j, n, i, i - 1, -1.0);
                }
                if i + 1 < n {
                    jset!(j, n, i, i + 1, -2.0);
                }
            }
        }
    });
    Problem::new("broyden3d", vec![-1.0; n], obj).with_lower_hint(0.0)
}

/// Broyden banded function (lower bandwidth 5, upper bandwidth 1).
pub fn broydenbd(n: usize) -> Problem {
    let obj = SumOfSquares::new(n, move |x, r, jac| {
        let mut jac = jac;
        if let Some(j) = jac.as_deref_mut() {
            j.fill(0.0);
        }
        for i in 0..n {
            let lo = i.saturating_sub(5);
            let hi = (i + 1).min(n - 1);
            let mut s = 0.0;
            for k in lo..=hi {
                if k != i {
                    s += x[k] * (1.0 + x[k]);
                }
            }
            r[i] = x[i] * (2.0 + 5.0 * x[i] * x[i]) + 1.0 - s;
            if let Some(j) = jac.as_deref_mut() {
                for k in lo..=hi {
                    if k != i {
                        jset!(j, n, i, k, -(1.0 + 2.0 * x[k]));
                    }
                }
                jset!(j, n, i, i, 2.0 + 15.0 * x[i] * x[i]);
            }
        }
    });
    Problem::new("broydenbd", vec![-1.0; n], obj).with_lower_hint(0.0)
}

/// Linear function, full rank (m = 2n).
pub fn arglina(n: usize) -> Problem {
    let m = 2 * n;
    let obj = SumOfSquares::new(m, move |x, r, jac| {
        let s: f64 = x.iter().sum::<f64>() * 2.0 / m as f64;
        for i in 0..m {
            r[i] = if i < n { x[i] } else { 0.0 } - s - 1.0;
        }
        if let Some(j) = jac {
            let c = -2.0 / m as f64;
            j.fill(c);
            for i in 0..n {
                jset!(j, n, i, i, 1.0 + c);
            }
        }
    });
    Problem::new("arglina", vec![1.0; n], obj).with_lower_hint((m - n) as f64)
}

/// Linear function, rank 1 (m = 2n).
pub fn arglinb(n: usize) -> Problem {
    let m = 2 * n;
    let obj = SumOfSquares::new(m, move |x, r, jac| {
        let s: f64 = x.iter().enumerate().map(|(k, v)| (k + 1) as f64 * v).sum();
        for i in 0..m {
            r[i] = (i + 1) as f64 * s - 1.0;
        }
        if let Some(j) = jac {
            for i in 0..m {
                for k in 0..n {
                    jset!(j, n, i, k, ((i + 1) * (k + 1)) as f64);
                }
            }
        }
    });
    let mf = m as f64;
    Problem::new("arglinb", vec![1.0; n], obj)
        .with_lower_hint(mf * (mf - 1.0) / (2.0 * (2.0 * mf + 1.0)))
}

/// Linear function, rank 1 with zero columns and rows (m = 2n).
pub fn arglinc(n: usize) -> Problem {
    assert!(n >= 3);
    let m = 2 * n;
    let obj = SumOfSquares::new(m, move |x, r, jac| {
        let s: f64 = (1..n - 1).map(|k| (k + 1) as f64 * x[k]).sum();
        r[0] = -1.0;
        r[m - 1] = -1.0;
        for i in 1..m - 1 {
            r[i] = i as f64 * s - 1.0;
        }
        if let Some(j) = jac {
            j.fill(0.0);
            for i in 1..m - 1 {
                for k in 1..n - 1 {
                    jset!(j, n, i, k, (i * (k + 1)) as f64);
                }
            }
        }
    });
    let mf = m as f64;
    Problem::new("arglinc", vec![1.0; n], obj)
        .with_lower_hint((mf * mf + 3.0 * mf - 6.0) / (2.0 * (2.0 * mf - 3.0)))
}

/// Chebyquad function (m = n).
pub fn chebyqad(n: usize) -> Problem {
    let obj = SumOfSquares::new(n, move |x, r, jac| {
        let nf = n as f64;
        r.fill(0.0);
        let mut jac = jac;
        if let Some(j) = jac.as_deref_mut() {
            j.fill(0.0);
        }
        for (k, xk) in x.iter().enumerate() {
            let y = 2.0 * xk - 1.0;
            // Shifted Chebyshev polynomials T_i(2x - 1) and their x-derivatives.
            let (mut t_prev, mut t) = (1.0, y);
            let (mut d_prev, mut d) = (0.0, 2.0);
            for i in 0..n {
                r[i] += t / nf;
                if let Some(j) = jac.as_deref_mut() {
                    jset!(j, n, i, k, d / nf);
                }
                let t_next = 2.0 * y * t - t_prev;
                let d_next = 4.0 * t + 2.0 * y * d - d_prev;
                t_prev = t;
                t = t_next;
                d_prev = d;
                d = d_next;
            }
        }
        for i in 0..n {
            let deg = i + 1;
            if deg % 2 == 0 {
                r[i] += 1.0 / ((deg * deg) as f64 - 1.0);
            }
        }
    });
    let x0 = (1..=n).map(|j| j as f64 / (n + 1) as f64).collect();
    Problem::new("chebyqad", x0, obj)
}

/// Discrete boundary value function.
pub fn morebv(n: usize) -> Problem {
    let h = 1.0 / (n + 1) as f64;
    let obj = SumOfSquares::new(n, move |x, r, jac| {
        let mut jac = jac;
        if let Some(j) = jac.as_deref_mut() {
            j.fill(0.0);
        }
        for i in 0..n {
            let t = (i + 1) as f64 * h;
            let prev = if i > 0 { x[i - 1] } else { 0.0 };
            let next = if i + 1 < n { x[i + 1] } else { 0.0 };
            let c = x[i] + t + 1.0;
            r[i] = 2.0 * x[i] - prev - next + h * h * c * c * c / 2.0;
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, n, i, i, 2.0 + 1.5 * h * h * c * c);
                if i > 0 {
                    jset!(j, n, i, i - 1, -1.0);
                }
                if i + 1 < n {
                    jset!(j, n, i, i + 1, -1.0);
                }
            }
        }
    });
    let x0 = (1..=n)
        .map(|i| {
            let t = i as f64 * h;
            t * (t - 1.0)
        })
        .collect();
    Problem::new("morebv", x0, obj).with_lower_hint(0.0)
}

/// Biggs EXP6 function, m = 13.
pub fn biggs6() -> Problem {
    const M: usize = 13;
    let obj = SumOfSquares::new(M, |x, r, jac| {
        let mut jac = jac;
        for i in 0..M {
            let t = 0.1 * (i + 1) as f64;
            let y = (-t).exp() - 5.0 * (-10.0 * t).exp() + 3.0 * (-4.0 * t).exp();
            let e1 = (-t * x[0]).exp();
            let e2 = (-t * x[1]).exp();
            let e5 = (-t * x[4]).exp();
            r[i] = x[2] * e1 - x[3] * e2 + x[5] * e5 - y;
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, 6, i, 0, -t * x[2] * e1);
                jset!(j, 6, i, 1, t * x[3] * e2);
                jset!(j, 6, i, 2, e1);
                jset!(j, 6, i, 3, -e2);
                jset!(j, 6, i, 4, -t * x[5] * e5);
                jset!(j, 6, i, 5, e5);
            }
        }
    });
    Problem::new("biggs6", vec![1.0, 2.0, 1.0, 1.0, 1.0, 1.0], obj).with_lower_hint(0.0)
}

/// Osborne 1 function, m = 33.
pub fn osbornea() -> Problem {
    const Y: [f64; 33] = [
        0.844, 0.908, 0.932, 0.936, 0.925, 0.908, 0.881, 0.850, 0.818, 0.784, 0.751, 0.718,
        0.685, 0.658, 0.628, 0.603, 0.580, 0.558, 0.538, 0.522, 0.506, 0.490, 0.478, 0.467,
        0.457, 0.448, 0.438, 0.431, 0.424, 0.420, 0.414, 0.411, 0.406,
    ];
    let obj = SumOfSquares::new(33, |x, r, jac| {
        let mut jac = jac;
        for i in 0..33 {
            let t = 10.0 * i as f64;
            let e4 = (-t * x[3]).exp();
            let e5 = (-t * x[4]).exp();
            r[i] = Y[i] - (x[0] + x[1] * e4 + x[2] * e5);
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, 5, i, 0, -1.0);
                jset!(j, 5, i, 1, -e4);
                jset!(j, 5, i, 2, -e5);
                jset!(j, 5, i, 3, t * x[1] * e4);
                jset!(j, 5, i, 4, t * x[2] * e5);
            }
        }
    });
    Problem::new("osbornea", vec![0.5, 1.5, -1.0, 0.01, 0.02], obj).with_lower_hint(5.46489e-5)
}

/// Osborne 2 function, m = 65.
pub fn osborneb() -> Problem {
    const Y: [f64; 65] = [
        1.366, 1.191, 1.112, 1.013, 0.991, 0.885, 0.831, 0.847, 0.786, 0.725, 0.746, 0.679,
        0.608, 0.655, 0.616, 0.606, 0.602, 0.626, 0.651, 0.724, 0.649, 0.649, 0.694, 0.644,
        0.624, 0.661, 0.612, 0.558, 0.533, 0.495, 0.500, 0.423, 0.395, 0.375, 0.372, 0.391,
        0.396, 0.405, 0.428, 0.429, 0.523, 0.562, 0.607, 0.653, 0.672, 0.708, 0.633, 0.668,
        0.645, 0.632, 0.591, 0.559, 0.597, 0.625, 0.739, 0.710, 0.729, 0.720, 0.636, 0.581,
        0.428, 0.292, 0.162, 0.098, 0.054,
    ];
    let obj = SumOfSquares::new(65, |x, r, jac| {
        let mut jac = jac;
        for i in 0..65 {
            let t = i as f64 / 10.0;
            let e1 = (-t * x[4]).exp();
            let d2 = t - x[8];
            let d3 = t - x[9];
            let d4 = t - x[10];
            let e2 = (-d2 * d2 * x[5]).exp();
            let e3 = (-d3 * d3 * x[6]).exp();
            let e4 = (-d4 * d4 * x[7]).exp();
            r[i] = Y[i] - (x[0] * e1 + x[1] * e2 + x[2] * e3 + x[3] * e4);
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, 11, i, 0, -e1);
                jset!(j, 11, i, 1, -e2);
                jset!(j, 11, i, 2, -e3);
                jset!(j, 11, i, 3, -e4);
                jset!(j, 11, i, 4, t * x[0] * e1);
                jset!(j, 11, i, 5, d2 * d2 * x[1] * e2);
                jset!(j, 11, i, 6, d3 * d3 * x[2] * e3);
                jset!(j, 11, i, 7, d4 * d4 * x[3] * e4);
                jset!(j, 11, i, 8, -2.0 * d2 * x[5] * x[1] * e2);
                jset!(j, 11, i, 9, -2.0 * d3 * x[6] * x[2] * e3);
                jset!(j, 11, i, 10, -2.0 * d4 * x[7] * x[3] * e4);
            }
        }
    });
    let x0 = vec![1.3, 0.65, 0.65, 0.7, 0.6, 3.0, 5.0, 7.0, 2.0, 4.5, 5.5];
    Problem::new("osborneb", x0, obj).with_lower_hint(4.01377e-2)
}

/// Meyer function, m = 16.
pub fn meyer3() -> Problem {
    const Y: [f64; 16] = [
        34780.0, 28610.0, 23650.0, 19630.0, 16370.0, 13720.0, 11540.0, 9744.0, 8261.0, 7030.0,
        6005.0, 5147.0, 4427.0, 3820.0, 3307.0, 2872.0,
    ];
    let obj = SumOfSquares::new(16, |x, r, jac| {
        let mut jac = jac;
        for i in 0..16 {
            let d = 45.0 + 5.0 * (i + 1) as f64 + x[2];
            let q = x[1] / d;
            let e = q.exp();
            r[i] = x[0] * e - Y[i];
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, 3, i, 0, e);
                jset!(j, 3, i, 1, x[0] * e / d);
                jset!(j, 3, i, 2, -x[0] * e * q / d);
            }
        }
    });
    Problem::new("meyer3", vec![0.02, 4000.0, 250.0], obj)
        .with_lower_hint(87.9458)
        .badly_scaled()
}

/// Jennrich and Sampson function, m = 10.
pub fn jensmp() -> Problem {
    let obj = SumOfSquares::new(10, |x, r, jac| {
        let mut jac = jac;
        for i in 0..10 {
            let c = (i + 1) as f64;
            let e0 = (c * x[0]).exp();
            let e1 = (c * x[1]).exp();
            r[i] = 2.0 + 2.0 * c - (e0 + e1);
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, 2, i, 0, -c * e0);
                jset!(j, 2, i, 1, -c * e1);
            }
        }
    });
    Problem::new("jensmp", vec![0.3, 0.4], obj).with_lower_hint(124.362)
}

/// Brown almost-linear function.
pub fn brownal(n: usize) -> Problem {
    let obj = SumOfSquares::new(n, move |x, r, jac| {
        let s: f64 = x.iter().sum();
        let p: f64 = x.iter().product();
        for i in 0..n - 1 {
            r[i] = x[i] + s - (n + 1) as f64;
        }
        r[n - 1] = p - 1.0;
        if let Some(j) = jac {
            j.fill(1.0);
            for i in 0..n - 1 {
                jset!(j, n, i, i, 2.0);
            }
            for k in 0..n {
                let others: f64 = x
                    .iter()
                    .enumerate()
                    .filter(|&(l, _)| l != k)
                    .map(|(_, v)| v)
                    .product();
                jset!(j, n, n - 1, k, others);
            }
        }
    });
    Problem::new("brownal", vec![0.5; n], obj).with_lower_hint(0.0)
}

pub fn engval2() -> Problem {
    let obj = SumOfSquares::new(5, |x, r, jac| {
        let (a, b, c) = (x[0], x[1], x[2]);
        let q = 5.0 * c - a + 1.0;
        r[0] = a * a + b * b + c * c - 1.0;
        r[1] = a * a + b * b + (c - 2.0) * (c - 2.0) - 1.0;
        r[2] = a + b + c - 1.0;
        r[3] = a + b - c + 1.0;
        r[4] = a * a * a + 3.0 * b * b + q * q - 36.0;
        if let Some(j) = jac {
            j.copy_from_slice(&[
                2.0 * a,
                2.0 * b,
                2.0 * c,
                2.0 * a,
                2.0 * b,
                2.0 * (c - 2.0),
                1.0,
                1.0,
                1.0,
                1.0,
                1.0,
                -1.0,
                3.0 * a * a - 2.0 * q,
                6.0 * b,
                10.0 * q,
            ]);
        }
    });
    Problem::new("engval2", vec![1.0, 2.0, 0.0], obj).with_lower_hint(0.0)
}

pub fn cube() -> Problem {
    let obj = SumOfSquares::new(2, |x, r, jac| {
        r[0] = x[0] - 1.0;
        r[1] = 10.0 * (x[1] - x[0].powi(3));
        if let Some(j) = jac {
            j.copy_from_slice(&[1.0, 0.0, -30.0 * x[0] * x[0], 10.0]);
        }
    });
    Problem::new("cube", vec![-1.2, 1.0], obj).with_lower_hint(0.0)
}

/// Extended Wood function, blocks of four variables.
pub fn woods(n: usize) -> Problem {
    assert!(n % 4 == 0 && n > 0);
    let s90 = 90f64.sqrt();
    let s10 = 10f64.sqrt();
    let obj = SumOfSquares::new(6 * n / 4, move |x, r, jac| {
        let mut jac = jac;
        if let Some(j) = jac.as_deref_mut() {
            j.fill(0.0);
        }
        for b in 0..n / 4 {
            let (i, k) = (4 * b, 6 * b);
            let (x1, x2, x3, x4) = (x[i], x[i + 1], x[i + 2], x[i + 3]);
            r[k] = 10.0 * (x2 - x1 * x1);
            r[k + 1] = 1.0 - x1;
            r[k + 2] = s90 * (x4 - x3 * x3);
            r[k + 3] = 1.0 - x3;
            r[k + 4] = s10 * (x2 + x4 - 2.0);
            r[k + 5] = (x2 - x4) / s10;
            if let Some(j) = jac.as_deref_mut() {
                jset!(j, n, k, i, -20.0 * x1);
                jset!(j, n, k, i + 1, 10.0);
                jset!(j, n, k + 1, i, -1.0);
                jset!(j, n, k + 2, i + 2, -2.0 * s90 * x3);
                jset!(j, n, k + 2, i + 3, s90);
                jset!(j, n, k + 3, i + 2, -1.0);
                jset!(j, n, k + 4, i + 1, s10);
                jset!(j, n, k + 4, i + 3, s10);
                jset!(j, n, k + 5, i + 1, 1.0 / s10);
                jset!(j, n, k + 5, i + 3, -1.0 / s10);
            }
        }
    });
    let x0 = (0..n)
        .map(|i| if i % 2 == 0 { -3.0 } else { -1.0 })
        .collect();
    Problem::new("woods", x0, obj).with_lower_hint(0.0)
}
