//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use fracwave::special::gamma;

/// Dense Gaussian elimination with partial pivoting. `a` is row-major `n × n`.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * b[j]).sum();
        b[k] = (b[k] - s) / a[k][k];
    }
    b
}

/// `∫_0^t k(t - s, s) ds` by the tanh-sinh rule; `k` receives the distance
/// to the right end point and the abscissa, both computed without cancellation.
pub fn tanh_sinh(t: f64, k: impl Fn(f64, f64) -> f64) -> f64 {
    let h = 1.0 / 64.0;
    let mut sum = 0.0;
    let mut j = -(6.0 / h) as i64;
    while j as f64 * h <= 6.0 {
        let u = j as f64 * h;
        let q = 0.5 * PI * u.sinh();
        let left = t / (1.0 + (2.0 * q).exp());
        let right = t / (1.0 + (-2.0 * q).exp());
        let w = 0.5 * t * 0.5 * PI * u.cosh() / q.cosh().powi(2);
        if left > 0.0 && right > 0.0 && w > 0.0 {
            sum += w * k(right, left);
        }
        j += 1;
    }
    sum * h
}

/// Caputo derivative of order `γ ∈ (0, 2)`, `γ ≠ 1`, at `t` from the first
/// two derivatives of the function.
///
/// With `k = ⌈γ⌉` and `q = k - γ`, substituting `t - s = z^{1/q}` turns
/// `∫_0^t (t-s)^{q-1} g^{(k)}(s) ds` into `∫_0^{t^q} g^{(k)}(s(z)) dz / q`,
/// which has no kernel singularity left.
pub fn caputo_quadrature(gamma_order: f64, t: f64, d1: impl Fn(f64) -> f64, d2: impl Fn(f64) -> f64) -> f64 {
    let q = gamma_order.ceil() - gamma_order;
    let upper = t.powf(q);
    let p = 1.0 / q;
    // s = t (1 - (1 - d/Z)^p) for the distance d to the upper end Z
    let s_of = |d: f64| -t * (p * (-d / upper).ln_1p()).exp_m1();
    let integral = if gamma_order < 1.0 {
        tanh_sinh(upper, |d, _| d1(s_of(d)))
    } else {
        tanh_sinh(upper, |d, _| d2(s_of(d)))
    };
    integral / gamma(1.0 + q)
}

/// Gauss-Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w));
    }
    out
}

/// Thomas algorithm for a general tridiagonal system.
pub fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < n { upper[i] / m } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}
