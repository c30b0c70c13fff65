//! Discrete Caputo operators in time.
//!
//! Orders in (0, 1] use the L1 formula; orders in (1, 2] use the L2 formula
//! corrected with the initial velocity. Both are built from the same power
//! differences `((k+1)^e - k^e) / Γ(1+e)`, with `e = 1 - α` for L1 and
//! `e = 2 - β` for L2.

use crate::error::{domain, Result};
use crate::special::{gamma, KahanSum};

/// Which side of 1 an order falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Order in (0, 1], discretized with L1.
    Sub,
    /// Order in (1, 2], discretized with the corrected L2 formula.
    Wave,
}

/// A Caputo order in (0, 2].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value <= 2.0 {
            Ok(Self(value))
        } else {
            domain(format!("fractional order {value} outside (0, 2]"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Order exactly 1 is `Sub`, where L1 coincides with backward Euler.
    pub fn regime(self) -> Regime {
        if self.0 <= 1.0 {
            Regime::Sub
        } else {
            Regime::Wave
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    L1,
    L2,
}

/// Coefficients `c_0 .. c_{n-1}` of one discrete operator.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    order: FractionalOrder,
    kind: KernelKind,
    values: Vec<f64>,
}

impl CoefficientTable {
    pub fn order(&self) -> FractionalOrder {
        self.order
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `c_k`, or zero for negative `k`.
    #[inline]
    pub fn get(&self, k: isize) -> f64 {
        if k < 0 {
            0.0
        } else {
            self.values[k as usize]
        }
    }
}

impl std::ops::Index<usize> for CoefficientTable {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.values[k]
    }
}

fn power_differences(exponent: f64, n: usize) -> Vec<f64> {
    let scale = 1.0 / gamma(1.0 + exponent);
    let mut values = Vec::with_capacity(n);
    if n == 0 {
        return values;
    }
    values.push(scale);
    for k in 1..n {
        let kf = k as f64;
        // k^e * (exp(e ln(1 + 1/k)) - 1) avoids cancellation for large k.
        let diff = kf.powf(exponent) * (exponent * (1.0 / kf).ln_1p()).exp_m1();
        values.push(diff * scale);
    }
    values
}

/// L1 coefficients `a_k = ((k+1)^{1-α} - k^{1-α}) / Γ(2-α)` for `k < n`.
pub fn l1_coefficients(alpha: FractionalOrder, n: usize) -> Result<CoefficientTable> {
    if alpha.regime() != Regime::Sub {
        return domain(format!("L1 needs order in (0, 1], got {}", alpha.value()));
    }
    if n == 0 {
        return domain("coefficient table needs n >= 1");
    }
    Ok(CoefficientTable {
        order: alpha,
        kind: KernelKind::L1,
        values: power_differences(1.0 - alpha.value(), n),
    })
}

/// L2 coefficients `b_k^(β) = a_k^(β-1)` for `k < n`.
pub fn l2_coefficients(beta: FractionalOrder, n: usize) -> Result<CoefficientTable> {
    if beta.regime() != Regime::Wave {
        return domain(format!("L2 needs order in (1, 2], got {}", beta.value()));
    }
    if n == 0 {
        return domain("coefficient table needs n >= 1");
    }
    Ok(CoefficientTable {
        order: beta,
        kind: KernelKind::L2,
        values: power_differences(2.0 - beta.value(), n),
    })
}

/// Coefficients for whichever formula matches the order's regime.
pub fn coefficients(order: FractionalOrder, n: usize) -> Result<CoefficientTable> {
    match order.regime() {
        Regime::Sub => l1_coefficients(order, n),
        Regime::Wave => l2_coefficients(order, n),
    }
}

/// Samples `v^0 .. v^n` on the uniform grid `t_k = k τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSequence {
    values: Vec<f64>,
    tau: f64,
}

impl TimeSequence {
    pub fn new(values: Vec<f64>, tau: f64) -> Result<Self> {
        if values.is_empty() {
            return domain("time sequence must hold at least v^0");
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return domain(format!("time step {tau} must be positive"));
        }
        Ok(Self { values, tau })
    }

    /// Samples `v(kτ)` for `k = 0..=n`.
    pub fn sample(v: impl Fn(f64) -> f64, tau: f64, n: usize) -> Result<Self> {
        Self::new((0..=n).map(|k| v(k as f64 * tau)).collect(), tau)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Index of the newest sample.
    pub fn last_index(&self) -> usize {
        self.values.len() - 1
    }
}

/// `δ_t^α v^n` at the newest sample `n`.
pub fn apply_l1(seq: &TimeSequence, alpha: FractionalOrder) -> Result<f64> {
    let n = seq.last_index();
    if n == 0 {
        return domain("L1 operator needs at least one step beyond v^0");
    }
    let a = l1_coefficients(alpha, n)?;
    let v = seq.values();
    // difference form: Σ_k a_{n-k} (v^k - v^{k-1}), oldest first
    let mut acc = KahanSum::new();
    for k in 1..=n {
        acc.add(a[n - k] * (v[k] - v[k - 1]));
    }
    Ok(acc.value() / seq.tau().powf(alpha.value()))
}

/// `Δ_t^β v^n - 2 b_{n-1} τ^{1-β} v'(0)` at the newest sample `n`.
pub fn apply_l2(seq: &TimeSequence, beta: FractionalOrder, v_prime_0: f64) -> Result<f64> {
    let n = seq.last_index();
    if n == 0 {
        return domain("L2 operator needs at least one step beyond v^0");
    }
    let b = l2_coefficients(beta, n)?;
    let v = seq.values();
    let tau = seq.tau();
    let mut acc = KahanSum::new();
    acc.add(2.0 * b[n - 1] * (v[1] - v[0]));
    acc.add(-2.0 * b[n - 1] * tau * v_prime_0);
    for k in 2..=n {
        acc.add(b[n - k] * ((v[k] - v[k - 1]) - (v[k - 1] - v[k - 2])));
    }
    Ok(acc.value() / tau.powf(beta.value()))
}

/// Caputo derivative of `t^p` of the given order, evaluated at `t > 0`.
///
/// Integer powers below the derivative count vanish. Non-integer `p < 1` is
/// rejected for orders above 1 since `t^{p-2}` is not integrable at 0.
pub fn caputo_monomial(p: f64, order: FractionalOrder, t: f64) -> Result<f64> {
    if !(p >= 0.0 && p.is_finite()) {
        return domain(format!("monomial power {p} must be >= 0"));
    }
    if !(t > 0.0) {
        return domain(format!("Caputo derivative evaluated at t = {t} <= 0"));
    }
    let derivatives = order.value().ceil();
    let is_integer = p.fract() == 0.0;
    if is_integer && p <= derivatives - 1.0 {
        return Ok(0.0);
    }
    if order.regime() == Regime::Wave && p < 1.0 {
        return domain(format!(
            "Caputo derivative of order {} of t^{p} is singular",
            order.value()
        ));
    }
    Ok(gamma(p + 1.0) / gamma(p + 1.0 - order.value()) * t.powf(p - order.value()))
}
