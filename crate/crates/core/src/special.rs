//! Gamma function and compensated summation.

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function by the Lanczos approximation (g = 7, nine terms), with the
/// reflection formula below 1/2. Relative error is below 1e-14 on (0, 5].
pub fn gamma(x: f64) -> f64 {
    if x.fract() == 0.0 && (1.0..=21.0).contains(&x) {
        return (2..x as u64).product::<u64>() as f64;
    }
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS[0];
        for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
            acc += c / (x + k as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with mpmath at 30 digits.
    const REFERENCE: [(f64, f64); 10] = [
        (0.01, 99.432_585_119_150_603_713_5),
        (0.1, 9.513_507_698_668_731_836_3),
        (0.5, 1.772_453_850_905_516_027_3),
        (0.8, 1.164_229_713_725_303_373_6),
        (1.2, 0.918_168_742_399_760_610_6),
        (1.5, 0.886_226_925_452_758_013_6),
        (1.7, 0.908_638_732_853_290_450_0),
        (1.8, 0.931_383_770_980_242_710_7),
        (2.5, 1.329_340_388_179_137_020_5),
        (3.3, 2.683_437_381_955_768_793_6),
    ];

    #[test]
    fn gamma_matches_reference_values() {
        for (x, expected) in REFERENCE {
            let rel = (gamma(x) - expected).abs() / expected;
            assert!(rel < 1e-13, "gamma({x}) rel err {rel:e}");
        }
        assert!((gamma(4.0) - 6.0).abs() < 1e-13);
        assert!((gamma(1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(1.5) - PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut acc = KahanSum::new();
        acc.add(1.0);
        for _ in 0..1_000_000 {
            acc.add(1e-16);
        }
        assert!((acc.value() - (1.0 + 1e-10)).abs() < 1e-20);
    }
}
