//! Small numerical kernels shared by the analytic and Monte-Carlo paths.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Unnormalized sinc, `sin(x)/x`, with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Bessel function of the first kind of integer order by its ascending series.
///
/// Intended for the small-signal range |x| ≲ 1.5 where the series converges in
/// a handful of terms; 40 terms reach the f64 floor well beyond that.
pub fn bessel_j(order: i32, x: f64) -> f64 {
    let n = order.unsigned_abs() as i32;
    let sign = if order < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let half = 0.5 * x;
    // (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = term;
    let q = -half * half;
    for k in 1..40 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sign * sum
}

/// Fractional part of `a·b` in [-0.5, 0.5], computed with an error-free
/// product so that large cycle counts keep their sub-cycle digits.
pub fn frac_cycles(a: f64, b: f64) -> f64 {
    let p = a * b;
    let err = a.mul_add(b, -p);
    let r = p - p.round();
    let f = r + err;
    f - f.round()
}

/// Fractional cycles of the dispersion phase `2πφ·f²` (i.e. `f·v` with
/// `v = 2πφf`), keeping the rounding error of the inner product.
pub fn dispersion_cycles(phi: f64, f: f64) -> f64 {
    let p = 2.0 * PI * phi;
    let v = p * f;
    let ev = p.mul_add(f, -v);
    let c = frac_cycles(f, v) + f * ev;
    c - c.round()
}

/// `cos(2π·a·b)` with the argument reduced via [`frac_cycles`].
pub fn cos_cycles(a: f64, b: f64) -> f64 {
    (2.0 * PI * frac_cycles(a, b)).cos()
}

/// `sin(2π·a·b)` with the argument reduced via [`frac_cycles`].
pub fn sin_cycles(a: f64, b: f64) -> f64 {
    (2.0 * PI * frac_cycles(a, b)).sin()
}

/// Neumaier-compensated accumulator. Summation order is fixed by the caller,
/// so results are reproducible bit-for-bit.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub(crate) const GL_ORDER: usize = 8;

/// Gauss–Legendre nodes and weights on [-1, 1].
pub(crate) fn gauss_legendre() -> &'static [(f64, f64); GL_ORDER] {
    static RULE: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = [(0.0, 0.0); GL_ORDER];
        for i in 0..n {
            // Newton iteration from the Chebyshev-like initial guess
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
            rule[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

/// Composite Gauss–Legendre integral of `f` over [lo, hi] split into `panels`
/// equal panels.
pub(crate) fn integrate_panels<T, F>(lo: f64, hi: f64, panels: usize, f: &F) -> T
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    let rule = gauss_legendre();
    let panels = panels.max(1);
    let h = (hi - lo) / panels as f64;
    let mut total = T::default();
    for p in 0..panels {
        let a = lo + p as f64 * h;
        let mid = a + 0.5 * h;
        let mut acc = T::default();
        for &(x, w) in rule.iter() {
            acc = acc + f(mid + 0.5 * h * x) * w;
        }
        total = total + acc * (0.5 * h);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinc_branches_agree() {
        assert_eq!(sinc(0.0), 1.0);
        for x in [9.9e-5, 1.01e-4, 1e-3] {
            let direct = f64::sin(x) / x;
            assert!((sinc(x) - direct).abs() < 1e-15);
        }
        assert!(sinc(PI).abs() < 1e-15);
    }

    #[test]
    fn bessel_reference_values() {
        // Abramowitz & Stegun Table 9.1
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((bessel_j(1, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((bessel_j(0, 0.5) - 0.938_469_807_240_813).abs() < 1e-14);
        assert!((bessel_j(1, 1.5) - 0.557_936_507_910_099_6).abs() < 1e-14);
        assert!((bessel_j(2, 1.0) - 0.114_903_484_931_900_5).abs() < 1e-14);
        assert!((bessel_j(-1, 1.0) + bessel_j(1, 1.0)).abs() < 1e-16);
        assert_eq!(bessel_j(1, 0.0), 0.0);
    }

    #[test]
    fn bessel_recurrence() {
        // J_{n-1} + J_{n+1} = (2n/x) J_n
        for &x in &[0.1, 0.41, 1.2] {
            let lhs = bessel_j(0, x) + bessel_j(2, x);
            let rhs = 2.0 / x * bessel_j(1, x);
            assert!((lhs - rhs).abs() < 1e-14);
        }
    }

    #[test]
    fn frac_cycles_keeps_small_phases() {
        let f = frac_cycles(1e10, 79.4e-12);
        assert!((f - (-0.206)).abs() < 1e-12, "{f}");
        // 1e6 whole cycles plus a quarter
        let f = frac_cycles(4_000_001.0, 0.25);
        assert!((f - 0.25).abs() < 1e-15);
    }

    #[test]
    fn dispersion_cycles_matches_direct_product() {
        let phi = 1.26142e-21;
        for f in [4e9, 10.018e9, 16e9] {
            let direct = 2.0 * PI * phi * f * f;
            let c = dispersion_cycles(phi, f);
            assert!((c - (direct - direct.round())).abs() < 1e-12);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_and_oscillations() {
        let rule = gauss_legendre();
        let wsum: f64 = rule.iter().map(|r| r.1).sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        let v: f64 = integrate_panels(0.0, 1.0, 1, &|x: f64| x.powi(15));
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
        let v: f64 = integrate_panels(0.0, 10.0, 40, &|x: f64| (2.0 * PI * x).cos());
        assert!(v.abs() < 1e-13);
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let s: CompensatedSum = [1e16, 1.0, -1e16, 1.0].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }
}
