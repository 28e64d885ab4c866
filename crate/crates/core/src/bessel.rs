//! Bessel functions of the first kind, enough to locate the modulation
//! ratio that cancels the carrier term of the Jacobi-Anger expansion
//! `e^{ia sin θ} = Σₙ Jₙ(a) e^{inθ}`.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 12.0;

/// Power series `Σ (−x²/4)^k / (k! (k+n)!) · (x/2)^n`.
fn series(n: u32, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= 0.5 * x / k as f64;
    }
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + n as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > 0.25 * x * x {
            break;
        }
        k += 1.0;
        if k > 500.0 {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion, truncated at the smallest term.
fn asymptotic(n: u32, x: f64) -> f64 {
    let mu = 4.0 * (n as f64).powi(2);
    let z = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * z);
        if term.abs() >= last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let chi = x - (0.5 * n as f64 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `J₀(x)`: power series for `|x| ≤ 12`, asymptotic expansion beyond.
pub fn bessel_j0(x: f64) -> f64 {
    bessel_jn(0, x)
}

/// `Jₙ(x)` for integer order `n ≥ 0`.
pub fn bessel_jn(n: u32, x: f64) -> f64 {
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let ax = x.abs();
    let value = if ax <= SERIES_LIMIT.max(n as f64) {
        series(n, ax)
    } else {
        asymptotic(n, ax)
    };
    sign * value
}

/// First positive zero of `J₀`, found by bisection on the series.
pub fn j0_first_zero() -> f64 {
    let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if series(0, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
