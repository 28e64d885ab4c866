//! Dormand-Prince 5(4) embedded pair with Hairer's fourth-order continuous
//! extension, for small fixed-size real systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Upper bound on the step size; `f64::INFINITY` for none.
    pub h_max: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 10_000_000,
            h_max: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn scaled_norm<const N: usize>(v: &[f64; N], scale: &[f64; N]) -> f64 {
    let s: f64 = v.iter().zip(scale).map(|(x, s)| (x / s).powi(2)).sum();
    (s / N as f64).sqrt()
}

/// Integrate `y' = rhs(t, y)` from `t_out[0]` and sample the solution at
/// every point of `t_out` (ascending) through the continuous extension.
pub fn integrate_dense<const N: usize, F>(
    rhs: F,
    y0: [f64; N],
    t_out: &[f64],
    opts: &OdeOptions,
) -> Result<(Vec<[f64; N]>, OdeStats)>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut out = Vec::with_capacity(t_out.len());
    let mut stats = OdeStats::default();
    if t_out.is_empty() {
        return Ok((out, stats));
    }
    let t0 = t_out[0];
    let t_end = *t_out.last().unwrap();
    out.push(y0);
    let mut next = 1;
    while next < t_out.len() && t_out[next] <= t0 {
        out.push(y0);
        next += 1;
    }
    if next == t_out.len() {
        return Ok((out, stats));
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    stats.rhs_evals += 1;
    let mut h = initial_step(&rhs, t, &y, &k1, t_end - t0, opts, &mut stats);
    let mut last_rejected = false;

    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::TooManySteps {
                target: t_end,
                steps: opts.max_steps,
            });
        }
        h = h.min(opts.h_max);
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t, h });
        }

        let k2 = rhs(t + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            t + C4 * h,
            &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            t + C5 * h,
            &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &combine(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = combine(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let t_new = if last { t_end } else { t + h };
        let k7 = rhs(t_new, &y_new);
        stats.rhs_evals += 6;

        let mut err_vec = [0.0; N];
        let mut scale = [0.0; N];
        for i in 0..N {
            err_vec[i] = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            scale[i] = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
        }
        let err = scaled_norm(&err_vec, &scale);

        if err <= 1.0 {
            stats.accepted += 1;
            // Continuous extension coefficients.
            let mut r2 = [0.0; N];
            let mut r3 = [0.0; N];
            let mut r4 = [0.0; N];
            let mut r5 = [0.0; N];
            for i in 0..N {
                let dy = y_new[i] - y[i];
                let bspl = h * k1[i] - dy;
                r2[i] = dy;
                r3[i] = bspl;
                r4[i] = dy - h * k7[i] - bspl;
                r5[i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                        + D7 * k7[i]);
            }
            while next < t_out.len() && (t_out[next] <= t_new || last) {
                let theta = ((t_out[next] - t) / h).clamp(0.0, 1.0);
                let theta1 = 1.0 - theta;
                let mut yi = [0.0; N];
                for i in 0..N {
                    yi[i] = y[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
                }
                out.push(yi);
                next += 1;
            }
            if last || next == t_out.len() {
                return Ok((out, stats));
            }
            t = t_new;
            y = y_new;
            k1 = k7;
            let mut fac = 0.9 * err.max(1e-10).powf(-0.2);
            fac = fac.clamp(0.2, 10.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h *= fac;
            last_rejected = false;
        } else {
            stats.rejected += 1;
            let fac = (0.9 * err.powf(-0.2)).max(0.2);
            h *= fac;
            last_rejected = true;
        }
    }
}

fn initial_step<const N: usize, F>(
    rhs: &F,
    t: f64,
    y: &[f64; N],
    f0: &[f64; N],
    span: f64,
    opts: &OdeOptions,
    stats: &mut OdeStats,
) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut scale = [0.0; N];
    for i in 0..N {
        scale[i] = opts.atol + opts.rtol * y[i].abs();
    }
    let d0 = scaled_norm(y, &scale);
    let d1 = scaled_norm(f0, &scale);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span).min(opts.h_max);
    let y1 = combine(y, h0, &[(1.0, f0)]);
    let f1 = rhs(t + h0, &y1);
    stats.rhs_evals += 1;
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = scaled_norm(&diff, &scale) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span).min(opts.h_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_dense_output() {
        let times: Vec<f64> = (0..=200).map(|i| i as f64 * 0.05).collect();
        let (ys, stats) =
            integrate_dense(|_, y: &[f64; 1]| [-y[0]], [1.0], &times, &OdeOptions::default())
                .unwrap();
        assert_eq!(ys.len(), times.len());
        for (t, y) in times.iter().zip(&ys) {
            assert!((y[0] - (-t).exp()).abs() < 1e-9, "t = {t}");
        }
        // dense output means far fewer steps than output points
        assert!(stats.accepted < times.len());
    }

    #[test]
    fn harmonic_oscillator_long_run() {
        let times: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.1).collect();
        let (ys, _) = integrate_dense(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            [1.0, 0.0],
            &times,
            &OdeOptions::default(),
        )
        .unwrap();
        for (t, y) in times.iter().zip(&ys) {
            assert!((y[0] - t.cos()).abs() < 1e-7, "t = {t}");
        }
    }

    #[test]
    fn step_budget_is_enforced() {
        let times = [0.0, 100.0];
        let opts = OdeOptions {
            max_steps: 3,
            ..Default::default()
        };
        let r = integrate_dense(|t, _: &[f64; 1]| [(50.0 * t).cos()], [0.0], &times, &opts);
        assert!(matches!(r, Err(Error::TooManySteps { .. })));
    }
}
