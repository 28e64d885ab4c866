//! Excited-state amplitude of the modulated qubit in a Lorentzian reservoir
//! and the thermal decay functions built from it.
//!
//! With `γ = 1` the amplitude obeys
//!
//! ```text
//! Ċ(t) = −(λ/2) e^{iφ(t)} ∫₀ᵗ e^{−iφ(t′)} e^{−λ(t−t′)} C(t′) dt′,   φ(t) = (δ/Ω) sin Ωt.
//! ```
//!
//! The exponential kernel lets the history integral be carried as an
//! auxiliary variable `y(t)` with `ẏ = −λy + e^{−iφ}C`, `y(0) = 0`, which
//! turns the integro-differential equation into a four-dimensional real ODE.

use num_complex::Complex64;

use crate::config::{InitialState, Modulation, NumericOptions};
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::ode::{integrate_dense, OdeOptions, OdeStats};

/// Point limit for the quadratic-cost history quadrature.
pub const VOLTERRA_MAX_POINTS: usize = 20_000;

/// Sampled amplitude `C(t)` with `C(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrajectory {
    pub times: Vec<f64>,
    pub c: Vec<Complex64>,
    pub c_dot: Vec<Complex64>,
}

impl AmplitudeTrajectory {
    /// `|C(t)/C(0)|` at every sample.
    pub fn modulus_ratio(&self) -> Vec<f64> {
        let c0 = self.c[0].norm();
        self.c.iter().map(|c| c.norm() / c0).collect()
    }
}

/// Time-dependent dissipative rates on the amplitude grid.
///
/// `gamma1 = 2(n̄+1) f` and `gamma2 = 2n̄ f` are the full Lindblad rates, so
/// that `γ₁/2 = (n̄+1) f` and `γ₂/2 = n̄ f`.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipativeRates {
    pub times: Vec<f64>,
    pub n_bar: f64,
    /// `f(t) = −2 Re(Ċ/C)`; NaN where masked.
    pub f: Vec<f64>,
    pub gamma1: Vec<f64>,
    pub gamma2: Vec<f64>,
    /// `Γ(t) = −(2n̄+1) ln|C(t)/C(0)|`, the exponent of the coherence
    /// magnitude.
    pub big_gamma: Vec<f64>,
    /// `G(t) = ½∫ e^{2Γ} γ₁ dt′`, where `2Γ = ½∫(γ₁+γ₂)` is the population
    /// exponent. Diagnostic only; NaN once a masked sample is crossed.
    pub g_integral: Vec<f64>,
    /// Samples where `|C| < guard` and the rates are undefined.
    pub singular_mask: Vec<bool>,
}

fn ode_options(opts: &NumericOptions, modulation: &Modulation) -> OdeOptions {
    let h_max = if modulation.is_driven() {
        std::f64::consts::TAU / modulation.omega_mod_over_gamma / 8.0
    } else {
        f64::INFINITY
    };
    OdeOptions {
        rtol: opts.ode_rtol,
        atol: opts.ode_atol,
        max_steps: opts.ode_max_steps,
        h_max,
    }
}

/// Solve the amplitude equation on `grid` through the exponential-kernel
/// reduction, with dense output onto the grid.
pub fn solve_amplitude(
    modulation: &Modulation,
    r: f64,
    grid: &TimeGrid,
    opts: &NumericOptions,
) -> Result<AmplitudeTrajectory> {
    solve_amplitude_with_stats(modulation, r, grid, opts).map(|(traj, _)| traj)
}

pub fn solve_amplitude_with_stats(
    modulation: &Modulation,
    r: f64,
    grid: &TimeGrid,
    opts: &NumericOptions,
) -> Result<(AmplitudeTrajectory, OdeStats)> {
    let lambda = 1.0 / r;
    let half_lambda = 0.5 * lambda;
    let m = *modulation;
    let rhs = move |t: f64, s: &[f64; 4]| {
        let (sin, cos) = m.phase(t).sin_cos();
        // Ċ = −(λ/2) e^{iφ} y
        let (yr, yi) = (s[2], s[3]);
        let dc_re = -half_lambda * (cos * yr - sin * yi);
        let dc_im = -half_lambda * (sin * yr + cos * yi);
        // ẏ = −λ y + e^{−iφ} C
        let (cr, ci) = (s[0], s[1]);
        let dy_re = -lambda * yr + cos * cr + sin * ci;
        let dy_im = -lambda * yi + cos * ci - sin * cr;
        [dc_re, dc_im, dy_re, dy_im]
    };

    let (states, stats) = integrate_dense(
        rhs,
        [1.0, 0.0, 0.0, 0.0],
        grid.times(),
        &ode_options(opts, modulation),
    )?;

    let mut c = Vec::with_capacity(states.len());
    let mut c_dot = Vec::with_capacity(states.len());
    for (t, s) in grid.times().iter().zip(&states) {
        let y = Complex64::new(s[2], s[3]);
        c.push(Complex64::new(s[0], s[1]));
        c_dot.push(-half_lambda * Complex64::cis(m.phase(*t)) * y);
    }
    Ok((
        AmplitudeTrajectory {
            times: grid.times().to_vec(),
            c,
            c_dot,
        },
        stats,
    ))
}

/// Integrate the amplitude equation directly with trapezoidal history
/// quadrature and trapezoidal time stepping. Costs `O(n²)`; intended as an
/// independent cross-check of [`solve_amplitude`] on coarse grids.
pub fn volterra_oracle(
    modulation: &Modulation,
    r: f64,
    grid: &TimeGrid,
) -> Result<AmplitudeTrajectory> {
    let n = grid.len();
    if n > VOLTERRA_MAX_POINTS {
        return Err(Error::GridTooFine {
            points: n,
            limit: VOLTERRA_MAX_POINTS,
        });
    }
    let lambda = 1.0 / r;
    let h = grid.step();
    let times = grid.times();
    let phase: Vec<f64> = times.iter().map(|&t| modulation.phase(t)).collect();
    // F(t, t′) = (λ/2) e^{−λ(t−t′)} e^{i(φ(t) − φ(t′))}
    let kernel = |i: usize, j: usize| {
        Complex64::from_polar(
            0.5 * lambda * (-lambda * (times[i] - times[j])).exp(),
            phase[i] - phase[j],
        )
    };

    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut c_dot = vec![Complex64::new(0.0, 0.0); n];
    c[0] = Complex64::new(1.0, 0.0);
    let diag = 1.0 + h * h * lambda / 8.0;
    for i in 1..n {
        let mut history = 0.5 * kernel(i, 0) * c[0];
        for j in 1..i {
            history += kernel(i, j) * c[j];
        }
        history *= h;
        c[i] = (c[i - 1] + 0.5 * h * c_dot[i - 1] - 0.5 * h * history) / diag;
        c_dot[i] = -history - 0.25 * h * lambda * c[i];
    }
    Ok(AmplitudeTrajectory {
        times: times.to_vec(),
        c,
        c_dot,
    })
}

/// Thermal rates from the zero-temperature amplitude.
///
/// `Γ` comes straight from `ln|C|`, so isolated zeros of `C` only affect
/// the samples that land on them. `f`, `γ₁` and `γ₂` are masked, not
/// clamped, where `|C| < guard`.
pub fn thermal_decay(c: &AmplitudeTrajectory, n_bar: f64, guard: f64) -> DissipativeRates {
    let n = c.times.len();
    let scale = 2.0 * n_bar + 1.0;
    let ratio = c.modulus_ratio();

    let mut f = Vec::with_capacity(n);
    let mut gamma1 = Vec::with_capacity(n);
    let mut gamma2 = Vec::with_capacity(n);
    let mut big_gamma = Vec::with_capacity(n);
    let mut singular_mask = Vec::with_capacity(n);
    for i in 0..n {
        let singular = c.c[i].norm() < guard;
        let fi = if singular {
            f64::NAN
        } else {
            -2.0 * (c.c_dot[i] / c.c[i]).re
        };
        singular_mask.push(singular);
        f.push(fi);
        gamma1.push(2.0 * (n_bar + 1.0) * fi);
        gamma2.push(if n_bar == 0.0 { 0.0 } else { 2.0 * n_bar * fi });
        big_gamma.push(if ratio[i] == 0.0 {
            f64::INFINITY
        } else {
            -scale * ratio[i].ln()
        });
    }
    big_gamma[0] = 0.0;

    let mut g_integral = Vec::with_capacity(n);
    g_integral.push(0.0);
    let integrand = |i: usize| 0.5 * (2.0 * big_gamma[i]).exp() * gamma1[i];
    let mut acc = 0.0;
    for i in 1..n {
        acc += 0.5 * (c.times[i] - c.times[i - 1]) * (integrand(i - 1) + integrand(i));
        g_integral.push(acc);
    }

    DissipativeRates {
        times: c.times.clone(),
        n_bar,
        f,
        gamma1,
        gamma2,
        big_gamma,
        g_integral,
        singular_mask,
    }
}

/// `|ζ(t)|` and `P_g(t)` under the thermal dissipative channel alone.
pub fn dissipative_observables(
    c: &AmplitudeTrajectory,
    n_bar: f64,
    initial: &InitialState,
) -> (Vec<f64>, Vec<f64>) {
    let scale = 2.0 * n_bar + 1.0;
    let p_inf = (n_bar + 1.0) / scale;
    let zeta0 = initial.zeta0.norm();
    c.modulus_ratio()
        .into_iter()
        .map(|r| {
            let coherence_factor = r.powf(scale);
            let pop_factor = coherence_factor * coherence_factor;
            (
                zeta0 * coherence_factor,
                initial.pg0 * pop_factor + p_inf * (1.0 - pop_factor),
            )
        })
        .unzip()
}
