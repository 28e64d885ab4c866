//! Envelopes, coherence times and the dephasing-coupling threshold.

use serde::{Deserialize, Serialize};

use crate::config::{validate, SimulationConfig};
use crate::dephasing::{unit_dephasing_exponent, DephasingTrajectory};
use crate::dissipative::{solve_amplitude, thermal_decay, AmplitudeTrajectory};
use crate::dynamics::combine;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    #[default]
    Linear,
    /// Fritsch-Carlson monotone cubic between peaks.
    MonotoneCubic,
}

/// Upper envelope through the local maxima of a sampled series.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub peak_times: Vec<f64>,
    pub peak_values: Vec<f64>,
    pub kind: Interpolation,
    slopes: Vec<f64>,
}

/// Indices of strict interior local maxima.
fn local_maxima(series: &[f64]) -> Vec<usize> {
    (1..series.len().saturating_sub(1))
        .filter(|&i| series[i] > series[i - 1] && series[i] > series[i + 1])
        .collect()
}

/// Build the envelope of `series` sampled at `times`.
///
/// Knots are `t = 0` and every strict interior local maximum. Past the last
/// maximum there is nothing left to bridge, so the envelope follows the
/// series; in particular a series without interior maxima (monotone or flat)
/// is its own envelope.
pub fn envelope(times: &[f64], series: &[f64], kind: Interpolation) -> Envelope {
    assert_eq!(times.len(), series.len(), "times and series differ in length");
    let peaks = local_maxima(series);
    let knots: Vec<usize> = if peaks.is_empty() {
        (0..series.len()).collect()
    } else {
        let last = *peaks.last().unwrap();
        let mut k = Vec::with_capacity(peaks.len() + series.len() - last);
        k.push(0);
        k.extend(peaks);
        k.extend(last + 1..series.len());
        k
    };
    let peak_times: Vec<f64> = knots.iter().map(|&i| times[i]).collect();
    let peak_values: Vec<f64> = knots.iter().map(|&i| series[i]).collect();
    let slopes = match kind {
        Interpolation::Linear => Vec::new(),
        Interpolation::MonotoneCubic => pchip_slopes(&peak_times, &peak_values),
    };
    Envelope {
        peak_times,
        peak_values,
        kind,
        slopes,
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return vec![0.0; n];
    }
    let delta: Vec<f64> = (0..n - 1)
        .map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i]))
        .collect();
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let w1 = 2.0 * h1 + h0;
            let w2 = h1 + 2.0 * h0;
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    m
}

impl Envelope {
    /// Envelope value at `t`, clamped to the knot range.
    pub fn value_at(&self, t: f64) -> f64 {
        let x = &self.peak_times;
        let y = &self.peak_values;
        if t <= x[0] {
            return y[0];
        }
        if t >= x[x.len() - 1] {
            return y[y.len() - 1];
        }
        let j = x.partition_point(|&v| v <= t) - 1;
        let h = x[j + 1] - x[j];
        let s = (t - x[j]) / h;
        match self.kind {
            Interpolation::Linear => y[j] + s * (y[j + 1] - y[j]),
            Interpolation::MonotoneCubic => {
                let s2 = s * s;
                let s3 = s2 * s;
                (2.0 * s3 - 3.0 * s2 + 1.0) * y[j]
                    + (s3 - 2.0 * s2 + s) * h * self.slopes[j]
                    + (-2.0 * s3 + 3.0 * s2) * y[j + 1]
                    + (s3 - s2) * h * self.slopes[j + 1]
            }
        }
    }

    pub fn sample(&self, times: &[f64]) -> Vec<f64> {
        times.iter().map(|&t| self.value_at(t)).collect()
    }
}

/// First time the envelope of `series` falls through `zeta0 / e`, located by
/// linear inverse interpolation between the bracketing envelope samples.
/// `None` when the envelope never gets there on the grid.
pub fn coherence_time(times: &[f64], series: &[f64], zeta0: f64, kind: Interpolation) -> Option<f64> {
    if !(zeta0 > 0.0) || series.len() < 2 {
        return None;
    }
    let level = zeta0 / std::f64::consts::E;
    let env = envelope(times, series, kind).sample(times);
    (1..env.len())
        .find(|&i| env[i - 1] >= level && env[i] < level)
        .map(|i| {
            let (t0, t1) = (times[i - 1], times[i]);
            let (e0, e1) = (env[i - 1], env[i]);
            t0 + (e0 - level) / (e0 - e1) * (t1 - t0)
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ThresholdOptions {
    /// Stop once the bracket is narrower than this.
    pub alpha_tol: f64,
    /// Stop once `|h| ≤ match_rel_tol · t_c(undriven)`.
    pub match_rel_tol: f64,
    pub max_iterations: usize,
    pub interpolation: Interpolation,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        ThresholdOptions {
            alpha_tol: 1e-3,
            match_rel_tol: 0.01,
            max_iterations: 200,
            interpolation: Interpolation::Linear,
        }
    }
}

pub const DEFAULT_ALPHA_BRACKET: (f64, f64) = (1e-3, 2.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectionStep {
    pub alpha: f64,
    pub t_c_driven: Option<f64>,
    pub t_c_undriven: Option<f64>,
    /// `t_c(driven) − t_c(undriven)`; `±∞` when one branch never decays on
    /// the grid.
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub alpha_th: f64,
    /// Final `[lo, hi]` bracket.
    pub bracket: (f64, f64),
    pub history: Vec<BisectionStep>,
    pub t_c_driven: Option<f64>,
    pub t_c_undriven: Option<f64>,
    pub iterations: usize,
    /// Whether the coherence times agree within the matching tolerance at
    /// `alpha_th` (as opposed to stopping on bracket width alone).
    pub matched: bool,
}

/// Amplitudes and unit-coupling dephasing for both branches; `α` only
/// rescales `Γ̃`, so every bisection step reuses them.
struct ThresholdWorkspace {
    base: SimulationConfig,
    driven: AmplitudeTrajectory,
    undriven: AmplitudeTrajectory,
    unit_dephasing: DephasingTrajectory,
    n_bar: f64,
    interpolation: Interpolation,
}

impl ThresholdWorkspace {
    fn new(base: &SimulationConfig, interpolation: Interpolation) -> Result<Self> {
        let driven_cfg = validate(base.clone())?;
        validate(base.undriven())?;
        let grid = driven_cfg.grid();
        let r = base.dissipative.r;
        let (driven, undriven) = rayon::join(
            || solve_amplitude(&base.modulation, r, &grid, &base.numeric),
            || solve_amplitude(&base.undriven().modulation, r, &grid, &base.numeric),
        );
        let unit_dephasing =
            unit_dephasing_exponent(&base.dephasing, &grid, base.numeric.quad_tol)?;
        Ok(ThresholdWorkspace {
            base: base.clone(),
            driven: driven?,
            undriven: undriven?,
            unit_dephasing,
            n_bar: driven_cfg.n_bar(),
            interpolation,
        })
    }

    fn coherence_time(&self, amplitude: &AmplitudeTrajectory, alpha: f64) -> Result<Option<f64>> {
        let rates = thermal_decay(amplitude, self.n_bar, self.base.numeric.singular_guard);
        let deph = self.unit_dephasing.scaled(alpha);
        let traj = combine(amplitude, &rates, &deph, &self.base.initial, None)?;
        Ok(coherence_time(
            &traj.times,
            &traj.coherence_abs,
            self.base.initial.zeta0.norm(),
            self.interpolation,
        ))
    }

    fn step(&self, alpha: f64) -> Result<BisectionStep> {
        let t_c_driven = self.coherence_time(&self.driven, alpha)?;
        let t_c_undriven = self.coherence_time(&self.undriven, alpha)?;
        let h = match (t_c_driven, t_c_undriven) {
            (Some(d), Some(u)) => d - u,
            (None, Some(_)) => f64::INFINITY,
            (Some(_), None) => f64::NEG_INFINITY,
            (None, None) => {
                return Err(Error::GridExtension {
                    alpha,
                    t_max: self.base.t_max,
                })
            }
        };
        Ok(BisectionStep {
            alpha,
            t_c_driven,
            t_c_undriven,
            h,
        })
    }
}

fn is_matched(step: &BisectionStep, rel_tol: f64) -> bool {
    match step.t_c_undriven {
        Some(u) => step.h.is_finite() && step.h.abs() <= rel_tol * u,
        None => false,
    }
}

/// Bisection for the dephasing coupling at which the modulated and
/// unmodulated qubits share the same coherence time.
///
/// The driven branch uses `base.modulation`; the undriven branch switches it
/// off. The coupling `base.dephasing.alpha` is ignored. Either branch may
/// lack a coherence time at a bracket end (it never decays on the grid),
/// which fixes the sign of `h` there; both lacking one is a grid-extension
/// error.
pub fn alpha_threshold(
    base: &SimulationConfig,
    bracket: (f64, f64),
    options: &ThresholdOptions,
) -> Result<ThresholdResult> {
    let (mut lo, mut hi) = bracket;
    if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::DegenerateBracket {
            alpha_lo: lo,
            alpha_hi: hi,
        });
    }
    let work = ThresholdWorkspace::new(base, options.interpolation)?;
    let at_lo = work.step(lo)?;
    let at_hi = work.step(hi)?;
    let mut history = vec![at_lo, at_hi];
    if !(at_lo.h * at_hi.h < 0.0) {
        return Err(Error::Bracket {
            alpha_lo: lo,
            alpha_hi: hi,
            h_lo: at_lo.h,
            h_hi: at_hi.h,
        });
    }
    let lo_sign = at_lo.h.signum();

    let mut iterations = 0;
    let mut last = None;
    while iterations < options.max_iterations {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let step = work.step(mid)?;
        history.push(step);
        last = Some(step);
        if is_matched(&step, options.match_rel_tol) {
            break;
        }
        if step.h.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= options.alpha_tol {
            break;
        }
    }
    let last = last.expect("at least one bisection step");
    Ok(ThresholdResult {
        alpha_th: last.alpha,
        bracket: (lo, hi),
        t_c_driven: last.t_c_driven,
        t_c_undriven: last.t_c_undriven,
        matched: is_matched(&last, options.match_rel_tol),
        iterations,
        history,
    })
}
