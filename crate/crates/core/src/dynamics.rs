//! Full qubit trajectory under both reservoirs.
//!
//! Decay rates of independent weak noise sources add, so the coherence
//! factors multiply: `|ζ(t)| = |ζ(0)| e^{−Γ(t)} e^{−Γ̃(t)}`. Dephasing leaves
//! the populations untouched.

use std::f64::consts::PI;

use crate::config::{InitialState, Modulation, ValidatedConfig};
use crate::dephasing::{dephasing_exponent, DephasingTrajectory};
use crate::dissipative::{solve_amplitude, thermal_decay, AmplitudeTrajectory, DissipativeRates};
use crate::error::{Error, Result};
use crate::grid::same_grid;

/// Slack allowed by [`positivity_audit`] before a sample is flagged.
pub const POSITIVITY_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct QubitTrajectory {
    pub times: Vec<f64>,
    pub coherence_abs: Vec<f64>,
    /// `arg ζ(t)` wrapped to `(−π, π]`, when the carrier phase was requested.
    pub coherence_phase: Option<Vec<f64>>,
    pub pg: Vec<f64>,
    pub positivity_ok: Vec<bool>,
}

impl QubitTrajectory {
    pub fn pe(&self) -> Vec<f64> {
        self.pg.iter().map(|p| 1.0 - p).collect()
    }
}

/// Inputs for the reported phase `ω̃(t) = ½(ω₀t + (δ/Ω) sin Ωt)`.
#[derive(Debug, Clone, Copy)]
pub struct CarrierPhase {
    pub omega0_over_gamma: f64,
    pub modulation: Modulation,
}

impl CarrierPhase {
    pub fn at(&self, t: f64) -> f64 {
        0.5 * (self.omega0_over_gamma * t + self.modulation.phase(t))
    }
}

fn wrap_phase(x: f64) -> f64 {
    let w = (x + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

fn sample_ok(coherence: f64, pg: f64) -> bool {
    (-POSITIVITY_SLACK..=1.0 + POSITIVITY_SLACK).contains(&pg)
        && coherence * coherence <= pg * (1.0 - pg) + POSITIVITY_SLACK
}

/// Assemble coherence and population from the two channels.
///
/// All three inputs must sit on the same grid; `n̄` is taken from `rates`.
pub fn combine(
    c_traj: &AmplitudeTrajectory,
    rates: &DissipativeRates,
    deph: &DephasingTrajectory,
    initial: &InitialState,
    phase: Option<CarrierPhase>,
) -> Result<QubitTrajectory> {
    if !same_grid(&c_traj.times, &rates.times) {
        return Err(Error::GridMismatch("amplitude vs dissipative rates".into()));
    }
    if !same_grid(&c_traj.times, &deph.times) {
        return Err(Error::GridMismatch("amplitude vs dephasing".into()));
    }
    let n_bar = rates.n_bar;
    let p_inf = (n_bar + 1.0) / (2.0 * n_bar + 1.0);
    let zeta0 = initial.zeta0.norm();

    let n = c_traj.times.len();
    let mut coherence_abs = Vec::with_capacity(n);
    let mut pg = Vec::with_capacity(n);
    let mut positivity_ok = Vec::with_capacity(n);
    for i in 0..n {
        let dissipative = (-rates.big_gamma[i]).exp();
        let z = zeta0 * dissipative * (-deph.gamma_tilde[i]).exp();
        let population_factor = dissipative * dissipative;
        let p = initial.pg0 * population_factor + p_inf * (1.0 - population_factor);
        coherence_abs.push(z);
        pg.push(p);
        positivity_ok.push(sample_ok(z, p));
    }

    let coherence_phase = phase.map(|ph| {
        let arg0 = initial.zeta0.arg();
        c_traj
            .times
            .iter()
            .map(|&t| wrap_phase(arg0 + ph.at(t)))
            .collect()
    });

    Ok(QubitTrajectory {
        times: c_traj.times.clone(),
        coherence_abs,
        coherence_phase,
        pg,
        positivity_ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport {
    /// `min(P_g, 1 − P_g, P_g(1 − P_g) − |ζ|²)` over all samples.
    pub worst_margin: f64,
    pub worst_index: usize,
    pub violations: usize,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Check `0 ≤ P_g ≤ 1` and `|ζ|² ≤ P_g(1 − P_g)` at every sample.
pub fn positivity_audit(traj: &QubitTrajectory) -> PositivityReport {
    let mut report = PositivityReport {
        worst_margin: f64::INFINITY,
        worst_index: 0,
        violations: 0,
    };
    for (i, (&z, &p)) in traj.coherence_abs.iter().zip(&traj.pg).enumerate() {
        let margin = p.min(1.0 - p).min(p * (1.0 - p) - z * z);
        // NaN margins count as violations
        if !(margin >= -POSITIVITY_SLACK) {
            report.violations += 1;
        }
        if !(margin >= report.worst_margin) {
            report.worst_margin = margin;
            report.worst_index = i;
        }
    }
    report
}

/// Everything computed for one configuration.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: ValidatedConfig,
    pub amplitude: AmplitudeTrajectory,
    pub rates: DissipativeRates,
    pub dephasing: DephasingTrajectory,
    pub trajectory: QubitTrajectory,
}

/// Run both channels for `config` and assemble the trajectory.
pub fn simulate(config: &ValidatedConfig) -> Result<Simulation> {
    let c = config.config();
    let grid = config.grid();
    let amplitude = solve_amplitude(&c.modulation, c.dissipative.r, &grid, &c.numeric)?;
    let dephasing = dephasing_exponent(&c.dephasing, &grid, c.numeric.quad_tol)?;
    assemble(config, amplitude, dephasing)
}

/// Build the rates and trajectory from already-computed channel outputs.
pub fn assemble(
    config: &ValidatedConfig,
    amplitude: AmplitudeTrajectory,
    dephasing: DephasingTrajectory,
) -> Result<Simulation> {
    let c = config.config();
    let rates = thermal_decay(&amplitude, config.n_bar(), c.numeric.singular_guard);
    let trajectory = combine(
        &amplitude,
        &rates,
        &dephasing,
        &c.initial,
        Some(CarrierPhase {
            omega0_over_gamma: c.omega0_over_gamma,
            modulation: c.modulation,
        }),
    )?;
    Ok(Simulation {
        config: config.clone(),
        amplitude,
        rates,
        dephasing,
        trajectory,
    })
}
