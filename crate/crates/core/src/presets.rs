//! Named scenarios: the driven/undriven comparisons at three dissipative
//! temperatures, the zero-temperature dephasing-coupling family, the combined
//! noise comparisons and the threshold regimes.
//!
//! Every preset shares `R = 100`, `Ω = 5γ` and `δ = 2.40483 Ω` for its
//! driven branch.

use crate::config::{DephasingReservoir, DissipativeReservoir, Modulation, SimulationConfig};

/// How a preset expands into individual runs.
#[derive(Debug, Clone, PartialEq)]
pub enum PresetKind {
    /// The base configuration and its undriven twin.
    DrivenVsUndriven,
    /// One run per dephasing coupling, all with the base modulation.
    AlphaFamily(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub base: SimulationConfig,
    pub kind: PresetKind,
}

/// One labelled run of a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetRun {
    pub label: String,
    pub config: SimulationConfig,
}

impl Preset {
    pub fn runs(&self) -> Vec<PresetRun> {
        match &self.kind {
            PresetKind::DrivenVsUndriven => vec![
                PresetRun {
                    label: "driven".into(),
                    config: self.base.clone(),
                },
                PresetRun {
                    label: "undriven".into(),
                    config: self.base.undriven(),
                },
            ],
            PresetKind::AlphaFamily(alphas) => alphas
                .iter()
                .map(|&alpha| {
                    let mut config = self.base.clone();
                    config.dephasing.alpha = alpha;
                    PresetRun {
                        label: format!("alpha_{alpha}"),
                        config,
                    }
                })
                .collect(),
        }
    }
}

const R: f64 = 100.0;
const OMEGA: f64 = 5.0;

/// Window for the dissipative-only comparisons: long enough for the
/// high-temperature driven qubit to lose coherence.
const DISSIPATIVE_T_MAX: f64 = 1500.0;
const DISSIPATIVE_SAMPLES: usize = 60_001;

/// Window for the combined-noise comparisons and the threshold search. It
/// contains the low-temperature undriven crossing at the weakest bracketed
/// coupling.
const COMBINED_T_MAX: f64 = 200.0;
const COMBINED_SAMPLES: usize = 8001;

fn dissipative(tau1: f64) -> SimulationConfig {
    SimulationConfig {
        modulation: Modulation::optimal(OMEGA),
        dissipative: DissipativeReservoir { r: R, tau1 },
        t_max: DISSIPATIVE_T_MAX,
        n_samples: DISSIPATIVE_SAMPLES,
        ..Default::default()
    }
}

fn combined(tau1: f64, theta2: f64) -> SimulationConfig {
    SimulationConfig {
        modulation: Modulation::optimal(OMEGA),
        dissipative: DissipativeReservoir { r: R, tau1 },
        dephasing: DephasingReservoir {
            alpha: 0.01,
            s: 1.0,
            theta2,
            omega_c_over_gamma: 1.0,
        },
        t_max: COMBINED_T_MAX,
        n_samples: COMBINED_SAMPLES,
        ..Default::default()
    }
}

pub const LOW_T: (f64, f64) = (2.6e-3, 1e-5);
pub const MID_T: (f64, f64) = (2.6, 1e-2);
pub const HIGH_T: (f64, f64) = (260.0, 1.0);

pub fn all() -> Vec<Preset> {
    use PresetKind::*;
    vec![
        Preset {
            name: "fig2",
            description: "dissipative only, low temperature (tau1 = 2.6e-3)",
            base: dissipative(2.6e-3),
            kind: DrivenVsUndriven,
        },
        Preset {
            name: "fig3",
            description: "dissipative only, intermediate temperature (tau1 = 2.6)",
            base: dissipative(2.6),
            kind: DrivenVsUndriven,
        },
        Preset {
            name: "fig4",
            description: "dissipative only, high temperature (tau1 = 260)",
            base: dissipative(260.0),
            kind: DrivenVsUndriven,
        },
        Preset {
            name: "fig5",
            description: "undriven, zero temperature, alpha in {0.01, 0.1, 0.5, 1}",
            base: SimulationConfig {
                modulation: Modulation::UNDRIVEN,
                dissipative: DissipativeReservoir { r: R, tau1: 0.0 },
                dephasing: DephasingReservoir::default(),
                t_max: 300.0,
                n_samples: 6001,
                ..Default::default()
            },
            kind: AlphaFamily(vec![0.01, 0.1, 0.5, 1.0]),
        },
        Preset {
            name: "fig6a",
            description: "both reservoirs, alpha = 0.01, tau1 = 2.6e-3, theta2 = 1e-5",
            base: combined(LOW_T.0, LOW_T.1),
            kind: DrivenVsUndriven,
        },
        Preset {
            name: "fig6b",
            description: "both reservoirs, alpha = 0.01, tau1 = 2.6, theta2 = 1e-2",
            base: combined(MID_T.0, MID_T.1),
            kind: DrivenVsUndriven,
        },
        Preset {
            name: "fig6c",
            description: "both reservoirs, alpha = 0.01, tau1 = 260, theta2 = 1",
            base: combined(HIGH_T.0, HIGH_T.1),
            kind: DrivenVsUndriven,
        },
        Preset {
            name: "lowT",
            description: "threshold regime: tau1 = 2.6e-3, theta2 = 1e-5",
            base: combined(LOW_T.0, LOW_T.1),
            kind: DrivenVsUndriven,
        },
        Preset {
            name: "midT",
            description: "threshold regime: tau1 = 2.6, theta2 = 1e-2",
            base: combined(MID_T.0, MID_T.1),
            kind: DrivenVsUndriven,
        },
        Preset {
            name: "highT",
            description: "threshold regime: tau1 = 260, theta2 = 1",
            base: combined(HIGH_T.0, HIGH_T.1),
            kind: DrivenVsUndriven,
        },
    ]
}

pub fn find(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}

pub fn names() -> Vec<&'static str> {
    all().iter().map(|p| p.name).collect()
}
