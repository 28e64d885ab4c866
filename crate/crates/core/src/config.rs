//! Run parameters, initial state and thermal occupation.
//!
//! Everything is dimensionless. Time is measured in units of the
//! spontaneous-emission rate of the dissipative reservoir (`γ = 1`), so the
//! Lorentzian width is `λ = 1/R`. Temperatures are stored as the ratios
//! `τ₁ = k_B T₁ / ħω₀` and `θ₂ = k_B T₂ / ħω_c`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Diagnostic, Error, Result};
use crate::grid::TimeGrid;

/// Modulation ratio that nulls `J₀(δ/Ω)`, as quoted for the driven presets.
pub const OPTIMAL_DELTA_OVER_OMEGA: f64 = 2.40483;

/// Minimum number of grid samples per modulation period.
pub const SAMPLES_PER_PERIOD: f64 = 40.0;

/// Sinusoidal modulation `ω₀ + δ cos(Ωt)` of the qubit frequency.
///
/// `(0, 0)` is the undriven qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Modulation {
    pub delta_over_omega_mod: f64,
    pub omega_mod_over_gamma: f64,
}

impl Modulation {
    pub const UNDRIVEN: Modulation = Modulation {
        delta_over_omega_mod: 0.0,
        omega_mod_over_gamma: 0.0,
    };

    pub fn optimal(omega_mod_over_gamma: f64) -> Self {
        Modulation {
            delta_over_omega_mod: OPTIMAL_DELTA_OVER_OMEGA,
            omega_mod_over_gamma,
        }
    }

    pub fn is_driven(&self) -> bool {
        self.delta_over_omega_mod != 0.0 && self.omega_mod_over_gamma != 0.0
    }

    /// Accumulated modulation phase `φ(t) = (δ/Ω) sin(Ωt)`.
    #[inline]
    pub fn phase(&self, t: f64) -> f64 {
        if self.omega_mod_over_gamma == 0.0 {
            0.0
        } else {
            self.delta_over_omega_mod * (self.omega_mod_over_gamma * t).sin()
        }
    }
}

impl Default for Modulation {
    fn default() -> Self {
        Modulation::optimal(5.0)
    }
}

/// Lorentzian dissipative reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DissipativeReservoir {
    /// Coupling ratio `γ/λ`. `f64::INFINITY` switches the channel off.
    #[serde(rename = "R")]
    pub r: f64,
    pub tau1: f64,
}

impl DissipativeReservoir {
    /// Spectral width in units of `γ`.
    pub fn lambda(&self) -> f64 {
        1.0 / self.r
    }
}

impl Default for DissipativeReservoir {
    fn default() -> Self {
        DissipativeReservoir { r: 100.0, tau1: 0.0 }
    }
}

/// Ohmic-class pure-dephasing reservoir `J(ω) = α ω^s e^{-ω/ω_c}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DephasingReservoir {
    pub alpha: f64,
    pub s: f64,
    pub theta2: f64,
    pub omega_c_over_gamma: f64,
}

impl Default for DephasingReservoir {
    fn default() -> Self {
        DephasingReservoir {
            alpha: 0.0,
            s: 1.0,
            theta2: 0.0,
            omega_c_over_gamma: 1.0,
        }
    }
}

/// Initial coherence `ζ(0) = ⟨g|ρ|e⟩` and ground population `P_g(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialState {
    /// Serialized as `[re, im]`.
    pub zeta0: Complex64,
    pub pg0: f64,
}

impl InitialState {
    /// The `(|e⟩ + |g⟩)/√2` state.
    pub const PLUS: InitialState = InitialState {
        zeta0: Complex64 { re: 0.5, im: 0.0 },
        pg0: 0.5,
    };

    pub const MAXIMALLY_MIXED: InitialState = InitialState {
        zeta0: Complex64 { re: 0.0, im: 0.0 },
        pg0: 0.5,
    };
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::PLUS
    }
}

/// Solver and quadrature tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericOptions {
    pub ode_rtol: f64,
    pub ode_atol: f64,
    pub ode_max_steps: usize,
    pub quad_tol: f64,
    /// Rates are masked where `|C(t)|` falls below this value.
    pub singular_guard: f64,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            ode_rtol: 1e-9,
            ode_atol: 1e-12,
            ode_max_steps: 50_000_000,
            quad_tol: 1e-9,
            singular_guard: 1e-12,
        }
    }
}

/// All parameters of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub modulation: Modulation,
    pub dissipative: DissipativeReservoir,
    pub dephasing: DephasingReservoir,
    pub initial: InitialState,
    /// Final time `γ t_max`.
    pub t_max: f64,
    pub n_samples: usize,
    /// Only enters the reported phase `ω̃(t)`.
    pub omega0_over_gamma: f64,
    pub numeric: NumericOptions,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            modulation: Modulation::default(),
            dissipative: DissipativeReservoir::default(),
            dephasing: DephasingReservoir::default(),
            initial: InitialState::default(),
            t_max: 100.0,
            n_samples: 4001,
            omega0_over_gamma: 1e5,
            numeric: NumericOptions::default(),
        }
    }
}

impl SimulationConfig {
    /// Same run with the modulation switched off.
    pub fn undriven(&self) -> Self {
        SimulationConfig {
            modulation: Modulation::UNDRIVEN,
            ..self.clone()
        }
    }

    pub fn grid(&self) -> TimeGrid {
        TimeGrid::uniform(self.t_max, self.n_samples)
    }

    /// Smallest `n_samples` that keeps the per-period resolution for the
    /// current modulation and `t_max`.
    pub fn min_samples(&self) -> usize {
        let omega = self.modulation.omega_mod_over_gamma;
        if omega > 0.0 && self.t_max.is_finite() {
            let period = std::f64::consts::TAU / omega;
            (self.t_max * SAMPLES_PER_PERIOD / period).ceil() as usize + 1
        } else {
            2
        }
    }
}

/// Bose-Einstein occupation `n̄ = 1/(e^{1/τ} − 1)` at the qubit frequency.
pub fn mean_occupation(tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!(
            "temperature must be non-negative, got {tau}"
        )));
    }
    if tau == 0.0 {
        return Ok(0.0);
    }
    if tau.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (1.0 / tau).exp_m1())
}

/// A configuration whose invariants have been checked, with derived
/// quantities cached.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedConfig {
    config: SimulationConfig,
    lambda: f64,
    n_bar: f64,
}

impl ValidatedConfig {
    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_bar(&self) -> f64 {
        self.n_bar
    }

    pub fn grid(&self) -> TimeGrid {
        self.config.grid()
    }

    pub fn into_inner(self) -> SimulationConfig {
        self.config
    }
}

/// Check every invariant of `config`, reporting each violation with its
/// field path.
pub fn validate(config: SimulationConfig) -> Result<ValidatedConfig> {
    let mut diags = Vec::new();
    let mut check = |ok: bool, path: &str, message: String| {
        if !ok {
            diags.push(Diagnostic {
                path: path.to_string(),
                message,
            });
        }
    };

    let m = &config.modulation;
    check(
        m.delta_over_omega_mod >= 0.0 && m.delta_over_omega_mod.is_finite(),
        "modulation.delta_over_omega_mod",
        format!("must be finite and >= 0, got {}", m.delta_over_omega_mod),
    );
    check(
        m.omega_mod_over_gamma >= 0.0 && m.omega_mod_over_gamma.is_finite(),
        "modulation.omega_mod_over_gamma",
        format!("must be finite and >= 0, got {}", m.omega_mod_over_gamma),
    );

    let d = &config.dissipative;
    check(d.r > 0.0, "dissipative.R", format!("must be > 0, got {}", d.r));
    check(
        d.tau1 >= 0.0 && d.tau1.is_finite(),
        "dissipative.tau1",
        format!("must be finite and >= 0, got {}", d.tau1),
    );

    let p = &config.dephasing;
    check(
        p.alpha >= 0.0 && p.alpha.is_finite(),
        "dephasing.alpha",
        format!("must be finite and >= 0, got {}", p.alpha),
    );
    check(
        p.s > 0.0 && p.s.is_finite(),
        "dephasing.s",
        format!("must be finite and > 0, got {}", p.s),
    );
    check(
        p.theta2 >= 0.0 && p.theta2.is_finite(),
        "dephasing.theta2",
        format!("must be finite and >= 0, got {}", p.theta2),
    );
    check(
        p.omega_c_over_gamma > 0.0 && p.omega_c_over_gamma.is_finite(),
        "dephasing.omega_c_over_gamma",
        format!("must be finite and > 0, got {}", p.omega_c_over_gamma),
    );

    let i = &config.initial;
    let pg_ok = (0.0..=1.0).contains(&i.pg0);
    check(
        pg_ok,
        "initial.pg0",
        format!("must lie in [0, 1], got {}", i.pg0),
    );
    let zeta_ok = i.zeta0.re.is_finite() && i.zeta0.im.is_finite();
    check(
        zeta_ok,
        "initial.zeta0",
        format!("must be finite, got {}", i.zeta0),
    );
    if pg_ok && zeta_ok {
        let bound = i.pg0 * (1.0 - i.pg0);
        check(
            i.zeta0.norm_sqr() <= bound * (1.0 + 1e-12),
            "initial.zeta0",
            format!(
                "|zeta0|^2 = {} exceeds pg0 (1 - pg0) = {bound}; not a density matrix",
                i.zeta0.norm_sqr()
            ),
        );
    }

    check(
        config.t_max > 0.0 && config.t_max.is_finite(),
        "t_max",
        format!("must be finite and > 0, got {}", config.t_max),
    );
    check(
        config.n_samples >= 2,
        "n_samples",
        format!("must be >= 2, got {}", config.n_samples),
    );
    if config.n_samples >= 2 && config.t_max > 0.0 {
        let need = config.min_samples();
        check(
            config.n_samples >= need,
            "n_samples",
            format!(
                "{} samples over t_max = {} give fewer than {} per modulation period; need >= {need}",
                config.n_samples, config.t_max, SAMPLES_PER_PERIOD
            ),
        );
    }
    check(
        config.omega0_over_gamma >= 0.0 && config.omega0_over_gamma.is_finite(),
        "omega0_over_gamma",
        format!("must be finite and >= 0, got {}", config.omega0_over_gamma),
    );

    let n = &config.numeric;
    check(
        n.ode_rtol > 0.0,
        "numeric.ode_rtol",
        format!("must be > 0, got {}", n.ode_rtol),
    );
    check(
        n.ode_atol > 0.0,
        "numeric.ode_atol",
        format!("must be > 0, got {}", n.ode_atol),
    );
    check(
        n.ode_max_steps > 0,
        "numeric.ode_max_steps",
        "must be > 0".to_string(),
    );
    check(
        n.quad_tol > 0.0,
        "numeric.quad_tol",
        format!("must be > 0, got {}", n.quad_tol),
    );
    check(
        n.singular_guard >= 0.0,
        "numeric.singular_guard",
        format!("must be >= 0, got {}", n.singular_guard),
    );

    if !diags.is_empty() {
        return Err(Error::InvalidConfig(diags));
    }

    let n_bar = mean_occupation(config.dissipative.tau1)?;
    Ok(ValidatedConfig {
        lambda: config.dissipative.lambda(),
        n_bar,
        config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn occupation_examples() {
        assert_eq!(mean_occupation(0.0).unwrap(), 0.0);
        // 1 / (e^{1/2.6} - 1) and 1 / (e^{1/260} - 1)
        assert_relative_eq!(mean_occupation(2.6).unwrap(), 2.131_972_537_451_78, epsilon = 1e-12);
        assert_relative_eq!(mean_occupation(260.0).unwrap(), 259.500_320_512_741_5, epsilon = 1e-9);
        assert!(mean_occupation(2.6e-3).unwrap() < 1e-100);
        assert!(mean_occupation(-1.0).is_err());
        assert!(mean_occupation(f64::NAN).is_err());
    }

    #[test]
    fn occupation_high_temperature() {
        for tau in [100.0, 300.0, 1e4] {
            let n = mean_occupation(tau).unwrap();
            assert!((n / tau - 1.0).abs() < 0.01);
            assert!((n - (tau - 0.5)).abs() < 1e-2);
        }
    }

    #[test]
    fn fig2_preset_is_valid() {
        let c = SimulationConfig {
            modulation: Modulation::optimal(5.0),
            dissipative: DissipativeReservoir { r: 100.0, tau1: 2.6e-3 },
            ..Default::default()
        };
        let v = validate(c).unwrap();
        assert_eq!(v.lambda(), 0.01);
        assert!(v.n_bar() < 1e-160);
    }

    #[test]
    fn rejects_non_positive_state() {
        let c = SimulationConfig {
            initial: InitialState {
                zeta0: Complex64::new(0.6, 0.0),
                pg0: 0.5,
            },
            ..Default::default()
        };
        match validate(c) {
            Err(Error::InvalidConfig(d)) => {
                assert_eq!(d.len(), 1);
                assert_eq!(d[0].path, "initial.zeta0");
            }
            other => panic!("expected invalid config, got {other:?}"),
        }
    }

    #[test]
    fn rejects_zero_coupling_and_reports_every_field() {
        let c = SimulationConfig {
            dissipative: DissipativeReservoir { r: 0.0, tau1: -1.0 },
            n_samples: 1,
            ..Default::default()
        };
        let Err(Error::InvalidConfig(d)) = validate(c) else {
            panic!("expected invalid config");
        };
        let paths: Vec<_> = d.iter().map(|d| d.path.as_str()).collect();
        assert!(paths.contains(&"dissipative.R"));
        assert!(paths.contains(&"dissipative.tau1"));
        assert!(paths.contains(&"n_samples"));
    }

    #[test]
    fn rejects_coarse_grid_for_driven_runs() {
        let c = SimulationConfig {
            t_max: 100.0,
            n_samples: 1000,
            ..Default::default()
        };
        assert!(validate(c.clone()).is_err());
        assert!(validate(c.undriven()).is_ok());
    }

    #[test]
    fn validation_is_idempotent() {
        let v = validate(SimulationConfig::default()).unwrap();
        let again = validate(v.config().clone()).unwrap();
        assert_eq!(v, again);
    }

    #[test]
    fn infinite_coupling_ratio_disables_dissipation() {
        let c = SimulationConfig {
            dissipative: DissipativeReservoir {
                r: f64::INFINITY,
                tau1: 0.0,
            },
            ..Default::default()
        };
        assert_eq!(validate(c).unwrap().lambda(), 0.0);
    }
}
