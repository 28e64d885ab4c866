//! Pure-dephasing channel with an Ohmic-class spectral density.
//!
//! In the reduced variable `x = ω/ω_c` and `b = ω_c t`,
//!
//! ```text
//! γ₃(t) = α ω_c^s     ∫₀^∞ x^{s−1} e^{−x} coth(x/2θ₂) sin(bx) dx
//! Γ̃(t) = 2α ω_c^{s−1} ∫₀^∞ x^{s−2} e^{−x} coth(x/2θ₂) (1 − cos bx) dx
//! ```
//!
//! with `coth → 1` at `θ₂ = 0`. The coherence factor is `e^{−Γ̃(t)}`, and
//! `dΓ̃/dt = 2γ₃`.
//!
//! The dephasing coupling `σ_z` commutes with the modulated qubit
//! Hamiltonian, so nothing here depends on the modulation.

use rayon::prelude::*;

use crate::config::{DephasingReservoir, Modulation};
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::quadrature;

/// Upper integration limit for `s ≤ 1` and moderate temperature; `e^{−35}`
/// is below `10⁻¹⁴`.
pub const CUTOFF_X: f64 = 35.0;

#[derive(Debug, Clone, PartialEq)]
pub struct DephasingTrajectory {
    pub times: Vec<f64>,
    /// `γ₃(t)`. Integrating it gives `Γ̃/2`; use `gamma_tilde` for the
    /// coherence factor.
    pub gamma3: Vec<f64>,
    pub gamma_tilde: Vec<f64>,
}

impl DephasingTrajectory {
    pub fn zeros(times: &[f64]) -> Self {
        DephasingTrajectory {
            times: times.to_vec(),
            gamma3: vec![0.0; times.len()],
            gamma_tilde: vec![0.0; times.len()],
        }
    }

    /// Rescale to a different coupling; both functions are linear in `α`.
    pub fn scaled(&self, factor: f64) -> Self {
        DephasingTrajectory {
            times: self.times.clone(),
            gamma3: self.gamma3.iter().map(|g| g * factor).collect(),
            gamma_tilde: self.gamma_tilde.iter().map(|g| g * factor).collect(),
        }
    }
}

/// `J(ω) = α ω^s e^{−ω}` with `ω` in units of `ω_c`.
pub fn ohmic_density(omega: f64, alpha: f64, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("Ohmicity s must be > 0, got {s}")));
    }
    if !(omega >= 0.0) {
        return Err(Error::Domain(format!(
            "frequency must be >= 0, got {omega}"
        )));
    }
    if alpha == 0.0 || omega == 0.0 {
        return Ok(0.0);
    }
    Ok(alpha * omega.powf(s) * (-omega).exp())
}

/// `x · coth(x / 2θ)`, finite at `x → 0` where it tends to `2θ`.
#[inline]
fn x_coth(x: f64, theta: f64) -> f64 {
    if theta == 0.0 {
        return x;
    }
    let u = x / (2.0 * theta);
    if u < 1e-4 {
        // coth u ≈ 1/u + u/3
        2.0 * theta + x * u / 3.0
    } else if u > 20.0 {
        x
    } else {
        x / u.tanh()
    }
}

/// Integration limit: grows past `CUTOFF_X` only when `x^{s−1}` or the
/// thermal factor would lift the tail above `e^{−35}`.
fn cutoff(s: f64, theta: f64) -> f64 {
    let boost = (2.0 * theta).max(1.0).ln();
    let mut x = CUTOFF_X;
    while (s - 1.0) * x.ln() + boost - x > -CUTOFF_X {
        x += 1.0;
    }
    x
}

/// `(γ₃, Γ̃)` at a single time, in units of `γ`, for unit coupling.
fn unit_point(t: f64, reservoir: &DephasingReservoir, tol: f64) -> Result<(f64, f64)> {
    let wc = reservoir.omega_c_over_gamma;
    let b = wc * t;
    if b == 0.0 {
        return Ok((0.0, 0.0));
    }
    let s = reservoir.s;
    let theta = reservoir.theta2;
    let upper = cutoff(s, theta);
    let panel = (std::f64::consts::TAU / b).min(upper);
    let integrand = |x: f64| {
        // x^{s−1} e^{−x} coth(x/2θ) = x^{s−2} e^{−x} · x coth(x/2θ)
        let weight = x.powf(s - 2.0) * (-x).exp() * x_coth(x, theta);
        let half_sin = (0.5 * b * x).sin();
        [
            weight * (b * x).sin(),
            // (1 − cos bx)/x = 2 sin²(bx/2)/x
            2.0 * weight * 2.0 * half_sin * half_sin / x,
        ]
    };
    let r = quadrature::integrate(integrand, 0.0, upper, panel, tol)?;
    Ok((r.value[0] * wc.powf(s), r.value[1] * wc.powf(s - 1.0)))
}

/// `γ₃` and `Γ̃` on `grid` for unit coupling `α = 1`.
pub fn unit_dephasing_exponent(
    reservoir: &DephasingReservoir,
    grid: &TimeGrid,
    tol: f64,
) -> Result<DephasingTrajectory> {
    let points: Vec<(f64, f64)> = grid
        .times()
        .par_iter()
        .map(|&t| unit_point(t, reservoir, tol))
        .collect::<Result<_>>()?;
    let (gamma3, gamma_tilde) = points.into_iter().unzip();
    Ok(DephasingTrajectory {
        times: grid.times().to_vec(),
        gamma3,
        gamma_tilde,
    })
}

/// `γ₃(t)` and `Γ̃(t)` on `grid` (times in units of `1/γ`).
///
/// Each time point is an adaptive Gauss-Kronrod integral over
/// `x ∈ [0, 35]` with panels no wider than one period of `cos(ω_c t x)`.
/// `α = 0` short-circuits to zero.
pub fn dephasing_exponent(
    reservoir: &DephasingReservoir,
    grid: &TimeGrid,
    tol: f64,
) -> Result<DephasingTrajectory> {
    if !(reservoir.s > 0.0) {
        return Err(Error::Domain(format!(
            "Ohmicity s must be > 0, got {}",
            reservoir.s
        )));
    }
    if reservoir.alpha == 0.0 {
        return Ok(DephasingTrajectory::zeros(grid.times()));
    }
    Ok(unit_dephasing_exponent(reservoir, grid, tol)?.scaled(reservoir.alpha))
}

/// Evaluate the dephasing exponent for two modulations and report whether
/// the samples are bit-identical. They always are: the exponent takes no
/// modulation input, because the dephasing coupling commutes with the
/// modulated qubit Hamiltonian.
pub fn modulation_independence_certificate(
    reservoir: &DephasingReservoir,
    modulation_a: &Modulation,
    modulation_b: &Modulation,
    grid: &TimeGrid,
    tol: f64,
) -> Result<bool> {
    let evaluate = |_modulation: &Modulation| dephasing_exponent(reservoir, grid, tol);
    let a = evaluate(modulation_a)?;
    let b = evaluate(modulation_b)?;
    let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    Ok(bits(&a.gamma_tilde) == bits(&b.gamma_tilde) && bits(&a.gamma3) == bits(&b.gamma3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reservoir(alpha: f64, theta2: f64, wc: f64) -> DephasingReservoir {
        DephasingReservoir {
            alpha,
            s: 1.0,
            theta2,
            omega_c_over_gamma: wc,
        }
    }

    #[test]
    fn density_examples() {
        assert_eq!(ohmic_density(1.3, 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(ohmic_density(0.0, 0.5, 1.0).unwrap(), 0.0);
        let at_cutoff = ohmic_density(1.0, 0.7, 1.0).unwrap();
        assert!((at_cutoff - 0.7 * (-1.0f64).exp()).abs() < 1e-15);
        assert!(ohmic_density(40.0, 1.0, 1.0).unwrap() < 1e-15);
        assert!(ohmic_density(1.0, 1.0, 0.0).is_err());
        assert!(ohmic_density(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn ohmic_density_peaks_at_cutoff() {
        let grid: Vec<f64> = (1..4000).map(|i| i as f64 * 1e-3).collect();
        let best = grid
            .iter()
            .copied()
            .max_by(|a, b| {
                let ja = ohmic_density(*a, 1.0, 1.0).unwrap();
                let jb = ohmic_density(*b, 1.0, 1.0).unwrap();
                ja.total_cmp(&jb)
            })
            .unwrap();
        assert!((best - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn zero_temperature_closed_forms() {
        let wc = 1.0;
        let grid = TimeGrid::uniform(100.0, 401);
        let traj = dephasing_exponent(&reservoir(0.8, 0.0, wc), &grid, 1e-9).unwrap();
        for (i, &t) in grid.times().iter().enumerate() {
            let b = wc * t;
            let tilde = 0.8 * (1.0 + b * b).ln();
            let rate = 0.8 * wc * wc * t / (1.0 + b * b);
            assert!((traj.gamma_tilde[i] - tilde).abs() < 1e-6, "t = {t}");
            assert!((traj.gamma3[i] - rate).abs() < 1e-6, "t = {t}");
        }
        assert_eq!(traj.gamma_tilde[0], 0.0);
        assert_eq!(traj.gamma3[0], 0.0);
    }

    #[test]
    fn cutoff_ratio_rescales_time() {
        let grid = TimeGrid::uniform(10.0, 21);
        let traj = dephasing_exponent(&reservoir(1.0, 0.0, 3.0), &grid, 1e-9).unwrap();
        for (i, &t) in grid.times().iter().enumerate() {
            let b = 3.0 * t;
            assert!((traj.gamma_tilde[i] - (1.0 + b * b).ln()).abs() < 1e-6);
            assert!((traj.gamma3[i] - 9.0 * t / (1.0 + b * b)).abs() < 1e-6);
        }
    }

    #[test]
    fn disabled_channel_is_zero() {
        let grid = TimeGrid::uniform(10.0, 11);
        let traj = dephasing_exponent(&reservoir(0.0, 0.5, 1.0), &grid, 1e-9).unwrap();
        assert!(traj.gamma_tilde.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn exponent_derivative_is_twice_the_rate() {
        let grid = TimeGrid::uniform(20.0, 2001);
        for theta in [0.0, 0.01, 1.0] {
            let traj = dephasing_exponent(&reservoir(0.5, theta, 1.0), &grid, 1e-10).unwrap();
            let h = grid.step();
            for i in 1..grid.len() - 1 {
                let deriv = (traj.gamma_tilde[i + 1] - traj.gamma_tilde[i - 1]) / (2.0 * h);
                assert!(
                    (deriv - 2.0 * traj.gamma3[i]).abs() < 1e-4,
                    "θ = {theta}, t = {}",
                    grid.times()[i]
                );
            }
        }
    }

    #[test]
    fn exponent_grows_with_temperature() {
        let grid = TimeGrid::uniform(30.0, 61);
        let mut previous: Option<Vec<f64>> = None;
        for theta in [0.0, 1e-5, 1e-2, 0.3, 1.0, 3.0] {
            let traj = dephasing_exponent(&reservoir(0.3, theta, 1.0), &grid, 1e-9).unwrap();
            assert!(traj.gamma_tilde.iter().all(|&g| g >= 0.0));
            if let Some(prev) = &previous {
                for (a, b) in prev.iter().zip(&traj.gamma_tilde) {
                    assert!(*b >= a - 1e-12);
                }
            }
            previous = Some(traj.gamma_tilde);
        }
    }

    #[test]
    fn ohmic_exponent_is_monotone_in_time() {
        let grid = TimeGrid::uniform(50.0, 201);
        let traj = dephasing_exponent(&reservoir(1.0, 1.0, 1.0), &grid, 1e-9).unwrap();
        for w in traj.gamma_tilde.windows(2) {
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn non_ohmic_exponents_run() {
        let grid = TimeGrid::uniform(10.0, 11);
        for s in [0.5, 2.0, 3.0] {
            let r = DephasingReservoir {
                s,
                ..reservoir(0.1, 0.1, 1.0)
            };
            let traj = dephasing_exponent(&r, &grid, 1e-8).unwrap();
            assert!(traj.gamma_tilde.iter().all(|g| g.is_finite() && *g >= 0.0));
        }
    }

    #[test]
    fn certificate_for_preset_modulations() {
        let grid = TimeGrid::uniform(10.0, 51);
        let ok = modulation_independence_certificate(
            &reservoir(0.1, 0.01, 1.0),
            &Modulation::UNDRIVEN,
            &Modulation::optimal(5.0),
            &grid,
            1e-9,
        )
        .unwrap();
        assert!(ok);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn certificate_holds_for_random_modulations(
            d1 in 0.0f64..5.0, o1 in 0.0f64..20.0,
            d2 in 0.0f64..5.0, o2 in 0.0f64..20.0,
            theta in 0.0f64..1.0,
        ) {
            let grid = TimeGrid::uniform(5.0, 11);
            let a = Modulation { delta_over_omega_mod: d1, omega_mod_over_gamma: o1 };
            let b = Modulation { delta_over_omega_mod: d2, omega_mod_over_gamma: o2 };
            prop_assert!(modulation_independence_certificate(
                &reservoir(0.2, theta, 1.0), &a, &b, &grid, 1e-9).unwrap());
        }
    }
}
