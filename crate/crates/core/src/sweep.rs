//! Parameter sweeps over one or two configuration fields.

use rayon::prelude::*;
use serde_json::Value;

use crate::analysis::{coherence_time, Interpolation};
use crate::config::{validate, SimulationConfig};
use crate::dynamics::{positivity_audit, simulate, Simulation};
use crate::error::{Diagnostic, Error, Result};

pub const MAX_SWEEP_PARAMS: usize = 2;

/// A configuration field addressed by its dotted path (`dephasing.alpha`,
/// `initial.zeta0.1`) and the values it takes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepParam {
    pub path: String,
    pub values: Vec<f64>,
}

fn invalid(path: &str, message: impl Into<String>) -> Error {
    Error::InvalidConfig(vec![Diagnostic {
        path: path.to_string(),
        message: message.into(),
    }])
}

impl SweepParam {
    /// Parse `path=v1,v2,...`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (path, values) = spec
            .split_once('=')
            .ok_or_else(|| invalid("sweep", format!("expected PATH=V1,V2,... in {spec:?}")))?;
        let path = path.trim();
        let values = values
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| invalid(path, format!("bad sweep value {v:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            return Err(invalid(path, "sweep lists no values"));
        }
        Ok(SweepParam {
            path: path.to_string(),
            values,
        })
    }
}

fn leaf_mut<'a>(root: &'a mut Value, path: &str) -> Option<&'a mut Value> {
    path.split('.').try_fold(root, |node, key| match node {
        Value::Object(map) => map.get_mut(key),
        Value::Array(items) => key.parse::<usize>().ok().and_then(|i| items.get_mut(i)),
        _ => None,
    })
}

/// `base` with each `(path, value)` assignment applied.
pub fn apply(base: &SimulationConfig, assignments: &[(String, f64)]) -> Result<SimulationConfig> {
    let mut tree = serde_json::to_value(base).expect("configuration serializes");
    for (path, value) in assignments {
        let leaf = leaf_mut(&mut tree, path)
            .filter(|v| v.is_number())
            .ok_or_else(|| invalid(path, "unknown parameter path"))?;
        *leaf = if leaf.is_u64() {
            if !(value.fract() == 0.0 && *value >= 0.0 && *value <= u64::MAX as f64) {
                return Err(invalid(path, format!("expects a non-negative integer, got {value}")));
            }
            Value::from(*value as u64)
        } else {
            serde_json::Number::from_f64(*value)
                .map(Value::Number)
                .ok_or_else(|| invalid(path, format!("not representable in JSON: {value}")))?
        };
    }
    serde_json::from_value(tree).map_err(|e| invalid("sweep", e.to_string()))
}

/// Cartesian product of the parameter values, first parameter outermost.
pub fn points(params: &[SweepParam]) -> Vec<Vec<(String, f64)>> {
    params.iter().fold(vec![Vec::new()], |acc, p| {
        acc.into_iter()
            .flat_map(|prefix| {
                p.values.iter().map(move |&v| {
                    let mut point = prefix.clone();
                    point.push((p.path.clone(), v));
                    point
                })
            })
            .collect()
    })
}

/// Derived scalars for one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub n_bar: f64,
    pub t_c: Option<f64>,
    pub final_coherence_abs: f64,
    pub final_pg: f64,
    pub positivity_worst_margin: f64,
}

impl PointSummary {
    pub fn of(sim: &Simulation) -> Self {
        let traj = &sim.trajectory;
        let last = traj.times.len() - 1;
        PointSummary {
            n_bar: sim.config.n_bar(),
            t_c: coherence_time(
                &traj.times,
                &traj.coherence_abs,
                sim.config.config().initial.zeta0.norm(),
                Interpolation::Linear,
            ),
            final_coherence_abs: traj.coherence_abs[last],
            final_pg: traj.pg[last],
            positivity_worst_margin: positivity_audit(traj).worst_margin,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub assignments: Vec<(String, f64)>,
    pub simulation: Simulation,
    pub summary: PointSummary,
}

/// Validate every point up front, then simulate them in parallel. Results
/// come back in point order whatever the completion order.
pub fn run(base: &SimulationConfig, params: &[SweepParam]) -> Result<Vec<SweepPoint>> {
    if params.is_empty() {
        return Err(invalid("sweep", "no sweep parameters given"));
    }
    if params.len() > MAX_SWEEP_PARAMS {
        return Err(invalid(
            "sweep",
            format!("at most {MAX_SWEEP_PARAMS} parameters, got {}", params.len()),
        ));
    }
    let configs = points(params)
        .into_iter()
        .map(|a| {
            let config = validate(apply(base, &a)?)?;
            Ok((a, config))
        })
        .collect::<Result<Vec<_>>>()?;
    configs
        .into_par_iter()
        .map(|(assignments, config)| {
            let simulation = simulate(&config)?;
            let summary = PointSummary::of(&simulation);
            Ok(SweepPoint {
                assignments,
                simulation,
                summary,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_expand() {
        let a = SweepParam::parse("dephasing.alpha=0.01, 0.1,0.5").unwrap();
        assert_eq!(a.values, [0.01, 0.1, 0.5]);
        let b = SweepParam::parse("dissipative.R=1,100").unwrap();
        let pts = points(&[a, b]);
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1], [("dephasing.alpha".to_string(), 0.01), ("dissipative.R".to_string(), 100.0)]);
        assert!(SweepParam::parse("dephasing.alpha=").is_err());
        assert!(SweepParam::parse("dephasing.alpha").is_err());
    }

    #[test]
    fn apply_sets_nested_fields() {
        let base = SimulationConfig::default();
        let c = apply(
            &base,
            &[
                ("modulation.omega_mod_over_gamma".into(), 10.0),
                ("n_samples".into(), 5001.0),
                ("initial.zeta0.1".into(), 0.1),
            ],
        )
        .unwrap();
        assert_eq!(c.modulation.omega_mod_over_gamma, 10.0);
        assert_eq!(c.n_samples, 5001);
        assert_eq!(c.initial.zeta0.im, 0.1);
    }

    #[test]
    fn unknown_paths_are_rejected() {
        let base = SimulationConfig::default();
        for path in ["dephasing.beta", "modulation", "initial.zeta0.2", ""] {
            let err = apply(&base, &[(path.into(), 1.0)]).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{path}");
        }
        assert!(apply(&base, &[("n_samples".into(), 10.5)]).is_err());
    }

    #[test]
    fn empty_sweep_is_rejected() {
        let err = run(&SimulationConfig::default(), &[]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn results_keep_point_order() {
        let base = SimulationConfig {
            t_max: 5.0,
            n_samples: 201,
            ..Default::default()
        };
        let p = SweepParam::parse("dephasing.alpha=0.5,0,0.1").unwrap();
        let out = run(&base, &[p]).unwrap();
        let alphas: Vec<f64> = out.iter().map(|pt| pt.assignments[0].1).collect();
        assert_eq!(alphas, [0.5, 0.0, 0.1]);
        assert!(out[1].summary.final_coherence_abs > out[2].summary.final_coherence_abs);
        assert!(out[2].summary.final_coherence_abs > out[0].summary.final_coherence_abs);
    }
}
