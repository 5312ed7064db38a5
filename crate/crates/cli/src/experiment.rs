//! Time curves and parameter sweeps.

use mesoent_core::entanglement::negativity;
use mesoent_core::mesoscopic::{build_m, deviation_from_thermal, initial_state, propagate};
use mesoent_core::ModelParams;
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::CliError;

/// `E` at or below this counts as separable when measuring lifetimes.
pub const LIFETIME_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub nu_min: f64,
    pub e: f64,
}

#[derive(Debug, Clone)]
pub struct NegativityCurve {
    pub params: ModelParams,
    pub squeeze_r: f64,
    pub samples: Vec<Sample>,
}

impl NegativityCurve {
    pub fn max_e(&self) -> f64 {
        self.samples.iter().map(|s| s.e).fold(0.0, f64::max)
    }

    /// Largest grid time with `E > 1e-12`; zero if the curve never exceeds it.
    pub fn lifetime(&self) -> f64 {
        self.samples
            .iter()
            .rev()
            .find(|s| s.e > LIFETIME_THRESHOLD)
            .map_or(0.0, |s| s.t)
    }
}

pub fn curve_for(params: ModelParams, r: f64, times: &[f64]) -> Result<NegativityCurve, CliError> {
    let g = build_m(&params);
    let s0 = initial_state(&params, r)?;
    let samples = times
        .iter()
        .map(|&t| {
            let res = negativity(&propagate(&s0, &g, t)?)?;
            Ok(Sample {
                t,
                nu_min: res.nu_min,
                e: res.log_negativity,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(NegativityCurve {
        params,
        squeeze_r: r,
        samples,
    })
}

pub fn run_curve(cfg: &ExperimentConfig) -> Result<NegativityCurve, CliError> {
    curve_for(cfg.curve_params()?, cfg.squeeze_r, &cfg.time_grid())
}

/// Curves evaluated in parallel; results come back in list order.
fn sweep(cfg: &ExperimentConfig, points: Vec<ModelParams>) -> Result<Vec<NegativityCurve>, CliError> {
    let times = cfg.time_grid();
    points
        .into_par_iter()
        .map(|p| curve_for(p, cfg.squeeze_r, &times))
        .collect()
}

pub fn sweep_gamma(cfg: &ExperimentConfig) -> Result<Vec<NegativityCurve>, CliError> {
    sweep(cfg, cfg.gamma_sweep_params()?)
}

pub fn sweep_temperature(cfg: &ExperimentConfig) -> Result<Vec<NegativityCurve>, CliError> {
    sweep(cfg, cfg.temperature_sweep_params()?)
}

/// Least-squares decay rate of `‖Γ(t) − I/(2η)‖_F` over `[t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationFit {
    pub fitted: f64,
    pub expected: f64,
}

impl RelaxationFit {
    pub fn relative_error(&self) -> f64 {
        (self.fitted - self.expected).abs() / self.expected
    }
}

pub fn relaxation_fit(params: &ModelParams, r: f64, t0: f64, t1: f64, n: usize) -> Result<Option<RelaxationFit>, CliError> {
    let g = build_m(params);
    let s0 = initial_state(params, r)?;
    let mut pts = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = t0 + (t1 - t0) * k as f64 / n as f64;
        let d = deviation_from_thermal(&s0, &g, t)?.frobenius_norm();
        if d == 0.0 {
            // nothing to relax (r = 0)
            return Ok(None);
        }
        pts.push((t, d.ln()));
    }
    let m = pts.len() as f64;
    let (st, sy) = pts.iter().fold((0.0, 0.0), |(a, b), &(t, y)| (a + t, b + y));
    let (mt, my) = (st / m, sy / m);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), &(t, y)| (a + (t - mt) * (y - my), b + (t - mt).powi(2)));
    Ok(Some(RelaxationFit {
        fitted: -num / den,
        expected: g.relaxation_rate(),
    }))
}
