//! Cross-module verification suite behind `mesoent verify`.

use std::fmt::Write as _;

use mesoent_core::entanglement::{reduce_to_a1b1, symplectic_eigenvalues, to_quadrature};
use mesoent_core::mesoscopic::{
    build_m, ccr_defect_extended, deviation_from_thermal, initial_state, propagate, MesoGenerator,
};
use mesoent_core::microscopic::{build_liouvillian, clt_errors, extract_mode_generator};
use mesoent_core::numerics::ComplexMatrix;
use mesoent_core::spin_algebra::{build_dissipation_matrix, build_thermal_state, ObservableSet};
use mesoent_core::{Complex64 as C64, ModelParams};
use rayon::prelude::*;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

/// Deliberate corruptions for negative controls.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Injection {
    /// Replaces the γ used by the dissipation-matrix checks.
    pub gamma: Option<f64>,
    /// Added to `M[0][2]` before the generator comparison.
    pub m_perturbation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    /// `value ≤ tolerance` passes, or `value ≥ tolerance` for lower bounds.
    pub tolerance: f64,
    pub lower_bound: bool,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn upper(name: &'static str, value: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            value,
            tolerance,
            lower_bound: false,
            passed: value <= tolerance,
            detail,
        }
    }

    fn lower(name: &'static str, value: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name,
            value,
            tolerance,
            lower_bound: true,
            passed: value >= tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<24} {:>12} {:>14}  result  detail", "check", "value", "tolerance");
        for c in &self.checks {
            let op = if c.lower_bound { ">=" } else { "<=" };
            let _ = writeln!(
                out,
                "{:<24} {:>12.3e} {op} {:>11.1e}  {:<6}  {}",
                c.name,
                c.value,
                c.tolerance,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            );
        }
        out
    }
}

struct Grid {
    epsilons: &'static [f64],
    temperatures: &'static [f64],
    gammas: &'static [f64],
    curve_steps: usize,
}

impl Grid {
    fn for_level(level: Level) -> Self {
        match level {
            Level::Fast => Self {
                epsilons: &[1.0],
                temperatures: &[0.1, 1.0],
                gammas: &[0.0, 0.25, 0.5],
                curve_steps: 50,
            },
            Level::Full => Self {
                epsilons: &[0.5, 1.0, 2.0],
                temperatures: &[0.1, 0.5, 1.0, 5.0],
                gammas: &[0.0, 0.1, 0.25, 0.5],
                curve_steps: 500,
            },
        }
    }

    fn points(&self) -> Result<Vec<ModelParams>, CliError> {
        let mut out = vec![];
        for &e in self.epsilons {
            for &t in self.temperatures {
                for &g in self.gammas {
                    out.push(ModelParams::new(e, t, g)?);
                }
            }
        }
        Ok(out)
    }
}

fn dissipation_checks(gammas: &[f64], inj: &Injection) -> Result<Vec<Check>, CliError> {
    let gammas: Vec<f64> = match inj.gamma {
        Some(g) => vec![g],
        None => gammas.to_vec(),
    };
    let mut spectrum_err: f64 = 0.0;
    let mut min_eig = f64::INFINITY;
    for &g in &gammas {
        let mut ev = build_dissipation_matrix(g).eigenvalues()?;
        ev.sort_by(f64::total_cmp);
        let want = [1.0 - 2.0 * g, 1.0, 1.0, 1.0 + 2.0 * g];
        for (a, b) in ev.iter().zip(want) {
            spectrum_err = spectrum_err.max((a - b).abs());
        }
        min_eig = min_eig.min(ev[0]);
    }
    let gs = gammas.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",");
    Ok(vec![
        Check::upper("dissipation_spectrum", spectrum_err, 1e-12, format!("gamma in {{{gs}}}")),
        Check::lower("dissipation_positivity", min_eig, -1e-12, format!("min eigenvalue {min_eig:.6}")),
    ])
}

struct PointResult {
    stationarity: f64,
    residual: f64,
    leak: f64,
    mismatch: f64,
    ccr: f64,
    meso_stationarity: f64,
}

fn perturbed_m(p: &ModelParams, delta: Option<f64>) -> Result<MesoGenerator, CliError> {
    let g = build_m(p);
    Ok(match delta {
        None => g,
        Some(d) => {
            let mut m: ComplexMatrix = g.matrix().clone();
            m[(0, 2)] += C64::new(d, 0.0);
            MesoGenerator::with_matrix(p, m)?
        }
    })
}

fn check_point(p: &ModelParams, inj: &Injection) -> Result<PointResult, CliError> {
    let l = build_liouvillian(p);
    let st = build_thermal_state(p)?;
    let stationarity = l.stationarity_defect(&st);
    let (residual, leak, mismatch) = match extract_mode_generator(&l, p) {
        Ok(ex) => (ex.residual, ex.identity_leak(), ex.mismatch_with(&perturbed_m(p, inj.m_perturbation)?)),
        Err(mesoent_core::Error::ClosureViolation { residual, identity_leak }) => {
            (residual, identity_leak, f64::INFINITY)
        }
        Err(e) => return Err(e.into()),
    };
    let (dev, anom) = ccr_defect_extended(p.eta())?;
    let g = build_m(p);
    let s0 = initial_state(p, 0.0)?;
    let meso_stationarity = (0..=50)
        .map(|k| deviation_from_thermal(&s0, &g, 0.1 * k as f64).map(|d| d.frobenius_norm()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(PointResult {
        stationarity,
        residual,
        leak,
        mismatch,
        ccr: dev.max(anom),
        meso_stationarity,
    })
}

fn clt_check(temperatures: &[f64]) -> Result<Check, CliError> {
    let sizes = [100, 1000, 10_000];
    let set = ObservableSet::new();
    let mut worst: f64 = 0.0;
    let mut monotone = true;
    for &t in temperatures {
        let st = build_thermal_state(&ModelParams::new(1.0, t, 0.0)?)?;
        for x in &set.observables {
            let errs = clt_errors(x, &sizes, &st)?;
            monotone &= errs.windows(2).all(|w| w[1] < w[0]);
            worst = worst.max(errs[2]);
        }
    }
    let mut c = Check::upper("clt_convergence", worst, 1e-2, format!("error at N=1e4; monotone: {monotone}"));
    c.passed &= monotone;
    Ok(c)
}

/// Smallest symplectic eigenvalue of the full four-mode state along the
/// reference curve (γ=0.5, T=0.1, r=1, ε=1), reported as `ν − 1`; physical iff ≥ 0.
fn physicality_check(steps: usize) -> Result<Check, CliError> {
    let p = ModelParams::new(1.0, 0.1, 0.5)?;
    let g = build_m(&p);
    let s0 = initial_state(&p, 1.0)?;
    let mut nu: f64 = f64::INFINITY;
    for k in 0..=steps {
        let s = propagate(&s0, &g, 5.0 * k as f64 / steps as f64)?;
        let q = s.quadrature_covariance();
        nu = nu.min(symplectic_eigenvalues(&q)?[0]);
        // the reduced block must also be a valid real covariance
        to_quadrature(&reduce_to_a1b1(&s))?;
    }
    Ok(Check::lower("physicality", nu - 1.0, -1e-9, format!("nu_min - 1 over {} samples on [0, 5]", steps + 1)))
}

pub fn run(level: Level, inj: &Injection) -> Result<Report, CliError> {
    let grid = Grid::for_level(level);
    let mut checks = dissipation_checks(grid.gammas, inj)?;

    let results = grid
        .points()?
        .par_iter()
        .map(|p| check_point(p, inj))
        .collect::<Result<Vec<_>, _>>()?;
    let max = |f: fn(&PointResult) -> f64| results.iter().map(f).fold(0.0, f64::max);
    let n = results.len();
    checks.push(Check::upper("thermal_invariance", max(|r| r.stationarity), 1e-12, format!("{n} grid points")));
    checks.push(Check::upper("generator_closure", max(|r| r.residual.max(r.leak)), 1e-10, format!("{n} grid points")));
    checks.push(Check::upper("generator_match", max(|r| r.mismatch), 1e-10, "mode block vs M^T".into()));
    checks.push(Check::upper("ccr", max(|r| r.ccr), 1e-12, "16 pairs per grid point".into()));
    checks.push(clt_check(grid.temperatures)?);
    checks.push(Check::upper(
        "meso_stationarity",
        max(|r| r.meso_stationarity),
        1e-10,
        "r = 0, t in [0, 5]".into(),
    ));
    checks.push(physicality_check(grid.curve_steps)?);
    Ok(Report { checks })
}
