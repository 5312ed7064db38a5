//! Finite-N Weyl expectations against their central-limit values.

use std::fmt::Write as _;

use mesoent_core::microscopic::{weyl_expectation_finite_n, weyl_expectation_limit};
use mesoent_core::spin_algebra::{build_thermal_state, ObservableSet};

use crate::config::ExperimentConfig;
use crate::output::fmt_num;
use crate::CliError;

pub const DEFAULT_SIZES: [u32; 3] = [100, 1000, 10_000];

#[derive(Debug, Clone, PartialEq)]
pub struct CltRow {
    pub observable: usize,
    pub n: u32,
    pub finite_n: (f64, f64),
    pub limit: (f64, f64),
    pub error: f64,
}

/// One row per observable `x_1..x_8` and system size, at the configured `(ε, T)`.
pub fn run(cfg: &ExperimentConfig, sizes: &[u32]) -> Result<Vec<CltRow>, CliError> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(CliError::Config {
            field: "sizes".into(),
            reason: "need at least one positive system size".into(),
        });
    }
    let p = cfg.params_at(cfg.temperature, 0.0, "temperature")?;
    let st = build_thermal_state(&p)?;
    let mut rows = vec![];
    for (i, x) in ObservableSet::new().observables.iter().enumerate() {
        let limit = weyl_expectation_limit(x, &st);
        for &n in sizes {
            let v = weyl_expectation_finite_n(x, n, &st)?;
            rows.push(CltRow {
                observable: i + 1,
                n,
                finite_n: (v.re, v.im),
                limit: (limit.re, limit.im),
                error: (v - limit).norm(),
            });
        }
    }
    Ok(rows)
}

pub fn csv(cfg: &ExperimentConfig, rows: &[CltRow]) -> String {
    let mut out = String::new();
    out.push_str("# mesoent clt\n");
    let _ = writeln!(out, "# epsilon = {}", fmt_num(cfg.epsilon));
    let _ = writeln!(out, "# temperature = {}", fmt_num(cfg.temperature));
    out.push_str("observable,N,re,im,limit_re,limit_im,abs_error\n");
    for r in rows {
        let _ = writeln!(
            out,
            "x{},{},{},{},{},{},{}",
            r.observable,
            r.n,
            fmt_num(r.finite_n.0),
            fmt_num(r.finite_n.1),
            fmt_num(r.limit.0),
            fmt_num(r.limit.1),
            fmt_num(r.error)
        );
    }
    out
}
