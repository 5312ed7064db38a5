//! Deterministic text output: CSV files and gnuplot scripts.
//!
//! Numbers use `%.12g` semantics (12 significant digits, trailing zeros
//! dropped, exponent form outside `1e-5 ≤ |x| < 1e12`); lines end in `\n`.

use std::fmt::Write as _;
use std::path::Path;

use crate::config::ExperimentConfig;
use crate::experiment::NegativityCurve;

const DIGITS: i32 = 12;

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `printf("%.12g", x)`, with `-0` written as `0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let fixed = format!("{:.*}", (DIGITS - 1 - exp) as usize, x);
        trim_fraction(&fixed).to_string()
    }
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(",")
}

fn header(out: &mut String, kind: &str, cfg: &ExperimentConfig, temperature: f64, gamma: f64) {
    let _ = writeln!(out, "# mesoent {kind}");
    for (k, v) in [
        ("epsilon", cfg.epsilon),
        ("temperature", temperature),
        ("gamma", gamma),
        ("squeeze_r", cfg.squeeze_r),
        ("t_max", cfg.t_max),
    ] {
        let _ = writeln!(out, "# {k} = {}", fmt_num(v));
    }
    let _ = writeln!(out, "# t_steps = {}", cfg.t_steps);
    let _ = writeln!(out, "# gamma_list = {}", fmt_list(&cfg.gamma_list));
    let _ = writeln!(out, "# temperature_list = {}", fmt_list(&cfg.temperature_list));
}

pub fn curve_csv(cfg: &ExperimentConfig, curve: &NegativityCurve) -> String {
    let mut out = String::new();
    let p = &curve.params;
    header(&mut out, "curve", cfg, p.temperature(), p.gamma());
    let _ = writeln!(out, "# eta = {}", fmt_num(p.eta()));
    out.push_str("t,nu_min,E\n");
    for s in &curve.samples {
        let _ = writeln!(out, "{},{},{}", fmt_num(s.t), fmt_num(s.nu_min), fmt_num(s.e));
    }
    out
}

/// Which parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Gamma,
    Temperature,
}

impl SweepKind {
    pub fn column(self) -> &'static str {
        match self {
            Self::Gamma => "gamma",
            Self::Temperature => "temperature",
        }
    }

    pub fn value(self, curve: &NegativityCurve) -> f64 {
        match self {
            Self::Gamma => curve.params.gamma(),
            Self::Temperature => curve.params.temperature(),
        }
    }

    pub fn curve_file(self, curve: &NegativityCurve) -> String {
        format!("{}_{}.csv", self.column(), fmt_num(self.value(curve)))
    }

    pub fn summary_file(self) -> String {
        format!("summary_{}.csv", self.column())
    }
}

pub fn summary_csv(cfg: &ExperimentConfig, kind: SweepKind, curves: &[NegativityCurve]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# mesoent sweep-{}", kind.column());
    for (k, v) in [("epsilon", cfg.epsilon), ("squeeze_r", cfg.squeeze_r), ("t_max", cfg.t_max)] {
        let _ = writeln!(out, "# {k} = {}", fmt_num(v));
    }
    let _ = writeln!(out, "# t_steps = {}", cfg.t_steps);
    match kind {
        SweepKind::Gamma => {
            let _ = writeln!(out, "# temperature = {}", fmt_num(cfg.temperature));
            let _ = writeln!(out, "# gamma_list = {}", fmt_list(&cfg.gamma_list));
        }
        SweepKind::Temperature => {
            let _ = writeln!(out, "# gamma = {}", fmt_num(cfg.gamma));
            let _ = writeln!(out, "# temperature_list = {}", fmt_list(&cfg.temperature_list));
        }
    }
    out.push_str("# lifetime = largest grid t with E > 1e-12 (0 if none)\n");
    let _ = writeln!(out, "{},max_E,lifetime", kind.column());
    for c in curves {
        let _ = writeln!(out, "{},{},{}", fmt_num(kind.value(c)), fmt_num(c.max_e()), fmt_num(c.lifetime()));
    }
    out
}

/// Gnuplot script drawing `E(t)` from each `(csv path, title)`.
pub fn gnuplot_script(series: &[(String, String)], png: &Path) -> String {
    let mut out = String::new();
    out.push_str("set datafile separator \",\"\n");
    out.push_str("set datafile commentschars \"#\"\n");
    out.push_str("set terminal pngcairo size 800,500\n");
    let _ = writeln!(out, "set output \"{}\"", png.display());
    out.push_str("set xlabel \"t\"\nset ylabel \"E(t)\"\nset key top right\n");
    let plots: Vec<String> = series
        .iter()
        .map(|(path, title)| format!("\"{path}\" using 1:3 with lines title \"{title}\""))
        .collect();
    let _ = writeln!(out, "plot {}", plots.join(", \\\n     "));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (0.01, "0.01"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0f64.exp(), "7.38905609893"),
            (1e-5, "1e-05"),
            (1.5e-7, "1.5e-07"),
            (0.0001, "0.0001"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (-2.5, "-2.5"),
            (0.999999999999999, "1"),
            (9.9999999999999e-5, "0.0001"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_num(x), want, "{x:e}");
        }
    }
}
