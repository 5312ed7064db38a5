use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mesoent::config::{ExperimentConfig, Overrides};
use mesoent::experiment::{self, NegativityCurve};
use mesoent::output::{self, SweepKind};
use mesoent::verify::{self, Injection, Level};
use mesoent::{clt, CliError};

#[derive(Parser)]
#[command(name = "mesoent", version, about = "Dissipatively generated entanglement between two spin chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// E(t) for one parameter set
    Curve(RunArgs),
    /// One curve per gamma in gamma_list, plus a summary
    SweepGamma(RunArgs),
    /// One curve per temperature in temperature_list, plus a summary
    SweepTemp(RunArgs),
    /// Run the cross-module verification suite
    Verify(VerifyArgs),
    /// Finite-N Weyl expectations vs. their central-limit values
    Clt(CltArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON file with ExperimentConfig fields; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    squeeze_r: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    t_steps: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    gamma_list: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    temperature_list: Option<Vec<f64>>,
    /// CSV file for `curve` (default stdout), directory for sweeps (default .)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl ConfigArgs {
    fn load(self) -> Result<ExperimentConfig, CliError> {
        ExperimentConfig::load(
            self.config.as_deref(),
            Overrides {
                epsilon: self.epsilon,
                temperature: self.temperature,
                gamma: self.gamma,
                squeeze_r: self.squeeze_r,
                t_max: self.t_max,
                t_steps: self.t_steps,
                gamma_list: self.gamma_list,
                temperature_list: self.temperature_list,
                output: self.output,
            },
        )
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Also write a gnuplot script plotting the emitted curves
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "fast")]
    level: LevelArg,
    /// Negative control: use this gamma in the dissipation-matrix checks
    #[arg(long, hide = true, allow_hyphen_values = true)]
    inject_gamma: Option<f64>,
    /// Negative control: add this to one entry of M before comparing
    #[arg(long, hide = true, allow_hyphen_values = true)]
    perturb_m: Option<f64>,
}

#[derive(Args)]
struct CltArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, value_delimiter = ',', default_values_t = clt::DEFAULT_SIZES)]
    sizes: Vec<u32>,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit_plot(script: &Path, series: &[(String, String)]) -> Result<(), CliError> {
    write_file(script, &output::gnuplot_script(series, &script.with_extension("png")))
}

fn run_curve(args: RunArgs) -> Result<(), CliError> {
    let cfg = args.config.load()?;
    if args.plot_script.is_some() && cfg.output.is_none() {
        return Err(CliError::Config {
            field: "output".into(),
            reason: "--plot-script needs the curve written to a file".into(),
        });
    }
    let curve = experiment::run_curve(&cfg)?;
    let text = output::curve_csv(&cfg, &curve);
    match &cfg.output {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    if let (Some(script), Some(path)) = (&args.plot_script, &cfg.output) {
        let title = format!("gamma = {}, T = {}", curve.params.gamma(), curve.params.temperature());
        emit_plot(script, &[(path.display().to_string(), title)])?;
    }
    Ok(())
}

fn run_sweep(args: RunArgs, kind: SweepKind) -> Result<(), CliError> {
    let cfg = args.config.load()?;
    let curves: Vec<NegativityCurve> = match kind {
        SweepKind::Gamma => experiment::sweep_gamma(&cfg)?,
        SweepKind::Temperature => experiment::sweep_temperature(&cfg)?,
    };
    let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    let mut series = vec![];
    for c in &curves {
        let path = dir.join(kind.curve_file(c));
        write_file(&path, &output::curve_csv(&cfg, c))?;
        let title = format!("{} = {}", kind.column(), output::fmt_num(kind.value(c)));
        series.push((path.display().to_string(), title));
    }
    let summary = output::summary_csv(&cfg, kind, &curves);
    write_file(&dir.join(kind.summary_file()), &summary)?;
    print!("{summary}");
    if let Some(script) = &args.plot_script {
        emit_plot(script, &series)?;
    }
    Ok(())
}

fn run_verify(args: VerifyArgs) -> Result<bool, CliError> {
    let level = match args.level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
    };
    let inj = Injection {
        gamma: args.inject_gamma,
        m_perturbation: args.perturb_m,
    };
    let report = verify::run(level, &inj)?;
    print!("{}", report.render());
    let ok = report.all_passed();
    println!("{}", if ok { "all checks passed" } else { "verification FAILED" });
    Ok(ok)
}

fn run_clt(args: CltArgs) -> Result<(), CliError> {
    let cfg = args.config.load()?;
    let rows = clt::run(&cfg, &args.sizes)?;
    let text = clt::csv(&cfg, &rows);
    match &cfg.output {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curve(a) => run_curve(a).map(|_| true),
        Command::SweepGamma(a) => run_sweep(a, SweepKind::Gamma).map(|_| true),
        Command::SweepTemp(a) => run_sweep(a, SweepKind::Temperature).map(|_| true),
        Command::Verify(a) => run_verify(a),
        Command::Clt(a) => run_clt(a).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
