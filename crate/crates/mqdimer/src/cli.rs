use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use mqdimer_core::circuits::{
    PureExperimentSpec, ThermalExperimentSpec, DIMER_QUBITS, PURE_READOUT,
};
use mqdimer_core::gates::Circuit;
use mqdimer_core::measurement::{
    estimate_pure_from_histogram, estimate_thermal_intensities, run_noisy, sample, sample_density,
    NoiseModel, ShotHistogram,
};
use mqdimer_core::sweep::{run_sweep, Experiment, SweepConfig};

use crate::config::{self, Settings};
use crate::error::AppError;
use crate::{csv, histogram, qasm};

/// Multiple-quantum NMR intensities of a spin dimer, from closed forms and
/// from simulated quantum circuits.
///
/// With no action flags the τ sweep is written to standard output as CSV.
#[derive(Debug, Default, Parser)]
#[command(name = "mqdimer", version)]
pub struct Args {
    /// `pure` (ground state) or `thermal` (equilibrium at --beta)
    #[arg(long)]
    pub experiment: Option<String>,
    /// Inverse temperature ħω₀/kT [default: 2.12]
    #[arg(long)]
    pub beta: Option<f64>,
    /// First τ of the sweep, radians [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub tau_start: Option<f64>,
    /// Last τ of the sweep, radians [default: 2π]
    #[arg(long, allow_negative_numbers = true)]
    pub tau_end: Option<f64>,
    /// Grid points including both ends [default: 65]
    #[arg(long)]
    pub points: Option<usize>,
    /// Shots per grid point; 0 uses exact probabilities [default: 0]
    #[arg(long)]
    pub shots: Option<u64>,
    /// Depolarizing probability per gate [default: 0]
    #[arg(long)]
    pub noise: Option<f64>,
    /// Base seed; grid point i uses seed + i [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// τ for --export-qasm, --save-histogram and --estimate [default: tau-start]
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Write the sweep CSV here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the circuit at --tau as OpenQASM 2.0
    #[arg(long)]
    pub export_qasm: Option<PathBuf>,
    /// Sample the circuit at --tau and write the histogram as JSON
    #[arg(long)]
    pub save_histogram: Option<PathBuf>,
    /// Read a histogram JSON and print the intensities it implies at --tau
    #[arg(long)]
    pub estimate: Option<PathBuf>,
    /// `key = value` file with defaults for any of the options above
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Args {
    fn settings(&self) -> Settings {
        Settings {
            experiment: self.experiment.clone(),
            beta: self.beta,
            tau_start: self.tau_start,
            tau_end: self.tau_end,
            points: self.points,
            shots: self.shots,
            noise: self.noise,
            seed: self.seed,
            tau: self.tau,
            out: self.out.clone(),
            export_qasm: self.export_qasm.clone(),
            save_histogram: self.save_histogram.clone(),
            estimate: self.estimate.clone(),
        }
    }
}

/// Fully resolved run.
#[derive(Clone, Debug, PartialEq)]
pub struct Plan {
    pub sweep: SweepConfig,
    pub tau: f64,
    pub out: Option<PathBuf>,
    pub export_qasm: Option<PathBuf>,
    pub save_histogram: Option<PathBuf>,
    pub estimate: Option<PathBuf>,
}

impl Plan {
    pub fn resolve(args: &Args) -> Result<Self, AppError> {
        let file = match &args.config {
            Some(path) => config::load(path)?,
            None => Settings::default(),
        };
        let s = args.settings().or(file);
        let d = SweepConfig::default();
        let experiment = match s.experiment.as_deref() {
            Some(name) => name.parse::<Experiment>()?,
            None => d.experiment,
        };
        let sweep = SweepConfig {
            experiment,
            beta: s.beta.unwrap_or(d.beta),
            tau_start: s.tau_start.unwrap_or(d.tau_start),
            tau_end: s.tau_end.unwrap_or(d.tau_end),
            points: s.points.unwrap_or(d.points),
            shots: s.shots.unwrap_or(d.shots),
            noise_p: s.noise.unwrap_or(d.noise_p),
            seed: s.seed.unwrap_or(d.seed),
        };
        sweep.validate()?;
        let tau = s.tau.unwrap_or(sweep.tau_start);
        if !tau.is_finite() {
            return Err(AppError::Config("tau must be finite".into()));
        }
        Ok(Self {
            sweep,
            tau,
            out: s.out,
            export_qasm: s.export_qasm,
            save_histogram: s.save_histogram,
            estimate: s.estimate,
        })
    }

    /// The sweep runs when asked for explicitly or when nothing else is.
    pub fn wants_sweep(&self) -> bool {
        self.out.is_some()
            || (self.export_qasm.is_none()
                && self.save_histogram.is_none()
                && self.estimate.is_none())
    }

    fn circuit(&self) -> Result<(Circuit, &'static [usize]), AppError> {
        Ok(match self.sweep.experiment {
            Experiment::Pure => (PureExperimentSpec::new(self.tau)?.circuit(), &PURE_READOUT),
            Experiment::Thermal => (
                ThermalExperimentSpec::new(self.sweep.beta, self.tau)?.circuit(),
                &DIMER_QUBITS,
            ),
        })
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), AppError> {
    std::fs::write(path, text).map_err(|e| AppError::io(path, e))
}

/// OpenQASM text of the circuit a plan describes.
pub fn export_text(plan: &Plan) -> Result<String, AppError> {
    let (circuit, readout) = plan.circuit()?;
    Ok(qasm::to_qasm(&circuit, readout))
}

/// Samples the plan's circuit at its τ, honouring the noise setting.
pub fn sample_plan(plan: &Plan) -> Result<ShotHistogram, AppError> {
    let cfg = &plan.sweep;
    if cfg.shots == 0 {
        return Err(AppError::Config(
            "--save-histogram needs --shots > 0".into(),
        ));
    }
    let (circuit, readout) = plan.circuit()?;
    let noise = NoiseModel::new(cfg.noise_p)?;
    let hist = if noise.is_noiseless() {
        sample(&circuit.run(), readout, cfg.shots, cfg.seed)?
    } else {
        sample_density(&run_noisy(&circuit, &noise)?, readout, cfg.shots, cfg.seed)?
    };
    Ok(hist)
}

/// Executes a plan; CSV and estimates go to `stdout` unless redirected.
pub fn execute(plan: &Plan, stdout: &mut dyn Write) -> Result<(), AppError> {
    let console = |e| AppError::io("<stdout>", e);

    if let Some(path) = &plan.export_qasm {
        write_file(path, &export_text(plan)?)?;
    }
    if let Some(path) = &plan.save_histogram {
        histogram::write(path, &sample_plan(plan)?)?;
    }
    if let Some(path) = &plan.estimate {
        let hist = histogram::read(path)?;
        let r = match plan.sweep.experiment {
            Experiment::Pure => estimate_pure_from_histogram(&hist, plan.tau)?,
            Experiment::Thermal => estimate_thermal_intensities(&hist, plan.tau, plan.sweep.beta)?,
        };
        writeln!(stdout, "tau,J0,J+2,J-2,source").map_err(console)?;
        writeln!(
            stdout,
            "{:.14e},{:.14e},{:.14e},{:.14e},{}",
            r.tau, r.j0, r.j_plus2, r.j_minus2, r.source
        )
        .map_err(console)?;
    }
    if plan.wants_sweep() {
        let rows = run_sweep(&plan.sweep)?;
        match &plan.out {
            Some(path) => write_file(path, &csv::to_string(&rows))?,
            None => csv::write_rows(&mut *stdout, &rows).map_err(console)?,
        }
    }
    Ok(())
}

pub fn run(args: &Args, stdout: &mut dyn Write) -> Result<(), AppError> {
    execute(&Plan::resolve(args)?, stdout)
}
