//! τ sweeps comparing the circuit route with the closed forms.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::circuits::{PureExperimentSpec, ThermalExperimentSpec, DIMER_QUBITS, PURE_READOUT};
use crate::measurement::{
    estimate_pure_intensities, estimate_thermal_from_probabilities, run_noisy, sample_distribution,
    NoiseModel,
};
use crate::nmr::{
    analytic_intensities_pure, analytic_intensities_thermal, IntensityRecord, IntensitySource,
    ThermalParameters,
};
use crate::{Error, Result};

/// Which experiment a sweep runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    Pure,
    Thermal,
}

impl Experiment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Experiment::Pure => "pure",
            Experiment::Thermal => "thermal",
        }
    }
}

impl core::str::FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(Experiment::Pure),
            "thermal" => Ok(Experiment::Thermal),
            _ => Err(Error::InvalidSweep(
                "experiment must be `pure` or `thermal`",
            )),
        }
    }
}

/// β used when none is given.
pub const DEFAULT_BETA: f64 = 2.12;
/// Grid size used when none is given.
pub const DEFAULT_POINTS: usize = 65;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepConfig {
    pub experiment: Experiment,
    /// Ignored by the pure experiment.
    pub beta: f64,
    pub tau_start: f64,
    pub tau_end: f64,
    pub points: usize,
    /// `0` means exact probabilities.
    pub shots: u64,
    pub noise_p: f64,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Pure,
            beta: DEFAULT_BETA,
            tau_start: 0.0,
            tau_end: TAU,
            points: DEFAULT_POINTS,
            shots: 0,
            noise_p: 0.0,
            seed: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_start.is_finite() && self.tau_end.is_finite()) {
            return Err(Error::NonFinite("tau range"));
        }
        if self.tau_start >= self.tau_end {
            return Err(Error::InvalidSweep("tau_start must be below tau_end"));
        }
        if self.points < 2 {
            return Err(Error::InvalidSweep("a sweep needs at least 2 points"));
        }
        NoiseModel::new(self.noise_p)?;
        if self.experiment == Experiment::Thermal {
            ThermalParameters::new(self.beta)?;
        }
        Ok(())
    }

    /// Evenly spaced τ values including both ends.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.tau_end
                } else {
                    self.tau_start + (self.tau_end - self.tau_start) * (i as f64 / last)
                }
            })
            .collect()
    }

    /// Seed of grid point `index`.
    pub fn point_seed(&self, index: usize) -> u64 {
        self.seed.wrapping_add(index as u64)
    }
}

/// One grid point: closed form next to the circuit estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub analytic: IntensityRecord,
    pub simulated: IntensityRecord,
}

impl SweepRow {
    pub fn tau(&self) -> f64 {
        self.analytic.tau
    }
}

/// Evaluates one grid point of a validated configuration.
pub fn evaluate_point(config: &SweepConfig, index: usize, tau: f64) -> Result<SweepRow> {
    let noise = NoiseModel::new(config.noise_p)?;
    let (analytic, circuit, readout) = match config.experiment {
        Experiment::Pure => (
            analytic_intensities_pure(tau)?,
            PureExperimentSpec::new(tau)?.circuit(),
            &PURE_READOUT,
        ),
        Experiment::Thermal => {
            let spec = ThermalExperimentSpec::new(config.beta, tau)?;
            (
                analytic_intensities_thermal(spec.params(), tau)?,
                spec.circuit(),
                &DIMER_QUBITS,
            )
        }
    };

    let exact = if noise.is_noiseless() {
        circuit.run().marginal_probabilities(readout)?
    } else {
        run_noisy(&circuit, &noise)?.marginal_probabilities(readout)?
    };
    let (probs, source) = if config.shots == 0 {
        (exact, IntensitySource::ExactCircuit)
    } else {
        let hist = sample_distribution(&exact, readout, config.shots, config.point_seed(index))?;
        (hist.frequencies(), IntensitySource::Sampled)
    };

    let mut simulated = match config.experiment {
        Experiment::Pure => estimate_pure_intensities(tau, probs[0], probs[3])?,
        Experiment::Thermal => {
            let params = ThermalParameters::new(config.beta)?;
            estimate_thermal_from_probabilities(
                &[probs[0], probs[1], probs[2], probs[3]],
                tau,
                &params,
            )?
        }
    };
    simulated.source = source;
    Ok(SweepRow {
        analytic,
        simulated,
    })
}

/// Runs the whole grid, one row per τ in ascending order.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    config
        .grid()
        .into_iter()
        .enumerate()
        .map(|(i, tau)| evaluate_point(config, i, tau))
        .collect()
}
