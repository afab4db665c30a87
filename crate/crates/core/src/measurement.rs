//! Finite-shot readout, depolarizing noise and the intensity estimators.
//!
//! Shots are drawn by inverse-CDF sampling from the exact marginal
//! distribution of the measured qubits. The generator is ChaCha8 seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`, and each uniform is the top 53 bits of
//! one `next_u64()` scaled into `[0, 1)`, so histograms are reproducible
//! bit-for-bit across platforms. Sweeps derive the seed of grid point `i` as
//! `base_seed.wrapping_add(i)`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::circuits::{DIMER_QUBITS, PURE_READOUT};
use crate::gates::{apply_gate_to_density, Circuit};
use crate::linalg::CMatrix;
use crate::nmr::{IntensityRecord, IntensitySource, ThermalParameters};
use crate::state::{
    bit_of, check_subset, density_from_pure, ground_state, DensityMatrix, StateVector,
};
use crate::{Error, Result, C64};

/// Slack allowed on frequency sums and probabilities.
const FREQUENCY_SLACK: f64 = 1e-9;

/// Renders outcome `index` of a `width`-qubit readout, most significant first.
pub fn bitstring(index: usize, width: usize) -> String {
    (0..width)
        .map(|j| {
            if (index >> (width - 1 - j)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

fn parse_bitstring(s: &str, width: usize) -> Option<usize> {
    if s.len() != width {
        return None;
    }
    s.bytes().try_fold(0usize, |acc, b| match b {
        b'0' => Some(acc << 1),
        b'1' => Some((acc << 1) | 1),
        _ => None,
    })
}

/// Outcome counts of repeated computational-basis measurements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotHistogram {
    subset: Vec<usize>,
    shots: u64,
    seed: u64,
    counts: BTreeMap<String, u64>,
}

impl ShotHistogram {
    /// Builds a histogram from externally supplied counts. Every key must be
    /// a bitstring as wide as `subset`; missing outcomes count as zero; the
    /// counts must add up to `shots`.
    pub fn new(
        subset: Vec<usize>,
        shots: u64,
        seed: u64,
        counts: BTreeMap<String, u64>,
    ) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        for (i, &q) in subset.iter().enumerate() {
            if q == 0 {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: subset.len(),
                });
            }
            if subset[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let width = subset.len();
        let mut full: BTreeMap<String, u64> = (0..1usize << width)
            .map(|k| (bitstring(k, width), 0))
            .collect();
        let mut total = 0u64;
        for (key, n) in counts {
            if parse_bitstring(&key, width).is_none() {
                return Err(Error::InconsistentHistogram);
            }
            total = total.checked_add(n).ok_or(Error::InconsistentHistogram)?;
            full.insert(key, n);
        }
        if total != shots {
            return Err(Error::InconsistentHistogram);
        }
        Ok(Self {
            subset,
            shots,
            seed,
            counts: full,
        })
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// All `2^k` outcomes in lexicographic order, zero counts included.
    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn count(&self, outcome: &str) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    /// Relative frequencies indexed by outcome value.
    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.shots as f64;
        self.counts.values().map(|&n| n as f64 / total).collect()
    }

    fn require_subset(&self, expected: &[usize]) -> Result<()> {
        if self.subset != expected {
            return Err(Error::WrongSubset {
                expected: expected.to_vec(),
                found: self.subset.clone(),
            });
        }
        Ok(())
    }
}

#[inline]
fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws `shots` outcomes from `distribution` (indexed like
/// [`StateVector::marginal_probabilities`]).
pub fn sample_distribution(
    distribution: &[f64],
    subset: &[usize],
    shots: u64,
    seed: u64,
) -> Result<ShotHistogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    if distribution.len() != 1usize << subset.len() {
        return Err(Error::DimensionMismatch {
            expected: 1usize << subset.len(),
            found: distribution.len(),
        });
    }
    let mut cdf = Vec::with_capacity(distribution.len());
    let mut acc = 0.0;
    for &p in distribution {
        if !(p.is_finite() && p >= -FREQUENCY_SLACK) {
            return Err(Error::InvalidProbability(p));
        }
        acc += p.max(0.0);
        cdf.push(acc);
    }
    if acc <= 0.0 {
        return Err(Error::InvalidProbability(acc));
    }
    let last = distribution
        .iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(distribution.len() - 1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tallies = alloc::vec![0u64; distribution.len()];
    for _ in 0..shots {
        let u = uniform(&mut rng) * acc;
        let k = cdf.iter().position(|&c| u < c).unwrap_or(last);
        tallies[k] += 1;
    }
    let width = subset.len();
    let counts = tallies
        .into_iter()
        .enumerate()
        .map(|(k, n)| (bitstring(k, width), n))
        .collect();
    Ok(ShotHistogram {
        subset: subset.to_vec(),
        shots,
        seed,
        counts,
    })
}

/// Measures `subset` of `psi` `shots` times.
pub fn sample(psi: &StateVector, subset: &[usize], shots: u64, seed: u64) -> Result<ShotHistogram> {
    let marginal = psi.marginal_probabilities(subset)?;
    sample_distribution(&marginal, subset, shots, seed)
}

/// Measures `subset` of a mixed state `shots` times.
pub fn sample_density(
    rho: &DensityMatrix,
    subset: &[usize],
    shots: u64,
    seed: u64,
) -> Result<ShotHistogram> {
    let marginal = rho.marginal_probabilities(subset)?;
    sample_distribution(&marginal, subset, shots, seed)
}

fn check_frequency(a1: f64, a2: f64) -> Result<()> {
    let ok = a1.is_finite()
        && a2.is_finite()
        && a1 >= -FREQUENCY_SLACK
        && a2 >= -FREQUENCY_SLACK
        && a1 + a2 <= 1.0 + FREQUENCY_SLACK;
    if ok {
        Ok(())
    } else {
        Err(Error::FrequencyOutOfRange { a1, a2 })
    }
}

/// `J0 = (2a₁ − 1)²`, `J±2 = 2a₁a₂` from the probabilities of `|00⟩` (a₁)
/// and `|11⟩` (a₂) in the pure experiment.
pub fn estimate_pure_intensities(tau: f64, a1: f64, a2: f64) -> Result<IntensityRecord> {
    check_frequency(a1, a2)?;
    let j2 = 2.0 * a1 * a2;
    Ok(IntensityRecord {
        tau,
        j0: (2.0 * a1 - 1.0).powi(2),
        j_plus2: j2,
        j_minus2: j2,
        source: IntensitySource::Sampled,
    })
}

/// Pure-experiment estimate from a histogram over qubits (1, 2).
pub fn estimate_pure_from_histogram(hist: &ShotHistogram, tau: f64) -> Result<IntensityRecord> {
    hist.require_subset(&PURE_READOUT)?;
    let f = hist.frequencies();
    estimate_pure_intensities(tau, f[0], f[3])
}

/// `J0 = cos τ·(p00 − p11)` and `J±2 = ½(tanh(β/2) − J0)` from the dimer
/// marginals `(p00, p01, p10, p11)`.
pub fn estimate_thermal_from_probabilities(
    p: &[f64; 4],
    tau: f64,
    params: &ThermalParameters,
) -> Result<IntensityRecord> {
    if p.iter().any(|x| !x.is_finite() || *x < -FREQUENCY_SLACK) {
        return Err(Error::FrequencyOutOfRange { a1: p[0], a2: p[3] });
    }
    let j0 = tau.cos() * (p[0] - p[3]);
    let j2 = 0.5 * (params.polarization() - j0);
    Ok(IntensityRecord {
        tau,
        j0,
        j_plus2: j2,
        j_minus2: j2,
        source: IntensitySource::Sampled,
    })
}

/// Thermal-experiment estimate from a histogram over the dimer qubits (2, 3).
pub fn estimate_thermal_intensities(
    hist: &ShotHistogram,
    tau: f64,
    beta: f64,
) -> Result<IntensityRecord> {
    hist.require_subset(&DIMER_QUBITS)?;
    let params = ThermalParameters::new(beta)?;
    let f = hist.frequencies();
    estimate_thermal_from_probabilities(&[f[0], f[1], f[2], f[3]], tau, &params)
}

/// Per-gate depolarizing strength.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    p_depolarizing: f64,
}

impl NoiseModel {
    pub fn new(p_depolarizing: f64) -> Result<Self> {
        check_probability(p_depolarizing)?;
        Ok(Self { p_depolarizing })
    }

    pub fn noiseless() -> Self {
        Self {
            p_depolarizing: 0.0,
        }
    }

    pub fn p(&self) -> f64 {
        self.p_depolarizing
    }

    pub fn is_noiseless(&self) -> bool {
        self.p_depolarizing == 0.0
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// `ρ → (1 − p)ρ + p·(Tr_A ρ ⊗ I_A/2^|A|)` for the acted qubits `A`.
pub fn apply_depolarizing(rho: &DensityMatrix, acted: &[usize], p: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    let n = rho.n_qubits();
    check_subset(acted, n)?;
    if p == 0.0 {
        return Ok(rho.clone());
    }
    let mask = acted
        .iter()
        .fold(0usize, |m, &q| m | (1usize << bit_of(q, n)));
    // every assignment of the acted bits, as a mask-embedded offset
    let offsets: Vec<usize> = (0..1usize << acted.len())
        .map(|k| {
            acted.iter().enumerate().fold(0usize, |off, (j, &q)| {
                off | (((k >> (acted.len() - 1 - j)) & 1) << bit_of(q, n))
            })
        })
        .collect();
    let inv = 1.0 / offsets.len() as f64;
    let src = rho.matrix();
    let dim = src.dim();
    let mut out = CMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let mut z = src[(r, c)] * (1.0 - p);
            if r & mask == c & mask {
                let (rb, cb) = (r & !mask, c & !mask);
                let traced: C64 = offsets.iter().map(|&o| src[(rb | o, cb | o)]).sum();
                z += traced * (p * inv);
            }
            out[(r, c)] = z;
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(n, out))
}

/// Runs `circuit` on `|0…0⟩⟨0…0|`, depolarizing the acted qubits after every
/// gate.
pub fn run_noisy(circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    let mut rho = density_from_pure(&ground_state(circuit.n_qubits())?);
    for gate in circuit.gates() {
        rho = apply_gate_to_density(&rho, gate)?;
        if !noise.is_noiseless() {
            rho = apply_depolarizing(&rho, &gate.qubits(), noise.p())?;
        }
    }
    Ok(rho)
}
