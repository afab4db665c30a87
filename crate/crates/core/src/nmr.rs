//! Closed forms for the MQ NMR dynamics of a dipolar spin dimer.
//!
//! The two-spin/two-quantum average Hamiltonian
//! `H = −(D/2)(I₁⁺I₂⁺ + I₁⁻I₂⁻)` couples only `|00⟩` and `|11⟩`, where it
//! acts as `−(D/2)σ_x`. The propagator in the dimensionless time `τ = D·t`
//! is therefore `cos(τ/2) + i·sin(τ/2)·σ_x` on that pair and the identity on
//! `{|01⟩, |10⟩}`; everything below is built from that block rotation.
//!
//! Intensities use the detect-operator form of the MQ NMR signal: with
//! `ρ(τ) = UρU†` and `A = U·I_z·U†`, the order-`n` intensity is
//! `J_n = Tr(ρ_n(τ)·A_{−n})`. The thermal closed forms carry the polarization
//! `tanh(β/2) = Tr(ρ₀·I_z)`.

use crate::linalg::CMatrix;
use crate::state::{coherence_blocks, CollectiveSpinZ, DensityMatrix, StateVector};
use crate::{Error, Result, C64};

/// Above this β the Boltzmann weights of the excited levels underflow and the
/// thermal state is reported as saturated.
pub const BETA_SATURATION: f64 = 700.0;

/// Dipolar coupling constant `D` (rad/s).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DipolarDimer {
    coupling: f64,
}

impl DipolarDimer {
    pub fn new(coupling: f64) -> Result<Self> {
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::InvalidCoupling(coupling));
        }
        Ok(Self { coupling })
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// `τ = D·t`.
    pub fn reduced_time(&self, t: f64) -> f64 {
        self.coupling * t
    }

    /// `H12` in the basis `{|00⟩, |01⟩, |10⟩, |11⟩}`.
    pub fn hamiltonian(&self) -> CMatrix {
        h12_matrix(self.coupling)
    }
}

/// `H12` for coupling `d`: `−d/2` at `(|00⟩,|11⟩)` and `(|11⟩,|00⟩)`.
pub fn h12_matrix(d: f64) -> CMatrix {
    let mut h = CMatrix::zeros(4);
    h[(0, 3)] = C64::new(-d / 2.0, 0.0);
    h[(3, 0)] = C64::new(-d / 2.0, 0.0);
    h
}

/// `exp(−i·(H12/D)·τ)`.
pub fn propagator(tau: f64) -> Result<CMatrix> {
    check_tau(tau)?;
    let (s, c) = (tau / 2.0).sin_cos();
    let mut u = CMatrix::identity(4);
    u[(0, 0)] = C64::new(c, 0.0);
    u[(3, 3)] = C64::new(c, 0.0);
    u[(0, 3)] = C64::new(0.0, s);
    u[(3, 0)] = C64::new(0.0, s);
    Ok(u)
}

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("tau"))
    }
}

/// `cos(τ/2)|00⟩ + i·sin(τ/2)|11⟩`.
pub fn pure_evolved_state(tau: f64) -> Result<StateVector> {
    check_tau(tau)?;
    let (s, c) = (tau / 2.0).sin_cos();
    let zero = C64::new(0.0, 0.0);
    Ok(StateVector::from_raw(
        2,
        alloc::vec![C64::new(c, 0.0), zero, zero, C64::new(0.0, s)],
    ))
}

/// Where an intensity came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntensitySource {
    Analytic,
    ExactCircuit,
    Sampled,
}

impl IntensitySource {
    pub fn as_str(&self) -> &'static str {
        match self {
            IntensitySource::Analytic => "analytic",
            IntensitySource::ExactCircuit => "exact-circuit",
            IntensitySource::Sampled => "sampled",
        }
    }
}

impl core::fmt::Display for IntensitySource {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Intensities of the 0- and ±2-order coherences at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntensityRecord {
    pub tau: f64,
    pub j0: f64,
    pub j_plus2: f64,
    pub j_minus2: f64,
    pub source: IntensitySource,
}

impl IntensityRecord {
    /// Average of `J+2` and `J−2` (they coincide on noiseless paths).
    pub fn j2(&self) -> f64 {
        0.5 * (self.j_plus2 + self.j_minus2)
    }

    /// `J0 + J+2 + J−2`.
    pub fn total(&self) -> f64 {
        self.j0 + self.j_plus2 + self.j_minus2
    }
}

/// `J0 = cos²τ`, `J±2 = sin²τ/2`.
pub fn analytic_intensities_pure(tau: f64) -> Result<IntensityRecord> {
    check_tau(tau)?;
    let (s, c) = tau.sin_cos();
    Ok(IntensityRecord {
        tau,
        j0: c * c,
        j_plus2: 0.5 * s * s,
        j_minus2: 0.5 * s * s,
        source: IntensitySource::Analytic,
    })
}

/// Dimensionless inverse temperature `β = ħω₀/kT`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalParameters {
    beta: f64,
}

impl ThermalParameters {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidBeta(beta));
        }
        Ok(Self { beta })
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Single-spin polarization `tanh(β/2)`.
    pub fn polarization(&self) -> f64 {
        (self.beta / 2.0).tanh()
    }

    /// True when β is past [`BETA_SATURATION`]: the thermal state is then
    /// the `|00⟩` projector to double precision.
    pub fn is_saturated(&self) -> bool {
        self.beta > BETA_SATURATION
    }

    /// Partition function `Z = 2(1 + cosh β)`; infinite once saturated.
    pub fn partition_function(&self) -> f64 {
        2.0 * (1.0 + self.beta.cosh())
    }

    // Boltzmann factors relative to the ground level: the diagonal of ρ(0) is
    // (1, e, e, e²)/(1 + e)² with e = exp(−β), which never overflows.
    fn relative_weights(&self) -> (f64, f64) {
        let e = (-self.beta).exp();
        (e, (1.0 + e) * (1.0 + e))
    }
}

/// One-spin equilibrium state `e^{β I_z}/Z₁`.
pub fn single_spin_thermal(params: &ThermalParameters) -> DensityMatrix {
    let e = (-params.beta).exp();
    let up = 1.0 / (1.0 + e);
    DensityMatrix::from_matrix_unchecked(
        1,
        CMatrix::from_diagonal(&[C64::new(up, 0.0), C64::new(e * up, 0.0)]),
    )
}

/// Dimer equilibrium state `e^{β I_z}/Z`.
pub fn thermal_density(params: &ThermalParameters) -> DensityMatrix {
    let (e, norm) = params.relative_weights();
    let diag = [1.0, e, e, e * e].map(|w| C64::new(w / norm, 0.0));
    DensityMatrix::from_matrix_unchecked(2, CMatrix::from_diagonal(&diag))
}

/// Equilibrium state evolved for `τ` under `H12`, in closed form.
pub fn thermal_evolved_density(params: &ThermalParameters, tau: f64) -> Result<DensityMatrix> {
    check_tau(tau)?;
    let (e, norm) = params.relative_weights();
    // cosh β/Z, sinh β/Z, 1/Z written in e = exp(−β)
    let cosh_z = (1.0 + e * e) / (2.0 * norm);
    let sinh_z = (1.0 - e * e) / (2.0 * norm);
    let one_z = e / norm;
    let (s, c) = tau.sin_cos();
    let mut m = CMatrix::zeros(4);
    m[(0, 0)] = C64::new(cosh_z + c * sinh_z, 0.0);
    m[(1, 1)] = C64::new(one_z, 0.0);
    m[(2, 2)] = C64::new(one_z, 0.0);
    m[(3, 3)] = C64::new(cosh_z - c * sinh_z, 0.0);
    m[(0, 3)] = C64::new(0.0, -s * sinh_z);
    m[(3, 0)] = C64::new(0.0, s * sinh_z);
    Ok(DensityMatrix::from_matrix_unchecked(2, m))
}

/// `J0 = cos²τ·tanh(β/2)`, `J±2 = ½·sin²τ·tanh(β/2)`.
pub fn analytic_intensities_thermal(
    params: &ThermalParameters,
    tau: f64,
) -> Result<IntensityRecord> {
    check_tau(tau)?;
    let pol = params.polarization();
    let (s, c) = tau.sin_cos();
    Ok(IntensityRecord {
        tau,
        j0: c * c * pol,
        j_plus2: 0.5 * s * s * pol,
        j_minus2: 0.5 * s * s * pol,
        source: IntensitySource::Analytic,
    })
}

/// Intensities of an arbitrary two-spin initial state, computed from the
/// coherence blocks of `ρ(τ)` and of the detect operator `U·I_z·U†`.
pub fn general_coherence_intensities(rho0: &DensityMatrix, tau: f64) -> Result<IntensityRecord> {
    if rho0.n_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho0.matrix().dim(),
        });
    }
    let u = propagator(tau)?;
    let ud = u.adjoint();
    let iz = CollectiveSpinZ::new(2)?;
    let rho_t = u.matmul(rho0.matrix()).matmul(&ud);
    let detect = u.matmul(&iz.matrix()).matmul(&ud);
    let rho_blocks = coherence_blocks(&rho_t, &iz)?;
    let det_blocks = coherence_blocks(&detect, &iz)?;
    let intensity = |n: i32| -> f64 {
        match (rho_blocks.block(n), det_blocks.block(-n)) {
            (Some(r), Some(a)) => r.matmul(a).trace().re,
            _ => 0.0,
        }
    };
    Ok(IntensityRecord {
        tau,
        j0: intensity(0),
        j_plus2: intensity(2),
        j_minus2: intensity(-2),
        source: IntensitySource::Analytic,
    })
}
