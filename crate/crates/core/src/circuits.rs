//! Gate-level versions of the two experiments.
//!
//! Pure ground state (2 qubits): `Rx(−τ)` on qubit 1, then CNOT 1→2, which
//! maps `|00⟩` to `cos(τ/2)|00⟩ + i·sin(τ/2)|11⟩`.
//!
//! Thermal state (4 qubits): each dimer spin is purified by one ancilla.
//! Qubits 2 and 3 form the dimer, qubits 1 and 4 are the ancillas. The pairs
//! (1,2) and (3,4) are each prepared in `cos(θ/2)|00⟩ + sin(θ/2)|11⟩` with
//! `cos θ = tanh(β/2)`, and the dimer propagator is then applied to (2,3)
//! through an 8-gate CNOT/rotation decomposition.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::gates::{Circuit, Gate};
use crate::nmr::ThermalParameters;
use crate::{Error, Result};

/// Readout qubits of the pure experiment.
pub const PURE_READOUT: [usize; 2] = [1, 2];
/// Dimer qubits of the thermal experiment.
pub const DIMER_QUBITS: [usize; 2] = [2, 3];
/// Purifying ancillas of the thermal experiment.
pub const ANCILLA_QUBITS: [usize; 2] = [1, 4];
/// Register width of the thermal experiment.
pub const THERMAL_REGISTER: usize = 4;

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("tau"))
    }
}

/// `Rx(−τ)` on qubit 1 followed by CNOT(1→2).
pub fn pure_ground_circuit(tau: f64) -> Result<Circuit> {
    check_tau(tau)?;
    Circuit::from_gates(2, alloc::vec![Gate::rx(1, -tau), Gate::cnot(1, 2)])
}

/// Purification angle: `θ = arccos(tanh(β/2))`.
pub fn theta_from_beta(beta: f64) -> Result<f64> {
    let params = ThermalParameters::new(beta)?;
    Ok(purification_angle(&params))
}

pub(crate) fn purification_angle(params: &ThermalParameters) -> f64 {
    params.polarization().acos()
}

/// `Ry(θ)` on 1, CNOT(1→2), `Ry(θ)` on 3, CNOT(3→4) on a 4-qubit register.
pub fn purification_prep_circuit(params: &ThermalParameters) -> Circuit {
    let theta = purification_angle(params);
    Circuit::from_gates(
        THERMAL_REGISTER,
        alloc::vec![
            Gate::ry(1, theta),
            Gate::cnot(1, 2),
            Gate::ry(3, theta),
            Gate::cnot(3, 4),
        ],
    )
    .expect("fixed 4-qubit layout")
}

/// Gates realising `exp(−i·(H12/D)·τ)` on qubits `(a, b)` of an `n`-qubit
/// register, in application order.
///
/// As an operator product the decomposition reads
/// `Rx_a(π/2)·Rx_b(−π/2)·C_ab·Rx_a(−τ/2)·Rz_b(−τ/2)·C_ab·Rx_a(−π/2)·Rx_b(π/2)`;
/// the rightmost factor acts first, so the list is reversed here.
pub fn dimer_propagator_gates(a: usize, b: usize, tau: f64) -> Vec<Gate> {
    let operator_product = [
        Gate::rx(a, FRAC_PI_2),
        Gate::rx(b, -FRAC_PI_2),
        Gate::cnot(a, b),
        Gate::rx(a, -tau / 2.0),
        Gate::rz(b, -tau / 2.0),
        Gate::cnot(a, b),
        Gate::rx(a, -FRAC_PI_2),
        Gate::rx(b, FRAC_PI_2),
    ];
    operator_product.iter().rev().copied().collect()
}

/// The dimer propagator acting on qubits 2 and 3 of the 4-qubit register.
pub fn dimer_propagator_circuit(tau: f64) -> Result<Circuit> {
    check_tau(tau)?;
    let [a, b] = DIMER_QUBITS;
    Circuit::from_gates(THERMAL_REGISTER, dimer_propagator_gates(a, b, tau))
}

/// Purification followed by the dimer propagator.
pub fn thermal_full_circuit(params: &ThermalParameters, tau: f64) -> Result<Circuit> {
    purification_prep_circuit(params).then(&dimer_propagator_circuit(tau)?)
}

/// Closed-form marginals `(p00, p01, p10, p11)` of the dimer qubits after the
/// thermal circuit, as functions of the purification angle.
pub fn dimer_marginals(theta: f64, tau: f64) -> [f64; 4] {
    let (ct, c2t, st) = (theta.cos(), (2.0 * theta).cos(), theta.sin());
    let p00 = (3.0 + 4.0 * tau.cos() * ct + c2t) / 8.0;
    let p11 = (3.0 - 4.0 * tau.cos() * ct + c2t) / 8.0;
    let p01 = st * st / 4.0;
    [p00, p01, p01, p11]
}

/// Parameters of the pure ground-state experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureExperimentSpec {
    tau: f64,
}

impl PureExperimentSpec {
    pub fn new(tau: f64) -> Result<Self> {
        check_tau(tau)?;
        Ok(Self { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn circuit(&self) -> Circuit {
        pure_ground_circuit(self.tau).expect("validated tau")
    }
}

/// Parameters of the thermal experiment; θ is derived from β.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalExperimentSpec {
    params: ThermalParameters,
    tau: f64,
    theta: f64,
}

impl ThermalExperimentSpec {
    pub fn new(beta: f64, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        let params = ThermalParameters::new(beta)?;
        Ok(Self {
            params,
            tau,
            theta: purification_angle(&params),
        })
    }

    pub fn params(&self) -> &ThermalParameters {
        &self.params
    }

    pub fn beta(&self) -> f64 {
        self.params.beta()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn circuit(&self) -> Circuit {
        thermal_full_circuit(&self.params, self.tau).expect("validated tau")
    }

    pub fn marginals(&self) -> [f64; 4] {
        dimer_marginals(self.theta, self.tau)
    }
}
