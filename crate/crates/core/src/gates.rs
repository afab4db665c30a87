//! One-qubit rotations, CNOT, circuits and their action on registers.
//!
//! Rotations follow `R_a(θ) = exp(−i θ σ_a / 2)`. Gates are applied to
//! statevectors by bit-sliced amplitude updates; [`circuit_unitary`] instead
//! builds every gate as an explicit Kronecker product so that the two paths
//! check each other.

use alloc::vec::Vec;

use crate::linalg::CMatrix;
use crate::state::{bit_of, check_register, DensityMatrix, StateVector};
use crate::{Error, Result, C64};

/// Rotation axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// A gate on 1-based qubit indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Rotation {
        axis: Axis,
        target: usize,
        angle: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn rx(target: usize, angle: f64) -> Self {
        Gate::Rotation {
            axis: Axis::X,
            target,
            angle,
        }
    }

    pub fn ry(target: usize, angle: f64) -> Self {
        Gate::Rotation {
            axis: Axis::Y,
            target,
            angle,
        }
    }

    pub fn rz(target: usize, angle: f64) -> Self {
        Gate::Rotation {
            axis: Axis::Z,
            target,
            angle,
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    /// Qubits the gate touches, control first for CNOT.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rotation { target, .. } => alloc::vec![target],
            Gate::Cnot { control, target } => alloc::vec![control, target],
        }
    }

    /// The inverse gate.
    pub fn inverse(&self) -> Self {
        match *self {
            Gate::Rotation {
                axis,
                target,
                angle,
            } => Gate::Rotation {
                axis,
                target,
                angle: -angle,
            },
            cnot => cnot,
        }
    }

    /// Checks the gate against an `n_qubits` register.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let in_range = |q: usize| {
            if q == 0 || q > n_qubits {
                Err(Error::QubitOutOfRange { index: q, n_qubits })
            } else {
                Ok(())
            }
        };
        match *self {
            Gate::Rotation { target, angle, .. } => {
                in_range(target)?;
                if !angle.is_finite() {
                    return Err(Error::NonFinite("rotation angle"));
                }
            }
            Gate::Cnot { control, target } => {
                in_range(control)?;
                in_range(target)?;
                if control == target {
                    return Err(Error::CnotSameQubit(control));
                }
            }
        }
        Ok(())
    }
}

fn rotation_entries(axis: Axis, angle: f64) -> [C64; 4] {
    let (s, c) = (angle / 2.0).sin_cos();
    let zero = C64::new(0.0, 0.0);
    match axis {
        Axis::X => [
            C64::new(c, 0.0),
            C64::new(0.0, -s),
            C64::new(0.0, -s),
            C64::new(c, 0.0),
        ],
        Axis::Y => [
            C64::new(c, 0.0),
            C64::new(-s, 0.0),
            C64::new(s, 0.0),
            C64::new(c, 0.0),
        ],
        Axis::Z => [C64::new(c, -s), zero, zero, C64::new(c, s)],
    }
}

/// `exp(−i·angle/2·σ_axis)` as a 2×2 matrix.
pub fn rotation_matrix(axis: Axis, angle: f64) -> Result<CMatrix> {
    if !angle.is_finite() {
        return Err(Error::NonFinite("rotation angle"));
    }
    Ok(CMatrix::from_rows(&rotation_entries(axis, angle)))
}

/// CNOT in the basis `{|00⟩, |01⟩, |10⟩, |11⟩}`, first qubit as control.
pub fn cnot_matrix() -> CMatrix {
    let mut m = CMatrix::zeros(4);
    let one = C64::new(1.0, 0.0);
    m[(0, 0)] = one;
    m[(1, 1)] = one;
    m[(2, 3)] = one;
    m[(3, 2)] = one;
    m
}

/// Applies `gate` to a raw amplitude buffer of an `n_qubits` register.
/// The gate must already be validated.
pub(crate) fn apply_in_place(amps: &mut [C64], n_qubits: usize, gate: &Gate) {
    match *gate {
        Gate::Rotation {
            axis,
            target,
            angle,
        } => {
            let [u00, u01, u10, u11] = rotation_entries(axis, angle);
            let mask = 1usize << bit_of(target, n_qubits);
            for i in 0..amps.len() {
                if i & mask == 0 {
                    let (a0, a1) = (amps[i], amps[i | mask]);
                    amps[i] = u00 * a0 + u01 * a1;
                    amps[i | mask] = u10 * a0 + u11 * a1;
                }
            }
        }
        Gate::Cnot { control, target } => {
            let cmask = 1usize << bit_of(control, n_qubits);
            let tmask = 1usize << bit_of(target, n_qubits);
            for i in 0..amps.len() {
                if i & cmask != 0 && i & tmask == 0 {
                    amps.swap(i, i | tmask);
                }
            }
        }
    }
}

/// Returns `gate·ψ`.
pub fn apply_gate(psi: &StateVector, gate: &Gate) -> Result<StateVector> {
    gate.validate(psi.n_qubits())?;
    let mut out = psi.clone();
    apply_in_place(out.amplitudes_mut(), psi.n_qubits(), gate);
    Ok(out)
}

/// Returns `U·ρ·U†` for the gate's unitary `U`.
pub fn apply_gate_to_density(rho: &DensityMatrix, gate: &Gate) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    gate.validate(n)?;
    let mut out = rho.clone();
    let m = out.matrix_mut();
    let dim = m.dim();
    let mut column = alloc::vec![C64::new(0.0, 0.0); dim];
    for c in 0..dim {
        for r in 0..dim {
            column[r] = m[(r, c)];
        }
        apply_in_place(&mut column, n, gate);
        for r in 0..dim {
            m[(r, c)] = column[r];
        }
    }
    // row r of (U ρ) U† is conj(U · conj(row r))
    for r in 0..dim {
        let row = &mut m.as_mut_slice()[r * dim..(r + 1) * dim];
        row.iter_mut().for_each(|z| *z = z.conj());
        apply_in_place(row, n, gate);
        row.iter_mut().for_each(|z| *z = z.conj());
    }
    Ok(out)
}

/// An ordered gate list on a fixed register. The first gate is applied first.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        Ok(Self {
            n_qubits,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Appends a gate after validating it against the register.
    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// `self` followed by `next`.
    pub fn then(mut self, next: &Circuit) -> Result<Self> {
        if next.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: next.n_qubits,
            });
        }
        self.gates.extend_from_slice(&next.gates);
        Ok(self)
    }

    pub fn inverse(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Runs the circuit on `psi`.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: psi.n_qubits(),
            });
        }
        let mut out = psi.clone();
        for g in &self.gates {
            apply_in_place(out.amplitudes_mut(), self.n_qubits, g);
        }
        Ok(out)
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn run(&self) -> StateVector {
        let mut amps = alloc::vec![C64::new(0.0, 0.0); 1 << self.n_qubits];
        amps[0] = C64::new(1.0, 0.0);
        for g in &self.gates {
            apply_in_place(&mut amps, self.n_qubits, g);
        }
        StateVector::from_raw(self.n_qubits, amps)
    }

    pub fn unitary(&self) -> CMatrix {
        circuit_unitary(self)
    }
}

fn projector(bit: usize) -> CMatrix {
    let mut p = CMatrix::zeros(2);
    p[(bit, bit)] = C64::new(1.0, 0.0);
    p
}

fn pauli_x() -> CMatrix {
    CMatrix::from_rows(&[
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
    ])
}

/// `f_1 ⊗ f_2 ⊗ … ⊗ f_n` where `factor(q)` supplies the 2×2 factor of qubit
/// `q` (qubit 1 leftmost).
fn kron_chain(n_qubits: usize, factor: impl Fn(usize) -> CMatrix) -> CMatrix {
    (2..=n_qubits).fold(factor(1), |acc, q| acc.kron(&factor(q)))
}

/// Full `2^n × 2^n` matrix of one gate, built from Kronecker products.
pub fn embedded_gate_matrix(gate: &Gate, n_qubits: usize) -> Result<CMatrix> {
    gate.validate(n_qubits)?;
    let id = CMatrix::identity(2);
    Ok(match *gate {
        Gate::Rotation {
            axis,
            target,
            angle,
        } => {
            let r = rotation_matrix(axis, angle)?;
            kron_chain(
                n_qubits,
                |q| if q == target { r.clone() } else { id.clone() },
            )
        }
        Gate::Cnot { control, target } => {
            let idle = kron_chain(n_qubits, |q| {
                if q == control {
                    projector(0)
                } else {
                    id.clone()
                }
            });
            let flip = kron_chain(n_qubits, |q| {
                if q == control {
                    projector(1)
                } else if q == target {
                    pauli_x()
                } else {
                    id.clone()
                }
            });
            idle.add(&flip)
        }
    })
}

/// Product of the embedded gate matrices, later gates on the left.
pub fn circuit_unitary(circuit: &Circuit) -> CMatrix {
    let n = circuit.n_qubits;
    circuit
        .gates
        .iter()
        .fold(CMatrix::identity(1 << n), |acc, g| {
            // gates were validated on push
            embedded_gate_matrix(g, n)
                .expect("validated gate")
                .matmul(&acc)
        })
}
