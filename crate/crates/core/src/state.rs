//! Pure states, density matrices, partial traces and coherence-order blocks.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{align_global_phase, hermitian_eigenvalues, CMatrix};
use crate::{Error, Result, ALGEBRAIC_TOL, C64, MAX_QUBITS, PSD_FLOOR};

pub(crate) fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::EmptyRegister);
    }
    if n_qubits > MAX_QUBITS {
        return Err(Error::Capacity {
            requested: n_qubits,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Bit position (from the least significant end) of 1-based `qubit`.
#[inline]
pub(crate) fn bit_of(qubit: usize, n_qubits: usize) -> usize {
    n_qubits - qubit
}

/// Checks that `qubits` are distinct, in range and non-empty.
pub(crate) fn check_subset(qubits: &[usize], n_qubits: usize) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::EmptySubset);
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q == 0 || q > n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Reads the bits of `qubits` out of a full basis index; `qubits[0]` becomes
/// the most significant bit of the result.
#[inline]
pub(crate) fn gather_bits(index: usize, qubits: &[usize], n_qubits: usize) -> usize {
    qubits.iter().fold(0, |acc, &q| {
        (acc << 1) | ((index >> bit_of(q, n_qubits)) & 1)
    })
}

/// Pure state of an `n`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

/// `|0…0⟩` on `n_qubits` qubits.
pub fn ground_state(n_qubits: usize) -> Result<StateVector> {
    check_register(n_qubits)?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
    amplitudes[0] = C64::new(1.0, 0.0);
    Ok(StateVector {
        n_qubits,
        amplitudes,
    })
}

impl StateVector {
    /// Wraps an amplitude array; its length must be a power of two and its
    /// squared norm must be 1 within [`ALGEBRAIC_TOL`].
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(2),
                found: len,
            });
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_register(n_qubits)?;
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("amplitude"));
        }
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Born-rule probabilities of every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Marginal distribution of the listed qubits. Outcome `k` has the bits of
    /// `subset` in listed order, `subset[0]` most significant.
    pub fn marginal_probabilities(&self, subset: &[usize]) -> Result<Vec<f64>> {
        marginal_from_diagonal(&self.probabilities(), subset, self.n_qubits)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Copy with the global phase fixed so the largest amplitude is real
    /// and positive.
    pub fn phase_aligned(&self) -> Self {
        let mut out = self.clone();
        align_global_phase(&mut out.amplitudes);
        out
    }

    /// Max amplitude difference after aligning both global phases.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        let a = self.phase_aligned();
        let b = other.phase_aligned();
        a.amplitudes
            .iter()
            .zip(&b.amplitudes)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn marginal_from_diagonal(
    diagonal: &[f64],
    subset: &[usize],
    n_qubits: usize,
) -> Result<Vec<f64>> {
    check_subset(subset, n_qubits)?;
    let mut out = vec![0.0; 1 << subset.len()];
    for (index, &p) in diagonal.iter().enumerate() {
        out[gather_bits(index, subset, n_qubits)] += p;
    }
    Ok(out)
}

/// Density matrix of an `n`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    elements: CMatrix,
}

/// `|ψ⟩⟨ψ|`.
pub fn density_from_pure(psi: &StateVector) -> DensityMatrix {
    DensityMatrix {
        n_qubits: psi.n_qubits,
        elements: CMatrix::outer(&psi.amplitudes, &psi.amplitudes),
    }
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity before wrapping.
    pub fn from_matrix(elements: CMatrix) -> Result<Self> {
        let dim = elements.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: dim.next_power_of_two().max(2),
                found: dim,
            });
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_register(n_qubits)?;
        let rho = Self { n_qubits, elements };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(n_qubits: usize, elements: CMatrix) -> Self {
        debug_assert_eq!(elements.dim(), 1 << n_qubits);
        Self { n_qubits, elements }
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1 << n_qubits;
        Ok(Self {
            n_qubits,
            elements: CMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
        })
    }

    /// Checks the three density-matrix invariants.
    pub fn validate(&self) -> Result<()> {
        if self
            .elements
            .as_slice()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("density matrix element"));
        }
        if self.elements.hermiticity_defect() >= ALGEBRAIC_TOL {
            return Err(Error::InvalidDensity("not Hermitian"));
        }
        let tr = self.elements.trace();
        if (tr.re - 1.0).abs() > ALGEBRAIC_TOL || tr.im.abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidDensity("trace differs from 1"));
        }
        if self.min_eigenvalue() < -PSD_FLOOR {
            return Err(Error::InvalidDensity("negative eigenvalue"));
        }
        Ok(())
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.elements
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut CMatrix {
        &mut self.elements
    }

    pub fn into_matrix(self) -> CMatrix {
        self.elements
    }

    pub fn trace(&self) -> C64 {
        self.elements.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.elements.matmul(&self.elements).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.elements)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Real parts of the diagonal: the computational-basis probabilities.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.elements.dim())
            .map(|k| self.elements[(k, k)].re)
            .collect()
    }

    /// Marginal distribution of the listed qubits, ordered as in
    /// [`StateVector::marginal_probabilities`].
    pub fn marginal_probabilities(&self, subset: &[usize]) -> Result<Vec<f64>> {
        marginal_from_diagonal(&self.diagonal(), subset, self.n_qubits)
    }

    /// `Tr(ρ·A)` for an operator `A` of matching size.
    pub fn expectation(&self, op: &CMatrix) -> Result<C64> {
        if op.dim() != self.elements.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.elements.dim(),
                found: op.dim(),
            });
        }
        Ok(self.elements.matmul(op).trace())
    }

    /// Reduced state on `keep`, in the listed order (`keep[0]` becomes qubit 1
    /// of the result).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }
}

/// Traces out every qubit not listed in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits;
    check_subset(keep, n)?;
    let traced: Vec<usize> = (1..=n).filter(|q| !keep.contains(q)).collect();
    let k = keep.len();
    let out_dim = 1usize << k;

    // full index for (kept value, traced value)
    let compose = |kept: usize, rest: usize| -> usize {
        let mut idx = 0usize;
        for (j, &q) in keep.iter().enumerate() {
            idx |= ((kept >> (k - 1 - j)) & 1) << bit_of(q, n);
        }
        let t = traced.len();
        for (j, &q) in traced.iter().enumerate() {
            idx |= ((rest >> (t - 1 - j)) & 1) << bit_of(q, n);
        }
        idx
    };

    let mut out = CMatrix::zeros(out_dim);
    for rest in 0..(1usize << traced.len()) {
        for r in 0..out_dim {
            let fr = compose(r, rest);
            for c in 0..out_dim {
                out[(r, c)] += rho.elements[(fr, compose(c, rest))];
            }
        }
    }
    Ok(DensityMatrix {
        n_qubits: k,
        elements: out,
    })
}

/// Diagonal of the collective spin projection `I_z = Σ_j I_jz`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CollectiveSpinZ {
    n_qubits: usize,
}

impl CollectiveSpinZ {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        Ok(Self { n_qubits })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `2·m` for basis state `index`, an exact integer.
    #[inline]
    pub fn doubled_weight(&self, index: usize) -> i32 {
        self.n_qubits as i32 - 2 * index.count_ones() as i32
    }

    /// Eigenvalue `m = (n − 2·popcount)/2` of basis state `index`.
    #[inline]
    pub fn weight(&self, index: usize) -> f64 {
        f64::from(self.doubled_weight(index)) / 2.0
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..1usize << self.n_qubits)
            .map(|k| self.weight(k))
            .collect()
    }

    pub fn matrix(&self) -> CMatrix {
        let diag: Vec<C64> = self
            .weights()
            .into_iter()
            .map(|w| C64::new(w, 0.0))
            .collect();
        CMatrix::from_diagonal(&diag)
    }

    /// Coherence order `m_row − m_col` of element `(row, col)`.
    #[inline]
    pub fn order(&self, row: usize, col: usize) -> i32 {
        (self.doubled_weight(row) - self.doubled_weight(col)) / 2
    }
}

/// Split of a matrix into its coherence-order blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceDecomposition {
    blocks: BTreeMap<i32, CMatrix>,
}

impl CoherenceDecomposition {
    /// Block of order `n`, if `n` is within `[−n_qubits, n_qubits]`.
    pub fn block(&self, order: i32) -> Option<&CMatrix> {
        self.blocks.get(&order)
    }

    pub fn orders(&self) -> impl Iterator<Item = i32> + '_ {
        self.blocks.keys().copied()
    }

    /// Orders whose block has an entry above `tol` in modulus.
    pub fn nonzero_orders(&self, tol: f64) -> Vec<i32> {
        self.blocks
            .iter()
            .filter(|(_, b)| b.max_abs() > tol)
            .map(|(&n, _)| n)
            .collect()
    }

    /// `Σ_n blocks[n]`.
    pub fn reconstruct(&self) -> CMatrix {
        let mut it = self.blocks.values();
        let first = it.next().cloned().unwrap_or_else(|| CMatrix::zeros(0));
        it.fold(first, |acc, b| acc.add(b))
    }
}

/// Decomposes an arbitrary operator into coherence-order blocks.
pub fn coherence_blocks(op: &CMatrix, iz: &CollectiveSpinZ) -> Result<CoherenceDecomposition> {
    let dim = 1usize << iz.n_qubits();
    if op.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: op.dim(),
        });
    }
    let n = iz.n_qubits() as i32;
    let mut blocks: BTreeMap<i32, CMatrix> = (-n..=n).map(|k| (k, CMatrix::zeros(dim))).collect();
    for r in 0..dim {
        for c in 0..dim {
            let z = op[(r, c)];
            if z.re != 0.0 || z.im != 0.0 {
                if let Some(b) = blocks.get_mut(&iz.order(r, c)) {
                    b[(r, c)] = z;
                }
            }
        }
    }
    Ok(CoherenceDecomposition { blocks })
}

/// Coherence-order decomposition of a density matrix.
pub fn coherence_decompose(
    rho: &DensityMatrix,
    iz: &CollectiveSpinZ,
) -> Result<CoherenceDecomposition> {
    coherence_blocks(&rho.elements, iz)
}
