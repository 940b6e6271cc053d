//! Expectation-value quantum computer for trace estimation.
//!
//! The probe is qubit 1 (the most significant tensor factor) and the work
//! register holds n qubits, N = 2^{n+1}. The algorithm prepares
//!
//! ```text
//! ρ₁ = (1/N)(1 − α₁ I₁ₓ)
//! ```
//!
//! applies cU = 1 ⊕ U and reads ⟨I₁ₓ + i I₁ᵧ⟩, which is proportional to
//! tr U. The constant is not hard-coded: each simulator measures it once per
//! register size with U = 1 and divides it out.
//!
//! Measurements carry a bounded error: the real and imaginary parts are each
//! perturbed uniformly within ±ε·Λ, Λ = Λ(I₁ₓ) = 1 being the spread of the
//! observable's eigenvalues. Thermal states use the first-order
//! high-temperature expansion and are not guaranteed positive for large α.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::matrix::{sigma_x, sigma_y, sigma_z, ComplexMatrix, I};

/// Λ(I₁ₓ) = Λ(I₁ᵧ): eigenvalues ±1/2.
pub const PROBE_EIGENVALUE_SPREAD: f64 = 1.0;

/// Tolerance on ‖UU† − 1‖∞ accepted by [`controlled_u`].
pub const UNITARITY_TOL: f64 = 1e-10;

/// Registers above this many qubits are refused (dense 2^m × 2^m matrices).
pub const MAX_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NmrError {
    #[error("U is not unitary (‖UU† − 1‖∞ = {0:e})")]
    NotUnitary(f64),
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("expected {expected} polarizations, got {got}")]
    PolarizationCount { expected: usize, got: usize },
    #[error("need at least {min} qubits, got {got}")]
    TooFewQubits { min: usize, got: usize },
    #[error("at most {MAX_QUBITS} qubits are supported, got {0}")]
    TooManyQubits(usize),
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, NmrError> {
        let qubits = qubit_count(matrix.dim())?;
        Ok(Self { qubits, matrix })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.matrix.is_hermitian(tol)
    }

    /// tr(M ρ).
    pub fn expectation(&self, observable: &ComplexMatrix) -> Complex64 {
        (observable * &self.matrix).trace()
    }
}

fn qubit_count(dim: usize) -> Result<usize, NmrError> {
    if !dim.is_power_of_two() {
        return Err(NmrError::NotPowerOfTwo(dim));
    }
    let q = dim.trailing_zeros() as usize;
    if q > MAX_QUBITS {
        return Err(NmrError::TooManyQubits(q));
    }
    Ok(q)
}

/// Product operator (1/2)·1 ⊗ … ⊗ σ ⊗ … ⊗ 1 with σ in slot `l` (1-based).
pub fn product_operator(qubits: usize, l: usize, pauli: &ComplexMatrix) -> ComplexMatrix {
    assert!(l >= 1 && l <= qubits, "qubit slot out of range");
    let id = ComplexMatrix::identity(2);
    let mut op = ComplexMatrix::identity(1);
    for slot in 1..=qubits {
        op = op.kron(if slot == l { pauli } else { &id });
    }
    op.scale(Complex64::new(0.5, 0.0))
}

/// First-order thermal state (1/N)(1 − Σₗ αₗ I_lz).
pub fn thermal_state(alphas: &[f64], qubits: usize) -> Result<DensityOperator, NmrError> {
    if alphas.len() != qubits {
        return Err(NmrError::PolarizationCount {
            expected: qubits,
            got: alphas.len(),
        });
    }
    if qubits == 0 {
        return Err(NmrError::TooFewQubits { min: 1, got: 0 });
    }
    if qubits > MAX_QUBITS {
        return Err(NmrError::TooManyQubits(qubits));
    }
    let n = 1usize << qubits;
    let z = sigma_z();
    let mut m = ComplexMatrix::identity(n);
    for (l, &alpha) in alphas.iter().enumerate() {
        m = &m - &product_operator(qubits, l + 1, &z).scale(Complex64::new(alpha, 0.0));
    }
    DensityOperator::new(m.scale(Complex64::new(1.0 / n as f64, 0.0)))
}

/// ρ₁ = (1/N)(1 − α₁ I₁ₓ) on `qubits` qubits (probe plus work register).
pub fn prepare_rho1(qubits: usize, alpha1: f64) -> Result<DensityOperator, NmrError> {
    if qubits < 2 {
        return Err(NmrError::TooFewQubits { min: 2, got: qubits });
    }
    if qubits > MAX_QUBITS {
        return Err(NmrError::TooManyQubits(qubits));
    }
    let n = 1usize << qubits;
    let i1x = product_operator(qubits, 1, &sigma_x());
    let m = &ComplexMatrix::identity(n) - &i1x.scale(Complex64::new(alpha1, 0.0));
    DensityOperator::new(m.scale(Complex64::new(1.0 / n as f64, 0.0)))
}

/// cU = 1 ⊕ U: U acts on the work register when the probe is |1⟩.
pub fn controlled_u(u: &ComplexMatrix) -> Result<ComplexMatrix, NmrError> {
    qubit_count(u.dim())?;
    let defect = u.unitarity_defect();
    if defect.is_nan() || defect > UNITARITY_TOL {
        return Err(NmrError::NotUnitary(defect));
    }
    Ok(ComplexMatrix::identity(u.dim()).direct_sum(u))
}

/// ρ₂ = cU ρ₁ cU†.
pub fn apply_cu(rho1: &DensityOperator, u: &ComplexMatrix) -> Result<DensityOperator, NmrError> {
    let expected = rho1.matrix.dim() / 2;
    if u.dim() != expected {
        return Err(NmrError::DimensionMismatch { expected, got: u.dim() });
    }
    let cu = controlled_u(u)?;
    let m = &(&cu * &rho1.matrix) * &cu.adjoint();
    DensityOperator::new(m)
}

/// Measurement precision of the expectation-value machine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvqcPrecision {
    epsilon: f64,
    alpha1: f64,
    seed: u64,
}

impl EvqcPrecision {
    pub fn new(epsilon: f64, alpha1: f64, seed: u64) -> Result<Self, NmrError> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(NmrError::InvalidPrecision(format!(
                "ε = {epsilon} must be finite and ≥ 0"
            )));
        }
        if !(alpha1 > 0.0 && alpha1.is_finite()) {
            return Err(NmrError::InvalidPrecision(format!(
                "α₁ = {alpha1} must be finite and > 0"
            )));
        }
        Ok(Self { epsilon, alpha1, seed })
    }

    /// Noise-free machine with unit polarization.
    pub fn exact() -> Self {
        Self {
            epsilon: 0.0,
            alpha1: 1.0,
            seed: 0,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn noiseless(self) -> Self {
        Self { epsilon: 0.0, ..self }
    }

    /// √2·N·ε/α₁: the trace-error bound obtained by rescaling the raw
    /// measurement with α₁/N.
    pub fn nominal_trace_bound(&self, work_dim: usize) -> f64 {
        let n = 2.0 * work_dim as f64;
        std::f64::consts::SQRT_2 * n * self.epsilon / self.alpha1
    }
}

/// I₁ₓ + i·I₁ᵧ on `qubits` qubits.
pub fn probe_observable(qubits: usize) -> ComplexMatrix {
    let x = product_operator(qubits, 1, &sigma_x());
    let y = product_operator(qubits, 1, &sigma_y());
    &x + &y.scale(I)
}

fn perturb<R: Rng + ?Sized>(z0: Complex64, epsilon: f64, rng: &mut R) -> Complex64 {
    if epsilon == 0.0 {
        return z0;
    }
    let r = epsilon * PROBE_EIGENVALUE_SPREAD;
    Complex64::new(z0.re + rng.random_range(-r..=r), z0.im + rng.random_range(-r..=r))
}

/// ⟨I₁ₓ + i I₁ᵧ⟩ with each component perturbed within ±εΛ, using a
/// generator seeded from `prec` (so repeated calls agree exactly).
pub fn measure_probe(rho2: &DensityOperator, prec: &EvqcPrecision) -> Complex64 {
    let mut rng = ChaCha8Rng::seed_from_u64(prec.seed);
    measure_with(rho2, prec.epsilon, &mut rng)
}

fn measure_with<R: Rng + ?Sized>(rho2: &DensityOperator, epsilon: f64, rng: &mut R) -> Complex64 {
    let z0 = rho2.expectation(&probe_observable(rho2.qubits));
    perturb(z0, epsilon, rng)
}

/// A trace-estimating machine with its own random stream and calibration
/// cache. Instances are independent; one instance is not shared between
/// threads.
#[derive(Debug, Clone)]
pub struct EvqcSimulator {
    prec: EvqcPrecision,
    rng: ChaCha8Rng,
    calibration: BTreeMap<usize, Complex64>,
}

impl EvqcSimulator {
    pub fn new(prec: EvqcPrecision) -> Self {
        Self {
            prec,
            rng: ChaCha8Rng::seed_from_u64(prec.seed),
            calibration: BTreeMap::new(),
        }
    }

    pub fn precision(&self) -> &EvqcPrecision {
        &self.prec
    }

    /// Constant c with ⟨I₁ₓ + i I₁ᵧ⟩ = c·tr U, measured noise-free with U = 1
    /// on a work register of dimension `work_dim`.
    pub fn calibration(&mut self, work_dim: usize) -> Result<Complex64, NmrError> {
        if let Some(&c) = self.calibration.get(&work_dim) {
            return Ok(c);
        }
        let qubits = qubit_count(work_dim)? + 1;
        let rho1 = prepare_rho1(qubits, self.prec.alpha1)?;
        let rho2 = apply_cu(&rho1, &ComplexMatrix::identity(work_dim))?;
        let c = measure_with(&rho2, 0.0, &mut self.rng) / work_dim as f64;
        self.calibration.insert(work_dim, c);
        Ok(c)
    }

    /// Raw probe reading after cU, including measurement error.
    pub fn measure(&mut self, u: &ComplexMatrix) -> Result<Complex64, NmrError> {
        let qubits = qubit_count(u.dim())? + 1;
        let rho1 = prepare_rho1(qubits, self.prec.alpha1)?;
        let rho2 = apply_cu(&rho1, u)?;
        Ok(measure_with(&rho2, self.prec.epsilon, &mut self.rng))
    }

    /// Estimate of tr U: the probe reading divided by the calibration
    /// constant.
    pub fn estimate_trace(&mut self, u: &ComplexMatrix) -> Result<Complex64, NmrError> {
        let c = self.calibration(u.dim())?;
        let z = self.measure(u)?;
        Ok(z / c)
    }

    /// Hard bound on |estimate − tr U|: √2·εΛ/|c|.
    pub fn trace_error_bound(&mut self, work_dim: usize) -> Result<f64, NmrError> {
        let c = self.calibration(work_dim)?;
        Ok(std::f64::consts::SQRT_2 * self.prec.epsilon * PROBE_EIGENVALUE_SPREAD / c.norm())
    }
}

/// One-shot trace estimate with a fresh simulator seeded from `prec`.
pub fn estimate_trace(u: &ComplexMatrix, prec: &EvqcPrecision) -> Result<Complex64, NmrError> {
    EvqcSimulator::new(*prec).estimate_trace(u)
}
