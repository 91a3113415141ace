//! The single-qubit circuit `û(λ, p)`, the controlled-gate super-operator
//! `D_p`, the hierarchical family `Û⁽ᴺ⁾(λ)` and the degenerate-path variant
//! `û_Y(λ, p)`.
//!
//! Basis convention: qubit `N` is the leftmost (most significant) tensor
//! factor, so the computational index of `|n_N … n_1⟩` is the binary number
//! `n_N … n_1`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, StateVector, UNITARY_TOL};

/// Default cap on the qubit count of numerically assembled circuits (256×256).
pub const DEFAULT_MAX_QUBITS: usize = 8;

/// The integer sequence `p_1 … p_N` defining a hierarchical circuit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircuitParams {
    p: Vec<i64>,
}

impl CircuitParams {
    pub fn new(p: Vec<i64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParams("at least one qubit is required".into()));
        }
        Ok(CircuitParams { p })
    }

    /// `N`
    pub fn qubits(&self) -> usize {
        self.p.len()
    }

    pub fn dim(&self) -> usize {
        1usize << self.qubits()
    }

    /// `p_1 … p_N`, index 0 holding `p_1`.
    pub fn p(&self) -> &[i64] {
        &self.p
    }

    /// `p_j` with 1-based `j`.
    pub fn p_j(&self, j: usize) -> i64 {
        self.p[j - 1]
    }

    /// Parameters for the first `n` qubits.
    pub fn truncated(&self, n: usize) -> CircuitParams {
        CircuitParams { p: self.p[..n].to_vec() }
    }

    /// First `j ≥ 2` with even `p_j`, which makes the spectrum degenerate.
    pub fn degeneracy_witness(&self) -> Option<(usize, i64)> {
        self.p
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &p)| p % 2 == 0)
            .map(|(i, &p)| (i + 1, p))
    }

    pub fn degenerate_spectrum(&self) -> bool {
        self.degeneracy_witness().is_some()
    }

    /// True when `d_N = Π p_j` is odd, i.e. one cycle visits every eigenstate.
    pub fn single_cycle(&self) -> bool {
        self.p.iter().all(|p| p % 2 != 0)
    }

    pub fn require_nondegenerate(&self) -> Result<()> {
        match self.degeneracy_witness() {
            Some((index, value)) => Err(Error::DegenerateSpectrum { index, value }),
            None => Ok(()),
        }
    }

    pub fn require_all_odd(&self) -> Result<()> {
        match self.p.iter().enumerate().find(|(_, &p)| p % 2 == 0) {
            Some((i, &value)) => Err(Error::OddParamsRequired { index: i + 1, value }),
            None => Ok(()),
        }
    }
}

/// The grid `λ_k = 2πk/steps`, `k = 0 … steps`, covering one cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleSpec {
    steps: usize,
}

impl CycleSpec {
    pub fn new(steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::InvalidParams(format!("cycle needs at least 2 steps, got {steps}")));
        }
        Ok(CycleSpec { steps })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn lambda(&self, k: usize) -> f64 {
        std::f64::consts::TAU * k as f64 / self.steps as f64
    }

    /// All `steps + 1` grid points, both endpoints included.
    pub fn grid(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| self.lambda(k)).collect()
    }
}

/// The control axis `|y⟩` and the reflection `Ẑ` used to build circuits.
#[derive(Clone, Debug)]
pub struct CircuitBasis {
    y: StateVector,
    z: ComplexMatrix,
}

impl Default for CircuitBasis {
    fn default() -> Self {
        Self::standard()
    }
}

impl CircuitBasis {
    /// `|y⟩ = (|0⟩ − i|1⟩)/√2`, `Ẑ = diag(1, −1)`.
    pub fn standard() -> Self {
        let y = StateVector::new(vec![
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, -FRAC_1_SQRT_2),
        ])
        .expect("normalized");
        let z = ComplexMatrix::diagonal(&[Complex64::from(1.0), Complex64::from(-1.0)]);
        CircuitBasis { y, z }
    }

    /// Arbitrary qubit axis `y` and single-qubit unitary `z`.
    pub fn new(y: StateVector, z: ComplexMatrix) -> Result<Self> {
        if y.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: y.dim() });
        }
        if z.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: z.dim() });
        }
        z.require_unitary(UNITARY_TOL)?;
        Ok(CircuitBasis { y, z })
    }

    /// The standard basis deformed by rotating `|y⟩` by `y_angle` about the
    /// real axis and conjugating `Ẑ` by `exp(−i z_angle X/2)`.
    pub fn rotated(y_angle: f64, z_angle: f64) -> Self {
        let std = Self::standard();
        let (c, s) = ((y_angle / 2.0).cos(), (y_angle / 2.0).sin());
        let ry = ComplexMatrix::from_row_major(&[
            Complex64::from(c),
            Complex64::from(-s),
            Complex64::from(s),
            Complex64::from(c),
        ]);
        let y = StateVector::normalized(ry.apply(&std.y).as_slice().to_vec());
        let (c, s) = ((z_angle / 2.0).cos(), (z_angle / 2.0).sin());
        let rx = ComplexMatrix::from_row_major(&[
            Complex64::from(c),
            Complex64::new(0.0, -s),
            Complex64::new(0.0, -s),
            Complex64::from(c),
        ]);
        let z = &(&rx * &std.z) * &rx.adjoint();
        CircuitBasis { y, z }
    }

    pub fn y(&self) -> &StateVector {
        &self.y
    }

    pub fn z(&self) -> &ComplexMatrix {
        &self.z
    }

    /// `P_y = |y⟩⟨y|`
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.y)
    }

    /// `Ŷ = 1 − 2|y⟩⟨y|`
    pub fn y_reflection(&self) -> ComplexMatrix {
        &ComplexMatrix::identity(2) - &self.projector().scale(Complex64::from(2.0))
    }

    /// `e^{i(p−1)λ}(1 − P_y) + e^{iλ} P_y`
    fn phase_gate(&self, lambda: f64, p: i64) -> ComplexMatrix {
        let py = self.projector();
        let rest = &ComplexMatrix::identity(2) - &py;
        let a = Complex64::from_polar(1.0, (p - 1) as f64 * lambda);
        let b = Complex64::from_polar(1.0, lambda);
        &rest.scale(a) + &py.scale(b)
    }

    /// `û(λ, p)` in this basis.
    pub fn build_u(&self, lambda: f64, p: i64) -> ComplexMatrix {
        &self.phase_gate(lambda, p) * &self.z
    }

    /// `û_Y(λ, p)`: `û` with `Ẑ` replaced by `Ŷ`.
    pub fn build_uy(&self, lambda: f64, p: i64) -> ComplexMatrix {
        &self.phase_gate(lambda, p) * &self.y_reflection()
    }

    /// `Ĉ^y_p[U] = (1 − P_y) ⊗ U^{p−1} + P_y ⊗ U`
    pub fn controlled_gate(&self, u: &ComplexMatrix, p: i64) -> Result<ComplexMatrix> {
        u.require_unitary(UNITARY_TOL)?;
        let py = self.projector();
        let rest = &ComplexMatrix::identity(2) - &py;
        Ok(&rest.kron(&u.unitary_power(p - 1)) + &py.kron(u))
    }

    /// `D_p[U] = Ĉ^y_p[U] (Ẑ ⊗ 1)`
    pub fn super_operator(&self, u: &ComplexMatrix, p: i64) -> Result<ComplexMatrix> {
        let c = self.controlled_gate(u, p)?;
        Ok(&c * &self.z.kron(&ComplexMatrix::identity(u.dim())))
    }
}

/// `û(λ, p) = {e^{i(p−1)λ}(1 − P_y) + e^{iλ}P_y} Ẑ` in the standard basis.
pub fn build_u(lambda: f64, p: i64) -> ComplexMatrix {
    CircuitBasis::standard().build_u(lambda, p)
}

/// `û_Y(λ, p)` in the standard basis.
pub fn build_uy(lambda: f64, p: i64) -> ComplexMatrix {
    CircuitBasis::standard().build_uy(lambda, p)
}

/// Generalized controlled-`U` gate with the control axis along `|y⟩`.
pub fn controlled_gate(u: &ComplexMatrix, p: i64) -> Result<ComplexMatrix> {
    CircuitBasis::standard().controlled_gate(u, p)
}

/// The super-operator `D_p`.
pub fn super_operator(u: &ComplexMatrix, p: i64) -> Result<ComplexMatrix> {
    CircuitBasis::standard().super_operator(u, p)
}

/// `Û⁽ᴺ⁾(λ)` with the default numeric cap.
pub fn build_un(lambda: f64, params: &CircuitParams) -> Result<ComplexMatrix> {
    Ok(HierarchicalCircuit::new(params.clone())?.unitary(lambda))
}

/// A one-parameter family of unitaries `λ ↦ U(λ)`.
pub trait UnitaryFamily: Sync {
    fn dim(&self) -> usize;
    fn unitary(&self, lambda: f64) -> ComplexMatrix;
}

/// `λ ↦ û(λ, p)`
#[derive(Clone, Debug)]
pub struct SingleQubit {
    pub p: i64,
    pub basis: CircuitBasis,
}

impl SingleQubit {
    pub fn new(p: i64) -> Self {
        SingleQubit { p, basis: CircuitBasis::standard() }
    }

    pub fn with_basis(p: i64, basis: CircuitBasis) -> Self {
        SingleQubit { p, basis }
    }
}

impl UnitaryFamily for SingleQubit {
    fn dim(&self) -> usize {
        2
    }
    fn unitary(&self, lambda: f64) -> ComplexMatrix {
        self.basis.build_u(lambda, self.p)
    }
}

/// `λ ↦ û_Y(λ, p)`, whose path crosses an eigenvalue degeneracy.
#[derive(Clone, Debug)]
pub struct DegeneratePath {
    pub p: i64,
    pub basis: CircuitBasis,
}

impl DegeneratePath {
    pub fn new(p: i64) -> Self {
        DegeneratePath { p, basis: CircuitBasis::standard() }
    }
}

impl UnitaryFamily for DegeneratePath {
    fn dim(&self) -> usize {
        2
    }
    fn unitary(&self, lambda: f64) -> ComplexMatrix {
        self.basis.build_uy(lambda, self.p)
    }
}

/// `λ ↦ Û⁽ᴺ⁾(λ)`, assembled by applying `D_{p_N}` to `Û⁽ᴺ⁻¹⁾`.
#[derive(Clone, Debug)]
pub struct HierarchicalCircuit {
    params: CircuitParams,
    basis: CircuitBasis,
}

impl HierarchicalCircuit {
    pub fn new(params: CircuitParams) -> Result<Self> {
        Self::with_cap(params, DEFAULT_MAX_QUBITS)
    }

    pub fn with_cap(params: CircuitParams, max_qubits: usize) -> Result<Self> {
        if params.qubits() > max_qubits {
            return Err(Error::DimensionOverflow { qubits: params.qubits(), cap: max_qubits });
        }
        Ok(HierarchicalCircuit { params, basis: CircuitBasis::standard() })
    }

    pub fn with_basis(mut self, basis: CircuitBasis) -> Self {
        self.basis = basis;
        self
    }

    pub fn params(&self) -> &CircuitParams {
        &self.params
    }

    pub fn basis(&self) -> &CircuitBasis {
        &self.basis
    }
}

impl UnitaryFamily for HierarchicalCircuit {
    fn dim(&self) -> usize {
        self.params.dim()
    }

    fn unitary(&self, lambda: f64) -> ComplexMatrix {
        let p = self.params.p();
        let mut u = self.basis.build_u(lambda, p[0]);
        for &pj in &p[1..] {
            u = self
                .basis
                .super_operator(&u, pj)
                .expect("hierarchical circuits are unitary by construction");
        }
        u
    }
}

/// Adapts a closure into a [`UnitaryFamily`].
pub struct FnFamily<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64) -> ComplexMatrix + Sync> FnFamily<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnFamily { dim, f }
    }
}

impl<F: Fn(f64) -> ComplexMatrix + Sync> UnitaryFamily for FnFamily<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn unitary(&self, lambda: f64) -> ComplexMatrix {
        (self.f)(lambda)
    }
}
