//! Dense complex linear algebra shared by the rest of the crate: square
//! complex matrices, normalized state vectors, unitary eigendecomposition
//! and permutations with their cycle decomposition.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Two eigenangles closer than this (circular distance) are treated as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Tolerance used when a matrix is required to be unitary.
pub const UNITARY_TOL: f64 = 1e-10;

const SCHUR_MAX_ITER: usize = 10_000;

/// A square complex matrix, indexed as `(row, col)`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn identity(dim: usize) -> Self {
        ComplexMatrix(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        ComplexMatrix(DMatrix::from_fn(dim, dim, f))
    }

    /// Builds a matrix from row-major entries. Panics if `entries.len()` is
    /// not a perfect square.
    pub fn from_row_major(entries: &[Complex64]) -> Self {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        assert_eq!(dim * dim, entries.len(), "entries must form a square matrix");
        ComplexMatrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        ComplexMatrix(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    /// `|v><v|`
    pub fn projector(v: &StateVector) -> Self {
        let col = &v.0;
        ComplexMatrix(col * col.adjoint())
    }

    pub fn from_nalgebra(m: DMatrix<Complex64>) -> Self {
        assert!(m.is_square(), "matrix must be square");
        ComplexMatrix(m)
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.0[(row, col)] = value;
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix(&self.0 * factor)
    }

    /// Kronecker product `self ⊗ other`; `self` is the most significant factor.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        ComplexMatrix(self.0.kronecker(&other.0))
    }

    /// Integer power; negative exponents use the adjoint, so the matrix must
    /// be unitary for those to be inverses.
    pub fn unitary_power(&self, exponent: i64) -> Self {
        let base = if exponent < 0 { self.adjoint() } else { self.clone() };
        let mut e = exponent.unsigned_abs();
        let mut acc = ComplexMatrix::identity(self.dim());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn apply(&self, v: &StateVector) -> DVector<Complex64> {
        &self.0 * &v.0
    }

    /// `max |self - other|` over all entries.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U^dagger U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.0.adjoint() * &self.0;
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        prod.iter()
            .zip(id.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn require_unitary(&self, tol: f64) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation <= tol {
            Ok(())
        } else {
            Err(Error::NotUnitary { deviation })
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim(), self.dim())?;
        for r in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(DVector<Complex64>);

impl StateVector {
    /// Wraps `amplitudes`, rejecting vectors whose norm is not 1 to within 1e-12.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParams(format!("state vector norm {norm} is not 1")));
        }
        Ok(StateVector(v))
    }

    /// Rescales `amplitudes` to unit norm. Panics on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Self {
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        assert!(norm > 0.0, "cannot normalize the zero vector");
        StateVector(v / Complex64::from(norm))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::from(1.0);
        StateVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.0[k]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn as_nalgebra(&self) -> &DVector<Complex64> {
        &self.0
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn kron(&self, other: &StateVector) -> Self {
        StateVector(self.0.kronecker(&other.0))
    }

    pub fn scaled(&self, phase: Complex64) -> Self {
        StateVector(&self.0 * phase)
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }
}

/// Eigenangles in `[0, 2π)` (ascending) with matching phase-fixed eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenFrame {
    angles: Vec<f64>,
    vectors: Vec<StateVector>,
    tol: f64,
    degenerate: bool,
}

impl EigenFrame {
    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    /// Residual bound the frame was validated against.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// True if two eigenangles lie within [`DEGENERACY_THRESHOLD`] of each other.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn min_gap(&self) -> f64 {
        min_circular_gap(&self.angles)
    }

    /// `Σ_k e^{iθ_k} |v_k><v_k|`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dim = self.dim();
        let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
        for (theta, v) in self.angles.iter().zip(&self.vectors) {
            acc += (&v.0 * v.0.adjoint()) * Complex64::from_polar(1.0, *theta);
        }
        ComplexMatrix(acc)
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<StateVector>) {
        (self.angles, self.vectors)
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn principal_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Shortest distance between two angles on the circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Wraps an angle difference into `(-π, π]`.
pub fn wrap_to_pi(delta: f64) -> f64 {
    let r = (delta + PI).rem_euclid(TAU) - PI;
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// Smallest circular gap between any two of `angles`. Infinite for fewer
/// than two angles.
pub fn min_circular_gap(angles: &[f64]) -> f64 {
    if angles.len() < 2 {
        return f64::INFINITY;
    }
    let mut sorted: Vec<f64> = angles.iter().map(|&a| principal_angle(a)).collect();
    sorted.sort_by(f64::total_cmp);
    let mut gap = TAU - (sorted[sorted.len() - 1] - sorted[0]);
    for w in sorted.windows(2) {
        gap = gap.min(w[1] - w[0]);
    }
    gap
}

/// Multiplies `v` by the phase that makes its first largest-modulus
/// component real and positive.
fn fix_phase(v: &mut DVector<Complex64>) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(pivot) = v.iter().find(|z| z.norm() >= max * (1.0 - 1e-9)) {
        let phase = pivot.conj() / pivot.norm();
        *v *= phase;
    }
}

/// Eigendecomposition of a unitary matrix.
///
/// Uses the complex Schur form: for a normal matrix the triangular factor is
/// diagonal, so the Schur vectors are an orthonormal eigenbasis even inside
/// degenerate clusters.
pub fn eig_unitary(u: &ComplexMatrix, tol: f64) -> Result<EigenFrame> {
    u.require_unitary(tol.max(UNITARY_TOL))?;
    let dim = u.dim();
    let schur = u
        .0
        .clone()
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::NoConvergence { residual: f64::INFINITY })?;
    let (q, t) = schur.unpack();

    let mut pairs: Vec<(f64, DVector<Complex64>)> = (0..dim)
        .map(|k| {
            let mut v = q.column(k).into_owned();
            fix_phase(&mut v);
            (principal_angle(t[(k, k)].arg()), v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut worst = 0.0f64;
    for (theta, v) in &pairs {
        let r = &u.0 * v - v * Complex64::from_polar(1.0, *theta);
        worst = worst.max(r.norm());
    }
    if worst > tol {
        return Err(Error::NoConvergence { residual: worst });
    }

    let (angles, vectors): (Vec<f64>, Vec<StateVector>) =
        pairs.into_iter().map(|(a, v)| (a, StateVector(v))).unzip();
    let degenerate = min_circular_gap(&angles) < DEGENERACY_THRESHOLD;
    Ok(EigenFrame { angles, vectors, tol, degenerate })
}

/// Eigenangles only, sorted ascending in `[0, 2π)`.
pub fn unitary_eigenangles(u: &ComplexMatrix) -> Result<Vec<f64>> {
    let schur = u
        .0
        .clone()
        .try_schur(f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or(Error::NoConvergence { residual: f64::INFINITY })?;
    let t = schur.unpack().1;
    let mut angles: Vec<f64> = (0..u.dim()).map(|k| principal_angle(t[(k, k)].arg())).collect();
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}

/// Haar-random unitary from complex Gaussian entries and a phase-corrected QR.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut gauss = || {
        let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
        let u2: f64 = rng.random();
        (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
    };
    let a = DMatrix::from_fn(dim, dim, |_, _| Complex64::new(gauss(), gauss()));
    let qr = a.qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            let mut col = q.column_mut(k);
            col *= phase;
        }
    }
    ComplexMatrix(q)
}

/// A bijection on `{0, …, size-1}`; `image[k]` is the successor of `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for (k, &i) in image.iter().enumerate() {
            if i >= image.len() {
                return Err(Error::InvalidPermutation(format!(
                    "image[{k}] = {i} out of range for size {}",
                    image.len()
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation(format!("{i} appears twice in the image")));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(size: usize) -> Self {
        Permutation { image: (0..size).collect() }
    }

    /// `k ↦ (k + shift) mod size`
    pub fn shift(size: usize, shift: usize) -> Self {
        Permutation { image: (0..size).map(|k| (k + shift) % size).collect() }
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, k: usize) -> usize {
        self.image[k]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.size()];
        for (k, &i) in self.image.iter().enumerate() {
            inv[i] = k;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.size(), other.size());
        Permutation { image: other.image.iter().map(|&k| self.image[k]).collect() }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        cycle_decompose(self)
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &i)| k == i)
    }

    /// Dense 0/1 matrix with `P[image[k], k] = 1`.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.size());
        for (k, &i) in self.image.iter().enumerate() {
            m.set(i, k, Complex64::from(1.0));
        }
        m
    }
}

/// Splits a permutation into disjoint cycles. Each cycle starts at its
/// smallest element and follows successors; cycles are ordered by that
/// smallest element.
pub fn cycle_decompose(p: &Permutation) -> Vec<Vec<usize>> {
    let mut visited = vec![false; p.size()];
    let mut cycles = Vec::new();
    for start in 0..p.size() {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut k = start;
        while !visited[k] {
            visited[k] = true;
            cycle.push(k);
            k = p.apply(k);
        }
        cycles.push(cycle);
    }
    cycles
}
