//! Holonomy matrices `M(C)`, their factorization `M = 𝔖 σ`, the off-diagonal
//! geometric phase `γ(C)` and the winding number `ν(C)`.
//!
//! Two independent routes produce `M(C)`:
//!
//! * analytic, from the integer recursions for `s` and `r` (exact signs);
//! * numeric, by diagonalizing `U(λ)` on a grid and parallel-transporting each
//!   eigenvector (step overlaps rephased to be real and positive).
//!
//! The numeric route only acts as an oracle. Exact integer formulas are used
//! wherever they exist.

use std::borrow::Cow;
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::circuits::{CircuitParams, CycleSpec, HierarchicalCircuit, UnitaryFamily};
use crate::error::{Error, Result};
use crate::linalg::{
    cycle_decompose, eig_unitary, min_circular_gap, unitary_eigenangles, wrap_to_pi,
    ComplexMatrix, EigenFrame, Permutation, StateVector,
};
use crate::spectral::{
    analytic_frame, eigenvector_n, principal_number, slope, sr_full, sr_levels, sr_single,
    states_by_principal, QuantumNumbers,
};

/// Entries with modulus above this count as the nonzero entry of a column.
const NONZERO_THRESHOLD: f64 = 0.5;
/// Default tolerance on `| |M_{s(n),n}| − 1 |` and on the remaining entries.
pub const MONOMIAL_TOL: f64 = 1e-8;
/// Minimal circular eigenangle gap along a sweep.
pub const PATH_GAP_TOL: f64 = 1e-6;
/// Endpoint tolerance `‖U(2π) − U(0)‖_max`.
pub const PERIODICITY_TOL: f64 = 1e-10;
const EIG_TOL: f64 = 1e-9;
const CHUNK: usize = 128;

pub const GAUGE_ANALYTIC: &str = "parallel-transport-analytic";
pub const GAUGE_REFERENCE: &str = "parallel-transport-reference";
pub const GAUGE_SOLVER: &str = "parallel-transport-solver";

/// A holonomy matrix together with the eigenvector gauge it was computed in.
#[derive(Clone, Debug)]
pub struct HolonomyMatrix {
    pub matrix: ComplexMatrix,
    pub gauge_tag: String,
}

impl HolonomyMatrix {
    pub fn new(matrix: ComplexMatrix, gauge_tag: impl Into<String>) -> Self {
        HolonomyMatrix { matrix, gauge_tag: gauge_tag.into() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Splits `M` into a permutation and the diagonal factor, `M_{π(k),k} = σ_k`.
    pub fn factorize(&self) -> Result<(Permutation, Vec<Complex64>)> {
        self.factorize_with_tol(MONOMIAL_TOL)
    }

    pub fn factorize_with_tol(&self, tol: f64) -> Result<(Permutation, Vec<Complex64>)> {
        let dim = self.dim();
        let mut image = Vec::with_capacity(dim);
        let mut sigma = Vec::with_capacity(dim);
        for col in 0..dim {
            let rows: Vec<usize> =
                (0..dim).filter(|&r| self.matrix.get(r, col).norm() > NONZERO_THRESHOLD).collect();
            let [row] = rows[..] else {
                return Err(Error::NotMonomial(format!(
                    "column {col} has {} large entries",
                    rows.len()
                )));
            };
            let entry = self.matrix.get(row, col);
            if (entry.norm() - 1.0).abs() > tol {
                return Err(Error::NotMonomial(format!(
                    "entry ({row},{col}) has modulus {}",
                    entry.norm()
                )));
            }
            let stray = (0..dim)
                .filter(|&r| r != row)
                .map(|r| self.matrix.get(r, col).norm())
                .fold(0.0, f64::max);
            if stray > tol {
                return Err(Error::NotMonomial(format!("column {col} has stray entry {stray:e}")));
            }
            image.push(row);
            sigma.push(entry);
        }
        let perm = Permutation::new(image).map_err(|e| Error::NotMonomial(e.to_string()))?;
        Ok((perm, sigma))
    }

    pub fn max_abs_diff(&self, other: &HolonomyMatrix) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

/// A monomial matrix with `±1` entries, `M_{image[k],k} = sign[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    pub image: Vec<usize>,
    pub sign: Vec<i8>,
}

impl SignedPermutation {
    pub fn to_matrix(&self) -> ComplexMatrix {
        let dim = self.image.len();
        let mut m = ComplexMatrix::zeros(dim);
        for (k, (&row, &s)) in self.image.iter().zip(&self.sign).enumerate() {
            m.set(row, k, Complex64::from(s as f64));
        }
        m
    }

    pub fn permutation(&self) -> Permutation {
        Permutation::new(self.image.clone()).expect("valid by construction")
    }
}

/// Closed-form single-qubit holonomy `cos(π(2−p)/2)·1 − i sin(π(2−p)/2) Y`.
pub fn holonomy_single(p: i64) -> HolonomyMatrix {
    HolonomyMatrix::new(holonomy_single_exact(p).to_matrix(), GAUGE_ANALYTIC)
}

fn holonomy_single_exact(p: i64) -> SignedPermutation {
    let parity = |x: i64| if x.rem_euclid(2) == 0 { 1i8 } else { -1 };
    if p.rem_euclid(2) == 0 {
        let s = parity((2 - p) / 2);
        SignedPermutation { image: vec![0, 1], sign: vec![s, s] }
    } else {
        let half = (1 - p).div_euclid(2);
        SignedPermutation { image: vec![1, 0], sign: vec![parity(half), parity(1 + half)] }
    }
}

/// `σ⁽ᴺ⁾(n) = (−1)^{Σ_k r⁽ᵏ⁾}`.
pub fn sigma_n(params: &CircuitParams, n: &QuantumNumbers) -> Result<i8> {
    params.require_all_odd()?;
    let exponent: BigInt = sr_levels(params, n).into_iter().map(|(_, r)| r).sum();
    Ok(if exponent.is_even() { 1 } else { -1 })
}

/// `M⁽ᴺ⁾` in the principal-number basis from `𝔖⁽ᴺ⁾ σ⁽ᴺ⁾`.
pub fn holonomy_analytic_exact(params: &CircuitParams) -> Result<SignedPermutation> {
    params.require_all_odd()?;
    let states = states_by_principal(params)?;
    let mut image = Vec::with_capacity(states.len());
    let mut sign = Vec::with_capacity(states.len());
    for n in &states {
        image.push(principal_number(params, &sr_full(params, n).s).reduced());
        sign.push(sigma_n(params, n)?);
    }
    Ok(SignedPermutation { image, sign })
}

pub fn holonomy_analytic(params: &CircuitParams) -> Result<HolonomyMatrix> {
    Ok(HolonomyMatrix::new(holonomy_analytic_exact(params)?.to_matrix(), GAUGE_ANALYTIC))
}

/// `M⁽ᴺ⁾` from the element recursion
/// `M⁽ᴺ⁾_{n',n} = δ_{n'_N, s(n_N, p_N r⁽ᴺ⁻¹⁾)} (−1)^{r(n_N, p_N r⁽ᴺ⁻¹⁾)} M⁽ᴺ⁻¹⁾_{n'_<, n_<}`,
/// built in the quantum-number basis and then relabelled by `m_N mod 2ᴺ`.
pub fn holonomy_recursive_exact(params: &CircuitParams) -> Result<SignedPermutation> {
    params.require_all_odd()?;
    // Level-1 matrix indexed by n_1, image and sign per column.
    let mut level = holonomy_single_exact(params.p_j(1));
    let mut r_prev: Vec<BigInt> =
        (0..2u8).map(|n1| BigInt::from(sr_single(n1, params.p_j(1)).1)).collect();
    for j in 2..=params.qubits() {
        let lower = level.image.len();
        let p = BigInt::from(params.p_j(j));
        let mut image = vec![0; 2 * lower];
        let mut sign = vec![0i8; 2 * lower];
        let mut r_next = vec![BigInt::zero(); 2 * lower];
        for top in 0..2u8 {
            for k in 0..lower {
                let q = &p * &r_prev[k] + BigInt::from(top);
                let (r, s) = q.div_mod_floor(&BigInt::from(2));
                let col = top as usize * lower + k;
                let s_top = if s.is_zero() { 0 } else { 1 };
                image[col] = s_top * lower + level.image[k];
                let phase = if r.is_even() { 1 } else { -1 };
                sign[col] = phase * level.sign[k];
                r_next[col] = r;
            }
        }
        level = SignedPermutation { image, sign };
        r_prev = r_next;
    }
    // Relabel: quantum-number index -> m_N mod 2^N.
    let relabel: Vec<usize> = QuantumNumbers::all(params.qubits())
        .map(|n| principal_number(params, &n).reduced())
        .collect();
    let mut image = vec![0; level.image.len()];
    let mut sign = vec![0i8; level.image.len()];
    for (col, (&row, &s)) in level.image.iter().zip(&level.sign).enumerate() {
        image[relabel[col]] = relabel[row];
        sign[relabel[col]] = s;
    }
    Ok(SignedPermutation { image, sign })
}

pub fn holonomy_recursive(params: &CircuitParams) -> Result<HolonomyMatrix> {
    Ok(HolonomyMatrix::new(holonomy_recursive_exact(params)?.to_matrix(), GAUGE_ANALYTIC))
}

/// Checks `[J_D, M]_{m',m} = M_{m',m}(d_N − 2ᴺ r⁽ᴺ⁾)` entrywise in exact
/// arithmetic, with `J_D = diag(m_N)` over unreduced principal numbers.
pub fn commutator_identity_holds(params: &CircuitParams) -> Result<bool> {
    let exact = holonomy_analytic_exact(params)?;
    let states = states_by_principal(params)?;
    let d = slope(params);
    let modulus = BigInt::one() << params.qubits();
    let j_d: Vec<BigInt> =
        states.iter().map(|n| principal_number(params, n).value().clone()).collect();
    for (col, n) in states.iter().enumerate() {
        let row = exact.image[col];
        let sign = BigInt::from(exact.sign[col]);
        let commutator = &sign * (&j_d[row] - &j_d[col]);
        let rhs = &sign * (&d - &modulus * sr_full(params, n).r);
        if commutator != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Conjugates `M` by `G = diag(e^{iφ})`: `M ↦ G† M G`.
pub fn gauge_transform(m: &HolonomyMatrix, phases: &[f64]) -> HolonomyMatrix {
    assert_eq!(phases.len(), m.dim(), "one phase per eigenvector");
    let g: Vec<Complex64> = phases.iter().map(|&phi| Complex64::from_polar(1.0, phi)).collect();
    let matrix = ComplexMatrix::from_fn(m.dim(), |r, c| g[r].conj() * m.matrix.get(r, c) * g[c]);
    HolonomyMatrix::new(matrix, format!("{}+gauge", m.gauge_tag))
}

fn unit_angle(z: Complex64) -> f64 {
    let a = z.arg().rem_euclid(TAU);
    if a >= TAU { 0.0 } else { a }
}

/// One cycle block of `𝔖` with its off-diagonal geometric phase.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleBlock {
    pub cycle: Vec<usize>,
    /// `γ ∈ [0, 2π)` with `e^{iγ} = Π_{k ∈ cycle} σ_k`.
    pub gamma: f64,
}

/// `γ` per cycle block of a factorized holonomy.
pub fn gamma_per_cycle(perm: &Permutation, sigma: &[Complex64]) -> Vec<CycleBlock> {
    cycle_decompose(perm)
        .into_iter()
        .map(|cycle| {
            let product: Complex64 = cycle.iter().map(|&k| sigma[k]).product();
            CycleBlock { gamma: unit_angle(product), cycle }
        })
        .collect()
}

/// `γ(C)` from `e^{iγ} = (−1)^{ν}`, `ν = d_N`, for all-odd `p`.
pub fn gamma_analytic(params: &CircuitParams) -> Result<f64> {
    params.require_all_odd()?;
    Ok(if slope(params).is_even() { 0.0 } else { PI })
}

/// `γ(C)` from `det σ` with exact signs, for all-odd `p` (a single block).
pub fn gamma_from_sigma(params: &CircuitParams) -> Result<f64> {
    let exact = holonomy_analytic_exact(params)?;
    let negatives = exact.sign.iter().filter(|&&s| s < 0).count();
    Ok(if negatives % 2 == 0 { 0.0 } else { PI })
}

/// The result of bringing `M` to canonical form `U_d† M U_d = 𝔖 e^{iγ/L}` per block.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub u_d: Vec<Complex64>,
    pub matrix: HolonomyMatrix,
    pub blocks: Vec<CycleBlock>,
}

/// `{U_d}_{c_0} = 1`, `{U_d}_{c_{i+1}} = {U_d}_{c_i} σ(c_i) e^{−iγ/L}` along each cycle.
pub fn canonical_gauge(m: &HolonomyMatrix) -> Result<CanonicalForm> {
    let (perm, sigma) = m.factorize()?;
    let blocks = gamma_per_cycle(&perm, &sigma);
    let mut u_d = vec![Complex64::one(); m.dim()];
    for block in &blocks {
        let step = Complex64::from_polar(1.0, -block.gamma / block.cycle.len() as f64);
        for w in block.cycle.windows(2) {
            u_d[w[1]] = u_d[w[0]] * sigma[w[0]] * step;
        }
    }
    let phases: Vec<f64> = u_d.iter().map(|z| z.arg()).collect();
    let mut matrix = gauge_transform(m, &phases);
    matrix.gauge_tag = format!("{}+canonical", m.gauge_tag);
    Ok(CanonicalForm { u_d, matrix, blocks })
}

/// Options for a numeric parallel-transport sweep.
#[derive(Clone, Debug)]
pub struct SweepOptions {
    /// Upper bound for automatic step doubling on under-resolution.
    pub max_steps: usize,
    /// Eigenvectors at `λ = 0` fixing the gauge of the result; matched to the
    /// numeric frame by overlap. Without one, the solver's sorted frame is used.
    pub reference: Option<Vec<StateVector>>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { max_steps: 1 << 16, reference: None }
    }
}

impl SweepOptions {
    pub fn with_reference(reference: Vec<StateVector>) -> Self {
        SweepOptions { reference: Some(reference), ..Default::default() }
    }
}

/// Record of a parallel-transport sweep. Full eigenframes are not retained;
/// each path keeps its continued (unwrapped) eigenangle.
#[derive(Clone, Debug)]
pub struct SweepTrace {
    pub grid: Vec<f64>,
    /// `angles[path][k]`, continued across branch cuts.
    pub angles: Vec<Vec<f64>>,
    /// `matchings[k][path]`: index into the sorted frame at `grid[k + 1]`.
    pub matchings: Vec<Vec<usize>>,
    pub worst_overlap: f64,
    /// `Σ_k arg⟨v_k|w_{k+1}⟩` per path before rephasing, solver gauge.
    pub transport_phases: Vec<f64>,
}

impl SweepTrace {
    pub fn steps(&self) -> usize {
        self.grid.len() - 1
    }

    pub fn final_angles(&self) -> Vec<f64> {
        self.angles.iter().map(|a| *a.last().expect("nonempty")).collect()
    }
}

fn frame_at(family: &dyn UnitaryFamily, lambda: f64) -> Result<EigenFrame> {
    eig_unitary(&family.unitary(lambda), EIG_TOL)
}

fn check_gap(frame: &EigenFrame, lambda: f64, spacing: f64) -> Result<()> {
    let gap = frame.min_gap();
    if frame.dim() > 1 && gap <= PATH_GAP_TOL {
        return Err(Error::DegeneracyOnPath { start: lambda - spacing, end: lambda + spacing, gap });
    }
    Ok(())
}

pub fn check_periodic(family: &dyn UnitaryFamily) -> Result<()> {
    let deviation = family.unitary(0.0).max_abs_diff(&family.unitary(TAU));
    if deviation > PERIODICITY_TOL {
        return Err(Error::NotPeriodic { deviation });
    }
    Ok(())
}

/// Matrix with the vectors as columns.
fn columns(vectors: &[StateVector]) -> DMatrix<Complex64> {
    let dim = vectors[0].dim();
    DMatrix::from_fn(dim, vectors.len(), |r, c| vectors[c].amplitude(r))
}

/// Greedy maximal-overlap matching. With every best overlap ≥ 1/√2 the
/// matching is automatically injective.
fn match_frames(
    tracked: &DMatrix<Complex64>,
    next: &DMatrix<Complex64>,
) -> (Vec<usize>, Vec<Complex64>, f64) {
    let overlaps = tracked.adjoint() * next;
    let mut matching = Vec::with_capacity(overlaps.nrows());
    let mut values = Vec::with_capacity(overlaps.nrows());
    let mut worst = f64::INFINITY;
    for i in 0..overlaps.nrows() {
        let (j, value) = (0..overlaps.ncols())
            .map(|j| (j, overlaps[(i, j)]))
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("nonempty frame");
        worst = worst.min(value.norm());
        matching.push(j);
        values.push(value);
    }
    (matching, values, worst)
}

fn initial_frame(frame: &EigenFrame, reference: Option<&[StateVector]>) -> Result<(Vec<StateVector>, Vec<f64>)> {
    match reference {
        None => Ok((frame.vectors().to_vec(), frame.angles().to_vec())),
        Some(reference) => {
            if reference.len() != frame.dim() {
                return Err(Error::DimensionMismatch { expected: frame.dim(), found: reference.len() });
            }
            let (matching, _, worst) = match_frames(&columns(reference), &columns(frame.vectors()));
            if worst < 1.0 - 1e-6 {
                return Err(Error::InvalidParams(format!(
                    "reference frame is not an eigenframe at lambda = 0 (overlap {worst})"
                )));
            }
            let angles = matching.iter().map(|&j| frame.angles()[j]).collect();
            Ok((reference.to_vec(), angles))
        }
    }
}

fn sweep_once(
    family: &dyn UnitaryFamily,
    steps: usize,
    reference: Option<&[StateVector]>,
) -> Result<(Vec<StateVector>, Vec<StateVector>, SweepTrace)> {
    let cycle = CycleSpec::new(steps)?;
    let spacing = TAU / steps as f64;
    let first = frame_at(family, 0.0)?;
    check_gap(&first, 0.0, spacing)?;
    let (start, start_angles) = initial_frame(&first, reference)?;
    let dim = start.len();

    let mut tracked = columns(&start);
    let mut angles: Vec<Vec<f64>> = start_angles.iter().map(|&a| vec![a]).collect();
    let mut matchings = Vec::with_capacity(steps);
    let mut phases = vec![0.0; dim];
    let mut worst_overlap = f64::INFINITY;
    let mut prev_gap = first.min_gap();

    let indices: Vec<usize> = (1..=steps).collect();
    for chunk in indices.chunks(CHUNK) {
        let frames: Vec<EigenFrame> = chunk
            .par_iter()
            .map(|&k| {
                let lambda = cycle.lambda(k);
                let frame = frame_at(family, lambda)?;
                check_gap(&frame, lambda, spacing)?;
                Ok(frame)
            })
            .collect::<Result<_>>()?;
        for frame in frames {
            let next = columns(frame.vectors());
            let (matching, values, worst) = match_frames(&tracked, &next);
            worst_overlap = worst_overlap.min(worst);
            if worst < FRAC_1_SQRT_2 {
                return Err(Error::UnderResolved { worst_overlap: worst, steps });
            }
            // Overlaps alone can alias when eigenangles sweep past each other
            // between grid points; require each step to move less than half a gap.
            let gap = prev_gap.min(frame.min_gap());
            prev_gap = frame.min_gap();
            let mut moved = DMatrix::zeros(dim, dim);
            for (i, (&j, &value)) in matching.iter().zip(&values).enumerate() {
                let rephase = value.conj() / value.norm();
                moved.set_column(i, &(next.column(j) * rephase));
                phases[i] += value.arg();
                let last = *angles[i].last().expect("nonempty");
                let delta = wrap_to_pi(frame.angles()[j] - last);
                if dim > 1 && delta.abs() >= gap / 2.0 {
                    return Err(Error::UnderResolved { worst_overlap: worst, steps });
                }
                angles[i].push(last + delta);
            }
            tracked = moved;
            matchings.push(matching);
        }
    }
    let transported = (0..dim)
        .map(|i| StateVector::normalized(tracked.column(i).iter().copied().collect()))
        .collect();
    let trace = SweepTrace {
        grid: cycle.grid(),
        angles,
        matchings,
        worst_overlap,
        transport_phases: phases,
    };
    Ok((start, transported, trace))
}

/// Numeric holonomy `M_{n',n} = ⟨n'(0)|n(2π)⟩` by discrete parallel transport.
/// Doubles `steps` while the sweep is under-resolved, up to `options.max_steps`.
pub fn holonomy_numeric(
    family: &dyn UnitaryFamily,
    steps: usize,
    options: &SweepOptions,
) -> Result<(HolonomyMatrix, SweepTrace)> {
    check_periodic(family)?;
    let mut steps = steps;
    loop {
        match sweep_once(family, steps, options.reference.as_deref()) {
            Ok((start, end, trace)) => {
                let dim = start.len();
                let matrix = ComplexMatrix::from_fn(dim, |r, c| start[r].inner(&end[c]));
                let tag = if options.reference.is_some() { GAUGE_REFERENCE } else { GAUGE_SOLVER };
                return Ok((HolonomyMatrix::new(matrix, tag), trace));
            }
            Err(Error::UnderResolved { .. }) if steps * 2 <= options.max_steps => steps *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Numeric holonomy of `Û⁽ᴺ⁾` in the analytic gauge, listed by `m_N mod 2ᴺ`.
pub fn holonomy_numeric_circuit(
    circuit: &HierarchicalCircuit,
    steps: usize,
) -> Result<(HolonomyMatrix, SweepTrace)> {
    let reference = analytic_frame(circuit.params(), 0.0)?;
    holonomy_numeric(circuit, steps, &SweepOptions::with_reference(reference))
}

/// Berry phase `−Σ arg⟨v_k|v_{k+1}⟩` of one eigenvector tracked through
/// consecutive copies of the cycle until it returns to its starting
/// eigenspace. `start` indexes the sorted eigenframe at `λ = 0`.
pub fn berry_phase_extended_cycle(
    family: &dyn UnitaryFamily,
    steps: usize,
    start: usize,
    max_cycles: usize,
) -> Result<f64> {
    check_periodic(family)?;
    let cycle = CycleSpec::new(steps)?;
    let spacing = TAU / steps as f64;
    let frames: Vec<(DMatrix<Complex64>, Vec<f64>, f64)> = (0..steps)
        .into_par_iter()
        .map(|k| {
            let lambda = cycle.lambda(k);
            let frame = frame_at(family, lambda)?;
            check_gap(&frame, lambda, spacing)?;
            Ok((columns(frame.vectors()), frame.angles().to_vec(), frame.min_gap()))
        })
        .collect::<Result<_>>()?;
    let dim = frames[0].0.ncols();
    if start >= dim {
        return Err(Error::DimensionMismatch { expected: dim, found: start });
    }
    let mut index = start;
    let mut phase = 0.0;
    for _ in 0..max_cycles {
        for k in 0..steps {
            let (here, here_angles, here_gap) = &frames[k];
            let (next, next_angles, next_gap) = &frames[(k + 1) % steps];
            let overlaps = next.adjoint() * here.column(index);
            let (j, value) = (0..overlaps.nrows())
                .map(|j| (j, overlaps[j].conj()))
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .expect("nonempty frame");
            let delta = wrap_to_pi(next_angles[j] - here_angles[index]).abs();
            if value.norm() < FRAC_1_SQRT_2 || (dim > 1 && delta >= here_gap.min(*next_gap) / 2.0) {
                return Err(Error::UnderResolved { worst_overlap: value.norm(), steps });
            }
            phase -= value.arg();
            index = j;
        }
        if index == start {
            return Ok(phase.rem_euclid(TAU));
        }
    }
    Err(Error::NotClosed { cycles: max_cycles })
}

/// `Tr[A† B]` without forming the product.
fn trace_adjoint_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.as_nalgebra().iter().zip(b.as_nalgebra().iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `(1/2π) ∫ Im Tr[U⁻¹ ∂_λ U] dλ` by the periodic trapezoid rule with a
/// fourth-order central difference for `∂_λ U`.
pub fn winding_quadrature(family: &dyn UnitaryFamily, steps: usize) -> Result<f64> {
    check_periodic(family)?;
    let h = TAU / steps as f64;
    let wrap = |k: isize| k.rem_euclid(steps as isize) as usize;
    let dim = family.dim();
    // Cache the grid when it is small; otherwise rebuild the stencil points.
    let cached: Option<Vec<ComplexMatrix>> = (dim * dim * steps * 16 <= WINDING_CACHE_BYTES)
        .then(|| (0..steps).into_par_iter().map(|k| family.unitary(h * k as f64)).collect());
    let at = |k: isize| match &cached {
        Some(us) => Cow::Borrowed(&us[wrap(k)]),
        None => Cow::Owned(family.unitary(h * wrap(k) as f64)),
    };
    // Collected in order and summed sequentially so the result is reproducible.
    let terms: Vec<f64> = (0..steps as isize)
        .into_par_iter()
        .map(|k| {
            let u = at(k);
            let tr = |j: isize| trace_adjoint_product(&u, &at(k + j));
            let stencil = (tr(-2) - tr(2) + (tr(1) - tr(-1)) * 8.0) / (12.0 * h);
            stencil.im
        })
        .collect();
    let total: f64 = terms.iter().sum();
    Ok(total * h / TAU)
}

/// `ν(C)` rounded from [`winding_quadrature`]; fails unless within 0.1 of an integer.
pub fn winding_number(family: &dyn UnitaryFamily, steps: usize) -> Result<i64> {
    let value = winding_quadrature(family, steps)?;
    let rounded = value.round();
    if (value - rounded).abs() > 0.1 {
        return Err(Error::QuadratureNotConverged { value });
    }
    Ok(rounded as i64)
}

/// `ν⁽ᴺ⁾ = d_N`
pub fn winding_number_analytic(params: &CircuitParams) -> BigInt {
    slope(params)
}

/// A stretch of the scan where the eigenangle gap falls below [`PATH_GAP_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct DegeneracyWindow {
    pub start: f64,
    pub end: f64,
    /// Parameter of the smallest gap found in the window.
    pub at: f64,
    pub min_gap: f64,
}

fn gap_at(family: &dyn UnitaryFamily, lambda: f64) -> f64 {
    match unitary_eigenangles(&family.unitary(lambda)) {
        Ok(angles) => min_circular_gap(&angles),
        Err(_) => f64::NAN,
    }
}

/// Golden-section minimization of the gap on `[a, b]`.
fn refine_minimum(family: &dyn UnitaryFamily, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (gap_at(family, c), gap_at(family, d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = gap_at(family, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = gap_at(family, d);
        }
        if fc < PATH_GAP_TOL.min(fd) * 1e-3 {
            break;
        }
    }
    if fc < fd { (c, fc) } else { (d, fd) }
}

/// Windows of the grid on which the minimal circular eigenangle gap drops
/// below [`PATH_GAP_TOL`]. Local minima of the sampled gap are refined by a
/// golden-section search, so crossings between grid points are found.
pub fn degeneracy_scan(family: &dyn UnitaryFamily, grid: &[f64]) -> Vec<DegeneracyWindow> {
    if family.dim() < 2 || grid.is_empty() {
        return Vec::new();
    }
    let gaps: Vec<f64> = grid.par_iter().map(|&l| gap_at(family, l)).collect();
    let last = grid.len() - 1;
    let mut windows: Vec<DegeneracyWindow> = Vec::new();
    let mut k = 0;
    while k <= last {
        if gaps[k] < PATH_GAP_TOL {
            let begin = k;
            while k < last && gaps[k + 1] < PATH_GAP_TOL {
                k += 1;
            }
            let (at, min_gap) = (begin..=k)
                .map(|i| (grid[i], gaps[i]))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty window");
            windows.push(DegeneracyWindow {
                start: grid[begin.saturating_sub(1)],
                end: grid[(k + 1).min(last)],
                at,
                min_gap,
            });
        } else {
            let left = if k > 0 { gaps[k - 1] } else { f64::INFINITY };
            let right = if k < last { gaps[k + 1] } else { f64::INFINITY };
            let is_min = (gaps[k] < left && gaps[k] <= right) || (gaps[k] <= left && gaps[k] < right);
            if is_min {
                let a = grid[k.saturating_sub(1)];
                let b = grid[(k + 1).min(last)];
                let (at, min_gap) = refine_minimum(family, a, b);
                if min_gap < PATH_GAP_TOL {
                    windows.push(DegeneracyWindow { start: a, end: b, at, min_gap });
                }
            }
        }
        k += 1;
    }
    windows
}

/// `A_{n',n}(λ) = ⟨n'(λ)|i∂_λ|n(λ)⟩` in the analytic eigenvector gauge, by
/// central difference with step `h`; rows and columns indexed by `m_N mod 2ᴺ`.
pub fn gauge_connection(params: &CircuitParams, lambda: f64, h: f64) -> Result<ComplexMatrix> {
    let states = states_by_principal(params)?;
    let frame = |l: f64| -> Vec<StateVector> { states.iter().map(|n| eigenvector_n(params, n, l)).collect() };
    let (here, plus, minus) = (frame(lambda), frame(lambda + h), frame(lambda - h));
    Ok(ComplexMatrix::from_fn(states.len(), |r, c| {
        Complex64::i() * (here[r].inner(&plus[c]) - here[r].inner(&minus[c])) / (2.0 * h)
    }))
}

/// Gauge invariants of one cycle of `λ`.
#[derive(Clone, Debug)]
pub struct HolonomyReport {
    pub params: Vec<i64>,
    /// `𝔖(C)` on `m_N mod 2ᴺ`.
    pub permutation: Permutation,
    /// Diagonal of `σ(C)`, empty when the spectrum is degenerate.
    pub sigma: Vec<Complex64>,
    pub cycles: Vec<Vec<usize>>,
    /// One `γ ∈ [0, 2π)` per cycle, empty when the spectrum is degenerate.
    pub gamma_per_cycle: Vec<f64>,
    pub nu: BigInt,
    pub d_n: BigInt,
    pub degenerate: bool,
}

impl HolonomyReport {
    fn from_holonomy(params: &CircuitParams, m: &HolonomyMatrix, tol: f64) -> Result<Self> {
        let (permutation, sigma) = m.factorize_with_tol(tol)?;
        let blocks = gamma_per_cycle(&permutation, &sigma);
        Ok(HolonomyReport {
            params: params.p().to_vec(),
            cycles: blocks.iter().map(|b| b.cycle.clone()).collect(),
            gamma_per_cycle: blocks.iter().map(|b| b.gamma).collect(),
            permutation,
            sigma,
            nu: winding_number_analytic(params),
            d_n: slope(params),
            degenerate: false,
        })
    }
}

/// Invariants of `Û⁽ᴺ⁾`: exact for all-odd `p`, from a numeric sweep of
/// `steps` points when only `p_1` is even, and the bare `m`-shift with the
/// degenerate flag set otherwise.
pub fn holonomy_report(params: &CircuitParams, steps: usize, max_qubits: usize) -> Result<HolonomyReport> {
    if params.degenerate_spectrum() {
        let permutation = crate::spectral::m_shift(params);
        return Ok(HolonomyReport {
            params: params.p().to_vec(),
            cycles: cycle_decompose(&permutation),
            permutation,
            sigma: Vec::new(),
            gamma_per_cycle: Vec::new(),
            nu: winding_number_analytic(params),
            d_n: slope(params),
            degenerate: true,
        });
    }
    if params.require_all_odd().is_ok() {
        return HolonomyReport::from_holonomy(params, &holonomy_analytic(params)?, MONOMIAL_TOL);
    }
    let circuit = HierarchicalCircuit::with_cap(params.clone(), max_qubits)?;
    let (m, _) = holonomy_numeric_circuit(&circuit, steps)?;
    HolonomyReport::from_holonomy(params, &m, NUMERIC_MONOMIAL_TOL)
}

/// Looser factorization tolerance for numerically transported holonomies.
pub const NUMERIC_MONOMIAL_TOL: f64 = 1e-6;
/// Memory bound for caching the grid unitaries in [`winding_quadrature`].
const WINDING_CACHE_BYTES: usize = 1 << 28;
