//! Exact spectra of the hierarchical circuits: principal quantum numbers,
//! eigenangles and eigenvectors, and the integers `s` and `r` describing how
//! one cycle of `λ` permutes and winds the eigenangles.
//!
//! All integer bookkeeping is arbitrary precision: `d_N = Π p_k` and the
//! principal numbers grow exponentially with `N`.
//!
//! `[x]` is taken as `floor(x)` (largest integer `≤ x`). With the strict
//! reading (largest integer `< x`) the balance `m(s) = m(n) + d − 2ᴺ r` fails
//! whenever `n + p` is even.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use num_complex::Complex64;

use crate::circuits::CircuitParams;
use crate::error::{Error, Result};
use crate::linalg::{Permutation, StateVector};

/// Quantum numbers `(n_N, …, n_1)`, most significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    bits: Vec<u8>,
}

impl QuantumNumbers {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() || bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParams(format!("quantum numbers must be 0/1, got {bits:?}")));
        }
        Ok(QuantumNumbers { bits })
    }

    pub fn zeros(qubits: usize) -> Self {
        QuantumNumbers { bits: vec![0; qubits] }
    }

    /// The quantum numbers of the computational basis state with index
    /// `index` (binary `n_N … n_1`).
    pub fn from_index(qubits: usize, index: usize) -> Self {
        let bits = (0..qubits).rev().map(|j| ((index >> j) & 1) as u8).collect();
        QuantumNumbers { bits }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn qubits(&self) -> usize {
        self.bits.len()
    }

    /// `n_j`, 1-based.
    pub fn n(&self, j: usize) -> u8 {
        self.bits[self.bits.len() - j]
    }

    /// Bits in display order `n_N … n_1`.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// `(n_j, …, n_1)`
    pub fn lower(&self, j: usize) -> QuantumNumbers {
        QuantumNumbers { bits: self.bits[self.bits.len() - j..].to_vec() }
    }

    /// Every tuple of `qubits` quantum numbers, in index order.
    pub fn all(qubits: usize) -> impl Iterator<Item = QuantumNumbers> {
        (0..1usize << qubits).map(move |i| QuantumNumbers::from_index(qubits, i))
    }

    /// `n_k ⋯ n_j`, defined as 1 when `k < j`.
    fn product(&self, k: usize, j: usize) -> u8 {
        if k < j {
            1
        } else {
            (j..=k).map(|l| self.n(l)).product()
        }
    }
}

impl fmt::Display for QuantumNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for QuantumNumbers {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidParams(format!("bad quantum number string {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        QuantumNumbers::new(bits)
    }
}

/// The principal quantum number `m_N`, taken modulo `2ᴺ` when reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalNumber {
    value: BigInt,
    qubits: usize,
}

impl PrincipalNumber {
    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> BigInt {
        BigInt::one() << self.qubits
    }

    pub fn reduced(&self) -> usize {
        self.value.mod_floor(&self.modulus()).to_usize().expect("2^N fits in usize")
    }
}

fn check_len(params: &CircuitParams, n: &QuantumNumbers) {
    assert_eq!(
        params.qubits(),
        n.qubits(),
        "quantum numbers {n} do not match {} qubits",
        params.qubits()
    );
}

/// `m_N = 2^{N−1} n_N + p_N m_{N−1}`, `m_1 = n_1`.
///
/// Panics if the lengths of `params` and `n` differ.
pub fn principal_number(params: &CircuitParams, n: &QuantumNumbers) -> PrincipalNumber {
    check_len(params, n);
    let mut m = BigInt::from(n.n(1));
    for j in 2..=params.qubits() {
        m = (BigInt::from(n.n(j)) << (j - 1)) + BigInt::from(params.p_j(j)) * m;
    }
    PrincipalNumber { value: m, qubits: params.qubits() }
}

/// `d_N = Π p_k`
pub fn slope(params: &CircuitParams) -> BigInt {
    params.p().iter().map(|&p| BigInt::from(p)).product()
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `θ⁽ᴺ⁾ = (2π/2ᴺ)(m_N + d_N λ/2π)`, not reduced modulo 2π.
pub fn eigenangle_n(params: &CircuitParams, n: &QuantumNumbers, lambda: f64) -> f64 {
    let m = big_to_f64(principal_number(params, n).value());
    let d = big_to_f64(&slope(params));
    TAU / 2f64.powi(params.qubits() as i32) * (m + d * lambda / TAU)
}

/// Single-qubit eigenangle `θ(n; λ, p) = nπ + pλ/2`.
pub fn eigenangle_single(n: u8, lambda: f64, p: i64) -> f64 {
    n as f64 * PI + p as f64 * lambda / 2.0
}

/// `|0(λ,p)⟩ = cos(a)|0⟩ + sin(a)|1⟩`, `|1(λ,p)⟩ = cos(a)|1⟩ − sin(a)|0⟩`,
/// with `a = (2 − p)λ/4`.
pub fn eigenvector_single(n: u8, lambda: f64, p: i64) -> StateVector {
    let a = (2 - p) as f64 * lambda / 4.0;
    let (c, s) = (a.cos(), a.sin());
    let amps = if n == 0 { [c, s] } else { [-s, c] };
    StateVector::normalized(amps.iter().map(|&x| Complex64::from(x)).collect())
}

/// `|n_N, …, n_1; λ⟩ = ⊗_j |n_j(θ⁽ʲ⁻¹⁾(m_{j−1}; λ), p_j)⟩` with `θ⁽⁰⁾ = λ`;
/// qubit `N` is the leftmost factor.
pub fn eigenvector_n(params: &CircuitParams, n: &QuantumNumbers, lambda: f64) -> StateVector {
    check_len(params, n);
    let mut theta = lambda;
    let mut v = eigenvector_single(n.n(1), theta, params.p_j(1));
    theta = eigenangle_single(n.n(1), theta, params.p_j(1));
    for j in 2..=params.qubits() {
        let factor = eigenvector_single(n.n(j), theta, params.p_j(j));
        v = factor.kron(&v);
        theta = eigenangle_single(n.n(j), theta, params.p_j(j));
    }
    v
}

/// `s = (n + p) mod 2`, `r = floor((n + p)/2)`.
pub fn sr_single(n: u8, p: i64) -> (u8, i64) {
    let q = n as i64 + p;
    (q.rem_euclid(2) as u8, q.div_euclid(2))
}

fn sr_single_big(n: u8, q: &BigInt) -> (u8, BigInt) {
    let total = q + BigInt::from(n);
    let (r, s) = total.div_mod_floor(&BigInt::from(2));
    (if s.is_zero() { 0 } else { 1 }, r)
}

/// The successor quantum numbers and winding integer for one cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrPair {
    pub s: QuantumNumbers,
    pub r: BigInt,
}

/// `(s⁽ʲ⁾_j, r⁽ʲ⁾)` for every level `j = 1 … N`, index 0 holding level 1.
pub fn sr_levels(params: &CircuitParams, n: &QuantumNumbers) -> Vec<(u8, BigInt)> {
    check_len(params, n);
    let mut levels: Vec<(u8, BigInt)> = Vec::with_capacity(params.qubits());
    let first = sr_single_big(n.n(1), &BigInt::from(params.p_j(1)));
    levels.push(first);
    for j in 2..=params.qubits() {
        let q = BigInt::from(params.p_j(j)) * &levels[j - 2].1;
        levels.push(sr_single_big(n.n(j), &q));
    }
    levels
}

/// `s⁽ᴺ⁾` and `r⁽ᴺ⁾` from the level recursion
/// `s⁽ᴺ⁾_N = s(n_N, p_N r⁽ᴺ⁻¹⁾)`, `r⁽ᴺ⁾ = r(n_N, p_N r⁽ᴺ⁻¹⁾)`.
pub fn sr_full(params: &CircuitParams, n: &QuantumNumbers) -> SrPair {
    let levels = sr_levels(params, n);
    let bits = levels.iter().rev().map(|(s, _)| *s).collect();
    let r = levels.last().expect("at least one level").1.clone();
    SrPair { s: QuantumNumbers { bits }, r }
}

/// Which labelling of the eigenstates a permutation is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    /// Indexed by `m_N mod 2ᴺ`.
    Principal,
    /// Indexed by the computational index of `(n_N, …, n_1)`.
    QuantumNumbers,
}

/// The cycle's action on `m_N mod 2ᴺ`: a shift by `d_N`.
pub fn m_shift(params: &CircuitParams) -> Permutation {
    let modulus = BigInt::one() << params.qubits();
    let d = slope(params).mod_floor(&modulus).to_usize().expect("fits");
    Permutation::shift(params.dim(), d)
}

/// `𝔖(C)` in the requested representation. The quantum-number form needs the
/// `n ↔ m` bijection and fails with `DegenerateSpectrum` without it.
pub fn permutation_matrix(params: &CircuitParams, repr: Representation) -> Result<Permutation> {
    match repr {
        Representation::Principal => Ok(m_shift(params)),
        Representation::QuantumNumbers => Ok(anholonomy_data(params)?.s),
    }
}

/// `s` as a permutation of computational indices together with `r⁽ᴺ⁾` per index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnholonomyData {
    pub s: Permutation,
    pub r: Vec<BigInt>,
}

pub fn anholonomy_data(params: &CircuitParams) -> Result<AnholonomyData> {
    params.require_nondegenerate()?;
    let (image, r): (Vec<usize>, Vec<BigInt>) = QuantumNumbers::all(params.qubits())
        .map(|n| {
            let sr = sr_full(params, &n);
            (sr.s.index(), sr.r)
        })
        .unzip();
    Ok(AnholonomyData { s: Permutation::new(image)?, r })
}

/// True if `n ↦ m_N mod 2ᴺ` is injective (checked exhaustively).
pub fn is_bijective(params: &CircuitParams) -> bool {
    let mut seen = vec![false; params.dim()];
    QuantumNumbers::all(params.qubits())
        .all(|n| !std::mem::replace(&mut seen[principal_number(params, &n).reduced()], true))
}

/// Quantum numbers ordered by `m_N mod 2ᴺ`.
pub fn states_by_principal(params: &CircuitParams) -> Result<Vec<QuantumNumbers>> {
    params.require_nondegenerate()?;
    let mut by_m = vec![QuantumNumbers::zeros(params.qubits()); params.dim()];
    for n in QuantumNumbers::all(params.qubits()) {
        let m = principal_number(params, &n).reduced();
        by_m[m] = n;
    }
    Ok(by_m)
}

/// The analytic eigenvectors at `λ`, listed by `m_N mod 2ᴺ`.
pub fn analytic_frame(params: &CircuitParams, lambda: f64) -> Result<Vec<StateVector>> {
    Ok(states_by_principal(params)?
        .iter()
        .map(|n| eigenvector_n(params, n, lambda))
        .collect())
}

/// The sequence `start, s(start), s(s(start)), …` of length `count + 1`.
pub fn itinerary(
    params: &CircuitParams,
    start: &QuantumNumbers,
    count: usize,
) -> Result<Vec<QuantumNumbers>> {
    params.require_nondegenerate()?;
    check_len(params, start);
    let mut out = Vec::with_capacity(count + 1);
    let mut current = start.clone();
    out.push(current.clone());
    for _ in 0..count {
        current = sr_full(params, &current).s;
        out.push(current.clone());
    }
    Ok(out)
}

/// Parameter families with closed-form `s` and `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `p_j = 1` for all `j`.
    Simplest,
    /// `p_1 = 2`, `p_j = 1` otherwise.
    EvenP1,
    /// `p_J = 1 + 2^K`, `p_j = 1` otherwise.
    Impurity { j: usize, k: u32 },
}

impl Family {
    pub fn params(&self, qubits: usize) -> CircuitParams {
        let mut p = vec![1i64; qubits];
        match *self {
            Family::Simplest => {}
            Family::EvenP1 => p[0] = 2,
            Family::Impurity { j, k } => {
                if j >= 1 && j <= qubits {
                    p[j - 1] = 1 + (1i64 << k);
                }
            }
        }
        CircuitParams::new(p).expect("qubits >= 1")
    }

    fn name(&self) -> String {
        match self {
            Family::Simplest => "simplest".into(),
            Family::EvenP1 => "even-p1".into(),
            Family::Impurity { j, k } => format!("impurity(J={j}, K={k})"),
        }
    }

    fn validate(&self, params: &CircuitParams) -> Result<()> {
        let valid = match *self {
            Family::Impurity { j, k } if j == 0 || k == 0 || k > 62 => false,
            _ => self.params(params.qubits()) == *params,
        };
        if valid {
            Ok(())
        } else {
            Err(Error::FamilyMismatch { family: self.name(), params: params.p().to_vec() })
        }
    }

    /// `(s⁽ᴸ⁾_L, r⁽ᴸ⁾)` at level `L` from the explicit formulas.
    fn level(&self, n: &QuantumNumbers, level: usize) -> (u8, i64) {
        let nb = |j: usize| n.n(j);
        let flip_if = |cond: bool| if cond { 1 - nb(level) } else { nb(level) };
        match *self {
            Family::Simplest => {
                (flip_if(n.product(level - 1, 1) == 1), n.product(level, 1) as i64)
            }
            Family::EvenP1 => {
                if level == 1 {
                    (nb(1), 1)
                } else {
                    (flip_if(n.product(level - 1, 2) == 1), n.product(level, 2) as i64)
                }
            }
            Family::Impurity { j: cj, k: ck } => {
                let ck = ck as usize;
                if level < cj {
                    Family::Simplest.level(n, level)
                } else if level < cj + ck {
                    let s = flip_if(n.product(level - 1, 1) == 1);
                    let r = (n.product(level, cj) as i64 + (1i64 << (ck - (level - cj) - 1)))
                        * n.product(cj - 1, 1) as i64;
                    (s, r)
                } else {
                    let top = cj + ck;
                    let t = nb(top) + (1 - nb(top)) * n.product(top - 1, cj);
                    let low = n.product(cj - 1, 1);
                    let r = (n.product(level, top + 1) * t * low) as i64;
                    let s = if level == top {
                        flip_if(n.product(top - 1, cj) == 0 && low == 1)
                    } else {
                        flip_if(n.product(level - 1, top + 1) * t * low == 1)
                    };
                    (s, r)
                }
            }
        }
    }
}

/// `t⁽ᴶ'ᴷ⁾ = n_{J+K} + n̄_{J+K} n_{J+K−1} ⋯ n_J`, the effective many-body
/// quantum number introduced by an impurity.
pub fn impurity_t(n: &QuantumNumbers, j: usize, k: usize) -> u8 {
    let top = j + k;
    n.n(top) + (1 - n.n(top)) * n.product(top - 1, j)
}

/// `s⁽ᴺ⁾` and `r⁽ᴺ⁾` from the explicit per-family formulas. Independent of
/// the level recursion used by [`sr_full`].
pub fn closed_form_sr(params: &CircuitParams, n: &QuantumNumbers, family: Family) -> Result<SrPair> {
    family.validate(params)?;
    check_len(params, n);
    let qubits = params.qubits();
    let bits = (1..=qubits).rev().map(|level| family.level(n, level).0).collect();
    let r = family.level(n, qubits).1;
    Ok(SrPair { s: QuantumNumbers { bits }, r: BigInt::from(r) })
}

/// `Σ_n r⁽ᴺ⁾(n)` over all `2ᴺ` tuples.
pub fn winding_sum(params: &CircuitParams) -> BigInt {
    QuantumNumbers::all(params.qubits())
        .map(|n| sr_full(params, &n).r)
        .fold(BigInt::zero(), |a, b| a + b)
}
