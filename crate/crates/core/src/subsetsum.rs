//! Decoding a principal quantum number back into quantum numbers is a subset-sum
//! problem: `m_N = Σ_j w_j n_j` with `w_j = (Π_{k>j} p_k) 2^{j−1}` and `w_N = 2^{N−1}`.
//!
//! Reference solvers: exhaustive enumeration and the pseudo-polynomial
//! reachability table.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::circuits::CircuitParams;
use crate::error::{Error, Result};
use crate::spectral::{principal_number, QuantumNumbers};

/// Largest instance accepted by [`Method::Brute`].
pub const BRUTE_MAX_ITEMS: usize = 24;
/// Largest reachability table (items × sums) accepted by [`Method::Dp`].
pub const DP_MAX_CELLS: u128 = 1 << 30;
/// Largest `N` accepted by [`decode`], which enumerates all `2ᴺ` tuples.
pub const DECODE_MAX_QUBITS: usize = 24;

/// `w_j` listed from `j = 1` to `j = N`.
pub fn weights(params: &CircuitParams) -> Result<Vec<BigInt>> {
    if let Some((k, &value)) = params.p().iter().enumerate().find(|(_, &p)| p <= 0) {
        return Err(Error::NonPositiveParams { index: k + 1, value });
    }
    let n = params.qubits();
    Ok((1..=n)
        .map(|j| {
            let tail: BigInt = params.p()[j..].iter().map(|&p| BigInt::from(p)).product();
            let tail = if j == n { BigInt::from(1) } else { tail };
            tail << (j - 1)
        })
        .collect())
}

/// `w_j mod 2ᴺ` for any integer `p`, using wrapping 64-bit arithmetic
/// (exact because `2ᴺ` divides `2⁶⁴`).
fn weights_mod(params: &CircuitParams) -> Vec<u64> {
    let n = params.qubits();
    let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    (1..=n)
        .map(|j| {
            let tail = params.p()[j..].iter().fold(1u64, |acc, &p| acc.wrapping_mul(p as u64));
            let tail = if j == n { 1 } else { tail };
            tail.wrapping_shl((j - 1) as u32) & mask
        })
        .collect()
}

/// Every tuple `n` with `m_N(n) = m`, or `m_N(n) ≡ m (mod 2ᴺ)` when `modular`.
/// Results are in index order.
pub fn decode(params: &CircuitParams, m: &BigInt, modular: bool) -> Vec<QuantumNumbers> {
    let qubits = params.qubits();
    assert!(qubits <= DECODE_MAX_QUBITS, "decode enumerates 2^N tuples; N = {qubits} is too large");
    if modular {
        let modulus = BigInt::from(1) << qubits;
        let target = (((m % &modulus) + &modulus) % &modulus).to_u64().expect("below 2^N");
        let w = weights_mod(params);
        let mask = (1u64 << qubits) - 1;
        return (0..1usize << qubits)
            .filter(|&index| {
                let sum = w
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| index >> j & 1 == 1)
                    .fold(0u64, |acc, (_, &wj)| acc.wrapping_add(wj));
                sum & mask == target
            })
            .map(|index| QuantumNumbers::from_index(qubits, index))
            .collect();
    }
    QuantumNumbers::all(qubits)
        .filter(|n| principal_number(params, n).value() == m)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumInstance {
    pub weights: Vec<u64>,
    pub target: u64,
    /// When set, solutions satisfy `Σ ≡ target (mod modulus)`.
    pub modulus: Option<u64>,
}

impl SubsetSumInstance {
    pub fn new(weights: Vec<u64>, target: u64) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::InvalidParams("subset-sum weights must be positive".into()));
        }
        Ok(SubsetSumInstance { weights, target, modulus: None })
    }

    pub fn with_modulus(mut self, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidParams("modulus must be positive".into()));
        }
        self.target %= modulus;
        self.modulus = Some(modulus);
        Ok(self)
    }

    /// The instance `Σ w_j n_j = m`, modulo `2ᴺ` when `modular`.
    pub fn from_params(params: &CircuitParams, m: u64, modular: bool) -> Result<Self> {
        let weights = weights(params)?
            .iter()
            .map(|w| w.to_u64())
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| Error::InstanceTooLarge("weights exceed 64 bits".into()))?;
        let instance = SubsetSumInstance::new(weights, m)?;
        if modular {
            let modulus = 1u64
                .checked_shl(params.qubits() as u32)
                .ok_or_else(|| Error::InstanceTooLarge("2^N exceeds 64 bits".into()))?;
            instance.with_modulus(modulus)
        } else {
            Ok(instance)
        }
    }

    pub fn total(&self) -> u128 {
        self.weights.iter().map(|&w| w as u128).sum()
    }

    fn accepts(&self, sum: u128) -> bool {
        match self.modulus {
            Some(modulus) => sum % modulus as u128 == self.target as u128,
            None => sum == self.target as u128,
        }
    }

    /// Sums `≤ Σ w` that satisfy the instance, in increasing order.
    fn targets(&self) -> Vec<u128> {
        let total = self.total();
        match self.modulus {
            None if (self.target as u128) <= total => vec![self.target as u128],
            None => Vec::new(),
            Some(modulus) => (0..)
                .map(|k| self.target as u128 + k * modulus as u128)
                .take_while(|&t| t <= total)
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// All `2^|S|` subsets; returns every solution.
    Brute,
    /// Reachability table over sums; returns one solution per feasible target.
    Dp,
}

/// Solutions (ascending index lists) and the number of elementary steps spent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solved {
    pub subsets: Vec<Vec<usize>>,
    /// Subsets visited (brute) or table cells filled (dp).
    pub work: u64,
}

pub fn solve_subset_sum(instance: &SubsetSumInstance, method: Method) -> Result<Vec<Vec<usize>>> {
    Ok(solve_counted(instance, method)?.subsets)
}

pub fn solve_counted(instance: &SubsetSumInstance, method: Method) -> Result<Solved> {
    match method {
        Method::Brute => brute(instance),
        Method::Dp => dp(instance),
    }
}

fn subset_of(mask: u64, len: usize) -> Vec<usize> {
    (0..len).filter(|&i| mask >> i & 1 == 1).collect()
}

fn brute(instance: &SubsetSumInstance) -> Result<Solved> {
    let len = instance.weights.len();
    if len > BRUTE_MAX_ITEMS {
        return Err(Error::InstanceTooLarge(format!(
            "brute force takes at most {BRUTE_MAX_ITEMS} weights, got {len}"
        )));
    }
    let masks: Vec<u64> = (0..1u64 << len)
        .into_par_iter()
        .filter(|&mask| {
            let sum: u128 = (0..len)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| instance.weights[i] as u128)
                .sum();
            instance.accepts(sum)
        })
        .collect();
    let mut subsets: Vec<Vec<usize>> = masks.into_iter().map(|m| subset_of(m, len)).collect();
    subsets.sort();
    Ok(Solved { subsets, work: 1 << len })
}

/// Growable bitset of reachable sums.
#[derive(Clone)]
struct Reach(Vec<u64>);

impl Reach {
    fn new(bits: usize) -> Self {
        let mut r = Reach(vec![0; bits.div_ceil(64)]);
        r.0[0] = 1;
        r
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    /// `self | (self << shift)`, truncated to the current length.
    fn or_shifted(&self, shift: usize) -> Self {
        let mut out = self.0.clone();
        let (words, bits) = (shift / 64, shift % 64);
        for i in (words..out.len()).rev() {
            let src = i - words;
            let mut v = self.0[src] << bits;
            if bits > 0 && src > 0 {
                v |= self.0[src - 1] >> (64 - bits);
            }
            out[i] |= v;
        }
        Reach(out)
    }
}

/// Reachable sums after each prefix of the weights, up to a fixed bound.
/// Built once and reused for many targets.
pub struct DpTable {
    weights: Vec<u64>,
    layers: Vec<Reach>,
    max_target: u64,
}

impl DpTable {
    pub fn build(weights: &[u64], max_target: u64) -> Result<Self> {
        let cells = (weights.len() as u128 + 1) * (max_target as u128 + 1);
        if cells > DP_MAX_CELLS {
            return Err(Error::InstanceTooLarge(format!(
                "dp table needs {cells} cells, limit {DP_MAX_CELLS}"
            )));
        }
        let mut layers = vec![Reach::new(max_target as usize + 1)];
        for &w in weights {
            let last = layers.last().expect("base layer");
            let next = if w > max_target { last.clone() } else { last.or_shifted(w as usize) };
            layers.push(next);
        }
        Ok(DpTable { weights: weights.to_vec(), layers, max_target })
    }

    pub fn cells(&self) -> u64 {
        (self.weights.len() as u64 + 1) * (self.max_target + 1)
    }

    pub fn reachable(&self, target: u64) -> bool {
        target <= self.max_target && self.layers[self.weights.len()].get(target as usize)
    }

    /// One subset summing to `target`, if any.
    pub fn witness(&self, target: u64) -> Option<Vec<usize>> {
        if !self.reachable(target) {
            return None;
        }
        let mut t = target as usize;
        let mut chosen = Vec::new();
        for i in (0..self.weights.len()).rev() {
            if !self.layers[i].get(t) {
                chosen.push(i);
                t -= self.weights[i] as usize;
            }
        }
        chosen.reverse();
        Some(chosen)
    }

    /// One subset per feasible target of `instance` within the table's bound.
    pub fn solve(&self, instance: &SubsetSumInstance) -> Vec<Vec<usize>> {
        instance
            .targets()
            .into_iter()
            .filter(|&t| t <= self.max_target as u128)
            .filter_map(|t| self.witness(t as u64))
            .collect()
    }
}

fn dp(instance: &SubsetSumInstance) -> Result<Solved> {
    let Some(&max_target) = instance.targets().last() else {
        return Ok(Solved { subsets: Vec::new(), work: 0 });
    };
    let max_target = u64::try_from(max_target)
        .map_err(|_| Error::InstanceTooLarge("target exceeds 64 bits".into()))?;
    let table = DpTable::build(&instance.weights, max_target)?;
    Ok(Solved { subsets: table.solve(instance), work: table.cells() })
}

/// Quantum numbers selected by a subset of weight indices (index `j − 1` ↦ `n_j = 1`).
pub fn subset_to_quantum_numbers(subset: &[usize], qubits: usize) -> QuantumNumbers {
    let mut bits = vec![0u8; qubits];
    for &i in subset {
        bits[qubits - 1 - i] = 1;
    }
    QuantumNumbers::new(bits).expect("0/1 bits")
}

/// `Δ = 2π/2ᴺ`, the constant spacing of the nondegenerate eigenangle ladder.
pub fn spectral_gap(params: &CircuitParams) -> Result<f64> {
    params.require_nondegenerate()?;
    Ok(TAU / 2f64.powi(params.qubits() as i32))
}

/// `1/Δ²`, the usual adiabatic time-scale heuristic for resolving the ladder.
pub fn adiabatic_time_scale(params: &CircuitParams) -> Result<f64> {
    Ok(spectral_gap(params)?.powi(-2))
}

/// `Σ_j w_j n_j`, independent of the circuit recursion.
pub fn weighted_sum(weights: &[BigInt], n: &QuantumNumbers) -> BigInt {
    weights
        .iter()
        .enumerate()
        .filter(|(j, _)| n.n(j + 1) == 1)
        .fold(BigInt::zero(), |acc, (_, w)| acc + w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_unitary, min_circular_gap};
    use crate::spectral::{slope, sr_full};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(p: &[i64]) -> CircuitParams {
        CircuitParams::new(p.to_vec()).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weights(&params(&[1, 1, 1])).unwrap(), big(&[1, 2, 4]));
        assert_eq!(weights(&params(&[1, 3, 1])).unwrap(), big(&[3, 2, 4]));
        assert_eq!(weights(&params(&[3, 1, 1])).unwrap(), big(&[1, 2, 4]));
        assert_eq!(
            weights(&params(&[1, 0, 1])),
            Err(Error::NonPositiveParams { index: 2, value: 0 })
        );
    }

    #[test]
    fn weights_reproduce_principal_numbers() {
        for p in [vec![1, 3, 1], vec![5, 3, 7, 1], vec![2, 4, 6]] {
            let pr = params(&p);
            let w = weights(&pr).unwrap();
            for n in QuantumNumbers::all(p.len()) {
                assert_eq!(&weighted_sum(&w, &n), principal_number(&pr, &n).value());
            }
        }
    }

    #[test]
    fn decode_examples() {
        let pr = params(&[1, 3, 1]);
        let solutions = decode(&pr, &BigInt::from(7), false);
        assert_eq!(solutions, vec!["101".parse().unwrap()]);
        assert_eq!(decode(&pr, &BigInt::from(0), false), vec![QuantumNumbers::zeros(3)]);
        assert_eq!(decode(&pr, &BigInt::from(1), true), vec!["111".parse().unwrap()]);
        assert!(decode(&pr, &BigInt::from(1), false).is_empty());
        // Repeated weights give several solutions.
        assert_eq!(decode(&params(&[1, 2, 1]), &BigInt::from(2), false).len(), 2);
    }

    #[test]
    fn modular_decode_is_unique_for_odd_parameters() {
        for p in [vec![1, 1, 1, 1], vec![3, 5, 1, 7], vec![5; 5]] {
            let pr = params(&p);
            for m in 0..pr.dim() as i64 {
                assert_eq!(decode(&pr, &BigInt::from(m), true).len(), 1);
            }
        }
    }

    #[test]
    fn solver_examples() {
        let inst = SubsetSumInstance::new(vec![3, 2, 4], 7).unwrap();
        assert_eq!(solve_subset_sum(&inst, Method::Brute).unwrap(), vec![vec![0, 2]]);
        assert_eq!(solve_subset_sum(&inst, Method::Dp).unwrap(), vec![vec![0, 2]]);
        let zero = SubsetSumInstance::new(vec![5, 9], 0).unwrap();
        assert_eq!(solve_subset_sum(&zero, Method::Brute).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(solve_subset_sum(&zero, Method::Dp).unwrap(), vec![Vec::<usize>::new()]);
        let binary = SubsetSumInstance::new(vec![1, 2, 4, 8, 16], 0).unwrap();
        for t in 0..32u64 {
            let inst = SubsetSumInstance { target: t, ..binary.clone() };
            let expected: Vec<usize> = (0..5).filter(|&i| t >> i & 1 == 1).collect();
            assert_eq!(solve_subset_sum(&inst, Method::Brute).unwrap(), vec![expected.clone()]);
            assert_eq!(solve_subset_sum(&inst, Method::Dp).unwrap(), vec![expected]);
        }
        let infeasible = SubsetSumInstance::new(vec![4, 6], 5).unwrap();
        assert!(solve_subset_sum(&infeasible, Method::Dp).unwrap().is_empty());
        assert!(solve_subset_sum(&infeasible, Method::Brute).unwrap().is_empty());
    }

    #[test]
    fn limits_are_enforced() {
        let wide = SubsetSumInstance::new(vec![1; 25], 3).unwrap();
        assert!(matches!(solve_subset_sum(&wide, Method::Brute), Err(Error::InstanceTooLarge(_))));
        let tall = SubsetSumInstance::new(vec![1 << 40, 3], 1 << 40).unwrap();
        assert!(matches!(solve_subset_sum(&tall, Method::Dp), Err(Error::InstanceTooLarge(_))));
        assert!(SubsetSumInstance::new(vec![0, 1], 1).is_err());
    }

    #[test]
    fn dp_and_brute_agree_on_feasibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let len = rng.random_range(1..=16);
            let weights: Vec<u64> = (0..len).map(|_| rng.random_range(1..=64)).collect();
            let total: u64 = weights.iter().sum();
            let target = rng.random_range(0..=total);
            let inst = SubsetSumInstance::new(weights, target).unwrap();
            let all = solve_subset_sum(&inst, Method::Brute).unwrap();
            let one = solve_subset_sum(&inst, Method::Dp).unwrap();
            assert_eq!(all.is_empty(), one.is_empty());
            for s in &one {
                assert!(all.contains(s));
            }
        }
    }

    #[test]
    fn modular_instances_match_decode() {
        let pr = params(&[3, 1, 5, 3]);
        for m in 0..16u64 {
            let inst = SubsetSumInstance::from_params(&pr, m, true).unwrap();
            let brute = solve_subset_sum(&inst, Method::Brute).unwrap();
            let dp = solve_subset_sum(&inst, Method::Dp).unwrap();
            let decoded = decode(&pr, &BigInt::from(m), true);
            assert_eq!(brute.len(), 1);
            assert_eq!(dp, brute);
            assert_eq!(subset_to_quantum_numbers(&brute[0], 4), decoded[0]);
        }
    }

    #[test]
    fn itinerary_walks_the_residues() {
        for p in [vec![1, 1, 1], vec![3, 5, 1, 3, 1], vec![5, 3, 3, 1, 1, 7, 1, 3]] {
            let pr = params(&p);
            let d = slope(&pr);
            let mut n = QuantumNumbers::zeros(p.len());
            for k in 0..pr.dim() {
                let m = BigInt::from(k) * &d;
                assert_eq!(decode(&pr, &m, true), vec![n.clone()], "p={p:?} k={k}");
                n = sr_full(&pr, &n).s;
            }
        }
    }

    #[test]
    fn dp_table_is_reusable() {
        let table = DpTable::build(&[3, 2, 4], 9).unwrap();
        assert_eq!(table.cells(), 40);
        assert_eq!(table.witness(7), Some(vec![0, 2]));
        assert_eq!(table.witness(8), None);
        assert!(table.reachable(9));
        assert!(!table.reachable(10));
    }

    #[test]
    fn gap_examples() {
        assert!((spectral_gap(&params(&[1, 1, 1])).unwrap() - TAU / 8.0).abs() < 1e-15);
        assert!((spectral_gap(&params(&[4])).unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!(spectral_gap(&params(&[1, 2])).is_err());
        let pr = params(&[3, 1, 5, 1]);
        let u = crate::circuits::build_un(0.37, &pr).unwrap();
        let gap = min_circular_gap(eig_unitary(&u, 1e-9).unwrap().angles());
        assert!((gap - spectral_gap(&pr).unwrap()).abs() < 1e-10);
    }
}
