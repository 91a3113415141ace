//! Reading the quantum numbers off an eigenangle is a subset-sum problem.

use std::error::Error;

use num_bigint::BigInt;

use anholonomy::circuits::CircuitParams;
use anholonomy::subsetsum::{
    decode, solve_counted, spectral_gap, subset_to_quantum_numbers, weights, Method,
    SubsetSumInstance,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = CircuitParams::new(vec![1, 3, 1])?;
    let w: Vec<String> = weights(&params)?.iter().map(|x| x.to_string()).collect();
    println!("weights {w:?}, gap {:.6}", spectral_gap(&params)?);
    for m in 0..8u64 {
        let decoded = decode(&params, &BigInt::from(m), true);
        let instance = SubsetSumInstance::from_params(&params, m, true)?;
        let dp = solve_counted(&instance, Method::Dp)?;
        let via_dp = subset_to_quantum_numbers(&dp.subsets[0], params.qubits());
        println!("m = {m}: decode {} , dp {via_dp} ({} cells)", decoded[0], dp.work);
    }
    let plain = SubsetSumInstance::new(vec![3, 34, 4, 12, 5, 2], 9)?;
    println!("S = {:?}, t = 9: {:?}", plain.weights, solve_counted(&plain, Method::Brute)?.subsets);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("subset_sum example");
}
