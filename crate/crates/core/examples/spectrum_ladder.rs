//! The eigenangles of the N-qubit circuit form an equally spaced ladder that
//! advances by `d_N` rungs per cycle.

use std::error::Error;

use anholonomy::circuits::{build_un, CircuitParams, CycleSpec};
use anholonomy::linalg::{eig_unitary, min_circular_gap};
use anholonomy::spectral::{eigenangle_n, principal_number, slope, QuantumNumbers};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = CircuitParams::new(vec![3, 1, 1])?;
    println!("p = {:?}, d_N = {}", params.p(), slope(&params));
    for n in QuantumNumbers::all(params.qubits()) {
        println!("  n = {n}  m = {}", principal_number(&params, &n).value());
    }
    for lambda in CycleSpec::new(4)?.grid() {
        let frame = eig_unitary(&build_un(lambda, &params)?, 1e-9)?;
        let mut analytic: Vec<f64> = QuantumNumbers::all(3)
            .map(|n| eigenangle_n(&params, &n, lambda))
            .collect();
        analytic.sort_by(f64::total_cmp);
        println!(
            "lambda = {lambda:.3}: gap {:.6}, unreduced analytic angles {analytic:.3?}",
            min_circular_gap(frame.angles())
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("spectrum_ladder example");
}
