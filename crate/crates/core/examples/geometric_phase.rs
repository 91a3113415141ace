//! The off-diagonal geometric phase from det σ, from the parity of d_N, and as
//! an ordinary Berry phase over the cycle repeated until the state returns.

use std::error::Error;

use anholonomy::circuits::{CircuitParams, HierarchicalCircuit};
use anholonomy::holonomy::{berry_phase_extended_cycle, gamma_analytic, gamma_from_sigma};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for p in [vec![1], vec![3], vec![1, 1], vec![3, 1, 5]] {
        let params = CircuitParams::new(p.clone())?;
        let circuit = HierarchicalCircuit::new(params.clone())?;
        let berry = berry_phase_extended_cycle(&circuit, 1024, 0, params.dim())?;
        println!(
            "p = {p:?}: det sigma -> {:.6}, (-1)^d_N -> {:.6}, Berry phase over {} cycles -> {berry:.6}",
            gamma_from_sigma(&params)?,
            gamma_analytic(&params)?,
            params.dim()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("geometric_phase example");
}
