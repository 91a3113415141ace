//! The winding number of det U around the cycle, by quadrature and by formula.
//! The path with an eigenvalue crossing winds just the same.

use std::error::Error;

use anholonomy::circuits::{CircuitParams, DegeneratePath, HierarchicalCircuit, SingleQubit};
use anholonomy::holonomy::{winding_number, winding_number_analytic, winding_quadrature};
use anholonomy::spectral::winding_sum;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for p in 0..=4 {
        println!(
            "p = {p}: nu(u) = {}, nu(u_Y) = {}",
            winding_number(&SingleQubit::new(p), 512)?,
            winding_number(&DegeneratePath::new(p), 512)?
        );
    }
    for p in [vec![1, 1, 1], vec![3, 1, 1], vec![3, 5, 3, 1]] {
        let params = CircuitParams::new(p.clone())?;
        let circuit = HierarchicalCircuit::new(params.clone())?;
        println!(
            "p = {p:?}: quadrature {:.8}, d_N = {}, sum of r = {}",
            winding_quadrature(&circuit, 1024)?,
            winding_number_analytic(&params),
            winding_sum(&params)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("winding example");
}
