//! The holonomy matrix three ways: integer product form, element recursion,
//! and numeric parallel transport. Then its canonical gauge.

use std::error::Error;

use anholonomy::circuits::{CircuitParams, HierarchicalCircuit};
use anholonomy::holonomy::{
    canonical_gauge, holonomy_analytic, holonomy_analytic_exact, holonomy_numeric_circuit,
    holonomy_recursive_exact,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = CircuitParams::new(vec![1, 3, 1])?;
    let exact = holonomy_analytic_exact(&params)?;
    println!("image of m under one cycle: {:?}", exact.image);
    println!("sigma: {:?}", exact.sign);
    println!("element recursion agrees: {}", exact == holonomy_recursive_exact(&params)?);

    let circuit = HierarchicalCircuit::new(params.clone())?;
    let (numeric, trace) = holonomy_numeric_circuit(&circuit, 1024)?;
    let analytic = holonomy_analytic(&params)?;
    println!(
        "numeric sweep ({} steps): max |M_num - M| = {:.2e}",
        trace.steps(),
        numeric.max_abs_diff(&analytic)
    );

    let canonical = canonical_gauge(&analytic)?;
    for block in &canonical.blocks {
        println!("cycle {:?}, gamma = {:.6}", block.cycle, block.gamma);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("holonomy_recursion example");
}
