//! Scanning a cycle for eigenangle crossings: absent for odd upper parameters,
//! everywhere when some upper parameter is even, and isolated on the u_Y path.

use std::error::Error;

use anholonomy::circuits::{CircuitParams, CycleSpec, DegeneratePath, HierarchicalCircuit};
use anholonomy::holonomy::degeneracy_scan;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = CycleSpec::new(64)?.grid();
    for p in [vec![1, 1, 1], vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 4]] {
        let params = CircuitParams::new(p.clone())?;
        let windows = degeneracy_scan(&HierarchicalCircuit::new(params.clone())?, &grid);
        println!(
            "p = {p:?}: predicted degenerate = {}, windows found = {}",
            params.degenerate_spectrum(),
            windows.len()
        );
    }
    for p in [1, 3] {
        for w in degeneracy_scan(&DegeneratePath::new(p), &CycleSpec::new(63)?.grid()) {
            println!("u_Y, p = {p}: crossing at lambda = {:.9} (gap {:.1e})", w.at, w.min_gap);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("degeneracy example");
}
