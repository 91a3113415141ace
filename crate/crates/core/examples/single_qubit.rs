//! One qubit, one cycle: the eigenangles slide by `pπ` and the eigenvectors
//! come back permuted when `p` is odd.

use std::error::Error;
use std::f64::consts::TAU;

use anholonomy::circuits::{build_u, SingleQubit};
use anholonomy::holonomy::{holonomy_numeric, holonomy_single, SweepOptions};
use anholonomy::linalg::unitary_eigenangles;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for p in 0..=5 {
        let start = unitary_eigenangles(&build_u(0.0, p))?;
        let mid = unitary_eigenangles(&build_u(TAU / 3.0, p))?;
        let (m, trace) = holonomy_numeric(&SingleQubit::new(p), 1024, &SweepOptions::default())?;
        let (perm, sigma) = m.factorize_with_tol(1e-6)?;
        let kind = if perm.is_identity() { "identity" } else { "swap" };
        let err = m.max_abs_diff(&holonomy_single(p));
        println!(
            "p={p}: angles {start:.3?} -> {mid:.3?} at 2pi/3, S = {kind}, sigma = [{:+.0}, {:+.0}], \
             |M - closed form| = {err:.1e}, worst overlap {:.4}",
            sigma[0].re, sigma[1].re, trace.worst_overlap
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("single_qubit example");
}
