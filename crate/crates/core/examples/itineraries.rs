//! Where each eigenstate goes after one cycle, iterated, and the explicit
//! formulas that predict it for three parameter families.

use std::error::Error;

use anholonomy::circuits::CircuitParams;
use anholonomy::spectral::{closed_form_sr, itinerary, sr_full, Family, QuantumNumbers};

fn show(p: &[i64], start: &str, steps: usize) -> Result<(), Box<dyn Error>> {
    let params = CircuitParams::new(p.to_vec())?;
    let path = itinerary(&params, &start.parse()?, steps)?;
    let text: Vec<String> = path.iter().map(|n| n.to_string()).collect();
    println!("p = {p:?}: {}", text.join(" -> "));
    Ok(())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    show(&[1, 1, 1], "000", 8)?;
    show(&[2, 1, 1], "000", 4)?;
    show(&[2, 1, 1], "001", 4)?;
    show(&[3, 1, 1], "000", 8)?;
    show(&[1, 3, 1], "000", 8)?;

    for family in [Family::Simplest, Family::EvenP1, Family::Impurity { j: 2, k: 2 }] {
        let params = family.params(6);
        let agree = QuantumNumbers::all(6)
            .filter(|n| closed_form_sr(&params, n, family).ok() == Some(sr_full(&params, n)))
            .count();
        println!("{family:?} at N = 6: closed form matches the recursion on {agree}/64 states");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("itineraries example");
}
