//! Driving the library through the config format the command-line tool reads.

use std::error::Error;

use anholonomy::cli::{emit_report, parse_config, parse_report, run, Format, Subcommand};
use anholonomy::holonomy::holonomy_report;

const CONFIG: &str = "\
# three qubits with an impurity on the second
qubits = 3
p = [1, 3, 1]
steps = 256
format = csv
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let config = parse_config(CONFIG)?;
    for command in [Subcommand::Itinerary, Subcommand::Winding, Subcommand::Verify] {
        let out = run(command, &config)?;
        println!("== {command:?} (success: {})", out.success);
        print!("{}", String::from_utf8(out.bytes)?);
    }
    let report = holonomy_report(&config.params, config.steps, config.max_qubits)?;
    let json = String::from_utf8(emit_report(&report, Format::Json))?;
    print!("{json}");
    let back = parse_report(&json)?;
    println!("round trip keeps the permutation: {}", back.permutation == report.permutation);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("config_report example");
}
