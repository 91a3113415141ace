//! Acceptance suite. Each criterion prints one `[PASS]` or `[FAIL]` line with
//! its pinned tolerance and runtime budget; the process fails if any does.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use anholonomy::circuits::{build_un, CircuitParams, CycleSpec, DegeneratePath, HierarchicalCircuit, SingleQubit};
use anholonomy::cli::{parse_config, Overrides};
use anholonomy::holonomy::{
    berry_phase_extended_cycle, commutator_identity_holds, degeneracy_scan, gamma_analytic,
    gamma_from_sigma, gamma_per_cycle, gauge_transform, holonomy_analytic, holonomy_analytic_exact,
    holonomy_numeric, holonomy_numeric_circuit, holonomy_recursive_exact, holonomy_single,
    winding_number, winding_quadrature, HolonomyMatrix, SweepOptions,
};
use anholonomy::linalg::{circular_distance, cycle_decompose, eig_unitary, min_circular_gap};
use anholonomy::spectral::{
    closed_form_sr, eigenangle_n, itinerary, principal_number, slope, sr_full, Family,
    QuantumNumbers,
};
use anholonomy::subsetsum::{decode, subset_to_quantum_numbers, DpTable, SubsetSumInstance};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn params(p: &[i64]) -> CircuitParams {
    CircuitParams::new(p.to_vec()).expect("nonempty p")
}

/// Every tuple in `values^n`.
fn grid_of(values: &[i64], n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

fn all_up_to(values: &[i64], max_n: usize) -> Vec<Vec<i64>> {
    (1..=max_n).flat_map(|n| grid_of(values, n)).collect()
}

fn run(id: u32, name: &str, budget: Option<Duration>, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body))
        .unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
    let elapsed = start.elapsed();
    let outcome = match (outcome, budget) {
        (Ok(detail), Some(limit)) if elapsed >= limit => {
            Err(format!("{detail}; runtime {:.2}s exceeds {:.0}s budget", elapsed.as_secs_f64(), limit.as_secs_f64()))
        }
        (o, _) => o,
    };
    let budget = budget.map_or(String::new(), |b| format!(" / {:.0}s", b.as_secs_f64()));
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("[{tag}] C{id:<2} {name}: {detail} [{:.2}s{budget}]", elapsed.as_secs_f64());
    outcome.is_ok()
}

const C1_STEPS: usize = 4096;
const C1_TOL: f64 = 1e-6;

fn c1_single_qubit() -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for p in 0..=5i64 {
        let start = Instant::now();
        let circuit = HierarchicalCircuit::new(params(&[p])).map_err(err)?;
        let (m, _) = holonomy_numeric_circuit(&circuit, C1_STEPS).map_err(err)?;
        let (perm, _) = m.factorize_with_tol(C1_TOL).map_err(err)?;
        let expect_swap = p % 2 == 1;
        ensure(perm.is_identity() != expect_swap, || {
            format!("p={p}: permutation {:?}, expected {}", perm.image(), if expect_swap { "swap" } else { "identity" })
        })?;
        let diff = m.max_abs_diff(&holonomy_single(p));
        ensure(diff <= C1_TOL, || format!("p={p}: |M - closed form| = {diff:.2e} > {C1_TOL:.0e}"))?;
        worst = worst.max(diff);
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(1), || format!("p={p} took {:.2}s", elapsed.as_secs_f64()))?;
        slowest = slowest.max(elapsed);
    }
    Ok(format!(
        "identity for even p, swap for odd p in 0..=5; max |M - closed form| = {worst:.1e} <= {C1_TOL:.0e} at {C1_STEPS} steps; slowest p {:.3}s < 1s",
        slowest.as_secs_f64()
    ))
}

const C2_POINTS: usize = 128;
const C2_TOL: f64 = 1e-10;

fn c2_spectrum_ladder() -> Outcome {
    let pr = params(&[1, 1, 1]);
    let states: Vec<QuantumNumbers> = QuantumNumbers::all(3).collect();
    let expected_gap = TAU / 8.0;
    let (mut worst_angle, mut worst_gap) = (0.0f64, 0.0f64);
    for k in 0..C2_POINTS {
        let lambda = TAU * k as f64 / C2_POINTS as f64;
        let frame = eig_unitary(&build_un(lambda, &pr).map_err(err)?, 1e-8).map_err(err)?;
        let mut numeric: Vec<f64> = frame.angles().iter().map(|a| a.rem_euclid(TAU)).collect();
        let mut analytic: Vec<f64> =
            states.iter().map(|n| eigenangle_n(&pr, n, lambda).rem_euclid(TAU)).collect();
        numeric.sort_by(f64::total_cmp);
        analytic.sort_by(f64::total_cmp);
        // Sorted lists can be rotated by one slot when an angle sits at the 0/2π cut.
        let best = (0..8)
            .map(|shift| {
                (0..8)
                    .map(|i| circular_distance(numeric[i], analytic[(i + shift) % 8]))
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        worst_angle = worst_angle.max(best);
        for i in 0..8 {
            let gap = circular_distance(numeric[i], numeric[(i + 1) % 8]);
            worst_gap = worst_gap.max((gap - expected_gap).abs());
        }
        worst_gap = worst_gap.max((min_circular_gap(&numeric) - expected_gap).abs());
    }
    ensure(worst_angle <= C2_TOL, || format!("max eigenangle error {worst_angle:.2e} > {C2_TOL:.0e}"))?;
    ensure(worst_gap <= C2_TOL, || format!("max gap deviation {worst_gap:.2e} > {C2_TOL:.0e}"))?;
    Ok(format!(
        "p=[1,1,1], {C2_POINTS} points: max angle error {worst_angle:.1e}, max |gap - 2pi/8| {worst_gap:.1e} (tol {C2_TOL:.0e})"
    ))
}

fn c3_itineraries() -> Outcome {
    let goldens: [(&[i64], &str, &[&str]); 5] = [
        (&[1, 1, 1], "000", &["000", "001", "010", "011", "100", "101", "110", "111", "000"]),
        (&[2, 1, 1], "000", &["000", "010", "100", "110", "000"]),
        (&[2, 1, 1], "001", &["001", "011", "101", "111", "001"]),
        (&[3, 1, 1], "000", &["000", "011", "110", "001", "100", "111", "010", "101", "000"]),
        (&[1, 3, 1], "000", &["000", "001", "110", "111", "100", "101", "010", "011", "000"]),
    ];
    for (p, start, expected) in goldens {
        let start: QuantumNumbers = start.parse().map_err(err)?;
        let got: Vec<String> = itinerary(&params(p), &start, expected.len() - 1)
            .map_err(err)?
            .iter()
            .map(|n| n.to_string())
            .collect();
        ensure(got == expected, || format!("p={p:?}: got {got:?}, expected {expected:?}"))?;
    }
    Ok("binary increment, two 4-cycles for p=[2,1,1], p=[3,1,1] and p=[1,3,1] reproduced exactly".into())
}

fn c4_closed_forms() -> Outcome {
    let mut cases = 0usize;
    let mut families: Vec<(Family, usize)> = vec![(Family::Simplest, 1), (Family::EvenP1, 1)];
    for j in 1..=4 {
        for k in 1..=3u32 {
            families.push((Family::Impurity { j, k }, j + k as usize));
        }
    }
    for (family, min_n) in families {
        for n in min_n..=10 {
            let pr = family.params(n);
            for q in QuantumNumbers::all(n) {
                let closed = closed_form_sr(&pr, &q, family).map_err(err)?;
                let recursive = sr_full(&pr, &q);
                ensure(closed == recursive, || {
                    format!("{family:?}, N={n}, n={q}: closed {closed:?} != recursion {recursive:?}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!(
        "closed_form_sr == sr_full on {cases} inputs (simplest, even p1, impurities J<=4, K<=3; N<=10)"
    ))
}

const C5_STEPS: usize = 4096;
const C5_TOL: f64 = 1e-6;

fn c5_holonomy_numerics() -> Outcome {
    let mut worst = 0.0f64;
    let cases = all_up_to(&[1, 3], 4);
    for p in &cases {
        let pr = params(p);
        let analytic = holonomy_analytic(&pr).map_err(err)?;
        let circuit = HierarchicalCircuit::new(pr).map_err(err)?;
        let (numeric, _) = holonomy_numeric_circuit(&circuit, C5_STEPS).map_err(err)?;
        let diff = numeric.max_abs_diff(&analytic);
        ensure(diff <= C5_TOL, || format!("p={p:?}: max diff {diff:.2e} > {C5_TOL:.0e}"))?;
        worst = worst.max(diff);
    }
    Ok(format!(
        "{} parameter sets p in {{1,3}}^N, N<=4: max |analytic - numeric| = {worst:.1e} <= {C5_TOL:.0e} at {C5_STEPS} steps",
        cases.len()
    ))
}

const C6_STEPS: usize = 2048;
const C6_TOL: f64 = 1e-4;

fn c6_geometric_phase() -> Outcome {
    let mut worst = 0.0f64;
    let cases = all_up_to(&[1, 3, 5], 4);
    for p in &cases {
        let pr = params(p);
        let from_sigma = gamma_from_sigma(&pr).map_err(err)?;
        let from_parity = gamma_analytic(&pr).map_err(err)?;
        let circuit = HierarchicalCircuit::new(pr.clone()).map_err(err)?;
        let berry = berry_phase_extended_cycle(&circuit, C6_STEPS, 0, pr.dim()).map_err(err)?;
        for (route, value) in [("det sigma", from_sigma), ("(-1)^d_N", from_parity), ("Berry", berry)] {
            let d = circular_distance(value, PI);
            ensure(d <= C6_TOL, || format!("p={p:?}: {route} gives {value:.6}, off pi by {d:.2e}"))?;
            worst = worst.max(d);
        }
    }
    Ok(format!(
        "gamma = pi by det sigma, (-1)^d_N and extended-cycle Berry phase for {} all-odd p in {{1,3,5}}^N, N<=4; max deviation {worst:.1e} <= {C6_TOL:.0e}",
        cases.len()
    ))
}

const C7_STEPS: usize = 2048;
const C7_TOL: f64 = 0.05;

fn c7_winding() -> Outcome {
    let mut worst = 0.0f64;
    let mut check = |label: String, family: &dyn anholonomy::circuits::UnitaryFamily, expected: i64| -> Result<(), String> {
        let value = winding_quadrature(family, C7_STEPS).map_err(err)?;
        let rounded = winding_number(family, C7_STEPS).map_err(err)?;
        let off = (value - expected as f64).abs();
        ensure(rounded == expected && off <= C7_TOL, || {
            format!("{label}: quadrature {value:.6}, rounded {rounded}, expected {expected}")
        })?;
        worst = worst.max(off);
        Ok(())
    };
    for p in 0..=4 {
        check(format!("u(p={p})"), &SingleQubit::new(p), p)?;
        check(format!("u_Y(p={p})"), &DegeneratePath::new(p), p)?;
    }
    let cases = all_up_to(&[1, 3], 5);
    for p in &cases {
        let pr = params(p);
        let d = slope(&pr).to_i64().ok_or("d_N overflow")?;
        check(format!("U(p={p:?})"), &HierarchicalCircuit::new(pr).map_err(err)?, d)?;
    }
    Ok(format!(
        "nu = p for u and u_Y (p=0..4), nu = d_N for {} all-odd p in {{1,3}}^N, N<=5; max |quadrature - integer| = {worst:.1e} <= {C7_TOL} at {C7_STEPS} steps",
        cases.len()
    ))
}

const C8_POINTS: usize = 64;

fn c8_degeneracy() -> Outcome {
    let grid = CycleSpec::new(C8_POINTS).map_err(err)?.grid();
    let cases = all_up_to(&[1, 2, 3], 4);
    let mut degenerate = 0;
    for p in &cases {
        let circuit = HierarchicalCircuit::new(params(p)).map_err(err)?;
        let found = !degeneracy_scan(&circuit, &grid).is_empty();
        let predicted = p.iter().skip(1).any(|pj| pj % 2 == 0);
        ensure(found == predicted, || format!("p={p:?}: scan found {found}, predicted {predicted}"))?;
        degenerate += found as usize;
    }
    Ok(format!(
        "{} parameter sets in {{1,2,3}}^N, N<=4: scan nonempty exactly for the {degenerate} with an even p_j, j>=2 ({C8_POINTS}-interval grid)",
        cases.len()
    ))
}

fn c9_exact_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut states = 0usize;
    for _ in 0..100 {
        let n = rng.random_range(1..=8usize);
        let p: Vec<i64> = (0..n).map(|_| [1, 3, 5][rng.random_range(0..3usize)]).collect();
        let pr = params(&p);
        ensure(commutator_identity_holds(&pr).map_err(err)?, || format!("p={p:?}: [J_D, M] identity fails"))?;
        let analytic = holonomy_analytic_exact(&pr).map_err(err)?;
        let recursive = holonomy_recursive_exact(&pr).map_err(err)?;
        ensure(analytic == recursive, || format!("p={p:?}: element recursion differs from product form"))?;
        let d = slope(&pr);
        let modulus = BigInt::from(1) << n;
        for q in QuantumNumbers::all(n) {
            let sr = sr_full(&pr, &q);
            let lhs = principal_number(&pr, &sr.s).value().clone();
            let rhs = principal_number(&pr, &q).value() + &d - &modulus * &sr.r;
            ensure(lhs == rhs, || format!("p={p:?}, n={q}: m(s) = {lhs}, m(n) + d - 2^N r = {rhs}"))?;
            states += 1;
        }
    }
    Ok(format!(
        "100 seeded draws, N<=8, p in {{1,3,5}}: commutator identity, element recursion and balance exact on {states} states"
    ))
}

const C10_DRAWS: usize = 20;

fn c10_subset_sum() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut residues = 0usize;
    for draw in 0..C10_DRAWS {
        let n = 12 - draw % 12;
        let p: Vec<i64> = (0..n).map(|_| [1, 3, 5][rng.random_range(0..3usize)]).collect();
        let pr = params(&p);
        let probe = SubsetSumInstance::from_params(&pr, 0, true).map_err(err)?;
        let total = u64::try_from(probe.total()).map_err(err)?;
        let table = DpTable::build(&probe.weights, total).map_err(err)?;
        for m in 0..1u64 << n {
            let decoded: BTreeSet<QuantumNumbers> = decode(&pr, &BigInt::from(m), true).into_iter().collect();
            let instance = SubsetSumInstance::from_params(&pr, m, true).map_err(err)?;
            let via_dp: BTreeSet<QuantumNumbers> =
                table.solve(&instance).iter().map(|s| subset_to_quantum_numbers(s, n)).collect();
            ensure(decoded.len() == 1 && decoded == via_dp, || {
                format!("p={p:?}, m={m}: decode {decoded:?} vs dp {via_dp:?}")
            })?;
            residues += 1;
        }
    }
    Ok(format!(
        "{C10_DRAWS} seeded all-odd draws, N = 12 down to 1: modular decode == dp on all {residues} residues"
    ))
}

const C11_TRIALS: usize = 1000;
const C11_TOL: f64 = 1e-10;

fn c11_gauge_covariance() -> Outcome {
    let mut bases: Vec<HolonomyMatrix> = Vec::new();
    for p in [vec![1], vec![3, 1], vec![1, 3, 1], vec![5, 3, 1, 1], vec![3, 3, 3, 3]] {
        bases.push(holonomy_analytic(&params(&p)).map_err(err)?);
    }
    for p in [vec![2, 1], vec![2, 3, 1]] {
        let (m, _) = holonomy_numeric(&HierarchicalCircuit::new(params(&p)).map_err(err)?, 1024, &SweepOptions::default())
            .map_err(err)?;
        bases.push(m);
    }
    let reference: Vec<_> = bases
        .iter()
        .map(|m| {
            let (perm, sigma) = m.factorize_with_tol(1e-6)?;
            Ok((cycle_decompose(&perm), gamma_per_cycle(&perm, &sigma)))
        })
        .collect::<anholonomy::Result<_>>()
        .map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for trial in 0..C11_TRIALS {
        let which = trial % bases.len();
        let m = &bases[which];
        let phases: Vec<f64> = (0..m.dim()).map(|_| rng.random_range(0.0..TAU)).collect();
        let moved = gauge_transform(m, &phases);
        let (perm, sigma) = moved.factorize_with_tol(1e-6).map_err(err)?;
        let (cycles, blocks) = &reference[which];
        ensure(&cycle_decompose(&perm) == cycles, || format!("trial {trial}: cycle structure changed"))?;
        for (a, b) in gamma_per_cycle(&perm, &sigma).iter().zip(blocks) {
            let d = circular_distance(a.gamma, b.gamma);
            ensure(d <= C11_TOL, || format!("trial {trial}: cycle {:?} product moved by {d:.2e}", a.cycle))?;
            worst = worst.max(d);
        }
    }
    Ok(format!(
        "{C11_TRIALS} random diagonal gauges over {} holonomies: cycles identical, max per-cycle phase shift {worst:.1e} <= {C11_TOL:.0e}",
        bases.len()
    ))
}

const C12_FUZZ: usize = 10_000;

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("anholonomy-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

fn fuzz_input(rng: &mut ChaCha8Rng, seeds: &[&str]) -> String {
    const ALPHABET: &[u8] = b"qubitsp=[],#0123456789-+ \n\tcsvjonformatstepcycles\r.e";
    match rng.random_range(0..4u32) {
        0 => {
            let len = rng.random_range(0..80usize);
            let bytes: Vec<u8> = (0..len).map(|_| rng.random()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        }
        1 => {
            let len = rng.random_range(0..80usize);
            (0..len).map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())] as char).collect()
        }
        2 => {
            let mut chars: Vec<char> = seeds[rng.random_range(0..seeds.len())].chars().collect();
            for _ in 0..rng.random_range(1..6u32) {
                let at = rng.random_range(0..=chars.len());
                match rng.random_range(0..3u32) {
                    0 if at < chars.len() => {
                        chars.remove(at);
                    }
                    1 => chars.insert(at, ALPHABET[rng.random_range(0..ALPHABET.len())] as char),
                    _ if at < chars.len() => chars[at] = rng.random::<u8>() as char,
                    _ => {}
                }
            }
            chars.into_iter().collect()
        }
        _ => {
            let key = ["qubits", "p", "steps", "cycles", "format", "bogus"][rng.random_range(0..6usize)];
            let value = match rng.random_range(0..4u32) {
                0 => rng.random::<i64>().to_string(),
                1 => format!("[{}]", (0..rng.random_range(0..5u32)).map(|_| rng.random::<i32>().to_string()).collect::<Vec<_>>().join(",")),
                2 => "99999999999999999999999999".into(),
                _ => String::new(),
            };
            format!("qubits = 2\np = [1, 3]\n{key} = {value}\n")
        }
    }
}

fn c12_cli() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_anholonomy");
    let dir = scratch_dir();
    let config = dir.join("run.conf");
    std::fs::write(&config, "# acceptance\nqubits = 3\np = [3, 1, 1]\nsteps = 256\ncycles = 8\n").map_err(err)?;
    let subcommands = ["spectrum", "itinerary", "invariants", "holonomy", "winding", "subset-sum", "verify"];
    let mut runs = 0;
    for sub in subcommands {
        for format in ["csv", "json"] {
            let once = || {
                Command::new(bin)
                    .args([sub, "--config", config.to_str().expect("utf-8 path"), "--format", format])
                    .output()
            };
            let (a, b) = (once().map_err(err)?, once().map_err(err)?);
            ensure(a.status.success(), || {
                format!("{sub} --format {format} exited {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr))
            })?;
            ensure(a.stdout == b.stdout && a.status.code() == b.status.code(), || {
                format!("{sub} --format {format}: reruns differ")
            })?;
            ensure(!a.stdout.is_empty(), || format!("{sub} --format {format}: empty output"))?;
            runs += 1;
        }
    }

    let seeds = [
        "qubits = 3\np = [3, 1, 1]\n",
        "# c\nqubits = 2\np = [1, 3]\nsteps = 64\ncycles = 4\nformat = json\n",
        "qubits=1\np=[0]\nformat = csv # trailing\n",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut accepted = 0;
    let mut rejected = Vec::new();
    for case in 0..C12_FUZZ {
        let text = fuzz_input(&mut rng, &seeds);
        let parsed = catch_unwind(AssertUnwindSafe(|| {
            parse_config(&text).map(|c| c.apply(&Overrides::default()).is_ok())
        }))
        .map_err(|_| format!("parser panicked on case {case}: {text:?}"))?;
        match parsed {
            Ok(_) => accepted += 1,
            Err(e) if rejected.len() < 50 => rejected.push((text, e)),
            Err(e) => ensure(e.line >= 1, || format!("case {case}: line 0 in error"))?,
        }
    }
    // A sample of rejected inputs through the binary: structured error, exit 2.
    for (i, (text, _)) in rejected.iter().enumerate() {
        let path = dir.join(format!("fuzz{i}.conf"));
        std::fs::write(&path, text).map_err(err)?;
        let out = Command::new(bin)
            .args(["invariants", "--config", path.to_str().expect("utf-8 path")])
            .output()
            .map_err(err)?;
        let stderr = String::from_utf8_lossy(&out.stderr);
        ensure(out.status.code() == Some(2) && stderr.trim_start().starts_with('{'), || {
            format!("fuzz input {text:?}: exit {:?}, stderr {stderr:?}", out.status.code())
        })?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "{runs} subcommand/format pairs byte-identical on rerun; {C12_FUZZ} fuzz inputs parsed without panic ({accepted} accepted); {} rejected inputs exit 2 with JSON errors",
        rejected.len()
    ))
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "single-qubit invariants", None, c1_single_qubit),
        run(2, "spectrum ladder", Some(secs(5)), c2_spectrum_ladder),
        run(3, "itinerary goldens", Some(secs(1)), c3_itineraries),
        run(4, "closed-form oracle equivalence", Some(secs(10)), c4_closed_forms),
        run(5, "holonomy recursion vs numerics", Some(secs(120)), c5_holonomy_numerics),
        run(6, "geometric phase", None, c6_geometric_phase),
        run(7, "winding number", None, c7_winding),
        run(8, "degeneracy iff", Some(secs(300)), c8_degeneracy),
        run(9, "exact identities", None, c9_exact_identities),
        run(10, "subset-sum equivalence", Some(secs(30)), c10_subset_sum),
        run(11, "gauge covariance", None, c11_gauge_covariance),
        run(12, "cli determinism and parser fuzz", None, c12_cli),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
