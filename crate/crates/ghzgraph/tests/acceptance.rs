//! Acceptance suite. Each check prints one PASS/FAIL line; the process exits
//! nonzero if any check fails. Runs without the libtest harness so the lines
//! are never captured.

use std::time::Instant;

use ghzgraph::commands::{self, Format};
use ghzgraph::graph_file;
use ghzgraph_core::concat::random_state;
use ghzgraph_core::ghz::{Corruption, GhzLayout};
use ghzgraph_core::{
    Blocking, ChannelEvent, CodeGraph, ConcatScheme, DensityMatrix, FpVector, NoiseModel,
    PauliError, Prime, StateVector,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type CheckFn = fn() -> Check;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn shipped_graph() -> CodeGraph {
    graph_file::parse_graph(graph_file::FIVE_QUBIT_DECODING).expect("shipped graph parses")
}

fn basis(x: usize) -> StateVector {
    StateVector::basis_state(Prime::TWO, &FpVector::from_index(Prime::TWO, 1, x)).unwrap()
}

fn ac1_admissibility() -> Check {
    let g = shipped_graph();
    let start = Instant::now();
    let report = g.check_admissibility(1).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    for (name, pass) in report.conditions() {
        ensure!(pass, "{name} fails");
    }
    ensure!(secs < 1.0, "took {secs:.3}s");
    Ok(format!("C1-C5 pass in {:.1} ms", secs * 1e3))
}

#[rustfmt::skip]
const LAMBDA_SIGNS: [(i8, i8); 32] = [
    (1, 1), (1, 1), (1, 1), (-1, -1),
    (1, -1), (-1, 1), (-1, 1), (-1, 1),
    (1, -1), (-1, 1), (1, -1), (1, -1),
    (1, 1), (1, 1), (-1, -1), (1, 1),
    (1, -1), (1, -1), (-1, 1), (1, -1),
    (1, 1), (-1, -1), (1, 1), (1, 1),
    (-1, -1), (1, 1), (1, 1), (1, 1),
    (-1, 1), (-1, 1), (-1, 1), (1, -1),
];

fn ac2_codewords() -> Check {
    let g = shipped_graph().without_syndromes();
    let words = [g.encode(&basis(0)).unwrap(), g.encode(&basis(1)).unwrap()];
    ensure!(words[0].dim() == 32, "dimension {}", words[0].dim());
    let scale = words[0].amplitude(0).re.abs();
    for (i, &(s0, s1)) in LAMBDA_SIGNS.iter().enumerate() {
        for (w, s) in words.iter().zip([s0, s1]) {
            let want = Complex64::new(s as f64 * scale, 0.0);
            ensure!(
                (w.amplitude(i) - want).norm() < 1e-10,
                "lambda_{i}: {} vs {want}",
                w.amplitude(i)
            );
        }
    }
    Ok("32 amplitudes match".into())
}

fn ac3_syndrome_table() -> Check {
    let golden = include_str!("golden/syndrome_table.records");
    let out = commands::syndrome_table(&shipped_graph(), false, Format::Records)
        .map_err(|e| e.to_string())?;
    ensure!(
        out.text.lines().count() == 16,
        "{} rows",
        out.text.lines().count()
    );
    for (got, want) in out.text.lines().zip(golden.lines()) {
        ensure!(got == want, "got `{got}`, want `{want}`");
    }
    ensure!(out.text == golden, "output differs from golden file");
    ensure!(
        out.text
            .contains("syndrome=0110 error=B1 state=c(0)|0>-c(1)|1> correction=S5"),
        "B1 row missing"
    );
    Ok("16 rows equal the golden file".into())
}

#[rustfmt::skip]
const RECOVERY: [&str; 10] = [
    "T1'5'4Z5'4T1'5'4C2'2C3'3C4'4C1'2C1'3C1'4C1'5",
    "T2'5'3Z5'3T2'5'3C1'1C3'3C4'4C2'1C2'3C2'4C2'5",
    "T3'5'2Z5'2T3'5'2C1'1C2'2C4'4C3'1C3'2C3'4C3'5",
    "T4'5'1Z5'1T4'5'1C1'1C2'2C3'3C4'1C4'2C4'3C4'5",
    "Z5'4C1'1C2'2C3'3C4'4",
    "T154'Z54'T154'C22'C33'C44'C12'C13'C14'C15'",
    "T253'Z53'T253'C11'C33'C44'C21'C23'C24'C25'",
    "T352'Z52'T352'C11'C22'C44'C31'C32'C34'C35'",
    "T451'Z51'T451'C11'C22'C33'C41'C42'C43'C45'",
    "Z54'C11'C22'C33'C44'",
];

fn ac4_ghz_programs() -> Check {
    let l = GhzLayout::new(5).unwrap();
    let enc = l.build_encoder().notation(&l);
    ensure!(
        enc == "C5'4'C5'3'C5'2'C5'1'C54C53C52C51H5'H5C55'C44'C33'C22'C11'",
        "encoder {enc}"
    );
    for (a, want) in RECOVERY.iter().enumerate() {
        let dec = l.build_decoder(a).unwrap().notation(&l);
        let want_dec = if a < 5 {
            "H5'C5'4'C5'3'C5'2'C5'1'"
        } else {
            "H5C54C53C52C51"
        };
        ensure!(dec == want_dec, "decoder {}: {dec}", l.label(a));
        let rec = l.build_recovery(a).unwrap().notation(&l);
        ensure!(rec == *want, "recovery {}: {rec}", l.label(a));
    }
    let psi = random_state(Prime::TWO, 5, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    let enc = l.encode(&psi).unwrap();
    let half = DensityMatrix::maximally_mixed(2);
    let mut worst = 0.0f64;
    for q in 0..10 {
        worst = worst.max(enc.reduced_density(q).unwrap().max_abs_diff(&half));
    }
    ensure!(worst < 1e-10, "reduced state deviates by {worst:e}");
    Ok(format!(
        "21 program strings match; max |rho - I/2| = {worst:.1e}"
    ))
}

fn ac5_worked_example() -> Check {
    let g = shipped_graph();
    let out =
        commands::worked_example(&g, "1", "B1'", 7, Format::Records).map_err(|e| e.to_string())?;
    ensure!(
        out.text
            == "erasure=1 error=B1' recovered=B1 syndrome=0110 correction=S5 fidelity=1.000000\n",
        "unexpected trace {}",
        out.text
    );
    let scheme = ConcatScheme::new(g.clone(), Blocking::WholeRegister).unwrap();
    let layout = *scheme.inner();
    let flip = PauliError::single(Prime::TWO, 10, layout.address("1'").unwrap(), 1, 0).unwrap();
    let event = ChannelEvent {
        erasure: Some((
            layout.address("1").unwrap(),
            Corruption::RandomUnitary { seed: 7 },
        )),
        physical: Some(flip),
        outer: None,
    };
    let c = random_state(Prime::TWO, 1, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    let trace = scheme.run(&c, &event).map_err(|e| e.to_string())?;
    ensure!(
        trace.syndrome.to_string() == "0110",
        "syndrome {}",
        trace.syndrome
    );
    let f = trace.logical.fidelity_up_to_phase(&c).unwrap();
    ensure!((f - 1.0).abs() < 1e-10, "fidelity {f}");
    // the recovered register is the codeword with its first bit flipped
    for x in 0..2 {
        let trace = scheme.run(&basis(x), &event).map_err(|e| e.to_string())?;
        let word = g.without_syndromes().encode(&basis(x)).unwrap();
        let want: Vec<Complex64> = (0..32).map(|i| word.amplitude(i ^ 0b10000)).collect();
        let want = StateVector::from_amplitudes(Prime::TWO, 5, want).unwrap();
        let mut got = trace.recovered_outer.clone();
        got.align_phase_to(&want).unwrap();
        let d = got.max_abs_diff(&want).unwrap();
        ensure!(d < 1e-10, "input {x}: recovered register off by {d:e}");
    }
    Ok(format!("syndrome 0110, correction S5, fidelity {f:.12}"))
}

fn ac6_joint_protection() -> Check {
    let scheme = ConcatScheme::new(shipped_graph(), Blocking::WholeRegister).unwrap();
    let mut corruptions = vec![
        Corruption::Identity,
        Corruption::x(),
        Corruption::y(),
        Corruption::z(),
    ];
    corruptions.extend((0..5).map(|seed| Corruption::RandomUnitary { seed: 100 + seed }));
    let mut outer = Vec::new();
    for q in 0..5 {
        for (b, s) in [(1, 0), (0, 1), (1, 1)] {
            outer.push(PauliError::single(Prime::TWO, 5, q, b, s).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();
    let (mut cases, mut worst) = (0usize, 1.0f64);
    for erased in 0..10 {
        for corr in &corruptions {
            for e in &outer {
                let c = random_state(Prime::TWO, 1, &mut rng).unwrap();
                let event = ChannelEvent {
                    erasure: Some((erased, corr.clone())),
                    physical: None,
                    outer: Some(e.clone()),
                };
                let trace = scheme
                    .run(&c, &event)
                    .map_err(|err| format!("erasure {erased} {corr} {e}: {err}"))?;
                let f = trace.logical.fidelity_up_to_phase(&c).unwrap();
                ensure!(
                    (f - 1.0).abs() < 1e-10,
                    "erasure {erased} {corr} {e}: fidelity {f}"
                );
                worst = worst.min(f);
                cases += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(cases == 1350, "{cases} cases");
    ensure!(secs < 60.0, "took {secs:.1}s");
    Ok(format!(
        "{cases} cases, min fidelity {worst:.12}, {secs:.2}s"
    ))
}

type Dense = Vec<Vec<Complex64>>;

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (ra, rb) = (a.len(), b.len());
    (0..ra * rb)
        .map(|r| {
            (0..ra * rb)
                .map(|c| a[r / rb][c / rb] * b[r % rb][c % rb])
                .collect()
        })
        .collect()
}

fn site_op(n: usize, ops: &[(usize, [[f64; 2]; 2])]) -> Dense {
    let eye = [[1.0, 0.0], [0.0, 1.0]];
    (0..n).fold(vec![vec![Complex64::new(1.0, 0.0)]], |acc, q| {
        let m = ops.iter().find(|(s, _)| *s == q).map_or(eye, |(_, m)| *m);
        kron(
            &acc,
            &m.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    })
}

fn sum(a: Dense, b: Dense) -> Dense {
    a.into_iter()
        .zip(b)
        .map(|(x, y)| x.into_iter().zip(y).map(|(u, v)| u + v).collect())
        .collect()
}

fn ac7_oracles() -> Check {
    const P0: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 0.0]];
    const P1: [[f64; 2]; 2] = [[0.0, 0.0], [0.0, 1.0]];
    const X: [[f64; 2]; 2] = [[0.0, 1.0], [1.0, 0.0]];
    const Z: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, -1.0]];
    const I: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let hm = [[h, h], [h, -h]];
    let mut worst = 0.0f64;
    let mut gates = 0;
    for n in 1..=4usize {
        let psi = random_state(Prime::TWO, n, &mut ChaCha8Rng::seed_from_u64(n as u64)).unwrap();
        let mut check = |dense: Dense, kernel: &dyn Fn(&mut StateVector)| {
            let mut s = psi.clone();
            kernel(&mut s);
            for (row, got) in dense.iter().zip(s.amplitudes()) {
                let want: Complex64 = row.iter().zip(psi.amplitudes()).map(|(m, v)| m * v).sum();
                worst = worst.max((want - got).norm());
            }
            gates += 1;
        };
        for q in 0..n {
            check(site_op(n, &[(q, hm)]), &|s| s.apply_hadamard(q).unwrap());
            for (b, s, m) in [(1, 0, X), (0, 1, Z)] {
                check(site_op(n, &[(q, m)]), &|st| {
                    st.apply_pauli(q, b, s).unwrap()
                });
            }
        }
        for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                check(
                    sum(site_op(n, &[(a, P0)]), site_op(n, &[(a, P1), (b, X)])),
                    &|s| s.apply_cnot(a, b).unwrap(),
                );
                check(
                    sum(site_op(n, &[(a, P0)]), site_op(n, &[(a, P1), (b, Z)])),
                    &|s| s.apply_cz(a, b).unwrap(),
                );
                for t in (0..n).filter(|&t| t != a && t != b) {
                    let dense = [(P0, P0, I), (P0, P1, I), (P1, P0, I), (P1, P1, X)]
                        .into_iter()
                        .map(|(pa, pb, m)| site_op(n, &[(a, pa), (b, pb), (t, m)]))
                        .reduce(sum)
                        .unwrap();
                    check(dense, &|s| s.apply_toffoli(a, b, t).unwrap());
                }
            }
        }
    }
    ensure!(worst < 1e-12, "kernel deviation {worst:e}");
    let t = shipped_graph()
        .decoder_unitary()
        .map_err(|e| e.to_string())?;
    let defect = t.unitarity_defect();
    ensure!(defect < 1e-12, "unitarity defect {defect:e}");
    Ok(format!(
        "{gates} gate placements, max deviation {worst:.1e}; |T^H T - I| = {defect:.1e}"
    ))
}

fn ac8_determinism() -> Check {
    let g = shipped_graph();
    let run = || -> Result<String, String> {
        let table =
            commands::syndrome_table(&g, false, Format::Records).map_err(|e| e.to_string())?;
        let mc = commands::monte_carlo(
            &g,
            NoiseModel::TwoPaulis,
            Blocking::WholeRegister,
            40,
            77,
            Format::Records,
        )
        .map_err(|e| e.to_string())?;
        Ok(table.text + &mc.text)
    };
    let first = run()?;
    for i in 1..3 {
        ensure!(run()? == first, "run {} differs", i + 1);
    }
    Ok(format!("3 runs, {} identical bytes", first.len()))
}

fn main() {
    let checks: [(&str, CheckFn); 8] = [
        ("AC1 admissibility", ac1_admissibility),
        ("AC2 codeword amplitudes", ac2_codewords),
        ("AC3 syndrome table", ac3_syndrome_table),
        ("AC4 GHZ programs and data hiding", ac4_ghz_programs),
        ("AC5 erasure plus bit flip", ac5_worked_example),
        ("AC6 joint protection sweep", ac6_joint_protection),
        ("AC7 dense oracles", ac7_oracles),
        ("AC8 determinism", ac8_determinism),
    ];
    let mut failed = Vec::new();
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
