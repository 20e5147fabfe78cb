//! Gate kernels against explicit Kronecker-product matrices.

use ghzgraph_core::{PauliError, Prime, StateVector};
use num_complex::Complex64;
use proptest::prelude::*;

type Matrix = Vec<Vec<Complex64>>;

const TOL: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn identity(d: usize) -> Matrix {
    (0..d)
        .map(|r| (0..d).map(|k| c(if r == k { 1.0 } else { 0.0 })).collect())
        .collect()
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![c(0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect())
        .collect()
}

/// Tensor product with `ops[q]` at each listed site and identity elsewhere.
fn lift(p: usize, n: usize, ops: &[(usize, Matrix)]) -> Matrix {
    (0..n).fold(vec![vec![c(1.0)]], |acc, q| {
        let site = ops
            .iter()
            .find(|(s, _)| *s == q)
            .map_or_else(|| identity(p), |(_, m)| m.clone());
        kron(&acc, &site)
    })
}

fn projector(p: usize, k: usize) -> Matrix {
    let mut m = vec![vec![c(0.0); p]; p];
    m[k][k] = c(1.0);
    m
}

fn shift(p: usize) -> Matrix {
    let mut m = vec![vec![c(0.0); p]; p];
    for a in 0..p {
        m[(a + 1) % p][a] = c(1.0);
    }
    m
}

fn clock(p: usize) -> Matrix {
    let mut m = vec![vec![c(0.0); p]; p];
    for (a, row) in m.iter_mut().enumerate() {
        row[a] = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * a as f64 / p as f64);
    }
    m
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn power(m: &Matrix, k: usize) -> Matrix {
    (0..k).fold(identity(m.len()), |acc, _| matmul(m, &acc))
}

fn hadamard() -> Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![c(s), c(s)], vec![c(s), c(-s)]]
}

fn cnot(n: usize, ctl: usize, tgt: usize) -> Matrix {
    add(
        &lift(2, n, &[(ctl, projector(2, 0))]),
        &lift(2, n, &[(ctl, projector(2, 1)), (tgt, shift(2))]),
    )
}

fn cz(n: usize, ctl: usize, tgt: usize) -> Matrix {
    add(
        &lift(2, n, &[(ctl, projector(2, 0))]),
        &lift(2, n, &[(ctl, projector(2, 1)), (tgt, clock(2))]),
    )
}

fn toffoli(n: usize, a: usize, b: usize, t: usize) -> Matrix {
    let mut m = vec![vec![c(0.0); 1 << n]; 1 << n];
    for (ja, jb) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let target = if ja & jb == 1 { shift(2) } else { identity(2) };
        m = add(
            &m,
            &lift(
                2,
                n,
                &[(a, projector(2, ja)), (b, projector(2, jb)), (t, target)],
            ),
        );
    }
    m
}

fn apply_dense(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn generic_state(p: Prime, n: usize, salt: f64) -> StateVector {
    let dim = p.as_usize().pow(n as u32);
    let amps = (0..dim)
        .map(|i| {
            Complex64::new(
                (1.3 * i as f64 + salt).sin(),
                (0.7 * i as f64 + 2.0 * salt).cos(),
            )
        })
        .collect();
    StateVector::from_amplitudes(p, n, amps)
        .unwrap()
        .normalized()
        .unwrap()
}

fn deviation(kernel: &StateVector, dense: &[Complex64]) -> f64 {
    kernel
        .amplitudes()
        .iter()
        .zip(dense)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

#[test]
fn qubit_gates_match_dense_matrices() {
    let mut worst = 0.0f64;
    for n in 1..=4usize {
        let psi = generic_state(Prime::TWO, n, n as f64);
        for q in 0..n {
            let mut s = psi.clone();
            s.apply_hadamard(q).unwrap();
            worst = worst.max(deviation(
                &s,
                &apply_dense(&lift(2, n, &[(q, hadamard())]), psi.amplitudes()),
            ));
        }
        for a in 0..n {
            for b in (0..n).filter(|&b| b != a) {
                let mut s = psi.clone();
                s.apply_cnot(a, b).unwrap();
                worst = worst.max(deviation(
                    &s,
                    &apply_dense(&cnot(n, a, b), psi.amplitudes()),
                ));
                let mut s = psi.clone();
                s.apply_cz(a, b).unwrap();
                worst = worst.max(deviation(&s, &apply_dense(&cz(n, a, b), psi.amplitudes())));
                for t in (0..n).filter(|&t| t != a && t != b) {
                    let mut s = psi.clone();
                    s.apply_toffoli(a, b, t).unwrap();
                    worst = worst.max(deviation(
                        &s,
                        &apply_dense(&toffoli(n, a, b, t), psi.amplitudes()),
                    ));
                }
            }
        }
    }
    assert!(worst < TOL, "max deviation {worst:e}");
}

#[test]
fn qudit_paulis_match_dense_matrices() {
    let mut worst = 0.0f64;
    for p in [2u32, 3, 5] {
        let prime = Prime::new(p).unwrap();
        let pu = p as usize;
        let max_n = if p == 5 { 2 } else { 4 };
        for n in 1..=max_n {
            let psi = generic_state(prime, n, p as f64);
            for q in 0..n {
                for b in 0..pu {
                    for s in 0..pu {
                        let site = matmul(&power(&shift(pu), b), &power(&clock(pu), s));
                        let dense = apply_dense(&lift(pu, n, &[(q, site)]), psi.amplitudes());
                        let mut v = psi.clone();
                        v.apply_pauli(q, b as u32, s as u32).unwrap();
                        worst = worst.max(deviation(&v, &dense));
                        let mut w = psi.clone();
                        PauliError::single(prime, n, q, b as u32, s as u32)
                            .unwrap()
                            .apply(&mut w)
                            .unwrap();
                        worst = worst.max(deviation(&w, &dense));
                    }
                }
            }
        }
    }
    assert!(worst < TOL, "max deviation {worst:e}");
}

#[test]
fn single_qudit_matrix_matches_dense() {
    let p = Prime::new(3).unwrap();
    let m: Matrix = (0..3)
        .map(|r| {
            (0..3)
                .map(|k| Complex64::new((r * 3 + k) as f64 * 0.1, 0.2 - k as f64 * 0.05))
                .collect()
        })
        .collect();
    let flat: Vec<Complex64> = m.iter().flatten().copied().collect();
    for n in 1..=4 {
        let psi = generic_state(p, n, 0.25);
        for q in 0..n {
            let mut s = psi.clone();
            s.apply_single_qudit(q, &flat).unwrap();
            let dense = apply_dense(&lift(3, n, &[(q, m.clone())]), psi.amplitudes());
            assert!(deviation(&s, &dense) < TOL);
        }
    }
}

#[derive(Clone, Debug)]
enum Op {
    H(usize),
    Cx(usize, usize),
    Ccx(usize, usize, usize),
    Cz(usize, usize),
    Pauli(usize, u32, u32),
}

impl Op {
    fn run(&self, s: &mut StateVector) {
        match *self {
            Op::H(q) => s.apply_hadamard(q),
            Op::Cx(a, b) => s.apply_cnot(a, b),
            Op::Ccx(a, b, t) => s.apply_toffoli(a, b, t),
            Op::Cz(a, b) => s.apply_cz(a, b),
            Op::Pauli(q, b, z) => s.apply_pauli(q, b, z),
        }
        .unwrap()
    }

    fn sites(&self) -> Vec<usize> {
        match *self {
            Op::H(q) | Op::Pauli(q, _, _) => vec![q],
            Op::Cx(a, b) | Op::Cz(a, b) => vec![a, b],
            Op::Ccx(a, b, t) => vec![a, b, t],
        }
    }
}

fn op(n: usize) -> impl Strategy<Value = Op> {
    let distinct = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 3).prop_shuffle();
    (0..5u8, distinct, 0..2u32, 0..2u32).prop_map(|(kind, q, b, s)| match kind {
        0 => Op::H(q[0]),
        1 => Op::Cx(q[0], q[1]),
        2 => Op::Ccx(q[0], q[1], q[2]),
        3 => Op::Cz(q[0], q[1]),
        _ => Op::Pauli(q[0], b, s),
    })
}

proptest! {
    #[test]
    fn gate_sequences_preserve_norm(ops in proptest::collection::vec(op(5), 1..30), salt in 0.0..6.0f64) {
        let mut s = generic_state(Prime::TWO, 5, salt);
        for o in &ops {
            o.run(&mut s);
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gates_on_disjoint_sites_commute(a in op(6), b in op(6), salt in 0.0..6.0f64) {
        prop_assume!(a.sites().iter().all(|q| !b.sites().contains(q)));
        let psi = generic_state(Prime::TWO, 6, salt);
        let (mut ab, mut ba) = (psi.clone(), psi);
        a.run(&mut ab);
        b.run(&mut ab);
        b.run(&mut ba);
        a.run(&mut ba);
        prop_assert!(ab.max_abs_diff(&ba).unwrap() < 1e-12);
    }

    #[test]
    fn reduced_density_is_a_state(salt in 0.0..6.0f64, q in 0..4usize, r in 0..4usize) {
        let psi = generic_state(Prime::new(3).unwrap(), 4, salt);
        let qs: Vec<usize> = if q == r { vec![q] } else { vec![q, r] };
        let rho = psi.reduced_density_of(&qs).unwrap();
        prop_assert!((rho.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(rho.is_hermitian(1e-12));
        prop_assert!(rho.is_positive_semidefinite(1e-10));
        prop_assert!(rho.purity() <= 1.0 + 1e-12);
    }

    #[test]
    fn pauli_composition_matches_sequential_application(
        p in prop::sample::select(vec![2u32, 3, 5]),
        raw in proptest::collection::vec(0u32..5, 14),
        salt in 0.0..6.0f64,
    ) {
        let prime = Prime::new(p).unwrap();
        let digits = |r: &[u32]| ghzgraph_core::FpVector::new(prime, r.iter().map(|d| d % p).collect()).unwrap();
        let e1 = PauliError::new(raw[0] % p, &digits(&raw[1..4]), &digits(&raw[4..7])).unwrap();
        let e2 = PauliError::new(raw[7] % p, &digits(&raw[8..11]), &digits(&raw[11..14])).unwrap();
        let psi = generic_state(prime, 3, salt);
        let mut seq = psi.clone();
        e1.apply(&mut seq).unwrap();
        e2.apply(&mut seq).unwrap();
        let mut joint = psi.clone();
        e1.then(&e2).unwrap().apply(&mut joint).unwrap();
        prop_assert!(seq.max_abs_diff(&joint).unwrap() < 1e-12);
        let mut back = seq;
        e1.then(&e2).unwrap().inverse().apply(&mut back).unwrap();
        prop_assert!(back.max_abs_diff(&psi).unwrap() < 1e-12);
    }
}
