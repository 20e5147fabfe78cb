//! Erasure code built from pairs of GHZ states.
//!
//! `n` message qubits sit at addresses `0..n` (labelled `1..n`) and `n`
//! ancillas at `n..2n` (labelled `1'..n'`). Programs are stored in written
//! order, as products of operators, and run from right to left.
//!
//! After one erasure at a known address, the decoder turns the intact side
//! into basis flags and the recovery program moves the logical content onto
//! the intact side. Neither program touches the erased qubit.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::fp::Prime;
use crate::statevec::StateVector;

/// Minimum purity of the recovered side.
pub const PURITY_THRESHOLD: f64 = 1.0 - 1e-9;

/// Maps a one-based position to an address on one side.
type Addressing = fn(&GhzLayout, usize) -> usize;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    Cx { control: usize, target: usize },
    Ccx { c1: usize, c2: usize, target: usize },
    Cz { control: usize, target: usize },
}

impl Gate {
    pub fn addresses(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) => vec![q],
            Gate::Cx { control, target } | Gate::Cz { control, target } => vec![control, target],
            Gate::Ccx { c1, c2, target } => vec![c1, c2, target],
        }
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        match *self {
            Gate::H(q) => state.apply_hadamard(q),
            Gate::Cx { control, target } => state.apply_cnot(control, target),
            Gate::Ccx { c1, c2, target } => state.apply_toffoli(c1, c2, target),
            Gate::Cz { control, target } => state.apply_cz(control, target),
        }
    }

    fn remap(&self, map: &[usize]) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(map[q]),
            Gate::Cx { control, target } => Gate::Cx {
                control: map[control],
                target: map[target],
            },
            Gate::Ccx { c1, c2, target } => Gate::Ccx {
                c1: map[c1],
                c2: map[c2],
                target: map[target],
            },
            Gate::Cz { control, target } => Gate::Cz {
                control: map[control],
                target: map[target],
            },
        }
    }
}

/// A product of gates in written order; the rightmost gate runs first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateProgram {
    gates: Vec<Gate>,
}

impl GateProgram {
    pub fn new(gates: Vec<Gate>) -> Self {
        GateProgram { gates }
    }

    /// Gates in written order.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Gates in the order they act.
    pub fn execution_order(&self) -> impl Iterator<Item = &Gate> {
        self.gates.iter().rev()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn touches(&self, q: usize) -> bool {
        self.gates.iter().any(|g| g.addresses().contains(&q))
    }

    pub fn run(&self, state: &mut StateVector) -> Result<()> {
        self.execution_order().try_for_each(|g| g.apply(state))
    }

    /// The inverse program. Every gate here is its own inverse, so this is
    /// the written order reversed.
    pub fn adjoint(&self) -> GateProgram {
        GateProgram {
            gates: self.gates.iter().rev().copied().collect(),
        }
    }

    /// Moves address `a` to `map[a]`.
    pub fn remapped(&self, map: &[usize]) -> GateProgram {
        GateProgram {
            gates: self.gates.iter().map(|g| g.remap(map)).collect(),
        }
    }

    /// Compact operator notation such as `H5'C5'4'`, using `layout` labels.
    pub fn notation(&self, layout: &GhzLayout) -> String {
        let mut out = String::new();
        for g in &self.gates {
            let (name, qs) = match g {
                Gate::H(_) => ("H", g.addresses()),
                Gate::Cx { .. } => ("C", g.addresses()),
                Gate::Ccx { .. } => ("T", g.addresses()),
                Gate::Cz { .. } => ("Z", g.addresses()),
            };
            out.push_str(name);
            for q in qs {
                out.push_str(&layout.label(q));
            }
        }
        out
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Message,
    Ancilla,
}

/// Register layout for `n` message qubits plus `n` ancillas.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GhzLayout {
    n: usize,
}

impl GhzLayout {
    pub const MIN: usize = 2;
    pub const MAX: usize = 6;

    pub fn new(n: usize) -> Result<Self> {
        if !(Self::MIN..=Self::MAX).contains(&n) {
            return Err(Error::LayoutOutOfRange { n });
        }
        Ok(GhzLayout { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn qubits(&self) -> usize {
        2 * self.n
    }

    /// Address of message qubit `i` (1-based).
    fn msg(&self, i: usize) -> usize {
        i - 1
    }

    /// Address of ancilla `i'` (1-based).
    fn anc(&self, i: usize) -> usize {
        self.n + i - 1
    }

    pub fn side(&self, address: usize) -> Side {
        if address < self.n {
            Side::Message
        } else {
            Side::Ancilla
        }
    }

    pub fn message_addresses(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    pub fn ancilla_addresses(&self) -> Vec<usize> {
        (self.n..2 * self.n).collect()
    }

    /// `3` for message qubit 3, `3'` for ancilla 3.
    pub fn label(&self, address: usize) -> String {
        match self.side(address) {
            Side::Message => format!("{}", address + 1),
            Side::Ancilla => format!("{}'", address - self.n + 1),
        }
    }

    pub fn address(&self, label: &str) -> Result<usize> {
        let (digits, primed) = match label.strip_suffix('\'') {
            Some(d) => (d, true),
            None => (label, false),
        };
        let i: usize = digits
            .parse()
            .map_err(|_| Error::InvalidLabel(label.into()))?;
        if i == 0 || i > self.n {
            return Err(Error::InvalidLabel(label.into()));
        }
        Ok(if primed { self.anc(i) } else { self.msg(i) })
    }

    fn check(&self, address: usize) -> Result<()> {
        if address >= self.qubits() {
            return Err(Error::IndexOutOfRange {
                index: address,
                len: self.qubits(),
            });
        }
        Ok(())
    }

    /// `prod C_{n'i'} prod C_{ni} H_{n'} H_n prod C_{ii'}` with the products
    /// written from the highest index down.
    pub fn build_encoder(&self) -> GateProgram {
        let n = self.n;
        let mut g = Vec::new();
        g.extend((1..n).rev().map(|i| Gate::Cx {
            control: self.anc(n),
            target: self.anc(i),
        }));
        g.extend((1..n).rev().map(|i| Gate::Cx {
            control: self.msg(n),
            target: self.msg(i),
        }));
        g.push(Gate::H(self.anc(n)));
        g.push(Gate::H(self.msg(n)));
        g.extend((1..=n).rev().map(|i| Gate::Cx {
            control: self.msg(i),
            target: self.anc(i),
        }));
        GateProgram::new(g)
    }

    /// Collapses the side opposite the erasure onto basis flags.
    pub fn build_decoder(&self, erased: usize) -> Result<GateProgram> {
        self.check(erased)?;
        let n = self.n;
        let other: fn(&Self, usize) -> usize = match self.side(erased) {
            Side::Message => Self::anc,
            Side::Ancilla => Self::msg,
        };
        let mut g = vec![Gate::H(other(self, n))];
        g.extend((1..n).rev().map(|i| Gate::Cx {
            control: other(self, n),
            target: other(self, i),
        }));
        Ok(GateProgram::new(g))
    }

    /// Moves the logical content onto the side opposite the erasure.
    ///
    /// For an erased message qubit `j < n`, with `k = n - j` (or `k = n`
    /// when that would equal `j`):
    /// `T_{j'n'k} Z_{n'k} T_{j'n'k} prod_{i<n, i!=j} C_{i'i} prod_{i!=j} C_{j'i}`.
    /// For `j = n` it is `Z_{n',n-1} prod_{i<n} C_{i'i}`. Ancilla erasures
    /// use the same programs with the two sides swapped.
    pub fn build_recovery(&self, erased: usize) -> Result<GateProgram> {
        self.check(erased)?;
        let n = self.n;
        let (hit, safe): (Addressing, Addressing) = match self.side(erased) {
            Side::Message => (Self::msg, Self::anc),
            Side::Ancilla => (Self::anc, Self::msg),
        };
        let j = match self.side(erased) {
            Side::Message => erased + 1,
            Side::Ancilla => erased - n + 1,
        };
        let mut g = Vec::new();
        if j == n {
            g.push(Gate::Cz {
                control: safe(self, n),
                target: hit(self, n - 1),
            });
            g.extend((1..n).map(|i| Gate::Cx {
                control: safe(self, i),
                target: hit(self, i),
            }));
        } else {
            let k = if n - j == j { n } else { n - j };
            let t = Gate::Ccx {
                c1: safe(self, j),
                c2: safe(self, n),
                target: hit(self, k),
            };
            g.push(t);
            g.push(Gate::Cz {
                control: safe(self, n),
                target: hit(self, k),
            });
            g.push(t);
            g.extend((1..n).filter(|&i| i != j).map(|i| Gate::Cx {
                control: safe(self, i),
                target: hit(self, i),
            }));
            g.extend((1..=n).filter(|&i| i != j).map(|i| Gate::Cx {
                control: safe(self, j),
                target: hit(self, i),
            }));
        }
        Ok(GateProgram::new(g))
    }

    /// Encodes an `n`-qubit message; the ancillas start in `|0...0>`.
    pub fn encode(&self, message: &StateVector) -> Result<StateVector> {
        if message.modulus() != Prime::TWO {
            return Err(Error::QubitOnly {
                gate: "GHZ encoder",
                p: message.modulus().get(),
            });
        }
        if message.qudits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: message.qudits(),
            });
        }
        let mut s = message.tensor(&StateVector::zero_state(Prime::TWO, self.n)?)?;
        self.build_encoder().run(&mut s)?;
        Ok(s)
    }

    /// Runs decoder and recovery for an erasure at `erased` and returns the
    /// intact side, which must have come out pure.
    pub fn recover(&self, state: &StateVector, erased: usize) -> Result<StateVector> {
        if state.qudits() != self.qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.qubits(),
                found: state.qudits(),
            });
        }
        let mut s = state.clone();
        self.build_decoder(erased)?.run(&mut s)?;
        self.build_recovery(erased)?.run(&mut s)?;
        let keep = match self.side(erased) {
            Side::Message => self.ancilla_addresses(),
            Side::Ancilla => self.message_addresses(),
        };
        let sub = s.extract_subsystem(&keep)?;
        if sub.purity < PURITY_THRESHOLD {
            return Err(Error::RecoveryFailed { purity: sub.purity });
        }
        Ok(sub.state)
    }
}

/// Disturbance applied to an erased qubit.
#[derive(Clone, Debug, PartialEq)]
pub enum Corruption {
    Identity,
    /// `X^b Z^s`.
    Pauli {
        b: u32,
        s: u32,
    },
    /// Row-major 2x2 unitary.
    Unitary([Complex64; 4]),
    /// Haar-random unitary drawn from `seed`.
    RandomUnitary {
        seed: u64,
    },
    /// Projection onto `|outcome>`, then renormalization.
    Project {
        outcome: u32,
    },
}

impl Corruption {
    pub fn x() -> Self {
        Corruption::Pauli { b: 1, s: 0 }
    }

    pub fn y() -> Self {
        Corruption::Pauli { b: 1, s: 1 }
    }

    pub fn z() -> Self {
        Corruption::Pauli { b: 0, s: 1 }
    }

    pub fn apply(&self, state: &mut StateVector, address: usize) -> Result<()> {
        match self {
            Corruption::Identity => {
                if address >= state.qudits() {
                    return Err(Error::IndexOutOfRange {
                        index: address,
                        len: state.qudits(),
                    });
                }
                Ok(())
            }
            Corruption::Pauli { b, s } => state.apply_pauli(address, *b, *s),
            Corruption::Unitary(m) => state.apply_single_qudit(address, m),
            Corruption::RandomUnitary { seed } => {
                state.apply_single_qudit(address, &haar_unitary(*seed))
            }
            Corruption::Project { outcome } => {
                let o = *outcome as usize;
                if o > 1 {
                    return Err(Error::DigitOutOfRange {
                        digit: *outcome,
                        p: 2,
                    });
                }
                let mut m = [Complex64::new(0.0, 0.0); 4];
                m[o * 2 + o] = Complex64::new(1.0, 0.0);
                state.apply_single_qudit(address, &m)?;
                state.normalize()
            }
        }
    }
}

impl fmt::Display for Corruption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Corruption::Identity => f.write_str("I"),
            Corruption::Pauli { b: 1, s: 0 } => f.write_str("X"),
            Corruption::Pauli { b: 0, s: 1 } => f.write_str("Z"),
            Corruption::Pauli { b: 1, s: 1 } => f.write_str("Y"),
            Corruption::Pauli { b, s } => write!(f, "X^{b}Z^{s}"),
            Corruption::Unitary(_) => f.write_str("U"),
            Corruption::RandomUnitary { seed } => write!(f, "U(seed={seed})"),
            Corruption::Project { outcome } => write!(f, "P{outcome}"),
        }
    }
}

/// Haar-random element of SU(2), reproducible from `seed`.
pub fn haar_unitary(seed: u64) -> [Complex64; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };
    let (a, b) = (
        Complex64::new(gauss(), gauss()),
        Complex64::new(gauss(), gauss()),
    );
    let norm = Float::sqrt(a.norm_sqr() + b.norm_sqr());
    let (a, b) = (a / norm, b / norm);
    [a, -b.conj(), b, a.conj()]
}
