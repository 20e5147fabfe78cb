//! Quantum graph codes over `F_p`.
//!
//! Vertices are numbered globally: inputs `X` first, then outputs `Y`, then
//! syndrome vertices `L`. Encoding sends `sum c(d^X) |d^X>` to
//! `sum_{d^Y} lambda(d^Y) |d^Y>` with
//! `lambda(d^Y) = sum_{d^X} w^{Q(d^X, d^Y)} c(d^X)`, where `Q` is the edge sum
//! of [`FpMatrix::quadratic_form`]. Decoding applies the Fourier-type unitary
//! `<d^L d^X| T |d^Y> = p^{-|Y|/2} w^{-Q(d^X, d^Y, d^L)}` and reads the
//! syndrome off the `L` digits, which lead the output register.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fp::{kernel_pairs, FpMatrix, FpVector, Prime};
use crate::pauli::PauliError;
use crate::statevec::{root_of_unity, StateVector, AMPLITUDE_TOLERANCE, DETERMINISTIC_SLACK};

/// Largest `|Y|` accepted by [`CodeGraph::check_admissibility`].
pub const MAX_ADMISSIBILITY_OUTPUTS: usize = 8;
/// Largest modulus accepted by [`CodeGraph::check_admissibility`].
pub const MAX_ADMISSIBILITY_PRIME: u32 = 5;
/// Largest `p^|Y|` for which a dense decoder is built.
pub const MAX_DECODER_DIM: usize = 256;
/// Allowed `max |T^dagger T - I|` before a decoder is rejected.
pub const UNITARITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CodeGraph {
    adjacency: FpMatrix,
    inputs: usize,
    outputs: usize,
    syndromes: usize,
}

impl CodeGraph {
    /// Only the partition and the adjacency shape are validated here; the
    /// decoding conditions are reported by [`check_admissibility`](Self::check_admissibility)
    /// and enforced when a decoder is built.
    pub fn new(
        adjacency: FpMatrix,
        inputs: usize,
        outputs: usize,
        syndromes: usize,
    ) -> Result<Self> {
        if !adjacency.is_square() {
            return Err(Error::NotSquare {
                rows: adjacency.rows(),
                cols: adjacency.cols(),
            });
        }
        if inputs + outputs + syndromes != adjacency.rows() {
            return Err(Error::InvalidPartition(
                "X, Y and L must cover every vertex exactly once",
            ));
        }
        if outputs == 0 {
            return Err(Error::InvalidPartition(
                "a graph code needs at least one output vertex",
            ));
        }
        if !adjacency.is_symmetric() {
            return Err(Error::NotAdjacency("matrix is not symmetric"));
        }
        if !adjacency.is_adjacency() {
            return Err(Error::NotAdjacency("graph has a self-loop"));
        }
        Ok(CodeGraph {
            adjacency,
            inputs,
            outputs,
            syndromes,
        })
    }

    /// The 3-regular graph on `x0, y0..y4` encoding one qubit into five.
    pub fn five_qubit_code() -> Self {
        let rows = [
            [0, 1, 1, 1, 0, 0],
            [1, 0, 1, 0, 1, 0],
            [1, 1, 0, 0, 0, 1],
            [1, 0, 0, 0, 1, 1],
            [0, 1, 0, 1, 0, 1],
            [0, 0, 1, 1, 1, 0],
        ];
        let a = FpMatrix::from_rows(Prime::TWO, &rows).expect("static data");
        CodeGraph::new(a, 1, 5, 0).expect("static data")
    }

    /// [`five_qubit_code`](Self::five_qubit_code) extended by syndrome
    /// vertices `l0, l1, l3, l4` hanging off `y0, y1, y3, y4`.
    pub fn five_qubit_decoding_graph() -> Self {
        let base = Self::five_qubit_code();
        let mut a = FpMatrix::zeros(Prime::TWO, 10, 10);
        for r in 0..6 {
            for c in 0..6 {
                a.set(r, c, base.adjacency.raw(r, c)).expect("in range");
            }
        }
        for (y, l) in [(0, 0), (1, 1), (3, 2), (4, 3)] {
            a.set(1 + y, 6 + l, 1).expect("in range");
            a.set(6 + l, 1 + y, 1).expect("in range");
        }
        CodeGraph::new(a, 1, 5, 4).expect("static data")
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.adjacency.modulus()
    }

    #[inline]
    pub fn adjacency(&self) -> &FpMatrix {
        &self.adjacency
    }

    pub fn input_count(&self) -> usize {
        self.inputs
    }

    pub fn output_count(&self) -> usize {
        self.outputs
    }

    pub fn syndrome_count(&self) -> usize {
        self.syndromes
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.rows()
    }

    pub fn inputs(&self) -> Range<usize> {
        0..self.inputs
    }

    pub fn outputs(&self) -> Range<usize> {
        self.inputs..self.inputs + self.outputs
    }

    pub fn syndrome_vertices(&self) -> Range<usize> {
        self.inputs + self.outputs..self.vertex_count()
    }

    /// The encoding graph alone, with the syndrome vertices dropped.
    pub fn without_syndromes(&self) -> CodeGraph {
        let keep: Vec<usize> = (0..self.inputs + self.outputs).collect();
        let a = self.adjacency.submatrix(&keep, &keep).expect("in range");
        CodeGraph {
            adjacency: a,
            inputs: self.inputs,
            outputs: self.outputs,
            syndromes: 0,
        }
    }

    fn block(&self, rows: &[usize], cols: &[usize]) -> FpMatrix {
        self.adjacency
            .submatrix(rows, cols)
            .expect("indices come from the partition")
    }

    /// Encodes a logical state on `|X|` qudits into `|Y|` qudits.
    pub fn encode(&self, logical: &StateVector) -> Result<StateVector> {
        let p = self.modulus();
        if logical.modulus() != p {
            return Err(Error::ModulusMismatch);
        }
        if logical.qudits() != self.inputs {
            return Err(Error::DimensionMismatch {
                expected: self.inputs,
                found: logical.qudits(),
            });
        }
        if logical.norm_sqr() < 1e-300 {
            return Err(Error::ZeroState);
        }
        let ydim = p
            .checked_pow(self.outputs)
            .ok_or(Error::RegisterTooLarge("too many outputs"))?;
        let mut amps = vec![Complex64::new(0.0, 0.0); ydim];
        let nv = self.vertex_count();
        let mut digits = vec![0u32; nv];
        for (iy, amp) in amps.iter_mut().enumerate() {
            write_digits(p, iy, &mut digits[self.outputs()]);
            for (ix, c) in logical.amplitudes().iter().enumerate() {
                if *c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                write_digits(p, ix, &mut digits[self.inputs()]);
                *amp += root_of_unity(p, self.adjacency.pair_sum(&digits)) * c;
            }
        }
        StateVector::from_amplitudes(p, self.outputs, amps)?.normalized()
    }

    /// Evaluates the decoding conditions C1 to C5 for correcting `e` errors.
    pub fn check_admissibility(&self, e: usize) -> Result<AdmissibilityReport> {
        if self.outputs > MAX_ADMISSIBILITY_OUTPUTS {
            return Err(Error::SizeBound {
                what: "|Y|",
                limit: MAX_ADMISSIBILITY_OUTPUTS,
            });
        }
        if self.modulus().get() > MAX_ADMISSIBILITY_PRIME {
            return Err(Error::SizeBound {
                what: "p",
                limit: MAX_ADMISSIBILITY_PRIME as usize,
            });
        }
        let xs: Vec<usize> = self.inputs().collect();
        let ys: Vec<usize> = self.outputs().collect();
        let ls: Vec<usize> = self.syndrome_vertices().collect();

        let c1 = self.inputs + self.syndromes == self.outputs;
        let xl: Vec<usize> = xs.iter().chain(&ls).copied().collect();
        let bar = self.block(&ys, &xl);
        let c2 = bar.is_square() && bar.is_invertible()?;
        let c3 = self.block(&ls, &ls).is_zero();
        let c4 = self.block(&xs, &ls).is_zero();

        let mut witness = None;
        'sizes: for size in 1..=(2 * e).min(self.outputs) {
            for erased in combinations(&ys, size) {
                let rest: Vec<usize> = ys.iter().copied().filter(|y| !erased.contains(y)).collect();
                let a_ix = self.block(&rest, &xs);
                let a_ie = self.block(&rest, &erased);
                let a_xe = self.block(&xs, &erased);
                for (dx, de) in kernel_pairs(&a_ix, &a_ie)? {
                    if !dx.is_zero() || !a_xe.mul_vec(&de)?.is_zero() {
                        witness = Some(C5Witness { erased, dx, de });
                        break 'sizes;
                    }
                }
            }
        }
        Ok(AdmissibilityReport {
            c1,
            c2,
            c3,
            c4,
            c5: witness.is_none(),
            witness,
        })
    }

    /// Builds the decoding unitary. Requires C1, C3 and C4; C2 is what makes
    /// the result unitary and is checked numerically.
    pub fn decoder_unitary(&self) -> Result<DecoderUnitary> {
        let p = self.modulus();
        if self.inputs + self.syndromes != self.outputs {
            return Err(Error::Inadmissible("C1"));
        }
        let xs: Vec<usize> = self.inputs().collect();
        let ls: Vec<usize> = self.syndrome_vertices().collect();
        if !self.block(&ls, &ls).is_zero() {
            return Err(Error::Inadmissible("C3"));
        }
        if !self.block(&xs, &ls).is_zero() {
            return Err(Error::Inadmissible("C4"));
        }
        let dim = match p.checked_pow(self.outputs) {
            Some(d) if d <= MAX_DECODER_DIM => d,
            _ => {
                return Err(Error::SizeBound {
                    what: "p^|Y|",
                    limit: MAX_DECODER_DIM,
                })
            }
        };
        let scale = 1.0 / Float::sqrt(dim as f64);
        let pu = p.get();
        let ldim = p.as_usize().pow(self.syndromes as u32);
        let xdim = p.as_usize().pow(self.inputs as u32);
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        let mut digits = vec![0u32; self.vertex_count()];
        for il in 0..ldim {
            write_digits(p, il, &mut digits[self.syndrome_vertices()]);
            for ix in 0..xdim {
                write_digits(p, ix, &mut digits[self.inputs()]);
                let row = il * xdim + ix;
                for iy in 0..dim {
                    write_digits(p, iy, &mut digits[self.outputs()]);
                    let mu = self.adjacency.pair_sum(&digits);
                    entries[row * dim + iy] = root_of_unity(p, (pu - mu) % pu) * scale;
                }
            }
        }
        let t = DecoderUnitary {
            p,
            dim,
            syndromes: self.syndromes,
            inputs: self.inputs,
            entries,
        };
        let defect = t.unitarity_defect();
        if defect > UNITARITY_TOLERANCE {
            return Err(Error::NotUnitary { defect });
        }
        Ok(t)
    }

    /// Builds the decoder and decodes `corrupted` in one go.
    pub fn decode(&self, corrupted: &StateVector) -> Result<Decoded> {
        self.decoder_unitary()?.decode(corrupted)
    }

    /// Records, for each labelled error, the syndrome it produces and the
    /// Pauli correction on the logical register that undoes it.
    ///
    /// The all-zero-error row is always computed first. Errors that share a
    /// syndrome must share a correction.
    pub fn build_syndrome_table(&self, errors: &[(String, PauliError)]) -> Result<SyndromeTable> {
        let t = self.decoder_unitary()?;
        let p = self.modulus();
        let reference = reference_state(p, self.inputs)?;
        let codeword = self.encode(&reference)?;
        let mut rows: Vec<SyndromeRow> = Vec::with_capacity(errors.len() + 1);
        let identity = (String::from("None"), PauliError::identity(p, self.outputs));
        for (label, error) in core::iter::once(&identity).chain(errors) {
            if error.len() != self.outputs || error.modulus() != p {
                return Err(Error::DimensionMismatch {
                    expected: self.outputs,
                    found: error.len(),
                });
            }
            let mut corrupted = codeword.clone();
            error.apply(&mut corrupted)?;
            let decoded = t.decode(&corrupted)?;
            let effect = find_pauli(&reference, &decoded.logical)
                .ok_or_else(|| Error::Uncorrectable(label.clone()))?;
            let correction = effect.inverse();
            if let Some(prev) = rows.iter().find(|r| r.syndrome == decoded.syndrome) {
                if prev.correction != correction {
                    return Err(Error::SyndromeCollision {
                        syndrome: format!("{}", decoded.syndrome),
                        first: prev.error_label.clone(),
                        second: label.clone(),
                    });
                }
            }
            rows.push(SyndromeRow {
                syndrome: decoded.syndrome,
                error_label: label.clone(),
                error: error.clone(),
                effect,
                correction,
            });
        }
        rows.sort_by_key(|r| r.syndrome.to_index());
        Ok(SyndromeTable {
            p,
            syndromes: self.syndromes,
            inputs: self.inputs,
            rows,
        })
    }
}

/// Every nontrivial single-qudit `X^b Z^s` on an `n`-qudit register,
/// labelled by its shortest `B`/`S` word and the 1-based qudit number.
pub fn single_qudit_errors(p: Prime, n: usize) -> Vec<(String, PauliError)> {
    let mut out = Vec::new();
    let mut pairs: Vec<(u32, u32)> = (0..p.get())
        .flat_map(|b| (0..p.get()).map(move |s| (b, s)))
        .skip(1)
        .collect();
    pairs.sort_by_key(|&(b, s)| (b + s, s));
    for q in 0..n {
        for &(b, s) in &pairs {
            let e = PauliError::single(p, n, q, b, s).expect("in range");
            let word = PauliError::qudit(p, 0, b, s)
                .and_then(|x| x.word())
                .expect("valid element");
            out.push((format!("{word}{}", q + 1), e));
        }
    }
    out
}

/// Parses `<word><qudit>` such as `B1` or `BS5` (1-based) into an error on an
/// `n`-qudit register; `none` is the identity.
pub fn parse_error_label(p: Prime, n: usize, label: &str) -> Result<PauliError> {
    if label.eq_ignore_ascii_case("none") {
        return Ok(PauliError::identity(p, n));
    }
    let split = label
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| Error::InvalidLabel(label.into()))?;
    let (word, index) = label.split_at(split);
    let q: usize = index
        .parse()
        .map_err(|_| Error::InvalidLabel(label.into()))?;
    if q == 0 || q > n || word.is_empty() {
        return Err(Error::InvalidLabel(label.into()));
    }
    let one = PauliError::from_word(p, word)?;
    let mut e = PauliError::single(
        p,
        n,
        q - 1,
        one.shifts().digits()[0],
        one.clocks().digits()[0],
    )?;
    if one.phase() != 0 {
        e = PauliError::new(one.phase(), &e.shifts(), &e.clocks())?;
    }
    Ok(e)
}

/// A fixed logical state with no accidental symmetries, so that distinct
/// Paulis give distinct images.
pub fn reference_state(p: Prime, qudits: usize) -> Result<StateVector> {
    let dim = p
        .checked_pow(qudits)
        .ok_or(Error::RegisterTooLarge("too many inputs"))?;
    let amps = (0..dim)
        .map(|j| {
            let j = j as f64;
            Complex64::new(1.0 + 0.618 * j, 0.3 + 0.17 * j * j)
        })
        .collect();
    StateVector::from_amplitudes(p, qudits, amps)?.normalized()
}

/// The Pauli `E` with `E |reference> = residual` exactly (phase included).
pub fn find_pauli(reference: &StateVector, residual: &StateVector) -> Option<PauliError> {
    let p = reference.modulus();
    let n = reference.qudits();
    let total = p.checked_pow(1 + 2 * n)?;
    (0..total).find_map(|code| {
        let mut digits = FpVector::from_index(p, 1 + 2 * n, code).digits().to_vec();
        let s = digits.split_off(1 + n);
        let b = digits.split_off(1);
        let e = PauliError::new(
            digits[0],
            &FpVector::new(p, b).ok()?,
            &FpVector::new(p, s).ok()?,
        )
        .ok()?;
        let mut image = reference.clone();
        e.apply(&mut image).ok()?;
        (image.max_abs_diff(residual).ok()? < AMPLITUDE_TOLERANCE).then_some(e)
    })
}

fn write_digits(p: Prime, mut index: usize, out: &mut [u32]) {
    let pu = p.as_usize();
    for slot in out.iter_mut().rev() {
        *slot = (index % pu) as u32;
        index /= pu;
    }
}

/// All `k`-subsets of `items` in lexicographic order.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + items.len() - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A counterexample to C5: an erasure set `E` and a kernel pair `(d^X, d^E)`.
#[derive(Clone, Debug, PartialEq)]
pub struct C5Witness {
    /// Global vertex indices of `E`.
    pub erased: Vec<usize>,
    pub dx: FpVector,
    pub de: FpVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    pub c5: bool,
    pub witness: Option<C5Witness>,
}

impl AdmissibilityReport {
    pub fn all_pass(&self) -> bool {
        self.c1 && self.c2 && self.c3 && self.c4 && self.c5
    }

    pub fn conditions(&self) -> [(&'static str, bool); 5] {
        [
            ("C1", self.c1),
            ("C2", self.c2),
            ("C3", self.c3),
            ("C4", self.c4),
            ("C5", self.c5),
        ]
    }
}

/// Dense decoding unitary; rows are `(d^L, d^X)`, columns `d^Y`.
#[derive(Clone, Debug)]
pub struct DecoderUnitary {
    p: Prime,
    dim: usize,
    syndromes: usize,
    inputs: usize,
    entries: Vec<Complex64>,
}

impl DecoderUnitary {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// `max |T^dagger T - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                let v: Complex64 = (0..d).map(|k| self.get(k, i).conj() * self.get(k, j)).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.modulus() != self.p {
            return Err(Error::ModulusMismatch);
        }
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        let a = state.amplitudes();
        let out = (0..self.dim)
            .map(|r| {
                self.entries[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(a)
                    .map(|(t, v)| t * v)
                    .sum()
            })
            .collect();
        StateVector::from_amplitudes(self.p, self.syndromes + self.inputs, out)
    }

    /// Applies `T` and reads the syndrome digits, which must be certain.
    pub fn decode(&self, corrupted: &StateVector) -> Result<Decoded> {
        let out = self.apply(corrupted)?;
        let ls: Vec<usize> = (0..self.syndromes).collect();
        let (syndrome, prob, logical) = out.most_likely_outcome(&ls)?;
        if prob < 1.0 - DETERMINISTIC_SLACK {
            return Err(Error::NondeterministicSyndrome { probability: prob });
        }
        Ok(Decoded { syndrome, logical })
    }
}

#[derive(Clone, Debug)]
pub struct Decoded {
    pub syndrome: FpVector,
    /// State of the `X` register after the syndrome digits are read.
    pub logical: StateVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyndromeRow {
    pub syndrome: FpVector,
    pub error_label: String,
    pub error: PauliError,
    /// Pauli taking the reference logical state to the decoded residual.
    pub effect: PauliError,
    pub correction: PauliError,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyndromeTable {
    p: Prime,
    syndromes: usize,
    inputs: usize,
    rows: Vec<SyndromeRow>,
}

impl SyndromeTable {
    pub fn rows(&self) -> &[SyndromeRow] {
        &self.rows
    }

    pub fn lookup(&self, syndrome: &FpVector) -> Result<&SyndromeRow> {
        self.rows
            .iter()
            .find(|r| &r.syndrome == syndrome)
            .ok_or_else(|| Error::UnrecognizedSyndrome(format!("{syndrome}")))
    }

    /// Applies the correction recorded for `syndrome` to `residual`.
    pub fn correct(&self, residual: &StateVector, syndrome: &FpVector) -> Result<StateVector> {
        let row = self.lookup(syndrome)?;
        let mut out = residual.clone();
        row.correction.apply(&mut out)?;
        Ok(out)
    }

    /// Correction as per-qudit words numbered by position in the decoded
    /// register, e.g. `S5` when four syndrome digits precede the qubit.
    pub fn correction_label(&self, row: &SyndromeRow) -> String {
        operator_label(&row.correction, self.syndromes)
    }

    /// The residual written in terms of the logical coefficients, e.g.
    /// `c(0)|0> - c(1)|1>`.
    pub fn residual_label(&self, row: &SyndromeRow) -> String {
        describe_image(&row.effect)
    }
}

/// Writes a Pauli on the logical register as per-qudit words; a global phase
/// is folded into the first nontrivial factor. Positions are 1-based after
/// `offset`.
pub fn operator_label(e: &PauliError, offset: usize) -> String {
    if e.is_identity() {
        return "None".into();
    }
    let p = e.modulus();
    let (b, s) = (e.shifts(), e.clocks());
    let mut support = e.support();
    if support.is_empty() {
        support.push(0);
    }
    let mut out = String::new();
    for (k, &q) in support.iter().enumerate() {
        let m = if k == 0 { e.phase() } else { 0 };
        let factor = PauliError::qudit(p, m, b.digits()[q], s.digits()[q]).expect("valid element");
        out.push_str(&factor.word().expect("one qudit"));
        out.push_str(&format!("{}", offset + q + 1));
    }
    out
}

/// `E sum c(d)|d>` as a sum of `phase c(d)|image>` terms in order of `d`.
pub fn describe_image(effect: &PauliError) -> String {
    let p = effect.modulus();
    let pu = p.get();
    let n = effect.len();
    let (b, s) = (effect.shifts(), effect.clocks());
    let mut out = String::new();
    for d in FpVector::all(p, n) {
        let image: FpVector = d.checked_add(&b).expect("same shape");
        let phase = (effect.phase() + d.dot(&s).expect("same shape").value()) % pu;
        let negative = p == Prime::TWO && phase == 1;
        let first = out.is_empty();
        match (first, negative) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if p != Prime::TWO && phase != 0 {
            out.push_str(&format!("w^{phase} "));
        }
        out.push_str(&format!("c({d})|{image}>"));
    }
    out
}
