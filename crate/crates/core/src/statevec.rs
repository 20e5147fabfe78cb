//! Dense state vectors over `n` qudits of prime dimension `p`.
//!
//! Address 0 is the leftmost ket factor and the most significant radix-p
//! digit of the amplitude index, so `|a_0 a_1 ... a_{n-1}>` lives at
//! `sum_i a_i p^(n-1-i)`. Gate kernels walk the amplitude array directly;
//! the qubit-only gates use bit masks.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fp::{FpVector, Prime};

/// Amplitude equality tolerance used across the crate.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-10;

/// Marginals above `1 - DETERMINISTIC_SLACK` are treated as certain outcomes.
pub const DETERMINISTIC_SLACK: f64 = 1e-9;

/// Upper bound on the amplitude count of a single register.
pub const MAX_AMPLITUDES: usize = 1 << 22;

/// `e^{2 pi i k / p}`.
pub fn root_of_unity(p: Prime, k: u32) -> Complex64 {
    let angle = 2.0 * PI * f64::from(k % p.get()) / f64::from(p.get());
    Complex64::new(Float::cos(angle), Float::sin(angle))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    p: Prime,
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n` qudits.
    pub fn zero_state(p: Prime, n: usize) -> Result<Self> {
        let dim = checked_dim(p, n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { p, n, amps })
    }

    pub fn basis_state(p: Prime, digits: &FpVector) -> Result<Self> {
        if digits.modulus() != p {
            return Err(Error::ModulusMismatch);
        }
        let mut s = Self::zero_state(p, digits.len())?;
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[digits.to_index()] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Wraps raw amplitudes without normalizing them.
    pub fn from_amplitudes(p: Prime, n: usize, amps: Vec<Complex64>) -> Result<Self> {
        let dim = checked_dim(p, n)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amps.len(),
            });
        }
        Ok(StateVector { p, n, amps })
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn qudits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[inline]
    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = Float::sqrt(self.norm_sqr());
        if norm < 1e-300 {
            return Err(Error::ZeroState);
        }
        let scale = 1.0 / norm;
        self.amps.iter_mut().for_each(|a| *a *= scale);
        Ok(())
    }

    pub fn normalized(mut self) -> Result<Self> {
        self.normalize()?;
        Ok(self)
    }

    /// `self (x) other`, with `self` on the leading addresses.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch);
        }
        let n = self.n + other.n;
        checked_dim(self.p, n)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(StateVector { p: self.p, n, amps })
    }

    /// Places qudit `i` of `self` at address `positions[i]` of a `total`-qudit
    /// register whose other qudits are `|0>`.
    pub fn embed(&self, positions: &[usize], total: usize) -> Result<StateVector> {
        if positions.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: positions.len(),
            });
        }
        check_distinct_in_range(positions, total)?;
        let mut out = Self::zero_state(self.p, total)?;
        out.amps[0] = Complex64::new(0.0, 0.0);
        let strides: Vec<usize> = positions.iter().map(|&q| out.stride(q)).collect();
        let p = self.p.as_usize();
        for (idx, amp) in self.amps.iter().enumerate() {
            let mut rem = idx;
            let mut target = 0;
            for stride in strides.iter().rev() {
                target += (rem % p) * stride;
                rem /= p;
            }
            out.amps[target] = *amp;
        }
        Ok(out)
    }

    /// Distance in the amplitude index between neighbouring values of digit `q`.
    #[inline]
    pub fn stride(&self, q: usize) -> usize {
        self.p.as_usize().pow((self.n - 1 - q) as u32)
    }

    /// Digit of basis index `index` at address `q`.
    #[inline]
    pub fn digit(&self, index: usize, q: usize) -> u32 {
        ((index / self.stride(q)) % self.p.as_usize()) as u32
    }

    fn check_address(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::IndexOutOfRange {
                index: q,
                len: self.n,
            });
        }
        Ok(())
    }

    fn qubit_mask(&self, gate: &'static str, q: usize) -> Result<usize> {
        if self.p != Prime::TWO {
            return Err(Error::QubitOnly {
                gate,
                p: self.p.get(),
            });
        }
        self.check_address(q)?;
        Ok(1usize << (self.n - 1 - q))
    }

    /// `|0> -> (|0>+|1>)/sqrt2`, `|1> -> (|0>-|1>)/sqrt2` at address `q`.
    pub fn apply_hadamard(&mut self, q: usize) -> Result<()> {
        let bit = self.qubit_mask("Hadamard", q)?;
        let s = FRAC_1_SQRT_2;
        for i in (0..self.amps.len()).filter(|i| i & bit == 0) {
            let (a, b) = (self.amps[i], self.amps[i | bit]);
            self.amps[i] = (a + b) * s;
            self.amps[i | bit] = (a - b) * s;
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        let c = self.qubit_mask("CNOT", control)?;
        let t = self.qubit_mask("CNOT", target)?;
        if c == t {
            return Err(Error::AddressCollision);
        }
        for i in (0..self.amps.len()).filter(|i| i & c != 0 && i & t == 0) {
            self.amps.swap(i, i | t);
        }
        Ok(())
    }

    pub fn apply_toffoli(&mut self, c1: usize, c2: usize, target: usize) -> Result<()> {
        let a = self.qubit_mask("Toffoli", c1)?;
        let b = self.qubit_mask("Toffoli", c2)?;
        let t = self.qubit_mask("Toffoli", target)?;
        if a == b || a == t || b == t {
            return Err(Error::AddressCollision);
        }
        let controls = a | b;
        for i in (0..self.amps.len()).filter(|i| i & controls == controls && i & t == 0) {
            self.amps.swap(i, i | t);
        }
        Ok(())
    }

    pub fn apply_cz(&mut self, control: usize, target: usize) -> Result<()> {
        let c = self.qubit_mask("controlled-Z", control)?;
        let t = self.qubit_mask("controlled-Z", target)?;
        if c == t {
            return Err(Error::AddressCollision);
        }
        let both = c | t;
        self.amps
            .iter_mut()
            .enumerate()
            .filter(|(i, _)| i & both == both)
            .for_each(|(_, a)| *a = -*a);
        Ok(())
    }

    /// `sigma_b tau_s |a> = e^{2 pi i s a / p} |a + b>` at address `q`.
    pub fn apply_pauli(&mut self, q: usize, b: u32, s: u32) -> Result<()> {
        self.check_address(q)?;
        let p = self.p;
        for v in [b, s] {
            if v >= p.get() {
                return Err(Error::DigitOutOfRange {
                    digit: v,
                    p: p.get(),
                });
            }
        }
        if b == 0 && s == 0 {
            return Ok(());
        }
        let pu = p.as_usize();
        let stride = self.stride(q);
        let phases: Vec<Complex64> = (0..p.get()).map(|a| root_of_unity(p, s * a)).collect();
        let block = stride * pu;
        let mut column = vec![Complex64::new(0.0, 0.0); pu];
        for base in (0..self.amps.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (a, slot) in column.iter_mut().enumerate() {
                    *slot = self.amps[start + a * stride];
                }
                for (a, amp) in column.iter().enumerate() {
                    let dest = (a + b as usize) % pu;
                    self.amps[start + dest * stride] = phases[a] * amp;
                }
            }
        }
        Ok(())
    }

    /// Applies a `p x p` row-major matrix to address `q`.
    pub fn apply_single_qudit(&mut self, q: usize, matrix: &[Complex64]) -> Result<()> {
        self.check_address(q)?;
        let pu = self.p.as_usize();
        if matrix.len() != pu * pu {
            return Err(Error::DimensionMismatch {
                expected: pu * pu,
                found: matrix.len(),
            });
        }
        let stride = self.stride(q);
        let mut column = vec![Complex64::new(0.0, 0.0); pu];
        for base in (0..self.amps.len()).step_by(stride * pu) {
            for offset in 0..stride {
                let start = base + offset;
                for (a, slot) in column.iter_mut().enumerate() {
                    *slot = self.amps[start + a * stride];
                }
                for r in 0..pu {
                    let row = &matrix[r * pu..(r + 1) * pu];
                    self.amps[start + r * stride] =
                        row.iter().zip(&column).map(|(m, v)| m * v).sum();
                }
            }
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= factor);
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<a|b>|^2`.
    pub fn fidelity_up_to_phase(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Largest `|a_i - b_i|`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Rotates `self` by the global phase that best aligns it with `reference`.
    pub fn align_phase_to(&mut self, reference: &StateVector) -> Result<()> {
        let overlap = self.inner(reference)?;
        if overlap.norm() > 1e-300 {
            self.scale(overlap / overlap.norm());
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &StateVector) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Splits every basis index into (index over `qs` in the given order,
    /// index over the remaining addresses in ascending order).
    fn splitter(&self, qs: &[usize]) -> Result<IndexSplit> {
        check_distinct_in_range(qs, self.n)?;
        let rest: Vec<usize> = (0..self.n).filter(|q| !qs.contains(q)).collect();
        Ok(IndexSplit {
            p: self.p.as_usize(),
            n: self.n,
            keep: qs.to_vec(),
            rest,
        })
    }

    /// Reduced density matrix of a single qudit.
    pub fn reduced_density(&self, q: usize) -> Result<DensityMatrix> {
        self.reduced_density_of(&[q])
    }

    /// Reduced density matrix on `qs` (in the listed order).
    pub fn reduced_density_of(&self, qs: &[usize]) -> Result<DensityMatrix> {
        let split = self.splitter(qs)?;
        let kd = split.keep_dim();
        let m = split.matrix(&self.amps);
        let rd = split.rest_dim();
        let mut rho = vec![Complex64::new(0.0, 0.0); kd * kd];
        for r in 0..rd {
            let row = &m[r * kd..(r + 1) * kd];
            for i in 0..kd {
                if row[i] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..kd {
                    rho[i * kd + j] += row[i] * row[j].conj();
                }
            }
        }
        Ok(DensityMatrix {
            dim: kd,
            entries: rho,
        })
    }

    /// Outcome distribution of the digits at `qs`, indexed in radix order.
    pub fn marginal(&self, qs: &[usize]) -> Result<Vec<f64>> {
        let split = self.splitter(qs)?;
        let mut probs = vec![0.0; split.keep_dim()];
        for (idx, a) in self.amps.iter().enumerate() {
            probs[split.keep_index(idx)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Unnormalized branch of the remaining qudits given `outcome` on `qs`,
    /// together with its probability.
    fn branch(&self, qs: &[usize], outcome: usize) -> Result<(f64, StateVector)> {
        let split = self.splitter(qs)?;
        let rest_n = split.rest.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); split.rest_dim()];
        for (idx, a) in self.amps.iter().enumerate() {
            let (k, r) = split.split(idx);
            if k == outcome {
                amps[r] = *a;
            }
        }
        let prob = amps.iter().map(|a| a.norm_sqr()).sum();
        Ok((
            prob,
            StateVector {
                p: self.p,
                n: rest_n,
                amps,
            },
        ))
    }

    /// Measures the digits at `qs`.
    ///
    /// Returns the outcome and the normalized state of the unmeasured qudits.
    /// Certain outcomes (probability above `1 - DETERMINISTIC_SLACK`) are
    /// returned without drawing from `rng`.
    pub fn measure_register<R: Rng + ?Sized>(
        &self,
        qs: &[usize],
        rng: &mut R,
    ) -> Result<(FpVector, StateVector)> {
        let probs = self.marginal(qs)?;
        let total: f64 = probs.iter().sum();
        if total < 1e-300 {
            return Err(Error::ZeroState);
        }
        let (best, &best_p) = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty marginal");
        let outcome = if best_p / total > 1.0 - DETERMINISTIC_SLACK {
            best
        } else {
            let mut draw = rng.random::<f64>() * total;
            let mut chosen = probs.len() - 1;
            for (i, &pr) in probs.iter().enumerate() {
                if draw < pr {
                    chosen = i;
                    break;
                }
                draw -= pr;
            }
            chosen
        };
        let (_, rest) = self.branch(qs, outcome)?;
        Ok((
            FpVector::from_index(self.p, qs.len(), outcome),
            rest.normalized()?,
        ))
    }

    /// Most likely outcome on `qs` with its probability and the normalized
    /// conditional state of the other qudits.
    pub fn most_likely_outcome(&self, qs: &[usize]) -> Result<(FpVector, f64, StateVector)> {
        let probs = self.marginal(qs)?;
        let total: f64 = probs.iter().sum();
        let (best, &best_p) = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty marginal");
        let (_, rest) = self.branch(qs, best)?;
        Ok((
            FpVector::from_index(self.p, qs.len(), best),
            best_p / total,
            rest.normalized()?,
        ))
    }

    /// Pulls out the state of the qudits at `keep` (in the listed order).
    ///
    /// Returns the dominant conditional state of `keep` and its purity
    /// `tr(rho^2)`. When the purity is 1 the register factorizes and the
    /// returned state is exact up to global phase.
    pub fn extract_subsystem(&self, keep: &[usize]) -> Result<Subsystem> {
        let split = self.splitter(keep)?;
        let kd = split.keep_dim();
        let m = split.matrix(&self.amps);
        let (best_row, _) = m
            .chunks(kd)
            .map(|row| row.iter().map(|a| a.norm_sqr()).sum::<f64>())
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(Error::ZeroState)?;
        let row = m[best_row * kd..(best_row + 1) * kd].to_vec();
        let state = StateVector {
            p: self.p,
            n: keep.len(),
            amps: row,
        }
        .normalized()?;
        let rho = self.reduced_density_of(keep)?;
        let purity = rho.purity() / (rho.trace().re * rho.trace().re);
        Ok(Subsystem { state, purity })
    }
}

/// Result of [`StateVector::extract_subsystem`].
#[derive(Clone, Debug)]
pub struct Subsystem {
    pub state: StateVector,
    pub purity: f64,
}

struct IndexSplit {
    p: usize,
    n: usize,
    keep: Vec<usize>,
    rest: Vec<usize>,
}

impl IndexSplit {
    fn keep_dim(&self) -> usize {
        self.p.pow(self.keep.len() as u32)
    }

    fn rest_dim(&self) -> usize {
        self.p.pow(self.rest.len() as u32)
    }

    fn digit(&self, index: usize, q: usize) -> usize {
        (index / self.p.pow((self.n - 1 - q) as u32)) % self.p
    }

    fn keep_index(&self, index: usize) -> usize {
        self.keep
            .iter()
            .fold(0, |acc, &q| acc * self.p + self.digit(index, q))
    }

    fn split(&self, index: usize) -> (usize, usize) {
        let r = self
            .rest
            .iter()
            .fold(0, |acc, &q| acc * self.p + self.digit(index, q));
        (self.keep_index(index), r)
    }

    /// Amplitudes rearranged into a `rest_dim x keep_dim` row-major matrix.
    fn matrix(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let kd = self.keep_dim();
        let mut m = vec![Complex64::new(0.0, 0.0); kd * self.rest_dim()];
        for (idx, a) in amps.iter().enumerate() {
            let (k, r) = self.split(idx);
            m[r * kd + k] = *a;
        }
        m
    }
}

fn checked_dim(p: Prime, n: usize) -> Result<usize> {
    match p.checked_pow(n) {
        Some(d) if d <= MAX_AMPLITUDES => Ok(d),
        _ => Err(Error::RegisterTooLarge(
            "state vector exceeds the amplitude limit",
        )),
    }
}

fn check_distinct_in_range(qs: &[usize], n: usize) -> Result<()> {
    for (i, &q) in qs.iter().enumerate() {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, len: n });
        }
        if qs[..i].contains(&q) {
            return Err(Error::AddressCollision);
        }
    }
    Ok(())
}

/// A `dim x dim` density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn maximally_mixed(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        DensityMatrix { dim, entries }
    }

    /// `|psi><psi|`.
    pub fn pure(state: &StateVector) -> Self {
        let dim = state.dim();
        let a = state.amplitudes();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            entries.extend((0..dim).map(|j| a[i] * a[j].conj()));
        }
        DensityMatrix { dim, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `tr(rho^2)`, which for Hermitian `rho` is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim)
            .all(|r| (0..self.dim).all(|c| (self.get(r, c) - self.get(c, r).conj()).norm() <= tol))
    }

    /// True when `rho + tol * I` admits a Cholesky factorization.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let n = self.dim;
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut diag = self.get(j, j).re + tol;
            for k in 0..j {
                diag -= l[j * n + k].norm_sqr();
            }
            if diag <= 0.0 {
                return false;
            }
            let d = Float::sqrt(diag);
            l[j * n + j] = Complex64::new(d, 0.0);
            for i in j + 1..n {
                let mut v = self.get(i, j);
                for k in 0..j {
                    v -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = v / d;
            }
        }
        true
    }
}
