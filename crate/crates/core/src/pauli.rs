//! The generalized Pauli group on `n` qudits.
//!
//! An element is `w^m (X^{b_1} Z^{s_1}) (x) ... (x) (X^{b_n} Z^{s_n})` with
//! `X|a> = |a+1>`, `Z|a> = w^a |a>` and `w = e^{2 pi i / p}`. On basis states
//! this is `|a> -> w^{m + s.a} |a + b>`. Phases are tracked exactly, so two
//! elements differing by a global phase are distinct.
//!
//! Single-qudit elements also have a word form over the letters `B = X`
//! (bit shift) and `S = Z` (phase shift), read as a matrix product: the
//! rightmost letter acts first.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fp::{FpVector, Prime};
use crate::statevec::{root_of_unity, StateVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliError {
    p: Prime,
    m: u32,
    b: Vec<u32>,
    s: Vec<u32>,
}

impl PauliError {
    pub fn new(m: u32, b: &FpVector, s: &FpVector) -> Result<Self> {
        let p = b.modulus();
        if s.modulus() != p {
            return Err(Error::ModulusMismatch);
        }
        if b.len() != s.len() {
            return Err(Error::DimensionMismatch {
                expected: b.len(),
                found: s.len(),
            });
        }
        if m >= p.get() {
            return Err(Error::DigitOutOfRange {
                digit: m,
                p: p.get(),
            });
        }
        Ok(PauliError {
            p,
            m,
            b: b.digits().to_vec(),
            s: s.digits().to_vec(),
        })
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        PauliError {
            p,
            m: 0,
            b: vec![0; n],
            s: vec![0; n],
        }
    }

    /// `X^b Z^s` at address `q` of an `n`-qudit register.
    pub fn single(p: Prime, n: usize, q: usize, b: u32, s: u32) -> Result<Self> {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, len: n });
        }
        for v in [b, s] {
            if v >= p.get() {
                return Err(Error::DigitOutOfRange {
                    digit: v,
                    p: p.get(),
                });
            }
        }
        let mut e = Self::identity(p, n);
        e.b[q] = b;
        e.s[q] = s;
        Ok(e)
    }

    /// One-qudit element from raw exponents.
    pub fn qudit(p: Prime, m: u32, b: u32, s: u32) -> Result<Self> {
        let mut e = Self::single(p, 1, 0, b, s)?;
        if m >= p.get() {
            return Err(Error::DigitOutOfRange {
                digit: m,
                p: p.get(),
            });
        }
        e.m = m;
        Ok(e)
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.b.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    #[inline]
    pub fn phase(&self) -> u32 {
        self.m
    }

    pub fn shifts(&self) -> FpVector {
        FpVector::new(self.p, self.b.clone()).expect("digits in range")
    }

    pub fn clocks(&self) -> FpVector {
        FpVector::new(self.p, self.s.clone()).expect("digits in range")
    }

    pub fn is_identity(&self) -> bool {
        self.m == 0 && self.support().is_empty()
    }

    /// Addresses acted on nontrivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.b[i] != 0 || self.s[i] != 0)
            .collect()
    }

    /// The element equal to applying `self` first and then `then`.
    pub fn then(&self, then: &PauliError) -> Result<PauliError> {
        if self.p != then.p {
            return Err(Error::ModulusMismatch);
        }
        if self.len() != then.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: then.len(),
            });
        }
        let p = self.p.get();
        // Z^{s2} X^{b1} = w^{s2 b1} X^{b1} Z^{s2}
        let cross = then
            .s
            .iter()
            .zip(&self.b)
            .fold(0, |acc, (s2, b1)| (acc + s2 * b1) % p);
        Ok(PauliError {
            p: self.p,
            m: (self.m + then.m + cross) % p,
            b: self
                .b
                .iter()
                .zip(&then.b)
                .map(|(x, y)| (x + y) % p)
                .collect(),
            s: self
                .s
                .iter()
                .zip(&then.s)
                .map(|(x, y)| (x + y) % p)
                .collect(),
        })
    }

    pub fn inverse(&self) -> PauliError {
        let p = self.p.get();
        let neg = |v: &u32| (p - v) % p;
        // (w^m X^b Z^s)^{-1} = w^{s.b - m} X^{-b} Z^{-s}
        let sb = self
            .s
            .iter()
            .zip(&self.b)
            .fold(0, |acc, (s, b)| (acc + s * b) % p);
        PauliError {
            p: self.p,
            m: (sb + p - self.m) % p,
            b: self.b.iter().map(neg).collect(),
            s: self.s.iter().map(neg).collect(),
        }
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        self.apply_at(state, 0)
    }

    /// Applies the element to addresses `offset..offset + len()` of `state`.
    pub fn apply_at(&self, state: &mut StateVector, offset: usize) -> Result<()> {
        if state.modulus() != self.p {
            return Err(Error::ModulusMismatch);
        }
        if offset + self.len() > state.qudits() {
            return Err(Error::DimensionMismatch {
                expected: state.qudits(),
                found: offset + self.len(),
            });
        }
        for q in self.support() {
            state.apply_pauli(offset + q, self.b[q], self.s[q])?;
        }
        if self.m != 0 {
            state.scale(root_of_unity(self.p, self.m));
        }
        Ok(())
    }

    /// Dense `p x p` matrix of a one-qudit element, row-major.
    pub fn qudit_matrix(&self) -> Result<Vec<Complex64>> {
        if self.len() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.len(),
            });
        }
        let pu = self.p.as_usize();
        let mut m = vec![Complex64::new(0.0, 0.0); pu * pu];
        for a in 0..self.p.get() {
            let row = ((a + self.b[0]) % self.p.get()) as usize;
            m[row * pu + a as usize] = root_of_unity(self.p, self.m + self.s[0] * a);
        }
        Ok(m)
    }

    /// Every element of the one-qudit group, `p^3` in all.
    pub fn qudit_group(p: Prime) -> impl Iterator<Item = PauliError> {
        let n = p.get();
        (0..n).flat_map(move |m| {
            (0..n).flat_map(move |b| {
                (0..n).map(move |s| PauliError {
                    p,
                    m,
                    b: vec![b],
                    s: vec![s],
                })
            })
        })
    }

    /// Parses a word over `B` and `S` into a one-qudit element.
    pub fn from_word(p: Prime, word: &str) -> Result<PauliError> {
        if word.eq_ignore_ascii_case("none") || word == "I" {
            return Ok(Self::identity(p, 1));
        }
        if word.is_empty() {
            return Err(Error::InvalidLabel(word.into()));
        }
        let mut acc = Self::identity(p, 1);
        for ch in word.chars() {
            let letter = letter(p, ch).ok_or_else(|| Error::InvalidLabel(word.into()))?;
            // acc * letter: the new letter acts before everything so far
            acc = letter.then(&acc)?;
        }
        Ok(acc)
    }

    /// Shortest word over `B`, `S` (ties broken alphabetically) for a
    /// one-qudit element; the identity is `None`.
    pub fn word(&self) -> Result<String> {
        if self.len() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.len(),
            });
        }
        if self.is_identity() {
            return Ok("None".into());
        }
        let letters = [
            ('B', letter(self.p, 'B').unwrap()),
            ('S', letter(self.p, 'S').unwrap()),
        ];
        let mut seen = Vec::new();
        let mut queue = VecDeque::new();
        let start = Self::identity(self.p, 1);
        seen.push(start.clone());
        queue.push_back((start, String::new()));
        while let Some((elem, word)) = queue.pop_front() {
            for (ch, l) in &letters {
                let next = l.then(&elem)?;
                if seen.contains(&next) {
                    continue;
                }
                let mut w = word.clone();
                w.push(*ch);
                if next == *self {
                    return Ok(w);
                }
                seen.push(next.clone());
                queue.push_back((next, w));
            }
        }
        unreachable!("B and S generate the one-qudit group")
    }
}

fn letter(p: Prime, ch: char) -> Option<PauliError> {
    match ch {
        'B' => Some(PauliError {
            p,
            m: 0,
            b: vec![1],
            s: vec![0],
        }),
        'S' => Some(PauliError {
            p,
            m: 0,
            b: vec![0],
            s: vec![1],
        }),
        _ => None,
    }
}

impl fmt::Display for PauliError {
    /// `w^m X^b Z^s` with the exponent vectors written as digit strings.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{} X^", self.m)?;
        self.b.iter().try_for_each(|d| write!(f, "{d}"))?;
        f.write_str(" Z^")?;
        self.s.iter().try_for_each(|d| write!(f, "{d}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(m: u32, b: u32, s: u32) -> PauliError {
        PauliError::qudit(Prime::TWO, m, b, s).unwrap()
    }

    #[test]
    fn qubit_words() {
        let expected = [
            ((0, 0, 0), "None"),
            ((0, 1, 0), "B"),
            ((0, 0, 1), "S"),
            ((0, 1, 1), "BS"),
            ((1, 1, 0), "SBS"),
            ((1, 0, 1), "BSB"),
            ((1, 1, 1), "SB"),
            ((1, 0, 0), "BSBS"),
        ];
        for ((m, b, s), word) in expected {
            let e = q(m, b, s);
            assert_eq!(e.word().unwrap(), word);
            assert_eq!(PauliError::from_word(Prime::TWO, word).unwrap(), e);
        }
    }

    #[test]
    fn group_law_and_inverse() {
        for p in [2, 3, 5] {
            let p = Prime::new(p).unwrap();
            let all: Vec<_> = PauliError::qudit_group(p).collect();
            assert_eq!(all.len(), p.as_usize().pow(3));
            for a in &all {
                assert!(a.then(&a.inverse()).unwrap().is_identity());
                assert!(a.inverse().then(a).unwrap().is_identity());
                let w = a.word().unwrap();
                assert_eq!(&PauliError::from_word(p, &w).unwrap(), a);
            }
        }
    }

    #[test]
    fn matrix_product_matches_composition() {
        let p = Prime::new(3).unwrap();
        for a in PauliError::qudit_group(p) {
            for b in PauliError::qudit_group(p).step_by(4) {
                let ab = a.then(&b).unwrap().qudit_matrix().unwrap();
                let (ma, mb) = (a.qudit_matrix().unwrap(), b.qudit_matrix().unwrap());
                for r in 0..3 {
                    for c in 0..3 {
                        let v: Complex64 = (0..3).map(|k| mb[r * 3 + k] * ma[k * 3 + c]).sum();
                        assert!((v - ab[r * 3 + c]).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_words() {
        assert!(PauliError::from_word(Prime::TWO, "BX").is_err());
        assert!(PauliError::from_word(Prime::TWO, "").is_err());
        assert!(PauliError::from_word(Prime::TWO, "none")
            .unwrap()
            .is_identity());
    }
}
