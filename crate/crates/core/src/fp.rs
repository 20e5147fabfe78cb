//! Exact arithmetic over the prime field F_p.
//!
//! Everything here is small and dense: vectors and matrices hold raw `u32`
//! residues and carry the modulus alongside, so every entry of a value shares
//! one `p` by construction. Moduli are restricted to primes `<= MAX_PRIME`
//! because the admissibility search on top of this module is exhaustive.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`Prime::new`].
pub const MAX_PRIME: u32 = 7;

/// A validated prime modulus `p <= MAX_PRIME`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub const TWO: Prime = Prime(2);

    pub fn new(p: u32) -> Result<Self> {
        if p < 2
            || (2..p)
                .take_while(|d| d * d <= p)
                .any(|d| p.is_multiple_of(d))
        {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(Error::PrimeTooLarge { p, max: MAX_PRIME });
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// `p^k`, or `None` on overflow.
    pub fn checked_pow(self, k: usize) -> Option<usize> {
        let mut acc: usize = 1;
        for _ in 0..k {
            acc = acc.checked_mul(self.as_usize())?;
        }
        Some(acc)
    }

    #[inline]
    pub(crate) fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of F_p.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    p: Prime,
}

impl Fp {
    pub fn new(value: u32, p: Prime) -> Result<Self> {
        if value >= p.get() {
            return Err(Error::DigitOutOfRange {
                digit: value,
                p: p.get(),
            });
        }
        Ok(Fp { value, p })
    }

    /// Reduces an arbitrary integer into the field.
    pub fn from_i64(v: i64, p: Prime) -> Self {
        Fp {
            value: p.reduce(v),
            p,
        }
    }

    pub fn zero(p: Prime) -> Self {
        Fp { value: 0, p }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inverse(self) -> Option<Fp> {
        if self.value == 0 {
            return None;
        }
        let p = self.p.get() as u64;
        let (mut base, mut exp, mut acc) = (self.value as u64, p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Some(Fp {
            value: acc as u32,
            p: self.p,
        })
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            value: (self.value + rhs.value) % self.p.get(),
            p: self.p,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            value: (self.value + self.p.get() - rhs.value) % self.p.get(),
            p: self.p,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.p, rhs.p);
        Fp {
            value: self.value * rhs.value % self.p.get(),
            p: self.p,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: (self.p.get() - self.value) % self.p.get(),
            p: self.p,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A column vector over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpVector {
    p: Prime,
    entries: Vec<u32>,
}

impl FpVector {
    pub fn new(p: Prime, entries: Vec<u32>) -> Result<Self> {
        if let Some(&digit) = entries.iter().find(|&&d| d >= p.get()) {
            return Err(Error::DigitOutOfRange { digit, p: p.get() });
        }
        Ok(FpVector { p, entries })
    }

    pub fn zeros(p: Prime, len: usize) -> Self {
        FpVector {
            p,
            entries: alloc::vec![0; len],
        }
    }

    /// Unit vector `e_i`.
    pub fn unit(p: Prime, len: usize, i: usize) -> Self {
        let mut v = Self::zeros(p, len);
        v.entries[i] = 1;
        v
    }

    /// Radix-p expansion of `index` with entry 0 as the most significant digit.
    pub fn from_index(p: Prime, len: usize, mut index: usize) -> Self {
        let mut entries = alloc::vec![0; len];
        for slot in entries.iter_mut().rev() {
            *slot = (index % p.as_usize()) as u32;
            index /= p.as_usize();
        }
        FpVector { p, entries }
    }

    /// Inverse of [`FpVector::from_index`].
    pub fn to_index(&self) -> usize {
        self.entries
            .iter()
            .fold(0usize, |acc, &d| acc * self.p.as_usize() + d as usize)
    }

    /// Every vector of F_p^len in increasing radix order.
    pub fn all(p: Prime, len: usize) -> impl Iterator<Item = FpVector> {
        let count = p
            .checked_pow(len)
            .expect("F_p^len enumeration overflows usize");
        (0..count).map(move |i| FpVector::from_index(p, len, i))
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn digits(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Fp {
        Fp {
            value: self.entries[i],
            p: self.p,
        }
    }

    pub fn set(&mut self, i: usize, value: Fp) {
        debug_assert_eq!(value.p, self.p);
        self.entries[i] = value.value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&d| d == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&d| d != 0).count()
    }

    pub fn dot(&self, other: &FpVector) -> Result<Fp> {
        check_len(self.len(), other.len())?;
        let p = self.p.get();
        let v = self
            .entries
            .iter()
            .zip(&other.entries)
            .fold(0u32, |acc, (&a, &b)| (acc + a * b) % p);
        Ok(Fp {
            value: v,
            p: self.p,
        })
    }

    pub fn checked_add(&self, other: &FpVector) -> Result<FpVector> {
        check_len(self.len(), other.len())?;
        let p = self.p.get();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Ok(FpVector { p: self.p, entries })
    }

    pub fn negated(&self) -> FpVector {
        let p = self.p.get();
        FpVector {
            p: self.p,
            entries: self.entries.iter().map(|&a| (p - a) % p).collect(),
        }
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &FpVector) -> FpVector {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        FpVector { p: self.p, entries }
    }

    /// Entries at the given positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> Result<FpVector> {
        let entries = positions
            .iter()
            .map(|&i| {
                self.entries.get(i).copied().ok_or(Error::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FpVector { p: self.p, entries })
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Digits concatenate for p < 10.
        for d in &self.entries {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A dense row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl FpMatrix {
    pub fn new(p: Prime, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        check_len(rows * cols, entries.len())?;
        if let Some(&digit) = entries.iter().find(|&&d| d >= p.get()) {
            return Err(Error::DigitOutOfRange { digit, p: p.get() });
        }
        Ok(FpMatrix {
            p,
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from equally long rows.
    pub fn from_rows<R: AsRef<[u32]>>(p: Prime, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_len(cols, r.as_ref().len())?;
            entries.extend_from_slice(r.as_ref());
        }
        Self::new(p, rows.len(), cols, entries)
    }

    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            entries: alloc::vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn modulus(&self) -> Prime {
        self.p
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn raw(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    pub fn get(&self, r: usize, c: usize) -> Fp {
        Fp {
            value: self.raw(r, c),
            p: self.p,
        }
    }

    pub fn set(&mut self, r: usize, c: usize, value: u32) -> Result<()> {
        if value >= self.p.get() {
            return Err(Error::DigitOutOfRange {
                digit: value,
                p: self.p.get(),
            });
        }
        if r >= self.rows || c >= self.cols {
            return Err(Error::IndexOutOfRange {
                index: r.max(c),
                len: self.rows.max(self.cols),
            });
        }
        self.entries[r * self.cols + c] = value;
        Ok(())
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&d| d == 0)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.raw(r, c);
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self.raw(r, c) == self.raw(c, r)))
    }

    /// Square, symmetric and with a zero diagonal: the adjacency matrix of an
    /// undirected simple graph with F_p edge weights.
    pub fn is_adjacency(&self) -> bool {
        self.is_symmetric() && (0..self.rows).all(|i| self.raw(i, i) == 0)
    }

    /// The block with rows `row_set` and columns `col_set`, each sorted ascending.
    pub fn submatrix(&self, row_set: &[usize], col_set: &[usize]) -> Result<FpMatrix> {
        let mut rs = row_set.to_vec();
        let mut cs = col_set.to_vec();
        rs.sort_unstable();
        cs.sort_unstable();
        if let Some(&bad) = rs.iter().find(|&&r| r >= self.rows) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: self.rows,
            });
        }
        if let Some(&bad) = cs.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: self.cols,
            });
        }
        let mut entries = Vec::with_capacity(rs.len() * cs.len());
        for &r in &rs {
            entries.extend(cs.iter().map(|&c| self.raw(r, c)));
        }
        Ok(FpMatrix {
            p: self.p,
            rows: rs.len(),
            cols: cs.len(),
            entries,
        })
    }

    pub fn mul_vec(&self, v: &FpVector) -> Result<FpVector> {
        check_len(self.cols, v.len())?;
        let p = self.p.get();
        let entries = (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v.digits())
                    .fold(0u32, |acc, (&a, &b)| (acc + a * b) % p)
            })
            .collect();
        Ok(FpVector { p: self.p, entries })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        check_len(self.rows, other.rows)?;
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(other.row(r));
        }
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows,
            cols,
            entries,
        })
    }

    /// Rank by Gaussian elimination over F_p.
    pub fn rank(&self) -> usize {
        let p = self.p;
        let mut m = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| m[r * cols + col] != 0) else {
                continue;
            };
            for c in 0..cols {
                m.swap(pivot * cols + c, rank * cols + c);
            }
            let inv = Fp {
                value: m[rank * cols + col],
                p,
            }
            .inverse()
            .expect("nonzero pivot")
            .value;
            for c in 0..cols {
                m[rank * cols + c] = m[rank * cols + c] * inv % p.get();
            }
            for r in 0..rows {
                let factor = m[r * cols + col];
                if r != rank && factor != 0 {
                    for c in 0..cols {
                        let sub = factor * m[rank * cols + c] % p.get();
                        m[r * cols + c] = (m[r * cols + c] + p.get() - sub) % p.get();
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// True iff the matrix is square and has full rank over F_p.
    pub fn is_invertible(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rank() == self.rows)
    }

    /// `sum_{i<j} A_ij d_i d_j mod p`, the integer-valued reading of `1/2 d^T A d`.
    ///
    /// Counting each unordered pair once keeps the value well defined for
    /// `p = 2`, where `1/2` has no meaning in the field. Only adjacency
    /// matrices (symmetric, zero diagonal) are accepted.
    pub fn quadratic_form(&self, d: &FpVector) -> Result<Fp> {
        if !self.is_adjacency() {
            return Err(Error::NotAdjacency(
                "quadratic form needs a symmetric zero-diagonal matrix",
            ));
        }
        check_len(self.rows, d.len())?;
        Ok(Fp {
            value: self.pair_sum(d.digits()),
            p: self.p,
        })
    }

    /// Unchecked edge sum over raw digits; callers guarantee shape.
    pub(crate) fn pair_sum(&self, d: &[u32]) -> u32 {
        let p = self.p.get();
        let mut acc = 0u32;
        for i in 0..self.rows {
            if d[i] == 0 {
                continue;
            }
            let row = self.row(i);
            for j in i + 1..self.cols {
                acc = (acc + row[j] * d[i] * d[j]) % p;
            }
        }
        acc
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for (c, v) in self.row(r).iter().enumerate() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// All `(d_X, d_E)` with `A_IX d_X + A_IE d_E = 0`, by exhaustive enumeration
/// over `F_p^{|X|} x F_p^{|E|}`.
pub fn kernel_pairs(a_ix: &FpMatrix, a_ie: &FpMatrix) -> Result<Vec<(FpVector, FpVector)>> {
    if a_ix.rows != a_ie.rows {
        return Err(Error::DimensionMismatch {
            expected: a_ix.rows,
            found: a_ie.rows,
        });
    }
    if a_ix.p != a_ie.p {
        return Err(Error::ModulusMismatch);
    }
    let p = a_ix.p;
    let stacked = a_ix.hstack(a_ie)?;
    let (nx, ne) = (a_ix.cols, a_ie.cols);
    let mut out = Vec::new();
    for d in FpVector::all(p, nx + ne) {
        if stacked.mul_vec(&d)?.is_zero() {
            let (dx, de) = d.digits().split_at(nx);
            out.push((
                FpVector {
                    p,
                    entries: dx.to_vec(),
                },
                FpVector {
                    p,
                    entries: de.to_vec(),
                },
            ));
        }
    }
    Ok(out)
}
