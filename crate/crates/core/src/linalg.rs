//! Exact dense linear algebra over prime fields F_p with p ≤ 997.
//!
//! Vectors are rows and matrices act by right multiplication, so the
//! composite "f then g" is the product `f.mul(&g)`. Every entry is kept
//! reduced in `[0, p)`; products of two residues fit comfortably in `u32`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported modulus.
pub const MAX_PRIME: u32 = 997;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Validates a modulus for use throughout the crate.
pub fn check_prime(p: u32) -> Result<u32> {
    if p <= MAX_PRIME && is_prime(p) {
        Ok(p)
    } else {
        Err(Error::InvalidPrime(p))
    }
}

/// Multiplicative inverse of a nonzero residue.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0, "inverting zero mod {p}");
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u32
}

/// Reduces an arbitrary integer into `[0, p)`.
pub fn reduce(x: i64, p: u32) -> u32 {
    x.rem_euclid(p as i64) as u32
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

/// Reduced row echelon form together with rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from row-major integer data, reducing every entry.
    pub fn from_vec(p: u32, rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(FpMatrix { p, rows, cols, entries: data.into_iter().map(|x| reduce(x, p)).collect() })
    }

    /// Builds a matrix from a list of rows. All rows must have length `cols`.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| reduce(x, p)));
        }
        Ok(FpMatrix { p, rows: rows.len(), cols, entries: data })
    }

    pub(crate) fn from_raw(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        debug_assert!(entries.iter().all(|&x| x < p));
        FpMatrix { p, rows, cols, entries }
    }

    /// A single row vector.
    pub fn row_vector(p: u32, v: Vec<u32>) -> Self {
        let n = v.len();
        Self::from_raw(p, 1, n, v)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_matrix(&self, r: usize) -> FpMatrix {
        FpMatrix::from_raw(self.p, 1, self.cols, self.row(r).to_vec())
    }

    /// Invariant check: entries reduced and the shape consistent.
    pub fn is_well_formed(&self) -> bool {
        is_prime(self.p)
            && self.entries.len() == self.rows * self.cols
            && self.entries.iter().all(|&x| x < self.p)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.p, self.rows)
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.entries[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.p, other.p, "moduli differ");
        assert_eq!(
            self.cols, other.rows,
            "product of {}x{} and {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let p = self.p as u64;
        let n = other.cols;
        let mut acc = vec![0u64; n];
        let mut out = Vec::with_capacity(self.rows * n);
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as u64;
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot += a * b as u64;
                }
                // keep the accumulator far from overflow
                if k % 4096 == 4095 {
                    acc.iter_mut().for_each(|s| *s %= p);
                }
            }
            out.extend(acc.iter().map(|&s| (s % p) as u32));
        }
        FpMatrix::from_raw(self.p, self.rows, n, out)
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.shape(), other.shape(), "sum of differently shaped matrices");
        let p = self.p;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| (a + b) % p).collect();
        FpMatrix::from_raw(p, self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.shape(), other.shape(), "difference of differently shaped matrices");
        let p = self.p;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| (a + p - b) % p).collect();
        FpMatrix::from_raw(p, self.rows, self.cols, entries)
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        let p = self.p;
        let c = c % p;
        let entries = self.entries.iter().map(|&a| a * c % p).collect();
        FpMatrix::from_raw(p, self.rows, self.cols, entries)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: u32, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.shape(), other.shape());
        let p = self.p;
        let c = c % p;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| (a + c * b) % p).collect();
        FpMatrix::from_raw(p, self.rows, self.cols, entries)
    }

    pub fn pow(&self, mut e: usize) -> FpMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols, "vstack with different column counts");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        FpMatrix::from_raw(self.p, self.rows + other.rows, self.cols, entries)
    }

    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows, "hstack with different row counts");
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(other.row(r));
        }
        FpMatrix::from_raw(self.p, self.rows, cols, entries)
    }

    pub fn vstack_all(p: u32, cols: usize, parts: &[FpMatrix]) -> FpMatrix {
        let mut entries = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            entries.extend_from_slice(&m.entries);
            rows += m.rows;
        }
        FpMatrix::from_raw(p, rows, cols, entries)
    }

    pub fn block_diag(p: u32, blocks: &[&FpMatrix]) -> FpMatrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = FpMatrix::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &FpMatrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols);
        for r in 0..b.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.entries[dst..dst + b.cols].copy_from_slice(b.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> FpMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut entries = Vec::with_capacity(rows * cols);
        for r in r0..r0 + rows {
            let s = r * self.cols + c0;
            entries.extend_from_slice(&self.entries[s..s + cols]);
        }
        FpMatrix::from_raw(self.p, rows, cols, entries)
    }

    pub fn select_rows(&self, idx: &[usize]) -> FpMatrix {
        let mut entries = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            entries.extend_from_slice(self.row(r));
        }
        FpMatrix::from_raw(self.p, idx.len(), self.cols, entries)
    }

    pub fn select_cols(&self, idx: &[usize]) -> FpMatrix {
        let mut entries = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            entries.extend(idx.iter().map(|&c| row[c]));
        }
        FpMatrix::from_raw(self.p, self.rows, idx.len(), entries)
    }

    /// Flattens into a `1 x (rows*cols)` row vector.
    pub fn flatten(&self) -> FpMatrix {
        FpMatrix::from_raw(self.p, 1, self.rows * self.cols, self.entries.clone())
    }

    pub fn reshape(&self, rows: usize, cols: usize) -> FpMatrix {
        assert_eq!(rows * cols, self.entries.len());
        FpMatrix::from_raw(self.p, rows, cols, self.entries.clone())
    }

    /// Gauss–Jordan elimination in place, only choosing pivots among the first
    /// `pivot_cols` columns. Returns the pivot columns.
    fn eliminate(&mut self, pivot_cols: usize) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..pivot_cols {
            if lead == self.rows {
                break;
            }
            let Some(r) = (lead..self.rows).find(|&r| self.entries[r * cols + c] != 0) else {
                continue;
            };
            if r != lead {
                for j in 0..cols {
                    self.entries.swap(r * cols + j, lead * cols + j);
                }
            }
            let inv = inv_mod(self.entries[lead * cols + c], p);
            for j in c..cols {
                let v = &mut self.entries[lead * cols + j];
                *v = *v * inv % p;
            }
            let pivot_row: Vec<u32> = self.entries[lead * cols + c..(lead + 1) * cols].to_vec();
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.entries[r * cols + c];
                if factor == 0 {
                    continue;
                }
                let neg = p - factor;
                let row = &mut self.entries[r * cols + c..(r + 1) * cols];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + neg * y) % p;
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.eliminate(self.cols);
        Rref { rank: pivots.len(), matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis (in reduced echelon form) of the row space.
    pub fn row_basis(&self) -> FpMatrix {
        let r = self.rref();
        r.matrix.block(0, 0, r.rank, self.cols)
    }

    /// Basis rows of `{x : x·self = 0}`, in reduced echelon form.
    pub fn left_kernel(&self) -> FpMatrix {
        let aug = self.hstack(&FpMatrix::identity(self.p, self.rows));
        let mut m = aug;
        let pivots = m.eliminate(self.cols);
        let rank = pivots.len();
        m.block(rank, self.cols, self.rows - rank, self.rows).row_basis()
    }

    /// Basis columns of `{y : self·y = 0}`, returned as rows.
    pub fn right_kernel(&self) -> FpMatrix {
        self.transpose().left_kernel()
    }

    /// Solves `x·self = b` row by row. Free variables are set to zero, so the
    /// answer is canonical. Returns `Ok(None)` when some row is inconsistent.
    pub fn solve_row(&self, b: &FpMatrix) -> Result<Option<FpMatrix>> {
        if b.cols != self.cols || b.p != self.p {
            return Err(Error::DimensionMismatch(format!(
                "solve_row: A is {}x{} but b is {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let n = self.rows;
        // x·A = b  <=>  Aᵀ·xᵀ = bᵀ
        let mut aug = self.transpose().hstack(&b.transpose());
        let pivots = aug.eliminate(n);
        let rank = pivots.len();
        for r in rank..aug.rows {
            if (n..aug.cols).any(|c| aug.get(r, c) != 0) {
                return Ok(None);
            }
        }
        let mut x = FpMatrix::zeros(self.p, b.rows, n);
        for (i, &pc) in pivots.iter().enumerate() {
            for k in 0..b.rows {
                x.set(k, pc, aug.get(i, n + k));
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = self.hstack(&FpMatrix::identity(self.p, n));
        let pivots = aug.eliminate(n);
        if pivots.len() < n {
            return None;
        }
        Some(aug.block(0, n, n, n))
    }

    /// Characteristic polynomial `det(x·I - self)`, coefficients low to high.
    pub fn charpoly(&self) -> Vec<u32> {
        assert!(self.is_square());
        let p = self.p;
        let n = self.rows;
        let mut a: Vec<Vec<u32>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        // Hessenberg reduction by similarity transforms.
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| a[i][m - 1] != 0) else { continue };
            if i != m {
                a.swap(i, m);
                for row in a.iter_mut() {
                    row.swap(i, m);
                }
            }
            let inv = inv_mod(a[m][m - 1], p);
            for j in m + 1..n {
                let u = a[j][m - 1] * inv % p;
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    a[j][c] = (a[j][c] + (p - u) * a[m][c]) % p;
                }
                for row in a.iter_mut() {
                    row[m] = (row[m] + u * row[j]) % p;
                }
            }
        }
        // Recurrence on leading principal minors of x·I - H.
        let mut polys: Vec<Vec<u32>> = vec![vec![1 % p]];
        for m in 0..n {
            let prev = &polys[m];
            let mut next = vec![0u32; m + 2];
            for (k, &c) in prev.iter().enumerate() {
                next[k + 1] = (next[k + 1] + c) % p;
                next[k] = (next[k] + (p - a[m][m]) * c) % p;
            }
            let mut prod = 1u32;
            for i in (0..m).rev() {
                prod = prod * a[i + 1][i] % p;
                let coeff = a[i][m] * prod % p;
                if coeff == 0 {
                    continue;
                }
                for (k, &c) in polys[i].iter().enumerate() {
                    next[k] = (next[k] + (p - coeff) * c % p) % p;
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }

    /// Evaluates the polynomial `coeffs` (low to high) at this square matrix.
    pub fn eval_poly(&self, coeffs: &[u32]) -> FpMatrix {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = FpMatrix::zeros(self.p, n, n);
        for &c in coeffs.iter().rev() {
            acc = acc.mul(self).add(&FpMatrix::identity(self.p, n).scale(c));
        }
        acc
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Polynomial helpers over F_p (coefficients low to high).
pub mod poly {
    use super::inv_mod;

    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        a
    }

    pub fn eval(a: &[u32], x: u32, p: u32) -> u32 {
        a.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    /// Quotient and remainder of `a / b`; `b` must have a nonzero leading coefficient.
    pub fn divmod(a: &[u32], b: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (vec![0], r);
        }
        let lead_inv = inv_mod(*b.last().unwrap(), p);
        let mut q = vec![0u32; r.len() - b.len() + 1];
        while r.len() >= b.len() && !(r.len() == 1 && r[0] == 0) {
            let shift = r.len() - b.len();
            let c = *r.last().unwrap() * lead_inv % p;
            q[shift] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * bi % p) % p;
            }
            r = trim(r);
            if shift == 0 {
                break;
            }
        }
        (trim(q), r)
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect();
        trim(out)
    }

    pub fn is_zero(a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn degree(a: &[u32]) -> usize {
        trim(a.to_vec()).len() - 1
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
        while !is_zero(&y) {
            let (_, r) = divmod(&x, &y, p);
            x = y;
            y = r;
        }
        monic(x, p)
    }

    pub fn monic(a: Vec<u32>, p: u32) -> Vec<u32> {
        let a = trim(a);
        let lead = *a.last().unwrap();
        if lead == 0 {
            return a;
        }
        let inv = inv_mod(lead, p);
        a.into_iter().map(|c| c * inv % p).collect()
    }

    /// `base^e mod modulus`.
    pub fn powmod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
        let mut acc = vec![1 % p];
        let mut b = divmod(base, modulus, p).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = divmod(&mul(&acc, &b, p), modulus, p).1;
            }
            e >>= 1;
            if e > 0 {
                b = divmod(&mul(&b, &b, p), modulus, p).1;
            }
        }
        acc
    }

    /// Distinct-degree factorisation of a monic squarefree polynomial:
    /// pairs `(d, product of the irreducible factors of degree d)`.
    pub fn distinct_degree(f: &[u32], p: u32) -> Vec<(usize, Vec<u32>)> {
        let mut rest = monic(f.to_vec(), p);
        let mut out = Vec::new();
        let x = vec![0, 1];
        let mut h = x.clone();
        let mut d = 0;
        while degree(&rest) > 0 {
            d += 1;
            if 2 * d > degree(&rest) {
                out.push((degree(&rest), rest.clone()));
                break;
            }
            h = powmod(&h, p as u64, &rest, p);
            let g = gcd(&rest, &sub(&h, &x, p), p);
            if degree(&g) > 0 {
                out.push((d, g.clone()));
                rest = divmod(&rest, &g, p).0;
                h = divmod(&h, &rest, p).1;
            }
        }
        out
    }

    /// Squarefree kernel `f / gcd(f, f')`, valid when every factor has
    /// multiplicity below `p` or `f'` is nonzero.
    pub fn radical_part(f: &[u32], p: u32) -> Vec<u32> {
        let deriv: Vec<u32> =
            f.iter().enumerate().skip(1).map(|(i, &c)| (i as u32 % p) * c % p).collect();
        let deriv = trim(if deriv.is_empty() { vec![0] } else { deriv });
        if is_zero(&deriv) {
            return monic(f.to_vec(), p);
        }
        let g = gcd(f, &deriv, p);
        monic(divmod(f, &g, p).0, p)
    }

    /// Roots in F_p with multiplicities, by exhaustive evaluation.
    pub fn roots(a: &[u32], p: u32) -> Vec<(u32, usize)> {
        let mut out = Vec::new();
        for x in 0..p {
            let mut f = trim(a.to_vec());
            let mut mult = 0;
            loop {
                if f.len() <= 1 || eval(&f, x, p) != 0 {
                    break;
                }
                let (q, _) = divmod(&f, &[(p - x) % p, 1], p);
                f = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((x, mult));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[&[i64]]) -> FpMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        FpMatrix::from_rows(p, cols, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = FpMatrix::identity(3, 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        let z = FpMatrix::zeros(2, 2, 4);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_rank_one_over_f5() {
        // hand reduction: row2 - 2*row1 = 0
        let r = m(5, &[&[1, 2], &[2, 4]]).rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.matrix, m(5, &[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn left_kernel_cases() {
        assert_eq!(FpMatrix::identity(7, 4).left_kernel().rows(), 0);
        assert_eq!(FpMatrix::zeros(3, 3, 5).left_kernel().rows(), 3);
        let a = m(3, &[&[1, 0], &[2, 0]]);
        let k = a.left_kernel();
        // exhaustive: the nonzero x with x·A = 0 are the multiples of [1, 1]
        let mut sols = vec![];
        for x0 in 0..3 {
            for x1 in 0..3 {
                let x = m(3, &[&[x0, x1]]);
                if x.mul(&a).is_zero() && (x0, x1) != (0, 0) {
                    sols.push((x0, x1));
                }
            }
        }
        assert_eq!(sols, vec![(1, 1), (2, 2)]);
        assert_eq!(k, m(3, &[&[1, 1]]));
    }

    #[test]
    fn solve_row_cases() {
        let b = m(7, &[&[3, 4, 5], &[1, 0, 6]]);
        assert_eq!(FpMatrix::identity(7, 3).solve_row(&b).unwrap(), Some(b.clone()));
        let zero = FpMatrix::zeros(7, 3, 3);
        assert_eq!(zero.solve_row(&b).unwrap(), None);
        let a = m(2, &[&[1, 1], &[0, 1]]);
        let rhs = m(2, &[&[0, 1]]);
        let x = a.solve_row(&rhs).unwrap().unwrap();
        assert_eq!(x, m(2, &[&[0, 1]]));
        let brute: Vec<_> = (0..4)
            .map(|i| m(2, &[&[i & 1, i >> 1]]))
            .filter(|x| x.mul(&a) == rhs)
            .collect();
        assert_eq!(brute, vec![x]);
        assert!(a.solve_row(&FpMatrix::zeros(2, 1, 3)).is_err());
    }

    #[test]
    fn inverse_and_charpoly() {
        let a = m(5, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        // x^2 - 3x + 1
        assert_eq!(a.charpoly(), vec![1, 2, 1]);
        assert!(a.eval_poly(&a.charpoly()).is_zero());
        assert!(m(3, &[&[1, 2], &[2, 1]]).inverse().is_none());
    }

    #[test]
    fn poly_roots() {
        // (x-1)^2 (x-3) over F_5 = x^3 - 5x^2 + 7x - 3
        let f = vec![reduce(-3, 5), 7 % 5, 0, 1];
        assert_eq!(poly::roots(&f, 5), vec![(1, 2), (3, 1)]);
    }

    #[test]
    fn distinct_degree_split() {
        // (x^2 + 1)(x + 1) over F_3: x^2 + 1 is irreducible mod 3
        let f = poly::mul(&[1, 0, 1], &[1, 1], 3);
        let parts = poly::distinct_degree(&f, 3);
        assert_eq!(parts, vec![(1, vec![1, 1]), (2, vec![1, 0, 1])]);
    }

    #[test]
    fn inverses_mod_p() {
        for p in [2, 3, 5, 997] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a, p) % p, 1);
            }
        }
    }
}
