use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::{lcm, mulmod, powmod, signed_mod, Field, Scalar, ScalarError};

/// Dense exact matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, checking shape and field.
    pub fn new(
        field: Field,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
    ) -> Result<Self, ScalarError> {
        if entries.len() != rows * cols {
            return Err(ScalarError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        for e in &entries {
            field.check(e)?;
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    /// All-zero matrix.
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        let z = field.zero();
        Matrix {
            entries: vec![z; rows * cols],
            field,
            rows,
            cols,
        }
    }

    /// Identity matrix.
    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = m.field.one();
        }
        m
    }

    /// Builds entry `(i, j)` from `f(i, j)`.
    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let s = f(i, j);
                debug_assert!(field.contains(&s));
                entries.push(s);
            }
        }
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    /// The field of the entries.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Row count.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        &self.entries[i * self.cols + j]
    }

    /// Overwrites entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        assert!(self.field.contains(&v), "scalar from another field");
        self.entries[i * self.cols + j] = v;
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.field.clone(), self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    /// Submatrix on the given row and column indices.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(self.field.clone(), rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Matrix) -> Result<Self, ScalarError> {
        if self.rows != other.rows || self.cols != other.cols || self.field != other.field {
            return Err(ScalarError::Shape(
                "addition of incompatible matrices".into(),
            ));
        }
        Ok(Matrix::from_fn(
            self.field.clone(),
            self.rows,
            self.cols,
            |i, j| self.field.add(self.get(i, j), other.get(i, j)),
        ))
    }

    /// Matrix product.
    pub fn mul(&self, other: &Matrix) -> Result<Self, ScalarError> {
        if self.cols != other.rows || self.field != other.field {
            return Err(ScalarError::Shape(
                "product of incompatible matrices".into(),
            ));
        }
        let f = &self.field;
        Ok(Matrix::from_fn(f.clone(), self.rows, other.cols, |i, j| {
            let mut acc = f.zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_zero() {
                    acc = f.add(&acc, &f.mul(a, other.get(k, j)));
                }
            }
            acc
        }))
    }

    /// Rows with denominators cleared (rationals only): row `i` times the lcm of
    /// its denominators. Minors keep their zero pattern.
    pub(crate) fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = &self.entries[i * self.cols..(i + 1) * self.cols];
                let mut l = BigInt::one();
                for e in row {
                    if let Scalar::Rational(r) = e {
                        l = lcm(&l, r.denom());
                    }
                }
                row.iter()
                    .map(|e| match e {
                        Scalar::Rational(r) => r.numer() * (&l / r.denom()),
                        Scalar::Residue(_) => unreachable!("integer_rows on a prime field"),
                    })
                    .collect()
            })
            .collect()
    }

    /// Entries reduced into GF(q); `None` if a denominator vanishes mod q.
    pub fn reduce_mod(&self, q: u64) -> Option<Vec<Vec<u64>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.field.residue_mod(self.get(i, j), q))
                    .collect()
            })
            .collect()
    }

    /// Exact rank over the matrix's field.
    pub fn rank(&self) -> usize {
        match &self.field {
            Field::Rationals => bareiss_rank(self.integer_rows()),
            Field::Prime(_) => match self.field.modulus_u64() {
                Some(p) => rank_mod(self.reduce_mod(p).expect("residues reduce"), p),
                None => generic_rank(self),
            },
        }
    }

    /// Exact determinant.
    pub fn determinant(&self) -> Result<Scalar, ScalarError> {
        if self.rows != self.cols {
            return Err(ScalarError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(match &self.field {
            Field::Rationals => {
                let mut scale = BigInt::one();
                let rows = self.integer_rows();
                for i in 0..self.rows {
                    let mut l = BigInt::one();
                    for e in &self.entries[i * self.cols..(i + 1) * self.cols] {
                        if let Scalar::Rational(r) = e {
                            l = lcm(&l, r.denom());
                        }
                    }
                    scale *= l;
                }
                let d = bareiss_det(rows);
                self.field.from_ratio(&d, &scale)?
            }
            Field::Prime(_) => match self.field.modulus_u64() {
                Some(p) => {
                    let d = det_mod(self.reduce_mod(p).expect("residues reduce"), p);
                    self.field.from_u64(d)
                }
                None => generic_det(self),
            },
        })
    }

    /// Parses the text format: a header line `rows cols field`, then the
    /// entries in row-major order separated by whitespace.
    pub fn parse_text(text: &str) -> Result<Self, ScalarError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| ScalarError::Parse("empty matrix file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(ScalarError::Parse(format!(
                "line {hline}: header must be `rows cols field`"
            )));
        }
        let dim = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| ScalarError::Parse(format!("line {hline}: bad dimension `{s}`")))
        };
        let (rows, cols) = (dim(parts[0])?, dim(parts[1])?);
        let field =
            Field::parse(parts[2]).map_err(|e| ScalarError::Parse(format!("line {hline}: {e}")))?;
        let mut entries = Vec::with_capacity(rows * cols);
        for (n, line) in lines {
            for (col, tok) in line.split_whitespace().enumerate() {
                let s = field
                    .parse_scalar(tok)
                    .map_err(|e| ScalarError::Parse(format!("line {n}, token {}: {e}", col + 1)))?;
                entries.push(s);
            }
        }
        if entries.len() != rows * cols {
            return Err(ScalarError::Parse(format!(
                "expected {} entries, found {}",
                rows * cols,
                entries.len()
            )));
        }
        Matrix::new(field, rows, cols, entries)
    }

    /// Renders the text format, one matrix row per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.rows, self.cols, self.field);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| alloc::string::ToString::to_string(self.get(i, j)))
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// Fraction-free elimination; returns the rank.
pub(crate) fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let lead = core::mem::take(&mut row[col]);
            for j in col + 1..cols {
                let v = &row[j] * &pivot - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Fraction-free determinant of a square integer matrix.
pub(crate) fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = pivot_row[k].clone();
        for row in rest.iter_mut() {
            let lead = core::mem::take(&mut row[k]);
            for j in k + 1..n {
                let v = &row[j] * &pivot - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot;
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rank over GF(q), word-sized q.
pub(crate) fn rank_mod(mut a: Vec<Vec<u64>>, q: u64) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(p, rank);
        let inv = powmod(a[rank][col], q - 2, q);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            if row[col] == 0 {
                continue;
            }
            let f = mulmod(row[col], inv, q);
            for j in col..cols {
                row[j] = (row[j] + q - mulmod(f, pivot_row[j], q)) % q;
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant over GF(q), word-sized q.
pub(crate) fn det_mod(mut a: Vec<Vec<u64>>, q: u64) -> u64 {
    let n = a.len();
    let mut det = 1 % q;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            det = (q - det) % q;
        }
        det = mulmod(det, a[k][k], q);
        let inv = powmod(a[k][k], q - 2, q);
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let f = mulmod(row[k], inv, q);
            for j in k..n {
                row[j] = (row[j] + q - mulmod(f, pivot_row[j], q)) % q;
            }
        }
    }
    det
}

/// Integer matrix reduced into GF(q).
pub(crate) fn int_rows_mod(a: &[Vec<BigInt>], q: u64) -> Vec<Vec<u64>> {
    a.iter()
        .map(|r| r.iter().map(|v| signed_mod(v, q)).collect())
        .collect()
}

fn generic_echelon(m: &Matrix) -> (usize, Scalar) {
    let f = m.field();
    let mut a: Vec<Vec<Scalar>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut rank = 0;
    let mut det = f.one();
    for col in 0..m.cols() {
        if rank == m.rows() {
            break;
        }
        let Some(p) = (rank..m.rows()).find(|&r| !a[r][col].is_zero()) else {
            det = f.zero();
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            det = f.neg(&det);
        }
        det = f.mul(&det, &a[rank][col]);
        let inv = f.inv(&a[rank][col]).expect("nonzero pivot");
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = f.mul(&row[col], &inv);
            for j in col..m.cols() {
                row[j] = f.sub(&row[j], &f.mul(&factor, &pivot_row[j]));
            }
        }
        rank += 1;
    }
    (rank, det)
}

fn generic_rank(m: &Matrix) -> usize {
    generic_echelon(m).0
}

fn generic_det(m: &Matrix) -> Scalar {
    let (rank, det) = generic_echelon(m);
    if rank < m.rows() {
        m.field().zero()
    } else {
        det
    }
}
