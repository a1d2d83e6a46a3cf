use std::fmt;

use crate::echelon::{kernel_vectors, Reducer};
use crate::error::{Error, Result};
use crate::field::{Prime, Scalar};
use crate::subspace::Subspace;

/// Dense row-major matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// Output of [`Matrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    /// Builds a matrix from residues. Entries must already lie in `[0, p)`.
    pub fn new(p: Prime, rows: usize, cols: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape("matrix entries", rows * cols, data.len()));
        }
        if let Some(&bad) = data.iter().find(|&&x| x >= p.get()) {
            return Err(Error::Precondition(format!(
                "entry {bad} is not reduced modulo {p}"
            )));
        }
        Ok(Matrix {
            p,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from field elements, which must all share one modulus.
    pub fn from_scalars(rows: usize, cols: usize, entries: &[Scalar]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::shape("matrix entries", rows * cols, entries.len()));
        }
        let Some(first) = entries.first() else {
            return Err(Error::Precondition(
                "cannot infer the modulus of an empty matrix".into(),
            ));
        };
        let p = first.modulus();
        let mut data = Vec::with_capacity(entries.len());
        for s in entries {
            if s.modulus() != p {
                return Err(Error::ModulusMismatch {
                    left: p.get(),
                    right: s.modulus().get(),
                });
            }
            data.push(s.value());
        }
        Ok(Matrix {
            p,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from integer rows, reducing each entry mod p.
    pub fn from_rows<R: AsRef<[i64]>>(p: Prime, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::shape("matrix row", cols, r.len()));
            }
            data.extend(r.iter().map(|&x| p.reduce(x)));
        }
        Ok(Matrix {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub(crate) fn from_vecs(p: Prime, cols: usize, rows: Vec<Vec<u8>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            debug_assert_eq!(r.len(), cols);
            data.extend(r);
        }
        Matrix {
            p,
            rows: n,
            cols,
            data,
        }
    }

    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        Matrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Matrix::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        debug_assert!(v < self.p.get());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u8]> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn same_modulus(&self, other: &Matrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        Ok(())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.same_modulus(other)?;
        if self.cols != other.rows {
            return Err(Error::shape("matrix product", self.cols, other.rows));
        }
        let mut out = Matrix::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            let acc = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let f = self.get(r, k);
                if f != 0 {
                    self.p.axpy(acc, f, other.row(k));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.cols {
            return Err(Error::shape("matrix-vector product", self.cols, v.len()));
        }
        let p = self.p.get() as u32;
        Ok(self
            .row_iter()
            .map(|row| {
                let s = row
                    .iter()
                    .zip(v)
                    .fold(0u32, |acc, (&a, &b)| (acc + a as u32 * b as u32) % p);
                s as u8
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |p, a, b| p.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |p, a, b| p.sub(a, b))
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(Prime, u8, u8) -> u8) -> Result<Matrix> {
        self.same_modulus(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::shape(
                "elementwise operation",
                self.rows * self.cols,
                other.rows * other.cols,
            ));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(self.p, a, b))
            .collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn scale(&self, s: u8) -> Matrix {
        let data = self.data.iter().map(|&a| self.p.mul(a, s)).collect();
        Matrix { data, ..*self }
    }

    /// Canonical reduced row-echelon form, rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let mut red = Reducer::new(self.p, self.cols);
        for row in self.row_iter() {
            if red.rank() == self.cols {
                break;
            }
            red.push(row.to_vec());
        }
        let rank = red.rank();
        let (rows, pivots) = red.into_rref();
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for r in rows {
            data.extend(r);
        }
        data.resize(self.rows * self.cols, 0);
        Rref {
            matrix: Matrix { data, ..*self },
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// `{v : M v = 0}`.
    pub fn nullspace(&self) -> Subspace {
        let Rref { matrix, rank, pivots } = self.rref();
        let rows: Vec<Vec<u8>> = (0..rank).map(|r| matrix.row(r).to_vec()).collect();
        let basis = kernel_vectors(self.p, self.cols, &rows, &pivots);
        Subspace::from_vectors(self.p, self.cols, basis).expect("kernel vectors have ambient length")
    }

    /// Some `v` with `M v = rhs`, or `None` if `rhs` is outside the column space.
    pub fn solve(&self, rhs: &[u8]) -> Result<Option<Vec<u8>>> {
        if rhs.len() != self.rows {
            return Err(Error::shape("solve right-hand side", self.rows, rhs.len()));
        }
        let width = self.cols + 1;
        let mut red = Reducer::new(self.p, width);
        for (r, row) in self.row_iter().enumerate() {
            let mut aug = Vec::with_capacity(width);
            aug.extend_from_slice(row);
            aug.push(rhs[r] % self.p.get());
            if red.push(aug) == Some(self.cols) {
                return Ok(None);
            }
        }
        let (rows, pivots) = red.into_rref();
        let mut x = vec![0u8; self.cols];
        for (row, &pc) in rows.iter().zip(&pivots) {
            x[pc] = row[self.cols];
        }
        Ok(Some(x))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
