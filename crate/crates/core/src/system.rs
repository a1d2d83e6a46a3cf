//! Sparse homogeneous and inhomogeneous linear systems.
//!
//! Constraint systems coming from structure constants (Leibniz, cocycle and
//! Jacobi identities) have a handful of nonzeros per row and are usually
//! block diagonal after a permutation (they are homogeneous for the monomial
//! grading). [`LinearSystem`] finds the connected components of the
//! row/column incidence graph and eliminates each block densely on its own.

use std::collections::BTreeMap;

use crate::echelon::{kernel_vectors, Reducer};
use crate::error::{Error, Result};
use crate::field::Prime;
use crate::subspace::Subspace;

#[derive(Debug, Clone)]
struct Row {
    entries: Vec<(usize, u8)>,
    rhs: u8,
}

#[derive(Debug, Clone)]
pub struct LinearSystem {
    p: Prime,
    cols: usize,
    rows: Vec<Row>,
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct Block {
    cols: Vec<usize>,
    rows: Vec<usize>,
}

impl LinearSystem {
    pub fn new(p: Prime, cols: usize) -> Self {
        LinearSystem {
            p,
            cols,
            rows: Vec::new(),
        }
    }

    pub fn modulus(&self) -> Prime {
        self.p
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of stored (nonzero) equations.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Adds the equation `sum c_j x_j = 0`. Repeated columns are summed.
    pub fn push<I>(&mut self, terms: I)
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        self.push_with_rhs(terms, 0);
    }

    /// Adds the equation `sum c_j x_j = rhs`.
    pub fn push_with_rhs<I>(&mut self, terms: I, rhs: i64)
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        for (c, v) in terms {
            assert!(c < self.cols, "column {c} out of range {}", self.cols);
            *acc.entry(c).or_insert(0) += v;
        }
        let entries: Vec<(usize, u8)> = acc
            .into_iter()
            .map(|(c, v)| (c, self.p.reduce(v)))
            .filter(|&(_, v)| v != 0)
            .collect();
        let rhs = self.p.reduce(rhs);
        if entries.is_empty() && rhs == 0 {
            return;
        }
        self.rows.push(Row { entries, rhs });
    }

    fn blocks(&self) -> (Vec<Block>, Vec<usize>) {
        let mut dsu = DisjointSets::new(self.cols);
        let mut touched = vec![false; self.cols];
        for row in &self.rows {
            if let Some(&(first, _)) = row.entries.first() {
                for &(c, _) in &row.entries {
                    touched[c] = true;
                    dsu.union(first, c);
                }
            }
        }
        let mut index_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut blocks: Vec<Block> = Vec::new();
        let mut untouched = Vec::new();
        for c in 0..self.cols {
            if !touched[c] {
                untouched.push(c);
                continue;
            }
            let root = dsu.find(c);
            let b = *index_of_root.entry(root).or_insert_with(|| {
                blocks.push(Block {
                    cols: Vec::new(),
                    rows: Vec::new(),
                });
                blocks.len() - 1
            });
            blocks[b].cols.push(c);
        }
        for (r, row) in self.rows.iter().enumerate() {
            if let Some(&(first, _)) = row.entries.first() {
                let b = index_of_root[&dsu.find(first)];
                blocks[b].rows.push(r);
            }
        }
        (blocks, untouched)
    }

    fn local_row(&self, row: &Row, local: &BTreeMap<usize, usize>, width: usize) -> Vec<u8> {
        let mut dense = vec![0u8; width];
        for &(c, v) in &row.entries {
            dense[local[&c]] = v;
        }
        dense
    }

    /// The solution space of the homogeneous system (right-hand sides ignored).
    pub fn nullspace(&self) -> Subspace {
        let (blocks, untouched) = self.blocks();
        let mut vectors: Vec<Vec<u8>> = Vec::new();
        for c in untouched {
            let mut v = vec![0u8; self.cols];
            v[c] = 1;
            vectors.push(v);
        }
        for block in blocks {
            let local: BTreeMap<usize, usize> =
                block.cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let width = block.cols.len();
            let mut red = Reducer::new(self.p, width);
            for &r in &block.rows {
                if red.rank() == width {
                    break;
                }
                red.push(self.local_row(&self.rows[r], &local, width));
            }
            let (rows, pivots) = red.into_rref();
            for kv in kernel_vectors(self.p, width, &rows, &pivots) {
                let mut v = vec![0u8; self.cols];
                for (i, x) in kv.into_iter().enumerate() {
                    v[block.cols[i]] = x;
                }
                vectors.push(v);
            }
        }
        Subspace::from_vectors(self.p, self.cols, vectors).expect("vectors have system width")
    }

    /// Rank of the coefficient matrix.
    pub fn rank(&self) -> usize {
        self.cols - self.nullspace().dim()
    }

    /// A particular solution, or `None` if the system is inconsistent.
    pub fn solve(&self) -> Option<Vec<u8>> {
        if self.rows.iter().any(|r| r.entries.is_empty() && r.rhs != 0) {
            return None;
        }
        let (blocks, _) = self.blocks();
        let mut x = vec![0u8; self.cols];
        for block in blocks {
            let local: BTreeMap<usize, usize> =
                block.cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let width = block.cols.len();
            let mut red = Reducer::new(self.p, width + 1);
            for &r in &block.rows {
                let row = &self.rows[r];
                let mut dense = self.local_row(row, &local, width + 1);
                dense[width] = row.rhs;
                if red.push(dense) == Some(width) {
                    return None;
                }
            }
            let (rows, pivots) = red.into_rref();
            for (row, &pc) in rows.iter().zip(&pivots) {
                x[block.cols[pc]] = row[width];
            }
        }
        Some(x)
    }

    /// Checks a candidate solution against every stored equation.
    pub fn satisfied_by(&self, x: &[u8]) -> Result<bool> {
        if x.len() != self.cols {
            return Err(Error::shape("system solution", self.cols, x.len()));
        }
        Ok(self.rows.iter().all(|row| {
            let lhs = row
                .entries
                .iter()
                .fold(0u8, |acc, &(c, v)| self.p.add(acc, self.p.mul(v, x[c])));
            lhs == row.rhs
        }))
    }
}
