//! Incremental Gauss-Jordan elimination.
//!
//! Rows are kept fully reduced: every stored row is zero in every other
//! stored row's pivot column. Reducing an incoming row therefore needs one
//! pass over the stored rows, and the canonical rref falls out by sorting on
//! pivot columns.

use crate::field::Prime;

#[derive(Debug, Clone)]
pub(crate) struct Reducer {
    p: Prime,
    cols: usize,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl Reducer {
    pub(crate) fn new(p: Prime, cols: usize) -> Self {
        Reducer {
            p,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Subtracts stored rows until `row` vanishes on every pivot column.
    pub(crate) fn reduce(&self, row: &mut [u8]) {
        debug_assert_eq!(row.len(), self.cols);
        for (stored, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = row[pc];
            if f != 0 {
                self.p.axpy(row, self.p.neg(f), stored);
            }
        }
    }

    /// Adds `row` to the span. Returns the new pivot column, or `None` if the
    /// row was already dependent.
    pub(crate) fn push(&mut self, mut row: Vec<u8>) -> Option<usize> {
        self.reduce(&mut row);
        let pc = row.iter().position(|&x| x != 0)?;
        let inv = self.p.inv(row[pc]);
        if inv != 1 {
            for x in row.iter_mut() {
                *x = self.p.mul(*x, inv);
            }
        }
        for stored in self.rows.iter_mut() {
            let f = stored[pc];
            if f != 0 {
                self.p.axpy(stored, self.p.neg(f), &row);
            }
        }
        self.rows.push(row);
        self.pivots.push(pc);
        Some(pc)
    }

    /// Stored rows sorted by pivot column: the canonical reduced row-echelon form.
    pub(crate) fn into_rref(self) -> (Vec<Vec<u8>>, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.pivots[r]);
        let mut rows: Vec<Option<Vec<u8>>> = self.rows.into_iter().map(Some).collect();
        let sorted_rows = order.iter().map(|&r| rows[r].take().unwrap()).collect();
        let pivots = order.iter().map(|&r| self.pivots[r]).collect();
        (sorted_rows, pivots)
    }
}

/// Basis of `{v : R v = 0}` for a fully reduced row set, one vector per free column.
pub(crate) fn kernel_vectors(
    p: Prime,
    cols: usize,
    rows: &[Vec<u8>],
    pivots: &[usize],
) -> Vec<Vec<u8>> {
    let mut is_pivot = vec![false; cols];
    for &pc in pivots {
        is_pivot[pc] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u8; cols];
            v[free] = 1;
            for (row, &pc) in rows.iter().zip(pivots) {
                v[pc] = p.neg(row[free]);
            }
            v
        })
        .collect()
}
