//! Exact Gaussian elimination on sparse rows.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

pub type SparseRow<S> = BTreeMap<usize, S>;

/// Incremental row echelon form over an exact field.
///
/// Rows are pushed one at a time; each stored row has a leading entry of one
/// in a column no other stored row leads in.
#[derive(Clone, Debug)]
pub struct RowReducer<S> {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow<S>>,
}

impl<S: Scalar> RowReducer<S> {
    pub fn new(ncols: usize) -> Self {
        RowReducer { ncols, pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.pivots.len() == self.ncols
    }

    /// Adds a row; returns `true` when it was independent of the rows so far.
    pub fn push(&mut self, mut row: SparseRow<S>) -> bool {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, lead_val)) = row.iter().next() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(prow) => {
                    let factor = lead_val.clone();
                    for (&c, v) in prow {
                        let updated = row.get(&c).cloned().unwrap_or_else(S::zero)
                            - factor.clone() * v.clone();
                        if updated.is_zero() {
                            row.remove(&c);
                        } else {
                            row.insert(c, updated);
                        }
                    }
                }
                None => {
                    let inv = S::one() / lead_val.clone();
                    for v in row.values_mut() {
                        *v = v.clone() * inv.clone();
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Basis of the right null space, one dense vector per free column, with
    /// a one in that free column.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let rref = self.reduced();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !rref.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.ncols];
                v[f] = S::one();
                for (&p, row) in &rref {
                    if let Some(x) = row.get(&f) {
                        v[p] = -x.clone();
                    }
                }
                v
            })
            .collect()
    }

    fn reduced(&self) -> BTreeMap<usize, SparseRow<S>> {
        let mut rows = self.pivots.clone();
        let cols: Vec<usize> = rows.keys().rev().copied().collect();
        for p in cols {
            let prow = rows[&p].clone();
            for (_, row) in rows.range_mut(..p) {
                if let Some(f) = row.get(&p).cloned() {
                    for (&c, v) in &prow {
                        let updated =
                            row.get(&c).cloned().unwrap_or_else(S::zero) - f.clone() * v.clone();
                        if updated.is_zero() {
                            row.remove(&c);
                        } else {
                            row.insert(c, updated);
                        }
                    }
                }
            }
        }
        rows
    }
}

/// Kernel of a dense matrix given by rows.
pub fn kernel_basis<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let mut red = RowReducer::new(ncols);
    for r in rows {
        red.push(r.iter().cloned().enumerate().filter(|(_, v)| !v.is_zero()).collect());
    }
    red.kernel_basis()
}

/// Inverse of a square matrix by Gauss-Jordan elimination, `None` when singular.
pub fn inverse<S: Scalar>(m: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = m.len();
    let mut a: Vec<Vec<S>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let inv = S::one() / a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
