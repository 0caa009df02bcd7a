//! Sparse matrices over the rationals, exact rank, and homology dimensions of
//! finite chain complexes.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A sparse `rows × cols` matrix; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::from_integer(1.into()));
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = RatMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        assert!(row < self.rows && col < self.cols, "index ({row},{col}) out of range");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    /// `self[row, col] += value`.
    pub fn add_to(&mut self, row: usize, col: usize, value: Scalar) {
        let current = self.get(row, col);
        self.set(row, col, current + value);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), x)| ((j, i), x.clone())).collect(),
        }
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::NonComposable(format!(
                "{}×{} times {}×{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for (&(i, j), x) in &rhs.entries {
            by_row.entry(i).or_default().push((j, x));
        }
        let mut out = RatMatrix::zeros(self.rows, rhs.cols);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    out.add_to(i, j, a * b);
                }
            }
        }
        Ok(out)
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.cols {
            return Err(Error::NonComposable(format!("cannot stack {} and {} columns", self.cols, other.cols)));
        }
        let mut out = self.clone();
        out.rows += other.rows;
        for (&(i, j), x) in &other.entries {
            out.entries.insert((i + self.rows, j), x.clone());
        }
        Ok(out)
    }

    /// Exact rank by Gaussian elimination.
    ///
    /// Columns are processed left to right and the pivot is the first row
    /// (in index order) with a nonzero entry in the current column.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); self.rows];
        for (&(i, j), x) in &self.entries {
            rows[i].insert(j, x.clone());
        }
        // rows still eligible as pivots, keyed by leading column
        let mut rank = 0;
        let mut active: Vec<usize> = (0..self.rows).filter(|&i| !rows[i].is_empty()).collect();
        while !active.is_empty() {
            let col = active.iter().filter_map(|&i| rows[i].keys().next().copied()).min().expect("nonempty rows");
            let pivot = *active
                .iter()
                .find(|&&i| rows[i].keys().next() == Some(&col))
                .expect("some row leads with the minimal column");
            let pivot_row = std::mem::take(&mut rows[pivot]);
            let lead = pivot_row[&col].clone();
            rank += 1;
            active.retain(|&i| i != pivot);
            for &i in &active {
                let Some(factor) = rows[i].get(&col).cloned() else { continue };
                let factor = factor / &lead;
                for (&j, x) in &pivot_row {
                    let entry = rows[i].entry(j).or_insert_with(Scalar::zero);
                    *entry -= &factor * x;
                    if entry.is_zero() {
                        rows[i].remove(&j);
                    }
                }
            }
            active.retain(|&i| !rows[i].is_empty());
        }
        rank
    }
}

/// Homology dimensions of `… → C_k --d_k--> C_{k−1} → …`.
///
/// `differentials[k]` is `d_k: C_k → C_{k−1}` as a `dim C_{k−1} × dim C_k`
/// matrix; `d_0` usually has zero rows, and `dim C_k` is read from its column
/// count. Returns `dim H_k = dim C_k − rank d_k − rank d_{k+1}` for every `k`.
pub fn homology_dims(differentials: &[RatMatrix]) -> Result<Vec<usize>> {
    for k in 1..differentials.len() {
        let (lower, upper) = (&differentials[k - 1], &differentials[k]);
        if upper.rows() != lower.cols() {
            return Err(Error::NonComposable(format!(
                "d_{k} has {} rows but C_{} has dimension {}",
                upper.rows(),
                k - 1,
                lower.cols()
            )));
        }
        if !lower.mul(upper)?.is_zero() {
            return Err(Error::BrokenComplex(k));
        }
    }
    let ranks: Vec<usize> = differentials.iter().map(RatMatrix::rank).collect();
    Ok((0..differentials.len())
        .map(|k| differentials[k].cols() - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0))
        .collect())
}
