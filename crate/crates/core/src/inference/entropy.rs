//! Shannon entropy and the entropy correlation of a joint table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability vectors and tables must sum to 1 within this.
pub const SUM_TOL: f64 = 1e-12;

fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::NotADistribution("empty".into()));
    }
    if let Some(v) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::NotADistribution(format!("entry {v}")));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > SUM_TOL {
        return Err(Error::NotADistribution(format!("sums to {s}")));
    }
    Ok(())
}

fn entropy_unchecked<'a>(p: impl IntoIterator<Item = &'a f64>) -> f64 {
    -p.into_iter().filter(|v| **v > 0.0).map(|v| v * v.ln()).sum::<f64>()
}

/// −Σ p ln p with 0 ln 0 = 0.
pub fn entropy(p: &[f64]) -> Result<f64> {
    check_distribution(p)?;
    Ok(entropy_unchecked(p))
}

/// Joint probability table with `rows × cols` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointPmf {
    rows: usize,
    cols: usize,
    table: Vec<f64>,
}

impl JointPmf {
    pub fn new(table: Vec<Vec<f64>>) -> Result<Self> {
        let rows = table.len();
        let cols = table.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 || table.iter().any(|r| r.len() != cols) {
            return Err(Error::NotADistribution("table must be rectangular and nonempty".into()));
        }
        let flat: Vec<f64> = table.into_iter().flatten().collect();
        check_distribution(&flat)?;
        Ok(Self { rows, cols, table: flat })
    }

    /// Outer product of two marginals.
    pub fn product(row: &[f64], col: &[f64]) -> Result<Self> {
        check_distribution(row)?;
        check_distribution(col)?;
        Self::new(row.iter().map(|r| col.iter().map(|c| r * c).collect()).collect())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.cols + j]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).sum()).collect()
    }

    pub fn col_marginal(&self) -> Vec<f64> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        let table = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self { rows: self.cols, cols: self.rows, table }
    }

    /// Largest |P_ij − P_i· P_·j|.
    pub fn independence_deviation(&self) -> f64 {
        let (r, c) = (self.row_marginal(), self.col_marginal());
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .map(|(i, j)| (self.get(i, j) - r[i] * c[j]).abs())
            .fold(0.0, f64::max)
    }
}

/// C = H(rows) + H(cols) − H(joint), the mutual information.
pub fn entropy_correlation(joint: &JointPmf) -> f64 {
    let hr = entropy_unchecked(&joint.row_marginal());
    let hc = entropy_unchecked(&joint.col_marginal());
    // Sum the symmetric pieces in a fixed order so C(Pᵀ) = C(P) exactly.
    let (lo, hi) = if hr <= hc { (hr, hc) } else { (hc, hr) };
    let mut cells: Vec<f64> = joint.table.clone();
    cells.sort_by(f64::total_cmp);
    lo + hi - entropy_unchecked(&cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn entropy_values() {
        assert!((entropy(&[0.25; 4]).unwrap() - 4f64.ln()).abs() < 1e-15);
        assert_eq!(entropy(&[0.0, 1.0, 0.0]).unwrap(), 0.0);
        assert!((entropy(&[0.5, 0.25, 0.25]).unwrap() - 1.5 * LN_2).abs() < 1e-15);
        assert!(entropy(&[0.5, 0.6]).is_err());
        assert!(entropy(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn correlation_values() {
        let diag = JointPmf::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert!((entropy_correlation(&diag) - LN_2).abs() < 1e-15);
        let prod = JointPmf::product(&[0.2, 0.8], &[0.1, 0.3, 0.6]).unwrap();
        assert!(entropy_correlation(&prod).abs() < 1e-12);
    }

    #[test]
    fn transpose_symmetry() {
        let j = JointPmf::new(vec![vec![0.1, 0.2, 0.05], vec![0.3, 0.15, 0.2]]).unwrap();
        assert_eq!(entropy_correlation(&j), entropy_correlation(&j.transpose()));
    }
}
