//! Restricted maximum likelihood for the error variance of a linear model.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Singular values below this times the largest count as zero.
pub const RANK_TOL: f64 = 1e-10;
/// Columns of A must be orthonormal and annihilate X within this.
pub const BASIS_TOL: f64 = 1e-10;

fn check_design(y: &DVector<f64>, x: &DMatrix<f64>) -> Result<()> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::DimMismatch { left: y.len(), right: n });
    }
    if p >= n {
        return Err(Error::RankDeficient);
    }
    if y.iter().chain(x.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("REML input"));
    }
    let sv = x.clone().svd(false, false).singular_values;
    let top = sv.max();
    if p > 0 && (top == 0.0 || sv.min() <= RANK_TOL * top) {
        return Err(Error::RankDeficient);
    }
    Ok(())
}

/// Residual projector I − X(XᵀX)⁻¹Xᵀ.
fn residual_projector(x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = x.nrows();
    if x.ncols() == 0 {
        return Ok(DMatrix::identity(n, n));
    }
    let xtx_inv = (x.transpose() * x).try_inverse().ok_or(Error::RankDeficient)?;
    Ok(DMatrix::identity(n, n) - x * xtx_inv * x.transpose())
}

/// Orthonormal basis of the null space of Xᵀ built by Gram–Schmidt on the
/// projections of `starts`, taken in order.
pub fn null_space_basis(x: &DMatrix<f64>, starts: impl IntoIterator<Item = DVector<f64>>) -> Result<DMatrix<f64>> {
    let (n, p) = x.shape();
    let target = n - p;
    let proj = residual_projector(x)?;
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(target);
    for s in starts {
        if cols.len() == target {
            break;
        }
        let mut v = &proj * s;
        for _ in 0..2 {
            for c in &cols {
                v -= c * c.dot(&v);
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            cols.push(v / norm);
        }
    }
    if cols.len() < target {
        return Err(Error::RankDeficient);
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Null-space basis from standard-basis starts.
pub fn canonical_basis(x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = x.nrows();
    null_space_basis(x, (0..n).map(|i| DVector::from_fn(n, |j, _| if i == j { 1.0 } else { 0.0 })))
}

/// Null-space basis from Gaussian starts.
pub fn random_basis<R: Rng + ?Sized>(x: &DMatrix<f64>, rng: &mut R) -> Result<DMatrix<f64>> {
    let n = x.nrows();
    let starts: Vec<DVector<f64>> =
        (0..4 * n).map(|_| DVector::from_fn(n, |_, _| rng.sample(StandardNormal))).collect();
    null_space_basis(x, starts)
}

/// σ̂² = ‖Aᵀy‖² / (n − p) for a caller-supplied A.
pub fn reml_with_basis(y: &DVector<f64>, x: &DMatrix<f64>, a: &DMatrix<f64>) -> Result<f64> {
    check_design(y, x)?;
    let (n, p) = x.shape();
    if a.shape() != (n, n - p) {
        return Err(Error::DimMismatch { left: a.ncols(), right: n - p });
    }
    let gram = a.transpose() * a - DMatrix::<f64>::identity(n - p, n - p);
    if gram.amax() > BASIS_TOL {
        return Err(Error::NotOrthonormal { deviation: gram.amax() });
    }
    let annihilation = (a.transpose() * x).amax();
    if annihilation > BASIS_TOL {
        return Err(Error::InvalidArgument(format!("basis does not annihilate X (deviation {annihilation:e})")));
    }
    let r = a.transpose() * y;
    Ok(r.norm_squared() / (n - p) as f64)
}

/// REML estimate of σ² in y ~ N(Xβ, σ²I).
pub fn reml_estimate(y: &DVector<f64>, x: &DMatrix<f64>) -> Result<f64> {
    check_design(y, x)?;
    let a = canonical_basis(x)?;
    reml_with_basis(y, x, &a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::substream;

    #[test]
    fn sample_variance() {
        let y = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let x = DMatrix::from_element(3, 1, 1.0);
        assert!((reml_estimate(&y, &x).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fitted_values_give_zero() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 2.0, 1.0, 3.0]);
        let y = &x * DVector::from_vec(vec![2.0, -1.5]);
        assert!(reml_estimate(&y, &x).unwrap().abs() < 1e-12);
    }

    #[test]
    fn basis_choice_is_irrelevant() {
        let mut rng = substream(11, 0);
        let x = DMatrix::from_fn(8, 3, |_, _| rng.sample::<f64, _>(StandardNormal));
        let y = DVector::from_fn(8, |_, _| rng.sample::<f64, _>(StandardNormal));
        let reference = reml_estimate(&y, &x).unwrap();
        for _ in 0..10 {
            let a = random_basis(&x, &mut rng).unwrap();
            assert!((reml_with_basis(&y, &x, &a).unwrap() - reference).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_deficiency() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 1.0, 2.0, 1.0, 2.0]);
        let y = DVector::from_vec(vec![1.0, 2.0, 4.0]);
        assert_eq!(reml_estimate(&y, &x), Err(Error::RankDeficient));
        let wide = DMatrix::from_element(2, 2, 1.0);
        assert_eq!(reml_estimate(&DVector::zeros(2), &wide), Err(Error::RankDeficient));
    }
}
