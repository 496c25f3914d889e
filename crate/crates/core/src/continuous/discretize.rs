//! Step-function approximation of a wave function and of the position
//! operator acting on it.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

use super::Grid1D;

/// Quadrature sub-cells per grid cell.
const REFINE: usize = 10;
/// Largest tolerated fraction of ‖f‖² outside the grid.
pub const ESCAPE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscretizationErrors {
    pub spacing: f64,
    /// ‖f_n − f‖ with f_n(ξ) = f(ξ_i) on [ξ_i, ξ_{i+1}).
    pub step_error: f64,
    /// ‖A_n f_n − ξf‖ with A_n f_n(ξ) = ξ_i f(ξ_i) on the same cells.
    pub multiplication_error: f64,
    /// Fraction of ‖f‖² outside [x_min, x_max].
    pub outside_mass: f64,
}

fn midpoint_integral(a: f64, b: f64, pieces: usize, g: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces).map(|j| g(a + (j as f64 + 0.5) * h)).sum::<f64>() * h
}

/// L² errors of the step approximation and of the discretized position
/// operator for a closed-form `f`, by midpoint quadrature with ten points
/// per cell. Both approximations vanish off the grid, so the tails of f
/// enter the errors; the tail mass is estimated on flanks four grid spans
/// wide.
pub fn discretize_position(grid: &Grid1D, f: impl Fn(f64) -> Complex64) -> Result<DiscretizationErrors> {
    let d = grid.spacing();
    let n = grid.len();
    let (mut step_sq, mut mult_sq, mut inside) = (0.0, 0.0, 0.0);
    for i in 0..n - 1 {
        let xi = grid.x(i);
        let fi = f(xi);
        step_sq += midpoint_integral(xi, xi + d, REFINE, |x| (f(x) - fi).norm_sqr());
        mult_sq += midpoint_integral(xi, xi + d, REFINE, |x| (f(x) * x - fi * xi).norm_sqr());
        inside += midpoint_integral(xi, xi + d, REFINE, |x| f(x).norm_sqr());
    }
    let span = grid.x_max() - grid.x_min();
    let flank_pieces = 4 * REFINE * (n - 1);
    let flanks = [(grid.x_min() - 4.0 * span, grid.x_min()), (grid.x_max(), grid.x_max() + 4.0 * span)];
    let (mut out, mut out_moment) = (0.0, 0.0);
    for (a, b) in flanks {
        out += midpoint_integral(a, b, flank_pieces, |x| f(x).norm_sqr());
        out_moment += midpoint_integral(a, b, flank_pieces, |x| (f(x) * x).norm_sqr());
    }
    let total = inside + out;
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::InvalidArgument("function has no finite positive norm".into()));
    }
    let outside_mass = out / total;
    if outside_mass > ESCAPE_TOL {
        return Err(Error::SupportEscape { mass: outside_mass });
    }
    Ok(DiscretizationErrors {
        spacing: d,
        step_error: (step_sq + out).sqrt(),
        multiplication_error: (mult_sq + out_moment).sqrt(),
        outside_mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(x: f64) -> Complex64 {
        Complex64::from_polar((-x * x / 2.0).exp(), 0.7 * x)
    }

    #[test]
    fn first_order_convergence() {
        let mut grid = Grid1D::new(-8.0, 8.0, 65).unwrap();
        let mut prev = discretize_position(&grid, gaussian).unwrap();
        for _ in 0..4 {
            grid = grid.halved();
            let next = discretize_position(&grid, gaussian).unwrap();
            let r1 = prev.step_error / next.step_error;
            let r2 = prev.multiplication_error / next.multiplication_error;
            assert!((1.7..=2.3).contains(&r1), "{r1}");
            assert!((1.7..=2.3).contains(&r2), "{r2}");
            prev = next;
        }
    }

    #[test]
    fn step_function_is_exact() {
        let grid = Grid1D::new(0.0, 1.0, 11).unwrap();
        let f = |x: f64| {
            if (0.0..1.0).contains(&x) {
                Complex64::new(1.0 + (10.0 * x + 1e-9).floor(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        assert!(discretize_position(&grid, f).unwrap().step_error < 1e-12);
    }

    #[test]
    fn support_escape() {
        let grid = Grid1D::new(-1.0, 1.0, 33).unwrap();
        assert!(matches!(discretize_position(&grid, gaussian), Err(Error::SupportEscape { .. })));
    }
}
