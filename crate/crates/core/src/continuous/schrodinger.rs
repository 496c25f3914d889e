//! Crank–Nicolson integration of iħ f_t = −ħ²/(2m) f_xx + V f with zero
//! Dirichlet boundaries.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::WaveFunction;

/// Largest density tolerated next to either boundary.
pub const BOUNDARY_DENSITY: f64 = 1e-6;

/// Factored propagator for a fixed grid, potential and time step.
///
/// Solves (I + iΔt H/2ħ) f⁺ = (I − iΔt H/2ħ) f on the interior points with
/// the three-point Laplacian.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    off: Complex64,
    diag_rhs: Vec<Complex64>,
    // Thomas elimination of the left-hand matrix, computed once.
    c_prime: Vec<Complex64>,
    inv_denom: Vec<Complex64>,
}

impl CrankNicolson {
    pub fn new(f: &WaveFunction, potential: &dyn Fn(f64) -> f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step {dt} must be positive")));
        }
        let grid = f.grid();
        let units = f.units();
        let d = grid.spacing();
        let kinetic = units.hbar * units.hbar / (2.0 * units.mass * d * d);
        let i_half = Complex64::new(0.0, dt / (2.0 * units.hbar));
        let off = i_half * (-kinetic);
        let m = grid.len() - 2;
        let mut diag_lhs = Vec::with_capacity(m);
        let mut diag_rhs = Vec::with_capacity(m);
        for j in 1..=m {
            let v = potential(grid.x(j));
            if !v.is_finite() {
                return Err(Error::NonFinite("potential"));
            }
            let h = i_half * (2.0 * kinetic + v);
            diag_lhs.push(Complex64::new(1.0, 0.0) + h);
            diag_rhs.push(Complex64::new(1.0, 0.0) - h);
        }
        let mut c_prime = vec![Complex64::new(0.0, 0.0); m];
        let mut inv_denom = vec![Complex64::new(0.0, 0.0); m];
        for j in 0..m {
            let denom = if j == 0 { diag_lhs[0] } else { diag_lhs[j] - off * c_prime[j - 1] };
            inv_denom[j] = denom.inv();
            c_prime[j] = off * inv_denom[j];
        }
        Ok(Self { off, diag_rhs, c_prime, inv_denom })
    }

    /// Advances `values` (including the two boundary zeros) by one step.
    pub fn step(&self, values: &mut [Complex64]) {
        let m = self.diag_rhs.len();
        let rhs_off = -self.off;
        let mut d_prime = vec![Complex64::new(0.0, 0.0); m];
        for j in 0..m {
            let k = j + 1;
            let rhs = self.diag_rhs[j] * values[k] + rhs_off * (values[k - 1] + values[k + 1]);
            let carry = if j == 0 { Complex64::new(0.0, 0.0) } else { self.off * d_prime[j - 1] };
            d_prime[j] = (rhs - carry) * self.inv_denom[j];
        }
        values[m] = d_prime[m - 1];
        for j in (0..m - 1).rev() {
            values[j + 1] = d_prime[j] - self.c_prime[j] * values[j + 2];
        }
    }
}

fn check_boundary(values: &[Complex64]) -> Result<()> {
    let n = values.len();
    for k in [0, 1, n - 2, n - 1] {
        let density = values[k].norm_sqr();
        if density > BOUNDARY_DENSITY {
            return Err(Error::BoundaryMassLoss { density });
        }
    }
    Ok(())
}

/// `steps` Crank–Nicolson steps of size `dt` under `potential`.
pub fn schrodinger_evolve(f: &WaveFunction, potential: &dyn Fn(f64) -> f64, dt: f64, steps: usize) -> Result<WaveFunction> {
    let cn = CrankNicolson::new(f, potential, dt)?;
    let mut values = f.values().to_vec();
    check_boundary(&values)?;
    let n = values.len();
    values[0] = Complex64::new(0.0, 0.0);
    values[n - 1] = Complex64::new(0.0, 0.0);
    for _ in 0..steps {
        cn.step(&mut values);
        check_boundary(&values)?;
    }
    Ok(WaveFunction::from_raw(*f.grid(), values, f.units()))
}
