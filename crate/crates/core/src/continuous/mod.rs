//! One-dimensional wave mechanics on a uniform grid.
//!
//! Step-function discretization of the position operator, Crank–Nicolson
//! evolution, Nelson's drift fields and their diffusion ensembles, and the
//! residual checks that tie the stochastic picture back to the Schrödinger
//! equation.

mod diffusion;
mod discretize;
mod export;
mod nelson;
mod schrodinger;

pub use diffusion::{histogram, simulate_diffusion, DriftSource, Ensemble, GridDrift, Process};
pub use discretize::{discretize_position, DiscretizationErrors};
pub use export::{write_ensemble_csv, write_snapshot_csv};
pub use nelson::{fokker_planck_residual, nelson_fields, residual_ut_vt, NelsonFields, UtVtResiduals, NODE_FLOOR};
pub use schrodinger::{schrodinger_evolve, CrankNicolson, BOUNDARY_DENSITY};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Wave functions must have unit norm within this.
pub const NORM_TOL: f64 = 1e-8;

/// Uniform grid x_i = x_min + i·δ, i = 0..n_points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid1D {
    pub const MIN_POINTS: usize = 8;

    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidGrid(format!("bad range [{x_min}, {x_max}]")));
        }
        if n_points < Self::MIN_POINTS {
            return Err(Error::InvalidGrid(format!("{n_points} points, need at least {}", Self::MIN_POINTS)));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Same range with the spacing halved.
    pub fn halved(&self) -> Self {
        Self { n_points: 2 * self.n_points - 1, ..*self }
    }
}

/// Physical constants; σ² = ħ/m is the diffusion coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for Units {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

impl Units {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0 && mass > 0.0 && hbar.is_finite() && mass.is_finite()) {
            return Err(Error::InvalidArgument("hbar and mass must be positive".into()));
        }
        Ok(Self { hbar, mass })
    }

    pub fn sigma2(&self) -> f64 {
        self.hbar / self.mass
    }
}

/// Sampled wave function with ‖f‖² = Σ|f_i|²δ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid1D,
    values: Vec<Complex64>,
    units: Units,
}

impl WaveFunction {
    pub fn new(grid: Grid1D, values: Vec<Complex64>, units: Units) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimMismatch { left: values.len(), right: grid.len() });
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("wave function"));
        }
        let f = Self { grid, values, units };
        let n = f.norm_sq();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm: n.sqrt() });
        }
        Ok(f)
    }

    /// Rescales `values` to unit norm.
    pub fn normalized(grid: Grid1D, mut values: Vec<Complex64>, units: Units) -> Result<Self> {
        let n = values.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.spacing();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NotNormalized { norm: n.sqrt() });
        }
        let s = 1.0 / n.sqrt();
        values.iter_mut().for_each(|v| *v *= s);
        Self::new(grid, values, units)
    }

    pub fn from_fn(grid: Grid1D, units: Units, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::normalized(grid, grid.points().into_iter().map(f).collect(), units)
    }

    /// Ground state of V = ½mω²x², proportional to exp(−mωx²/2ħ).
    pub fn harmonic_ground_state(grid: Grid1D, units: Units, omega: f64) -> Result<Self> {
        let k = units.mass * omega / (2.0 * units.hbar);
        Self::from_fn(grid, units, |x| Complex64::new((-k * x * x).exp(), 0.0))
    }

    /// Packet with position spread `sigma0` in |f|², centred at `x0` with
    /// wave number `k0`.
    pub fn gaussian_packet(grid: Grid1D, units: Units, x0: f64, sigma0: f64, k0: f64) -> Result<Self> {
        Self::from_fn(grid, units, |x| {
            let d = x - x0;
            Complex64::from_polar((-d * d / (4.0 * sigma0 * sigma0)).exp(), k0 * x)
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Mean and variance of position under |f|².
    pub fn position_moments(&self) -> (f64, f64) {
        let d = self.grid.spacing();
        let rho = self.density();
        let xs = self.grid.points();
        let mass: f64 = rho.iter().sum::<f64>() * d;
        let mean = rho.iter().zip(&xs).map(|(r, x)| r * x).sum::<f64>() * d / mass;
        let var = rho.iter().zip(&xs).map(|(r, x)| r * (x - mean).powi(2)).sum::<f64>() * d / mass;
        (mean, var)
    }

    pub(crate) fn from_raw(grid: Grid1D, values: Vec<Complex64>, units: Units) -> Self {
        Self { grid, values, units }
    }
}

/// V(x) = ½mω²x².
pub fn harmonic_potential(units: Units, omega: f64) -> impl Fn(f64) -> f64 + Sync {
    move |x| 0.5 * units.mass * omega * omega * x * x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(0.0, 1.0, 7).is_err());
        assert!(Grid1D::new(1.0, 1.0, 10).is_err());
        let g = Grid1D::new(-1.0, 1.0, 9).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.halved().spacing(), 0.125);
        assert_eq!(g.x(8), 1.0);
    }

    #[test]
    fn normalization() {
        let g = Grid1D::new(-10.0, 10.0, 401).unwrap();
        let f = WaveFunction::harmonic_ground_state(g, Units::default(), 1.0).unwrap();
        assert!((f.norm_sq() - 1.0).abs() < 1e-14);
        let (mean, var) = f.position_moments();
        assert!(mean.abs() < 1e-12);
        assert!((var - 0.5).abs() < 1e-9);
        assert!(WaveFunction::new(g, vec![Complex64::new(1.0, 0.0); 401], Units::default()).is_err());
    }
}
