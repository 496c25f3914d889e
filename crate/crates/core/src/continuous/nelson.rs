//! Nelson's osmotic and current velocities and the residual checks of the
//! stochastic equations of motion.

use serde::Serialize;

use crate::error::{Error, Result};

use super::{Grid1D, WaveFunction};

/// Fields are undefined where |f| falls below this.
pub const NODE_FLOOR: f64 = 1e-12;
/// Residual checks use points with ρ above this fraction of max ρ.
pub const DENSITY_MASK: f64 = 1e-6;

/// u = (ħ/2m)(ln ρ)_x, v = (ħ/m)S_x, b = v + u and b* = v − u on the grid.
///
/// Points outside the evaluation region hold NaN.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NelsonFields {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub b: Vec<f64>,
    pub b_star: Vec<f64>,
    pub sigma2: f64,
}

/// Phase of f unwrapped along the grid, gauged to vanish at the midpoint.
fn unwrapped_phase(f: &WaveFunction) -> Vec<f64> {
    let vals = f.values();
    let mut s = Vec::with_capacity(vals.len());
    let mut acc = vals[0].arg();
    s.push(acc);
    for w in vals.windows(2) {
        // Phase increment arg(f_{i+1} / f_i) lies in (−π, π].
        acc += (w[1] * w[0].conj()).arg();
        s.push(acc);
    }
    let mid = s[s.len() / 2];
    s.iter_mut().for_each(|p| *p -= mid);
    s
}

/// Central difference of `g` at `i`, NaN at the ends or next to NaN.
fn central(g: &[f64], i: usize, d: f64) -> f64 {
    if i == 0 || i + 1 >= g.len() {
        return f64::NAN;
    }
    (g[i + 1] - g[i - 1]) / (2.0 * d)
}

fn second(g: &[f64], i: usize, d: f64) -> f64 {
    if i == 0 || i + 1 >= g.len() {
        return f64::NAN;
    }
    (g[i + 1] - 2.0 * g[i] + g[i - 1]) / (d * d)
}

fn derivative(g: &[f64], d: f64) -> Vec<f64> {
    (0..g.len()).map(|i| central(g, i, d)).collect()
}

/// Fields at every point where `region[i]` holds; NaN elsewhere.
fn fields_on(f: &WaveFunction, region: &[bool]) -> NelsonFields {
    let grid = f.grid();
    let d = grid.spacing();
    let units = f.units();
    let ln_rho: Vec<f64> = f
        .values()
        .iter()
        .zip(region)
        .map(|(v, &keep)| if keep { v.norm_sqr().ln() } else { f64::NAN })
        .collect();
    let phase = unwrapped_phase(f);
    let scale_u = units.hbar / (2.0 * units.mass);
    let scale_v = units.hbar / units.mass;
    let u: Vec<f64> = derivative(&ln_rho, d).into_iter().map(|g| scale_u * g).collect();
    let v: Vec<f64> = derivative(&phase, d)
        .into_iter()
        .zip(&ln_rho)
        .map(|(g, l)| if l.is_nan() { f64::NAN } else { scale_v * g })
        .collect();
    let b = u.iter().zip(&v).map(|(u, v)| v + u).collect();
    let b_star = u.iter().zip(&v).map(|(u, v)| v - u).collect();
    NelsonFields { x: grid.points(), u, v, b, b_star, sigma2: units.sigma2() }
}

/// Fields on the interior of the grid; the end points hold NaN.
pub fn nelson_fields(f: &WaveFunction) -> Result<NelsonFields> {
    if let Some(i) = f.values().iter().position(|v| v.norm() < NODE_FLOOR) {
        return Err(Error::NodeEncountered { x: f.grid().x(i) });
    }
    Ok(fields_on(f, &vec![true; f.grid().len()]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UtVtResiduals {
    /// max |u_t + ½σ²v_xx + (vu)_x|.
    pub ut: f64,
    /// max |v_t − a − u u_x + v v_x − ½σ²u_xx| with a = −V_x/m.
    pub vt: f64,
    /// Points entering the maxima.
    pub points: usize,
}

fn mask(rho: &[f64]) -> Vec<bool> {
    let top = rho.iter().cloned().fold(0.0, f64::max);
    rho.iter().map(|&r| r > DENSITY_MASK * top && r.sqrt() >= NODE_FLOOR).collect()
}

/// Residuals of the equations for u_t and v_t between two snapshots `dt`
/// apart.
///
/// Time derivatives are forward differences; spatial terms are central
/// differences averaged over the two snapshots. Only points where both
/// densities exceed the mask are used.
pub fn residual_ut_vt(f0: &WaveFunction, f1: &WaveFunction, potential: &dyn Fn(f64) -> f64, dt: f64) -> Result<UtVtResiduals> {
    if f0.grid() != f1.grid() {
        return Err(Error::InvalidGrid("snapshots live on different grids".into()));
    }
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidArgument(format!("time step {dt} must be positive")));
    }
    let grid = f0.grid();
    let d = grid.spacing();
    let units = f0.units();
    let sigma2 = units.sigma2();
    let region: Vec<bool> = mask(&f0.density()).into_iter().zip(mask(&f1.density())).map(|(a, b)| a && b).collect();
    if !region.iter().any(|&r| r) {
        return Err(Error::NodeEncountered { x: grid.x(grid.len() / 2) });
    }
    let fields = [fields_on(f0, &region), fields_on(f1, &region)];
    let products: Vec<Vec<f64>> =
        fields.iter().map(|fl| fl.v.iter().zip(&fl.u).map(|(v, u)| v * u).collect()).collect();
    let spatial = |fl: &NelsonFields, vu: &[f64], i: usize| -> (f64, f64) {
        let ut_rhs = -0.5 * sigma2 * second(&fl.v, i, d) - central(vu, i, d);
        let x = grid.x(i);
        let a = -(potential(x + d) - potential(x - d)) / (2.0 * d) / units.mass;
        let vt_rhs = a + fl.u[i] * central(&fl.u, i, d) - fl.v[i] * central(&fl.v, i, d)
            + 0.5 * sigma2 * second(&fl.u, i, d);
        (ut_rhs, vt_rhs)
    };
    let (mut ut_max, mut vt_max, mut points) = (0.0f64, 0.0f64, 0usize);
    for i in 1..grid.len() - 1 {
        let (r0u, r0v) = spatial(&fields[0], &products[0], i);
        let (r1u, r1v) = spatial(&fields[1], &products[1], i);
        let ut = (fields[1].u[i] - fields[0].u[i]) / dt;
        let vt = (fields[1].v[i] - fields[0].v[i]) / dt;
        let res_u = ut - 0.5 * (r0u + r1u);
        let res_v = vt - 0.5 * (r0v + r1v);
        if res_u.is_finite() && res_v.is_finite() {
            ut_max = ut_max.max(res_u.abs());
            vt_max = vt_max.max(res_v.abs());
            points += 1;
        }
    }
    Ok(UtVtResiduals { ut: ut_max, vt: vt_max, points })
}

/// max |−(bρ)_x + ½σ²ρ_xx − ρ_t| over interior points; ρ_t = 0 when absent.
pub fn fokker_planck_residual(
    grid: &Grid1D,
    rho: &[f64],
    drift: &[f64],
    sigma2: f64,
    rho_t: Option<&[f64]>,
) -> Result<f64> {
    let n = grid.len();
    for len in [rho.len(), drift.len()].into_iter().chain(rho_t.map(<[f64]>::len)) {
        if len != n {
            return Err(Error::DimMismatch { left: len, right: n });
        }
    }
    let d = grid.spacing();
    let flux: Vec<f64> = drift.iter().zip(rho).map(|(b, r)| b * r).collect();
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let lhs = rho_t.map_or(0.0, |t| t[i]);
        let r = -central(&flux, i, d) + 0.5 * sigma2 * second(rho, i, d) - lhs;
        if r.is_finite() {
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}
