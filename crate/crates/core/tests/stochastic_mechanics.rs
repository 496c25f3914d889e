//! Nelson fields, the Fokker–Planck check and the diffusion ensemble
//! against the oscillator ground state.

use epilab::continuous::{
    fokker_planck_residual, harmonic_potential, histogram, nelson_fields, residual_ut_vt, schrodinger_evolve,
    simulate_diffusion, DriftSource, Grid1D, GridDrift, Process, Units, WaveFunction,
};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

fn ground(points: usize) -> WaveFunction {
    WaveFunction::harmonic_ground_state(Grid1D::new(-6.0, 6.0, points).unwrap(), Units::default(), 1.0).unwrap()
}

/// Ground state density exp(−x²)/√π: the osmotic term σ²(ln ρ)_x is −2x.
#[test]
fn backward_drift_is_forward_minus_osmotic_term() {
    let f = ground(601);
    let fields = nelson_fields(&f).unwrap();
    let mut compared = 0;
    for (i, &x) in fields.x.iter().enumerate() {
        if fields.b[i].is_finite() && fields.b_star[i].is_finite() {
            let expected = fields.b[i] - fields.sigma2 * (-2.0 * x);
            assert!((fields.b_star[i] - expected).abs() < 1e-8, "x = {x}");
            compared += 1;
        }
    }
    assert!(compared > 500);
}

#[test]
fn ground_state_satisfies_continuity_and_perturbation_does_not() {
    let f = ground(1201);
    let fields = nelson_fields(&f).unwrap();
    let rho = f.density();
    let exact = fokker_planck_residual(f.grid(), &rho, &fields.b, fields.sigma2, None).unwrap();

    let bumped: Vec<f64> = rho.iter().zip(f.grid().points()).map(|(r, x)| r * (1.0 + 0.01 * (3.0 * x).sin())).collect();
    let perturbed = fokker_planck_residual(f.grid(), &bumped, &fields.b, fields.sigma2, None).unwrap();
    assert!(exact < 1e-3, "exact residual {exact}");
    assert!(perturbed > 10.0 * exact, "{perturbed} vs {exact}");
}

#[test]
fn schrodinger_residuals_flag_a_perturbed_snapshot() {
    let units = Units::default();
    let v = harmonic_potential(units, 1.0);
    let dt = 1e-3;
    let f0 = ground(481);
    let f1 = schrodinger_evolve(&f0, &v, dt, 1).unwrap();
    let clean = residual_ut_vt(&f0, &f1, &v, dt).unwrap();

    let grid = *f1.grid();
    let skewed: Vec<Complex64> =
        f1.values().iter().zip(grid.points()).map(|(c, x)| c * (1.0 + 0.01 * x.tanh())).collect();
    let f1_bad = WaveFunction::normalized(grid, skewed, units).unwrap();
    let dirty = residual_ut_vt(&f0, &f1_bad, &v, dt).unwrap();
    assert!(dirty.ut > 10.0 * clean.ut, "{} vs {}", dirty.ut, clean.ut);
}

#[test]
fn ensemble_is_reproducible_and_keeps_the_ground_density() {
    let f = ground(1201);
    let fields = nelson_fields(&f).unwrap();
    let drift = DriftSource::Static(GridDrift::from_fields(f.grid(), &fields, Process::Forward).unwrap());
    let start = |rng: &mut rand_chacha::ChaCha8Rng| rng.sample::<f64, _>(StandardNormal) * 0.5f64.sqrt();

    let a = simulate_diffusion(&drift, &start, fields.sigma2, 0.01, 200, 50_000, 11).unwrap();
    let b = simulate_diffusion(&drift, &start, fields.sigma2, 0.01, 200, 50_000, 11).unwrap();
    assert_eq!(a.positions, b.positions);
    let c = simulate_diffusion(&drift, &start, fields.sigma2, 0.01, 200, 50_000, 12).unwrap();
    assert_ne!(a.positions, c.positions);

    let (lo, hi, bins) = (-4.0, 4.0, 40);
    let observed = histogram(&a.positions, lo, hi, bins);
    let width = (hi - lo) / bins as f64;
    let density = |x: f64| (-x * x).exp() / std::f64::consts::PI.sqrt();
    let gap = observed
        .iter()
        .enumerate()
        .map(|(k, obs)| {
            // Simpson's rule over the bin.
            let x0 = lo + k as f64 * width;
            let m = 20;
            let h = width / m as f64;
            let mass: f64 = (0..=m)
                .map(|j| {
                    let w = if j == 0 || j == m { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
                    w * density(x0 + j as f64 * h)
                })
                .sum::<f64>()
                * h
                / 3.0;
            (obs - mass).abs()
        })
        .fold(0.0, f64::max);
    assert!(gap < 0.02, "histogram gap {gap}");
}

#[test]
fn stationary_state_has_opposite_drifts() {
    // Stationary state: v = 0, so b* = −b and the backward drift pushes outward.
    let f = ground(601);
    let fields = nelson_fields(&f).unwrap();
    for (b, bs) in fields.b.iter().zip(&fields.b_star) {
        if b.is_finite() && bs.is_finite() {
            assert!((b + bs).abs() < 1e-8);
        }
    }
}
