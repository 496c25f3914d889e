use std::fs::File;
use std::io::BufWriter;

use epilab::continuous::{
    discretize_position, fokker_planck_residual, harmonic_potential, nelson_fields, residual_ut_vt, schrodinger_evolve,
    simulate_diffusion, write_ensemble_csv, write_snapshot_csv, DriftSource, Grid1D, GridDrift, Process, Units,
    WaveFunction,
};
use epilab::report::RunReport;
use num_complex::Complex64;

use super::{Check, Scenario};
use crate::args::Args;
use crate::error::CliError;

pub struct Nelson;

impl Scenario for Nelson {
    fn name(&self) -> &'static str {
        "nelson"
    }

    fn summary(&self) -> &'static str {
        "Nelson diffusion of the oscillator ground state and Schrödinger consistency checks"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["n", "dt", "steps", "grid", "snapshot", "ensemble"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        let units = Units::default();
        let omega = 1.0;
        let v = harmonic_potential(units, omega);
        let n_paths = usize::try_from(args.n.unwrap_or(100_000)).unwrap_or(usize::MAX);
        let dt = args.dt.unwrap_or(0.01);
        let steps = args.steps.unwrap_or(1000);
        let points = args.grid.unwrap_or(1201);

        let ground = WaveFunction::harmonic_ground_state(Grid1D::new(-6.0, 6.0, points)?, units, omega)?;
        let fields = nelson_fields(&ground)?;
        let drift = DriftSource::Static(GridDrift::from_fields(ground.grid(), &fields, Process::Forward)?);
        let ensemble = simulate_diffusion(&drift, &|_| 0.0, units.sigma2(), dt, steps, n_paths, args.seed)?;
        let (_, variance) = ensemble.mean_variance();
        let target = units.hbar / (2.0 * units.mass * omega);
        let var_err = (variance / target - 1.0).abs();

        let residual = |n: usize, step: f64| -> Result<_, CliError> {
            let f0 = WaveFunction::harmonic_ground_state(Grid1D::new(-6.0, 6.0, n)?, units, omega)?;
            let f1 = schrodinger_evolve(&f0, &v, step, 1)?;
            Ok(residual_ut_vt(&f0, &f1, &v, step)?)
        };
        let coarse = residual(241, 2e-3)?;
        let fine = residual(481, 1e-3)?;
        let shrink = (coarse.ut / fine.ut).min(coarse.vt / fine.vt);

        let coherent = WaveFunction::gaussian_packet(Grid1D::new(-10.0, 10.0, 2001)?, units, 1.0, 0.5f64.sqrt(), 0.0)?;
        let drift_norm = (schrodinger_evolve(&coherent, &v, 1e-3, 10_000)?.norm_sq() - 1.0).abs();

        let packet = WaveFunction::gaussian_packet(Grid1D::new(-30.0, 30.0, 3001)?, units, 0.0, 1.0, 0.0)?;
        let t_double = 2.0 * 3f64.sqrt();
        let (_, width2) = schrodinger_evolve(&packet, &|_| 0.0, t_double / 2000.0, 2000)?.position_moments();
        let width_err = (width2 / (1.0 + (t_double / 2.0).powi(2)) - 1.0).abs();

        let rho = ground.density();
        let fp = fokker_planck_residual(ground.grid(), &rho, &fields.b, fields.sigma2, None)?;
        let flipped: Vec<f64> = fields.b.iter().map(|b| -b).collect();
        let fp_control = fokker_planck_residual(ground.grid(), &rho, &flipped, fields.sigma2, None)?;

        if let Some(path) = &args.snapshot {
            write_snapshot_csv(BufWriter::new(File::create(path)?), &ground, &fields)?;
        }
        if let Some(path) = &args.ensemble {
            write_ensemble_csv(BufWriter::new(File::create(path)?), &ensemble)?;
        }

        report
            .parameter("n_paths", n_paths)
            .parameter("dt", dt)
            .parameter("steps", steps)
            .parameter("grid", points)
            .result("variance", variance)
            .result("variance_target", target)
            .result("variance_relative_error", var_err)
            .result("escaped", ensemble.escaped as f64)
            .result("residual_ut", coarse.ut)
            .result("residual_vt", coarse.vt)
            .result("residual_ut_refined", fine.ut)
            .result("residual_vt_refined", fine.vt)
            .result("residual_shrink", shrink)
            .result("norm_drift", drift_norm)
            .result("width_relative_error", width_err)
            .result("fokker_planck", fp)
            .result("fokker_planck_control", fp_control);
        Ok(vec![
            Check::new("ou_variance", var_err <= 0.02, format!("{variance} vs {target}")),
            Check::new("residual_shrink", shrink >= 1.8, format!("{shrink}")),
            Check::new("norm_drift", drift_norm < 1e-8, format!("{drift_norm:e}")),
            Check::new("free_width", width_err < 0.01, format!("{width_err}")),
            Check::new("fokker_planck_control", fp_control >= 10.0 * fp, format!("{fp_control:e} vs {fp:e}")),
        ])
    }
}

pub struct Theorem6;

impl Scenario for Theorem6 {
    fn name(&self) -> &'static str {
        "theorem6"
    }

    fn summary(&self) -> &'static str {
        "step-function discretization of a Gaussian and of the position operator"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["grid", "n"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        let f = |x: f64| Complex64::from_polar((-x * x / 2.0).exp(), 0.7 * x);
        let points = args.grid.unwrap_or(65);
        let refinements = args.n.unwrap_or(4);
        let mut grid = Grid1D::new(-8.0, 8.0, points)?;
        let mut errors = vec![discretize_position(&grid, f)?];
        for _ in 0..refinements {
            grid = grid.halved();
            errors.push(discretize_position(&grid, f)?);
        }
        let mut ratios = Vec::new();
        for (k, e) in errors.iter().enumerate() {
            report.result(&format!("step_error_{k}"), e.step_error).result(&format!("mult_error_{k}"), e.multiplication_error);
        }
        for w in errors.windows(2) {
            ratios.push(w[0].step_error / w[1].step_error);
            ratios.push(w[0].multiplication_error / w[1].multiplication_error);
        }
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        report
            .parameter("grid", points)
            .parameter("refinements", refinements)
            .result("min_ratio", lo)
            .result("max_ratio", hi);
        Ok(vec![Check::new(
            "first_order",
            refinements > 0 && lo >= 1.7 && hi <= 2.3,
            format!("ratios in [{lo}, {hi}]"),
        )])
    }
}
