use std::f64::consts::{PI, SQRT_2};

use epilab::hilbert::{born_probability, busch_reconstruct, dutch_book_identity, measure_by_name, DensityOperator, Effect};
use epilab::linalg::{trace_product, ComplexMatrix};
use epilab::random::{self, substream};
use epilab::report::RunReport;
use epilab::spin::{
    chsh_maximize, chsh_value, mermin_classical_bound, mermin_model, mermin_simulate, spin_state,
    transition_probability, ChshSettings, ChshSource, DeterministicStrategy, Direction, SpinOutcome,
};
use epilab::Error;

use super::{Check, Scenario};
use crate::args::Args;
use crate::error::CliError;

pub struct Born;

impl Scenario for Born {
    fn name(&self) -> &'static str {
        "born"
    }

    fn summary(&self) -> &'static str {
        "spin transition law against the Born rule on random direction pairs"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["n"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        let n = args.n.unwrap_or(1000);
        let mut rng = substream(args.seed, 0);
        let mut worst: f64 = 0.0;
        for _ in 0..n {
            let a = Direction::random(&mut rng);
            let b = Direction::random(&mut rng);
            for va in SpinOutcome::BOTH {
                for vb in SpinOutcome::BOTH {
                    let born = born_probability(&spin_state(&a, va)?, &spin_state(&b, vb)?)?;
                    worst = worst.max((transition_probability(&a, va, &b, vb) - born).abs());
                }
            }
        }
        let plus = SpinOutcome::Plus;
        let z = Direction::z_axis();
        let at = |angle: f64| transition_probability(&z, plus, &Direction::in_xz_plane(angle), plus);
        let (aligned, deg120, deg90) = (at(0.0), at(2.0 * PI / 3.0), at(PI / 2.0));
        report
            .parameter("n", n)
            .result("max_abs_diff", worst)
            .result("aligned", aligned)
            .result("angle_120", deg120)
            .result("angle_90", deg90);
        Ok(vec![
            Check::new("born_agreement", worst <= 1e-12, format!("max |difference| = {worst:e}")),
            Check::new("spot_aligned", (aligned - 1.0).abs() <= 1e-12, format!("{aligned}")),
            Check::new("spot_120", (deg120 - 0.25).abs() <= 1e-12, format!("{deg120}")),
            Check::new("spot_90", (deg90 - 0.5).abs() <= 1e-12, format!("{deg90}")),
        ])
    }
}

pub struct Chsh;

impl Scenario for Chsh {
    fn name(&self) -> &'static str {
        "chsh"
    }

    fn summary(&self) -> &'static str {
        "CHSH value for deterministic strategies and the singlet"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["optimize", "grid"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        let classical: Vec<f64> = DeterministicStrategy::all()
            .into_iter()
            .map(|s| chsh_value(&ChshSettings::coplanar([0.0; 4]), ChshSource::Deterministic(s)))
            .collect::<Result<_, Error>>()?;
        let classical_ok = classical.iter().all(|v| *v == 2.0 || *v == -2.0);
        let classical_max = classical.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let classical_min = classical.iter().cloned().fold(f64::INFINITY, f64::min);
        report.result("classical_max", classical_max).result("classical_min", classical_min);

        let value = if args.optimize {
            let grid = args.grid.unwrap_or(360);
            let opt = chsh_maximize(grid)?;
            report.parameter("grid", grid);
            for (name, angle) in ["a_deg", "b_deg", "c_deg", "d_deg"].iter().zip(opt.angles) {
                report.result(name, angle.to_degrees().rem_euclid(360.0));
            }
            opt.value
        } else {
            let angles = [0.0f64, 90.0, 225.0, 315.0].map(f64::to_radians);
            chsh_value(&ChshSettings::coplanar(angles), ChshSource::Quantum)?
        };
        report.parameter("optimize", args.optimize).result("value", value).result("tsirelson", 2.0 * SQRT_2);
        Ok(vec![
            Check::new("classical_values", classical_ok, format!("range [{classical_min}, {classical_max}]")),
            Check::new("quantum_value", value >= 2.8283, format!("{value}")),
        ])
    }
}

pub struct Mermin;

impl Scenario for Mermin {
    fn name(&self) -> &'static str {
        "mermin"
    }

    fn summary(&self) -> &'static str {
        "Mermin's three-switch device under quantum, urn or instruction-set models"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["model", "n"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        let name = args.model.as_deref().unwrap_or("quantum");
        let model = mermin_model(name).ok_or_else(|| Error::InvalidArgument(format!("unknown Mermin model `{name}`")))?;
        let n = args.n.unwrap_or(1_000_000);
        let r = mermin_simulate(model.as_ref(), n, args.seed)?;
        let bound = mermin_classical_bound();
        let bound_f = *bound.numer() as f64 / *bound.denom() as f64;
        report
            .parameter("model", model.name())
            .parameter("n", n)
            .result("same_switch_freq", r.same_switch_same_color_freq)
            .result("overall_freq", r.overall_same_color_freq)
            .result("classical_bound", bound_f);
        let sigma = (0.25 / n as f64).sqrt();
        let overall = r.overall_same_color_freq;
        let overall_check = if model.name() == "classical" {
            Check::new("overall_at_least_bound", overall >= bound_f - 3.0 * sigma, format!("{overall}"))
        } else {
            Check::new("overall_half", (overall - 0.5).abs() <= 0.0015, format!("{overall}"))
        };
        Ok(vec![
            Check::new("bound_is_5_9", *bound.numer() == 5 && *bound.denom() == 9, format!("{bound}")),
            Check::new(
                "same_switch_agree",
                r.same_switch_same_color_freq == 1.0,
                format!("{}", r.same_switch_same_color_freq),
            ),
            overall_check,
        ])
    }
}

pub struct Busch;

impl Scenario for Busch {
    fn name(&self) -> &'static str {
        "busch"
    }

    fn summary(&self) -> &'static str {
        "reconstruct density operators from generalized probability measures"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["dim", "n", "trials", "model"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        let model = args.model.as_deref().unwrap_or("trace");
        let n = args.n.unwrap_or(50);
        let trials = args.trials.unwrap_or(100);
        let mut rng = substream(args.seed, 0);
        let (mut recon, mut effect_err, mut dutch, mut rejected) = (0.0f64, 0.0f64, 0.0f64, 0u64);
        for k in 0..n {
            let dim = args.dim.unwrap_or(2 + (k % 4) as usize);
            let sigma = DensityOperator::new(random::density_matrix(&mut rng, dim))?;
            let mu = measure_by_name(model, sigma.clone())
                .ok_or_else(|| Error::InvalidArgument(format!("unknown measure `{model}`")))?;
            let hat = match busch_reconstruct(&mu, dim) {
                Ok(h) => h,
                Err(Error::NotAdditive { .. } | Error::MeasureNotNormalized { .. } | Error::NotDensity(_)) => {
                    rejected += 1;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            recon = recon.max(hat.matrix().max_abs_diff(sigma.matrix()));
            for _ in 0..trials {
                let e = Effect::new(random::effect(&mut rng, dim))?;
                let predicted = trace_product(hat.matrix(), e.matrix())?.re;
                effect_err = effect_err.max((predicted - mu.evaluate(&e)).abs());
            }
            let e1 = random::effect(&mut rng, dim);
            let e2 = random::effect(&mut rng, dim);
            let e0: ComplexMatrix = (&e1 + &e2).scale_real(0.5);
            let q = |m: ComplexMatrix| Effect::new(m).map(|e| mu.evaluate(&e));
            dutch = dutch.max(dutch_book_identity(q(e1)?, q(e2)?, q(e0)?).abs());
        }
        report
            .parameter("model", model)
            .parameter("n", n)
            .parameter("trials", trials)
            .result("max_reconstruction_error", recon)
            .result("max_effect_error", effect_err)
            .result("max_dutch_book", dutch)
            .result("rejected", rejected as f64);
        if model == "trace" {
            Ok(vec![
                Check::new("reconstruction", recon <= 1e-10, format!("{recon:e}")),
                Check::new("effects", effect_err <= 1e-9, format!("{effect_err:e}")),
                Check::new("dutch_book", dutch <= 1e-12, format!("{dutch:e}")),
                Check::new("none_rejected", rejected == 0, format!("{rejected}")),
            ])
        } else {
            Ok(vec![Check::new("all_rejected", rejected == n, format!("{rejected} of {n}"))])
        }
    }
}
