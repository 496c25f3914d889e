//! Worked examples of ancillarity, conditioning and confidence.

use epilab::inference::bayes::{conditional_positive, EXAMPLE17_COVARIANCE};
use epilab::inference::confidence::{attainment_distribution, confidence_distribution, upper_bound_rule, UPPER_BOUND_RULES};
use epilab::inference::experiment::{is_ancillary, is_sufficient, DiscreteExperiment, Statistic};
use epilab::inference::multinomial::cell_probabilities;
use epilab::spin::{mermin_model, mermin_simulate, singlet_correlation, Direction};

fn one_draw_multinomial() -> DiscreteExperiment {
    let grid = vec![-0.9, -0.4, 0.0, 0.3, 0.8];
    let cells: Vec<[f64; 4]> = grid.iter().map(|&t| cell_probabilities(t)).collect();
    let rows = (0..4).map(|c| cells.iter().map(|p| p[c]).collect()).collect();
    DiscreteExperiment::new(grid, vec!["1".into(), "2".into(), "3".into(), "4".into()], rows).unwrap()
}

#[test]
fn cells_one_and_two_form_an_ancillary_event() {
    let exp = one_draw_multinomial();
    let u1 = Statistic::from_fn(&exp, |_, label| if label == "1" || label == "2" { "in".into() } else { "out".into() });
    assert!(is_ancillary(&exp, &u1).unwrap());
    for k in 0..exp.n_params() {
        assert!((exp.p(0, k) + exp.p(1, k) - 0.5).abs() < 1e-15);
    }
    let u2 = Statistic::from_fn(&exp, |_, label| if label == "1" || label == "3" { "in".into() } else { "out".into() });
    assert!(is_ancillary(&exp, &u2).unwrap());
    let not_ancillary = Statistic::from_fn(&exp, |_, label| if label == "1" { "in".into() } else { "out".into() });
    assert!(!is_ancillary(&exp, &not_ancillary).unwrap());
    assert!(!is_sufficient(&exp, &u1).unwrap());
}

#[test]
fn orthant_probability_matches_the_arcsine_law() {
    // P(ζb > 0 | ζa > 0) = 1/2 + arcsin(ρ)/π with ρ = −1/3.
    let exact = 0.5 + (-1.0f64 / 3.0).asin() / std::f64::consts::PI;
    let r = conditional_positive(&EXAMPLE17_COVARIANCE, 400_000, 3).unwrap();
    assert!((r.estimate - exact).abs() < 4.0 * r.std_error, "{} vs {exact}", r.estimate);
    assert_eq!(r, conditional_positive(&EXAMPLE17_COVARIANCE, 400_000, 3).unwrap());
}

#[test]
fn confidence_distributions_are_monotone_and_attained_levels_are_reported() {
    let grid: Vec<f64> = (1..20).map(|k| k as f64 / 20.0).collect();
    let exp = DiscreteExperiment::binomial(12, grid).unwrap();
    for &name in UPPER_BOUND_RULES {
        let rule = upper_bound_rule(name).unwrap();
        for z in 0..exp.n_outcomes() {
            let cd = confidence_distribution(&exp, rule.as_ref(), z).unwrap();
            assert!(cd.is_monotone());
            assert!((cd.pmf().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        let attained = attainment_distribution(&exp, rule.as_ref(), 9).unwrap();
        assert!((attained.iter().map(|a| a.1).sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(attained.iter().all(|a| (0.0..=1.0 + 1e-12).contains(&a.0)));
    }
    assert!(upper_bound_rule("no-such-rule").is_none());
}

#[test]
fn singlet_correlation_is_minus_cosine() {
    for k in 0..12 {
        let angle = k as f64 * 0.5;
        let c = singlet_correlation(&Direction::z_axis(), &Direction::in_xz_plane(angle)).unwrap();
        assert!((c + angle.cos()).abs() < 1e-12);
    }
}

#[test]
fn mermin_runs_are_seeded_and_classical_models_respect_the_bound() {
    let quantum = mermin_model("quantum").unwrap();
    let a = mermin_simulate(quantum.as_ref(), 200_000, 5).unwrap();
    assert_eq!(a, mermin_simulate(quantum.as_ref(), 200_000, 5).unwrap());

    let classical = mermin_model("classical").unwrap();
    let r = mermin_simulate(classical.as_ref(), 200_000, 5).unwrap();
    assert_eq!(r.same_switch_same_color_freq, 1.0);
    assert!(r.overall_same_color_freq >= 5.0 / 9.0 - 0.005);
}
