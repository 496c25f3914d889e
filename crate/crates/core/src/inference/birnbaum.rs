//! Birnbaum's mixture experiment and the evidence-identifying statistic.

use crate::error::{Error, Result};

use super::experiment::{DiscreteExperiment, Statistic};

/// Relative tolerance on likelihood ratios across the θ grid.
pub const RATIO_TOL: f64 = 1e-10;
/// Likelihood values at or below this are treated as zero.
pub const ZERO_FLOOR: f64 = 1e-300;

/// Label of outcome `z` of component `j` (1 or 2) in the mixture.
pub fn mixture_label(j: u8, z: &str) -> String {
    format!("{j}:{z}")
}

/// Fair coin picks e1 or e2, then that experiment is run.
pub fn birnbaum_mixture(e1: &DiscreteExperiment, e2: &DiscreteExperiment) -> Result<DiscreteExperiment> {
    if e1.theta_grid() != e2.theta_grid() {
        return Err(Error::GridMismatch);
    }
    let mut outcomes = Vec::with_capacity(e1.n_outcomes() + e2.n_outcomes());
    let mut likelihood = Vec::with_capacity(outcomes.capacity());
    for (j, e) in [(1u8, e1), (2u8, e2)] {
        for (z, label) in e.outcomes().iter().enumerate() {
            outcomes.push(mixture_label(j, label));
            likelihood.push(e.likelihood()[z].iter().map(|p| 0.5 * p).collect());
        }
    }
    DiscreteExperiment::new(e1.theta_grid().to_vec(), outcomes, likelihood)
}

/// The constant c with p1(z1|θ) = c·p2(z2|θ) on the whole grid, if any.
///
/// Grid points where both likelihoods vanish are skipped; a point where
/// exactly one vanishes rules proportionality out.
pub fn likelihoods_proportional(
    e1: &DiscreteExperiment,
    z1: usize,
    e2: &DiscreteExperiment,
    z2: usize,
) -> Result<Option<f64>> {
    if e1.theta_grid() != e2.theta_grid() {
        return Err(Error::GridMismatch);
    }
    if z1 >= e1.n_outcomes() || z2 >= e2.n_outcomes() {
        return Err(Error::InvalidArgument("outcome index out of range".into()));
    }
    let mut c: Option<f64> = None;
    for k in 0..e1.n_params() {
        let (a, b) = (e1.p(z1, k), e2.p(z2, k));
        match (a > ZERO_FLOOR, b > ZERO_FLOOR) {
            (false, false) => continue,
            (true, true) => {}
            _ => return Ok(None),
        }
        let ratio = a / b;
        match c {
            None => c = Some(ratio),
            Some(c0) if (ratio - c0).abs() > RATIO_TOL * c0.abs() => return Ok(None),
            Some(_) => {}
        }
    }
    Ok(c)
}

/// Statistic on the mixture that identifies (1, z1*) with (2, z2*) and is the
/// identity elsewhere.
pub fn birnbaum_statistic(
    e1: &DiscreteExperiment,
    e2: &DiscreteExperiment,
    z1_star: usize,
    z2_star: usize,
) -> Result<(DiscreteExperiment, Statistic)> {
    if likelihoods_proportional(e1, z1_star, e2, z2_star)?.is_none() {
        return Err(Error::NotProportional);
    }
    let mixture = birnbaum_mixture(e1, e2)?;
    let collapsed = mixture_label(1, &e1.outcomes()[z1_star]);
    let partner = mixture_label(2, &e2.outcomes()[z2_star]);
    let t = Statistic::from_fn(&mixture, |_, label| {
        if label == partner {
            collapsed.clone()
        } else {
            label.to_string()
        }
    });
    Ok((mixture, t))
}

/// Conditional experiment given the coin shows `j`.
pub fn mixture_component(mixture: &DiscreteExperiment, j: u8) -> Result<DiscreteExperiment> {
    let prefix = format!("{j}:");
    let mut outcomes = Vec::new();
    let mut likelihood = Vec::new();
    for (z, label) in mixture.outcomes().iter().enumerate() {
        if let Some(rest) = label.strip_prefix(&prefix) {
            outcomes.push(rest.to_string());
            likelihood.push(mixture.likelihood()[z].iter().map(|p| 2.0 * p).collect());
        }
    }
    DiscreteExperiment::new(mixture.theta_grid().to_vec(), outcomes, likelihood)
}

/// Binomial(10, θ) against successes before the second failure, the
/// classic pair whose likelihoods at 8 successes differ by a factor 5.
pub fn binomial_negative_binomial_pair(theta_grid: Vec<f64>) -> Result<(DiscreteExperiment, DiscreteExperiment)> {
    let binom = DiscreteExperiment::binomial(10, theta_grid.clone())?;
    let negbin = DiscreteExperiment::negative_binomial(2, 200, theta_grid)?;
    Ok((binom, negbin))
}
