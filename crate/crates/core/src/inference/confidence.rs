//! Confidence distributions on a finite parameter grid.
//!
//! A rule supplies one-sided upper bounds τ(γ, z) as grid indices. The
//! confidence distribution is its inverse, H(u_k) = max{γ : τ(γ, z) ≤ k}.

use serde::Serialize;

use crate::error::{Error, Result};

use super::experiment::DiscreteExperiment;

/// Slack added to 1 − γ when comparing tail probabilities.
pub const LEVEL_SLACK: f64 = 1e-12;

/// Rule producing one-sided upper confidence bounds.
pub trait UpperBoundRule: Send + Sync {
    fn name(&self) -> &str;

    /// Grid index of the upper bound at confidence `gamma` for outcome `z`.
    fn upper_bound(&self, exp: &DiscreteExperiment, gamma: f64, z: usize) -> usize;

    /// Confidence levels at which the bound for `z` may jump.
    fn critical_levels(&self, exp: &DiscreteExperiment, z: usize) -> Vec<f64>;
}

/// Smallest grid value whose lower tail P_θ(Z ≤ z) is at most 1 − γ, or the
/// last grid value when none is. Outcomes are taken in listed order.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClopperPearson;

/// As [`ClopperPearson`] with the observed outcome counted at half weight.
#[derive(Debug, Clone, Copy, Default)]
pub struct MidP;

fn lower_tail(exp: &DiscreteExperiment, z: usize, k: usize, own_weight: f64) -> f64 {
    (0..z).map(|y| exp.p(y, k)).sum::<f64>() + own_weight * exp.p(z, k)
}

fn tail_rule(exp: &DiscreteExperiment, gamma: f64, z: usize, own_weight: f64) -> usize {
    (0..exp.n_params())
        .find(|&k| lower_tail(exp, z, k, own_weight) <= 1.0 - gamma + LEVEL_SLACK)
        .unwrap_or(exp.n_params() - 1)
}

fn tail_levels(exp: &DiscreteExperiment, z: usize, own_weight: f64) -> Vec<f64> {
    (0..exp.n_params()).map(|k| 1.0 - lower_tail(exp, z, k, own_weight)).collect()
}

impl UpperBoundRule for ClopperPearson {
    fn name(&self) -> &str {
        "clopper_pearson"
    }

    fn upper_bound(&self, exp: &DiscreteExperiment, gamma: f64, z: usize) -> usize {
        tail_rule(exp, gamma, z, 1.0)
    }

    fn critical_levels(&self, exp: &DiscreteExperiment, z: usize) -> Vec<f64> {
        tail_levels(exp, z, 1.0)
    }
}

impl UpperBoundRule for MidP {
    fn name(&self) -> &str {
        "mid_p"
    }

    fn upper_bound(&self, exp: &DiscreteExperiment, gamma: f64, z: usize) -> usize {
        tail_rule(exp, gamma, z, 0.5)
    }

    fn critical_levels(&self, exp: &DiscreteExperiment, z: usize) -> Vec<f64> {
        tail_levels(exp, z, 0.5)
    }
}

pub const UPPER_BOUND_RULES: &[&str] = &["clopper_pearson", "mid_p"];

pub fn upper_bound_rule(name: &str) -> Option<Box<dyn UpperBoundRule>> {
    match name {
        "clopper_pearson" | "cp" => Some(Box::new(ClopperPearson)),
        "mid_p" => Some(Box::new(MidP)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfidenceDistribution {
    pub support: Vec<f64>,
    pub cdf: Vec<f64>,
}

impl ConfidenceDistribution {
    /// Probability placed on each support point.
    pub fn pmf(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.cdf
            .iter()
            .map(|&c| {
                let d = c - prev;
                prev = c;
                d
            })
            .collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.cdf.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Confidence distribution for observed outcome `z`.
pub fn confidence_distribution(
    exp: &DiscreteExperiment,
    rule: &dyn UpperBoundRule,
    z: usize,
) -> Result<ConfidenceDistribution> {
    if z >= exp.n_outcomes() {
        return Err(Error::InvalidArgument(format!("outcome index {z} out of range")));
    }
    let mut levels = rule.critical_levels(exp, z);
    levels.extend([0.0, 1.0]);
    levels.retain(|g| (0.0..=1.0).contains(g));
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let bounds: Vec<usize> = levels.iter().map(|&g| rule.upper_bound(exp, g, z)).collect();
    if bounds.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::NonMonotoneRule);
    }
    let cdf = (0..exp.n_params())
        .map(|k| {
            levels
                .iter()
                .zip(&bounds)
                .filter(|(_, &b)| b <= k)
                .map(|(&g, _)| g)
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(ConfidenceDistribution { support: exp.theta_grid().to_vec(), cdf })
}

/// Law of H_Z(u_k) under θ = u_k: attained values with their probabilities,
/// sorted by value.
pub fn attainment_distribution(
    exp: &DiscreteExperiment,
    rule: &dyn UpperBoundRule,
    true_index: usize,
) -> Result<Vec<(f64, f64)>> {
    if true_index >= exp.n_params() {
        return Err(Error::InvalidArgument(format!("parameter index {true_index} out of range")));
    }
    let mut table: Vec<(f64, f64)> = Vec::new();
    for z in 0..exp.n_outcomes() {
        let h = confidence_distribution(exp, rule, z)?.cdf[true_index];
        let p = exp.p(z, true_index);
        match table.iter_mut().find(|(v, _)| (v - h).abs() <= 1e-12) {
            Some(entry) => entry.1 += p,
            None => table.push((h, p)),
        }
    }
    table.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Backwards;

    impl UpperBoundRule for Backwards {
        fn name(&self) -> &str {
            "backwards"
        }
        fn upper_bound(&self, exp: &DiscreteExperiment, gamma: f64, _z: usize) -> usize {
            ((1.0 - gamma) * (exp.n_params() - 1) as f64).round() as usize
        }
        fn critical_levels(&self, _exp: &DiscreteExperiment, _z: usize) -> Vec<f64> {
            vec![0.25, 0.5, 0.75]
        }
    }

    fn grid() -> Vec<f64> {
        (1..10).map(|k| k as f64 / 10.0).collect()
    }

    #[test]
    fn binomial_distributions_are_monotone() {
        let exp = DiscreteExperiment::binomial(5, grid()).unwrap();
        for z in 0..6 {
            let h = confidence_distribution(&exp, &ClopperPearson, z).unwrap();
            assert!(h.is_monotone());
            assert!((h.cdf.last().unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn larger_counts_shift_mass_up() {
        let exp = DiscreteExperiment::binomial(5, grid()).unwrap();
        let lo = confidence_distribution(&exp, &ClopperPearson, 1).unwrap();
        let hi = confidence_distribution(&exp, &ClopperPearson, 4).unwrap();
        assert!(lo.cdf.iter().zip(&hi.cdf).all(|(a, b)| a >= b));
    }

    #[test]
    fn single_outcome_is_point_mass() {
        let exp = DiscreteExperiment::new(vec![0.0, 1.0, 2.0], vec!["x".into()], vec![vec![1.0; 3]]).unwrap();
        let h = confidence_distribution(&exp, &ClopperPearson, 0).unwrap();
        assert_eq!(h.pmf(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn exchangeable_outcomes_give_uniform_attainment() {
        let r = 5;
        let exp = DiscreteExperiment::new(
            (0..r).map(f64::from).collect(),
            (0..r).map(|z| z.to_string()).collect(),
            vec![vec![1.0 / r as f64; r as usize]; r as usize],
        )
        .unwrap();
        let table = attainment_distribution(&exp, &ClopperPearson, 0).unwrap();
        assert_eq!(table.len(), r as usize);
        for (i, (v, p)) in table.iter().enumerate() {
            assert!((v - i as f64 / r as f64).abs() < 1e-12);
            assert!((p - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn non_monotone_rule_is_rejected() {
        let exp = DiscreteExperiment::binomial(3, grid()).unwrap();
        assert_eq!(confidence_distribution(&exp, &Backwards, 1), Err(Error::NonMonotoneRule));
    }

    #[test]
    fn registry() {
        for name in UPPER_BOUND_RULES {
            assert_eq!(upper_bound_rule(name).unwrap().name(), *name);
        }
        assert!(upper_bound_rule("nope").is_none());
    }
}
