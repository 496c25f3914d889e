//! Finite experiments, statistics, sufficiency and ancillarity.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column sums of a likelihood matrix must hit 1 within this.
pub const COLUMN_TOL: f64 = 1e-12;
/// Conditional and marginal laws are compared at this level.
pub const LAW_TOL: f64 = 1e-10;

/// Finite parameter grid × finite sample space with p(z | θ_k).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteExperiment {
    theta_grid: Vec<f64>,
    outcomes: Vec<String>,
    /// `likelihood[z][k]` = p(outcome z | θ = theta_grid[k]).
    likelihood: Vec<Vec<f64>>,
}

impl DiscreteExperiment {
    pub fn new(theta_grid: Vec<f64>, outcomes: Vec<String>, likelihood: Vec<Vec<f64>>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidExperiment(msg));
        if theta_grid.is_empty() || outcomes.is_empty() {
            return bad("empty parameter grid or sample space".into());
        }
        if likelihood.len() != outcomes.len() {
            return bad(format!("{} likelihood rows for {} outcomes", likelihood.len(), outcomes.len()));
        }
        let r = theta_grid.len();
        for (z, row) in likelihood.iter().enumerate() {
            if row.len() != r {
                return bad(format!("row {z} has {} entries, grid has {r}", row.len()));
            }
            if let Some(p) = row.iter().find(|p| !p.is_finite() || **p < 0.0 || **p > 1.0) {
                return bad(format!("row {z} has entry {p} outside [0, 1]"));
            }
        }
        for k in 0..r {
            let total: f64 = likelihood.iter().map(|row| row[k]).sum();
            if (total - 1.0).abs() > COLUMN_TOL {
                return bad(format!("column {k} sums to {total}"));
            }
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = outcomes.iter().find(|o| !seen.insert(*o)) {
            return bad(format!("duplicate outcome label {dup}"));
        }
        Ok(Self { theta_grid, outcomes, likelihood })
    }

    /// Parses `{"theta_grid": [...], "outcomes": [...], "likelihood": [[...], ...]}`
    /// with one likelihood row per outcome and one column per θ.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            theta_grid: Vec<f64>,
            outcomes: Vec<serde_json::Value>,
            likelihood: Vec<Vec<f64>>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::InvalidExperiment(e.to_string()))?;
        let outcomes = doc
            .outcomes
            .into_iter()
            .map(|v| match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            })
            .collect();
        Self::new(doc.theta_grid, outcomes, doc.likelihood)
    }

    /// Number of successes in `n` Bernoulli(θ) trials.
    pub fn binomial(n: u32, theta_grid: Vec<f64>) -> Result<Self> {
        let outcomes = (0..=n).map(|z| z.to_string()).collect();
        let likelihood = (0..=n)
            .map(|z| theta_grid.iter().map(|&t| binomial_pmf(n, z, t)).collect())
            .collect();
        Self::new(theta_grid, outcomes, likelihood)
    }

    /// Number of successes observed before the `failures`-th failure, with
    /// counts of `cap` or more lumped into the final outcome `">=cap"`.
    pub fn negative_binomial(failures: u32, cap: u32, theta_grid: Vec<f64>) -> Result<Self> {
        if failures == 0 || cap == 0 {
            return Err(Error::InvalidExperiment("need at least one failure and a positive cap".into()));
        }
        let mut outcomes: Vec<String> = (0..cap).map(|s| s.to_string()).collect();
        outcomes.push(format!(">={cap}"));
        let mut likelihood: Vec<Vec<f64>> = (0..cap)
            .map(|s| theta_grid.iter().map(|&t| negative_binomial_pmf(failures, s, t)).collect())
            .collect();
        let tail = (0..theta_grid.len())
            .map(|k| (1.0 - likelihood.iter().map(|row| row[k]).sum::<f64>()).max(0.0))
            .collect();
        likelihood.push(tail);
        Self::new(theta_grid, outcomes, likelihood)
    }

    pub fn theta_grid(&self) -> &[f64] {
        &self.theta_grid
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn likelihood(&self) -> &[Vec<f64>] {
        &self.likelihood
    }

    /// p(z | θ_k).
    pub fn p(&self, z: usize, k: usize) -> f64 {
        self.likelihood[z][k]
    }

    pub fn outcome_index(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == label)
    }

    pub fn n_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn n_params(&self) -> usize {
        self.theta_grid.len()
    }
}

fn ln_choose(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

pub fn binomial_pmf(n: u32, z: u32, theta: f64) -> f64 {
    if z > n {
        return 0.0;
    }
    let term = |count: u32, p: f64| if count == 0 { 0.0 } else { count as f64 * p.ln() };
    (ln_choose(n, z) + term(z, theta) + term(n - z, 1.0 - theta)).exp()
}

/// P(S = s) for successes before the r-th failure: C(s+r−1, s) θ^s (1−θ)^r.
pub fn negative_binomial_pmf(failures: u32, successes: u32, theta: f64) -> f64 {
    let term = |count: u32, p: f64| if count == 0 { 0.0 } else { count as f64 * p.ln() };
    (ln_choose(successes + failures - 1, successes) + term(successes, theta) + term(failures, 1.0 - theta)).exp()
}

/// A total map from outcomes to level labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statistic {
    levels: Vec<String>,
}

impl Statistic {
    pub fn new(levels: Vec<String>) -> Self {
        Self { levels }
    }

    pub fn from_fn(exp: &DiscreteExperiment, f: impl Fn(usize, &str) -> String) -> Self {
        Self { levels: exp.outcomes.iter().enumerate().map(|(z, o)| f(z, o)).collect() }
    }

    pub fn identity(exp: &DiscreteExperiment) -> Self {
        Self { levels: exp.outcomes.clone() }
    }

    pub fn constant(exp: &DiscreteExperiment) -> Self {
        Self { levels: vec![String::new(); exp.n_outcomes()] }
    }

    /// Parses `{"map": {"outcome": "level", ...}}`; every outcome of `exp`
    /// must be mapped.
    pub fn from_json(text: &str, exp: &DiscreteExperiment) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            map: BTreeMap<String, serde_json::Value>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::InvalidStatistic(e.to_string()))?;
        let levels = exp
            .outcomes
            .iter()
            .map(|o| {
                doc.map
                    .get(o)
                    .map(|v| match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .ok_or_else(|| Error::InvalidStatistic(format!("outcome {o} is not mapped")))
            })
            .collect::<Result<_>>()?;
        Ok(Self { levels })
    }

    pub fn level(&self, z: usize) -> &str {
        &self.levels[z]
    }

    /// Outcome indices grouped by level, in order of first appearance.
    pub fn partition(&self) -> Vec<Vec<usize>> {
        let mut order: Vec<&str> = Vec::new();
        let mut groups: HashMap<&str, Vec<usize>> = HashMap::new();
        for (z, l) in self.levels.iter().enumerate() {
            groups
                .entry(l.as_str())
                .or_insert_with(|| {
                    order.push(l.as_str());
                    Vec::new()
                })
                .push(z);
        }
        order.into_iter().map(|l| groups.remove(l).expect("level present")).collect()
    }

    fn check_for(&self, exp: &DiscreteExperiment) -> Result<()> {
        if self.levels.len() != exp.n_outcomes() {
            return Err(Error::InvalidStatistic(format!(
                "statistic maps {} outcomes, experiment has {}",
                self.levels.len(),
                exp.n_outcomes()
            )));
        }
        Ok(())
    }
}

/// Conditional law of z given t is the same for every θ giving the level
/// positive probability, and p(z|θ) = g(t(z)|θ) h(z) holds with
/// g = P(level | θ) and h that common conditional law.
pub fn is_sufficient(exp: &DiscreteExperiment, t: &Statistic) -> Result<bool> {
    t.check_for(exp)?;
    for block in t.partition() {
        let mass: Vec<f64> = (0..exp.n_params())
            .map(|k| block.iter().map(|&z| exp.p(z, k)).sum())
            .collect();
        let Some(reference) = mass.iter().position(|&m| m > 0.0) else {
            continue;
        };
        let h: Vec<f64> = block.iter().map(|&z| exp.p(z, reference) / mass[reference]).collect();
        for (k, &m) in mass.iter().enumerate() {
            for (&z, &hz) in block.iter().zip(&h) {
                if m > 0.0 && (exp.p(z, k) / m - hz).abs() > LAW_TOL {
                    return Ok(false);
                }
                if (exp.p(z, k) - m * hz).abs() > LAW_TOL {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Marginal law of u(z) is the same for every θ.
pub fn is_ancillary(exp: &DiscreteExperiment, u: &Statistic) -> Result<bool> {
    u.check_for(exp)?;
    for block in u.partition() {
        let mass: Vec<f64> = (0..exp.n_params())
            .map(|k| block.iter().map(|&z| exp.p(z, k)).sum())
            .collect();
        if mass.iter().any(|m| (m - mass[0]).abs() > LAW_TOL) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcomes grouped by proportional likelihood rows (the minimal sufficient
/// partition). Outcomes impossible under every θ form their own block.
pub fn likelihood_ratio_partition(exp: &DiscreteExperiment) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for z in 0..exp.n_outcomes() {
        let row = &exp.likelihood[z];
        let home = blocks.iter_mut().find(|b| {
            let rep = &exp.likelihood[b[0]];
            rows_proportional(rep, row)
        });
        match home {
            Some(b) => b.push(z),
            None => blocks.push(vec![z]),
        }
    }
    blocks
}

fn rows_proportional(a: &[f64], b: &[f64]) -> bool {
    let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    if sa == 0.0 || sb == 0.0 {
        return sa == 0.0 && sb == 0.0;
    }
    a.iter().zip(b).all(|(x, y)| (x / sa - y / sb).abs() <= LAW_TOL)
}

/// Whether the minimal sufficient partition changes across a family of
/// experiments indexed by a finite context grid.
pub fn partition_depends_on_context(family: &[DiscreteExperiment]) -> bool {
    let mut parts = family.iter().map(|e| {
        let mut p = likelihood_ratio_partition(e);
        p.sort();
        p
    });
    match parts.next() {
        Some(first) => parts.any(|p| p != first),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three iid Bernoulli(θ) draws with outcome labels like "011".
    pub(crate) fn bernoulli3(grid: Vec<f64>) -> DiscreteExperiment {
        let outcomes: Vec<String> = (0..8).map(|b| format!("{:03b}", b)).collect();
        let likelihood = (0..8u32)
            .map(|b| {
                let ones = b.count_ones() as i32;
                grid.iter().map(|t| t.powi(ones) * (1.0 - t).powi(3 - ones)).collect()
            })
            .collect();
        DiscreteExperiment::new(grid, outcomes, likelihood).unwrap()
    }

    #[test]
    fn validation() {
        let one = || vec!["a".to_string()];
        assert!(DiscreteExperiment::new(vec![0.5], one(), vec![vec![0.9]]).is_err());
        assert!(DiscreteExperiment::new(vec![], one(), vec![]).is_err());
        assert!(DiscreteExperiment::new(vec![0.5], one(), vec![vec![1.0]]).is_ok());
        assert!(DiscreteExperiment::new(vec![0.5], vec!["a".into(), "a".into()], vec![vec![0.5], vec![0.5]]).is_err());
    }

    #[test]
    fn sufficiency_of_sum() {
        let exp = bernoulli3(vec![0.3, 0.7]);
        let sum = Statistic::from_fn(&exp, |_, o| o.matches('1').count().to_string());
        assert!(is_sufficient(&exp, &sum).unwrap());
        let first = Statistic::from_fn(&exp, |_, o| o[..1].to_string());
        assert!(!is_sufficient(&exp, &first).unwrap());
        assert!(is_sufficient(&exp, &Statistic::identity(&exp)).unwrap());
    }

    #[test]
    fn ancillarity_examples() {
        let exp = bernoulli3(vec![0.3, 0.7]);
        assert!(!is_ancillary(&exp, &Statistic::identity(&exp)).unwrap());
        assert!(is_ancillary(&exp, &Statistic::constant(&exp)).unwrap());
    }

    #[test]
    fn zero_likelihoods_terminate() {
        // θ = 0 and θ = 1 make most outcomes impossible.
        let exp = bernoulli3(vec![0.0, 0.5, 1.0]);
        let sum = Statistic::from_fn(&exp, |_, o| o.matches('1').count().to_string());
        assert!(is_sufficient(&exp, &sum).unwrap());
        let first = Statistic::from_fn(&exp, |_, o| o[..1].to_string());
        assert!(!is_sufficient(&exp, &first).unwrap());
    }

    #[test]
    fn json_loading() {
        let exp = DiscreteExperiment::from_json(
            r#"{"theta_grid":[0.2,0.6],"outcomes":["lo","hi"],"likelihood":[[0.8,0.4],[0.2,0.6]]}"#,
        )
        .unwrap();
        assert_eq!(exp.p(1, 1), 0.6);
        let t = Statistic::from_json(r#"{"map":{"lo":"x","hi":"y"}}"#, &exp).unwrap();
        assert_eq!(t.level(0), "x");
        assert!(Statistic::from_json(r#"{"map":{"lo":"x"}}"#, &exp).is_err());
    }

    #[test]
    fn binomial_and_negative_binomial_columns() {
        let grid = vec![0.1, 0.3, 0.5, 0.7, 0.9];
        let b = DiscreteExperiment::binomial(10, grid.clone()).unwrap();
        assert_eq!(b.n_outcomes(), 11);
        let nb = DiscreteExperiment::negative_binomial(2, 400, grid).unwrap();
        // 9 sequences end in the second zero with eight ones before it.
        let t: f64 = 0.7;
        assert!((nb.p(8, 3) - 9.0 * t.powi(8) * (1.0 - t).powi(2)).abs() < 1e-14);
        assert!((binomial_pmf(10, 8, t) - 45.0 * t.powi(8) * (1.0 - t).powi(2)).abs() < 1e-14);
    }

    #[test]
    fn context_dependence() {
        let a = bernoulli3(vec![0.3, 0.7]);
        let b = bernoulli3(vec![0.2, 0.6]);
        assert!(!partition_depends_on_context(&[a.clone(), b]));
        let flat = DiscreteExperiment::new(
            vec![0.3, 0.7],
            a.outcomes().to_vec(),
            vec![vec![0.125; 2]; 8],
        )
        .unwrap();
        assert!(partition_depends_on_context(&[a, flat]));
    }
}
