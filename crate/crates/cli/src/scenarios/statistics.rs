use epilab::groups::{induced_action, is_permissible, is_transitive, orbits, ConceptVariable, FiniteAction};
use epilab::inference::bayes::{example17_bayes, example17_group_value};
use epilab::inference::birnbaum::{binomial_negative_binomial_pair, birnbaum_statistic, likelihoods_proportional};
use epilab::inference::entropy::{entropy, entropy_correlation, JointPmf};
use epilab::inference::experiment::{is_sufficient, DiscreteExperiment};
use epilab::inference::multinomial::multinomial_conditional_analysis;
use epilab::inference::reml::{random_basis, reml_estimate, reml_with_basis};
use epilab::random::substream;
use epilab::report::RunReport;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use super::{bad_input, parse_json, Check, Scenario};
use crate::args::Args;
use crate::error::CliError;

pub struct Example17;

impl Scenario for Example17 {
    fn name(&self) -> &'static str {
        "example17"
    }

    fn summary(&self) -> &'static str {
        "sign agreement of correlated spin components: Monte Carlo against the group value"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["n"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        let n = args.n.unwrap_or(1_000_000);
        let r = example17_bayes(n, args.seed)?;
        let group = example17_group_value();
        let orthant = 0.5 + (-1.0f64 / 3.0).asin() / std::f64::consts::PI;
        report
            .parameter("n", n)
            .result("bayes", r.estimate)
            .result("bayes_std_error", r.std_error)
            .result("orthant_exact", orthant)
            .result("group", group);
        Ok(vec![
            Check::new("bayes_near_0.43", (r.estimate - 0.43).abs() <= 0.01, format!("{}", r.estimate)),
            Check::new("group_one_third", (group - 1.0 / 3.0).abs() <= 1e-12, format!("{group}")),
        ])
    }
}

pub struct Birnbaum;

#[derive(Deserialize)]
struct PairDoc {
    e1: Value,
    e2: Value,
    z1: Value,
    z2: Value,
}

fn label(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Scenario for Birnbaum {
    fn name(&self) -> &'static str {
        "birnbaum"
    }

    fn summary(&self) -> &'static str {
        "proportional likelihoods and the sufficient statistic on Birnbaum's mixture"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["input"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        let (e1, e2, z1, z2, default) = match args.read_input()? {
            None => {
                let (b, nb) = binomial_negative_binomial_pair(vec![0.1, 0.3, 0.5, 0.7, 0.9])?;
                (b, nb, "8".to_string(), "8".to_string(), true)
            }
            Some(text) => {
                let doc: PairDoc = serde_json::from_value(parse_json(&text, "birnbaum input")?)
                    .map_err(|e| bad_input("birnbaum input", e.to_string()))?;
                let e1 = DiscreteExperiment::from_json(&doc.e1.to_string())?;
                let e2 = DiscreteExperiment::from_json(&doc.e2.to_string())?;
                (e1, e2, label(&doc.z1), label(&doc.z2), false)
            }
        };
        let i1 = e1.outcome_index(&z1).ok_or_else(|| bad_input("birnbaum input", format!("no outcome {z1} in e1")))?;
        let i2 = e2.outcome_index(&z2).ok_or_else(|| bad_input("birnbaum input", format!("no outcome {z2} in e2")))?;
        report.parameter("z1", z1.as_str()).parameter("z2", z2.as_str()).parameter("theta_grid", e1.theta_grid().to_vec());
        let c = likelihoods_proportional(&e1, i1, &e2, i2)?;
        report.result("proportional", f64::from(u8::from(c.is_some())));
        let mut checks = vec![Check::new("proportional", c.is_some(), format!("{c:?}"))];
        if let Some(c) = c {
            let (mixture, t) = birnbaum_statistic(&e1, &e2, i1, i2)?;
            let sufficient = is_sufficient(&mixture, &t)?;
            report
                .result("c", c)
                .result("sufficient", f64::from(u8::from(sufficient)))
                .result("mixture_outcomes", mixture.n_outcomes() as f64);
            checks.push(Check::new("sufficient", sufficient, format!("{sufficient}")));
            if default {
                checks.push(Check::new("c_is_5", (c - 5.0).abs() <= 1e-10, format!("{c}")));
            }
        }
        Ok(checks)
    }
}

pub struct Reml;

#[derive(Deserialize)]
struct RemlDoc {
    y: Vec<f64>,
    #[serde(rename = "X")]
    x: Vec<Vec<f64>>,
}

impl Scenario for Reml {
    fn name(&self) -> &'static str {
        "reml"
    }

    fn summary(&self) -> &'static str {
        "REML variance estimate and its independence of the contrast basis"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["input", "n"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        let (y, x, default) = match args.read_input()? {
            None => (DVector::from_vec(vec![1.0, 2.0, 3.0]), DMatrix::from_element(3, 1, 1.0), true),
            Some(text) => {
                let doc: RemlDoc = serde_json::from_value(parse_json(&text, "reml input")?)
                    .map_err(|e| bad_input("reml input", e.to_string()))?;
                let cols = doc.x.first().map_or(0, Vec::len);
                if doc.x.iter().any(|r| r.len() != cols) {
                    return Err(bad_input("reml input", "rows of X differ in length"));
                }
                let flat: Vec<f64> = doc.x.iter().flatten().copied().collect();
                (DVector::from_vec(doc.y), DMatrix::from_row_slice(doc.x.len(), cols, &flat), false)
            }
        };
        let estimate = reml_estimate(&y, &x)?;
        let bases = args.n.unwrap_or(10);
        let mut rng = substream(args.seed, 0);
        let mut spread: f64 = 0.0;
        for _ in 0..bases {
            let a = random_basis(&x, &mut rng)?;
            spread = spread.max((reml_with_basis(&y, &x, &a)? - estimate).abs());
        }
        report
            .parameter("n_obs", y.len())
            .parameter("n_cols", x.ncols())
            .parameter("bases", bases)
            .result("estimate", estimate)
            .result("basis_spread", spread);
        let mut checks = vec![Check::new("basis_invariance", spread <= 1e-10, format!("{spread:e}"))];
        if default {
            checks.push(Check::new("sample_variance", (estimate - 1.0).abs() <= 1e-12, format!("{estimate}")));
        }
        Ok(checks)
    }
}

pub struct Multinomial;

impl Scenario for Multinomial {
    fn name(&self) -> &'static str {
        "multinomial"
    }

    fn summary(&self) -> &'static str {
        "conditional estimators and variances given two competing ancillaries"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["theta", "n"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        let theta = args.theta.unwrap_or(0.0);
        let n = u32::try_from(args.n.unwrap_or(10))
            .map_err(|_| epilab::Error::InvalidArgument("n is too large".into()))?;
        let r = multinomial_conditional_analysis(theta, n)?;
        let rel = (r.avar_u1 - r.avar_u2).abs() / r.avar_u1.min(r.avar_u2);
        report
            .parameter("theta", theta)
            .parameter("n", n)
            .result("mle_full", r.mle_full)
            .result("mle_u1", r.mle_given_u1)
            .result("mle_u2", r.mle_given_u2)
            .result("avar_u1", r.avar_u1)
            .result("avar_u2", r.avar_u2)
            .result("avar_full", r.avar_full)
            .result("avar_relative_difference", rel);
        let mle_gap = (r.mle_given_u1 - r.mle_given_u2).abs().max((r.mle_given_u1 - theta).abs());
        Ok(vec![
            Check::new("mle_agreement", mle_gap <= 1e-8, format!("{mle_gap:e}")),
            Check::new("avar_differ", rel > 0.01, format!("{rel}")),
        ])
    }
}

pub struct Entropy;

#[derive(Deserialize)]
struct JointDoc {
    joint: Vec<Vec<f64>>,
}

fn random_simplex<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    let mut p: Vec<f64> = raw.iter().map(|v| v / s).collect();
    // Put the rounding residue on the last entry so the sum is 1 to the ulp.
    let head: f64 = p[..k - 1].iter().sum();
    p[k - 1] = 1.0 - head;
    p
}

impl Scenario for Entropy {
    fn name(&self) -> &'static str {
        "entropy"
    }

    fn summary(&self) -> &'static str {
        "entropy correlation of joint tables"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["input", "n"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        if let Some(text) = args.read_input()? {
            let doc: JointDoc = serde_json::from_value(parse_json(&text, "entropy input")?)
                .map_err(|e| bad_input("entropy input", e.to_string()))?;
            let joint = JointPmf::new(doc.joint)?;
            let c = entropy_correlation(&joint);
            let flat: Vec<f64> = {
                let (r, k) = joint.shape();
                (0..r).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| joint.get(i, j)).collect()
            };
            report
                .result("correlation", c)
                .result("h_rows", entropy(&joint.row_marginal())?)
                .result("h_cols", entropy(&joint.col_marginal())?)
                .result("h_joint", entropy(&flat)?);
            return Ok(vec![Check::new("nonnegative", c >= -1e-12, format!("{c}"))]);
        }
        let n = args.n.unwrap_or(100);
        let mut rng = substream(args.seed, 0);
        let (mut max_product, mut min_perturbed) = (0.0f64, f64::INFINITY);
        for _ in 0..n {
            let row = random_simplex(&mut rng, 3);
            let col = random_simplex(&mut rng, 4);
            let prod = JointPmf::product(&row, &col)?;
            max_product = max_product.max(entropy_correlation(&prod).abs());
            let mut table: Vec<Vec<f64>> = (0..3).map(|i| (0..4).map(|j| prod.get(i, j)).collect()).collect();
            let eps = 0.5 * [table[0][0], table[0][1], table[1][0], table[1][1]].into_iter().fold(f64::INFINITY, f64::min);
            table[0][0] += eps;
            table[1][1] += eps;
            table[0][1] -= eps;
            table[1][0] -= eps;
            min_perturbed = min_perturbed.min(entropy_correlation(&JointPmf::new(table)?));
        }
        let diag = entropy_correlation(&JointPmf::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]])?);
        report
            .parameter("n", n)
            .result("max_product_correlation", max_product)
            .result("min_perturbed_correlation", min_perturbed)
            .result("diagonal_correlation", diag);
        Ok(vec![
            Check::new("products_zero", max_product <= 1e-12, format!("{max_product:e}")),
            Check::new("perturbed_positive", min_perturbed > 1e-6, format!("{min_perturbed:e}")),
            Check::new("diagonal_ln2", (diag - std::f64::consts::LN_2).abs() <= 1e-12, format!("{diag}")),
        ])
    }
}

pub struct Orbits;

impl Scenario for Orbits {
    fn name(&self) -> &'static str {
        "orbits"
    }

    fn summary(&self) -> &'static str {
        "orbits of a finite group action and permissibility of a concept variable"
    }

    fn flags(&self) -> &'static [&'static str] {
        &["input"]
    }

    fn run(&self, args: &Args, report: &mut RunReport) -> Result<Vec<Check>, CliError> {
        let (action, eta) = match args.read_input()? {
            None => {
                let space: Vec<String> = (0..6).map(|i| format!("p{i}")).collect();
                let shift: Vec<usize> = (0..6).map(|i| (i + 2) % 6).collect();
                let parity = ConceptVariable::from_fn(6, |i| if i % 2 == 0 { "even" } else { "odd" }.to_string());
                (FiniteAction::generated_by(space, &[shift])?, Some(parity))
            }
            Some(text) => {
                let doc = parse_json(&text, "orbits input")?;
                let action = FiniteAction::from_json(&text)?;
                let eta = match doc.get("eta") {
                    None => None,
                    Some(Value::Array(vals)) => Some(ConceptVariable::new(vals.iter().map(label).collect())),
                    Some(_) => return Err(bad_input("orbits input", "eta must be an array")),
                };
                (action, eta)
            }
        };
        let blocks = orbits(&action);
        let named: Vec<Vec<&str>> =
            blocks.iter().map(|b| b.iter().map(|&i| action.space()[i].as_str()).collect()).collect();
        report
            .parameter("orbits", json!(named))
            .result("order", action.order() as f64)
            .result("n_orbits", blocks.len() as f64)
            .result("transitive", f64::from(u8::from(is_transitive(&action))));
        let covered: usize = blocks.iter().map(Vec::len).sum();
        let mut checks = vec![Check::new("partition", covered == action.space().len(), format!("{covered} points"))];
        if let Some(eta) = eta {
            let permissible = is_permissible(&action, &eta)?;
            report.result("permissible", f64::from(u8::from(permissible)));
            if permissible {
                let induced = induced_action(&action, &eta)?;
                report.result("induced_order", induced.order() as f64);
                checks.push(Check::new(
                    "induced_divides",
                    action.order() % induced.order() == 0,
                    format!("{} / {}", action.order(), induced.order()),
                ));
            }
        }
        Ok(checks)
    }
}
