//! Four-cell multinomial with two competing ancillaries.
//!
//! Cell probabilities are (1+θ)/6, (2−θ)/6, (1−θ)/6, (2+θ)/6. Both
//! u1 = z1+z2 and u2 = z1+z3 are ancillary. Conditioning on either gives the
//! same estimator but a different conditional Fisher information.

use serde::Serialize;

use crate::error::{Error, Result};

use super::experiment::binomial_pmf;

/// Step of the central second difference for Fisher information.
pub const FISHER_STEP: f64 = 1e-4;

pub fn cell_probabilities(theta: f64) -> [f64; 4] {
    [(1.0 + theta) / 6.0, (2.0 - theta) / 6.0, (1.0 - theta) / 6.0, (2.0 + theta) / 6.0]
}

/// One binomial factor: `count` successes out of `trials` with success
/// probability `a + b·θ`.
#[derive(Debug, Clone, Copy)]
struct Factor {
    successes: f64,
    trials: f64,
    a: f64,
    b: f64,
}

impl Factor {
    fn log_lik(&self, theta: f64) -> f64 {
        let p = self.a + self.b * theta;
        xlogy(self.successes, p) + xlogy(self.trials - self.successes, 1.0 - p)
    }

    fn score(&self, theta: f64) -> f64 {
        let p = self.a + self.b * theta;
        self.b * (self.successes / p - (self.trials - self.successes) / (1.0 - p))
    }
}

fn xlogy(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// z1 | u1 ~ Bin(u1, (1+θ)/3) and z3 | n−u1 ~ Bin(n−u1, (1−θ)/3).
fn factors_given_u1(u1: f64, z1: f64, z3: f64, n: f64) -> [Factor; 2] {
    [
        Factor { successes: z1, trials: u1, a: 1.0 / 3.0, b: 1.0 / 3.0 },
        Factor { successes: z3, trials: n - u1, a: 1.0 / 3.0, b: -1.0 / 3.0 },
    ]
}

/// z1 | u2 ~ Bin(u2, (1+θ)/2) and z2 | n−u2 ~ Bin(n−u2, (2−θ)/4).
fn factors_given_u2(u2: f64, z1: f64, z2: f64, n: f64) -> [Factor; 2] {
    [
        Factor { successes: z1, trials: u2, a: 0.5, b: 0.5 },
        Factor { successes: z2, trials: n - u2, a: 0.5, b: -0.25 },
    ]
}

fn full_log_lik(z: &[f64; 4], theta: f64) -> f64 {
    cell_probabilities(theta).iter().zip(z).map(|(p, c)| xlogy(*c, *p)).sum()
}

fn full_score(z: &[f64; 4], theta: f64) -> f64 {
    let slopes = [1.0, -1.0, -1.0, 1.0];
    cell_probabilities(theta)
        .iter()
        .zip(z)
        .zip(slopes)
        .map(|((p, c), s)| c * s / (6.0 * p))
        .sum()
}

fn total<const N: usize>(factors: &[Factor; N], f: impl Fn(&Factor) -> f64) -> f64 {
    factors.iter().map(f).sum()
}

/// Root of a decreasing score on (−1, 1) by bisection.
fn solve_score(score: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (-1.0 + 1e-12, 1.0 - 1e-12);
    if score(lo) <= 0.0 {
        return lo;
    }
    if score(hi) >= 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if score(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Observed information −ℓ''(θ) by central second difference.
fn second_difference(log_lik: impl Fn(f64) -> f64, theta: f64) -> f64 {
    let h = FISHER_STEP;
    -(log_lik(theta + h) - 2.0 * log_lik(theta) + log_lik(theta - h)) / (h * h)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultinomialReport {
    pub theta: f64,
    pub n: u32,
    pub cell_probabilities: [f64; 4],
    pub mle_full: f64,
    pub mle_given_u1: f64,
    pub mle_given_u2: f64,
    /// E over u1 of the inverse conditional information given u1.
    pub avar_u1: f64,
    /// E over u2 of the inverse conditional information given u2.
    pub avar_u2: f64,
    /// Inverse conditional information at the expected value of u1.
    pub avar_u1_at_mean: f64,
    /// Inverse conditional information at the expected value of u2.
    pub avar_u2_at_mean: f64,
    /// Inverse full-data Fisher information.
    pub avar_full: f64,
}

/// Estimators at the expected cell counts and conditional asymptotic
/// variances at θ.
///
/// The conditional information given u is the second difference of the
/// expected conditional log-likelihood E_θ[ℓ(θ′ | u)] at θ′ = θ. The
/// reported variance averages its inverse over the ancillary's law.
pub fn multinomial_conditional_analysis(theta: f64, n: u32) -> Result<MultinomialReport> {
    if !(theta > -1.0 && theta < 1.0) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let nf = n as f64;
    let p = cell_probabilities(theta);
    let z = p.map(|pi| nf * pi);

    let mle_full = solve_score(|t| full_score(&z, t));
    let f1 = factors_given_u1(z[0] + z[1], z[0], z[2], nf);
    let mle_given_u1 = solve_score(|t| total(&f1, |f| f.score(t)));
    let f2 = factors_given_u2(z[0] + z[2], z[0], z[1], nf);
    let mle_given_u2 = solve_score(|t| total(&f2, |f| f.score(t)));

    // Conditional expected counts given u: z1 = u·q, z3 = (n−u)·q'.
    let q1 = [(1.0 + theta) / 3.0, (1.0 - theta) / 3.0];
    let info_u1 = |u: f64| {
        let f = factors_given_u1(u, u * q1[0], (nf - u) * q1[1], nf);
        second_difference(|t| total(&f, |x| x.log_lik(t)), theta)
    };
    let q2 = [(1.0 + theta) / 2.0, (2.0 - theta) / 4.0];
    let info_u2 = |u: f64| {
        let f = factors_given_u2(u, u * q2[0], (nf - u) * q2[1], nf);
        second_difference(|t| total(&f, |x| x.log_lik(t)), theta)
    };
    let averaged = |info: &dyn Fn(f64) -> f64, success: f64| -> f64 {
        (0..=n).map(|u| binomial_pmf(n, u, success) / info(u as f64)).sum()
    };

    Ok(MultinomialReport {
        theta,
        n,
        cell_probabilities: p,
        mle_full,
        mle_given_u1,
        mle_given_u2,
        avar_u1: averaged(&info_u1, p[0] + p[1]),
        avar_u2: averaged(&info_u2, p[0] + p[2]),
        avar_u1_at_mean: 1.0 / info_u1(nf * (p[0] + p[1])),
        avar_u2_at_mean: 1.0 / info_u2(nf * (p[0] + p[2])),
        avar_full: 1.0 / second_difference(|t| full_log_lik(&z, t), theta),
    })
}
