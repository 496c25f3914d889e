//! Monte Carlo for the sign agreement of two correlated spin components.
//!
//! (ζa, ζb) is bivariate normal with covariance [[4/3, −4/9], [−4/9, 4/3]]
//! and the target is P(ζb > 0 | ζa > 0). The group-theoretic answer for the
//! same pair of directions is 1/3.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::random::substream;
use crate::spin::{transition_probability, Direction, SpinOutcome};

/// Smallest accepted sample size.
pub const MIN_SAMPLES: u64 = 10_000;
const CHUNK: u64 = 1 << 16;

pub const EXAMPLE17_COVARIANCE: [[f64; 2]; 2] = [[4.0 / 3.0, -4.0 / 9.0], [-4.0 / 9.0, 4.0 / 3.0]];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalEstimate {
    pub estimate: f64,
    pub std_error: f64,
    /// Draws with ζa > 0.
    pub conditioning_events: u64,
    pub n_samples: u64,
}

/// Lower Cholesky factor of a 2×2 covariance.
fn cholesky2(cov: &[[f64; 2]; 2]) -> Result<[[f64; 2]; 2]> {
    let sym = (cov[0][1] - cov[1][0]).abs();
    if sym > 1e-12 || cov.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("covariance must be finite and symmetric".into()));
    }
    if cov[0][0] <= 0.0 {
        return Err(Error::InvalidArgument("covariance is not positive definite".into()));
    }
    let l00 = cov[0][0].sqrt();
    let l10 = cov[1][0] / l00;
    let rest = cov[1][1] - l10 * l10;
    if rest <= 0.0 {
        return Err(Error::InvalidArgument("covariance is not positive definite".into()));
    }
    Ok([[l00, 0.0], [l10, rest.sqrt()]])
}

/// Estimate of P(ζb > 0 | ζa > 0) for a zero-mean normal pair.
pub fn conditional_positive(cov: &[[f64; 2]; 2], n_samples: u64, seed: u64) -> Result<ConditionalEstimate> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!("need at least {MIN_SAMPLES} samples")));
    }
    let l = cholesky2(cov)?;
    let chunks = n_samples.div_ceil(CHUNK);
    let (cond, hits) = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k);
            let len = CHUNK.min(n_samples - k * CHUNK);
            let (mut cond, mut hits) = (0u64, 0u64);
            for _ in 0..len {
                let e0: f64 = rng.sample(StandardNormal);
                let e1: f64 = rng.sample(StandardNormal);
                let za = l[0][0] * e0;
                let zb = l[1][0] * e0 + l[1][1] * e1;
                if za > 0.0 {
                    cond += 1;
                    hits += u64::from(zb > 0.0);
                }
            }
            (cond, hits)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    if cond == 0 {
        return Err(Error::ZeroProbability { probability: 0.0 });
    }
    let p = hits as f64 / cond as f64;
    Ok(ConditionalEstimate {
        estimate: p,
        std_error: (p * (1.0 - p) / cond as f64).sqrt(),
        conditioning_events: cond,
        n_samples,
    })
}

pub fn example17_bayes(n_samples: u64, seed: u64) -> Result<ConditionalEstimate> {
    conditional_positive(&EXAMPLE17_COVARIANCE, n_samples, seed)
}

/// Transition probability between the + states along −(1,1,1)/√3 and
/// −(1,−1,−1)/√3.
pub fn example17_group_value() -> f64 {
    let a = Direction::normalize(-1.0, -1.0, -1.0).expect("nonzero");
    let b = Direction::normalize(-1.0, 1.0, 1.0).expect("nonzero");
    transition_probability(&a, SpinOutcome::Plus, &b, SpinOutcome::Plus)
}
