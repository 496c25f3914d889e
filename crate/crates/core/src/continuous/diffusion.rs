//! Euler–Maruyama ensembles for dξ = b(ξ, t) dt + σ dw.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::random::substream;

use super::{Grid1D, NelsonFields};

/// Paths per parallel shard.
const CHUNK: usize = 4096;
/// Escapes at or above this fraction of paths are fatal.
pub const ESCAPE_LIMIT: f64 = 1e-3;

/// Which drift of a Nelson field drives the paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Process {
    /// b = v + u.
    Forward,
    /// b* = v − u, the drift of the time-reversed process.
    Backward,
}

/// Drift sampled on a grid, linearly interpolated and clamped at the edges.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDrift {
    x_min: f64,
    spacing: f64,
    values: Vec<f64>,
}

impl GridDrift {
    pub fn new(grid: &Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimMismatch { left: values.len(), right: grid.len() });
        }
        let values = fill_gaps(values)?;
        Ok(Self { x_min: grid.x_min(), spacing: grid.spacing(), values })
    }

    pub fn from_fields(grid: &Grid1D, fields: &NelsonFields, process: Process) -> Result<Self> {
        let v = match process {
            Process::Forward => fields.b.clone(),
            Process::Backward => fields.b_star.clone(),
        };
        Self::new(grid, v)
    }

    pub fn from_fn(grid: &Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().into_iter().map(f).collect())
    }

    pub fn at(&self, x: f64) -> f64 {
        let last = self.values.len() - 1;
        let s = (x - self.x_min) / self.spacing;
        if s.is_nan() || s <= 0.0 {
            return self.values[0];
        }
        if s >= last as f64 {
            return self.values[last];
        }
        let i = s.floor() as usize;
        let w = s - i as f64;
        (1.0 - w) * self.values[i] + w * self.values[i + 1]
    }

    fn x_max(&self) -> f64 {
        self.x_min + (self.values.len() - 1) as f64 * self.spacing
    }
}

/// Replaces NaN entries by the nearest finite value.
fn fill_gaps(mut values: Vec<f64>) -> Result<Vec<f64>> {
    let finite: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_finite()).collect();
    if finite.is_empty() {
        return Err(Error::NonFinite("drift field"));
    }
    for i in 0..values.len() {
        if !values[i].is_finite() {
            let j = *finite.iter().min_by_key(|&&j| j.abs_diff(i)).expect("nonempty");
            values[i] = values[j];
        }
    }
    Ok(values)
}

/// Static drift or a sequence of snapshots, each in force from its start
/// time until the next.
#[derive(Debug, Clone, PartialEq)]
pub enum DriftSource {
    Static(GridDrift),
    Snapshots(Vec<(f64, GridDrift)>),
}

impl DriftSource {
    fn at(&self, x: f64, t: f64) -> f64 {
        match self {
            DriftSource::Static(d) => d.at(x),
            DriftSource::Snapshots(s) => {
                let k = s.partition_point(|(start, _)| *start <= t).saturating_sub(1);
                s[k].1.at(x)
            }
        }
    }

    fn span(&self) -> (f64, f64) {
        let d = match self {
            DriftSource::Static(d) => d,
            DriftSource::Snapshots(s) => &s[0].1,
        };
        (d.x_min, d.x_max())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ensemble {
    pub positions: Vec<f64>,
    pub time: f64,
    pub seed: u64,
    /// Paths that left the drift grid at some step.
    pub escaped: usize,
}

impl Ensemble {
    pub fn mean_variance(&self) -> (f64, f64) {
        let n = self.positions.len() as f64;
        let mean = self.positions.iter().sum::<f64>() / n;
        let var = self.positions.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        (mean, var)
    }
}

/// Integrates `n_paths` paths for `steps` steps of size `dt` with noise
/// variance `sigma2` per unit time. Path i is drawn from stream
/// i / 4096 of `seed`, so results do not depend on thread count.
pub fn simulate_diffusion(
    drift: &DriftSource,
    x0: &(dyn Fn(&mut ChaCha8Rng) -> f64 + Sync),
    sigma2: f64,
    dt: f64,
    steps: usize,
    n_paths: usize,
    seed: u64,
) -> Result<Ensemble> {
    if n_paths == 0 {
        return Err(Error::InvalidArgument("need at least one path".into()));
    }
    if dt.is_nan() || dt <= 0.0 || sigma2.is_nan() || sigma2 < 0.0 {
        return Err(Error::InvalidArgument("dt must be positive and sigma2 nonnegative".into()));
    }
    if let DriftSource::Snapshots(s) = drift {
        if s.is_empty() || s.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(Error::InvalidArgument("snapshots must be nonempty and time-ordered".into()));
        }
    }
    let (lo, hi) = drift.span();
    let noise = (sigma2 * dt).sqrt();
    let shards: Vec<(Vec<f64>, usize)> = (0..n_paths.div_ceil(CHUNK))
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k as u64);
            let len = CHUNK.min(n_paths - k * CHUNK);
            let mut escaped = 0;
            let finals = (0..len)
                .map(|_| {
                    let mut x = x0(&mut rng);
                    let mut out = false;
                    for s in 0..steps {
                        let t = s as f64 * dt;
                        let z: f64 = rng.sample(StandardNormal);
                        x += drift.at(x, t) * dt + noise * z;
                        out |= !(lo..=hi).contains(&x);
                    }
                    escaped += usize::from(out);
                    x
                })
                .collect();
            (finals, escaped)
        })
        .collect();
    let escaped: usize = shards.iter().map(|s| s.1).sum();
    let fraction = escaped as f64 / n_paths as f64;
    if fraction >= ESCAPE_LIMIT {
        return Err(Error::PathEscape { fraction });
    }
    Ok(Ensemble {
        positions: shards.into_iter().flat_map(|s| s.0).collect(),
        time: steps as f64 * dt,
        seed,
        escaped,
    })
}

/// Fraction of `positions` in each of `bins` equal bins on [lo, hi).
pub fn histogram(positions: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let mut counts = vec![0usize; bins];
    let w = (hi - lo) / bins as f64;
    for &x in positions {
        if x >= lo && x < hi {
            counts[(((x - lo) / w) as usize).min(bins - 1)] += 1;
        }
    }
    let n = positions.len() as f64;
    counts.into_iter().map(|c| c as f64 / n).collect()
}
