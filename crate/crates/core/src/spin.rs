//! Spin-½ questions indexed by directions in space.
//!
//! The question "what is the spin component along a?" has answers ±1 and is
//! represented by a·σ. From there: the transition law between directions,
//! the singlet state, CHSH values for quantum and deterministic sources, and
//! Mermin's three-switch experiment under several source models.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, RngCore};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{born_probability, Observable};
use crate::linalg::{ComplexMatrix, Ket};
use crate::random;

const UNIT_TOL: f64 = 1e-12;

/// Unit vector in R³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self { x, y, z })
    }

    /// Rescales any nonzero vector onto the sphere.
    pub fn normalize(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self { x: x / norm, y: y / norm, z: z / norm })
    }

    pub fn x_axis() -> Self {
        Self { x: 1.0, y: 0.0, z: 0.0 }
    }

    pub fn y_axis() -> Self {
        Self { x: 0.0, y: 1.0, z: 0.0 }
    }

    pub fn z_axis() -> Self {
        Self { x: 0.0, y: 0.0, z: 1.0 }
    }

    /// Direction in the x–z plane at `angle` radians from +z towards +x.
    pub fn in_xz_plane(angle: f64) -> Self {
        Self { x: angle.sin(), y: 0.0, z: angle.cos() }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn neg(&self) -> Self {
        Self { x: -self.x, y: -self.y, z: -self.z }
    }

    /// cos of the angle to `other`, clamped to [-1, 1].
    pub fn cos_angle(&self, other: &Direction) -> f64 {
        (self.x * other.x + self.y * other.y + self.z * other.z).clamp(-1.0, 1.0)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let [x, y, z] = random::sphere_point(rng);
        Self { x, y, z }
    }
}

/// Answer ±1 to a spin question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinOutcome {
    Plus,
    Minus,
}

impl SpinOutcome {
    pub const BOTH: [SpinOutcome; 2] = [SpinOutcome::Plus, SpinOutcome::Minus];

    pub fn value(self) -> f64 {
        match self {
            SpinOutcome::Plus => 1.0,
            SpinOutcome::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            SpinOutcome::Plus => SpinOutcome::Minus,
            SpinOutcome::Minus => SpinOutcome::Plus,
        }
    }
}

impl TryFrom<i32> for SpinOutcome {
    type Error = Error;
    fn try_from(v: i32) -> Result<Self> {
        match v {
            1 => Ok(SpinOutcome::Plus),
            -1 => Ok(SpinOutcome::Minus),
            other => Err(Error::InvalidArgument(format!("spin outcome must be ±1, got {other}"))),
        }
    }
}

/// a·σ = a_x σ_x + a_y σ_y + a_z σ_z.
pub fn spin_observable(a: &Direction) -> Result<Observable> {
    let [x, y, z] = a.components();
    Direction::new(x, y, z)?;
    let m = ComplexMatrix::from_rows(vec![
        vec![Complex64::new(z, 0.0), Complex64::new(x, -y)],
        vec![Complex64::new(x, y), Complex64::new(-z, 0.0)],
    ])?;
    Observable::new(m)
}

/// Phase-canonical eigenvector of a·σ with eigenvalue `v`.
pub fn spin_state(a: &Direction, v: SpinOutcome) -> Result<Ket> {
    let obs = spin_observable(a)?;
    // Eigenvalues ascend: index 0 is -1, index 1 is +1.
    let k = match v {
        SpinOutcome::Minus => 0,
        SpinOutcome::Plus => 1,
    };
    Ok(obs.eigen().eigenvectors[k].clone())
}

/// ½(1 + va·vb·cos∠(a, b)).
pub fn transition_probability(a: &Direction, va: SpinOutcome, b: &Direction, vb: SpinOutcome) -> f64 {
    0.5 * (1.0 + va.value() * vb.value() * a.cos_angle(b))
}

/// Singlet (|+−⟩ − |−+⟩)/√2 in the product basis |++⟩, |+−⟩, |−+⟩, |−−⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct SingletState {
    pub ket: Ket,
}

pub fn singlet() -> SingletState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    SingletState { ket: Ket::from_real(&[0.0, h, -h, 0.0]) }
}

/// Joint law P(λ^a = va, η^b = vb) on the singlet, indexed [Plus, Minus]².
pub fn singlet_joint(a: &Direction, b: &Direction) -> Result<[[f64; 2]; 2]> {
    let s = singlet();
    let mut table = [[0.0; 2]; 2];
    for (i, &va) in SpinOutcome::BOTH.iter().enumerate() {
        let ka = spin_state(a, va)?;
        for (j, &vb) in SpinOutcome::BOTH.iter().enumerate() {
            let kb = spin_state(b, vb)?;
            table[i][j] = born_probability(&ka.kron(&kb), &s.ket)?;
        }
    }
    Ok(table)
}

/// E(λ^a η^b) on the singlet by Born's rule over the four joint outcomes.
pub fn singlet_correlation(a: &Direction, b: &Direction) -> Result<f64> {
    let table = singlet_joint(a, b)?;
    let mut e = 0.0;
    for (i, va) in SpinOutcome::BOTH.iter().enumerate() {
        for (j, vb) in SpinOutcome::BOTH.iter().enumerate() {
            e += va.value() * vb.value() * table[i][j];
        }
    }
    Ok(e)
}

/// Fixed ±1 answers to the four CHSH questions λ^a, λ^b, η^c, η^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub a: SpinOutcome,
    pub b: SpinOutcome,
    pub c: SpinOutcome,
    pub d: SpinOutcome,
}

impl DeterministicStrategy {
    /// All 16 assignments.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(16);
        for a in SpinOutcome::BOTH {
            for b in SpinOutcome::BOTH {
                for c in SpinOutcome::BOTH {
                    for d in SpinOutcome::BOTH {
                        out.push(Self { a, b, c, d });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChshSource {
    Quantum,
    Deterministic(DeterministicStrategy),
}

/// The four CHSH directions: Alice asks a or b, Bob asks c or d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshSettings {
    pub a: Direction,
    pub b: Direction,
    pub c: Direction,
    pub d: Direction,
}

impl ChshSettings {
    /// Coplanar settings from angles (radians) in the x–z plane.
    pub fn coplanar(angles: [f64; 4]) -> Self {
        let [a, b, c, d] = angles.map(Direction::in_xz_plane);
        Self { a, b, c, d }
    }
}

/// E(ac) + E(bc) + E(bd) − E(ad).
pub fn chsh_value(s: &ChshSettings, source: ChshSource) -> Result<f64> {
    match source {
        ChshSource::Quantum => Ok(singlet_correlation(&s.a, &s.c)?
            + singlet_correlation(&s.b, &s.c)?
            + singlet_correlation(&s.b, &s.d)?
            - singlet_correlation(&s.a, &s.d)?),
        ChshSource::Deterministic(st) => {
            let (a, b, c, d) = (st.a.value(), st.b.value(), st.c.value(), st.d.value());
            Ok(a * c + b * c + b * d - a * d)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshOptimum {
    /// Coplanar angles (radians) of a, b, c, d.
    pub angles: [f64; 4],
    pub settings: ChshSettings,
    pub value: f64,
}

/// Singlet CHSH value as a function of coplanar angles; the correlation of
/// two coplanar questions is −cos of their angle gap.
fn coplanar_chsh(a: f64, b: f64, c: f64, d: f64) -> f64 {
    -(a - c).cos() - (b - c).cos() - (b - d).cos() + (a - d).cos()
}

/// Maximizes the quantum CHSH value over coplanar directions.
///
/// Fixes a = 0 (only angle gaps matter), scans b on a `grid_steps` grid and
/// for each b picks c and d on the same grid (their terms separate), then
/// polishes (b, c, d) by a shrinking coordinate search.
pub fn chsh_maximize(grid_steps: usize) -> Result<ChshOptimum> {
    if grid_steps < 8 {
        return Err(Error::InvalidArgument(format!("grid_steps must be at least 8, got {grid_steps}")));
    }
    let step = 2.0 * PI / grid_steps as f64;
    let grid: Vec<f64> = (0..grid_steps).map(|k| k as f64 * step).collect();
    let mut best = (f64::NEG_INFINITY, [0.0; 3]);
    for &b in &grid {
        let c = grid
            .iter()
            .copied()
            .max_by(|x, y| (-(x.cos()) - (b - x).cos()).total_cmp(&(-(y.cos()) - (b - y).cos())))
            .expect("nonempty grid");
        let d = grid
            .iter()
            .copied()
            .max_by(|x, y| (x.cos() - (b - x).cos()).total_cmp(&(y.cos() - (b - y).cos())))
            .expect("nonempty grid");
        let v = coplanar_chsh(0.0, b, c, d);
        if v > best.0 {
            best = (v, [b, c, d]);
        }
    }

    let (mut value, mut x) = best;
    let mut h = step;
    while h > 1e-12 {
        let mut improved = false;
        for i in 0..3 {
            for sign in [1.0, -1.0] {
                let mut trial = x;
                trial[i] += sign * h;
                let v = coplanar_chsh(0.0, trial[0], trial[1], trial[2]);
                if v > value {
                    value = v;
                    x = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }

    let angles = [0.0, x[0], x[1], x[2]];
    let settings = ChshSettings::coplanar(angles);
    let value = chsh_value(&settings, ChshSource::Quantum)?;
    Ok(ChshOptimum { angles, settings, value })
}

/// Detector flash colour; green answers +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Red,
    Green,
}

impl Color {
    fn from_outcome(v: SpinOutcome) -> Self {
        match v {
            SpinOutcome::Plus => Color::Green,
            SpinOutcome::Minus => Color::Red,
        }
    }
}

/// Colours shown for switch positions 1, 2, 3.
pub type InstructionSet = [Color; 3];

/// The eight instruction sets RRR, RRG, ..., GGG.
pub fn instruction_sets() -> Vec<InstructionSet> {
    (0..8u8)
        .map(|bits| {
            [2u8, 1, 0].map(|shift| if bits >> shift & 1 == 1 { Color::Green } else { Color::Red })
        })
        .collect()
}

/// Fraction of the nine equally likely switch pairs that flash the same
/// colour when both detectors follow `set`.
pub fn same_color_fraction(set: &InstructionSet) -> Ratio<u32> {
    let same = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|&(i, j)| set[i] == set[j])
        .count() as u32;
    Ratio::new(same, 9)
}

/// Smallest same-colour fraction over all instruction sets.
pub fn mermin_classical_bound() -> Ratio<u32> {
    instruction_sets()
        .iter()
        .map(same_color_fraction)
        .min()
        .expect("eight instruction sets")
}

/// Source model for one Mermin event.
pub trait MerminModel: Send + Sync {
    fn name(&self) -> &str;

    /// Colours at Alice's and Bob's detectors for the given switch
    /// positions (0-based).
    fn sample(&self, rng: &mut dyn RngCore, alice: usize, bob: usize) -> (Color, Color);
}

/// Singlet pair measured along Mermin's geometry.
///
/// Alice asks z and the two directions 120° away from it in the x–z plane;
/// Bob asks the opposite directions.
#[derive(Debug, Clone)]
pub struct QuantumMermin {
    alice: [Direction; 3],
    bob: [Direction; 3],
}

impl Default for QuantumMermin {
    fn default() -> Self {
        let third = 2.0 * PI / 3.0;
        let alice = [0.0, third, -third].map(Direction::in_xz_plane);
        let bob = alice.map(|d| d.neg());
        Self { alice, bob }
    }
}

impl QuantumMermin {
    pub fn alice_directions(&self) -> &[Direction; 3] {
        &self.alice
    }

    pub fn bob_directions(&self) -> &[Direction; 3] {
        &self.bob
    }
}

fn snap_probability(p: f64) -> f64 {
    if p < 1e-12 {
        0.0
    } else if p > 1.0 - 1e-12 {
        1.0
    } else {
        p
    }
}

impl MerminModel for QuantumMermin {
    fn name(&self) -> &str {
        "quantum"
    }

    /// Alice's answer from its uniform marginal; Bob's particle is then in
    /// the opposite state along Alice's direction.
    fn sample(&self, rng: &mut dyn RngCore, alice: usize, bob: usize) -> (Color, Color) {
        let va = if rng.random_bool(0.5) { SpinOutcome::Plus } else { SpinOutcome::Minus };
        let (a, b) = (&self.alice[alice], &self.bob[bob]);
        let p_plus = snap_probability(transition_probability(a, va.flip(), b, SpinOutcome::Plus));
        let vb = if rng.random::<f64>() < p_plus { SpinOutcome::Plus } else { SpinOutcome::Minus };
        (Color::from_outcome(va), Color::from_outcome(vb))
    }
}

/// Context model: Charles draws one of three yellow balls and one blue ball.
/// Equal switches give equal colours; unequal switches give equal colours
/// exactly when the ball is blue.
#[derive(Debug, Clone, Default)]
pub struct CharlesContext;

impl MerminModel for CharlesContext {
    fn name(&self) -> &str {
        "charles"
    }

    fn sample(&self, rng: &mut dyn RngCore, alice: usize, bob: usize) -> (Color, Color) {
        let blue = rng.random_range(0..4) == 0;
        let ca = if rng.random_bool(0.5) { Color::Green } else { Color::Red };
        let same = alice == bob || blue;
        let cb = match (same, ca) {
            (true, c) => c,
            (false, Color::Green) => Color::Red,
            (false, Color::Red) => Color::Green,
        };
        (ca, cb)
    }
}

/// Both detectors follow one instruction set drawn from `weights`
/// (indexed like [`instruction_sets`]).
#[derive(Debug, Clone)]
pub struct ClassicalInstructions {
    sets: Vec<InstructionSet>,
    cumulative: Vec<f64>,
}

impl ClassicalInstructions {
    pub fn new(weights: [f64; 8]) -> Result<Self> {
        if weights.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(Error::NotADistribution("instruction weights outside [0, 1]".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotADistribution(format!("instruction weights sum to {total}")));
        }
        let cumulative = weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        Ok(Self { sets: instruction_sets(), cumulative })
    }

    pub fn uniform() -> Self {
        Self::new([0.125; 8]).expect("uniform weights")
    }
}

impl MerminModel for ClassicalInstructions {
    fn name(&self) -> &str {
        "classical"
    }

    fn sample(&self, rng: &mut dyn RngCore, alice: usize, bob: usize) -> (Color, Color) {
        let u: f64 = rng.random::<f64>() * self.cumulative[7];
        let k = self.cumulative.iter().position(|&c| u < c).unwrap_or(7);
        let set = self.sets[k];
        (set[alice], set[bob])
    }
}

pub const MERMIN_MODELS: &[&str] = &["quantum", "charles", "classical"];

/// Looks up a Mermin source by name; `classical` is uniform over the eight
/// instruction sets.
pub fn mermin_model(name: &str) -> Option<Box<dyn MerminModel>> {
    match name {
        "quantum" => Some(Box::new(QuantumMermin::default())),
        "charles" | "charles_context" => Some(Box::new(CharlesContext)),
        "classical" | "classical_instruction" => Some(Box::new(ClassicalInstructions::uniform())),
        _ => None,
    }
}

/// Event counts of a Mermin run.
#[derive(Debug, Clone, PartialEq)]
pub struct MerminReport {
    pub n_events: u64,
    /// Same-colour frequency among events with equal switch positions.
    pub same_switch_same_color_freq: f64,
    pub overall_same_color_freq: f64,
    /// `events[i][j]` counts Alice at position i+1, Bob at j+1.
    pub events: [[u64; 3]; 3],
    /// Same-colour counts per switch pair.
    pub same_color: [[u64; 3]; 3],
}

impl MerminReport {
    pub fn pair_frequency(&self, alice: usize, bob: usize) -> f64 {
        self.same_color[alice][bob] as f64 / self.events[alice][bob] as f64
    }
}

const MERMIN_CHUNK: u64 = 1 << 16;

/// Per switch pair: event count and same-color count.
type PairTally = ([[u64; 3]; 3], [[u64; 3]; 3]);

/// Simulates `n_events` with independent uniform switches.
///
/// Events are split into fixed-size chunks, chunk k drawing from substream
/// (seed, k), so the report does not depend on the thread count.
pub fn mermin_simulate(model: &dyn MerminModel, n_events: u64, seed: u64) -> Result<MerminReport> {
    if n_events == 0 {
        return Err(Error::InvalidArgument("n_events must be at least 1".into()));
    }
    let chunks = n_events.div_ceil(MERMIN_CHUNK);
    let tallies: Vec<PairTally> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = random::substream(seed, k);
            let len = MERMIN_CHUNK.min(n_events - k * MERMIN_CHUNK);
            let mut events = [[0u64; 3]; 3];
            let mut same = [[0u64; 3]; 3];
            for _ in 0..len {
                let sa = rng.random_range(0..3);
                let sb = rng.random_range(0..3);
                let (ca, cb) = model.sample(&mut rng, sa, sb);
                events[sa][sb] += 1;
                if ca == cb {
                    same[sa][sb] += 1;
                }
            }
            (events, same)
        })
        .collect();

    let mut events = [[0u64; 3]; 3];
    let mut same_color = [[0u64; 3]; 3];
    for (e, s) in &tallies {
        for i in 0..3 {
            for j in 0..3 {
                events[i][j] += e[i][j];
                same_color[i][j] += s[i][j];
            }
        }
    }
    let diag_events: u64 = (0..3).map(|i| events[i][i]).sum();
    let diag_same: u64 = (0..3).map(|i| same_color[i][i]).sum();
    let all_same: u64 = same_color.iter().flatten().sum();
    Ok(MerminReport {
        n_events,
        same_switch_same_color_freq: if diag_events == 0 { f64::NAN } else { diag_same as f64 / diag_events as f64 },
        overall_same_color_freq: all_same as f64 / n_events as f64,
        events,
        same_color,
    })
}
