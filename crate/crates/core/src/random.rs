//! Seeded generators for random states, operators and directions.
//!
//! Every sampler takes the caller's RNG so results are reproducible from a
//! seed. Streams for parallel shards come from [`substream`].

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::linalg::{hermitian_eig, ComplexMatrix, Ket};

/// Independent stream for shard `index` of a run seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Matrix with iid complex Gaussian entries.
pub fn matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = gaussian_complex(rng);
        }
    }
    m
}

/// Exactly Hermitian (G + G†)/2.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = matrix(rng, dim);
    ComplexMatrix::from_fn(dim, |i, j| 0.5 * (g[(i, j)] + g[(j, i)].conj()))
}

pub fn unit_ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Ket {
    Ket::new((0..dim).map(|_| gaussian_complex(rng)).collect())
        .normalized()
        .expect("gaussian vector is nonzero almost surely")
}

/// Haar-ish unitary from Gram–Schmidt on Gaussian columns.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let cols = orthonormal_basis(rng, dim);
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Random orthonormal basis of C^dim.
pub fn orthonormal_basis<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Ket> {
    let mut basis: Vec<Ket> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut w = unit_ket(rng, dim);
        // Two passes of modified Gram–Schmidt keep the basis orthonormal to
        // round-off.
        for _ in 0..2 {
            for b in &basis {
                let ip = b.inner(&w).expect("same dim");
                w = Ket::new(
                    w.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x - y * ip).collect(),
                );
            }
        }
        if w.norm() > 1e-8 {
            basis.push(w.normalized().expect("nonzero"));
        }
    }
    basis
}

/// Full-rank random density matrix G G† / trace.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = matrix(rng, dim);
    let p = &g * &g.adjoint();
    let t = p.trace().re;
    let s = p.scale_real(1.0 / t);
    ComplexMatrix::from_fn(dim, |i, j| 0.5 * (s[(i, j)] + s[(j, i)].conj()))
}

/// `count` positive operators whose sum is at most the identity.
///
/// Each member is G G†; the family is scaled by `shrink / λ_max(Σ)` with
/// `shrink` drawn from (0.5, 1].
pub fn effect_family<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<ComplexMatrix> {
    let raw: Vec<ComplexMatrix> = (0..count)
        .map(|_| {
            let g = matrix(rng, dim);
            let p = &g * &g.adjoint();
            ComplexMatrix::from_fn(dim, |i, j| 0.5 * (p[(i, j)] + p[(j, i)].conj()))
        })
        .collect();
    let total = raw.iter().fold(ComplexMatrix::zeros(dim), |acc, m| &acc + m);
    let top = hermitian_eig(&total).expect("sum of Hermitian matrices").max_eigenvalue();
    let shrink = rng.random_range(0.5..1.0) / top;
    raw.iter().map(|m| m.scale_real(shrink)).collect()
}

/// Single random effect with spectrum inside [0, 1].
pub fn effect<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    effect_family(rng, dim, 1).pop().expect("one member")
}

/// Rank-`rank` orthogonal projector.
pub fn projector<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> ComplexMatrix {
    let basis = orthonormal_basis(rng, dim);
    basis[..rank].iter().fold(ComplexMatrix::zeros(dim), |acc, v| {
        &acc + &crate::linalg::outer(v, v).expect("same dim")
    })
}

/// Uniform point on the unit sphere as (x, y, z).
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}
