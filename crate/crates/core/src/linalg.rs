//! Small dense complex linear algebra.
//!
//! Matrices are square and stored row-major. Dimensions in this crate stay
//! well below twenty, so everything is written for clarity over speed; the
//! Hermitian eigensolver is a cyclic complex Jacobi iteration.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Numerical tolerances shared by the Hilbert-space code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum |M_ij - conj(M_ji)| for a matrix to count as Hermitian.
    pub herm: f64,
    /// Maximum |‖v‖ - 1| for a ket to count as a state.
    pub norm: f64,
    /// Eigendecomposition reconstruction and orthonormality bound.
    pub recon: f64,
}

pub const TOL: Tolerances = Tolerances {
    herm: 1e-12,
    norm: 1e-10,
    recon: 1e-10,
};

/// Upper bound on Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-square or
    /// non-finite input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimMismatch { left: dim, right: row.len() });
            }
            data.extend(row);
        }
        let m = Self { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("matrix"))
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Largest deviation from Hermitian symmetry.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Max-entry distance to another matrix of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on mismatched dims");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn mul_checked(&self, rhs: &Self) -> Result<Self> {
        same_dim(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &Ket) -> Result<Ket> {
        same_dim(self.dim, v.dim())?;
        let amps = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect();
        Ok(Ket::new(amps))
    }

    /// Commutator AB - BA.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(&self.mul_checked(rhs)? - &rhs.mul_checked(self)?)
    }

    /// Kronecker product A ⊗ B.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (n, m) = (self.dim, rhs.dim);
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * rhs[(i % m, j % m)])
    }

    /// Quadratic form ⟨v|M|v⟩.
    pub fn expectation_in(&self, v: &Ket) -> Result<Complex64> {
        let mv = self.apply(v)?;
        v.inner(&mv)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix add on mismatched dims");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sub on mismatched dims");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.mul_checked(rhs).expect("matrix product on mismatched dims")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Column vector in a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: Vec<Complex64>,
}

impl Ket {
    pub fn new(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Standard basis vector |index⟩.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Returns an error unless ‖v‖ = 1 within `TOL.norm`.
    pub fn check_state(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > TOL.norm || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.amps.iter().map(|&z| z * s).collect())
    }

    /// Inner product ⟨self|other⟩, antilinear in `self`.
    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn kron(&self, other: &Ket) -> Ket {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ket::new(amps)
    }

    pub fn max_abs_diff(&self, other: &Ket) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Multiplies by a global phase so the largest-magnitude component (the
    /// first one, among near-ties) is real and positive.
    pub fn phase_canonical(&self) -> Ket {
        let max = self.amps.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return self.clone();
        }
        let pivot = self
            .amps
            .iter()
            .position(|z| z.norm() >= max * (1.0 - 1e-9))
            .expect("some component attains the max");
        let z = self.amps[pivot];
        self.scale(z.conj() / z.norm())
    }
}

impl Index<usize> for Ket {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.amps[i]
    }
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimMismatch { left, right })
    }
}

/// |u⟩⟨v| with entries u_i conj(v_j).
pub fn outer(u: &Ket, v: &Ket) -> Result<ComplexMatrix> {
    same_dim(u.dim(), v.dim())?;
    Ok(ComplexMatrix::from_fn(u.dim(), |i, j| u[i] * v[j].conj()))
}

/// trace(AB) without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    same_dim(a.dim(), b.dim())?;
    let n = a.dim();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    Ok(acc)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal, `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: Vec<Ket>,
}

impl EigenDecomposition {
    /// Σ λ_k v_k v_k†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_reconstruct(|x| x)
    }

    /// Σ f(λ_k) v_k v_k†.
    pub fn map_reconstruct(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut m = ComplexMatrix::zeros(n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let p = outer(v, v).expect("eigenvectors share the matrix dimension");
            m = &m + &p.scale_real(f(*lambda));
        }
        m
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(f64::NAN)
    }

    /// Largest |⟨v_i|v_j⟩ - δ_ij|.
    pub fn orthonormality_deviation(&self) -> f64 {
        gram_deviation(&self.eigenvectors)
    }
}

/// Largest |⟨v_i|v_j⟩ - δ_ij| over a family of kets.
pub fn gram_deviation(kets: &[Ket]) -> f64 {
    let mut dev: f64 = 0.0;
    for (i, a) in kets.iter().enumerate() {
        for (j, b) in kets.iter().enumerate().skip(i) {
            let ip = match a.inner(b) {
                Ok(ip) => ip,
                Err(_) => return f64::INFINITY,
            };
            let target = if i == j { ONE } else { ZERO };
            dev = dev.max((ip - target).norm());
        }
    }
    dev
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
///
/// Eigenvalues come back ascending. Within a degenerate cluster the
/// eigenvectors are rebuilt by Gram–Schmidt from the standard basis in index
/// order, and every eigenvector is phase-fixed so its largest component is
/// real positive. Output is therefore a pure function of the input bits.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    m.check_finite()?;
    let deviation = m.hermitian_deviation();
    if deviation > TOL.herm {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim();
    // Symmetrize so round-off in the input cannot bias the rotation angles.
    let mut a = ComplexMatrix::from_fn(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)].conj()));
    let mut v = ComplexMatrix::identity(n);

    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let mut converged = n <= 1;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut pairs: Vec<(f64, Ket)> = (0..n)
        .map(|k| {
            let col = Ket::new((0..n).map(|i| v[(i, k)]).collect());
            (a[(k, k)].re, col)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let (eigenvalues, raw): (Vec<f64>, Vec<Ket>) = pairs.into_iter().unzip();
    let eigenvectors = canonicalize_clusters(&eigenvalues, raw, scale);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

/// One Jacobi rotation zeroing a[p][q].
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let n = a.dim();
    let phase = apq / mag;
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U = diag(1, conj(phase)) · [[c, s], [-s, c]] on the (p, q) plane.
    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = phase.conj() * (-s);
    let u_qq = phase.conj() * c;

    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

fn canonicalize_clusters(values: &[f64], vectors: Vec<Ket>, scale: f64) -> Vec<Ket> {
    let n = values.len();
    let gap = 1e-9 * scale.max(1.0);
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= gap {
            end += 1;
        }
        let cluster = &vectors[start..end];
        if cluster.len() == 1 {
            out.push(cluster[0].phase_canonical());
        } else {
            out.extend(canonical_span_basis(cluster, n));
        }
        start = end;
    }
    out
}

/// Orthonormal basis of span(cluster) obtained by projecting e_0, e_1, ...
/// onto the span and orthogonalizing in index order.
fn canonical_span_basis(cluster: &[Ket], dim: usize) -> Vec<Ket> {
    let k = cluster.len();
    let mut basis: Vec<Ket> = Vec::with_capacity(k);
    for idx in 0..dim {
        if basis.len() == k {
            break;
        }
        // Projection of e_idx onto span(cluster): Σ_c v_c conj(v_c[idx]).
        let mut w = vec![ZERO; dim];
        for vc in cluster {
            let coeff = vc[idx].conj();
            for (wi, &a) in w.iter_mut().zip(vc.amplitudes()) {
                *wi += a * coeff;
            }
        }
        let mut w = Ket::new(w);
        for b in &basis {
            let ip = b.inner(&w).expect("same dim");
            w = Ket::new(
                w.amplitudes()
                    .iter()
                    .zip(b.amplitudes())
                    .map(|(x, y)| x - y * ip)
                    .collect(),
            );
        }
        if w.norm() > 1e-6 {
            basis.push(w.normalized().expect("nonzero").phase_canonical());
        }
    }
    debug_assert_eq!(basis.len(), k);
    basis
}
