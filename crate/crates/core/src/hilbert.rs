//! States, observables, effects and generalized probability measures.
//!
//! Validated wrappers around [`ComplexMatrix`]: an [`Observable`] carries its
//! spectral decomposition, a [`DensityOperator`] is positive with unit trace,
//! an [`Effect`] has spectrum in [0, 1]. A [`GpMeasure`] is an opaque
//! evaluator on effects; [`busch_reconstruct`] recovers the density operator
//! behind an additive one using only effect-valued probes.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{gram_deviation, hermitian_eig, outer, trace_product, ComplexMatrix, EigenDecomposition, Ket, TOL};
use crate::random;

/// Slack allowed on spectra, traces and idempotence.
pub const SPECTRAL_TOL: f64 = 1e-10;
/// Branches with probability at or below this are not conditioned on.
pub const TOL_PROB: f64 = 1e-12;
/// Linearity probes in the Busch reconstruction must agree to this level.
pub const ADDITIVITY_TOL: f64 = 1e-8;
/// Axiom violations above this fail [`gpm_axiom_check`].
pub const AXIOM_TOL: f64 = 1e-9;

fn hermitian_or_err(m: &ComplexMatrix) -> Result<()> {
    m.check_finite()?;
    let deviation = m.hermitian_deviation();
    if deviation > TOL.herm {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Hermitian operator A = Σ_k u_k |k⟩⟨k| with its decomposition cached.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
    eigen: EigenDecomposition,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        hermitian_or_err(&matrix)?;
        let eigen = hermitian_eig(&matrix)?;
        Ok(Self { matrix, eigen })
    }

    /// Assembles Σ_k values[k] |basis[k]⟩⟨basis[k]| from a complete
    /// orthonormal basis.
    pub fn from_spectrum(basis: Vec<Ket>, values: Vec<f64>) -> Result<Self> {
        check_complete_basis(&basis)?;
        if values.len() != basis.len() {
            return Err(Error::DimMismatch { left: basis.len(), right: values.len() });
        }
        let mut pairs: Vec<(f64, Ket)> = values.into_iter().zip(basis).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
        let eigen = EigenDecomposition { eigenvalues, eigenvectors };
        let matrix = eigen.reconstruct();
        Ok(Self { matrix, eigen })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eigen
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues u_k, ascending.
    pub fn values(&self) -> &[f64] {
        &self.eigen.eigenvalues
    }

    /// Projectors onto the distinct eigenvalues, paired with the eigenvalue.
    pub fn spectral_projectors(&self) -> Vec<(f64, ComplexMatrix)> {
        let mut out: Vec<(f64, ComplexMatrix)> = Vec::new();
        for (u, v) in self.eigen.eigenvalues.iter().zip(&self.eigen.eigenvectors) {
            let p = outer(v, v).expect("same dim");
            match out.last_mut() {
                Some((last, acc)) if (*last - u).abs() <= 1e-9 * u.abs().max(1.0) => {
                    *acc = &*acc + &p;
                }
                _ => out.push((*u, p)),
            }
        }
        out
    }
}

/// Positive operator with unit trace.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        hermitian_or_err(&matrix)?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > SPECTRAL_TOL || trace.im.abs() > SPECTRAL_TOL {
            return Err(Error::NotDensity(format!("trace {trace}")));
        }
        let min = hermitian_eig(&matrix)?.min_eigenvalue();
        if min < -SPECTRAL_TOL {
            return Err(Error::NotDensity(format!("min eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    /// |v⟩⟨v| for a unit ket.
    pub fn pure(v: &Ket) -> Result<Self> {
        v.check_state()?;
        Self::new(outer(v, v)?)
    }

    /// I / dim.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    /// p σ1 + (1 - p) σ2.
    pub fn mix(p: f64, a: &Self, b: &Self) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimMismatch { left: a.dim(), right: b.dim() });
        }
        Self::new(&a.matrix.scale_real(p) + &b.matrix.scale_real(1.0 - p))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Hermitian operator with spectrum in [0, 1].
#[derive(Debug, Clone)]
pub struct Effect {
    matrix: ComplexMatrix,
}

impl Effect {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        hermitian_or_err(&matrix)?;
        let eig = hermitian_eig(&matrix)?;
        let (min, max) = (eig.min_eigenvalue(), eig.max_eigenvalue());
        if min < -SPECTRAL_TOL || max > 1.0 + SPECTRAL_TOL {
            return Err(Error::NotEffect { min, max });
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// max |P² - P|.
    pub fn idempotence_deviation(&self) -> f64 {
        (&self.matrix * &self.matrix).max_abs_diff(&self.matrix)
    }
}

/// Effect Σ_k p_k |a;k⟩⟨a;k| assembled from a likelihood row.
#[derive(Debug, Clone)]
pub struct LikelihoodEffect {
    pub basis: Vec<Ket>,
    pub likelihood_row: Vec<f64>,
    pub effect: Effect,
}

fn check_complete_basis(basis: &[Ket]) -> Result<()> {
    let dim = basis.first().map(Ket::dim).unwrap_or(0);
    if dim == 0 {
        return Err(Error::InvalidArgument("empty basis".into()));
    }
    if let Some(bad) = basis.iter().find(|k| k.dim() != dim) {
        return Err(Error::DimMismatch { left: dim, right: bad.dim() });
    }
    if basis.len() != dim {
        return Err(Error::DimMismatch { left: dim, right: basis.len() });
    }
    let deviation = gram_deviation(basis);
    if deviation > TOL.recon {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

/// |⟨from|to⟩|², the transition probability between two pure states.
pub fn born_probability(from: &Ket, to: &Ket) -> Result<f64> {
    if from.dim() != to.dim() {
        return Err(Error::DimMismatch { left: from.dim(), right: to.dim() });
    }
    from.check_state()?;
    to.check_state()?;
    Ok(from.inner(to)?.norm_sqr())
}

/// trace(σA).
pub fn expectation(sigma: &DensityOperator, a: &Observable) -> Result<f64> {
    let t = trace_product(sigma.matrix(), a.matrix())?;
    debug_assert!(t.im.abs() <= 1e-10 * a.matrix().max_abs().max(1.0));
    Ok(t.re)
}

/// f(A): same eigenvectors, eigenvalues mapped through `f`.
pub fn observable_function(a: &Observable, f: impl Fn(f64) -> f64) -> Result<Observable> {
    let eig = a.eigen();
    Observable::from_spectrum(
        eig.eigenvectors.clone(),
        eig.eigenvalues.iter().map(|&u| f(u)).collect(),
    )
}

/// Commuting test ‖AB - BA‖_max ≤ 1e-10.
pub fn compatible(a: &Observable, b: &Observable) -> Result<bool> {
    Ok(a.matrix().commutator(b.matrix())?.max_abs() <= SPECTRAL_TOL)
}

pub fn likelihood_effect(basis: Vec<Ket>, row: Vec<f64>) -> Result<LikelihoodEffect> {
    check_complete_basis(&basis)?;
    if row.len() != basis.len() {
        return Err(Error::DimMismatch { left: basis.len(), right: row.len() });
    }
    if let Some((index, &value)) = row
        .iter()
        .enumerate()
        .find(|(_, &p)| !(0.0..=1.0).contains(&p))
    {
        return Err(Error::LikelihoodOutOfRange { index, value });
    }
    let dim = basis.len();
    let matrix = basis.iter().zip(&row).fold(ComplexMatrix::zeros(dim), |acc, (k, &p)| {
        &acc + &outer(k, k).expect("same dim").scale_real(p)
    });
    let effect = Effect::new(matrix)?;
    Ok(LikelihoodEffect { basis, likelihood_row: row, effect })
}

/// Outcome probabilities trace(σ E_i) of a POVM.
pub fn outcome_distribution(sigma: &DensityOperator, povm: &[Effect]) -> Result<Vec<f64>> {
    let dim = sigma.dim();
    let mut total = ComplexMatrix::zeros(dim);
    for e in povm {
        if e.dim() != dim {
            return Err(Error::DimMismatch { left: dim, right: e.dim() });
        }
        total = &total + e.matrix();
    }
    let deviation = total.max_abs_diff(&ComplexMatrix::identity(dim));
    if deviation > SPECTRAL_TOL {
        return Err(Error::IncompletePovm { deviation });
    }
    povm.iter()
        .map(|e| Ok(trace_product(sigma.matrix(), e.matrix())?.re))
        .collect()
}

/// Lüders update σ → PσP / trace(σP).
pub fn luders_collapse(sigma: &DensityOperator, projector: &Effect) -> Result<DensityOperator> {
    if sigma.dim() != projector.dim() {
        return Err(Error::DimMismatch { left: sigma.dim(), right: projector.dim() });
    }
    let deviation = projector.idempotence_deviation();
    if deviation > SPECTRAL_TOL {
        return Err(Error::NotProjector { deviation });
    }
    let p = projector.matrix();
    let probability = trace_product(sigma.matrix(), p)?.re;
    if probability <= TOL_PROB {
        return Err(Error::ZeroProbability { probability });
    }
    let raw = (&(p * sigma.matrix()) * p).scale_real(1.0 / probability);
    let dim = raw.dim();
    let sym = ComplexMatrix::from_fn(dim, |i, j| 0.5 * (raw[(i, j)] + raw[(j, i)].conj()));
    DensityOperator::new(sym)
}

type Evaluator = dyn Fn(&Effect) -> f64 + Send + Sync;

/// Generalized probability measure given as an opaque function on effects.
pub struct GpMeasure {
    dim: usize,
    evaluator: Box<Evaluator>,
}

impl std::fmt::Debug for GpMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GpMeasure").field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl GpMeasure {
    /// Wraps an evaluator, requiring μ(I) = 1 within 1e-10.
    pub fn new(dim: usize, evaluator: impl Fn(&Effect) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let m = Self::unchecked(dim, evaluator);
        let value = m.evaluate(&Effect::identity(dim));
        if (value - 1.0).abs() > SPECTRAL_TOL {
            return Err(Error::MeasureNotNormalized { value });
        }
        Ok(m)
    }

    /// Wraps an evaluator without the normalization check, for probing
    /// candidates that may violate the axioms.
    pub fn unchecked(dim: usize, evaluator: impl Fn(&Effect) -> f64 + Send + Sync + 'static) -> Self {
        Self { dim, evaluator: Box::new(evaluator) }
    }

    /// μ(E) = trace(σE).
    pub fn from_density(sigma: DensityOperator) -> Self {
        let dim = sigma.dim();
        Self::unchecked(dim, move |e| trace_product(sigma.matrix(), e.matrix()).map(|z| z.re).unwrap_or(f64::NAN))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn evaluate(&self, e: &Effect) -> f64 {
        (self.evaluator)(e)
    }
}

/// Named evaluators selectable at run time.
///
/// `trace` is the honest trace form, `squared` returns trace(σE)², and
/// `subnormal` scales the trace form by 0.9.
pub fn measure_by_name(name: &str, sigma: DensityOperator) -> Option<GpMeasure> {
    let dim = sigma.dim();
    match name {
        "trace" => Some(GpMeasure::from_density(sigma)),
        "squared" => {
            let base = GpMeasure::from_density(sigma);
            Some(GpMeasure::unchecked(dim, move |e| base.evaluate(e).powi(2)))
        }
        "subnormal" => {
            let base = GpMeasure::from_density(sigma);
            Some(GpMeasure::unchecked(dim, move |e| 0.9 * base.evaluate(e)))
        }
        _ => None,
    }
}

pub const MEASURE_NAMES: &[&str] = &["trace", "squared", "subnormal"];

fn unit_projector(dim: usize, i: usize) -> ComplexMatrix {
    let e = Ket::basis(dim, i);
    outer(&e, &e).expect("same dim")
}

/// Recovers σ with μ(E) = trace(σE) from an additive, normalized measure.
///
/// Diagonal entries come from μ(|i⟩⟨i|). For i < j the real part of σ_ij is
/// ½[μ(½(E_ii+E_jj+S_ij)) − μ(½(E_ii+E_jj−S_ij))] with S_ij = |i⟩⟨j|+|j⟩⟨i|,
/// and the imaginary part uses T_ij = i(|i⟩⟨j|−|j⟩⟨i|) the same way. Every
/// probe is validated as an effect before evaluation, and the linear
/// relations between probes are checked to [`ADDITIVITY_TOL`].
pub fn busch_reconstruct(mu: &GpMeasure, dim: usize) -> Result<DensityOperator> {
    if mu.dim() != dim {
        return Err(Error::DimMismatch { left: mu.dim(), right: dim });
    }
    let eval = |m: ComplexMatrix| -> Result<f64> { Ok(mu.evaluate(&Effect::new(m)?)) };

    let total = eval(ComplexMatrix::identity(dim))?;
    if (total - 1.0).abs() > SPECTRAL_TOL {
        return Err(Error::MeasureNotNormalized { value: total });
    }

    let diag: Vec<f64> = (0..dim)
        .map(|i| eval(unit_projector(dim, i)))
        .collect::<Result<_>>()?;
    let mut violation: f64 = (diag.iter().sum::<f64>() - total).abs();
    for (i, &d) in diag.iter().enumerate() {
        let half = eval(unit_projector(dim, i).scale_real(0.5))?;
        violation = violation.max((2.0 * half - d).abs());
    }

    let mut sigma = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        sigma[(i, i)] = Complex64::new(diag[i], 0.0);
    }
    let (one, imag) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
    for i in 0..dim {
        for j in (i + 1)..dim {
            let pair = &unit_projector(dim, i) + &unit_projector(dim, j);
            violation = violation.max((eval(pair.clone())? - diag[i] - diag[j]).abs());

            let mut s = ComplexMatrix::zeros(dim);
            s[(i, j)] = one;
            s[(j, i)] = one;
            let mut t = ComplexMatrix::zeros(dim);
            t[(i, j)] = imag;
            t[(j, i)] = -imag;

            let mut parts = [0.0; 2];
            for (slot, gen) in parts.iter_mut().zip([&s, &t]) {
                let plus = eval((&pair + gen).scale_real(0.5))?;
                let minus = eval((&pair - gen).scale_real(0.5))?;
                violation = violation.max((plus + minus - diag[i] - diag[j]).abs());
                *slot = 0.5 * (plus - minus);
            }
            sigma[(i, j)] = Complex64::new(parts[0], parts[1]);
            sigma[(j, i)] = Complex64::new(parts[0], -parts[1]);
        }
    }
    if violation > ADDITIVITY_TOL {
        return Err(Error::NotAdditive { violation });
    }
    DensityOperator::new(sigma)
}

/// q1 + q2 − 2 q0, the determinant of the Dutch-book payoff system; zero
/// whenever E_0 = ½(E_1 + E_2) and the q's come from one additive measure.
pub fn dutch_book_identity(q1: f64, q2: f64, q0: f64) -> f64 {
    q1 + q2 - 2.0 * q0
}

/// Worst observed violation of each generalized-probability axiom.
#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    /// 0 ≤ μ(E) ≤ 1.
    pub range_violation: f64,
    /// μ(I) = 1.
    pub normalization_violation: f64,
    /// μ(ΣE_i) = Σμ(E_i) when ΣE_i ≤ I.
    pub additivity_violation: f64,
    pub trials: usize,
}

impl AxiomReport {
    pub fn max_violation(&self) -> f64 {
        self.range_violation
            .max(self.normalization_violation)
            .max(self.additivity_violation)
    }

    pub fn passes(&self) -> bool {
        self.max_violation() <= AXIOM_TOL
    }
}

/// Probes the three axioms on seeded random effect families with ΣE_i ≤ I.
pub fn gpm_axiom_check(mu: &GpMeasure, dim: usize, trials: usize, seed: u64) -> AxiomReport {
    let mut rng = random::substream(seed, 0);
    let range_gap = |x: f64| if x.is_nan() { f64::INFINITY } else { (-x).max(x - 1.0).max(0.0) };
    let mut report = AxiomReport {
        range_violation: 0.0,
        normalization_violation: (mu.evaluate(&Effect::identity(dim)) - 1.0).abs(),
        additivity_violation: 0.0,
        trials,
    };
    for _ in 0..trials.max(1) {
        let count = rng.random_range(2..=4);
        let family: Vec<Effect> = random::effect_family(&mut rng, dim, count)
            .into_iter()
            .map(|m| Effect::new(m).expect("family members are effects"))
            .collect();
        let total = family.iter().fold(ComplexMatrix::zeros(dim), |acc, e| &acc + e.matrix());
        let total = Effect::new(total).expect("family sum is an effect");
        let parts: Vec<f64> = family.iter().map(|e| mu.evaluate(e)).collect();
        let whole = mu.evaluate(&total);
        for &x in parts.iter().chain(std::iter::once(&whole)) {
            report.range_violation = report.range_violation.max(range_gap(x));
        }
        let gap = (whole - parts.iter().sum::<f64>()).abs();
        report.additivity_violation = report.additivity_violation.max(if gap.is_nan() { f64::INFINITY } else { gap });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z_plus() -> Ket {
        Ket::basis(2, 0)
    }

    fn x_plus() -> Ket {
        Ket::from_real(&[1.0, 1.0]).normalized().unwrap()
    }

    fn sigma_z() -> Observable {
        Observable::new(ComplexMatrix::diag(&[1.0, -1.0])).unwrap()
    }

    fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityOperator {
        DensityOperator::new(random::density_matrix(rng, dim)).unwrap()
    }

    #[test]
    fn born_examples() {
        assert!((born_probability(&z_plus(), &z_plus()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(born_probability(&Ket::basis(3, 0), &Ket::basis(3, 2)).unwrap(), 0.0);
        assert!((born_probability(&z_plus(), &x_plus()).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn born_rejects_bad_input() {
        let short = Ket::from_real(&[1.0, 1.0]);
        assert!(matches!(born_probability(&short, &z_plus()), Err(Error::NotNormalized { .. })));
        assert!(matches!(
            born_probability(&z_plus(), &Ket::basis(3, 0)),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn born_is_symmetric_and_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in 2..6 {
            let u = random::unit_ket(&mut rng, dim);
            let v = random::unit_ket(&mut rng, dim);
            assert_eq!(born_probability(&u, &v).unwrap(), born_probability(&v, &u).unwrap());
            let basis = random::orthonormal_basis(&mut rng, dim);
            let total: f64 = basis.iter().map(|b| born_probability(&u, b).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn expectation_examples() {
        let mixed = DensityOperator::maximally_mixed(2);
        assert!(expectation(&mixed, &sigma_z()).unwrap().abs() < 1e-15);
        let up = DensityOperator::pure(&z_plus()).unwrap();
        assert!((expectation(&up, &sigma_z()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_matches_spectral_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for dim in 2..6 {
            let sigma = random_density(&mut rng, dim);
            let a = Observable::new(random::hermitian(&mut rng, dim)).unwrap();
            let oracle: f64 = a
                .spectral_projectors()
                .iter()
                .map(|(u, p)| u * trace_product(sigma.matrix(), p).unwrap().re)
                .sum();
            let value = expectation(&sigma, &a).unwrap();
            assert!((value - oracle).abs() < 1e-10);
            let vals = a.values();
            assert!(value >= vals[0] - 1e-12 && value <= vals[dim - 1] + 1e-12);
        }
    }

    #[test]
    fn pure_state_expectation_is_quadratic_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = Observable::new(random::hermitian(&mut rng, 3)).unwrap();
        let b = Observable::new(random::hermitian(&mut rng, 3)).unwrap();
        let k = &a.eigen().eigenvectors[1];
        let sigma = DensityOperator::pure(k).unwrap();
        let direct = b.matrix().expectation_in(k).unwrap();
        assert!((expectation(&sigma, &b).unwrap() - direct.re).abs() < 1e-12);
    }

    #[test]
    fn observable_function_examples() {
        let a = sigma_z();
        let same = observable_function(&a, |x| x).unwrap();
        assert!(same.matrix().max_abs_diff(a.matrix()) < 1e-12);
        let sq = observable_function(&a, |x| x * x).unwrap();
        assert!(sq.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        let ind = observable_function(&a, |x| if (x - 1.0).abs() < 1e-9 { 1.0 } else { 0.0 }).unwrap();
        assert!(ind.matrix().max_abs_diff(&ComplexMatrix::diag(&[1.0, 0.0])) < 1e-12);
    }

    #[test]
    fn compatibility_examples() {
        let sx = Observable::new(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()).unwrap();
        let sz = sigma_z();
        assert!(compatible(&sz, &observable_function(&sz, |x| x * x).unwrap()).unwrap());
        assert!(!compatible(&sx, &sz).unwrap());

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = Observable::new(random::hermitian(&mut rng, 4)).unwrap();
        let b = Observable::from_spectrum(a.eigen().eigenvectors.clone(), vec![3.0, -1.0, 0.5, 2.0]).unwrap();
        assert!(compatible(&a, &b).unwrap());
    }

    #[test]
    fn likelihood_effect_examples() {
        let basis: Vec<Ket> = (0..3).map(|k| Ket::basis(3, k)).collect();
        let all_ones = likelihood_effect(basis.clone(), vec![1.0; 3]).unwrap();
        assert!(all_ones.effect.matrix().max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);

        let hot = likelihood_effect(basis.clone(), vec![0.0, 1.0, 0.0]).unwrap();
        assert!(hot.effect.idempotence_deviation() < 1e-15);
        assert!((hot.effect.matrix().trace().re - 1.0).abs() < 1e-15);

        // C(3,2) θ² (1-θ) at θ = 0.2, 0.5, 0.8.
        let row: Vec<f64> = [0.2f64, 0.5, 0.8].iter().map(|t| 3.0 * t * t * (1.0 - t)).collect();
        let binom = likelihood_effect(basis.clone(), row).unwrap();
        let expected = ComplexMatrix::diag(&[0.096, 0.375, 0.384]);
        assert!(binom.effect.matrix().max_abs_diff(&expected) < 1e-12);

        assert!(matches!(
            likelihood_effect(basis.clone(), vec![0.5, 1.2, 0.0]),
            Err(Error::LikelihoodOutOfRange { index: 1, .. })
        ));
        let skew = vec![Ket::basis(2, 0), Ket::from_real(&[1.0, 1.0]).normalized().unwrap()];
        assert!(matches!(likelihood_effect(skew, vec![1.0, 1.0]), Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn likelihood_effect_in_rotated_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let basis = random::orthonormal_basis(&mut rng, 4);
        let row = vec![0.1, 0.9, 0.3, 0.0];
        let le = likelihood_effect(basis.clone(), row.clone()).unwrap();
        let manual = basis.iter().zip(&row).fold(ComplexMatrix::zeros(4), |acc, (k, &p)| {
            &acc + &outer(k, k).unwrap().scale_real(p)
        });
        assert!(le.effect.matrix().max_abs_diff(&manual) < 1e-12);
    }

    #[test]
    fn outcome_distribution_examples() {
        let a = sigma_z();
        let povm: Vec<Effect> = a
            .spectral_projectors()
            .into_iter()
            .map(|(_, p)| Effect::new(p).unwrap())
            .collect();
        // Eigenvalues ascend: index 0 is -1, index 1 is +1.
        let up = DensityOperator::pure(&z_plus()).unwrap();
        assert_eq!(outcome_distribution(&up, &povm).unwrap(), vec![0.0, 1.0]);

        let n = 4;
        let rank_one: Vec<Effect> = (0..n)
            .map(|k| Effect::new(unit_projector(n, k)).unwrap())
            .collect();
        let probs = outcome_distribution(&DensityOperator::maximally_mixed(n), &rank_one).unwrap();
        assert!(probs.iter().all(|p| (p - 0.25).abs() < 1e-15));

        let partial = &rank_one[..3];
        assert!(matches!(
            outcome_distribution(&DensityOperator::maximally_mixed(n), partial),
            Err(Error::IncompletePovm { .. })
        ));
    }

    #[test]
    fn outcome_distribution_is_affine() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let s1 = random_density(&mut rng, 3);
        let s2 = random_density(&mut rng, 3);
        let basis = random::orthonormal_basis(&mut rng, 3);
        let povm: Vec<Effect> = basis.iter().map(|b| Effect::new(outer(b, b).unwrap()).unwrap()).collect();
        let p = 0.3;
        let mixed = DensityOperator::mix(p, &s1, &s2).unwrap();
        let d1 = outcome_distribution(&s1, &povm).unwrap();
        let d2 = outcome_distribution(&s2, &povm).unwrap();
        let dm = outcome_distribution(&mixed, &povm).unwrap();
        for k in 0..3 {
            assert!((dm[k] - (p * d1[k] + (1.0 - p) * d2[k])).abs() < 1e-12);
        }
        assert!((dm.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn luders_examples() {
        let p0 = Effect::new(ComplexMatrix::diag(&[1.0, 0.0])).unwrap();
        let up = DensityOperator::pure(&z_plus()).unwrap();
        let same = luders_collapse(&up, &p0).unwrap();
        assert!(same.matrix().max_abs_diff(up.matrix()) < 1e-15);

        let collapsed = luders_collapse(&DensityOperator::maximally_mixed(2), &p0).unwrap();
        assert!(collapsed.matrix().max_abs_diff(p0.matrix()) < 1e-15);

        let down = DensityOperator::pure(&Ket::basis(2, 1)).unwrap();
        assert!(matches!(luders_collapse(&down, &p0), Err(Error::ZeroProbability { .. })));

        let half = Effect::new(ComplexMatrix::diag(&[0.5, 0.0])).unwrap();
        assert!(matches!(luders_collapse(&up, &half), Err(Error::NotProjector { .. })));
    }

    #[test]
    fn luders_support_and_idempotence() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let sigma = random_density(&mut rng, 3);
        let p = Effect::new(random::projector(&mut rng, 3, 2)).unwrap();
        let once = luders_collapse(&sigma, &p).unwrap();
        let pm = p.matrix();
        let sandwiched = &(pm * once.matrix()) * pm;
        assert!(sandwiched.max_abs_diff(once.matrix()) < 1e-12);
        assert!((once.matrix().trace().re - 1.0).abs() < 1e-12);
        let twice = luders_collapse(&once, &p).unwrap();
        assert!(twice.matrix().max_abs_diff(once.matrix()) < 1e-12);
    }

    #[test]
    fn busch_examples() {
        let up = DensityOperator::pure(&Ket::basis(2, 0)).unwrap();
        let rec = busch_reconstruct(&GpMeasure::from_density(up.clone()), 2).unwrap();
        assert!(rec.matrix().max_abs_diff(up.matrix()) < 1e-15);

        let mixed = DensityOperator::maximally_mixed(3);
        let rec = busch_reconstruct(&GpMeasure::from_density(mixed.clone()), 3).unwrap();
        assert!(rec.matrix().max_abs_diff(mixed.matrix()) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let hidden = random_density(&mut rng, 4);
        let rec = busch_reconstruct(&GpMeasure::from_density(hidden.clone()), 4).unwrap();
        assert!(rec.matrix().max_abs_diff(hidden.matrix()) < 1e-10);
    }

    #[test]
    fn busch_rejects_bad_measures() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let sigma = random_density(&mut rng, 3);
        let squared = measure_by_name("squared", sigma.clone()).unwrap();
        // μ(I) = 1 still holds for the square, so additivity is what fails.
        assert!(matches!(busch_reconstruct(&squared, 3), Err(Error::NotAdditive { .. })));
        let sub = measure_by_name("subnormal", sigma).unwrap();
        assert!(matches!(busch_reconstruct(&sub, 3), Err(Error::MeasureNotNormalized { .. })));
    }

    #[test]
    fn gp_measure_construction_checks_normalization() {
        assert!(GpMeasure::new(2, |e| e.matrix().trace().re / 2.0).is_ok());
        assert!(matches!(
            GpMeasure::new(2, |e| e.matrix().trace().re),
            Err(Error::MeasureNotNormalized { .. })
        ));
    }

    #[test]
    fn dutch_book_examples() {
        assert_eq!(dutch_book_identity(0.5, 0.5, 0.5), 0.0);
        assert!(dutch_book_identity(0.2, 0.6, 0.4).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..20 {
            let sigma = random_density(&mut rng, 3);
            let fam = random::effect_family(&mut rng, 3, 2);
            let e0 = (&fam[0] + &fam[1]).scale_real(0.5);
            let mu = GpMeasure::from_density(sigma);
            let q: Vec<f64> = [&fam[0], &fam[1], &e0]
                .iter()
                .map(|m| mu.evaluate(&Effect::new((*m).clone()).unwrap()))
                .collect();
            assert!(dutch_book_identity(q[0], q[1], q[2]).abs() < 1e-12);
        }
    }

    #[test]
    fn axiom_check_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let sigma = random_density(&mut rng, 3);
        let honest = gpm_axiom_check(&GpMeasure::from_density(sigma.clone()), 3, 50, 1);
        assert!(honest.passes(), "{honest:?}");

        let squared = gpm_axiom_check(&measure_by_name("squared", sigma.clone()).unwrap(), 3, 50, 1);
        assert!(!squared.passes());
        assert!(squared.additivity_violation > AXIOM_TOL);

        let sub = gpm_axiom_check(&measure_by_name("subnormal", sigma).unwrap(), 3, 50, 1);
        assert!(!sub.passes());
        assert!((sub.normalization_violation - 0.1).abs() < 1e-12);
    }

    #[test]
    fn squared_measure_two_effect_counterexample() {
        // E1 = E2 = I/2: trace(σE)² gives 1/4 + 1/4 ≠ 1 = μ(I).
        let mu = measure_by_name("squared", DensityOperator::maximally_mixed(2)).unwrap();
        let half = Effect::new(ComplexMatrix::identity(2).scale_real(0.5)).unwrap();
        let sum = mu.evaluate(&half) + mu.evaluate(&half);
        assert!((sum - 0.5).abs() < 1e-15);
        assert!((mu.evaluate(&Effect::identity(2)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn density_validation() {
        assert!(DensityOperator::new(ComplexMatrix::diag(&[0.6, 0.6])).is_err());
        assert!(DensityOperator::new(ComplexMatrix::diag(&[1.2, -0.2])).is_err());
        assert!(Effect::new(ComplexMatrix::diag(&[1.5, 0.0])).is_err());
    }
}
