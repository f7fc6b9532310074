//! The quadratic program behind variance-sum bounds and its solvers.
//!
//! For observables `A_mu = a0_mu Identity + a_mu . G` on `C^n`,
//! `min_rho sum_mu var_rho(A_mu) = (2/n)(sum_mu ||a_mu||^2 + l)` where
//! `l = min r^T T r` over coherence vectors of pure states and
//! `T = (n-2) sum_k Tr(O D_k) D_k - (n-1) O`, `O = sum_mu a_mu a_mu^T`.

mod nelder_mead;
mod pure;
mod qutrit;
pub mod sphere;

use serde::{Deserialize, Serialize};

use crate::bloch::{
    decompose, is_pure, Branch, CoherenceDecomposition, CoherenceVector, ExtStratum,
};
use crate::error::{Error, Result};
use crate::generators::{bilinear, GeneratorSet, QuditBasis, StarTensor};
use crate::linalg::{
    checked_hermitian, hermitian_eigenvalues, re_trace_product, symmetric_eigh, CMatrix, RMatrix,
    RVector,
};

/// `<A^2, rho> - <A, rho>^2` with no checks on `rho`. This is the functional
/// evaluated on partial transposes, which need not be positive.
pub fn formal_variance(a: &CMatrix, rho: &CMatrix) -> f64 {
    let mean = re_trace_product(a, rho);
    let a2 = a * a;
    re_trace_product(&a2, rho) - mean * mean
}

/// Variance of a Hermitian observable in a density matrix.
pub fn variance(a: &CMatrix, rho: &CMatrix) -> Result<f64> {
    let a = checked_hermitian(a)?;
    let rho = checked_hermitian(rho)?;
    if a.nrows() != rho.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: rho.nrows(),
        });
    }
    check_state(&rho)?;
    Ok(formal_variance(&a, &rho))
}

pub(crate) fn check_state(rho: &CMatrix) -> Result<()> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(Error::InvalidState(format!("trace {tr} is not 1")));
    }
    let min = hermitian_eigenvalues(rho)[0];
    if min < -1e-9 {
        return Err(Error::InvalidState(format!(
            "smallest eigenvalue {min:e} is negative"
        )));
    }
    Ok(())
}

/// The real symmetric matrices `O` and `T` for a tuple of observables.
#[derive(Debug, Clone)]
pub struct QuadraticForm {
    n: usize,
    coeffs: Vec<RVector>,
    outer: RMatrix,
    t: RMatrix,
    norms: f64,
}

impl QuadraticForm {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of observables `K`.
    pub fn count(&self) -> usize {
        self.coeffs.len()
    }

    /// `O = sum_mu a_mu a_mu^T`.
    pub fn outer(&self) -> &RMatrix {
        &self.outer
    }

    pub fn t(&self) -> &RMatrix {
        &self.t
    }

    /// `sum_mu ||a_mu||^2`.
    pub fn norms(&self) -> f64 {
        self.norms
    }

    /// Generator coefficient vectors `a_mu`.
    pub fn coefficients(&self) -> &[RVector] {
        &self.coeffs
    }

    /// `r^T T r`.
    pub fn value(&self, r: &[f64]) -> f64 {
        bilinear(&self.t, r, r)
    }

    /// `m = (2/n)(sum ||a||^2 + l)`.
    pub fn bound_from_ell(&self, ell: f64) -> f64 {
        2.0 / self.n as f64 * (self.norms + ell)
    }

    /// The traceless parts `a_mu . G` of the observables.
    pub fn traceless_observables(&self, gens: &GeneratorSet) -> Result<Vec<CMatrix>> {
        self.coeffs
            .iter()
            .map(|a| gens.combine(a.as_slice()))
            .collect()
    }
}

/// Builds `O` and `T` from coherence decompositions. Identity coefficients
/// are ignored: the bound is invariant under shifts `A -> A + c Identity`.
pub fn build_quadratic_form(
    decomps: &[CoherenceDecomposition],
    star: &StarTensor,
) -> Result<QuadraticForm> {
    let first = decomps.first().ok_or(Error::EmptyObservables)?;
    let n = first.n;
    if star.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: star.dim(),
            got: n,
        });
    }
    let m = star.len();
    for d in decomps {
        if d.n != n || d.a.len() != m {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: d.n,
            });
        }
    }
    let mut outer = RMatrix::zeros(m, m);
    for d in decomps {
        outer += &d.a * d.a.transpose();
    }
    let nf = n as f64;
    let mut t = &outer * -(nf - 1.0);
    if n > 2 {
        for dk in star.matrices() {
            let w: f64 = decomps
                .iter()
                .map(|d| bilinear(dk, d.a.as_slice(), d.a.as_slice()))
                .sum();
            if w != 0.0 {
                t += dk * ((nf - 2.0) * w);
            }
        }
    }
    let t = (&t + t.transpose()) * 0.5;
    Ok(QuadraticForm {
        n,
        coeffs: decomps.iter().map(|d| d.a.clone()).collect(),
        norms: decomps.iter().map(|d| d.a.norm_squared()).sum(),
        outer,
        t,
    })
}

/// Tunables for the stratified qutrit search and the pure-state descent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Number of radius slices for the I3 stratum.
    pub grid_n: usize,
    pub samples_per_slice: usize,
    /// Objective-spread tolerance of the local polish.
    pub polish_tol: f64,
    /// Random starts of the pure-state descent (dimension >= 4).
    pub restarts: usize,
    pub seed: u64,
    pub max_polish_iters: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid_n: 200,
            samples_per_slice: 2000,
            polish_tol: 1e-9,
            restarts: 32,
            seed: 0,
            max_polish_iters: 500,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_n == 0
            || self.samples_per_slice == 0
            || self.restarts == 0
            || self.max_polish_iters == 0
            || !(self.polish_tol > 0.0)
        {
            return Err(Error::Domain(format!(
                "solver configuration fields must be positive: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Where the reported minimizer lives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolutionStratum {
    /// Qubit Bloch sphere.
    Sphere,
    /// One of the three strata of pure qutrit states.
    Qutrit { stratum: ExtStratum },
    /// Pure-state descent for dimension >= 4.
    PureVector,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Objective evaluations spent on random sampling.
    pub samples: u64,
    pub polish_iterations: u64,
    pub branch: Option<Branch>,
    /// `max(| ||r|| - 1 |, ||r*r - r||)` at the reported minimizer.
    pub constraint_residual: f64,
    /// `sum_mu var(A_mu)` evaluated directly at the reported state.
    pub direct_m: f64,
    /// Per-stratum minima (I1, I2, I3) for qutrits.
    pub stratum_minima: Option<[f64; 3]>,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct BoundResult {
    /// Minimum of `r^T T r` over pure-state coherence vectors.
    pub ell: f64,
    /// Variance-sum lower bound.
    pub m: f64,
    pub r_min: CoherenceVector,
    pub rho_min: CMatrix,
    pub stratum: SolutionStratum,
    pub diagnostics: Diagnostics,
}

fn constraint_residual(r: &CoherenceVector, star: &StarTensor) -> f64 {
    let norm_err = (r.norm() - 1.0).abs();
    if r.dim() == 2 {
        return norm_err;
    }
    let rr = star
        .star(r.as_slice(), r.as_slice())
        .map(|p| (p - r.vector()).norm())
        .unwrap_or(f64::INFINITY);
    norm_err.max(rr)
}

pub(crate) fn finalize(
    q: &QuadraticForm,
    basis: &QuditBasis,
    ell: f64,
    r_min: CoherenceVector,
    stratum: SolutionStratum,
    mut diagnostics: Diagnostics,
) -> Result<BoundResult> {
    let rho_min = r_min.density(basis.generators())?;
    let observables = q.traceless_observables(basis.generators())?;
    diagnostics.direct_m = observables
        .iter()
        .map(|a| formal_variance(a, &rho_min))
        .sum();
    diagnostics.constraint_residual = constraint_residual(&r_min, basis.star());
    Ok(BoundResult {
        ell,
        m: q.bound_from_ell(ell),
        r_min,
        rho_min,
        stratum,
        diagnostics,
    })
}

/// Closed form for qubits: `l = -lambda_max(O)` and `m = Tr O - lambda_max(O)`,
/// attained at the unit top eigenvector of `O`.
pub fn solve_qubit(q: &QuadraticForm) -> Result<BoundResult> {
    if q.dim() != 2 {
        return Err(Error::UnsupportedDimension(q.dim()));
    }
    let basis = QuditBasis::shared(2)?;
    let (values, vectors) = symmetric_eigh(q.outer());
    let top = values[2];
    let mut r: Vec<f64> = vectors.column(2).iter().copied().collect();
    if let Some(first) = r.iter().copied().find(|v| v.abs() > 1e-12) {
        if first < 0.0 {
            r.iter_mut().for_each(|v| *v = -*v);
        }
    }
    let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    r.iter_mut().for_each(|v| *v /= norm);
    let r_min = CoherenceVector::new(2, r)?;
    let diagnostics = Diagnostics {
        converged: true,
        ..Default::default()
    };
    finalize(q, &basis, -top, r_min, SolutionStratum::Sphere, diagnostics)
}

/// Stratified qutrit solve: exact on I1 and I2, sampling plus simplex polish
/// on I3.
pub fn solve_qutrit(q: &QuadraticForm, cfg: &SolverConfig) -> Result<BoundResult> {
    if q.dim() != 3 {
        return Err(Error::UnsupportedDimension(q.dim()));
    }
    cfg.validate()?;
    qutrit::solve(q, cfg)
}

/// Validates the observables, builds the quadratic form and dispatches on
/// the dimension.
pub fn solve_general(observables: &[CMatrix], cfg: &SolverConfig) -> Result<BoundResult> {
    let first = observables.first().ok_or(Error::EmptyObservables)?;
    let n = first.nrows();
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let checked = observables
        .iter()
        .map(|a| {
            let a = checked_hermitian(a)?;
            if a.nrows() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: a.nrows(),
                });
            }
            Ok(a)
        })
        .collect::<Result<Vec<_>>>()?;
    cfg.validate()?;
    let basis = QuditBasis::shared(n)?;
    let decomps = checked
        .iter()
        .map(|a| decompose(a, basis.generators()))
        .collect::<Result<Vec<_>>>()?;
    let q = build_quadratic_form(&decomps, basis.star())?;
    match n {
        2 => solve_qubit(&q),
        3 => solve_qutrit(&q, cfg),
        _ => pure::solve(&q, &basis, &checked, cfg),
    }
}

/// Closed-form minimum of `var(A_t) + var(B)` for the one-parameter qutrit
/// family with `A_t = [[-1,0,t],[0,0,0],[t,0,1]]` and `B = [[0,1,0],[1,0,i],[0,-i,0]]`.
pub fn reference_ht(t: f64) -> f64 {
    let t2 = t * t;
    if t.abs() <= 1.0 {
        (15.0 - t2) * (1.0 + t2) / 32.0
    } else {
        (3.0 + 4.0 * t2) / (4.0 * (1.0 + t2))
    }
}

/// `m(G_i, G_j)` for all pairs of Gell-Mann matrices (0-based, symmetric,
/// zero diagonal).
pub fn pairwise_gellmann_table(cfg: &SolverConfig) -> Result<[[f64; 8]; 8]> {
    let basis = QuditBasis::shared(3)?;
    let mut table = [[0.0; 8]; 8];
    for i in 0..8 {
        for j in (i + 1)..8 {
            let obs = [
                basis.generators().generator(i).clone(),
                basis.generators().generator(j).clone(),
            ];
            let m = solve_general(&obs, cfg)?.m;
            table[i][j] = m;
            table[j][i] = m;
        }
    }
    Ok(table)
}

/// Whether the reported minimizer is a pure state within the purity tolerance.
pub fn minimizer_is_pure(result: &BoundResult) -> Result<bool> {
    let basis = QuditBasis::shared(result.r_min.dim())?;
    Ok(is_pure(&result.r_min, basis.star()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn basis(n: usize) -> std::sync::Arc<QuditBasis> {
        QuditBasis::shared(n).unwrap()
    }

    fn decomp(n: usize, a: Vec<f64>) -> CoherenceDecomposition {
        CoherenceDecomposition {
            n,
            a0: 0.0,
            a: RVector::from_vec(a),
        }
    }

    #[test]
    fn variance_examples() {
        let b = basis(2);
        let g = b.generators();
        let mut ket0 = CMatrix::zeros(2, 2);
        ket0[(0, 0)] = c(1.0, 0.0);
        assert!(variance(g.generator(2), &ket0).unwrap().abs() < 1e-15);
        assert!((variance(g.generator(0), &ket0).unwrap() - 1.0).abs() < 1e-15);

        let b3 = basis(3);
        let mixed = CMatrix::identity(3, 3).map(|z| z / 3.0);
        let v = variance(b3.generators().generator(3), &mixed).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn variance_rejects_non_states() {
        let b = basis(2);
        let bad = CMatrix::identity(2, 2);
        assert!(matches!(
            variance(b.generators().generator(0), &bad),
            Err(Error::InvalidState(_))
        ));
        let neg = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.5, 0.0),
            c(-0.5, 0.0),
        ]));
        assert!(variance(b.generators().generator(0), &neg).is_err());
        let three = CMatrix::identity(3, 3).map(|z| z / 3.0);
        assert!(matches!(
            variance(b.generators().generator(0), &three),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gell_mann_pair_form_is_diagonal() {
        let b = basis(3);
        let mut a = vec![0.0; 8];
        a[3] = 1.0;
        let mut bb = vec![0.0; 8];
        bb[5] = 1.0;
        let q = build_quadratic_form(&[decomp(3, a), decomp(3, bb)], b.star()).unwrap();
        let want = [-1.0, -1.0, -1.0, -1.5, 0.5, -1.5, 0.5, 1.0];
        for i in 0..8 {
            for j in 0..8 {
                let e = if i == j { want[i] } else { 0.0 };
                assert!((q.t()[(i, j)] - e).abs() < 1e-12, "T[{i},{j}]");
            }
        }
        assert!((q.t().trace() + 2.0 * q.norms()).abs() < 1e-12);
    }

    #[test]
    fn zero_observables_give_zero_form() {
        let b = basis(3);
        let q = build_quadratic_form(&[decomp(3, vec![0.0; 8])], b.star()).unwrap();
        assert!(q.t().iter().all(|&v| v == 0.0));
        assert!(q.outer().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn build_rejects_mixed_dimensions() {
        let b = basis(3);
        let err = build_quadratic_form(
            &[decomp(3, vec![0.0; 8]), decomp(2, vec![0.0; 3])],
            b.star(),
        );
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            build_quadratic_form(&[], b.star()),
            Err(Error::EmptyObservables)
        ));
    }

    #[test]
    fn qubit_examples() {
        let b = basis(2);
        let q = build_quadratic_form(
            &[
                decomp(2, vec![1.0, 0.0, 0.0]),
                decomp(2, vec![0.0, 0.0, 1.0]),
            ],
            b.star(),
        )
        .unwrap();
        let r = solve_qubit(&q).unwrap();
        assert!((r.m - 1.0).abs() < 1e-12);
        assert!((r.diagnostics.direct_m - 1.0).abs() < 1e-12);

        let q = build_quadratic_form(
            &[
                decomp(2, vec![0.6, 0.0, 0.8]),
                decomp(2, vec![0.6, 0.0, 0.8]),
            ],
            b.star(),
        )
        .unwrap();
        assert!(solve_qubit(&q).unwrap().m.abs() < 1e-12);

        let q = build_quadratic_form(
            &[
                decomp(2, vec![1.0, 0.0, 0.0]),
                decomp(2, vec![0.0, 1.0, 0.0]),
                decomp(2, vec![0.0, 0.0, 1.0]),
            ],
            b.star(),
        )
        .unwrap();
        let r = solve_qubit(&q).unwrap();
        assert!((r.m - 2.0).abs() < 1e-12);
        assert!((r.diagnostics.direct_m - 2.0).abs() < 1e-12);
    }

    #[test]
    fn qubit_solver_rejects_qutrit_form() {
        let b = basis(3);
        let q = build_quadratic_form(&[decomp(3, vec![1.0; 8])], b.star()).unwrap();
        assert!(matches!(
            solve_qubit(&q),
            Err(Error::UnsupportedDimension(3))
        ));
        let b2 = basis(2);
        let q2 = build_quadratic_form(&[decomp(2, vec![1.0; 3])], b2.star()).unwrap();
        assert!(matches!(
            solve_qutrit(&q2, &SolverConfig::default()),
            Err(Error::UnsupportedDimension(2))
        ));
    }

    #[test]
    fn reference_ht_values() {
        assert!((reference_ht(0.0) - 15.0 / 32.0).abs() < 1e-15);
        assert!((reference_ht(1.0) - 7.0 / 8.0).abs() < 1e-15);
        assert!((reference_ht(-1.0) - 7.0 / 8.0).abs() < 1e-15);
        assert!((reference_ht(2.0) - 19.0 / 20.0).abs() < 1e-15);
        // both branches agree at |t| = 1
        let left = (15.0 - 1.0) * 2.0 / 32.0;
        let right = 7.0 / 8.0;
        assert_eq!(left, right);
    }

    #[test]
    fn general_rejects_bad_input() {
        let cfg = SolverConfig::default();
        assert!(matches!(
            solve_general(&[], &cfg),
            Err(Error::EmptyObservables)
        ));
        let a = CMatrix::identity(2, 2);
        let b = CMatrix::identity(3, 3);
        assert!(matches!(
            solve_general(&[a.clone(), b], &cfg),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut nh = CMatrix::zeros(2, 2);
        nh[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            solve_general(&[nh], &cfg),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig {
            grid_n: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
