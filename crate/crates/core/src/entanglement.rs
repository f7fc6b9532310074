//! Entanglement witnesses built from variance-sum bounds.
//!
//! For a separable state and `M_i = A_i (x) I + I (x) B_i`,
//! `sum_i var(M_i) >= m(A_1..A_K) + m(B_1..B_K)`. Falling below the bound
//! certifies entanglement. The PPT variant evaluates the variance functional
//! on the partial transpose, which is itself a state for separable input.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{checked_hermitian, hermitian_eigenvalues, kron, CMatrix, CVector, C64};
use crate::qp::{formal_variance, solve_general, SolverConfig};

/// Margin by which the variance sum must undercut the bound.
pub const ENTANGLEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dims: (usize, usize),
    rho: CMatrix,
}

impl BipartiteState {
    pub fn new(dims: (usize, usize), rho: CMatrix) -> Result<Self> {
        let (m, n) = dims;
        if m < 1 || n < 1 {
            return Err(Error::InvalidDimension(m.min(n)));
        }
        if rho.nrows() != m * n || rho.ncols() != m * n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                got: rho.nrows(),
            });
        }
        let rho = checked_hermitian(&rho)?;
        let tr = rho.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eigenvalues(&rho)[0];
        if min < -1e-9 {
            return Err(Error::InvalidState(format!(
                "smallest eigenvalue {min:e} is negative"
            )));
        }
        Ok(Self { dims, rho })
    }

    /// `|psi><psi|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(dims: (usize, usize), psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        let psi = psi / C64::new(norm, 0.0);
        Self::new(dims, &psi * psi.adjoint())
    }

    pub fn maximally_mixed(dims: (usize, usize)) -> Result<Self> {
        let d = dims.0 * dims.1;
        Self::new(dims, CMatrix::identity(d, d) / C64::new(d as f64, 0.0))
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }
}

/// `A (x) I_n + I_m (x) B`.
pub fn composite_observable(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let a = checked_hermitian(a)?;
    let b = checked_hermitian(b)?;
    let im = CMatrix::identity(a.nrows(), a.nrows());
    let in_ = CMatrix::identity(b.nrows(), b.nrows());
    Ok(kron(&a, &in_) + kron(&im, &b))
}

/// Partial transpose of an `mn x mn` matrix on one tensor factor.
pub fn partial_transpose_matrix(
    rho: &CMatrix,
    dims: (usize, usize),
    subsystem: Subsystem,
) -> Result<CMatrix> {
    let (m, n) = dims;
    if rho.nrows() != m * n || rho.ncols() != m * n {
        return Err(Error::DimensionMismatch {
            expected: m * n,
            got: rho.nrows(),
        });
    }
    // entry ((i,k),(j,l)) with i,j on the first factor and k,l on the second
    Ok(CMatrix::from_fn(m * n, m * n, |row, col| {
        let (i, k) = (row / n, row % n);
        let (j, l) = (col / n, col % n);
        match subsystem {
            Subsystem::First => rho[(j * n + k, i * n + l)],
            Subsystem::Second => rho[(i * n + l, j * n + k)],
        }
    }))
}

pub fn partial_transpose(state: &BipartiteState, subsystem: Subsystem) -> CMatrix {
    partial_transpose_matrix(&state.rho, state.dims, subsystem)
        .expect("state dimensions are consistent")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Entangled,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub verdict: Verdict,
    /// Variance sum evaluated on the state (or its partial transpose).
    pub value: f64,
    pub bound: f64,
    /// `bound - value`; positive margins beyond the tolerance witness
    /// entanglement.
    pub margin: f64,
}

impl CriterionReport {
    fn new(value: f64, bound: f64) -> Self {
        let verdict = if value < bound - ENTANGLEMENT_TOL {
            Verdict::Entangled
        } else {
            Verdict::Inconclusive
        };
        Self {
            verdict,
            value,
            bound,
            margin: bound - value,
        }
    }
}

/// Local observables `A_i` on the first factor and `B_i` on the second,
/// with the bound `m(A) + m(B)` computed once.
#[derive(Debug, Clone)]
pub struct SeparabilityCriterion {
    dims: (usize, usize),
    composites: Vec<CMatrix>,
    bound: f64,
}

impl SeparabilityCriterion {
    pub fn new(a: &[CMatrix], b: &[CMatrix], cfg: &SolverConfig) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptyObservables);
        }
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        let bound = solve_general(a, cfg)?.m + solve_general(b, cfg)?.m;
        let composites = a
            .iter()
            .zip(b)
            .map(|(x, y)| composite_observable(x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dims: (a[0].nrows(), b[0].nrows()),
            composites,
            bound,
        })
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn composites(&self) -> &[CMatrix] {
        &self.composites
    }

    pub fn evaluate(&self, state: &BipartiteState) -> Result<CriterionReport> {
        if state.dims != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.0 * self.dims.1,
                got: state.dims.0 * state.dims.1,
            });
        }
        let value = self
            .composites
            .iter()
            .map(|mm| formal_variance(mm, &state.rho))
            .sum();
        Ok(CriterionReport::new(value, self.bound))
    }
}

pub fn test_separability_violation(
    state: &BipartiteState,
    a: &[CMatrix],
    b: &[CMatrix],
    cfg: &SolverConfig,
) -> Result<CriterionReport> {
    SeparabilityCriterion::new(a, b, cfg)?.evaluate(state)
}

/// Global observables on `C^m (x) C^n` compared against their variance-sum
/// bound over all states of the composite system.
#[derive(Debug, Clone)]
pub struct PptCriterion {
    observables: Vec<CMatrix>,
    bound: f64,
    subsystem: Subsystem,
}

impl PptCriterion {
    pub fn new(observables: &[CMatrix], cfg: &SolverConfig) -> Result<Self> {
        let checked = observables
            .iter()
            .map(checked_hermitian)
            .collect::<Result<Vec<_>>>()?;
        let bound = solve_general(&checked, cfg)?.m;
        Ok(Self {
            observables: checked,
            bound,
            subsystem: Subsystem::Second,
        })
    }

    /// Transpose the first factor instead of the second. The verdict is
    /// the same up to a full transpose, which preserves the spectrum.
    pub fn on(mut self, subsystem: Subsystem) -> Self {
        self.subsystem = subsystem;
        self
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn evaluate(&self, state: &BipartiteState) -> Result<CriterionReport> {
        let d = state.dims.0 * state.dims.1;
        if self.observables[0].nrows() != d {
            return Err(Error::DimensionMismatch {
                expected: self.observables[0].nrows(),
                got: d,
            });
        }
        let pt = partial_transpose(state, self.subsystem);
        let value = self
            .observables
            .iter()
            .map(|x| formal_variance(x, &pt))
            .sum();
        Ok(CriterionReport::new(value, self.bound))
    }
}

pub fn test_ppt_variance(
    state: &BipartiteState,
    a: &CMatrix,
    b: &CMatrix,
    cfg: &SolverConfig,
) -> Result<CriterionReport> {
    PptCriterion::new(&[a.clone(), b.clone()], cfg)?.evaluate(state)
}

fn haar_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(d, |_, _| {
        C64::new(
            StandardNormal.sample(&mut *rng),
            StandardNormal.sample(&mut *rng),
        )
    });
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Convex mixture of 1 to 4 Haar-random product pure states with flat
/// Dirichlet weights.
pub fn random_separable_state<R: Rng + ?Sized>(
    dims: (usize, usize),
    rng: &mut R,
) -> Result<BipartiteState> {
    let k = rng.random_range(1..=4);
    let weights: Vec<f64> = (0..k).map(|_| Exp1.sample(&mut *rng)).collect();
    let total: f64 = weights.iter().sum();
    let d = dims.0 * dims.1;
    let mut rho = CMatrix::zeros(d, d);
    for w in weights {
        let psi = kron(
            &CMatrix::from_column_slice(dims.0, 1, haar_vector(dims.0, rng).as_slice()),
            &CMatrix::from_column_slice(dims.1, 1, haar_vector(dims.1, rng).as_slice()),
        );
        rho += &psi * psi.adjoint() * C64::new(w / total, 0.0);
    }
    BipartiteState::new(dims, rho)
}
