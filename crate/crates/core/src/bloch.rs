//! Coherence-vector (generalized Bloch) representation of observables and
//! states, membership tests for the state space and its pure boundary, and
//! the explicit three-piece parametrization of pure qutrit states.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{GeneratorSet, QuditBasis, StarTensor};
use crate::linalg::{
    c, checked_hermitian, hermitian_eigenvalues, re_trace_product, CMatrix, RVector,
};

/// Purity tolerance on `| ||r|| - 1 |` and `||r * r - r||`.
pub const PURITY_TOL: f64 = 1e-8;
/// Free-coordinate norm below which a pure qutrit vector is put in I1 or I2.
pub const STRATUM_TOL: f64 = 1e-9;
/// Largest radius of the `(r4, r5, r6, r7)` block on the pure qutrit manifold.
pub const MAX_RADIUS: f64 = 0.866_025_403_784_438_6;

/// `sqrt(n(n-1)/2)`, the scale between a coherence vector and its state.
pub fn coherence_scale(n: usize) -> f64 {
    let nf = n as f64;
    (nf * (nf - 1.0) / 2.0).sqrt()
}

/// `A = a0 * Identity + a . G`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceDecomposition {
    pub n: usize,
    pub a0: f64,
    pub a: RVector,
}

impl CoherenceDecomposition {
    pub fn reconstruct(&self, gens: &GeneratorSet) -> Result<CMatrix> {
        let mut m = gens.combine(self.a.as_slice())?;
        for i in 0..self.n {
            m[(i, i)] += c(self.a0, 0.0);
        }
        Ok(m)
    }

    pub fn norm_squared(&self) -> f64 {
        self.a.norm_squared()
    }
}

/// Splits a Hermitian matrix into identity and generator coefficients:
/// `a0 = Tr(A)/n`, `a_k = Tr(A G_k)/2`.
pub fn decompose(a: &CMatrix, gens: &GeneratorSet) -> Result<CoherenceDecomposition> {
    let a = checked_hermitian(a)?;
    let n = gens.dim();
    if a.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.nrows(),
        });
    }
    let a0 = a.trace().re / n as f64;
    let coeffs = RVector::from_iterator(
        gens.len(),
        gens.generators()
            .iter()
            .map(|g| 0.5 * re_trace_product(&a, g)),
    );
    Ok(CoherenceDecomposition { n, a0, a: coeffs })
}

/// A real vector of length `n^2 - 1` labelling the trace-one Hermitian
/// matrix `rho(r) = (Identity + sqrt(n(n-1)/2) r . G) / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceVector {
    n: usize,
    r: RVector,
}

impl CoherenceVector {
    pub fn new(n: usize, components: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if components.len() != n * n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n * n - 1,
                got: components.len(),
            });
        }
        Ok(Self {
            n,
            r: RVector::from_vec(components),
        })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; n.saturating_mul(n).saturating_sub(1)])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        self.r.as_slice()
    }

    pub fn vector(&self) -> &RVector {
        &self.r
    }

    pub fn norm(&self) -> f64 {
        self.r.norm()
    }

    pub fn density(&self, gens: &GeneratorSet) -> Result<CMatrix> {
        state_from_vector(self, gens)
    }

    /// Inverse of [`state_from_vector`]: `r_k = n Tr(rho G_k) / (2 sqrt(n(n-1)/2))`.
    pub fn from_density(rho: &CMatrix, gens: &GeneratorSet) -> Result<Self> {
        let n = gens.dim();
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rho.nrows(),
            });
        }
        let scale = n as f64 / (2.0 * coherence_scale(n));
        let r = gens
            .generators()
            .iter()
            .map(|g| scale * re_trace_product(rho, g))
            .collect();
        Self::new(n, r)
    }
}

impl fmt::Display for CoherenceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.r.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v:.6}")?;
        }
        write!(f, ")")
    }
}

/// `rho(r) = (Identity + sqrt(n(n-1)/2) r . G) / n`.
pub fn state_from_vector(r: &CoherenceVector, gens: &GeneratorSet) -> Result<CMatrix> {
    if r.dim() != gens.dim() {
        return Err(Error::DimensionMismatch {
            expected: gens.len(),
            got: r.as_slice().len(),
        });
    }
    let n = gens.dim();
    let scale = coherence_scale(n);
    let scaled: Vec<f64> = r.as_slice().iter().map(|v| v * scale).collect();
    let mut rho = gens.combine(&scaled)?;
    for i in 0..n {
        rho[(i, i)] += c(1.0, 0.0);
    }
    Ok(rho.map(|z| z / n as f64))
}

/// Star product `x * y` under the tensor `star`.
pub fn star(x: &[f64], y: &[f64], star: &StarTensor) -> Result<RVector> {
    star.star(x, y)
}

fn qutrit() -> Result<std::sync::Arc<QuditBasis>> {
    QuditBasis::shared(3)
}

fn require_qutrit(r: &CoherenceVector) -> Result<()> {
    if r.dim() != 3 {
        return Err(Error::UnsupportedDimension(r.dim()));
    }
    Ok(())
}

/// `<r, r * r>` for a qutrit vector.
fn cubic_invariant(r: &[f64], st: &StarTensor) -> Result<f64> {
    let rr = st.star(r, r)?;
    Ok(rr.iter().zip(r).map(|(a, b)| a * b).sum())
}

/// Algebraic membership test for qutrit states:
/// `||r|| <= 1` and `1 + 2<r, r*r> >= 3<r, r>`.
pub fn is_density_qutrit(r: &CoherenceVector) -> Result<bool> {
    require_qutrit(r)?;
    let basis = qutrit()?;
    let norm_sq = r.vector().norm_squared();
    if norm_sq.sqrt() > 1.0 + 1e-10 {
        return Ok(false);
    }
    let cubic = cubic_invariant(r.as_slice(), basis.star())?;
    Ok(1.0 + 2.0 * cubic >= 3.0 * norm_sq - 1e-10)
}

/// Trigonometric membership test for qutrit states: `||r|| <= 1/2`, or
/// `1/2 <= ||r|| <= 1` with
/// `arccos(<r, r*r>/||r||^3) + 3 arccos(1/(2||r||)) <= pi`.
pub fn is_density_qutrit_trig(r: &CoherenceVector) -> Result<bool> {
    require_qutrit(r)?;
    let norm = r.norm();
    if norm <= 0.5 {
        return Ok(true);
    }
    if norm > 1.0 + 1e-10 {
        return Ok(false);
    }
    let basis = qutrit()?;
    let cubic = cubic_invariant(r.as_slice(), basis.star())?;
    let x = (cubic / norm.powi(3)).clamp(-1.0, 1.0);
    let y = (1.0 / (2.0 * norm)).clamp(-1.0, 1.0);
    Ok(x.acos() + 3.0 * y.acos() <= PI + 1e-9)
}

/// Membership in the state space for any dimension. Qutrits use the
/// algebraic test; other dimensions check the smallest eigenvalue of `rho(r)`.
pub fn is_density(r: &CoherenceVector, basis: &QuditBasis) -> Result<bool> {
    if r.dim() == 3 {
        return is_density_qutrit(r);
    }
    let rho = state_from_vector(r, basis.generators())?;
    let min = hermitian_eigenvalues(&rho)[0];
    Ok(min >= -1e-9)
}

/// Pure-state test: `||r|| = 1` and, for `n > 2`, `r * r = r`.
pub fn is_pure(r: &CoherenceVector, star: &StarTensor) -> bool {
    if r.dim() != star.dim() {
        return false;
    }
    if (r.norm() - 1.0).abs() > PURITY_TOL {
        return false;
    }
    if r.dim() == 2 {
        return true;
    }
    match star.star(r.as_slice(), r.as_slice()) {
        Ok(rr) => (rr - r.vector()).norm() <= PURITY_TOL,
        Err(_) => false,
    }
}

/// Eigenvalues of `rho(r)` for a qutrit, descending, from the closed form
/// `1/3 + (2/3) ||r|| cos(theta + shift)` with
/// `theta = arccos(<r, r*r>/||r||^3) / 3` and shifts `0, -2pi/3, +2pi/3`.
pub fn qutrit_spectrum_trig(r: &CoherenceVector) -> Result<[f64; 3]> {
    require_qutrit(r)?;
    let third = 1.0 / 3.0;
    let norm = r.norm();
    if norm == 0.0 {
        return Ok([third; 3]);
    }
    let basis = qutrit()?;
    let cubic = cubic_invariant(r.as_slice(), basis.star())?;
    let mut x = (cubic / norm.powi(3)).clamp(-1.0, 1.0);
    // arccos has infinite slope at +-1; a few ulps of noise in x would
    // otherwise move degenerate eigenvalues by ~1e-8.
    if 1.0 - x.abs() <= 8.0 * f64::EPSILON {
        x = x.signum();
    }
    let theta = x.acos() / 3.0;
    let amp = 2.0 * norm / 3.0;
    Ok([
        third + amp * theta.cos(),
        third + amp * (theta - 2.0 * PI / 3.0).cos(),
        third + amp * (theta + 2.0 * PI / 3.0).cos(),
    ])
}

/// Branch sign of the quadratic for `r8` on the pure qutrit manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Stratum of a pure qutrit coherence vector.
///
/// `I1` is the single point `-e_8`; `I2` is the sphere
/// `{(v, 0, 0, 0, 0, 1/2) : ||v||^2 = 3/4}`; `I3` is parametrized by the free
/// block `(r4, r5, r6, r7)` of radius `R` in `(0, sqrt(3)/2]` and a branch sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum ExtStratum {
    I1,
    I2,
    I3 {
        radius: f64,
        branch: Branch,
        free: [f64; 4],
    },
}

// sqrt(3 - 4R^2), with rounding noise at R = sqrt3/2 flushed to zero.
fn disc_root(radius_sq: f64) -> f64 {
    let d = 3.0 - 4.0 * radius_sq;
    if d <= 16.0 * f64::EPSILON {
        0.0
    } else {
        d.sqrt()
    }
}

/// `(sqrt 3 + eps sqrt(3 - 4R^2)) / (2 R^2)`, shared by r1, r2 and (halved) r3.
fn lift_factor(radius_sq: f64, branch: Branch) -> f64 {
    let disc = disc_root(radius_sq);
    let s3 = 3.0_f64.sqrt();
    match branch {
        Branch::Plus => (s3 + disc) / (2.0 * radius_sq),
        // (sqrt3 - sqrt(3-4R^2)) / (2R^2) rewritten to avoid cancellation at small R.
        Branch::Minus => 2.0 / (s3 + disc),
    }
}

/// Full pure-state vector from the free block, no validation. The free block
/// must be nonzero with squared norm at most 3/4.
pub(crate) fn lift_ext3_raw(free: &[f64; 4], branch: Branch) -> [f64; 8] {
    let [r4, r5, r6, r7] = *free;
    let radius_sq = (r4 * r4 + r5 * r5 + r6 * r6 + r7 * r7).min(0.75);
    let s = lift_factor(radius_sq, branch);
    let root = 3.0_f64.sqrt() * disc_root(radius_sq);
    [
        s * (r4 * r6 + r5 * r7),
        s * (r5 * r6 - r4 * r7),
        0.5 * s * (r4 * r4 + r5 * r5 - r6 * r6 - r7 * r7),
        r4,
        r5,
        r6,
        r7,
        (-1.0 + branch.sign() * root) / 4.0,
    ]
}

/// Lifts `(R, eps, (r4..r7))` to the pure qutrit vector in stratum I3.
/// The free block is rescaled onto the radius-`R` sphere when its norm
/// drifts from `R` by less than `1e-6` relative.
pub fn lift_ext3(radius: f64, branch: Branch, free: [f64; 4]) -> Result<CoherenceVector> {
    if !(radius > 0.0 && radius <= MAX_RADIUS + 1e-12) {
        return Err(Error::Domain(format!(
            "radius {radius} outside (0, sqrt(3)/2]"
        )));
    }
    let radius = radius.min(MAX_RADIUS);
    let norm = free.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Domain("free block must be a nonzero vector".into()));
    }
    if ((norm - radius) / radius).abs() > 1e-6 {
        return Err(Error::Domain(format!(
            "free block norm {norm} does not match radius {radius}"
        )));
    }
    let scaled = free.map(|v| v * radius / norm);
    CoherenceVector::new(3, lift_ext3_raw(&scaled, branch).to_vec())
}

/// Assigns a pure qutrit vector to its stratum, recovering `R` and the branch
/// for I3.
pub fn classify_ext3(r: &CoherenceVector) -> Result<ExtStratum> {
    require_qutrit(r)?;
    let basis = qutrit()?;
    if !is_pure(r, basis.star()) {
        return Err(Error::Domain("vector is not a pure qutrit state".into()));
    }
    let v = r.as_slice();
    let free = [v[3], v[4], v[5], v[6]];
    let radius = free.iter().map(|x| x * x).sum::<f64>().sqrt();
    if radius <= STRATUM_TOL {
        if (v[7] + 1.0).abs() <= 1e-6 {
            return Ok(ExtStratum::I1);
        }
        if (v[7] - 0.5).abs() <= 1e-6 {
            return Ok(ExtStratum::I2);
        }
        return Err(Error::Domain(format!(
            "r8 = {} is inconsistent with a vanishing free block",
            v[7]
        )));
    }
    // r8 = -1/4 + eps sqrt(3(3-4R^2))/4
    let branch = if v[7] + 0.25 >= 0.0 {
        Branch::Plus
    } else {
        Branch::Minus
    };
    Ok(ExtStratum::I3 {
        radius: radius.min(MAX_RADIUS),
        branch,
        free,
    })
}

/// Residuals of the nine polynomial equations cutting out pure qutrit
/// vectors (`r * r = r` in reduced form, plus `||r|| = 1`). All vanish on
/// the pure manifold.
pub fn ext3_constraint_residuals(r: &[f64; 8]) -> [f64; 9] {
    let s3 = 3.0_f64.sqrt();
    let [r1, r2, r3, r4, r5, r6, r7, r8] = *r;
    [
        s3 * (r4 * r6 + r5 * r7) + r1 * (2.0 * r8 - 1.0),
        s3 * (r5 * r6 - r4 * r7) + r2 * (2.0 * r8 - 1.0),
        s3 * (r4 * r4 + r5 * r5 - r6 * r6 - r7 * r7) + 2.0 * r3 * (2.0 * r8 - 1.0),
        s3 * (r1 * r6 - r2 * r7) + r4 * (s3 * r3 - r8 - 1.0),
        s3 * (r2 * r6 + r1 * r7) + r5 * (s3 * r3 - r8 - 1.0),
        s3 * (r1 * r4 + r2 * r5) - r6 * (s3 * r3 + r8 + 1.0),
        s3 * (r2 * r4 - r1 * r5) + r7 * (s3 * r3 + r8 + 1.0),
        2.0 * (r1 * r1 + r2 * r2 + r3 * r3)
            - (r4 * r4 + r5 * r5 + r6 * r6 + r7 * r7)
            - 2.0 * r8 * (r8 + 1.0),
        1.0 - r.iter().map(|x| x * x).sum::<f64>(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: [f64; 8]) -> CoherenceVector {
        CoherenceVector::new(3, v.to_vec()).unwrap()
    }

    const S3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn decompose_identity_and_generator() {
        let basis = QuditBasis::shared(3).unwrap();
        let g = basis.generators();
        let id = CMatrix::identity(3, 3);
        let d = decompose(&id, g).unwrap();
        assert!((d.a0 - 1.0).abs() < 1e-15);
        assert!(d.a.norm() < 1e-15);

        let d4 = decompose(g.generator(3), g).unwrap();
        assert!(d4.a0.abs() < 1e-15);
        for k in 0..8 {
            let e = if k == 3 { 1.0 } else { 0.0 };
            assert!((d4.a[k] - e).abs() < 1e-15);
        }
    }

    #[test]
    fn decompose_diag_minus_one_zero_one() {
        let g = QuditBasis::shared(3).unwrap();
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(-1.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]));
        let d = decompose(&a, g.generators()).unwrap();
        let expect = [0.0, 0.0, -0.5, 0.0, 0.0, 0.0, 0.0, -S3 / 2.0];
        for k in 0..8 {
            assert!((d.a[k] - expect[k]).abs() < 1e-12, "a[{k}]");
        }
        let back = d.reconstruct(g.generators()).unwrap();
        assert!((back - a).norm() < 1e-12);
    }

    #[test]
    fn decompose_rejects_bad_input() {
        let g = QuditBasis::shared(3).unwrap();
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            decompose(&a, g.generators()),
            Err(Error::NotHermitian(_))
        ));
        let b = CMatrix::identity(2, 2);
        assert!(matches!(
            decompose(&b, g.generators()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn state_examples() {
        let g = QuditBasis::shared(3).unwrap();
        let rho0 = state_from_vector(&CoherenceVector::zeros(3).unwrap(), g.generators()).unwrap();
        assert!((rho0 - CMatrix::identity(3, 3).map(|z| z / 3.0)).norm() < 1e-15);

        let r = q([0.0, 0.0, S3 / 2.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
        let rho = state_from_vector(&r, g.generators()).unwrap();
        let mut e00 = CMatrix::zeros(3, 3);
        e00[(0, 0)] = c(1.0, 0.0);
        assert!((rho - e00).norm() < 1e-12);

        let r = q([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        let rho = state_from_vector(&r, g.generators()).unwrap();
        let mut e22 = CMatrix::zeros(3, 3);
        e22[(2, 2)] = c(1.0, 0.0);
        assert!((rho - e22).norm() < 1e-12);
    }

    #[test]
    fn state_rejects_dimension_mismatch() {
        let g = QuditBasis::shared(2).unwrap();
        let r = CoherenceVector::zeros(3).unwrap();
        assert!(state_from_vector(&r, g.generators()).is_err());
        assert!(CoherenceVector::new(3, vec![0.0; 5]).is_err());
    }

    #[test]
    fn star_examples() {
        let b = QuditBasis::shared(3).unwrap();
        let mut e8 = [0.0; 8];
        e8[7] = 1.0;
        let p = star(&e8, &e8, b.star()).unwrap();
        let mut want = [0.0; 8];
        want[7] = -1.0;
        assert!((p - RVector::from_row_slice(&want)).norm() < 1e-12);

        let mut e3 = [0.0; 8];
        e3[2] = 1.0;
        let p = star(&e3, &e3, b.star()).unwrap();
        assert!((p - RVector::from_row_slice(&e8)).norm() < 1e-12);
    }

    #[test]
    fn qutrit_membership_examples() {
        assert!(is_density_qutrit(&CoherenceVector::zeros(3).unwrap()).unwrap());
        let i1 = q([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        assert!(is_density_qutrit(&i1).unwrap());
        let big = q([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.2]);
        assert!(!is_density_qutrit(&big).unwrap());
        assert!(matches!(
            is_density_qutrit(&CoherenceVector::zeros(2).unwrap()),
            Err(Error::UnsupportedDimension(2))
        ));
    }

    #[test]
    fn trig_membership_examples() {
        let small = q([0.2, 0.0, -0.2, 0.1, 0.0, 0.0, 0.0, 0.2]);
        let n = small.norm();
        let small = q(small
            .as_slice()
            .iter()
            .map(|v| v * 0.4 / n)
            .collect::<Vec<_>>()
            .try_into()
            .unwrap());
        assert!(is_density_qutrit_trig(&small).unwrap());

        let e8 = q([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(!is_density_qutrit_trig(&e8).unwrap());
        assert!(!is_density_qutrit(&e8).unwrap());

        let ext = q([0.0, 0.0, S3 / 2.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
        assert!(is_density_qutrit_trig(&ext).unwrap());
        assert!(is_density_qutrit_trig(&CoherenceVector::zeros(3).unwrap()).unwrap());
    }

    #[test]
    fn e8_state_has_negative_eigenvalue() {
        let g = QuditBasis::shared(3).unwrap();
        let e8 = q([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let ev = hermitian_eigenvalues(&state_from_vector(&e8, g.generators()).unwrap());
        assert!((ev[0] + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn purity_examples() {
        let b2 = QuditBasis::shared(2).unwrap();
        let r = CoherenceVector::new(2, vec![0.0, 0.0, 1.0]).unwrap();
        assert!(is_pure(&r, b2.star()));

        let b3 = QuditBasis::shared(3).unwrap();
        assert!(is_pure(
            &q([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]),
            b3.star()
        ));
        assert!(!is_pure(
            &q([0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            b3.star()
        ));
    }

    #[test]
    fn trig_spectrum_examples() {
        let ext = q([0.0, 0.0, S3 / 2.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
        let s = qutrit_spectrum_trig(&ext).unwrap();
        for (a, b) in s.iter().zip([1.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-9);
        }
        let i1 = q([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        let s = qutrit_spectrum_trig(&i1).unwrap();
        for (a, b) in s.iter().zip([1.0, 0.0, 0.0]) {
            assert!((a - b).abs() < 1e-9);
        }
        let s = qutrit_spectrum_trig(&CoherenceVector::zeros(3).unwrap()).unwrap();
        assert_eq!(s, [1.0 / 3.0; 3]);
    }

    #[test]
    fn lift_at_full_radius() {
        let r = lift_ext3(MAX_RADIUS, Branch::Plus, [0.0, 0.0, 0.0, MAX_RADIUS]).unwrap();
        let v = r.as_slice();
        // s = 2/sqrt3 at R^2 = 3/4, so r3 = -(1/sqrt3)(3/4) and r8 = -1/4.
        let expect = [0.0, 0.0, -S3 / 4.0, 0.0, 0.0, 0.0, MAX_RADIUS, -0.25];
        for k in 0..8 {
            assert!((v[k] - expect[k]).abs() < 1e-12, "r[{k}] = {}", v[k]);
        }
        let res = ext3_constraint_residuals(&v.try_into().unwrap());
        assert!(res.iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn lift_reproduces_gell_mann_pair_minimizer() {
        // Minimizer family for var(G4) + var(G6) at t = 0.
        let radius = 3.0 * 5.0_f64.sqrt() / 8.0;
        let r = lift_ext3(radius, Branch::Plus, [radius, 0.0, 0.0, 0.0]).unwrap();
        let v = r.as_slice();
        let expect = [
            0.0,
            0.0,
            5.0 * S3 / 16.0,
            radius,
            0.0,
            0.0,
            0.0,
            -1.0 / 16.0,
        ];
        for k in 0..8 {
            assert!((v[k] - expect[k]).abs() < 1e-12, "r[{k}] = {}", v[k]);
        }
        let b = QuditBasis::shared(3).unwrap();
        assert!(is_pure(&r, b.star()));
        match classify_ext3(&r).unwrap() {
            ExtStratum::I3 {
                radius: got,
                branch,
                ..
            } => {
                assert!((got - radius).abs() < 1e-12);
                assert_eq!(branch, Branch::Plus);
            }
            other => panic!("unexpected stratum {other:?}"),
        }
    }

    #[test]
    fn lift_rejects_bad_arguments() {
        assert!(lift_ext3(0.0, Branch::Plus, [1.0, 0.0, 0.0, 0.0]).is_err());
        assert!(lift_ext3(0.9, Branch::Plus, [0.9, 0.0, 0.0, 0.0]).is_err());
        assert!(lift_ext3(0.5, Branch::Plus, [0.0; 4]).is_err());
        assert!(lift_ext3(0.5, Branch::Minus, [0.6, 0.0, 0.0, 0.0]).is_err());
        // small drift is renormalized
        let r = lift_ext3(0.5, Branch::Minus, [0.5 * (1.0 + 1e-8), 0.0, 0.0, 0.0]).unwrap();
        assert!((r.as_slice()[3] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn classify_low_strata() {
        let i1 = q([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0]);
        assert_eq!(classify_ext3(&i1).unwrap(), ExtStratum::I1);
        let i2 = q([S3 / 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]);
        assert_eq!(classify_ext3(&i2).unwrap(), ExtStratum::I2);
        let mixed = q([0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(classify_ext3(&mixed), Err(Error::Domain(_))));
    }
}
