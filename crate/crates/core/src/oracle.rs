//! Brute-force referee: minimizes `sum_mu var_psi(A_mu)` over unit vectors
//! by projected gradient descent from random starts. Independent of the
//! quadratic-form machinery in [`crate::qp`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{checked_hermitian, CMatrix, CVector, C64};

const GRAD_TOL: f64 = 1e-10;
const MAX_ITERS: usize = 5000;
const AGREE_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub value: f64,
    pub psi: CVector,
    pub restarts_used: usize,
    pub converged: bool,
}

fn expectation(a: &CMatrix, psi: &CVector) -> f64 {
    psi.dotc(&(a * psi)).re
}

/// `<psi|A^2|psi> - <psi|A|psi>^2` for a unit vector.
pub fn variance_pure(a: &CMatrix, psi: &CVector) -> Result<f64> {
    if a.nrows() != psi.len() || a.ncols() != psi.len() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: psi.len(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm));
    }
    let ap = a * psi;
    let mean = psi.dotc(&ap).re;
    Ok(ap.norm_squared() - mean * mean)
}

/// Objective `sum_mu var_psi(A_mu)` without normalization checks.
pub fn objective(obs: &[CMatrix], psi: &CVector) -> f64 {
    obs.iter()
        .map(|a| {
            let ap = a * psi;
            let mean = psi.dotc(&ap).re;
            ap.norm_squared() - mean * mean
        })
        .sum()
}

/// Gradient of [`objective`] with respect to the real and imaginary parts
/// of `psi`, packed as a complex vector: `2 sum_mu (A_mu - <A_mu>)^2 psi`.
/// Not projected.
pub fn gradient(obs: &[CMatrix], psi: &CVector) -> CVector {
    let mut g = CVector::zeros(psi.len());
    for a in obs {
        let mean = expectation(a, psi);
        let shifted = a - CMatrix::identity(a.nrows(), a.ncols()) * C64::new(mean, 0.0);
        g += (&shifted * (&shifted * psi)) * C64::new(2.0, 0.0);
    }
    g
}

fn tangent(psi: &CVector, g: &CVector) -> CVector {
    let radial = psi.dotc(g).re;
    g - psi * C64::new(radial, 0.0)
}

struct Run {
    value: f64,
    psi: CVector,
    converged: bool,
}

fn run(obs: &[CMatrix], mut psi: CVector) -> Run {
    let mut value = objective(obs, &psi);
    for _ in 0..MAX_ITERS {
        let g = tangent(&psi, &gradient(obs, &psi));
        let gn2 = g.norm_squared();
        if gn2.sqrt() < GRAD_TOL {
            return Run {
                value,
                psi,
                converged: true,
            };
        }
        let mut step = 0.5;
        let mut moved = false;
        while step > 1e-18 {
            let trial = &psi - &g * C64::new(step, 0.0);
            let trial = &trial / C64::new(trial.norm(), 0.0);
            let tv = objective(obs, &trial);
            if tv <= value - 1e-4 * step * gn2 {
                psi = trial;
                value = tv;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            // No descent possible at machine precision: stationary.
            return Run {
                value,
                psi,
                converged: gn2.sqrt() < 1e-7,
            };
        }
    }
    Run {
        value,
        psi,
        converged: false,
    }
}

fn seed_for(seed: u64, run: usize) -> u64 {
    // Knuth multiplicative mixing; distinct from the solver's stream split.
    seed.wrapping_mul(6_364_136_223_846_793_005)
        .wrapping_add((run as u64).wrapping_mul(1_442_695_040_888_963_407))
        .rotate_left(17)
}

/// Best of `restarts` projected gradient descents on the unit sphere.
pub fn oracle_min(observables: &[CMatrix], restarts: usize, seed: u64) -> Result<OracleResult> {
    let first = observables.first().ok_or(Error::EmptyObservables)?;
    let n = first.nrows();
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if restarts == 0 {
        return Err(Error::Domain("restarts must be positive".into()));
    }
    let obs = observables
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

    let mut runs: Vec<(usize, Run)> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed_for(seed, i));
            let v = CVector::from_fn(n, |_, _| {
                C64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            });
            let norm = v.norm();
            (i, run(&obs, v / C64::new(norm, 0.0)))
        })
        .collect();
    runs.sort_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)));
    let any_converged = runs.iter().any(|r| r.1.converged);
    let agree = runs.len() < 2 || (runs[1].1.value - runs[0].1.value).abs() <= AGREE_TOL;
    let best = runs.swap_remove(0).1;
    Ok(OracleResult {
        value: best.value,
        psi: best.psi,
        restarts_used: restarts,
        converged: any_converged && agree,
    })
}
