//! Pure-state descent for dimensions without an explicit parametrization of
//! the pure-state manifold.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::qutrit::splitmix64;
use super::{finalize, BoundResult, Diagnostics, QuadraticForm, SolutionStratum, SolverConfig};
use crate::bloch::CoherenceVector;
use crate::error::Result;
use crate::generators::QuditBasis;
use crate::linalg::{c, CMatrix, CVector};

const GRAD_TOL: f64 = 1e-10;
const MAX_ITERS: u64 = 20_000;
const MIN_STEP: f64 = 1e-16;

struct Objective<'a> {
    obs: &'a [CMatrix],
    squares: Vec<CMatrix>,
}

impl<'a> Objective<'a> {
    fn new(obs: &'a [CMatrix]) -> Self {
        Self {
            obs,
            squares: obs.iter().map(|a| a * a).collect(),
        }
    }

    fn value(&self, psi: &CVector) -> f64 {
        self.obs
            .iter()
            .zip(&self.squares)
            .map(|(a, a2)| {
                let mean = psi.dotc(&(a * psi)).re;
                psi.dotc(&(a2 * psi)).re - mean * mean
            })
            .sum()
    }

    /// Euclidean gradient in the real 2n-dimensional sense, projected onto
    /// the tangent space of the unit sphere.
    fn tangent_gradient(&self, psi: &CVector) -> CVector {
        let mut g = CVector::zeros(psi.len());
        for (a, a2) in self.obs.iter().zip(&self.squares) {
            let ap = a * psi;
            let mean = psi.dotc(&ap).re;
            g += (a2 * psi - ap * c(2.0 * mean, 0.0)) * c(2.0, 0.0);
        }
        let radial = psi.dotc(&g).re;
        g - psi * c(radial, 0.0)
    }
}

struct Run {
    value: f64,
    psi: CVector,
    iterations: u64,
    converged: bool,
}

fn descend(obj: &Objective, mut psi: CVector, max_iters: u64) -> Run {
    let mut value = obj.value(&psi);
    for it in 0..max_iters {
        let g = obj.tangent_gradient(&psi);
        let gn2 = g.norm_squared();
        if gn2.sqrt() < GRAD_TOL {
            return Run {
                value,
                psi,
                iterations: it,
                converged: true,
            };
        }
        let mut step = 1.0;
        loop {
            let mut trial = &psi - &g * c(step, 0.0);
            let norm = trial.norm();
            trial /= c(norm, 0.0);
            let tv = obj.value(&trial);
            if tv <= value - 1e-4 * step * gn2 {
                psi = trial;
                value = tv;
                break;
            }
            step *= 0.5;
            if step < MIN_STEP {
                return Run {
                    value,
                    psi,
                    iterations: it,
                    converged: gn2.sqrt() < 1e-7,
                };
            }
        }
    }
    Run {
        value,
        psi,
        iterations: max_iters,
        converged: false,
    }
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> CVector {
    let v = CVector::from_fn(n, |_, _| {
        c(
            StandardNormal.sample(&mut *rng),
            StandardNormal.sample(&mut *rng),
        )
    });
    let norm = v.norm();
    v / c(norm, 0.0)
}

pub(crate) fn solve(
    q: &QuadraticForm,
    basis: &QuditBasis,
    observables: &[CMatrix],
    cfg: &SolverConfig,
) -> Result<BoundResult> {
    let n = q.dim();
    let obj = Objective::new(observables);
    let runs: Vec<Run> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(cfg.seed ^ splitmix64(i as u64)));
            descend(&obj, random_unit(n, &mut rng), MAX_ITERS)
        })
        .collect();
    let iterations = runs.iter().map(|r| r.iterations).sum();
    let best = runs
        .into_iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .map(|(_, r)| r)
        .expect("at least one restart");

    let rho = &best.psi * best.psi.adjoint();
    let r_min = CoherenceVector::from_density(&rho, basis.generators())?;
    let m = best.value.max(0.0);
    let ell = n as f64 / 2.0 * m - q.norms();
    let diagnostics = Diagnostics {
        samples: cfg.restarts as u64,
        polish_iterations: iterations,
        converged: best.converged,
        ..Default::default()
    };
    finalize(
        q,
        basis,
        ell,
        r_min,
        SolutionStratum::PureVector,
        diagnostics,
    )
}
