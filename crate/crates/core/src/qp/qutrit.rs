//! Stratified minimization of `r^T T r` over pure qutrit states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::nelder_mead;
use super::sphere::minimize_on_sphere;
use super::{finalize, BoundResult, Diagnostics, QuadraticForm, SolutionStratum, SolverConfig};
use crate::bloch::{classify_ext3, lift_ext3_raw, Branch, CoherenceVector, ExtStratum, MAX_RADIUS};
use crate::error::Result;
use crate::generators::{bilinear, QuditBasis};
use crate::linalg::{RMatrix, RVector};

const TIE_TOL: f64 = 1e-12;
const POLISH_STARTS: usize = 8;
/// Polish starts closer than this (as lifted Bloch vectors) count as one basin.
const START_SEPARATION: f64 = 0.25;

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn stream_seed(seed: u64, slice: usize, branch: Branch) -> u64 {
    let b = match branch {
        Branch::Plus => 0,
        Branch::Minus => 1,
    };
    splitmix64(splitmix64(splitmix64(seed) ^ slice as u64) ^ b)
}

fn i3_value(t: &RMatrix, free: &[f64; 4], branch: Branch) -> f64 {
    let r = lift_ext3_raw(free, branch);
    bilinear(t, &r, &r)
}

/// Pure qutrit vector in the angle chart `z = theta * u`, `|u| = 1`:
/// `R = (sqrt3/2) sin theta` and `eps sqrt(3 - 4R^2) = sqrt3 cos theta`.
/// Unlike the `(R, eps)` chart this has no fold at `R = sqrt3/2`; small
/// `theta` approaches I2 and `theta -> pi` approaches I1.
fn angular_point(z: &[f64; 4]) -> Option<[f64; 8]> {
    let theta = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(theta >= 1e-12) || !theta.is_finite() {
        return None;
    }
    let [u4, u5, u6, u7] = z.map(|v| v / theta);
    let s3 = 3.0_f64.sqrt();
    let c2 = (0.5 * theta).cos().powi(2);
    let radial = 0.5 * s3 * theta.sin();
    Some([
        s3 * c2 * (u4 * u6 + u5 * u7),
        s3 * c2 * (u5 * u6 - u4 * u7),
        0.5 * s3 * c2 * (u4 * u4 + u5 * u5 - u6 * u6 - u7 * u7),
        radial * u4,
        radial * u5,
        radial * u6,
        radial * u7,
        (3.0 * theta.cos() - 1.0) / 4.0,
    ])
}

fn to_angular(free: &[f64; 4], branch: Branch) -> [f64; 4] {
    let radius = free.iter().map(|v| v * v).sum::<f64>().sqrt();
    let half = (radius / MAX_RADIUS).min(1.0).asin();
    let theta = match branch {
        Branch::Plus => half,
        Branch::Minus => std::f64::consts::PI - half,
    };
    free.map(|v| v * theta / radius)
}

/// Back to `(free block, branch)`, folding `theta` into `[0, pi]`.
fn from_angular(z: &[f64; 4]) -> ([f64; 4], Branch) {
    let theta = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut u = z.map(|v| v / theta);
    let mut folded = theta.rem_euclid(2.0 * std::f64::consts::PI);
    if folded > std::f64::consts::PI {
        folded = 2.0 * std::f64::consts::PI - folded;
        u = u.map(|v| -v);
    }
    let branch = if folded.cos() >= 0.0 {
        Branch::Plus
    } else {
        Branch::Minus
    };
    (u.map(|v| v * MAX_RADIUS * folded.sin()), branch)
}

fn polish_objective(t: &RMatrix, z: &[f64; 4]) -> f64 {
    match angular_point(z) {
        Some(r) => bilinear(t, &r, &r),
        None => f64::INFINITY,
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    value: f64,
    free: [f64; 4],
    branch: Branch,
    task: usize,
}

fn sample_task(t: &RMatrix, cfg: &SolverConfig, task: usize) -> Candidate {
    let slice = task / 2;
    let branch = Branch::BOTH[task % 2];
    let radius = (slice + 1) as f64 * MAX_RADIUS / cfg.grid_n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, slice, branch));
    let mut best = Candidate {
        value: f64::INFINITY,
        free: [0.0, 0.0, 0.0, radius],
        branch,
        task,
    };
    for _ in 0..cfg.samples_per_slice {
        let mut x = [0.0; 4];
        for v in x.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x = x.map(|v| v * radius / norm);
        let value = i3_value(t, &x, branch);
        if value < best.value {
            best.value = value;
            best.free = x;
        }
    }
    best
}

struct I3Outcome {
    value: f64,
    point: [f64; 8],
    samples: u64,
    iterations: u64,
    converged: bool,
}

fn polish(t: &RMatrix, cfg: &SolverConfig, start: &Candidate) -> (Candidate, [f64; 8], u64, bool) {
    let f = |z: &[f64; 4]| polish_objective(t, z);
    let step = 0.05 * std::f64::consts::PI;
    let z0 = to_angular(&start.free, start.branch);
    let first = nelder_mead::minimize(f, z0, step, cfg.polish_tol, cfg.max_polish_iters);
    // A fresh simplex around the first answer guards against collapse.
    let second = nelder_mead::minimize(
        f,
        first.point,
        step * 0.1,
        cfg.polish_tol,
        cfg.max_polish_iters,
    );
    let best = if second.value <= first.value {
        &second
    } else {
        &first
    };
    let iterations = first.iterations + second.iterations;
    let Some(r) = angular_point(&best.point).filter(|_| best.value <= start.value) else {
        let r = lift_ext3_raw(&start.free, start.branch);
        return (*start, r, iterations, false);
    };
    let (free, branch) = from_angular(&best.point);
    let out = Candidate {
        value: best.value,
        free,
        branch,
        task: start.task,
    };
    (out, r, iterations, best.converged)
}

/// Best samples of each branch in order, half the starts per branch,
/// skipping those that lift to within `START_SEPARATION` of an earlier pick.
/// Neighbouring slices otherwise hand the polish the same basin repeatedly,
/// and the branch whose minimum hugs `R = sqrt3/2` is sampled only sparsely.
fn distinct_starts(sorted: &[Candidate]) -> Vec<Candidate> {
    let per_branch = POLISH_STARTS / 2;
    let mut picked: Vec<(Candidate, [f64; 8])> = Vec::with_capacity(POLISH_STARTS);
    for branch in Branch::BOTH {
        let mut count = 0;
        for c in sorted.iter().filter(|c| c.branch == branch) {
            if count == per_branch || !c.value.is_finite() {
                break;
            }
            let r = lift_ext3_raw(&c.free, c.branch);
            let near = picked.iter().any(|(_, q)| {
                r.iter().zip(q).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
                    < START_SEPARATION.powi(2)
            });
            if !near {
                picked.push((*c, r));
                count += 1;
            }
        }
    }
    picked.into_iter().map(|(c, _)| c).collect()
}

fn solve_i3(t: &RMatrix, cfg: &SolverConfig) -> I3Outcome {
    let tasks = 2 * cfg.grid_n;
    let mut best: Vec<Candidate> = (0..tasks)
        .into_par_iter()
        .map(|task| sample_task(t, cfg, task))
        .collect();
    best.sort_by(|a, b| a.value.total_cmp(&b.value).then(a.task.cmp(&b.task)));
    let starts = distinct_starts(&best);
    let polished: Vec<(Candidate, [f64; 8], u64, bool)> =
        starts.par_iter().map(|c| polish(t, cfg, c)).collect();
    let iterations = polished.iter().map(|p| p.2).sum();
    let (winner, point, _, converged) = polished
        .iter()
        .copied()
        .min_by(|a, b| {
            a.0.value
                .total_cmp(&b.0.value)
                .then(a.0.task.cmp(&b.0.task))
        })
        .expect("at least one polish start");
    I3Outcome {
        value: winner.value,
        point,
        samples: (tasks * cfg.samples_per_slice) as u64,
        iterations,
        converged,
    }
}

/// Exact minimum over I2: `r = (v, 0, 0, 0, 0, 1/2)` with `||v||^2 = 3/4`.
fn solve_i2(t: &RMatrix) -> ([f64; 8], f64) {
    let h = t.fixed_view::<3, 3>(0, 0).clone_owned();
    let h = RMatrix::from_column_slice(3, 3, h.as_slice());
    let g = RVector::from_vec((0..3).map(|i| 0.5 * t[(i, 7)]).collect());
    let sol = minimize_on_sphere(&h, &g, MAX_RADIUS);
    let mut r = [0.0; 8];
    r[..3].copy_from_slice(sol.point.as_slice());
    r[7] = 0.5;
    // Re-evaluate on the full form so all strata are compared identically.
    let value = bilinear(t, &r, &r);
    (r, value)
}

pub(crate) fn solve(q: &QuadraticForm, cfg: &SolverConfig) -> Result<BoundResult> {
    let basis = QuditBasis::shared(3)?;
    let t = q.t();

    let mut r1 = [0.0; 8];
    r1[7] = -1.0;
    let v1 = t[(7, 7)];
    let (r2, v2) = solve_i2(t);
    let i3 = solve_i3(t, cfg);
    let r3 = i3.point;

    let best = v1.min(v2).min(i3.value);
    let (r, ell, stratum) = if v1 <= best + TIE_TOL {
        (r1, v1, ExtStratum::I1)
    } else if v2 <= best + TIE_TOL {
        (r2, v2, ExtStratum::I2)
    } else {
        let cv = CoherenceVector::new(3, r3.to_vec())?;
        let stratum = classify_ext3(&cv)?;
        (r3, i3.value, stratum)
    };
    let branch = match stratum {
        ExtStratum::I3 { branch, .. } => Some(branch),
        _ => None,
    };
    let diagnostics = Diagnostics {
        samples: i3.samples,
        polish_iterations: i3.iterations,
        branch,
        stratum_minima: Some([v1, v2, i3.value]),
        converged: i3.converged || !matches!(stratum, ExtStratum::I3 { .. }),
        ..Default::default()
    };
    let r_min = CoherenceVector::new(3, r.to_vec())?;
    finalize(
        q,
        &basis,
        ell,
        r_min,
        SolutionStratum::Qutrit { stratum },
        diagnostics,
    )
}
