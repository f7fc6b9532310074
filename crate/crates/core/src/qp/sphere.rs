//! Global minimizer of a quadratic on a sphere (the trust-region boundary
//! subproblem): `min v^T H v + 2 g^T v` subject to `||v|| = radius`.
//!
//! Stationary points satisfy `(H - mu I) v = -g`; the global minimizer has
//! `mu <= lambda_min(H)`. We diagonalize `H`, bisect the secular equation
//! `||v(mu)|| = radius` on `mu < lambda_min`, and treat the hard case
//! (`g` orthogonal to the bottom eigenspace) explicitly.

use crate::linalg::{symmetric_eigh, RMatrix, RVector};

#[derive(Debug, Clone)]
pub struct SphereMinimum {
    pub point: RVector,
    pub value: f64,
    pub multiplier: f64,
    pub hard_case: bool,
}

const EIG_GAP: f64 = 1e-12;

pub fn minimize_on_sphere(h: &RMatrix, g: &RVector, radius: f64) -> SphereMinimum {
    let dim = h.nrows();
    let (lambda, q) = symmetric_eigh(h);
    let gq = q.transpose() * g;
    let lam_min = lambda[0];
    let scale = 1.0 + lambda.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let bottom: Vec<bool> = lambda
        .iter()
        .map(|l| l - lam_min <= EIG_GAP * scale)
        .collect();
    let g_bottom_sq: f64 = (0..dim).filter(|&i| bottom[i]).map(|i| gq[i] * gq[i]).sum();
    let g_norm = gq.norm();

    let value = |v: &RVector| (v.transpose() * h * v)[(0, 0)] + 2.0 * g.dot(v);

    let mut candidates: Vec<SphereMinimum> = Vec::with_capacity(2);

    if g_norm == 0.0 {
        let v = q.column(0) * radius;
        let v = RVector::from_column_slice(v.as_slice());
        let val = value(&v);
        return SphereMinimum {
            point: v,
            value: val,
            multiplier: lam_min,
            hard_case: true,
        };
    }

    // Easy case: bisection on mu in (lam_min - ||g||/radius, lam_min).
    let include = |i: usize, skip_bottom: bool| !(skip_bottom && bottom[i]);
    let solve_secular = |skip_bottom: bool| -> (f64, RVector) {
        let norm_at = |mu: f64| -> f64 {
            (0..dim)
                .filter(|&i| include(i, skip_bottom))
                .map(|i| {
                    let d = lambda[i] - mu;
                    gq[i] * gq[i] / (d * d)
                })
                .sum::<f64>()
                .sqrt()
        };
        let mut lo = lam_min - g_norm / radius - 1e-12 * scale;
        let mut hi = lam_min;
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if norm_at(mid) > radius {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mu = lo;
        let coords = RVector::from_fn(dim, |i, _| {
            if include(i, skip_bottom) {
                -gq[i] / (lambda[i] - mu)
            } else {
                0.0
            }
        });
        (mu, coords)
    };

    if g_bottom_sq > 0.0 {
        let (mu, coords) = solve_secular(false);
        // rescale to absorb the residual bisection error in the norm
        let n = coords.norm();
        let coords = if n > 0.0 {
            coords * (radius / n)
        } else {
            coords
        };
        let v = &q * coords;
        candidates.push(SphereMinimum {
            value: value(&v),
            point: v,
            multiplier: mu,
            hard_case: false,
        });
    }

    if g_bottom_sq <= 1e-20 * g_norm * g_norm {
        // Hard case: mu = lam_min, fill the remaining norm along a bottom eigenvector.
        let partial = RVector::from_fn(dim, |i, _| {
            if bottom[i] {
                0.0
            } else {
                -gq[i] / (lambda[i] - lam_min)
            }
        });
        let pn = partial.norm();
        let coords = if pn <= radius {
            let mut c = partial;
            let bottom_idx = (0..dim).find(|&i| bottom[i]).unwrap_or(0);
            c[bottom_idx] += (radius * radius - pn * pn).max(0.0).sqrt();
            c
        } else {
            let (_, c) = solve_secular(true);
            let n = c.norm();
            if n > 0.0 {
                c * (radius / n)
            } else {
                c
            }
        };
        let v = &q * coords;
        candidates.push(SphereMinimum {
            value: value(&v),
            point: v,
            multiplier: lam_min,
            hard_case: true,
        });
    }

    candidates
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one candidate")
}
