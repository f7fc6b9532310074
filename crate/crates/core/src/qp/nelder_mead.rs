//! Derivative-free simplex descent used to polish sampled candidates.

#[derive(Debug, Clone)]
pub struct SimplexResult<const D: usize> {
    pub point: [f64; D],
    pub value: f64,
    pub iterations: u64,
    pub converged: bool,
}

/// Minimizes `f` from `start` with an axis-aligned initial simplex of edge
/// `step`. Stops when the spread of simplex values drops below `tol` or
/// after `max_iter` iterations.
pub fn minimize<const D: usize, F>(
    f: F,
    start: [f64; D],
    step: f64,
    tol: f64,
    max_iter: u64,
) -> SimplexResult<D>
where
    F: Fn(&[f64; D]) -> f64,
{
    let mut simplex: Vec<([f64; D], f64)> = Vec::with_capacity(D + 1);
    simplex.push((start, f(&start)));
    for i in 0..D {
        let mut p = start;
        p[i] += step;
        simplex.push((p, f(&p)));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[D].1 - simplex[0].1;
        if spread.abs() <= tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = [0.0; D];
        for (p, _) in &simplex[..D] {
            for k in 0..D {
                centroid[k] += p[k] / D as f64;
            }
        }
        let worst = simplex[D];
        let along = |t: f64| -> [f64; D] {
            let mut q = [0.0; D];
            for k in 0..D {
                q[k] = centroid[k] + t * (worst.0[k] - centroid[k]);
            }
            q
        };

        let refl = along(-1.0);
        let f_refl = f(&refl);
        if f_refl < simplex[0].1 {
            let exp = along(-2.0);
            let f_exp = f(&exp);
            simplex[D] = if f_exp < f_refl {
                (exp, f_exp)
            } else {
                (refl, f_refl)
            };
            continue;
        }
        if f_refl < simplex[D - 1].1 {
            simplex[D] = (refl, f_refl);
            continue;
        }
        let (contr, f_contr) = if f_refl < worst.1 {
            let p = along(-0.5);
            (p, f(&p))
        } else {
            let p = along(0.5);
            (p, f(&p))
        };
        if f_contr < worst.1.min(f_refl) {
            simplex[D] = (contr, f_contr);
            continue;
        }
        // shrink towards the best vertex
        let best = simplex[0].0;
        for vertex in simplex.iter_mut().skip(1) {
            for k in 0..D {
                vertex.0[k] = best[k] + 0.5 * (vertex.0[k] - best[k]);
            }
            vertex.1 = f(&vertex.0);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexResult {
        point: simplex[0].0,
        value: simplex[0].1,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock_2d() {
        let f = |x: &[f64; 2]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = minimize(f, [-1.2, 1.0], 0.1, 1e-14, 5000);
        assert!(r.converged);
        assert!((r.point[0] - 1.0).abs() < 1e-4);
        assert!((r.point[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn quadratic_4d() {
        let f = |x: &[f64; 4]| {
            x.iter()
                .enumerate()
                .map(|(i, v)| (i as f64 + 1.0) * (v - 0.3).powi(2))
                .sum()
        };
        let r = minimize(f, [0.0; 4], 0.05, 1e-16, 5000);
        assert!(r.value < 1e-12);
    }
}
