//! Golden-value suites shared by `qvar verify` and the acceptance tests.

use std::time::{Duration, Instant};

use nalgebra::Complex;
use qvar_core::cases;
use qvar_core::generators::QuditBasis;
use qvar_core::linalg::CMatrix;
use qvar_core::oracle::oracle_min;
use qvar_core::qp::{
    formal_variance, pairwise_gellmann_table, reference_ht, solve_general, SolverConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::CliResult;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seconds: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: f64, computed: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            expected,
            computed,
            tolerance,
            passed: (expected - computed).abs() <= tolerance,
            seconds: 0.0,
        }
    }

    pub fn timed(mut self, elapsed: Duration) -> Self {
        self.seconds = elapsed.as_secs_f64();
        self
    }

    /// Fails the check if it ran longer than `limit`.
    pub fn within(mut self, limit: Duration) -> Self {
        if self.seconds > limit.as_secs_f64() {
            self.passed = false;
        }
        self
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:<44} expected {:>14.9} computed {:>14.9} tol {:.0e} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.expected,
            self.computed,
            self.tolerance,
            self.seconds
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Qubit,
    Qutrit,
    Table,
    Ht,
    All,
}

pub const QUTRIT_TIME_LIMIT: Duration = Duration::from_secs(30);
pub const TABLE_TIME_LIMIT: Duration = Duration::from_secs(600);

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let m = CMatrix::from_fn(n, n, |_, _| {
        Complex::new(
            StandardNormal.sample(&mut *rng),
            StandardNormal.sample(&mut *rng),
        )
    });
    (&m + m.adjoint()) * Complex::new(0.5, 0.0)
}

/// `Tr O - lambda_max(O)` for `O = a a^T + b b^T`, from the 2x2 Gram matrix.
fn gram_bound(a: &[f64], b: &[f64]) -> f64 {
    let p: f64 = a.iter().map(|x| x * x).sum();
    let q: f64 = b.iter().map(|x| x * x).sum();
    let r: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let top = 0.5 * (p + q) + (0.25 * (p - q).powi(2) + r * r).sqrt();
    p + q - top
}

/// Pauli coefficients `a_k = Tr(A sigma_k)/2`, written out by hand.
fn pauli_coefficients(a: &CMatrix) -> [f64; 3] {
    [
        a[(0, 1)].re,
        -a[(0, 1)].im,
        0.5 * (a[(0, 0)].re - a[(1, 1)].re),
    ]
}

pub fn qubit_suite(cases: usize, seed: u64) -> CliResult<Vec<Check>> {
    let cfg = SolverConfig {
        seed,
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_closed = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let start = Instant::now();
    for i in 0..cases {
        let a = random_hermitian(&mut rng, 2);
        let b = random_hermitian(&mut rng, 2);
        let m = solve_general(&[a.clone(), b.clone()], &cfg)?.m;
        let closed = gram_bound(&pauli_coefficients(&a), &pauli_coefficients(&b));
        worst_closed = worst_closed.max((m - closed).abs());
        let o = oracle_min(&[a, b], 16, seed.wrapping_add(i as u64))?;
        worst_oracle = worst_oracle.max((m - o.value).abs());
    }
    let elapsed = start.elapsed();
    Ok(vec![
        Check::new(
            format!("qubit closed form, max error over {cases}"),
            0.0,
            worst_closed,
            1e-12,
        )
        .timed(elapsed),
        Check::new(
            format!("qubit vs oracle, max error over {cases}"),
            0.0,
            worst_oracle,
            1e-8,
        )
        .timed(elapsed),
    ])
}

pub fn qutrit_suite(cfg: &SolverConfig) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    let tolerance = |name: &str| {
        if name == "fifteen-32" || name == "generic-pair" {
            1e-3
        } else {
            1e-4
        }
    };
    for case in cases::qutrit_cases() {
        let start = Instant::now();
        let r = solve_general(&case.observables, cfg)?;
        let elapsed = start.elapsed();
        let tol = tolerance(case.name);
        out.push(
            Check::new(format!("{} m", case.name), case.m, r.m, tol)
                .timed(elapsed)
                .within(QUTRIT_TIME_LIMIT),
        );
        if let Some(ell) = case.ell {
            out.push(Check::new(format!("{} ell", case.name), ell, r.ell, tol).timed(elapsed));
        }
        if case.name == "block-pair" {
            let mut worst = 0.0f64;
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                    worst = worst.max((r.rho_min[(i, j)] - Complex::new(want, 0.0)).norm());
                }
            }
            out.push(Check::new(
                "block-pair rho_min = diag(1,0,0), max entry error",
                0.0,
                worst,
                1e-4,
            ));
        }
        if case.name == "generic-pair" {
            let rho = cases::generic_pair_state();
            let at_state: f64 = case
                .observables
                .iter()
                .map(|a| formal_variance(a, &rho))
                .sum();
            out.push(Check::new(
                "generic-pair sum of variances at published state",
                r.m,
                at_state,
                1e-4,
            ));
        }
    }
    Ok(out)
}

/// The twelve pairs with nonzero bound 7/16 (1-based).
pub const NONZERO_PAIRS: [(usize, usize); 12] = [
    (1, 4),
    (1, 5),
    (1, 6),
    (1, 7),
    (2, 4),
    (2, 5),
    (2, 6),
    (2, 7),
    (4, 6),
    (4, 7),
    (5, 6),
    (5, 7),
];

pub fn table_suite(cfg: &SolverConfig) -> CliResult<Vec<Check>> {
    let start = Instant::now();
    let table = pairwise_gellmann_table(cfg)?;
    let elapsed = start.elapsed();
    let mut out = Vec::new();
    for i in 1..=8 {
        for j in (i + 1)..=8 {
            let want = if NONZERO_PAIRS.contains(&(i, j)) {
                7.0 / 16.0
            } else {
                0.0
            };
            out.push(Check::new(
                format!("m({i},{j})"),
                want,
                table[i - 1][j - 1],
                1e-4,
            ));
        }
    }
    out.push(
        Check::new("table wall time within limit", 0.0, 0.0, 0.0)
            .timed(elapsed)
            .within(TABLE_TIME_LIMIT),
    );
    Ok(out)
}

pub fn ht_suite(cfg: &SolverConfig) -> CliResult<Vec<Check>> {
    (0..21)
        .map(|k| {
            let t = -2.0 + 0.2 * k as f64;
            let start = Instant::now();
            let m = solve_general(&cases::ht_pair(t), cfg)?.m;
            Ok(Check::new(format!("h({t:+.1})"), reference_ht(t), m, 2e-3).timed(start.elapsed()))
        })
        .collect()
}

pub fn run_suite(suite: Suite, cfg: &SolverConfig) -> CliResult<Vec<Check>> {
    Ok(match suite {
        Suite::Qubit => qubit_suite(100, cfg.seed)?,
        Suite::Qutrit => qutrit_suite(cfg)?,
        Suite::Table => table_suite(cfg)?,
        Suite::Ht => ht_suite(cfg)?,
        Suite::All => {
            let mut all = qubit_suite(100, cfg.seed)?;
            all.extend(qutrit_suite(cfg)?);
            all.extend(table_suite(cfg)?);
            all.extend(ht_suite(cfg)?);
            all
        }
    })
}

/// Pauli matrices, for callers that do not want to build a basis.
pub fn paulis() -> Vec<CMatrix> {
    QuditBasis::shared(2)
        .map(|b| b.generators().generators().to_vec())
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_bound_examples() {
        assert!((gram_bound(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]) - 1.0).abs() < 1e-15);
        assert!(gram_bound(&[0.6, 0.0, 0.8], &[0.6, 0.0, 0.8]).abs() < 1e-15);
    }

    #[test]
    fn pauli_coefficients_of_paulis() {
        let p = paulis();
        for k in 0..3 {
            let c = pauli_coefficients(&p[k]);
            for j in 0..3 {
                assert_eq!(c[j], if j == k { 1.0 } else { 0.0 });
            }
        }
    }
}
