use nalgebra::Complex;
use proptest::prelude::*;
use qvar_core::bloch::{self, CoherenceVector};
use qvar_core::generators::{build_generators, build_star_tensor, GeneratorSet, QuditBasis};
use qvar_core::linalg::{CMatrix, RMatrix};

include!("support/qutrit_star_table.rs");

fn combo(gens: &GeneratorSet, x: &[f64]) -> CMatrix {
    gens.combine(x).unwrap()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[test]
fn generators_are_traceless_and_orthonormal() {
    for n in 2..=5 {
        let g = build_generators(n).unwrap();
        assert_eq!(g.len(), n * n - 1);
        for i in 0..g.len() {
            assert!(g.generator(i).trace().norm() <= 1e-12);
            let herm = g.generator(i) - g.generator(i).adjoint();
            assert!(herm.norm() == 0.0);
            for j in 0..g.len() {
                let ip = (g.generator(i).adjoint() * g.generator(j)).trace();
                let want = if i == j { 2.0 } else { 0.0 };
                assert!(
                    (ip.re - want).abs() <= 1e-12 && ip.im.abs() <= 1e-12,
                    "n={n} <G{i},G{j}>"
                );
            }
        }
    }
}

#[test]
fn casimir_identity() {
    for n in 2..=5 {
        let g = build_generators(n).unwrap();
        let sum = g
            .generators()
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, x| acc + x * x);
        let want = CMatrix::identity(n, n) * Complex::new(2.0 * (n as f64 - 1.0 / n as f64), 0.0);
        assert!((sum - want).norm() <= 1e-10, "n={n}");
    }
}

#[test]
fn structure_constant_symmetries() {
    for n in 2..=4 {
        let g = build_generators(n).unwrap();
        let m = g.len();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let d = g.d(i, j, k);
                    let f = g.f(i, j, k);
                    for (a, b, c) in [(j, i, k), (i, k, j), (k, j, i)] {
                        assert!((g.d(a, b, c) - d).abs() <= 1e-12);
                        assert!((g.f(a, b, c) + f).abs() <= 1e-12);
                    }
                    // independent recomputation from the matrices
                    let t = (g.generator(i) * g.generator(j) * g.generator(k)).trace();
                    assert!((0.5 * t.re - d).abs() <= 1e-12);
                    assert!((0.5 * t.im - f).abs() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn gell_mann_structure_constant_values() {
    let g = build_generators(3).unwrap();
    let s3 = 3f64.sqrt();
    let d = |i: usize, j: usize, k: usize| g.d(i - 1, j - 1, k - 1);
    let f = |i: usize, j: usize, k: usize| g.f(i - 1, j - 1, k - 1);
    let d_values = [
        ((1, 1, 8), 1.0 / s3),
        ((2, 2, 8), 1.0 / s3),
        ((3, 3, 8), 1.0 / s3),
        ((8, 8, 8), -1.0 / s3),
        ((1, 4, 6), 0.5),
        ((1, 5, 7), 0.5),
        ((2, 4, 7), -0.5),
        ((2, 5, 6), 0.5),
        ((3, 4, 4), 0.5),
        ((3, 5, 5), 0.5),
        ((3, 6, 6), -0.5),
        ((3, 7, 7), -0.5),
        ((4, 4, 8), -0.5 / s3),
        ((5, 5, 8), -0.5 / s3),
        ((6, 6, 8), -0.5 / s3),
        ((7, 7, 8), -0.5 / s3),
    ];
    for ((i, j, k), v) in d_values {
        assert!((d(i, j, k) - v).abs() <= 1e-12, "d_{i}{j}{k}");
    }
    let f_values = [
        ((1, 2, 3), 1.0),
        ((1, 4, 7), 0.5),
        ((1, 6, 5), 0.5),
        ((2, 4, 6), 0.5),
        ((2, 5, 7), 0.5),
        ((3, 4, 5), 0.5),
        ((3, 7, 6), 0.5),
        ((4, 5, 8), s3 / 2.0),
        ((6, 7, 8), s3 / 2.0),
    ];
    for ((i, j, k), v) in f_values {
        assert!((f(i, j, k) - v).abs() <= 1e-12, "f_{i}{j}{k}");
    }
}

#[test]
fn star_tensor_is_traceless_and_symmetric() {
    for n in 2..=5 {
        let st = build_star_tensor(&build_generators(n).unwrap());
        for dk in st.matrices() {
            assert!(dk.trace().abs() <= 1e-12);
            assert_eq!(dk, &dk.transpose());
            if n == 2 {
                assert!(dk.iter().all(|&v| v == 0.0));
            }
        }
    }
}

#[test]
fn qutrit_star_tensor_matches_published_tables() {
    let st = build_star_tensor(&build_generators(3).unwrap());
    let mut want = vec![RMatrix::zeros(8, 8); 8];
    for &(k, i, j, v) in QUTRIT_STAR_TABLE {
        want[k - 1][(i - 1, j - 1)] = v;
        want[k - 1][(j - 1, i - 1)] = v;
    }
    for k in 0..8 {
        for i in 0..8 {
            for j in 0..8 {
                assert!(
                    (st.matrix(k)[(i, j)] - want[k][(i, j)]).abs() <= 1e-12,
                    "D_{}[{},{}]",
                    k + 1,
                    i + 1,
                    j + 1
                );
            }
        }
    }
}

#[test]
fn star_tensor_rank() {
    for n in [3, 5] {
        let st = build_star_tensor(&build_generators(n).unwrap());
        assert_eq!(st.flattened_rank(), n * n - 1, "n={n}");
    }
    // even dimensions: informational only
    for n in [4, 6] {
        let st = build_star_tensor(&build_generators(n).unwrap());
        println!(
            "n={n}: rank of flattened D_k = {} of {}",
            st.flattened_rank(),
            n * n - 1
        );
    }
}

fn vec_strategy(len: usize, scale: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-scale..scale, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn fourth_power_trace(x in vec_strategy(8, 2.0)) {
        let g = build_generators(3).unwrap();
        let xg = combo(&g, &x);
        let t = (&xg * &xg * &xg * &xg).trace().re;
        let nx = dot(&x, &x);
        prop_assert!((t - 2.0 * nx * nx).abs() <= 1e-9 * (1.0 + nx * nx));
    }

    #[test]
    fn qutrit_star_norm(x in vec_strategy(8, 2.0)) {
        let st = build_star_tensor(&build_generators(3).unwrap());
        let xx = st.star(&x, &x).unwrap();
        let nx = dot(&x, &x);
        prop_assert!((xx.norm() - nx).abs() <= 1e-9 * nx.max(1e-300));
    }

    #[test]
    fn star_is_commutative(x in vec_strategy(15, 1.0), y in vec_strategy(15, 1.0)) {
        let st = build_star_tensor(&build_generators(4).unwrap());
        let a = st.star(&x, &y).unwrap();
        let b = st.star(&y, &x).unwrap();
        prop_assert!((a - b).norm() <= 1e-12);
    }
}

fn star_norm_identity_holds(n: usize, x: &[f64], y: &[f64]) -> (f64, f64) {
    let g = build_generators(n).unwrap();
    let st = build_star_tensor(&g);
    let nf = n as f64;
    let xy = st.star(x, y).unwrap();
    let lhs = xy.norm_squared();
    let p = combo(&g, x) * combo(&g, y);
    let tr = (&p * &p).trace().re;
    let xx = st.star(x, x).unwrap();
    let yy = st.star(y, y).unwrap();
    let c = nf * (nf - 1.0) / (8.0 * (nf - 2.0).powi(2));
    let rhs = c
        * (tr
            + 4.0 / nf * dot(x, x) * dot(y, y)
            + 4.0 * (nf - 2.0).powi(2) / (nf * (nf - 1.0)) * xx.dot(&yy)
            - 8.0 / nf * dot(x, y).powi(2));
    (lhs, rhs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_norm_identity_n3(x in vec_strategy(8, 1.0), y in vec_strategy(8, 1.0)) {
        let (l, r) = star_norm_identity_holds(3, &x, &y);
        prop_assert!((l - r).abs() <= 1e-8 * l.abs().max(1e-3), "{l} vs {r}");
    }

    #[test]
    fn star_norm_identity_n4(x in vec_strategy(15, 1.0), y in vec_strategy(15, 1.0)) {
        let (l, r) = star_norm_identity_holds(4, &x, &y);
        prop_assert!((l - r).abs() <= 1e-8 * l.abs().max(1e-3), "{l} vs {r}");
    }

    #[test]
    fn star_norm_identity_n5(x in vec_strategy(24, 1.0), y in vec_strategy(24, 1.0)) {
        let (l, r) = star_norm_identity_holds(5, &x, &y);
        prop_assert!((l - r).abs() <= 1e-8 * l.abs().max(1e-3), "{l} vs {r}");
    }

    #[test]
    fn qutrit_determinant_and_purity(x in vec_strategy(8, 1.0)) {
        let basis = QuditBasis::shared(3).unwrap();
        let r = CoherenceVector::new(3, x.clone()).unwrap();
        let rho = r.density(basis.generators()).unwrap();
        let xx = basis.star().star(&x, &x).unwrap();
        let det = (1.0 + 2.0 * xx.dot(&nalgebra::DVector::from_vec(x.clone())) - 3.0 * dot(&x, &x)) / 27.0;
        prop_assert!((rho.determinant().re - det).abs() <= 1e-10);
        let purity = (&rho * &rho).trace().re;
        prop_assert!((purity - (1.0 + 2.0 * dot(&x, &x)) / 3.0).abs() <= 1e-10);
    }
}

#[test]
fn star_shortcuts_from_tables() {
    let basis = QuditBasis::shared(3).unwrap();
    let mut e8 = vec![0.0; 8];
    e8[7] = 1.0;
    let s = bloch::star(&e8, &e8, basis.star()).unwrap();
    assert!((s[7] + 1.0).abs() < 1e-15);
}
