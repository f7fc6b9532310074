//! Named observable tuples with known minimal variance sums.

use crate::linalg::{c, CMatrix};

fn mat3(rows: [[(f64, f64); 3]; 3]) -> CMatrix {
    CMatrix::from_fn(3, 3, |i, j| c(rows[i][j].0, rows[i][j].1))
}

const Z: (f64, f64) = (0.0, 0.0);

fn re(x: f64) -> (f64, f64) {
    (x, 0.0)
}

fn im(x: f64) -> (f64, f64) {
    (0.0, x)
}

/// A reference instance: observables plus the expected minimum.
#[derive(Debug, Clone)]
pub struct ReferenceCase {
    pub name: &'static str,
    pub observables: Vec<CMatrix>,
    pub m: f64,
    /// Expected `l` when it is known in closed form.
    pub ell: Option<f64>,
}

/// `diag(-1, 0, 1)`.
pub fn diag_m101() -> CMatrix {
    mat3([[re(-1.0), Z, Z], [Z, Z, Z], [Z, Z, re(1.0)]])
}

/// Pair with zero variance sum, attained at `diag(1, 0, 0)`.
pub fn commuting_block_pair() -> ReferenceCase {
    let b = mat3([[Z, Z, Z], [Z, Z, im(1.0)], [Z, im(-1.0), Z]]);
    ReferenceCase {
        name: "block-pair",
        observables: vec![diag_m101(), b],
        m: 0.0,
        ell: Some(-2.0),
    }
}

/// Real off-diagonal Gell-Mann matrices `G4` and `G6`.
pub fn gell_mann_46() -> ReferenceCase {
    let g4 = mat3([[Z, Z, re(1.0)], [Z, Z, Z], [re(1.0), Z, Z]]);
    let g6 = mat3([[Z, Z, Z], [Z, Z, re(1.0)], [Z, re(1.0), Z]]);
    ReferenceCase {
        name: "gell-mann-4-6",
        observables: vec![g4, g6],
        m: 7.0 / 16.0,
        ell: Some(-43.0 / 32.0),
    }
}

/// Spin-1 angular momentum components.
pub fn angular_momentum() -> Vec<CMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let lx = mat3([[Z, re(s), Z], [re(s), Z, re(s)], [Z, re(s), Z]]);
    let ly = mat3([[Z, im(-s), Z], [im(s), Z, im(-s)], [Z, im(s), Z]]);
    let lz = mat3([[re(1.0), Z, Z], [Z, Z, Z], [Z, Z, re(-1.0)]]);
    vec![lx, ly, lz]
}

pub fn spin_one() -> ReferenceCase {
    ReferenceCase {
        name: "spin-1",
        observables: angular_momentum(),
        m: 1.0,
        ell: None,
    }
}

/// `B = [[0,1,0],[1,0,i],[0,-i,0]]`, the partner in the `h(t)` family.
pub fn ht_partner() -> CMatrix {
    mat3([[Z, re(1.0), Z], [re(1.0), Z, im(1.0)], [Z, im(-1.0), Z]])
}

/// `A_t = [[-1,0,t],[0,0,0],[t,0,1]]`.
pub fn ht_observable(t: f64) -> CMatrix {
    mat3([[re(-1.0), Z, re(t)], [Z, Z, Z], [re(t), Z, re(1.0)]])
}

pub fn ht_pair(t: f64) -> Vec<CMatrix> {
    vec![ht_observable(t), ht_partner()]
}

pub fn fifteen_32() -> ReferenceCase {
    ReferenceCase {
        name: "fifteen-32",
        observables: ht_pair(0.0),
        m: 15.0 / 32.0,
        ell: Some(-147.0 / 64.0),
    }
}

/// A generic pair with no closed-form minimum.
pub fn generic_pair() -> ReferenceCase {
    let a = mat3([
        [re(1.0), Z, re(1.0)],
        [Z, re(-1.0), im(-1.0)],
        [re(1.0), im(1.0), Z],
    ]);
    let b = mat3([
        [Z, re(1.0), im(-1.0)],
        [re(1.0), Z, re(1.0)],
        [im(1.0), re(1.0), Z],
    ]);
    ReferenceCase {
        name: "generic-pair",
        observables: vec![a, b],
        m: 0.427938,
        ell: None,
    }
}

/// Published approximate minimizer for [`generic_pair`].
pub fn generic_pair_state() -> CMatrix {
    let (a, b, d) = (
        0.147_423_877_113_399_22,
        0.556_286_937_902_738_9,
        0.296_289_184_983_861_7,
    );
    let (x, y, z) = (
        0.286_373_841_635_653_77,
        0.208_997_847_828_847_37,
        0.405_982_516_185_574_9,
    );
    mat3([
        [re(a), im(x), re(-y)],
        [im(-x), re(b), im(z)],
        [re(-y), im(-z), re(d)],
    ])
}

/// All qutrit reference cases.
pub fn qutrit_cases() -> Vec<ReferenceCase> {
    vec![
        commuting_block_pair(),
        gell_mann_46(),
        spin_one(),
        fifteen_32(),
        generic_pair(),
    ]
}
