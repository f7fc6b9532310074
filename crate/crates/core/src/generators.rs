//! Generalized Gell-Mann generators of su(n), their structure constants and
//! the star-product tensor built from the symmetric constants.
//!
//! Ordering of the generators: for every column `m = 2..=n` (1-based) we emit
//! the symmetric and antisymmetric off-diagonal pair for each row `j < m`,
//! followed by the diagonal generator
//! `sqrt(2/((m-1)m)) * diag(1, .., 1, -(m-1), 0, .., 0)`.
//! With this order `n = 2` yields the Pauli matrices and `n = 3` the eight
//! Gell-Mann matrices in their textbook order.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::linalg::{c, numerical_rank, CMatrix, RMatrix, RVector};

/// The `n^2 - 1` generators of su(n) with `Tr(G_i G_j) = 2 delta_ij`, plus the
/// totally symmetric (`d`) and antisymmetric (`f`) structure constants.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    n: usize,
    generators: Vec<CMatrix>,
    d: Vec<f64>,
    f: Vec<f64>,
}

impl GeneratorSet {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        let generators = canonical_generators(n);
        let (d, f) = structure_constants(&generators);
        Ok(Self {
            n,
            generators,
            d,
            f,
        })
    }

    /// Qudit dimension `n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of generators, `n^2 - 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// Generator `G_{k+1}` (0-based index `k`).
    pub fn generator(&self, k: usize) -> &CMatrix {
        &self.generators[k]
    }

    /// `d_ijk = 1/2 Re Tr(G_i G_j G_k)`, 0-based indices.
    pub fn d(&self, i: usize, j: usize, k: usize) -> f64 {
        let m = self.len();
        self.d[(i * m + j) * m + k]
    }

    /// `f_ijk = 1/2 Im Tr(G_i G_j G_k)`, 0-based indices.
    pub fn f(&self, i: usize, j: usize, k: usize) -> f64 {
        let m = self.len();
        self.f[(i * m + j) * m + k]
    }

    /// The linear combination `sum_k coeffs[k] G_k`.
    pub fn combine(&self, coeffs: &[f64]) -> Result<CMatrix> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: coeffs.len(),
            });
        }
        let mut out = CMatrix::zeros(self.n, self.n);
        for (g, &a) in self.generators.iter().zip(coeffs) {
            if a != 0.0 {
                out += g.map(|z| z * a);
            }
        }
        Ok(out)
    }
}

/// Builds the canonical generator set for dimension `n`.
pub fn build_generators(n: usize) -> Result<GeneratorSet> {
    GeneratorSet::new(n)
}

fn canonical_generators(n: usize) -> Vec<CMatrix> {
    let zero = c(0.0, 0.0);
    let mut out = Vec::with_capacity(n * n - 1);
    for col in 1..n {
        for row in 0..col {
            let mut sym = CMatrix::from_element(n, n, zero);
            sym[(row, col)] = c(1.0, 0.0);
            sym[(col, row)] = c(1.0, 0.0);
            out.push(sym);

            let mut anti = CMatrix::from_element(n, n, zero);
            anti[(row, col)] = c(0.0, -1.0);
            anti[(col, row)] = c(0.0, 1.0);
            out.push(anti);
        }
        // col is 0-based, so this is the diagonal generator of size m = col + 1.
        let m = (col + 1) as f64;
        let scale = (2.0 / ((m - 1.0) * m)).sqrt();
        let mut diag = CMatrix::from_element(n, n, zero);
        for i in 0..col {
            diag[(i, i)] = c(scale, 0.0);
        }
        diag[(col, col)] = c(-(m - 1.0) * scale, 0.0);
        out.push(diag);
    }
    out
}

fn structure_constants(gens: &[CMatrix]) -> (Vec<f64>, Vec<f64>) {
    let m = gens.len();
    let n = gens.first().map_or(0, |g| g.nrows());
    let mut d = vec![0.0; m * m * m];
    let mut f = vec![0.0; m * m * m];
    for i in 0..m {
        for j in 0..m {
            let prod = &gens[i] * &gens[j];
            for k in 0..m {
                let g = &gens[k];
                let mut tr = Complex::new(0.0, 0.0);
                for a in 0..n {
                    for b in 0..n {
                        let gb = g[(b, a)];
                        if gb.re != 0.0 || gb.im != 0.0 {
                            tr += prod[(a, b)] * gb;
                        }
                    }
                }
                let idx = (i * m + j) * m + k;
                d[idx] = 0.5 * tr.re;
                f[idx] = 0.5 * tr.im;
            }
        }
    }
    (d, f)
}

/// The matrices `D_1 .. D_{n^2-1}` defining the symmetric star product
/// `(x * y)_k = <x, D_k y>`.
#[derive(Debug, Clone)]
pub struct StarTensor {
    n: usize,
    mats: Vec<RMatrix>,
}

impl StarTensor {
    /// `(D_k)_ij = sqrt(n(n-1)/2) / (n-2) * d_ijk` for `n > 2`; all zero for qubits.
    pub fn from_generators(gens: &GeneratorSet) -> Self {
        let n = gens.dim();
        let m = gens.len();
        let mats = if n == 2 {
            vec![RMatrix::zeros(m, m); m]
        } else {
            let nf = n as f64;
            let scale = (nf * (nf - 1.0) / 2.0).sqrt() / (nf - 2.0);
            (0..m)
                .map(|k| {
                    let mut dk = RMatrix::zeros(m, m);
                    for i in 0..m {
                        for j in i..m {
                            // average the two mirrored entries so D_k is exactly symmetric
                            let v = 0.5 * scale * (gens.d(i, j, k) + gens.d(j, i, k));
                            let v = clean(v);
                            dk[(i, j)] = v;
                            dk[(j, i)] = v;
                        }
                    }
                    dk
                })
                .collect()
        };
        Self { n, mats }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn matrices(&self) -> &[RMatrix] {
        &self.mats
    }

    /// `D_{k+1}` (0-based index `k`).
    pub fn matrix(&self, k: usize) -> &RMatrix {
        &self.mats[k]
    }

    /// Star product `x * y`, component `k` equal to `x^T D_k y`.
    pub fn star(&self, x: &[f64], y: &[f64]) -> Result<RVector> {
        let m = self.len();
        for v in [x, y] {
            if v.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: v.len(),
                });
            }
        }
        Ok(RVector::from_iterator(
            m,
            self.mats.iter().map(|dk| bilinear(dk, x, y)),
        ))
    }

    /// Rank of the `(n^2-1) x (n^2-1)^2` matrix whose rows are the flattened `D_k`.
    pub fn flattened_rank(&self) -> usize {
        let m = self.len();
        let stacked = RMatrix::from_fn(m, m * m, |k, idx| self.mats[k][(idx / m, idx % m)]);
        numerical_rank(&stacked, 1e-10)
    }
}

/// Builds the star tensor for a generator set.
pub fn build_star_tensor(gens: &GeneratorSet) -> StarTensor {
    StarTensor::from_generators(gens)
}

pub(crate) fn bilinear(m: &RMatrix, x: &[f64], y: &[f64]) -> f64 {
    let k = x.len();
    let mut acc = 0.0;
    for i in 0..k {
        let xi = x[i];
        if xi == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for j in 0..k {
            row += m[(i, j)] * y[j];
        }
        acc += xi * row;
    }
    acc
}

// Snap round-off noise around exact zeros so sparse structure survives.
fn clean(v: f64) -> f64 {
    if v.abs() < 1e-15 {
        0.0
    } else {
        v
    }
}

/// Generators and star tensor for one dimension, built once and shared.
#[derive(Debug)]
pub struct QuditBasis {
    generators: GeneratorSet,
    star: StarTensor,
}

impl QuditBasis {
    pub fn new(n: usize) -> Result<Self> {
        let generators = GeneratorSet::new(n)?;
        let star = StarTensor::from_generators(&generators);
        Ok(Self { generators, star })
    }

    /// Process-wide cached basis for dimension `n`.
    pub fn shared(n: usize) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuditBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(b) = cache.lock().expect("basis cache poisoned").get(&n) {
            return Ok(Arc::clone(b));
        }
        // Built outside the lock; a racing thread may build the same basis twice.
        let built = Arc::new(Self::new(n)?);
        let mut guard = cache.lock().expect("basis cache poisoned");
        Ok(Arc::clone(guard.entry(n).or_insert(built)))
    }

    pub fn dim(&self) -> usize {
        self.generators.dim()
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn star(&self) -> &StarTensor {
        &self.star
    }
}
