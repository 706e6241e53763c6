//! Dense complex linear algebra kernel.
//!
//! Everything here is sized for small operator spaces (`d_A * d_B <= 64`):
//! cyclic Jacobi for Hermitian eigenproblems, an SVD layered on top of it,
//! Kronecker products, partial traces and the Hilbert–Schmidt inner product.
//! Composite indices are A-major: `|a>|b>` is row `a * d_B + b`.

mod cmatrix;
mod eig;
mod svd;

pub use cmatrix::{basis_vector, inner, normalized, vec_norm, CMatrix, I, ONE, ZERO};
pub use eig::{herm_eig, herm_eig_unchecked, HermEig};
pub use svd::{null_space, singular_values, svd, Svd};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every analysis routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cutoff for numerical rank.
    pub rank_tol: f64,
    /// Largest tolerated `|M - M^dagger|` entry.
    pub herm_tol: f64,
    /// Largest tolerated negative eigenvalue magnitude for PSD checks.
    pub psd_tol: f64,
    /// Smallest spectral margin counted as outside the cone.
    pub margin_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_tol: 1e-9,
            herm_tol: 1e-10,
            psd_tol: 1e-9,
            margin_tol: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_tol", self.rank_tol),
            ("herm_tol", self.herm_tol),
            ("psd_tol", self.psd_tol),
            ("margin_tol", self.margin_tol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Which tensor factor a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Hilbert–Schmidt inner product `tr(n^dagger o)`.
pub fn hs_inner(n: &CMatrix, o: &CMatrix) -> Result<Complex64> {
    if n.shape() != o.shape() {
        return Err(Error::ShapeMismatch {
            expected: format!("{:?}", n.shape()),
            found: format!("{:?}", o.shape()),
        });
    }
    Ok(inner(n.data(), o.data()))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Partial trace of an operator on `H_A (x) H_B`, keeping one factor.
pub fn partial_trace(m: &CMatrix, d_a: usize, d_b: usize, keep: Keep) -> Result<CMatrix> {
    let n = d_a * d_b;
    if m.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            expected: format!("({n}, {n})"),
            found: format!("{:?}", m.shape()),
        });
    }
    Ok(match keep {
        Keep::A => CMatrix::from_fn(d_a, d_a, |a, a2| {
            (0..d_b).map(|b| m[(a * d_b + b, a2 * d_b + b)]).sum()
        }),
        Keep::B => CMatrix::from_fn(d_b, d_b, |b, b2| {
            (0..d_a).map(|a| m[(a * d_b + b, a * d_b + b2)]).sum()
        }),
    })
}

/// Number of singular values above `rank_tol * s[0]`; zero when `s[0] == 0`.
pub fn rank_with_tol(s: &[f64], tol: &Tolerances) -> usize {
    match s.first() {
        Some(&s0) if s0 > 0.0 => rank_above(s, tol.rank_tol * s0),
        _ => 0,
    }
}

/// Number of entries strictly above an absolute cutoff.
pub fn rank_above(s: &[f64], cutoff: f64) -> usize {
    s.iter().filter(|&&x| x > cutoff).count()
}

/// Stacks the vectorizations of `ops` as the columns of a matrix.
pub fn vectorize_columns(ops: &[CMatrix]) -> CMatrix {
    let len = ops.first().map_or(0, |o| o.data().len());
    CMatrix::from_fn(len, ops.len(), |r, c| ops[c].data()[r])
}

/// Hilbert–Schmidt orthonormal basis of `d x d` Hermitian matrices:
/// `E_jj`, then for `j < k` the pairs `(E_jk + E_kj)/sqrt2`, `i(E_kj - E_jk)/sqrt2`.
pub fn hermitian_basis(d: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(d * d);
    for j in 0..d {
        let mut e = CMatrix::zeros(d, d);
        e[(j, j)] = ONE;
        out.push(e);
    }
    out.extend(off_diagonal_hermitian(d));
    out
}

/// Orthonormal basis of traceless Hermitian `d x d` matrices (generalized Gell-Mann).
pub fn traceless_hermitian_basis(d: usize) -> Vec<CMatrix> {
    let mut out = off_diagonal_hermitian(d);
    for l in 1..d {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut e = CMatrix::zeros(d, d);
        for j in 0..l {
            e[(j, j)] = Complex64::new(1.0 / norm, 0.0);
        }
        e[(l, l)] = Complex64::new(-(l as f64) / norm, 0.0);
        out.push(e);
    }
    out
}

fn off_diagonal_hermitian(d: usize) -> Vec<CMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(j, k)] = Complex64::new(h, 0.0);
            sym[(k, j)] = Complex64::new(h, 0.0);
            out.push(sym);
            let mut asym = CMatrix::zeros(d, d);
            asym[(j, k)] = Complex64::new(0.0, -h);
            asym[(k, j)] = Complex64::new(0.0, h);
            out.push(asym);
        }
    }
    out
}

/// Real coordinates of a linear map on Hermitian matrices.
///
/// Given complex functionals `f_k(H) = tr(P_k H)` and a real basis `{H_j}`,
/// returns the `2K x J` real matrix of `(Re f_k(H_j); Im f_k(H_j))`.
pub fn realify_functionals(functionals: &[CMatrix], basis: &[CMatrix]) -> CMatrix {
    let k = functionals.len();
    let mut m = CMatrix::zeros(2 * k, basis.len());
    for (row, p) in functionals.iter().enumerate() {
        for (col, h) in basis.iter().enumerate() {
            let v = trace_of_product(p, h);
            m[(2 * row, col)] = Complex64::new(v.re, 0.0);
            m[(2 * row + 1, col)] = Complex64::new(v.im, 0.0);
        }
    }
    m
}

/// `tr(P H)` without forming the product.
pub fn trace_of_product(p: &CMatrix, h: &CMatrix) -> Complex64 {
    let n = p.rows();
    let mut acc = ZERO;
    for r in 0..n {
        for c in 0..p.cols() {
            acc += p[(r, c)] * h[(c, r)];
        }
    }
    acc
}
