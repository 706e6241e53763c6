use num_complex::Complex64;

use super::{herm_eig_unchecked, inner, rank_with_tol, vec_norm, CMatrix, Tolerances, ZERO};

/// Singular value decomposition `M = U diag(s) V^dagger` with a full right factor.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `m x min(m, n)` with orthonormal columns.
    pub u: CMatrix,
    /// `min(m, n)` singular values, descending.
    pub s: Vec<f64>,
    /// `n x n` unitary.
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let m = self.u.rows();
        let n = self.v.rows();
        let mut out = CMatrix::zeros(m, n);
        for (k, &sk) in self.s.iter().enumerate() {
            for r in 0..m {
                let a = self.u[(r, k)] * sk;
                for c in 0..n {
                    out[(r, c)] += a * self.v[(c, k)].conj();
                }
            }
        }
        out
    }

    pub fn rank(&self, tol: &Tolerances) -> usize {
        rank_with_tol(&self.s, tol)
    }
}

/// SVD from the Hermitian eigendecomposition of the smaller Gram matrix.
///
/// Singular values are taken as `|M v_k|` rather than `sqrt(lambda_k)`, which
/// keeps exact null directions at roundoff level instead of `sqrt(eps)`.
/// Wide matrices are decomposed through `M^dagger` so the eigenproblem is
/// always `min(m, n)` square.
pub fn svd(m: &CMatrix) -> Svd {
    let (rows, cols) = m.shape();
    if cols > rows {
        let (v, s, u) = gram_svd(&m.adjoint(), cols);
        return Svd { u, s, v };
    }
    let (u, s, v) = gram_svd(m, rows.min(cols));
    Svd { u, s, v }
}

/// For `rows >= cols`: left vectors `M v_k / s_k`, re-orthonormalized and
/// completed to `left_cols` orthonormal columns.
fn gram_svd(m: &CMatrix, left_cols: usize) -> (CMatrix, Vec<f64>, CMatrix) {
    let (rows, cols) = m.shape();
    let gram = &m.adjoint() * m;
    let eig = herm_eig_unchecked(&gram);

    let mut triplets: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = (0..cols)
        .map(|k| {
            let v = eig.vector(k);
            let w = m.mat_vec(&v);
            (vec_norm(&w), v, w)
        })
        .collect();
    triplets.sort_by(|a, b| b.0.total_cmp(&a.0));

    let s0 = triplets.first().map_or(0.0, |t| t.0);
    let cutoff = s0 * 1e-13;

    let mut left: Vec<Vec<Complex64>> = Vec::with_capacity(left_cols);
    for (sk, _, w) in &triplets {
        if *sk <= cutoff || *sk == 0.0 {
            break;
        }
        let mut u: Vec<Complex64> = w.iter().map(|z| z / *sk).collect();
        if orthonormalize_against(&mut u, &left) {
            left.push(u);
        } else {
            break;
        }
    }
    complete_basis(&mut left, rows, left_cols);

    let s = triplets.iter().map(|t| t.0).collect();
    let v_cols: Vec<Vec<Complex64>> = triplets.into_iter().map(|t| t.1).collect();
    (
        CMatrix::from_columns(rows, &left),
        s,
        CMatrix::from_columns(cols, &v_cols),
    )
}

/// Singular values only, descending; skips building the singular vectors.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let (rows, cols) = m.shape();
    let t;
    let m = if cols > rows {
        t = m.adjoint();
        &t
    } else {
        m
    };
    let eig = herm_eig_unchecked(&(&m.adjoint() * m));
    let mut s: Vec<f64> = (0..eig.values.len())
        .map(|k| vec_norm(&m.mat_vec(&eig.vector(k))))
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Orthonormal basis of the right null space `{x : M x = 0}` at relative `rank_tol`.
pub fn null_space(m: &CMatrix, tol: &Tolerances) -> Vec<Vec<Complex64>> {
    let d = svd(m);
    let rank = d.rank(tol);
    d.v.columns(rank..m.cols())
}

/// Two passes of modified Gram–Schmidt; returns false if `u` collapses.
fn orthonormalize_against(u: &mut [Complex64], basis: &[Vec<Complex64>]) -> bool {
    let start = vec_norm(u);
    for _ in 0..2 {
        for b in basis {
            let proj = inner(b, u);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= proj * y;
            }
        }
    }
    let n = vec_norm(u);
    if n <= 1e-8 * start || n == 0.0 {
        return false;
    }
    for x in u.iter_mut() {
        *x /= n;
    }
    true
}

/// Single pass over the standard basis; while fewer than `dim` vectors are held some
/// residual has norm at least `1/sqrt(dim)`, so the threshold below always completes it.
fn complete_basis(basis: &mut Vec<Vec<Complex64>>, dim: usize, target: usize) {
    let threshold = 0.5 / (dim as f64).sqrt();
    for j in 0..dim {
        if basis.len() == target {
            break;
        }
        let mut e = vec![ZERO; dim];
        e[j] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in basis.iter() {
                let proj = inner(b, &e);
                for (x, y) in e.iter_mut().zip(b) {
                    *x -= proj * y;
                }
            }
        }
        let n = vec_norm(&e);
        if n > threshold {
            for x in e.iter_mut() {
                *x /= n;
            }
            basis.push(e);
        }
    }
    debug_assert_eq!(basis.len(), target);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_rank_deficient_diag() {
        let d = svd(&CMatrix::identity(2));
        assert_eq!(d.s, vec![1.0, 1.0]);
        let d = svd(&CMatrix::diag_real(&[3.0, 0.0]));
        assert_eq!(d.s, vec![3.0, 0.0]);
        assert!(d.u.unitarity_deviation() < 1e-14);
    }

    #[test]
    fn rectangular_reconstructs() {
        let m = CMatrix::from_fn(2, 4, |r, c| {
            Complex64::new((r + c) as f64, (r * c) as f64 - 1.0)
        });
        let d = svd(&m);
        assert_eq!(d.s.len(), 2);
        assert_eq!(d.u.shape(), (2, 2));
        assert_eq!(d.v.shape(), (4, 4));
        assert!(d.reconstruct().max_abs_diff(&m) < 1e-12);
        assert!(d.v.unitarity_deviation() < 1e-12);
        let tall = m.adjoint();
        let d = svd(&tall);
        assert_eq!(d.u.shape(), (4, 2));
        assert!(d.reconstruct().max_abs_diff(&tall) < 1e-12);
        assert!((&d.u.adjoint() * &d.u).max_abs_diff(&CMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = CMatrix::from_real_rows(&[&[1.0, 1.0, 0.0]]);
        let ns = null_space(&m, &Tolerances::default());
        assert_eq!(ns.len(), 2);
        for x in &ns {
            assert!(vec_norm(&m.mat_vec(x)) < 1e-14);
        }
    }

    #[test]
    fn values_only_agree_with_full_decomposition() {
        let m = CMatrix::from_fn(3, 7, |r, c| {
            Complex64::new((r * c) as f64 - 2.0, r as f64 + 0.5 * c as f64)
        });
        for x in [m.clone(), m.adjoint()] {
            let full = svd(&x).s;
            let vals = singular_values(&x);
            assert_eq!(full.len(), vals.len());
            for (a, b) in full.iter().zip(&vals) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_matrix() {
        let d = svd(&CMatrix::zeros(3, 2));
        assert_eq!(d.s, vec![0.0, 0.0]);
        assert_eq!(d.u.shape(), (3, 2));
        assert!((&d.u.adjoint() * &d.u).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }
}
