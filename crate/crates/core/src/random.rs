//! Seeded random sampling of states, unitaries and Hermitian operators.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numerics::{herm_eig_unchecked, inner, vec_norm, CMatrix};

/// The generator used everywhere a seed is accepted.
pub type SeedRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeedRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random state vector: normalized complex Gaussian.
pub fn random_state(d: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
        let n = vec_norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unitary via Gram–Schmidt QR of a Gaussian matrix.
///
/// Gram–Schmidt yields an upper-triangular factor with positive diagonal, which
/// is the phase convention under which Q is Haar distributed.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let g = gaussian_matrix(n, n, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v = g.column(c);
        for _ in 0..2 {
            for q in &cols {
                let p = inner(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= p * y;
                }
            }
        }
        let nv = vec_norm(&v);
        cols.push(v.into_iter().map(|z| z / nv).collect());
    }
    CMatrix::from_columns(n, &cols)
}

/// Hermitian matrix with Gaussian entries (GUE-like).
pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> CMatrix {
    gaussian_matrix(d, d, rng).hermitian_part()
}

/// Traceless Hermitian matrix with unit Frobenius norm.
pub fn random_traceless_hermitian(d: usize, rng: &mut impl Rng) -> CMatrix {
    let h = random_hermitian(d, rng);
    let shift = h.trace().re / d as f64;
    let t = &h - &CMatrix::identity(d).scale_real(shift);
    let n = t.frobenius_norm();
    t.scale_real(1.0 / n)
}

/// Random full-rank density operator `G G^dagger / tr(G G^dagger)`.
pub fn random_density(d: usize, rng: &mut impl Rng) -> CMatrix {
    let g = gaussian_matrix(d, d, rng);
    let p = &g * &g.adjoint();
    let t = p.trace().re;
    p.scale_real(1.0 / t).hermitian_part()
}

/// Unit-trace Hermitian operator whose smallest eigenvalue is exactly `-neg`.
pub fn random_nonpositive_unit_trace(d: usize, neg: f64, rng: &mut impl Rng) -> CMatrix {
    assert!(d >= 2 && neg > 0.0);
    let w = random_unitary(d, rng);
    let mut weights: Vec<f64> = (0..d - 1).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for x in weights.iter_mut() {
        *x *= (1.0 + neg) / total;
    }
    weights.push(-neg);
    let diag = CMatrix::diag_real(&weights);
    (&(&w * &diag) * &w.adjoint()).hermitian_part()
}

/// Smallest eigenvalue of a Hermitian matrix (symmetrized first).
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    herm_eig_unchecked(m).min()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_have_requested_structure() {
        let mut rng = seeded(3);
        let u = random_unitary(5, &mut rng);
        assert!(u.unitarity_deviation() < 1e-12);
        let psi = random_state(4, &mut rng);
        assert!((vec_norm(&psi) - 1.0).abs() < 1e-14);
        let t = random_traceless_hermitian(3, &mut rng);
        assert!(t.trace().norm() < 1e-14);
        assert!(t.hermiticity_deviation() < 1e-15);
        let rho = random_density(3, &mut rng);
        assert!((rho.trace().re - 1.0).abs() < 1e-14);
        assert!(min_eigenvalue(&rho) > 0.0);
        let s = random_nonpositive_unit_trace(3, 0.2, &mut rng);
        assert!((s.trace().re - 1.0).abs() < 1e-12);
        assert!((min_eigenvalue(&s) + 0.2).abs() < 1e-12);
    }

    #[test]
    fn seeding_is_deterministic() {
        let a = random_unitary(3, &mut seeded(11));
        let b = random_unitary(3, &mut seeded(11));
        assert_eq!(a, b);
    }
}
