#![allow(dead_code)]

use ancilla_core::gallery::regress::default_suite;
use ancilla_core::gallery::GalleryEntry;
use ancilla_core::numerics::CMatrix;
use ancilla_core::random::{random_state, random_unitary, seeded};
use ancilla_core::{schmidt_decompose, BipartiteUnitary, SchmidtDecomposition, Tolerances};
use num_complex::Complex64;
use rand::Rng;

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn gallery() -> Vec<GalleryEntry> {
    default_suite().expect("default suite builds")
}

pub fn decompose(bu: &BipartiteUnitary) -> SchmidtDecomposition {
    schmidt_decompose(bu, &tol()).expect("decomposes")
}

pub fn haar(d_a: usize, d_b: usize, seed: u64) -> BipartiteUnitary {
    let u = random_unitary(d_a * d_b, &mut seeded(seed));
    BipartiteUnitary::new(u, d_a, d_b).expect("unitary")
}

pub fn states(d: usize, n: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = seeded(seed);
    (0..n).map(|_| random_state(d, &mut rng)).collect()
}

/// Kronecker product by explicit index arithmetic.
pub fn tensor(x: &CMatrix, y: &CMatrix) -> CMatrix {
    let (p, q) = (y.rows(), y.cols());
    CMatrix::from_fn(x.rows() * p, x.cols() * q, |r, c| {
        x[(r / p, c / q)] * y[(r % p, c % q)]
    })
}

pub fn trace_out_b(m: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    CMatrix::from_fn(d_a, d_a, |a, a2| {
        (0..d_b).map(|b| m[(a * d_b + b, a2 * d_b + b)]).sum()
    })
}

/// `tr_B(U (rho (x) sigma) U^dagger)` computed on the full space.
pub fn brute_force_channel(bu: &BipartiteUnitary, rho: &CMatrix, sigma: &CMatrix) -> CMatrix {
    let joint = &(&bu.u * &tensor(rho, sigma)) * &bu.u.adjoint();
    trace_out_b(&joint, bu.d_a, bu.d_b)
}

/// Random unit-trace Hermitian operator, typically with negative eigenvalues.
pub fn unit_trace_hermitian(d: usize, rng: &mut impl Rng) -> CMatrix {
    let h = CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
    .hermitian_part();
    let shift = (1.0 - h.trace().re) / d as f64;
    (&h + &CMatrix::identity(d).scale_real(shift)).hermitian_part()
}

pub fn random_element(ops: &[CMatrix], rng: &mut impl Rng) -> CMatrix {
    let d = ops[0].rows();
    let mut b = CMatrix::zeros(d, d);
    for o in ops {
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        b = &b + &o.scale(c);
    }
    b
}

pub fn min_eig(m: &CMatrix) -> f64 {
    ancilla_core::random::min_eigenvalue(m)
}
