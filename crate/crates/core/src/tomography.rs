//! Indirect tomography: recovering the ancilla operator from the system map.
//!
//! `G_nm = tr(B_m^dagger B_n sigma)` is linear in `sigma`, so `sigma` is
//! determined by `G` exactly when the products `B_m^dagger B_n` span the
//! full operator space on the ancilla.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{build_channel, dilation_apply, g_matrix, validate_ancilla_operator};
use crate::error::{Error, Result};
use crate::numerics::{
    basis_vector, rank_above, realify_functionals, svd, traceless_hermitian_basis, CMatrix, Svd,
    Tolerances, I, ONE, ZERO,
};
use crate::opspace::product_span_dim;
use crate::schmidt::{BipartiteUnitary, SchmidtDecomposition};

pub const PROCESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TomographyVerdict {
    pub allows: bool,
    pub span_dim: usize,
    pub d_b: usize,
    /// Filled by [`tomography_round_trip`].
    pub reconstruction: Option<CMatrix>,
    pub residual: Option<f64>,
}

pub fn allows_indirect_tomography(
    sd: &SchmidtDecomposition,
    tol: &Tolerances,
) -> TomographyVerdict {
    let span_dim = product_span_dim(sd, tol);
    TomographyVerdict {
        allows: span_dim == sd.d_b * sd.d_b,
        span_dim,
        d_b: sd.d_b,
        reconstruction: None,
        residual: None,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SigmaReconstruction {
    /// The unique solution; absent when `G` does not determine `sigma`.
    pub sigma: Option<CMatrix>,
    /// Minimum-norm unit-trace Hermitian least-squares solution.
    pub min_norm_estimate: CMatrix,
    pub unique: bool,
    /// Dimension of the traceless Hermitian directions invisible to `G`.
    pub null_dim: usize,
    /// `|G(sigma_hat) - G|_F`
    pub residual: f64,
}

/// Least-squares inversion of `sigma -> G` over unit-trace Hermitian operators.
///
/// Writes `sigma = I/d + sum_k x_k T_k` over an orthonormal traceless
/// Hermitian basis and solves for real `x` with a pseudo-inverse.
pub fn reconstruct_sigma(
    sd: &SchmidtDecomposition,
    g: &CMatrix,
    tol: &Tolerances,
) -> Result<SigmaReconstruction> {
    let r = sd.rank;
    if g.shape() != (r, r) {
        return Err(Error::ShapeMismatch {
            expected: format!("({r}, {r})"),
            found: format!("{:?}", g.shape()),
        });
    }
    let deviation = g.hermiticity_deviation();
    if deviation > tol.herm_tol * g.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let d = sd.d_b;
    let basis = traceless_hermitian_basis(d);
    let mut products = Vec::with_capacity(r * r);
    for bn in &sd.b_ops {
        for bm in &sd.b_ops {
            products.push(&bm.adjoint() * bn);
        }
    }
    let design = realify_functionals(&products, &basis);
    let offset = g_matrix(&sd.b_ops, &CMatrix::identity(d).scale_real(1.0 / d as f64));
    let target: Vec<f64> = (g - &offset)
        .data()
        .iter()
        .flat_map(|z| [z.re, z.im])
        .collect();

    // products have unit-order norm, so a pure-noise design must not set its own scale
    let scale = products
        .iter()
        .map(CMatrix::frobenius_norm)
        .fold(0.0, f64::max);
    let dec = svd(&design);
    let rank = rank_above(&dec.s, tol.rank_tol * scale);
    let x = pseudo_inverse_solve(&dec, rank, &target);

    let mut sigma = CMatrix::identity(d).scale_real(1.0 / d as f64);
    for (xk, t) in x.iter().zip(&basis) {
        sigma = &sigma + &t.scale_real(*xk);
    }
    let sigma = sigma.hermitian_part();
    let residual = (&g_matrix(&sd.b_ops, &sigma) - g).frobenius_norm();
    let null_dim = basis.len() - rank;
    let unique = null_dim == 0;
    Ok(SigmaReconstruction {
        sigma: unique.then(|| sigma.clone()),
        min_norm_estimate: sigma,
        unique,
        null_dim,
        residual,
    })
}

/// `x = Re(V S^+ U^dagger b)` over the leading `rank` singular triples.
fn pseudo_inverse_solve(dec: &Svd, rank: usize, target: &[f64]) -> Vec<f64> {
    let n = dec.v.rows();
    let mut x = vec![ZERO; n];
    for k in 0..rank {
        let coeff: Complex64 = dec
            .u
            .column(k)
            .iter()
            .zip(target)
            .map(|(u, t)| u.conj() * t)
            .sum::<Complex64>()
            / dec.s[k];
        for (row, xi) in x.iter_mut().enumerate() {
            *xi += dec.v[(row, k)] * coeff;
        }
    }
    x.into_iter().map(|z| z.re).collect()
}

/// Builds `G` from `sigma`, inverts it, and reports the verdict with the reconstruction.
pub fn tomography_round_trip(
    sd: &SchmidtDecomposition,
    sigma: &CMatrix,
    tol: &Tolerances,
) -> Result<TomographyVerdict> {
    validate_ancilla_operator(sigma, sd.d_b, tol)?;
    let g = g_matrix(&sd.b_ops, sigma);
    let rec = reconstruct_sigma(sd, &g, tol)?;
    let mut verdict = allows_indirect_tomography(sd, tol);
    verdict.residual = Some(rec.residual);
    verdict.reconstruction = rec.sigma;
    Ok(verdict)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProcessTomography {
    /// Choi matrix assembled from simulated input/output pairs.
    pub choi: CMatrix,
    /// Largest entrywise deviation from the Choi matrix built from `G`.
    pub deviation: f64,
    pub matches: bool,
}

/// Simulates process tomography of the induced map.
///
/// The unitary is rebuilt from `sd`, the probe states `|n><n|`,
/// `|+_{nn'}><+_{nn'}|`, `|+i_{nn'}><+i_{nn'}|` are pushed through the
/// dilation, and linearity recovers the images of every `|n><n'|`.
pub fn process_tomography(
    sd: &SchmidtDecomposition,
    sigma: &CMatrix,
    tol: &Tolerances,
) -> Result<ProcessTomography> {
    let expected = build_channel(sd, sigma, tol)?.choi;
    let bu = BipartiteUnitary::new(sd.reconstruct(), sd.d_a, sd.d_b)?;
    let d = sd.d_a;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let run = |psi: &[Complex64]| dilation_apply(&bu, &CMatrix::outer(psi, psi), sigma);
    let basis = |k: usize| basis_vector(d, k);

    let diag: Vec<CMatrix> = (0..d).map(|n| run(&basis(n))).collect::<Result<_>>()?;
    let mut choi = CMatrix::zeros(d * d, d * d);
    for n in 0..d {
        for n2 in 0..d {
            let block = if n == n2 {
                diag[n].clone()
            } else {
                let mut plus = basis(n);
                let mut plus_i = basis(n);
                plus[n2] = ONE;
                plus_i[n2] = I;
                let plus: Vec<_> = plus.iter().map(|z| z * h).collect();
                let plus_i: Vec<_> = plus_i.iter().map(|z| z * h).collect();
                let e_plus = run(&plus)?;
                let e_plus_i = run(&plus_i)?;
                let diag_sum = &diag[n] + &diag[n2];
                &(&e_plus + &e_plus_i.scale(I)) - &diag_sum.scale(Complex64::new(0.5, 0.5))
            };
            for j in 0..d {
                for k in 0..d {
                    choi[(n * d + j, n2 * d + k)] = block[(j, k)];
                }
            }
        }
    }
    let deviation = choi.max_abs_diff(&expected);
    Ok(ProcessTomography {
        choi,
        deviation,
        matches: deviation <= PROCESS_TOL,
    })
}
