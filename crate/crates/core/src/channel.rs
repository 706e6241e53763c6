//! The system map induced by a joint unitary and a (possibly non-positive)
//! unit-trace Hermitian ancilla operator.
//!
//! With `U = sum_n w_n A_n (x) B_n`, the map is
//! `E(rho) = sum_nm G_nm (w_n A_n) rho (w_m A_m)^dagger` where
//! `G_nm = tr(B_n sigma B_m^dagger)`. Complete positivity is `G >= 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{herm_eig_unchecked, kron, partial_trace, CMatrix, Keep, Tolerances, ZERO};
use crate::schmidt::{BipartiteUnitary, SchmidtDecomposition};

pub const TRACE_TOL: f64 = 1e-9;
pub const TP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelRep {
    pub d_a: usize,
    pub d_b: usize,
    /// `G_nm = tr(B_n sigma B_m^dagger)` against the orthonormal ancilla frame.
    pub g: CMatrix,
    /// System-side Schmidt operators with weights absorbed.
    pub a_ops: Vec<CMatrix>,
    /// Present iff `cp`.
    pub kraus: Option<Vec<CMatrix>>,
    /// Choi matrix with the unnormalized maximally entangled vector, reference factor first.
    pub choi: CMatrix,
    pub cp: bool,
    pub tp: bool,
    pub min_g_eig: f64,
    pub min_choi_eig: f64,
}

/// The summary emitted by `check-cp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CpVerdict {
    pub cp: bool,
    pub tp: bool,
    pub min_g_eig: f64,
    pub min_choi_eig: f64,
}

impl ChannelRep {
    pub fn verdict(&self) -> CpVerdict {
        CpVerdict {
            cp: self.cp,
            tp: self.tp,
            min_g_eig: self.min_g_eig,
            min_choi_eig: self.min_choi_eig,
        }
    }

    /// Whether the Choi matrix is PSD at `psd_tol`.
    pub fn choi_psd(&self, tol: &Tolerances) -> bool {
        self.min_choi_eig >= -tol.psd_tol
    }
}

/// Checks that `sigma` is a `d_b x d_b` unit-trace Hermitian operator.
pub fn validate_ancilla_operator(sigma: &CMatrix, d_b: usize, tol: &Tolerances) -> Result<()> {
    if sigma.shape() != (d_b, d_b) {
        return Err(Error::ShapeMismatch {
            expected: format!("({d_b}, {d_b})"),
            found: format!("{:?}", sigma.shape()),
        });
    }
    let deviation = sigma.hermiticity_deviation();
    if deviation > tol.herm_tol {
        return Err(Error::NotHermitian { deviation });
    }
    let trace = sigma.trace();
    if (trace - crate::numerics::ONE).norm() > TRACE_TOL {
        return Err(Error::NotUnitTrace {
            trace: format!("{}{:+}i", trace.re, trace.im),
        });
    }
    Ok(())
}

/// `G_nm = tr(B_n sigma B_m^dagger)`
pub fn g_matrix(b_ops: &[CMatrix], sigma: &CMatrix) -> CMatrix {
    let left: Vec<CMatrix> = b_ops.iter().map(|b| b * sigma).collect();
    CMatrix::from_fn(b_ops.len(), b_ops.len(), |n, m| {
        // tr(X Y^dagger) = sum_ij X_ij conj(Y_ij)
        left[n]
            .data()
            .iter()
            .zip(b_ops[m].data())
            .map(|(x, y)| x * y.conj())
            .sum()
    })
}

/// Row-major entry `(k, j)` of the vector `(I (x) A)|Psi>` is `A[j, k]`.
fn choi_vector(a: &CMatrix) -> Vec<num_complex::Complex64> {
    let d = a.rows();
    let mut v = vec![ZERO; d * d];
    for k in 0..d {
        for j in 0..d {
            v[k * d + j] = a[(j, k)];
        }
    }
    v
}

pub fn build_channel(
    sd: &SchmidtDecomposition,
    sigma: &CMatrix,
    tol: &Tolerances,
) -> Result<ChannelRep> {
    validate_ancilla_operator(sigma, sd.d_b, tol)?;
    let g = g_matrix(&sd.b_ops, sigma).hermitian_part();
    let a_ops = sd.weighted_a_ops();
    let d_a = sd.d_a;

    let g_eig = herm_eig_unchecked(&g);
    let min_g_eig = g_eig.min();
    let cp = min_g_eig >= -tol.psd_tol;

    let w_cols: Vec<_> = a_ops.iter().map(choi_vector).collect();
    let w = CMatrix::from_columns(d_a * d_a, &w_cols);
    let choi = (&(&w * &g) * &w.adjoint()).hermitian_part();
    let min_choi_eig = herm_eig_unchecked(&choi).min();

    let reduced = partial_trace(&choi, d_a, d_a, Keep::A)?;
    let tp = reduced.max_abs_diff(&CMatrix::identity(d_a)) <= TP_TOL;

    let kraus = cp.then(|| {
        (0..g_eig.values.len())
            .rev()
            .filter(|&k| g_eig.values[k] > tol.psd_tol)
            .map(|k| {
                let coeffs = g_eig.vector(k);
                let amp = g_eig.values[k].sqrt();
                let mut op = CMatrix::zeros(d_a, d_a);
                for (c, a) in coeffs.iter().zip(&a_ops) {
                    op = &op + &a.scale(c * amp);
                }
                op
            })
            .collect()
    });

    Ok(ChannelRep {
        d_a,
        d_b: sd.d_b,
        g,
        a_ops,
        kraus,
        choi,
        cp,
        tp,
        min_g_eig,
        min_choi_eig,
    })
}

/// Ordinary action `E(rho) = sum_nm G_nm A_n rho A_m^dagger`.
///
/// Any `d_A x d_A` operator is accepted; linearity makes the map meaningful on
/// non-Hermitian inputs such as outer products `|e_n><e_n'|`.
pub fn apply(ch: &ChannelRep, rho: &CMatrix) -> Result<CMatrix> {
    if rho.shape() != (ch.d_a, ch.d_a) {
        return Err(Error::ShapeMismatch {
            expected: format!("({0}, {0})", ch.d_a),
            found: format!("{:?}", rho.shape()),
        });
    }
    let adj: Vec<CMatrix> = ch.a_ops.iter().map(|a| a.adjoint()).collect();
    let mut out = CMatrix::zeros(ch.d_a, ch.d_a);
    for (n, a_n) in ch.a_ops.iter().enumerate() {
        let left = a_n * rho;
        let mut right = CMatrix::zeros(ch.d_a, ch.d_a);
        for (m, a_m_adj) in adj.iter().enumerate() {
            let g = ch.g[(n, m)];
            if g != ZERO {
                right = &right + &a_m_adj.scale(g);
            }
        }
        out = &out + &(&left * &right);
    }
    Ok(out)
}

/// Choi matrix of the map induced by `(sd, sigma)`.
pub fn choi_of(sd: &SchmidtDecomposition, sigma: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    Ok(build_channel(sd, sigma, tol)?.choi)
}

/// Kraus operators; only defined for completely positive maps.
pub fn kraus_of(ch: &ChannelRep) -> Result<&[CMatrix]> {
    ch.kraus.as_deref().ok_or(Error::NotCompletelyPositive {
        min_g_eig: ch.min_g_eig,
    })
}

/// `tr_B(U (rho (x) sigma) U^dagger)` evaluated on the full joint space.
pub fn dilation_apply(bu: &BipartiteUnitary, rho: &CMatrix, sigma: &CMatrix) -> Result<CMatrix> {
    if rho.shape() != (bu.d_a, bu.d_a) || sigma.shape() != (bu.d_b, bu.d_b) {
        return Err(Error::ShapeMismatch {
            expected: format!("({0}, {0}) and ({1}, {1})", bu.d_a, bu.d_b),
            found: format!("{:?} and {:?}", rho.shape(), sigma.shape()),
        });
    }
    let joint = &(&bu.u * &kron(rho, sigma)) * &bu.u.adjoint();
    partial_trace(&joint, bu.d_a, bu.d_b, Keep::A)
}
