//! Operator Schmidt decomposition of a bipartite unitary.
//!
//! `U = sum_n w_n A_n (x) B_n` with `{A_n}` and `{B_n}` orthonormal under the
//! Hilbert–Schmidt inner product. The decomposition is an ordinary SVD of the
//! realigned matrix `R[(a, a'), (b, b')] = U[(a, b), (a', b')]`.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{kron, rank_with_tol, singular_values, svd, CMatrix, Tolerances, ZERO};

/// Unitarity is checked entrywise against this bound.
pub const UNITARITY_TOL: f64 = 1e-9;

/// A unitary on `H_A (x) H_B` with A-major composite indexing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BipartiteUnitary {
    pub d_a: usize,
    pub d_b: usize,
    pub u: CMatrix,
}

/// Unvalidated on-disk form `{"d_a": .., "d_b": .., "u": <matrix>}`.
#[derive(Debug, Clone, Deserialize)]
pub struct UnitaryFile {
    pub d_a: usize,
    pub d_b: usize,
    pub u: CMatrix,
}

impl BipartiteUnitary {
    pub fn new(u: CMatrix, d_a: usize, d_b: usize) -> Result<Self> {
        if d_a < 1 {
            return Err(Error::InvalidDimensions("d_a must be at least 1".into()));
        }
        if d_b < 2 {
            return Err(Error::InvalidDimensions(format!(
                "d_b must be at least 2, got {d_b}"
            )));
        }
        let n = d_a * d_b;
        if u.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: format!("({n}, {n})"),
                found: format!("{:?}", u.shape()),
            });
        }
        let deviation = u.unitarity_deviation();
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { d_a, d_b, u })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: UnitaryFile = serde_json::from_str(text)?;
        Self::new(raw.u, raw.d_a, raw.d_b)
    }

    pub fn dim(&self) -> usize {
        self.d_a * self.d_b
    }

    /// Realigned `d_A^2 x d_B^2` matrix whose SVD is the Schmidt decomposition.
    pub fn realign(&self) -> CMatrix {
        realign(&self.u, self.d_a, self.d_b)
    }
}

/// `R[(a, a'), (b, b')] = M[(a, b), (a', b')]`
pub fn realign(m: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    CMatrix::from_fn(d_a * d_a, d_b * d_b, |row, col| {
        let (a, a2) = (row / d_a, row % d_a);
        let (b, b2) = (col / d_b, col % d_b);
        m[(a * d_b + b, a2 * d_b + b2)]
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SchmidtDecomposition {
    pub d_a: usize,
    pub d_b: usize,
    /// Schmidt rank `R_U`.
    pub rank: usize,
    /// Positive, descending.
    pub weights: Vec<f64>,
    /// Orthonormal system-side operators.
    pub a_ops: Vec<CMatrix>,
    /// Orthonormal ancilla-side operators.
    pub b_ops: Vec<CMatrix>,
}

impl SchmidtDecomposition {
    /// `sum_n w_n A_n (x) B_n`
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.d_a * self.d_b;
        let mut out = CMatrix::zeros(n, n);
        for ((w, a), b) in self.weights.iter().zip(&self.a_ops).zip(&self.b_ops) {
            out = &out + &kron(a, b).scale_real(*w);
        }
        out
    }

    /// System-side operators with the weights absorbed, `w_n A_n`.
    pub fn weighted_a_ops(&self) -> Vec<CMatrix> {
        self.weights
            .iter()
            .zip(&self.a_ops)
            .map(|(w, a)| a.scale_real(*w))
            .collect()
    }
}

/// Computes the Schmidt decomposition of a validated unitary.
///
/// Output is deterministic: weights descend; within a cluster of equal weights
/// the pairs are ordered by their vectorized ancilla operator (see
/// [`compare_vectorized`]), and each ancilla operator carries the phase that
/// makes its first largest-modulus entry real and positive.
pub fn schmidt_decompose(bu: &BipartiteUnitary, tol: &Tolerances) -> Result<SchmidtDecomposition> {
    tol.validate()?;
    if bu.d_b < 2 {
        return Err(Error::InvalidDimensions("d_b must be at least 2".into()));
    }
    let deviation = bu.u.unitarity_deviation();
    if deviation > UNITARITY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let (d_a, d_b) = (bu.d_a, bu.d_b);
    let r = bu.realign();
    let dec = svd(&r);
    let rank = rank_with_tol(&dec.s, tol);

    let mut pairs: Vec<(f64, CMatrix, CMatrix)> = (0..rank)
        .map(|k| {
            let a_vec = dec.u.column(k);
            let b_vec: Vec<Complex64> = dec.v.column(k).iter().map(|z| z.conj()).collect();
            let mut a = CMatrix::from_vec(d_a, d_a, &a_vec);
            let mut b = CMatrix::from_vec(d_b, d_b, &b_vec);
            let phase = leading_phase(b.data());
            b = b.scale(phase.conj());
            a = a.scale(phase);
            (dec.s[k], a, b)
        })
        .collect();

    order_pairs(&mut pairs);

    let (weights, a_ops, b_ops) = pairs.into_iter().fold(
        (Vec::new(), Vec::new(), Vec::new()),
        |(mut w, mut a, mut b), (wk, ak, bk)| {
            w.push(wk);
            a.push(ak);
            b.push(bk);
            (w, a, b)
        },
    );
    Ok(SchmidtDecomposition {
        d_a,
        d_b,
        rank,
        weights,
        a_ops,
        b_ops,
    })
}

/// Unit phase of the first entry whose modulus is maximal (within 1e-12).
fn leading_phase(v: &[Complex64]) -> Complex64 {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    match v.iter().find(|z| z.norm() >= max - 1e-12) {
        Some(z) if max > 0.0 => z / z.norm(),
        _ => Complex64::new(1.0, 0.0),
    }
}

const TIE_TOL: f64 = 1e-9;

fn order_pairs(pairs: &mut [(f64, CMatrix, CMatrix)]) {
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let scale = pairs.first().map_or(0.0, |p| p.0);
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && (pairs[end - 1].0 - pairs[end].0) <= TIE_TOL * scale {
            end += 1;
        }
        pairs[start..end].sort_by(|x, y| compare_vectorized(x.2.data(), y.2.data()));
        start = end;
    }
}

/// Ordering on vectorized operators: the one whose first non-negligible entry
/// comes earlier sorts first; then entries are compared in order by real part
/// and imaginary part, larger first, ignoring differences below 1e-12.
pub fn compare_vectorized(x: &[Complex64], y: &[Complex64]) -> Ordering {
    let first = |v: &[Complex64]| v.iter().position(|z| z.norm() > 1e-12).unwrap_or(v.len());
    match first(x).cmp(&first(y)) {
        Ordering::Equal => {}
        other => return other,
    }
    for (a, b) in x.iter().zip(y) {
        for (p, q) in [(a.re, b.re), (a.im, b.im)] {
            if (p - q).abs() > 1e-12 {
                return q.total_cmp(&p);
            }
        }
    }
    Ordering::Equal
}

/// Residuals of the identities implied by unitarity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitarityReport {
    /// `max |I_B - (1/d_A) sum_n w_n^2 B_n^dagger B_n|`
    pub completeness_deviation: f64,
    /// `sum_n w_n^2`, which must equal `d_A d_B`.
    pub weight_sum: f64,
    pub weight_sum_deviation: f64,
    /// `max |U - sum_n w_n A_n (x) B_n|`
    pub reconstruction_deviation: f64,
    pub consistent: bool,
}

pub const IDENTITY_TOL: f64 = 1e-8;

pub fn verify_unitarity_identities(
    sd: &SchmidtDecomposition,
    bu: &BipartiteUnitary,
) -> Result<UnitarityReport> {
    if sd.d_a != bu.d_a || sd.d_b != bu.d_b {
        return Err(Error::ShapeMismatch {
            expected: format!("({}, {})", bu.d_a, bu.d_b),
            found: format!("({}, {})", sd.d_a, sd.d_b),
        });
    }
    let mut partial = CMatrix::zeros(sd.d_b, sd.d_b);
    for (w, b) in sd.weights.iter().zip(&sd.b_ops) {
        partial = &partial + &(&b.adjoint() * b).scale_real(w * w / sd.d_a as f64);
    }
    let completeness_deviation = partial.max_abs_diff(&CMatrix::identity(sd.d_b));
    let weight_sum: f64 = sd.weights.iter().map(|w| w * w).sum();
    let weight_sum_deviation = (weight_sum - (sd.d_a * sd.d_b) as f64).abs();
    let reconstruction_deviation = sd.reconstruct().max_abs_diff(&bu.u);
    Ok(UnitarityReport {
        completeness_deviation,
        weight_sum,
        weight_sum_deviation,
        reconstruction_deviation,
        consistent: completeness_deviation <= IDENTITY_TOL
            && weight_sum_deviation <= IDENTITY_TOL
            && reconstruction_deviation <= IDENTITY_TOL,
    })
}

/// Schmidt rank of a two-qubit unitary, which can only be 1, 2 or 4.
pub fn two_qubit_rank_class(bu: &BipartiteUnitary, tol: &Tolerances) -> Result<usize> {
    if bu.d_a != 2 || bu.d_b != 2 {
        return Err(Error::InvalidDimensions(format!(
            "two-qubit classification needs d_a = d_b = 2, got ({}, {})",
            bu.d_a, bu.d_b
        )));
    }
    let s = singular_values(&bu.realign());
    match rank_with_tol(&s, tol) {
        3 => Err(Error::RankThree(s)),
        r => Ok(r),
    }
}

/// Dimension-checked `sum_n |n><n| (x) T_n` for a list of target unitaries on B.
pub fn controlled(targets: &[CMatrix]) -> Result<BipartiteUnitary> {
    let d_b = targets
        .first()
        .map(|t| t.rows())
        .ok_or_else(|| Error::InvalidParameter("no target operators".into()))?;
    let d_a = targets.len();
    let mut u = CMatrix::zeros(d_a * d_b, d_a * d_b);
    for (a, t) in targets.iter().enumerate() {
        if t.shape() != (d_b, d_b) {
            return Err(Error::ShapeMismatch {
                expected: format!("({d_b}, {d_b})"),
                found: format!("{:?}", t.shape()),
            });
        }
        for r in 0..d_b {
            for c in 0..d_b {
                u[(a * d_b + r, a * d_b + c)] = t[(r, c)];
            }
        }
    }
    debug_assert!(u.data().iter().any(|z| *z != ZERO));
    BipartiteUnitary::new(u, d_a, d_b)
}
