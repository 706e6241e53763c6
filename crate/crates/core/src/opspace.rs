//! Ancilla operator subspaces: the Schmidt span, its Hilbert–Schmidt
//! orthocomplement, the vector subspace it generates from a state, and the
//! spectral test for whether `|phi><phi|` is reachable as `B^dagger B`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    basis_vector, herm_eig_unchecked, inner, null_space, rank_above, rank_with_tol,
    singular_values, svd, vec_norm, vectorize_columns, CMatrix, Tolerances,
};
use crate::schmidt::SchmidtDecomposition;

pub const ORTHONORMAL_TOL: f64 = 1e-9;
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Subspace of `d x d` operators with a Hilbert–Schmidt orthonormal basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorSubspace {
    pub dim_b: usize,
    pub basis: Vec<CMatrix>,
}

impl OperatorSubspace {
    /// Wraps an already orthonormal basis, checking it.
    pub fn from_orthonormal(dim_b: usize, basis: Vec<CMatrix>) -> Result<Self> {
        for op in &basis {
            if op.shape() != (dim_b, dim_b) {
                return Err(Error::ShapeMismatch {
                    expected: format!("({dim_b}, {dim_b})"),
                    found: format!("{:?}", op.shape()),
                });
            }
        }
        let gram = gram_matrix(&basis);
        let dev = gram.max_abs_diff(&CMatrix::identity(basis.len()));
        if dev > ORTHONORMAL_TOL {
            return Err(Error::Inconsistent(format!(
                "operator basis is not orthonormal (deviation {dev:e})"
            )));
        }
        Ok(Self { dim_b, basis })
    }

    /// Orthonormalizes an arbitrary spanning set.
    pub fn span_of(dim_b: usize, ops: &[CMatrix], tol: &Tolerances) -> Self {
        if ops.is_empty() {
            return Self::zero(dim_b);
        }
        let m = vectorize_columns(ops);
        let dec = svd(&m);
        let rank = dec.rank(tol);
        let basis = (0..rank)
            .map(|k| CMatrix::from_vec(dim_b, dim_b, &dec.u.column(k)))
            .collect();
        Self { dim_b, basis }
    }

    pub fn zero(dim_b: usize) -> Self {
        Self {
            dim_b,
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthogonal projection of an operator onto the subspace.
    pub fn project(&self, op: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim_b, self.dim_b);
        for b in &self.basis {
            let c = inner(b.data(), op.data());
            out = &out + &b.scale(c);
        }
        out
    }
}

fn gram_matrix(ops: &[CMatrix]) -> CMatrix {
    CMatrix::from_fn(ops.len(), ops.len(), |i, j| {
        inner(ops[i].data(), ops[j].data())
    })
}

/// Subspace of `H_B` with an orthonormal basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorSubspace {
    pub dim_b: usize,
    pub basis: Vec<Vec<Complex64>>,
}

impl VectorSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Span of the ancilla-side Schmidt operators.
pub fn span_b(sd: &SchmidtDecomposition) -> OperatorSubspace {
    OperatorSubspace {
        dim_b: sd.d_b,
        basis: sd.b_ops.clone(),
    }
}

/// All operators `O` with `tr(B^dagger O) = 0` for every `B` in `s`.
pub fn orthocomplement(s: &OperatorSubspace, tol: &Tolerances) -> OperatorSubspace {
    let d = s.dim_b;
    if s.basis.is_empty() {
        let basis = (0..d * d)
            .map(|k| CMatrix::from_vec(d, d, &basis_vector(d * d, k)))
            .collect();
        return OperatorSubspace { dim_b: d, basis };
    }
    // vec(O) must lie in the null space of C^dagger, C = [vec(B_1) ... vec(B_k)].
    let c_adj = vectorize_columns(&s.basis).adjoint();
    let basis = null_space(&c_adj, tol)
        .into_iter()
        .map(|v| CMatrix::from_vec(d, d, &v))
        .collect();
    OperatorSubspace { dim_b: d, basis }
}

fn check_normalized(phi: &[Complex64], d: usize) -> Result<()> {
    if phi.len() != d {
        return Err(Error::ShapeMismatch {
            expected: format!("state of dimension {d}"),
            found: format!("dimension {}", phi.len()),
        });
    }
    let norm = vec_norm(phi);
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// `span{O_n |phi>}` for an orthonormal basis `{O_n}` of `ob`.
///
/// Since `|O_n| = 1` and `|phi| = 1`, singular values are compared against
/// the absolute cutoff `rank_tol`.
pub fn generated_subspace(
    ob: &OperatorSubspace,
    phi: &[Complex64],
    tol: &Tolerances,
) -> Result<VectorSubspace> {
    check_normalized(phi, ob.dim_b)?;
    if ob.basis.is_empty() {
        return Ok(VectorSubspace {
            dim_b: ob.dim_b,
            basis: Vec::new(),
        });
    }
    let images: Vec<Vec<Complex64>> = ob.basis.iter().map(|o| o.mat_vec(phi)).collect();
    let m = CMatrix::from_columns(ob.dim_b, &images);
    let dec = svd(&m);
    let rank = rank_above(&dec.s, tol.rank_tol);
    Ok(VectorSubspace {
        dim_b: ob.dim_b,
        basis: dec.u.columns(0..rank),
    })
}

/// Result of testing `|phi><phi|` against the unit-trace cone slice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeMembership {
    pub in_cone: bool,
    /// `max(0, 1 - |Phi|_inf)`; the state is in S_B when this exceeds `margin_tol`.
    pub margin: f64,
    /// `|sum_n B_n |phi><phi| B_n^dagger|_inf`
    pub spectral_norm: f64,
}

/// Gram matrix `K_nm = <phi| B_n^dagger B_m |phi>` of the vectors `B_n |phi>`.
pub fn gram_of_images(ops: &[CMatrix], phi: &[Complex64]) -> CMatrix {
    let images: Vec<Vec<Complex64>> = ops.iter().map(|b| b.mat_vec(phi)).collect();
    CMatrix::from_fn(images.len(), images.len(), |n, m| {
        inner(&images[n], &images[m])
    })
}

/// `sum_n B_n |phi><phi| B_n^dagger`
pub fn image_frame_operator(ops: &[CMatrix], phi: &[Complex64]) -> CMatrix {
    let d = phi.len();
    let mut out = CMatrix::zeros(d, d);
    for b in ops {
        let v = b.mat_vec(phi);
        out = &out + &CMatrix::outer(&v, &v);
    }
    out
}

/// Spectral membership test for rank-one `|phi><phi|` in the cone.
///
/// The norm of `Phi = sum_n B_n |phi><phi| B_n^dagger` is read off the
/// `R_U x R_U` Gram matrix, whose nonzero spectrum coincides with `Phi`'s.
pub fn rank_one_in_cone(
    sd: &SchmidtDecomposition,
    phi: &[Complex64],
    tol: &Tolerances,
) -> Result<ConeMembership> {
    check_normalized(phi, sd.d_b)?;
    let norm = herm_eig_unchecked(&gram_of_images(&sd.b_ops, phi)).max();
    let margin = (1.0 - norm).max(0.0);
    Ok(ConeMembership {
        in_cone: margin <= tol.margin_tol,
        margin,
        spectral_norm: norm,
    })
}

/// Dimension of `span{B_m^dagger B_n}` over all pairs of ancilla Schmidt operators.
pub fn product_span_dim(sd: &SchmidtDecomposition, tol: &Tolerances) -> usize {
    let mut products = Vec::with_capacity(sd.rank * sd.rank);
    for bm in &sd.b_ops {
        let bm_adj = bm.adjoint();
        for bn in &sd.b_ops {
            products.push(&bm_adj * bn);
        }
    }
    if products.is_empty() {
        return 0;
    }
    rank_with_tol(&singular_values(&vectorize_columns(&products)), tol)
}
