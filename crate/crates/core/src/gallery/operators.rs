//! Operator families on the ancilla used by the examples.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{CMatrix, I, ONE};

/// `tau_jk = |j><k|`
pub fn tau(d: usize, j: usize, k: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    m[(j, k)] = ONE;
    m
}

/// Cyclic shift `X|j> = |j + 1 mod d>`.
pub fn shift(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |r, c| {
        if r == (c + 1) % d {
            ONE
        } else {
            crate::numerics::ZERO
        }
    })
}

/// Phase operator `Z|j> = exp(2 pi i j / d)|j>`.
pub fn phase(d: usize) -> CMatrix {
    let entries: Vec<Complex64> = (0..d)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / d as f64))
        .collect();
    CMatrix::diag(&entries)
}

/// `X^k Z^l`
pub fn weyl(d: usize, k: usize, l: usize) -> CMatrix {
    &shift(d).pow(k % d) * &phase(d).pow(l % d)
}

/// Eigenstates of the shift: `|k bar> = d^{-1/2} sum_j exp(2 pi i jk/d)|j>`.
pub fn fourier_vector(d: usize, k: usize) -> Vec<Complex64> {
    let norm = 1.0 / (d as f64).sqrt();
    (0..d)
        .map(|j| Complex64::from_polar(norm, 2.0 * PI * ((j * k) % d) as f64 / d as f64))
        .collect()
}

/// The Weyl group of dimension `d` with its Fourier basis.
#[derive(Debug, Clone)]
pub struct WeylFamily {
    pub d: usize,
    /// Indexed `k * d + l` for `X^k Z^l`.
    pub ops: Vec<CMatrix>,
    pub fourier: Vec<Vec<Complex64>>,
}

impl WeylFamily {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimensions(format!(
                "Weyl family needs d >= 2, got {d}"
            )));
        }
        let mut ops = Vec::with_capacity(d * d);
        for k in 0..d {
            for l in 0..d {
                ops.push(weyl(d, k, l));
            }
        }
        Ok(Self {
            d,
            ops,
            fourier: (0..d).map(|k| fourier_vector(d, k)).collect(),
        })
    }

    pub fn op(&self, k: usize, l: usize) -> &CMatrix {
        &self.ops[(k % self.d) * self.d + l % self.d]
    }
}

/// Pauli operators of the two-level subspace spanned by `|j>` and `|k>`.
#[derive(Debug, Clone)]
pub struct SubspacePaulis {
    pub i: CMatrix,
    pub z: CMatrix,
    pub x: CMatrix,
    pub y: CMatrix,
}

fn check_pair(d: usize, j: usize, k: usize) -> Result<()> {
    if j >= k || k >= d {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= j < k < d, got j = {j}, k = {k}, d = {d}"
        )));
    }
    Ok(())
}

pub fn subspace_paulis(d: usize, j: usize, k: usize) -> Result<SubspacePaulis> {
    check_pair(d, j, k)?;
    let (tjj, tkk, tjk, tkj) = (tau(d, j, j), tau(d, k, k), tau(d, j, k), tau(d, k, j));
    Ok(SubspacePaulis {
        i: &tjj + &tkk,
        z: &tjj - &tkk,
        x: &tjk + &tkj,
        y: (&tjk - &tkj).scale(-I),
    })
}

/// `U_j = I - I_0j + Z_0j`: the identity with `-1` in position `j`.
pub fn u_op(d: usize, j: usize) -> Result<CMatrix> {
    let p = subspace_paulis(d, 0, j)?;
    Ok(&(&CMatrix::identity(d) - &p.i) + &p.z)
}

/// `V_jk = I - I_jk + X_jk`
pub fn v_op(d: usize, j: usize, k: usize) -> Result<CMatrix> {
    let p = subspace_paulis(d, j, k)?;
    Ok(&(&CMatrix::identity(d) - &p.i) + &p.x)
}

/// `W_jk = I - I_jk + Y_jk`
pub fn w_op(d: usize, j: usize, k: usize) -> Result<CMatrix> {
    let p = subspace_paulis(d, j, k)?;
    Ok(&(&CMatrix::identity(d) - &p.i) + &p.y)
}

/// `U'_1 = I - I_01 - Z_01`
pub fn u_prime_1(d: usize) -> Result<CMatrix> {
    let p = subspace_paulis(d, 0, 1)?;
    Ok(&(&CMatrix::identity(d) - &p.i) - &p.z)
}

/// `W'_0j = I - I_0j - i Y_0j`
pub fn w_prime(d: usize, j: usize) -> Result<CMatrix> {
    let p = subspace_paulis(d, 0, j)?;
    Ok(&(&CMatrix::identity(d) - &p.i) - &p.y.scale(I))
}
