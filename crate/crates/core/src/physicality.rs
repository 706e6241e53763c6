//! Does complete positivity of the induced map force the ancilla operator to
//! be a density operator?
//!
//! Property P holds when every pure state lies in the unit-trace cone slice,
//! i.e. S_B is empty. The rank conditions p1/p2 imply P, as does a vector
//! annihilated from the left by all of O_B; q1/q2/q3 imply its negation. Between the thresholds the verdict comes from sampling S_B.
//! Any member of S_B yields an explicit non-positive ancilla operator whose
//! induced map is still completely positive.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::build_channel;
use crate::error::{Error, Result};
use crate::numerics::{
    basis_vector, herm_eig_unchecked, hermitian_basis, null_space, realify_functionals, CMatrix,
    Tolerances,
};
use crate::opspace::{
    orthocomplement, product_span_dim, rank_one_in_cone, span_b, OperatorSubspace,
};
use crate::random::{random_state, seeded};
use crate::schmidt::SchmidtDecomposition;

/// Largest margin used to build a witness; keeps the eigenvalue bound finite.
pub const DELTA_CAP: f64 = 0.49;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionVerdict {
    #[serde(rename = "P")]
    P,
    #[serde(rename = "NOT_P")]
    NotP,
    #[serde(rename = "UNDECIDED_BY_CONDITIONS")]
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "P")]
    P,
    #[serde(rename = "NOT_P")]
    NotP,
    /// No condition fired and no sampled state fell in S_B.
    #[serde(rename = "P_EMPIRICAL")]
    PEmpirical,
}

/// The sufficient conditions evaluated on a decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Conditions {
    pub r_u: usize,
    pub dim_ob: usize,
    pub d_b: usize,
    /// `dim O_B = 0`
    pub p1: bool,
    /// `R_U > d_B^2 - d_B`
    pub p2: bool,
    /// A nonzero Hermitian operator annihilated by every `B_m^dagger B_n` exists.
    pub q1: bool,
    /// `dim span{B_m^dagger B_n} < d_B^2`
    pub q2: bool,
    /// `R_U < d_B`
    pub q3: bool,
    pub product_span_dim: usize,
    /// A unit `psi` with `<psi| O = 0` for every `O` in O_B, so `O_B|phi>` never fills `H_B`.
    pub common_annihilator: Option<Vec<Complex64>>,
    pub verdict: ConditionVerdict,
    /// The Hermitian operator certifying q1, when it holds.
    pub sigma_q1: Option<CMatrix>,
}

pub fn evaluate_conditions(sd: &SchmidtDecomposition, tol: &Tolerances) -> Result<Conditions> {
    let d = sd.d_b;
    let r_u = sd.rank;
    let ob = orthocomplement(&span_b(sd), tol);
    let dim_ob = ob.dim();
    if r_u + dim_ob != d * d {
        return Err(Error::Inconsistent(format!(
            "R_U + dim(O_B) = {} + {} != {}",
            r_u,
            dim_ob,
            d * d
        )));
    }
    let span = product_span_dim(sd, tol);
    let sigma_q1 = find_sigma_witness_q1(sd, tol);
    let p1 = dim_ob == 0;
    let p2 = r_u > d * d - d;
    let q2 = span < d * d;
    let q1 = sigma_q1.is_some();
    let q3 = r_u < d;
    if q1 != q2 {
        return Err(Error::Inconsistent(format!(
            "q1 = {q1} but q2 = {q2} (product span dimension {span})"
        )));
    }
    if q3 && !q2 {
        return Err(Error::Inconsistent("q3 holds but q2 does not".into()));
    }
    let common_annihilator = if p1 {
        None
    } else {
        common_left_annihilator(&ob, tol)
    };
    let proves_p = p1 || p2 || common_annihilator.is_some();
    let verdict = if proves_p {
        ConditionVerdict::P
    } else if q1 || q2 || q3 {
        ConditionVerdict::NotP
    } else {
        ConditionVerdict::Undecided
    };
    if proves_p && (q1 || q2 || q3) {
        return Err(Error::Inconsistent(
            "conditions for P and for not-P hold simultaneously".into(),
        ));
    }
    Ok(Conditions {
        r_u,
        dim_ob,
        d_b: d,
        p1,
        p2,
        q1,
        q2,
        q3,
        product_span_dim: span,
        common_annihilator,
        verdict,
        sigma_q1,
    })
}

/// Null space of the stacked adjoints `O_n^dagger`.
pub fn common_left_annihilator(ob: &OperatorSubspace, tol: &Tolerances) -> Option<Vec<Complex64>> {
    if ob.basis.is_empty() {
        return None;
    }
    let d = ob.dim_b;
    let adj: Vec<CMatrix> = ob.basis.iter().map(CMatrix::adjoint).collect();
    let stacked = CMatrix::from_fn(d * adj.len(), d, |r, c| adj[r / d][(r % d, c)]);
    null_space(&stacked, tol).into_iter().next()
}

/// Searches for a unit-Frobenius Hermitian `Sigma` with `tr(B_m^dagger B_n Sigma) = 0`
/// for all pairs, by a null space over the `d_B^2` real Hermitian coordinates.
pub fn find_sigma_witness_q1(sd: &SchmidtDecomposition, tol: &Tolerances) -> Option<CMatrix> {
    let d = sd.d_b;
    let mut products = Vec::with_capacity(sd.rank * sd.rank);
    for bm in &sd.b_ops {
        let bm_adj = bm.adjoint();
        for bn in &sd.b_ops {
            products.push(&bm_adj * bn);
        }
    }
    let basis = hermitian_basis(d);
    if products.is_empty() {
        return Some(basis[0].clone());
    }
    let design = realify_functionals(&products, &basis);
    let kernel = null_space(&design, tol);
    let coords = kernel.first()?;
    let mut sigma = CMatrix::zeros(d, d);
    for (x, h) in coords.iter().zip(&basis) {
        sigma = &sigma + &h.scale_real(x.re);
    }
    let n = sigma.frobenius_norm();
    Some(sigma.scale_real(1.0 / n).hermitian_part())
}

/// A sampled state found in S_B.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SbMember {
    pub phi: Vec<Complex64>,
    pub margin: f64,
}

/// Outcome of Haar sampling for S_B members.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SbSample {
    pub tested: usize,
    pub members: Vec<SbMember>,
}

/// Draws `n_samples` Haar-random states and keeps those outside the cone.
pub fn sample_sb(
    sd: &SchmidtDecomposition,
    n_samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<SbSample> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "n_samples must be at least 1".into(),
        ));
    }
    let mut rng = seeded(seed);
    sample_sb_with(sd, n_samples, &mut rng, tol)
}

pub fn sample_sb_with(
    sd: &SchmidtDecomposition,
    n_samples: usize,
    rng: &mut impl Rng,
    tol: &Tolerances,
) -> Result<SbSample> {
    let mut members = Vec::new();
    for _ in 0..n_samples {
        let phi = random_state(sd.d_b, rng);
        let m = rank_one_in_cone(sd, &phi, tol)?;
        if !m.in_cone {
            members.push(SbMember {
                phi,
                margin: m.margin,
            });
        }
    }
    Ok(SbSample {
        tested: n_samples,
        members,
    })
}

/// Non-positive unit-trace ancilla operator with a completely positive map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AncillaWitness {
    pub phi: Vec<Complex64>,
    pub delta: f64,
    pub epsilon: f64,
    pub sigma: CMatrix,
    /// Smallest eigenvalue of the resulting G matrix.
    pub cp_certificate: f64,
}

/// Builds `sigma = -eps |phi><phi| + (1 + eps)/(d_B - 1) (I - |phi><phi|)` with
/// `delta = min(margin, 0.49)` and `eps = delta / (d_B - 1 - delta d_B)`.
pub fn construct_witness(
    sd: &SchmidtDecomposition,
    phi: &[Complex64],
    tol: &Tolerances,
) -> Result<AncillaWitness> {
    let d = sd.d_b;
    if d < 2 {
        return Err(Error::InvalidDimensions("witness needs d_b >= 2".into()));
    }
    let membership = rank_one_in_cone(sd, phi, tol)?;
    if membership.in_cone {
        return Err(Error::NotInSb {
            margin: membership.margin,
            margin_tol: tol.margin_tol,
        });
    }
    let delta = membership.margin.min(DELTA_CAP);
    let df = d as f64;
    let epsilon = delta / (df - 1.0 - delta * df);
    let proj = CMatrix::outer(phi, phi);
    let rest = &CMatrix::identity(d) - &proj;
    let sigma = (&proj.scale_real(-epsilon) + &rest.scale_real((1.0 + epsilon) / (df - 1.0)))
        .hermitian_part();
    let ch = build_channel(sd, &sigma, tol)?;
    Ok(AncillaWitness {
        phi: phi.to_vec(),
        delta,
        epsilon,
        sigma,
        cp_certificate: ch.min_g_eig,
    })
}

/// Canonical probe states: computational basis, then Fourier basis.
pub fn probe_states(d: usize) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = (0..d).map(|k| basis_vector(d, k)).collect();
    let norm = 1.0 / (d as f64).sqrt();
    for k in 0..d {
        out.push(
            (0..d)
                .map(|j| {
                    Complex64::from_polar(
                        norm,
                        2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64,
                    )
                })
                .collect(),
        );
    }
    out
}

/// Picks the S_B member with the largest margin among probe states,
/// eigenvectors of a q1 certificate, and sampled members (first wins ties).
pub fn select_witness_state(
    sd: &SchmidtDecomposition,
    conditions: &Conditions,
    sampled: &[SbMember],
    tol: &Tolerances,
) -> Result<Option<SbMember>> {
    let mut candidates = probe_states(sd.d_b);
    if let Some(sigma) = &conditions.sigma_q1 {
        let eig = herm_eig_unchecked(sigma);
        candidates.extend((0..sd.d_b).map(|k| eig.vector(k)));
    }
    let mut best: Option<SbMember> = None;
    for phi in candidates {
        let m = rank_one_in_cone(sd, &phi, tol)?;
        if !m.in_cone && best.as_ref().is_none_or(|b| m.margin > b.margin) {
            best = Some(SbMember {
                phi,
                margin: m.margin,
            });
        }
    }
    for member in sampled {
        if best.as_ref().is_none_or(|b| member.margin > b.margin) {
            best = Some(member.clone());
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhysicalityReport {
    pub r_u: usize,
    pub dim_ob: usize,
    pub p1: bool,
    pub p2: bool,
    pub q1: bool,
    pub q2: bool,
    pub q3: bool,
    pub common_annihilator: bool,
    pub condition_verdict: ConditionVerdict,
    pub verdict: Verdict,
    pub samples_tested: usize,
    pub sampled_sb_members: Vec<SbMember>,
    pub witness: Option<AncillaWitness>,
}

/// Conditions, sampling and (for not-P) a witness, in one report.
///
/// Sampling always runs; a hit forces NOT_P. When no condition fires and no
/// sample hits, the verdict is P_EMPIRICAL.
pub fn analyze(
    sd: &SchmidtDecomposition,
    n_samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<PhysicalityReport> {
    let conditions = evaluate_conditions(sd, tol)?;
    let sample = sample_sb(sd, n_samples, seed, tol)?;
    let verdict = if !sample.members.is_empty() {
        Verdict::NotP
    } else {
        match conditions.verdict {
            ConditionVerdict::P => Verdict::P,
            ConditionVerdict::NotP => Verdict::NotP,
            ConditionVerdict::Undecided => Verdict::PEmpirical,
        }
    };
    let witness = if verdict == Verdict::NotP {
        select_witness_state(sd, &conditions, &sample.members, tol)?
            .map(|m| construct_witness(sd, &m.phi, tol))
            .transpose()?
    } else {
        None
    };
    Ok(PhysicalityReport {
        r_u: conditions.r_u,
        dim_ob: conditions.dim_ob,
        p1: conditions.p1,
        p2: conditions.p2,
        q1: conditions.q1,
        q2: conditions.q2,
        q3: conditions.q3,
        common_annihilator: conditions.common_annihilator.is_some(),
        condition_verdict: conditions.verdict,
        verdict,
        samples_tested: sample.tested,
        sampled_sb_members: sample.members,
        witness,
    })
}
