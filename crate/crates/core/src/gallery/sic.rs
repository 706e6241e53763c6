//! Weyl-covariant SIC fiducials and the Gram-matrix bound on `|Phi|_inf`.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{herm_eig_unchecked, inner, vec_norm, CMatrix, Tolerances, ZERO};
use crate::random::{random_state, seeded};

pub const SIC_TOL: f64 = 1e-7;
pub const SIC_RESTARTS: usize = 50;
pub const SIC_MAX_ITERS: usize = 5000;
pub const GRAM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SicCandidate {
    pub d: usize,
    pub fiducial: Vec<Complex64>,
    pub max_overlap_error: f64,
}

/// `(X^p Z^q phi)_j = w^{q (j - p)} phi_{j - p}` with `w = exp(2 pi i / d)`.
fn weyl_apply(d: usize, p: usize, q: usize, phi: &[Complex64]) -> Vec<Complex64> {
    (0..d)
        .map(|j| {
            let src = (j + d - p) % d;
            Complex64::from_polar(1.0, 2.0 * PI * ((q * src) % d) as f64 / d as f64) * phi[src]
        })
        .collect()
}

/// `((X^p Z^q)^dagger phi)_j = w^{-q j} phi_{j + p}`
fn weyl_adjoint_apply(d: usize, p: usize, q: usize, phi: &[Complex64]) -> Vec<Complex64> {
    (0..d)
        .map(|j| {
            Complex64::from_polar(1.0, -2.0 * PI * ((q * j) % d) as f64 / d as f64)
                * phi[(j + p) % d]
        })
        .collect()
}

fn check_state(phi: &[Complex64], d: usize) -> Result<()> {
    if phi.len() != d {
        return Err(Error::ShapeMismatch {
            expected: format!("state of dimension {d}"),
            found: format!("dimension {}", phi.len()),
        });
    }
    let norm = vec_norm(phi);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// `max_{(kl) != (k'l')} | |<phi_kl|phi_k'l'>|^2 - 1/(d+1) |` over the full orbit.
pub fn sic_overlap_check(phi: &[Complex64], d: usize) -> Result<f64> {
    check_state(phi, d)?;
    let orbit: Vec<Vec<Complex64>> = (0..d * d)
        .map(|n| weyl_apply(d, n / d, n % d, phi))
        .collect();
    let target = 1.0 / (d as f64 + 1.0);
    let mut worst: f64 = 0.0;
    for a in 0..orbit.len() {
        for b in (a + 1)..orbit.len() {
            worst = worst.max((inner(&orbit[a], &orbit[b]).norm_sqr() - target).abs());
        }
    }
    Ok(worst)
}

/// Objective `sum_{(p,q) != 0} (|<phi|D_pq|phi>|^2 - 1/(d+1))^2` and its
/// Wirtinger gradient with respect to `conj(phi)`.
fn objective(d: usize, phi: &[Complex64]) -> (f64, Vec<Complex64>) {
    let target = 1.0 / (d as f64 + 1.0);
    let mut f = 0.0;
    let mut grad = vec![ZERO; d];
    for p in 0..d {
        for q in 0..d {
            if p == 0 && q == 0 {
                continue;
            }
            let dphi = weyl_apply(d, p, q, phi);
            let c = inner(phi, &dphi);
            let e = c.norm_sqr() - target;
            f += e * e;
            let dadj = weyl_adjoint_apply(d, p, q, phi);
            for j in 0..d {
                grad[j] += (c.conj() * dphi[j] + c * dadj[j]) * (2.0 * e);
            }
        }
    }
    (f, grad)
}

/// Removes the component along `phi` so steps stay tangent to the sphere.
fn project_tangent(phi: &[Complex64], g: &mut [Complex64]) {
    let c = inner(phi, g);
    for (x, p) in g.iter_mut().zip(phi) {
        *x -= c * p;
    }
}

fn renormalize(v: &mut [Complex64]) {
    let n = vec_norm(v);
    for x in v.iter_mut() {
        *x /= n;
    }
}

/// Makes the first largest-modulus component real and positive.
pub fn fix_global_phase(phi: &mut [Complex64]) {
    let mut best = 0;
    for (k, z) in phi.iter().enumerate() {
        if z.norm() > phi[best].norm() + 1e-12 {
            best = k;
        }
    }
    if phi[best].norm() > 0.0 {
        let ph = phi[best].conj() / phi[best].norm();
        for z in phi.iter_mut() {
            *z *= ph;
        }
        phi[best] = Complex64::new(phi[best].re, 0.0);
    }
}

/// Projected gradient descent with Barzilai-Borwein steps and backtracking.
fn descend(d: usize, mut phi: Vec<Complex64>, max_iters: usize) -> Vec<Complex64> {
    let (mut f, mut g) = objective(d, &phi);
    project_tangent(&phi, &mut g);
    let mut step = 0.1;
    for _ in 0..max_iters {
        if f < 1e-26 {
            break;
        }
        let mut accepted = None;
        let mut alpha = step;
        for _ in 0..40 {
            let mut trial: Vec<Complex64> =
                phi.iter().zip(&g).map(|(p, gi)| p - gi * alpha).collect();
            renormalize(&mut trial);
            let (ft, gt) = objective(d, &trial);
            if ft < f {
                accepted = Some((trial, ft, gt));
                break;
            }
            alpha *= 0.5;
        }
        let Some((next, f_next, mut g_next)) = accepted else {
            break;
        };
        project_tangent(&next, &mut g_next);
        let s: Vec<Complex64> = next.iter().zip(&phi).map(|(a, b)| a - b).collect();
        let y: Vec<Complex64> = g_next.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = inner(&s, &y).re;
        step = if sy > 0.0 {
            inner(&s, &s).re / sy
        } else {
            alpha * 2.0
        };
        phi = next;
        f = f_next;
        g = g_next;
    }
    phi
}

/// Random-restart search; `None` means no restart reached [`SIC_TOL`].
pub fn find_sic_fiducial(d: usize, seed: u64, max_iters: usize) -> Result<Option<SicCandidate>> {
    if !(2..=7).contains(&d) {
        return Err(Error::InvalidParameter(format!(
            "SIC search supports 2 <= d <= 7, got {d}"
        )));
    }
    let mut rng = seeded(seed);
    for _ in 0..SIC_RESTARTS {
        let start = random_state(d, &mut rng);
        let mut phi = descend(d, start, max_iters);
        fix_global_phase(&mut phi);
        let err = sic_overlap_check(&phi, d)?;
        if err <= SIC_TOL {
            return Ok(Some(SicCandidate {
                d,
                fiducial: phi,
                max_overlap_error: err,
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Serialize, Deserialize)]
struct FiducialFile {
    d: usize,
    fiducial: Vec<Complex64>,
}

/// Cache shipped with the crate.
pub fn default_fiducial_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join("fiducials")
}

pub fn fiducial_path(dir: &Path, d: usize) -> PathBuf {
    dir.join(format!("sic_d{d}.json"))
}

/// Reads a cached fiducial, rejecting it if it fails the overlap check.
pub fn load_fiducial(dir: &Path, d: usize) -> Result<Option<SicCandidate>> {
    let path = fiducial_path(dir, d);
    if !path.exists() {
        return Ok(None);
    }
    let file: FiducialFile = serde_json::from_str(&fs::read_to_string(&path)?)?;
    if file.d != d {
        return Err(Error::Inconsistent(format!(
            "{} holds a fiducial for d = {}",
            path.display(),
            file.d
        )));
    }
    let err = sic_overlap_check(&file.fiducial, d)?;
    if err > SIC_TOL {
        return Err(Error::NotFiducial(err));
    }
    Ok(Some(SicCandidate {
        d,
        fiducial: file.fiducial,
        max_overlap_error: err,
    }))
}

pub fn store_fiducial(dir: &Path, c: &SicCandidate) -> Result<()> {
    fs::create_dir_all(dir)?;
    let file = FiducialFile {
        d: c.d,
        fiducial: c.fiducial.clone(),
    };
    fs::write(
        fiducial_path(dir, c.d),
        serde_json::to_string_pretty(&file)? + "\n",
    )?;
    Ok(())
}

/// Cached fiducial if present, otherwise a fresh search whose result is cached.
pub fn load_or_find_fiducial(dir: &Path, d: usize, seed: u64) -> Result<Option<SicCandidate>> {
    if let Some(c) = load_fiducial(dir, d)? {
        return Ok(Some(c));
    }
    let found = find_sic_fiducial(d, seed, SIC_MAX_ITERS)?;
    if let Some(c) = &found {
        store_fiducial(dir, c)?;
    }
    Ok(found)
}

/// `ceil(sqrt(d + 1) (d - 1))`: largest Weyl subset size for which the bound
/// guarantees the fiducial lies in S_B.
pub fn sic_rank_threshold(d: usize) -> usize {
    ((d as f64 + 1.0).sqrt() * (d as f64 - 1.0)).ceil() as usize
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramBound {
    /// `|sum_n |phi_n><phi_n| |_inf` for the unnormalized Weyl operators.
    pub norm: f64,
    /// `1 + (R_U - 1)/sqrt(d + 1)`
    pub bound: f64,
    pub within_bound: bool,
    /// `|Phi|_inf / d < 1` beyond `margin_tol`.
    pub fiducial_in_sb: bool,
}

pub fn gram_bound_check(
    d: usize,
    subset: &[(usize, usize)],
    phi: &[Complex64],
    tol: &Tolerances,
) -> Result<GramBound> {
    let err = sic_overlap_check(phi, d)?;
    if err > SIC_TOL {
        return Err(Error::NotFiducial(err));
    }
    for (i, &(k, l)) in subset.iter().enumerate() {
        if k >= d || l >= d {
            return Err(Error::InvalidParameter(format!(
                "Weyl index ({k}, {l}) out of range for d = {d}"
            )));
        }
        if subset[..i].contains(&(k, l)) {
            return Err(Error::InvalidParameter(format!(
                "Weyl index ({k}, {l}) repeated"
            )));
        }
    }
    let images: Vec<Vec<Complex64>> = subset
        .iter()
        .map(|&(k, l)| weyl_apply(d, k, l, phi))
        .collect();
    let gram = CMatrix::from_fn(images.len(), images.len(), |n, m| {
        inner(&images[n], &images[m])
    });
    let norm = herm_eig_unchecked(&gram).max();
    let bound = 1.0 + (subset.len() as f64 - 1.0) / (d as f64 + 1.0).sqrt();
    Ok(GramBound {
        norm,
        bound,
        within_bound: norm <= bound + GRAM_SLACK,
        fiducial_in_sb: 1.0 - norm / d as f64 > tol.margin_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::operators::weyl;
    use crate::numerics::ONE;

    #[test]
    fn weyl_apply_matches_dense_operators() {
        let d = 4;
        let mut rng = seeded(3);
        let phi = random_state(d, &mut rng);
        for p in 0..d {
            for q in 0..d {
                let w = weyl(d, p, q);
                let dense = w.mat_vec(&phi);
                let dense_adj = w.adjoint().mat_vec(&phi);
                for j in 0..d {
                    assert!((dense[j] - weyl_apply(d, p, q, &phi)[j]).norm() < 1e-14);
                    assert!((dense_adj[j] - weyl_adjoint_apply(d, p, q, &phi)[j]).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let d = 3;
        let mut rng = seeded(9);
        let phi = random_state(d, &mut rng);
        let (f0, g) = objective(d, &phi);
        let h = 1e-6;
        for j in 0..d {
            for dir in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let mut p = phi.clone();
                p[j] += dir * h;
                let (f1, _) = objective(d, &p);
                // df = 2 Re(conj(g) . dz)
                let predicted = 2.0 * (g[j].conj() * dir).re;
                assert!(((f1 - f0) / h - predicted).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn qutrit_fiducial_by_hand() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi = [ZERO, Complex64::new(h, 0.0), Complex64::new(-h, 0.0)];
        assert!(sic_overlap_check(&phi, 3).unwrap() <= 1e-12);
    }

    #[test]
    fn basis_state_is_not_a_qubit_fiducial() {
        let err = sic_overlap_check(&[ONE, ZERO], 2).unwrap();
        assert!((err - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn searches_small_dimensions() {
        for d in [2, 3] {
            let c = find_sic_fiducial(d, 1, SIC_MAX_ITERS).unwrap().unwrap();
            assert!(c.max_overlap_error <= SIC_TOL);
        }
        assert!(find_sic_fiducial(8, 1, 10).is_err());
    }

    #[test]
    fn full_qubit_orbit_saturates() {
        let c = find_sic_fiducial(2, 4, SIC_MAX_ITERS).unwrap().unwrap();
        let all = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let gb = gram_bound_check(2, &all, &c.fiducial, &Tolerances::default()).unwrap();
        assert!((gb.norm - 2.0).abs() < 1e-9);
        assert!(!gb.fiducial_in_sb);
        assert!(
            gram_bound_check(2, &[(0, 0), (0, 0)], &c.fiducial, &Tolerances::default()).is_err()
        );
        assert!(matches!(
            gram_bound_check(2, &all, &[ONE, ZERO], &Tolerances::default()),
            Err(Error::NotFiducial(_))
        ));
    }

    #[test]
    fn threshold_values() {
        assert_eq!(sic_rank_threshold(4), 7);
        assert_eq!(sic_rank_threshold(3), 4);
        assert_eq!(sic_rank_threshold(2), 2);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = find_sic_fiducial(2, 1, SIC_MAX_ITERS).unwrap().unwrap();
        store_fiducial(dir.path(), &c).unwrap();
        let back = load_fiducial(dir.path(), 2).unwrap().unwrap();
        assert_eq!(back.fiducial, c.fiducial);
        assert!(load_fiducial(dir.path(), 3).unwrap().is_none());
    }
}
