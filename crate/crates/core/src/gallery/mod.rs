//! The worked examples: product, SWAP, two-qubit XX rotation, qutrit-qubit,
//! the controlled constructions with `3d-2`, `2d`, `d^2-d` targets, and the
//! Weyl-controlled family, each with the facts it is expected to satisfy.

pub mod operators;
pub mod regress;
pub mod sic;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{basis_vector, kron, CMatrix, ONE, ZERO};
use crate::physicality::Verdict;
use crate::random::{random_state, random_unitary, seeded};
use crate::schmidt::{controlled, BipartiteUnitary};

pub use operators::{
    fourier_vector, phase, shift, subspace_paulis, tau, u_op, u_prime_1, v_op, w_op, w_prime, weyl,
    SubspacePaulis, WeylFamily,
};
pub use sic::{
    default_fiducial_dir, find_sic_fiducial, gram_bound_check, load_or_find_fiducial,
    sic_overlap_check, sic_rank_threshold, GramBound, SicCandidate,
};

/// What the analysis pipeline must reproduce for an entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpectedFacts {
    pub rank: usize,
    pub dim_ob: usize,
    /// `None` where the construction alone does not settle it.
    pub verdict: Option<Verdict>,
    pub sb_members: Vec<Vec<Complex64>>,
    pub sb_non_members: Vec<Vec<Complex64>>,
    pub allows_tomography: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GalleryEntry {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub unitary: BipartiteUnitary,
    pub expected: ExpectedFacts,
}

pub const EXAMPLE_NAMES: &[&str] = &[
    "product", "swap", "example3", "example4", "example5", "example6", "example7", "example8",
    "weyl",
];

/// Parameters given as `k=v` strings, consumed as they are read.
struct Params {
    raw: BTreeMap<String, String>,
    used: BTreeMap<String, String>,
}

impl Params {
    fn new(raw: &BTreeMap<String, String>) -> Self {
        Self {
            raw: raw.clone(),
            used: BTreeMap::new(),
        }
    }

    fn get<T>(&mut self, key: &str, default: T) -> Result<T>
    where
        T: std::str::FromStr + ToString,
    {
        let value = match self.raw.remove(key) {
            Some(s) => s.parse().map_err(|_| {
                Error::InvalidParameter(format!("cannot parse parameter {key} = {s:?}"))
            })?,
            None => default,
        };
        self.used.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    fn text(&mut self, key: &str) -> Result<String> {
        let value = self
            .raw
            .remove(key)
            .ok_or_else(|| Error::InvalidParameter(format!("missing parameter {key}")))?;
        self.used.insert(key.to_string(), value.clone());
        Ok(value)
    }

    fn finish(self) -> Result<BTreeMap<String, String>> {
        if let Some(k) = self.raw.keys().next() {
            return Err(Error::InvalidParameter(format!("unknown parameter {k}")));
        }
        Ok(self.used)
    }
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.into()))
    }
}

fn h2(a: Complex64, b: Complex64) -> Vec<Complex64> {
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    vec![a / n, b / n]
}

fn uniform(d: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0 / (d as f64).sqrt(), 0.0); d]
}

/// `(|j> + |k>)/sqrt2`
fn pair_plus(d: usize, j: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; d];
    v[j] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[k] = v[j];
    v
}

/// Builds a named example. Unknown names and parameters are rejected.
pub fn make_example(name: &str, params: &BTreeMap<String, String>) -> Result<GalleryEntry> {
    let mut p = Params::new(params);
    let (canonical, unitary, expected) = match name {
        "product" | "example1" => {
            let d_a: usize = p.get("d_a", 2)?;
            let d_b: usize = p.get("d_b", 2)?;
            let seed: u64 = p.get("seed", 7)?;
            require(d_a >= 1 && d_b >= 2, "product needs d_a >= 1, d_b >= 2")?;
            let (u, members) = product(d_a, d_b, seed);
            (
                "product",
                u,
                ExpectedFacts {
                    rank: 1,
                    dim_ob: d_b * d_b - 1,
                    verdict: Some(Verdict::NotP),
                    sb_members: members,
                    sb_non_members: Vec::new(),
                    allows_tomography: Some(false),
                },
            )
        }
        "swap" | "example2" => {
            let d: usize = p.get("d", 2)?;
            require(d >= 2, "swap needs d >= 2")?;
            (
                "swap",
                swap(d),
                ExpectedFacts {
                    rank: d * d,
                    dim_ob: 0,
                    verdict: Some(Verdict::P),
                    sb_members: Vec::new(),
                    sb_non_members: vec![basis_vector(d, 0), uniform(d), fourier_vector(d, 1)],
                    allows_tomography: Some(true),
                },
            )
        }
        "example3" => {
            let theta: f64 = p.get("theta", PI / 2.0)?;
            require(theta > 0.0 && theta < PI, "example3 needs 0 < theta < pi")?;
            let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            (
                "example3",
                xx_rotation(theta),
                ExpectedFacts {
                    rank: 2,
                    dim_ob: 2,
                    verdict: Some(Verdict::NotP),
                    sb_members: vec![
                        basis_vector(2, 0),
                        basis_vector(2, 1),
                        h2(ONE, crate::numerics::I),
                    ],
                    sb_non_members: vec![vec![r, r], vec![r, -r]],
                    allows_tomography: Some(false),
                },
            )
        }
        "example4" => (
            "example4",
            qutrit_qubit(),
            ExpectedFacts {
                rank: 3,
                dim_ob: 1,
                verdict: Some(Verdict::P),
                sb_members: Vec::new(),
                sb_non_members: vec![
                    basis_vector(2, 0),
                    h2(ONE, ONE),
                    h2(ONE, crate::numerics::I),
                    h2(Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.9)),
                ],
                allows_tomography: Some(true),
            },
        ),
        "example5" => {
            let d: usize = p.get("d_b", 3)?;
            require(d >= 2, "example5 needs d_b >= 2")?;
            (
                "example5",
                example5(d)?,
                ExpectedFacts {
                    rank: 3 * d - 2,
                    dim_ob: d * d - 3 * d + 2,
                    verdict: Some(Verdict::P),
                    sb_members: Vec::new(),
                    sb_non_members: vec![basis_vector(d, 0), basis_vector(d, d - 1), uniform(d)],
                    allows_tomography: Some(true),
                },
            )
        }
        "example6" => {
            let d: usize = p.get("d_b", 3)?;
            require(d >= 2, "example6 needs d_b >= 2")?;
            (
                "example6",
                example6(d)?,
                ExpectedFacts {
                    rank: 2 * d,
                    dim_ob: d * d - 2 * d,
                    verdict: Some(Verdict::P),
                    sb_members: Vec::new(),
                    sb_non_members: vec![basis_vector(d, 0), basis_vector(d, d - 1), uniform(d)],
                    allows_tomography: Some(true),
                },
            )
        }
        "example7" => {
            let d: usize = p.get("d_b", 3)?;
            require(d >= 3, "example7 needs d_b >= 3")?;
            let mut non_members = vec![basis_vector(d, 0), basis_vector(d, 1), basis_vector(d, 2)];
            non_members.push(pair_plus(d, 1, 2));
            (
                "example7",
                example7(d)?,
                ExpectedFacts {
                    rank: d * d - d,
                    dim_ob: d,
                    verdict: Some(Verdict::NotP),
                    sb_members: vec![pair_plus(d, 0, 1), uniform(d)],
                    sb_non_members: non_members,
                    allows_tomography: Some(true),
                },
            )
        }
        "example8" => {
            let d: usize = p.get("d_b", 3)?;
            require(d >= 3, "example8 needs d_b >= 3")?;
            let mut non_members: Vec<Vec<Complex64>> = (0..d).map(|k| basis_vector(d, k)).collect();
            non_members.extend((0..d).map(|k| fourier_vector(d, k)));
            let mut rng = seeded(8);
            (
                "example8",
                example8(d)?,
                ExpectedFacts {
                    rank: 2 * d - 1,
                    dim_ob: (d - 1) * (d - 1),
                    verdict: Some(Verdict::NotP),
                    sb_members: vec![random_state(d, &mut rng), pair_plus(d, 0, 1)],
                    sb_non_members: non_members,
                    allows_tomography: Some(true),
                },
            )
        }
        "weyl" => {
            let d: usize = p.get("d_b", 3)?;
            let ops = parse_weyl_list(&p.text("ops")?)?;
            require(d >= 2, "weyl needs d_b >= 2")?;
            let r = ops.len();
            (
                "weyl",
                weyl_controlled(d, &ops)?,
                ExpectedFacts {
                    rank: r,
                    dim_ob: d * d - r,
                    verdict: None,
                    sb_members: Vec::new(),
                    sb_non_members: Vec::new(),
                    allows_tomography: None,
                },
            )
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown example {other:?}; known: {}",
                EXAMPLE_NAMES.join(", ")
            )))
        }
    };
    Ok(GalleryEntry {
        name: canonical.to_string(),
        params: p.finish()?,
        unitary,
        expected,
    })
}

/// Parses `k:l,k:l,...`.
pub fn parse_weyl_list(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(|item| {
            let (k, l) = item
                .split_once(':')
                .ok_or_else(|| Error::InvalidParameter(format!("expected k:l, got {item:?}")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidParameter(format!("bad Weyl index {t:?}")))
            };
            Ok((parse(k)?, parse(l)?))
        })
        .collect()
}

/// Seeded Haar `U_A (x) U_B`; every state of B is in S_B.
pub fn product(d_a: usize, d_b: usize, seed: u64) -> (BipartiteUnitary, Vec<Vec<Complex64>>) {
    let mut rng = seeded(seed);
    let ua = random_unitary(d_a, &mut rng);
    let ub = random_unitary(d_b, &mut rng);
    let u = BipartiteUnitary::new(kron(&ua, &ub), d_a, d_b).expect("product of unitaries");
    (
        u,
        vec![
            basis_vector(d_b, 0),
            fourier_vector(d_b, 1),
            random_state(d_b, &mut rng),
        ],
    )
}

/// `SWAP = sum_jk |k><j| (x) |j><k|`
pub fn swap(d: usize) -> BipartiteUnitary {
    let u = CMatrix::from_fn(d * d, d * d, |r, c| {
        if r == (c % d) * d + c / d {
            ONE
        } else {
            ZERO
        }
    });
    BipartiteUnitary::new(u, d, d).expect("permutation matrix")
}

/// `exp(i theta X (x) X / 2)`
pub fn xx_rotation(theta: f64) -> BipartiteUnitary {
    let x = shift(2);
    let u = &CMatrix::identity(4).scale_real((theta / 2.0).cos())
        + &kron(&x, &x).scale(Complex64::new(0.0, (theta / 2.0).sin()));
    BipartiteUnitary::new(u, 2, 2).expect("rotation is unitary")
}

/// `|0><0| (x) I + |1><1| (x) X + |2><2| (x) Z`
pub fn qutrit_qubit() -> BipartiteUnitary {
    controlled(&[
        CMatrix::identity(2),
        shift(2),
        CMatrix::diag_real(&[1.0, -1.0]),
    ])
    .expect("controlled unitary")
}

/// Targets `I; U_j; V_0j; W_0j` for `j = 1..d-1`.
pub fn example5(d: usize) -> Result<BipartiteUnitary> {
    let mut t = vec![CMatrix::identity(d)];
    for j in 1..d {
        t.push(u_op(d, j)?);
    }
    for j in 1..d {
        t.push(v_op(d, 0, j)?);
    }
    for j in 1..d {
        t.push(w_op(d, 0, j)?);
    }
    controlled(&t)
}

/// Targets `I; U'_1; V_0j; W'_0j`.
pub fn example6(d: usize) -> Result<BipartiteUnitary> {
    let mut t = vec![CMatrix::identity(d), u_prime_1(d)?];
    for j in 1..d {
        t.push(v_op(d, 0, j)?);
    }
    for j in 1..d {
        t.push(w_prime(d, j)?);
    }
    controlled(&t)
}

/// Targets `I; U_j; V_jk, W_jk (1 <= j < k); W_0j (j >= 2)`.
pub fn example7(d: usize) -> Result<BipartiteUnitary> {
    let mut t = vec![CMatrix::identity(d)];
    for j in 1..d {
        t.push(u_op(d, j)?);
    }
    for j in 1..d {
        for k in (j + 1)..d {
            t.push(v_op(d, j, k)?);
        }
    }
    for j in 1..d {
        for k in (j + 1)..d {
            t.push(w_op(d, j, k)?);
        }
    }
    for j in 2..d {
        t.push(w_op(d, 0, j)?);
    }
    controlled(&t)
}

/// Weyl-controlled unitary on `{I, Z, .., Z^{d-1}, X, .., X^{d-1}}`.
pub fn example8(d: usize) -> Result<BipartiteUnitary> {
    let mut ops = vec![(0, 0)];
    ops.extend((1..d).map(|l| (0, l)));
    ops.extend((1..d).map(|k| (k, 0)));
    weyl_controlled(d, &ops)
}

/// `sum_n |n><n| (x) X^{k_n} Z^{l_n}` over distinct Weyl indices.
pub fn weyl_controlled(d: usize, ops: &[(usize, usize)]) -> Result<BipartiteUnitary> {
    if ops.is_empty() {
        return Err(Error::InvalidParameter("empty Weyl subset".into()));
    }
    for (i, &(k, l)) in ops.iter().enumerate() {
        if k >= d || l >= d {
            return Err(Error::InvalidParameter(format!(
                "Weyl index ({k}, {l}) out of range for d = {d}"
            )));
        }
        if ops[..i].contains(&(k, l)) {
            return Err(Error::InvalidParameter(format!(
                "Weyl index ({k}, {l}) repeated"
            )));
        }
    }
    let targets: Vec<CMatrix> = ops.iter().map(|&(k, l)| weyl(d, k, l)).collect();
    controlled(&targets)
}
