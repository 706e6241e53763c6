//! Runs every gallery entry through the analysis pipeline and compares
//! against its expected facts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{make_example, GalleryEntry};
use crate::error::Result;
use crate::numerics::{Tolerances, ONE};
use crate::opspace::{generated_subspace, orthocomplement, rank_one_in_cone, span_b};
use crate::physicality::{analyze, Verdict};
use crate::random::min_eigenvalue;
use crate::schmidt::{schmidt_decompose, verify_unitarity_identities};
use crate::tomography::allows_indirect_tomography;

/// Witness quality thresholds.
pub const WITNESS_MIN_NEGATIVITY: f64 = 1e-4;
pub const WITNESS_CP_SLACK: f64 = 1e-9;
pub const WITNESS_TRACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntryReport {
    pub entry: String,
    pub params: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegressionReport {
    pub entries: Vec<EntryReport>,
    pub pass: bool,
}

/// The fixed list of entries exercised by `regress`.
pub fn default_suite() -> Result<Vec<GalleryEntry>> {
    let mut specs: Vec<(&str, Vec<(&str, String)>)> = vec![
        ("product", vec![("d_a", "2".into()), ("d_b", "2".into())]),
        ("product", vec![("d_a", "3".into()), ("d_b", "3".into())]),
    ];
    for d in 2..=4 {
        specs.push(("swap", vec![("d", d.to_string())]));
    }
    specs.push(("example3", vec![]));
    specs.push(("example3", vec![("theta", "1".into())]));
    specs.push(("example4", vec![]));
    for name in ["example5", "example6", "example7", "example8"] {
        for d in 3..=5 {
            specs.push((name, vec![("d_b", d.to_string())]));
        }
    }
    specs
        .into_iter()
        .map(|(name, kv)| {
            let params = kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            make_example(name, &params)
        })
        .collect()
}

fn check(checks: &mut Vec<Check>, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
    checks.push(Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    });
}

pub fn check_entry(
    entry: &GalleryEntry,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<EntryReport> {
    let mut checks = Vec::new();
    let exp = &entry.expected;
    let sd = schmidt_decompose(&entry.unitary, tol)?;
    check(
        &mut checks,
        "rank",
        sd.rank == exp.rank,
        format!("got {}, expected {}", sd.rank, exp.rank),
    );
    let ob = orthocomplement(&span_b(&sd), tol);
    check(
        &mut checks,
        "dim_ob",
        ob.dim() == exp.dim_ob,
        format!("got {}, expected {}", ob.dim(), exp.dim_ob),
    );
    let ids = verify_unitarity_identities(&sd, &entry.unitary)?;
    check(
        &mut checks,
        "unitarity_identities",
        ids.consistent,
        format!(
            "completeness {:.3e}, weight sum {:.3e}, reconstruction {:.3e}",
            ids.completeness_deviation, ids.weight_sum_deviation, ids.reconstruction_deviation
        ),
    );

    for (label, states, want_member) in [
        ("sb_member", &exp.sb_members, true),
        ("sb_non_member", &exp.sb_non_members, false),
    ] {
        for (i, phi) in states.iter().enumerate() {
            let m = rank_one_in_cone(&sd, phi, tol)?;
            let dim = generated_subspace(&ob, phi, tol)?.dim();
            let dual_member = dim == sd.d_b;
            check(
                &mut checks,
                format!("{label}[{i}]"),
                (!m.in_cone) == want_member && dual_member == want_member,
                format!("margin {:.6e}, dim O_B|phi> = {dim}", m.margin),
            );
        }
    }

    let report = analyze(&sd, samples, seed, tol)?;
    if let Some(v) = exp.verdict {
        check(
            &mut checks,
            "verdict",
            report.verdict == v,
            format!("got {:?}, expected {v:?}", report.verdict),
        );
    }
    match (&report.verdict, &report.witness) {
        (Verdict::NotP, Some(w)) => {
            let min_eig = min_eigenvalue(&w.sigma);
            let trace_err = (w.sigma.trace() - ONE).norm();
            check(
                &mut checks,
                "witness",
                min_eig < -WITNESS_MIN_NEGATIVITY
                    && trace_err <= WITNESS_TRACE_TOL
                    && w.cp_certificate >= -WITNESS_CP_SLACK,
                format!(
                    "min eig {min_eig:.6e}, trace error {trace_err:.3e}, min G eig {:.3e}",
                    w.cp_certificate
                ),
            );
        }
        (Verdict::NotP, None) => check(
            &mut checks,
            "witness",
            false,
            "no S_B member found for witness",
        ),
        _ => check(
            &mut checks,
            "witness",
            report.witness.is_none(),
            "no witness for P",
        ),
    }

    let tomo = allows_indirect_tomography(&sd, tol);
    if let Some(a) = exp.allows_tomography {
        check(
            &mut checks,
            "tomography",
            tomo.allows == a,
            format!("span dim {}, allows {}", tomo.span_dim, tomo.allows),
        );
    }

    let pass = checks.iter().all(|c| c.pass);
    Ok(EntryReport {
        entry: entry.name.clone(),
        params: entry.params.clone(),
        checks,
        pass,
    })
}

pub fn run_regression(
    entries: &[GalleryEntry],
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<RegressionReport> {
    let entries = entries
        .iter()
        .map(|e| check_entry(e, samples, seed, tol))
        .collect::<Result<Vec<_>>>()?;
    let pass = entries.iter().all(|e| e.pass);
    Ok(RegressionReport { entries, pass })
}
