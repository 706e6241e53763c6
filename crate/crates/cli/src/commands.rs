use ancilla_core::gallery::make_example;
use ancilla_core::gallery::regress::{default_suite, run_regression};
use ancilla_core::physicality::construct_witness;
use ancilla_core::schmidt::{verify_unitarity_identities, UnitarityReport};
use ancilla_core::tomography::tomography_round_trip;
use ancilla_core::{
    allows_indirect_tomography, analyze as analyze_physicality, build_channel, schmidt_decompose,
    PhysicalityReport, SchmidtDecomposition, Tolerances, TomographyVerdict, Verdict,
};
use serde::Serialize;

use crate::input::{load_matrix, load_state, load_unitary, parse_params};
use crate::output::{emit, to_json};
use crate::{CliError, Common};

type CmdResult = Result<u8, CliError>;

fn write<T: Serialize>(value: &T, common: &Common) -> Result<(), CliError> {
    let text = to_json(value).map_err(|e| CliError::validation(e.to_string()))?;
    emit(&text, common.out.as_deref())
        .map_err(|e| CliError::validation(format!("cannot write output: {e}")))
}

fn decompose(input: &str, tol: &Tolerances) -> Result<SchmidtDecomposition, CliError> {
    let loaded = load_unitary(input)?;
    schmidt_decompose(&loaded.unitary, tol).map_err(CliError::from_core)
}

fn samples(common: &Common) -> usize {
    usize::try_from(common.samples).unwrap_or(usize::MAX)
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    input: &'a str,
    seed: u64,
    samples: u64,
    tolerances: Tolerances,
    schmidt: SchmidtDecomposition,
    unitarity: UnitarityReport,
    physicality: PhysicalityReport,
    tomography: TomographyVerdict,
}

pub fn analyze(input: &str, common: &Common) -> CmdResult {
    let tol = common.tolerances()?;
    let loaded = load_unitary(input)?;
    let sd = schmidt_decompose(&loaded.unitary, &tol).map_err(CliError::from_core)?;
    let unitarity =
        verify_unitarity_identities(&sd, &loaded.unitary).map_err(CliError::from_core)?;
    let physicality = analyze_physicality(&sd, samples(common), common.seed, &tol)
        .map_err(CliError::from_core)?;
    let tomography = allows_indirect_tomography(&sd, &tol);
    write(
        &AnalyzeOutput {
            input: &loaded.source,
            seed: common.seed,
            samples: common.samples,
            tolerances: tol,
            schmidt: sd,
            unitarity,
            physicality,
            tomography,
        },
        common,
    )?;
    Ok(0)
}

pub fn witness(input: &str, phi: Option<&str>, common: &Common) -> CmdResult {
    let tol = common.tolerances()?;
    let sd = decompose(input, &tol)?;
    let w = match phi {
        Some(path) => {
            let phi = load_state(path)?;
            construct_witness(&sd, &phi, &tol).map_err(CliError::from_core)?
        }
        None => {
            let report = analyze_physicality(&sd, samples(common), common.seed, &tol)
                .map_err(CliError::from_core)?;
            match (report.verdict, report.witness) {
                (_, Some(w)) => w,
                (Verdict::P, None) => {
                    return Err(CliError::precondition(
                        "verdict is P: complete positivity forces a positive ancilla, no witness exists",
                    ))
                }
                (v, None) => {
                    return Err(CliError::precondition(format!(
                        "verdict is {}: no S_B member found in {} samples",
                        serde_json::to_string(&v).unwrap_or_default(),
                        common.samples
                    )))
                }
            }
        }
    };
    write(&w, common)?;
    Ok(0)
}

pub fn check_cp(input: &str, sigma: &str, common: &Common) -> CmdResult {
    let tol = common.tolerances()?;
    let sd = decompose(input, &tol)?;
    let sigma = load_matrix(sigma)?;
    let channel = build_channel(&sd, &sigma, &tol).map_err(CliError::from_core)?;
    write(&channel.verdict(), common)?;
    Ok(0)
}

pub fn tomography(input: &str, sigma: Option<&str>, common: &Common) -> CmdResult {
    let tol = common.tolerances()?;
    let sd = decompose(input, &tol)?;
    let verdict = match sigma {
        Some(path) => {
            let sigma = load_matrix(path)?;
            tomography_round_trip(&sd, &sigma, &tol).map_err(CliError::from_core)?
        }
        None => allows_indirect_tomography(&sd, &tol),
    };
    write(&verdict, common)?;
    Ok(0)
}

pub fn gallery(name: &str, params: &[String], common: &Common) -> CmdResult {
    let params = parse_params(params)?;
    let entry = make_example(name, &params).map_err(CliError::from_core)?;
    write(&entry, common)?;
    Ok(0)
}

pub fn regress(common: &Common) -> CmdResult {
    let tol = common.tolerances()?;
    let suite = default_suite().map_err(CliError::from_core)?;
    let report =
        run_regression(&suite, samples(common), common.seed, &tol).map_err(CliError::from_core)?;
    write(&report, common)?;
    for e in report.entries.iter().filter(|e| !e.pass) {
        for c in e.checks.iter().filter(|c| !c.pass) {
            eprintln!("FAIL {} {:?} {}: {}", e.entry, e.params, c.name, c.detail);
        }
    }
    Ok(if report.pass { 0 } else { 1 })
}
