mod common;

use ancilla_core::channel::g_matrix;
use ancilla_core::gallery::xx_rotation;
use ancilla_core::numerics::{inner, CMatrix};
use ancilla_core::physicality::{analyze, construct_witness, evaluate_conditions, Verdict};
use ancilla_core::random::{random_traceless_hermitian, seeded};
use ancilla_core::{build_channel, SchmidtDecomposition};
use common::{decompose, gallery, haar, min_eig, random_element, states, tol};
use proptest::prelude::*;

fn lattice_holds(sd: &SchmidtDecomposition) {
    let tol = tol();
    let c = evaluate_conditions(sd, &tol).expect("conditions are consistent");
    assert_eq!(c.q1, c.q2);
    assert_eq!(c.q1, c.sigma_q1.is_some());
    if c.q3 {
        assert!(c.q2);
    }
    if c.p1 {
        assert_eq!(analyze(sd, 20, 1, &tol).unwrap().verdict, Verdict::P);
    }
}

#[test]
fn condition_lattice_on_gallery() {
    for entry in gallery() {
        lattice_holds(&decompose(&entry.unitary));
    }
}

#[test]
fn condition_lattice_on_haar_unitaries() {
    for d_a in 2..=3 {
        for d_b in 2..=4 {
            for k in 0..50 {
                lattice_holds(&decompose(&haar(
                    d_a,
                    d_b,
                    100 * d_a as u64 + 10 * d_b as u64 + k,
                )));
            }
        }
    }
}

#[test]
fn sampled_members_yield_cp_witnesses() {
    let tol = tol();
    for entry in gallery() {
        let sd = decompose(&entry.unitary);
        let report = analyze(&sd, 100, 3, &tol).unwrap();
        for m in report.sampled_sb_members.iter().take(10) {
            let w = construct_witness(&sd, &m.phi, &tol).unwrap();
            assert!(min_eig(&w.sigma) < 0.0, "{}", entry.name);
            assert!(w.cp_certificate >= -1e-9, "{}", entry.name);
        }
    }
}

#[test]
fn p_by_rank_conditions_rejects_every_nonpositive_ancilla() {
    let tol = tol();
    for entry in gallery() {
        let sd = decompose(&entry.unitary);
        let c = evaluate_conditions(&sd, &tol).unwrap();
        if !(c.p1 || c.p2) {
            continue;
        }
        let d = sd.d_b;
        let sigma0 = CMatrix::identity(d).scale_real(1.0 / d as f64);
        let mut rng = seeded(11);
        for k in 0..500 {
            let dir = random_traceless_hermitian(d, &mut rng);
            // scale so the smallest eigenvalue lands at -(k + 1) / 1000
            let lo = min_eig(&dir);
            let mu = (1.0 / d as f64 + (k + 1) as f64 / 1000.0) / -lo;
            let sigma = (&sigma0 + &dir.scale_real(mu)).hermitian_part();
            assert!(min_eig(&sigma) < 0.0);
            let ch = build_channel(&sd, &sigma, &tol).unwrap();
            assert!(
                ch.min_g_eig < -1e-7,
                "{} min G eig {}",
                entry.name,
                ch.min_g_eig
            );
        }
    }
}

#[test]
fn q1_direction_leaves_g_unchanged() {
    let tol = tol();
    for theta in [0.3, 1.0, std::f64::consts::FRAC_PI_2, 2.5] {
        let sd = decompose(&xx_rotation(theta));
        let c = evaluate_conditions(&sd, &tol).unwrap();
        let sigma_b = c.sigma_q1.expect("q1 certificate");
        let sigma = CMatrix::diag_real(&[0.7, 0.3]);
        let g = g_matrix(&sd.b_ops, &sigma);
        for mu in [0.5, -0.5, 5.0, -5.0] {
            let moved = &sigma + &sigma_b.scale_real(mu);
            assert!(g_matrix(&sd.b_ops, &moved).max_abs_diff(&g) <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn saturated_witness_keeps_left_right_positivity(seed in any::<u64>(), idx in 0usize..20) {
        let tol = tol();
        let entries = gallery();
        let entry = &entries[idx % entries.len()];
        let sd = decompose(&entry.unitary);
        let member = states(sd.d_b, 100, seed)
            .into_iter()
            .find_map(|phi| construct_witness(&sd, &phi, &tol).ok());
        if let Some(w) = member {
            let mut rng = seeded(seed);
            for _ in 0..1000 {
                let b = random_element(&sd.b_ops, &mut rng);
                let c = &b.adjoint() * &b;
                let value = (&c * &w.sigma).trace();
                prop_assert!(value.im.abs() <= 1e-9 * c.frobenius_norm().max(1.0));
                prop_assert!(value.re >= -1e-9 * c.frobenius_norm().max(1.0));
            }
            let image = w.sigma.mat_vec(&w.phi);
            prop_assert!((inner(&w.phi, &image).re + w.epsilon).abs() <= 1e-9);
        }
    }
}
