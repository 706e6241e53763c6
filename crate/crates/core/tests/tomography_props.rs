mod common;

use ancilla_core::channel::g_matrix;
use ancilla_core::gallery::{example7, example8, swap};
use ancilla_core::opspace::rank_one_in_cone;
use ancilla_core::random::seeded;
use ancilla_core::tomography::{reconstruct_sigma, tomography_round_trip};
use ancilla_core::{allows_indirect_tomography, BipartiteUnitary};
use common::{decompose, states, tol, unit_trace_hermitian};
use proptest::prelude::*;

fn tomographic() -> Vec<(String, BipartiteUnitary)> {
    let mut out = vec![
        ("swap2".to_string(), swap(2)),
        ("swap3".to_string(), swap(3)),
    ];
    for d in 3..=5 {
        out.push((format!("example7/{d}"), example7(d).unwrap()));
        out.push((format!("example8/{d}"), example8(d).unwrap()));
    }
    out
}

#[test]
fn examples_7_and_8_combine_sb_members_with_tomography() {
    let tol = tol();
    for d in 3..=5 {
        for bu in [example7(d).unwrap(), example8(d).unwrap()] {
            let sd = decompose(&bu);
            let has_member = states(d, 200, d as u64)
                .iter()
                .any(|phi| !rank_one_in_cone(&sd, phi, &tol).unwrap().in_cone);
            let allows = allows_indirect_tomography(&sd, &tol).allows;
            assert_eq!((has_member, allows), (true, true), "d_b = {d}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn distinct_ancillas_give_distinct_maps(seed in any::<u64>(), idx in 0usize..8) {
        let tol = tol();
        let cases = tomographic();
        let (name, bu) = &cases[idx % cases.len()];
        let sd = decompose(bu);
        prop_assert!(allows_indirect_tomography(&sd, &tol).allows, "{}", name);
        let mut rng = seeded(seed);
        let a = unit_trace_hermitian(sd.d_b, &mut rng);
        let b = unit_trace_hermitian(sd.d_b, &mut rng);
        let diff = (&g_matrix(&sd.b_ops, &a) - &g_matrix(&sd.b_ops, &b)).frobenius_norm();
        if a.max_abs_diff(&b) > 1e-6 {
            prop_assert!(diff >= 1e-10, "{}: {}", name, diff);
        }
    }

    #[test]
    fn reconstruction_inverts_build(seed in any::<u64>(), idx in 0usize..8) {
        let tol = tol();
        let cases = tomographic();
        let (name, bu) = &cases[idx % cases.len()];
        let sd = decompose(bu);
        let sigma = unit_trace_hermitian(sd.d_b, &mut seeded(seed));
        let rec = reconstruct_sigma(&sd, &g_matrix(&sd.b_ops, &sigma), &tol).unwrap();
        prop_assert!(rec.unique, "{}", name);
        prop_assert!(rec.sigma.unwrap().max_abs_diff(&sigma) <= 1e-8, "{}", name);
        let v = tomography_round_trip(&sd, &sigma, &tol).unwrap();
        prop_assert!(v.residual.unwrap() <= 1e-8);
    }
}
