mod common;

use ancilla_core::numerics::kron;
use ancilla_core::random::{random_unitary, seeded};
use ancilla_core::BipartiteUnitary;
use common::{decompose, gallery, haar, tensor};
use proptest::prelude::*;

fn weights_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn gallery_decompose_reconstruct_round_trip() {
    for entry in gallery() {
        let sd = decompose(&entry.unitary);
        let rebuilt = sd.reconstruct();
        assert!(
            rebuilt.max_abs_diff(&entry.unitary.u) < 1e-10,
            "{}",
            entry.name
        );
        let again = decompose(&BipartiteUnitary::new(rebuilt, sd.d_a, sd.d_b).unwrap());
        assert!(
            weights_close(&sd.weights, &again.weights, 1e-8),
            "{}",
            entry.name
        );
    }
}

#[test]
fn weights_square_sum_to_dimension() {
    for entry in gallery() {
        let sd = decompose(&entry.unitary);
        let total: f64 = sd.weights.iter().map(|w| w * w).sum();
        let n = (sd.d_a * sd.d_b) as f64;
        assert!((total - n).abs() < 1e-8, "{}", entry.name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn rank_bounded_by_factor_sizes(seed in any::<u64>(), d_a in 1usize..=3, d_b in 2usize..=4) {
        let sd = decompose(&haar(d_a, d_b, seed));
        prop_assert!(sd.rank <= (d_a * d_a).min(d_b * d_b));
        prop_assert!(sd.weights.windows(2).all(|w| w[0] >= w[1]));
        let rebuilt = sd.reconstruct();
        prop_assert!(rebuilt.max_abs_diff(&haar(d_a, d_b, seed).u) < 1e-10);
    }

    #[test]
    fn weights_invariant_under_local_unitaries(seed in any::<u64>(), d_a in 1usize..=3, d_b in 2usize..=3) {
        let bu = haar(d_a, d_b, seed);
        let mut rng = seeded(seed ^ 0x5eed);
        let left = kron(&random_unitary(d_a, &mut rng), &random_unitary(d_b, &mut rng));
        let right = tensor(&random_unitary(d_a, &mut rng), &random_unitary(d_b, &mut rng));
        let moved = BipartiteUnitary::new(&(&left * &bu.u) * &right, d_a, d_b).unwrap();
        let (a, b) = (decompose(&bu), decompose(&moved));
        prop_assert_eq!(a.rank, b.rank);
        prop_assert!(weights_close(&a.weights, &b.weights, 1e-8));
    }

    #[test]
    fn gallery_rank_invariant_under_local_unitaries(seed in any::<u64>(), idx in 0usize..20) {
        let entries = gallery();
        let entry = &entries[idx % entries.len()];
        let (d_a, d_b) = (entry.unitary.d_a, entry.unitary.d_b);
        let mut rng = seeded(seed);
        let left = tensor(&random_unitary(d_a, &mut rng), &random_unitary(d_b, &mut rng));
        let moved = BipartiteUnitary::new(&left * &entry.unitary.u, d_a, d_b).unwrap();
        let (a, b) = (decompose(&entry.unitary), decompose(&moved));
        prop_assert_eq!(a.rank, b.rank);
        prop_assert!(weights_close(&a.weights, &b.weights, 1e-8));
    }
}
