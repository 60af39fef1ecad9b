mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tusq_core::ecm::{reduce_tally, tally_ers};
use tusq_core::tem::{build_tree, dftt_execute, partition_significant, BacktrackPolicy, PruningConfig};
use tusq_core::{attach_noise, NoiseSpec, StateVector};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shots_survive_every_stage(
        seed in any::<u64>(),
        n in 1usize..=4,
        len in 1usize..=25,
        p in 0.0f64..0.2,
        shots in 1u64..3000,
        alpha in 0.001f64..1.0,
        beta in 1usize..30,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let circuit = common::random_circuit(n, len, true, &mut rng);
        let noisy = attach_noise(&circuit, &NoiseSpec::depolarizing(p, p).unwrap()).unwrap();
        let tally = tally_ers(&noisy, shots, &mut rng);
        prop_assert_eq!(tally.total_shots(), shots);
        let canonical = reduce_tally(&noisy.circuit, &tally).unwrap();
        prop_assert_eq!(canonical.total_shots(), shots);
        prop_assert!(canonical.len() <= tally.len());

        let cfg = PruningConfig { alpha, beta, ..PruningConfig::default() };
        let part = partition_significant(&canonical, &cfg, &mut rng).unwrap();
        let kept = part.kept();
        prop_assert_eq!(kept.iter().map(|(_, c)| c).sum::<u64>(), shots);

        let tree = build_tree(&noisy.circuit, kept.clone()).unwrap();
        prop_assert_eq!(tree.leaves().len(), kept.len());
        let (counts, stats) =
            dftt_execute(&tree, &StateVector::zero(n), seed, BacktrackPolicy::Cheapest).unwrap();
        prop_assert_eq!(counts.values().sum::<u64>(), shots);
        prop_assert!(stats.inverse_gate_applications <= stats.forward_gate_applications);
        prop_assert!(stats.total_applications() <= 2 * stats.edge_gates);
        prop_assert!(stats.total_applications() <= stats.naive_gate_applications);
    }
}
