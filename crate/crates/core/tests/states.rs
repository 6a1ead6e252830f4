use proptest::prelude::*;
use qudit_stabilizer::oracle::{self, equal_up_to_global_phase, DEFAULT_CAP};
use qudit_stabilizer::sampling::{random_clifford, random_invertible, random_stabilizer};
use qudit_stabilizer::{decompose, StabilizerGenerators};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shape() -> impl Strategy<Value = (i64, usize)> {
    prop_oneof![(2i64..=6, 1usize..=2), (2i64..=3, Just(3usize))]
}

fn dense(st: &StabilizerGenerators) -> oracle::DenseState {
    oracle::state_from_expansion(&st.expand().unwrap(), DEFAULT_CAP).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn clifford_image_matches_unitary_on_the_state((d, n) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_stabilizer(&mut rng, n, d, 1);
        let q = random_clifford(&mut rng, n, d);
        let u = oracle::sequence_operator(&decompose(&q).unwrap(), DEFAULT_CAP).unwrap();
        let evolved = u.apply(&dense(&st)).unwrap();
        let image = dense(&st.apply_clifford(&q).unwrap());
        prop_assert!(equal_up_to_global_phase(&evolved, &image).unwrap());
    }

    #[test]
    fn state_ignores_choice_of_generators((d, n) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_stabilizer(&mut rng, n, d, 2);
        let r = random_invertible(&mut rng, st.num_generators(), d);
        let psi = dense(&st);
        prop_assert!(equal_up_to_global_phase(&psi, &dense(&st.change_generators(&r).unwrap())).unwrap());
        prop_assert!(equal_up_to_global_phase(&psi, &dense(&st.minimize().unwrap())).unwrap());
    }

    #[test]
    fn raw_and_generic_sums_describe_the_same_state((d, n) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_stabilizer(&mut rng, n, d, 1);
        let psi = dense(&st);
        for e in [st.expand_raw().unwrap(), st.expand_generic().unwrap()] {
            let other = oracle::state_from_expansion(&e, DEFAULT_CAP).unwrap();
            prop_assert!(psi.max_deviation(&other).unwrap() < 1e-9);
        }
    }

    #[test]
    fn odd_form_round_trips(d in prop_oneof![Just(3i64), Just(5), Just(9)], n in 1usize..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = random_stabilizer(&mut rng, n, d, 1);
        let odd = st.to_odd_form().unwrap();
        prop_assert_eq!(&StabilizerGenerators::from_odd_form(&odd), &st);
        let psi = oracle::state_from_expansion(&odd.expand().unwrap(), DEFAULT_CAP).unwrap();
        prop_assert!(psi.max_deviation(&dense(&st)).unwrap() < 1e-9);
    }
}

#[test]
fn computational_zero_is_the_first_basis_state() {
    for (d, n) in [(2, 3), (4, 2), (6, 1)] {
        let psi = dense(&StabilizerGenerators::computational_zero(n, d));
        let dim = oracle::hilbert_dim(d, n, DEFAULT_CAP).unwrap();
        assert!(psi.max_deviation(&oracle::DenseState::basis(dim, 0)).unwrap() < 1e-12);
    }
}
