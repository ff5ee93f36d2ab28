mod common;

use common::{random_tom, random_vector_state};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tomwalk::quantum::{CMatrix, KrausMap, OperationClass};
use tomwalk::{GlobalState, TomClass, TransitionOperationMatrix};

#[test]
fn lifted_channel_reproduces_tom_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.random_range(1..=5);
        let d = rng.random_range(1..=3);
        let tom = random_tom(&mut rng, n, d);
        assert_eq!(tom.validate(1e-9), TomClass::Valid);
        let channel = tom.lift(1e-9).unwrap();
        assert!(channel.completeness_deviation() < 1e-10);

        let alpha = random_vector_state(&mut rng, n, d);
        let beta = tom.apply(&alpha).unwrap();
        let lhs = GlobalState::embed(&beta, 1e-9).unwrap();
        let rhs = channel.apply(&GlobalState::embed(&alpha, 1e-9).unwrap()).unwrap();
        assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-10);
        assert!(rhs.off_block_max() < 1e-12);
        assert!(rhs.is_valid(1e-10));
    }
}

#[test]
fn classical_complete_graph_lift() {
    let s = 1.0 / 3f64.sqrt();
    let tom = TransitionOperationMatrix::from_fn(4, 1, |i, j| {
        if i == j {
            KrausMap::zero(1)
        } else {
            KrausMap::single(CMatrix::identity(1).scale_real(s))
        }
    })
    .unwrap();
    let ch = tom.lift(1e-9).unwrap();
    assert_eq!(ch.kraus().len(), 12);
    assert!(ch.completeness_deviation() < 1e-12);
}

#[test]
fn long_runs_conserve_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tom = random_tom(&mut rng, 5, 3);
    let mut a = random_vector_state(&mut rng, 5, 3);
    for _ in 0..10_000 {
        a = tom.apply(&a).unwrap();
    }
    assert!((a.total_trace() - 1.0).abs() < 1e-10);
}

#[test]
fn compiled_kernel_matches_dense_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let n = rng.random_range(1..=5);
        let d = rng.random_range(1..=3);
        let tom = random_tom(&mut rng, n, d);
        let a = random_vector_state(&mut rng, n, d);
        let c = tom.compile();
        let mut out = vec![tomwalk::quantum::ZERO; c.state_len()];
        c.forward(&c.flatten(&a), &mut out);
        assert!(c.unflatten(&out).max_abs_diff(&tom.apply(&a).unwrap()) < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_matches_sequential_application(seed in any::<u64>(), n in 1usize..=4, d in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_tom(&mut rng, n, d);
        let f = random_tom(&mut rng, n, d);
        let a = random_vector_state(&mut rng, n, d);
        let g = e.compose(&f).unwrap();
        prop_assert_eq!(g.validate(1e-9), TomClass::Valid);
        let twice = e.apply(&f.apply(&a).unwrap()).unwrap();
        prop_assert!(g.apply(&a).unwrap().max_abs_diff(&twice) < 1e-12);
    }

    #[test]
    fn one_step_keeps_states_physical(seed in any::<u64>(), n in 1usize..=5, d in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tom(&mut rng, n, d);
        let a = random_vector_state(&mut rng, n, d);
        let b = t.apply(&a).unwrap();
        prop_assert!((b.total_trace() - 1.0).abs() < 1e-10);
        for c in b.components() {
            prop_assert!(c.is_hermitian(1e-10));
            prop_assert!(c.min_eigenvalue() > -1e-10);
        }
    }

    #[test]
    fn deleting_a_cell_leaves_a_sub_tom(seed in any::<u64>(), n in 2usize..=4, d in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tom(&mut rng, n, d);
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        prop_assume!(!t.cell(i, j).is_zero());
        let mut cells = t.cells().to_vec();
        cells[i * n + j] = KrausMap::zero(d);
        let cut = TransitionOperationMatrix::new(n, d, cells).unwrap();
        prop_assert_eq!(cut.validate(1e-9), TomClass::SubTom);
        prop_assert_eq!(cut.column_class(j, 1e-9), OperationClass::TraceNonIncreasing);
        let a = random_vector_state(&mut rng, n, d);
        prop_assert!(cut.apply(&a).unwrap().total_trace() <= 1.0 + 1e-10);
    }

    #[test]
    fn dim_one_toms_are_markov_chains(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tom(&mut rng, n, 1);
        let weights: Vec<f64> = (0..n * n).map(|k| t.cell(k / n, k % n).completeness_sum().get(0, 0).re).collect();
        for j in 0..n {
            let col: f64 = (0..n).map(|i| weights[i * n + j]).sum();
            prop_assert!((col - 1.0).abs() < 1e-12);
        }
        let a = random_vector_state(&mut rng, n, 1);
        let p = a.masses();
        let next = t.apply(&a).unwrap().masses();
        for i in 0..n {
            let expected: f64 = (0..n).map(|j| weights[i * n + j] * p[j]).sum();
            prop_assert!((next[i] - expected).abs() < 1e-14);
        }
    }
}
