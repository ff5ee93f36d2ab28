use nalgebra::DMatrix;
use tomwalk::apollonian::ApollonianNetwork;
use tomwalk::passage::{
    classical_art_formula, classical_mfpt_matrix, degree_qart, degree_qmfpt, qmfpt, step_distribution, vertex_qmfpt,
    PassageConfig, PassageEngine,
};
use tomwalk::quantum::operators::{basis_ket, ket_plus, qutrit_fourier_projectors};
use tomwalk::quantum::{SubNormalizedState, ViewOperator};
use tomwalk::walks::{build_case1, build_case2, build_case3, build_classical, build_simple4};
use tomwalk::{VectorState, WalkKind};

/// Mean first passage times from the fundamental matrix
/// `Z = (I − P + 1πᵀ)⁻¹`: `m_ij = (z_jj − z_ij)/π_j`, `m_jj = 1/π_j`.
fn fundamental_matrix_mfpt(net: &ApollonianNetwork) -> Vec<Vec<f64>> {
    let n = net.n_vertices();
    let total = net.total_degree() as f64;
    let pi: Vec<f64> = (0..n).map(|v| net.degree(v) as f64 / total).collect();
    let mut a = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for &k in net.neighbors(i) {
            a[(i, k)] -= 1.0 / net.degree(i) as f64;
        }
        for j in 0..n {
            a[(i, j)] += pi[j];
        }
    }
    let z = a.try_inverse().unwrap();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 1.0 / pi[j] } else { (z[(j, j)] - z[(i, j)]) / pi[j] })
                .collect()
        })
        .collect()
}

fn scalar() -> SubNormalizedState {
    SubNormalizedState::maximally_mixed(1)
}

#[test]
fn library_oracle_agrees_with_fundamental_matrix() {
    for g in 0..=4 {
        let net = ApollonianNetwork::generate(g).unwrap();
        let a = classical_mfpt_matrix(&net).unwrap();
        let b = fundamental_matrix_mfpt(&net);
        for i in 0..net.n_vertices() {
            assert!((a[i][i] - classical_art_formula(&net, i)).abs() < 1e-9);
            for j in 0..net.n_vertices() {
                assert!((a[i][j] - b[i][j]).abs() < 1e-9, "g={g} {i}->{j}");
            }
        }
    }
}

#[test]
fn classical_walk_matches_oracle_for_all_pairs() {
    let cfg = PassageConfig::default().with_threshold(1e-9);
    for g in 0..=3 {
        let net = ApollonianNetwork::generate(g).unwrap();
        let spec = build_classical(&net).unwrap();
        let oracle = fundamental_matrix_mfpt(&net);
        let q = PassageEngine::new(spec.tom())
            .qmfpt_matrix(&scalar(), &ViewOperator::identity(1), &cfg)
            .unwrap();
        for i in 0..net.n_vertices() {
            for j in 0..net.n_vertices() {
                let v = q.get(i, j).value.finite().unwrap();
                assert!((v - oracle[i][j]).abs() < 1e-4, "g={g} {i}->{j}: {v} vs {}", oracle[i][j]);
            }
        }
    }
}

#[test]
fn third_generation_return_times() {
    let net = ApollonianNetwork::generate(3).unwrap();
    let spec = build_classical(&net).unwrap();
    let cfg = PassageConfig::default().with_threshold(1e-9);
    let id = ViewOperator::identity(1);
    for (d, expected) in [(3, 28.0), (6, 14.0), (9, 28.0 / 3.0), (12, 7.0)] {
        let v = degree_qart(&spec, d, &scalar(), &id, &cfg).unwrap();
        assert!((v.value.finite().unwrap() - expected).abs() < 1e-4, "d={d}");
    }
    let centre = vertex_qmfpt(&spec, 3, &scalar(), &id, &cfg).unwrap();
    let oracle = fundamental_matrix_mfpt(&net);
    let mean = (0..16).filter(|&i| i != 3).map(|i| oracle[i][3]).sum::<f64>() / 15.0;
    assert!((centre.value.finite().unwrap() - mean).abs() < 1e-4);
}

#[test]
fn default_threshold_stays_within_its_contract() {
    let spec = build_classical(&ApollonianNetwork::generate(3).unwrap()).unwrap();
    let cfg = PassageConfig::default();
    let q = PassageEngine::new(spec.tom())
        .qmfpt_matrix(&scalar(), &ViewOperator::identity(1), &cfg)
        .unwrap();
    let oracle = fundamental_matrix_mfpt(spec.network());
    for i in 0..16 {
        for j in 0..16 {
            let r = q.get(i, j);
            assert!(1.0 - r.cumulative_detection < 1e-6);
            // the neglected tail is about residual × (t_s + mean)
            let bound = 1e-6 * (r.steps_executed as f64 + 2.0 * oracle[i][j]);
            assert!((r.value.finite().unwrap() - oracle[i][j]).abs() < bound);
        }
    }
}

#[test]
fn detected_plus_remaining_is_conserved() {
    let walks = [
        build_classical(&ApollonianNetwork::generate(3).unwrap()).unwrap(),
        build_simple4().unwrap(),
        build_case1(&ApollonianNetwork::generate(3).unwrap()).unwrap(),
        build_case2(&ApollonianNetwork::generate(3).unwrap()).unwrap(),
        build_case3().unwrap(),
    ];
    for spec in &walks {
        let engine = PassageEngine::new(spec.tom());
        let view = ViewOperator::identity(spec.internal_dim());
        for (i, j) in [(0, 3), (3, 3), (1, 2)] {
            let mut last = 0.0;
            for step in engine.walk(i, j, spec.default_initial(), &view).unwrap().take(500) {
                assert!((step.cumulative + step.remaining - 1.0).abs() < 1e-9, "{}", spec.label());
                assert!(step.cumulative >= last - 1e-15);
                last = step.cumulative;
            }
        }
    }
}

#[test]
fn monotone_detection_under_partial_views() {
    let spec = build_case2(&ApollonianNetwork::generate(2).unwrap()).unwrap();
    let engine = PassageEngine::new(spec.tom());
    let view = ViewOperator::from_ket(&ket_plus()).unwrap();
    let mut last = 0.0;
    for step in engine.walk(5, 0, spec.default_initial(), &view).unwrap().take(2000) {
        assert!(step.detection >= -1e-15);
        assert!(step.cumulative >= last - 1e-15);
        last = step.cumulative;
    }
}

#[test]
fn batched_columns_match_forward_runs() {
    let spec = build_case2(&ApollonianNetwork::generate(2).unwrap()).unwrap();
    let engine = PassageEngine::new(spec.tom());
    let cfg = PassageConfig::default();
    let view = ViewOperator::from_ket(&basis_ket(2, 0)).unwrap();
    for j in [0, 3, 6] {
        let col = engine.qmfpt_column(j, spec.default_initial(), &view, &cfg).unwrap();
        for (i, r) in col.iter().enumerate() {
            let f = engine.qmfpt(i, j, spec.default_initial(), &view, &cfg).unwrap();
            assert_eq!(r.steps_executed, f.steps_executed);
            let (a, b) = (r.value.finite().unwrap(), f.value.finite().unwrap());
            assert!((a - b).abs() < 1e-9 * a.max(1.0));
        }
    }
}

#[test]
fn degree_values_are_means_of_vertex_values() {
    let spec = build_case1(&ApollonianNetwork::generate(3).unwrap()).unwrap();
    let view = ViewOperator::identity(3);
    let cfg = PassageConfig::default();
    for d in [3, 6, 9, 12] {
        let vs = spec.network().vertices_with_degree(d);
        let mut sum = 0.0;
        for &j in &vs {
            sum += vertex_qmfpt(&spec, j, spec.default_initial(), &view, &cfg)
                .unwrap()
                .value
                .finite()
                .unwrap();
        }
        let agg = degree_qmfpt(&spec, d, spec.default_initial(), &view, &cfg).unwrap();
        assert_eq!(agg.value.finite().unwrap(), sum / vs.len() as f64);
    }
}

#[test]
fn simple4_centre_only_recovers_its_c_component() {
    let spec = build_simple4().unwrap();
    let r = qmfpt(
        &spec,
        3,
        3,
        spec.default_initial(),
        &ViewOperator::identity(3),
        &PassageConfig::default(),
    )
    .unwrap();
    assert!(r.value.is_infinite());
    assert!((r.cumulative_detection - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn simple4_distribution_rows() {
    let spec = build_simple4().unwrap();
    let a0 = VectorState::localized(4, 3, spec.default_initial()).unwrap();
    let rows = step_distribution(&spec, &a0, &ViewOperator::identity(3), 13).unwrap();
    assert_eq!(rows[0], vec![0.0, 0.0, 0.0, 1.0]);
    for (x, e) in rows[1].iter().zip([1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0, 0.0]) {
        assert!((x - e).abs() < 1e-12);
    }
    for view in qutrit_fourier_projectors() {
        let rows = step_distribution(&spec, &a0, &ViewOperator::new(view, 1e-10).unwrap(), 13).unwrap();
        for t in 1..=7 {
            for v in 0..4 {
                assert!((rows[t][v] - rows[t + 6][v]).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn classical_distribution_rows_are_stochastic() {
    let spec = WalkKind::Classical.build(4).unwrap();
    let a0 = VectorState::localized(spec.n_vertices(), 0, &scalar()).unwrap();
    let rows = step_distribution(&spec, &a0, &ViewOperator::identity(1), 50).unwrap();
    for row in rows {
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn results_do_not_depend_on_the_worker_count() {
    let spec = build_case2(&ApollonianNetwork::generate(3).unwrap()).unwrap();
    let view = ViewOperator::from_ket(&ket_plus()).unwrap();
    let cfg = PassageConfig::default();
    let engine = PassageEngine::new(spec.tom());
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| engine.qmfpt_matrix(spec.default_initial(), &view, &cfg).unwrap())
    };
    assert_eq!(run(1), run(3));
}
