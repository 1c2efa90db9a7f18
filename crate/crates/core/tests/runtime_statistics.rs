use qsv_core::design::{
    adaptive_w3, homogeneous_radius, max_homogeneous_nu, protocol_from_table, revise_design,
    stabilizer_protocol, Protocol, StabilizerSet,
};
use qsv_core::pauli::Transformation;
use qsv_core::runtime::{
    fidelity_estimate, rescale_for_estimation, rescaled_protocol, simulate_counts,
    worst_case_bad_state, Source,
};
use qsv_core::states::{bell, ghz, w_state, StabilizerGenerators};

fn bell_protocol() -> Protocol {
    let d = max_homogeneous_nu(&bell(), &Transformation::symmetric()).unwrap();
    protocol_from_table(&revise_design(&d).unwrap().1.table).unwrap()
}

fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

#[test]
fn single_test_pass_rate_of_bad_states() {
    let g = StabilizerGenerators::parse("+XXX,+ZZI,+IZZ").unwrap();
    let cases = [
        (bell_protocol(), bell()),
        (stabilizer_protocol(&g, StabilizerSet::FullGroup).unwrap(), ghz(3).unwrap()),
        (Protocol::from_tree(adaptive_w3()).unwrap(), w_state(3).unwrap()),
    ];
    let trials = 50_000;
    for (k, (p, psi)) in cases.iter().enumerate() {
        for eps in [0.05, 0.3] {
            let bad = worst_case_bad_state(p.operator(), psi, eps).unwrap();
            let hits = simulate_counts(p, &Source::Pure(bad), 1, trials, 40 + k as u64).unwrap();
            let want = 1.0 - eps * p.nu();
            let rate = hits as f64 / trials as f64;
            assert!(
                (rate - want).abs() <= 3.0 * binomial_sigma(want, trials),
                "case {k} eps {eps}: {rate} vs {want}"
            );
        }
        let hits = simulate_counts(p, &Source::Pure(psi.clone()), 1, 10_000, 9).unwrap();
        assert_eq!(hits, 10_000);
    }
}

#[test]
fn simulation_is_reproducible() {
    let p = bell_protocol();
    let bad = worst_case_bad_state(p.operator(), &bell(), 0.2).unwrap();
    let a = simulate_counts(&p, &Source::Pure(bad.clone()), 5, 20_000, 123).unwrap();
    let b = simulate_counts(&p, &Source::Pure(bad.clone()), 5, 20_000, 123).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = pool.install(|| simulate_counts(&p, &Source::Pure(bad), 5, 20_000, 123).unwrap());
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn fidelity_estimator_is_unbiased() {
    let p = bell_protocol();
    let source = worst_case_bad_state(p.operator(), &bell(), 0.1).unwrap();
    let (repeats, total) = (40u64, 5_000u64);
    let mut estimates = Vec::new();
    let mut sd = 0.0;
    for r in 0..repeats {
        let hits = simulate_counts(&p, &Source::Pure(source.clone()), 1, total, 1_000 + r).unwrap();
        let est = fidelity_estimate(hits, total, p.nu(), 1.0).unwrap();
        sd = est.std_dev;
        estimates.push(est.fidelity);
    }
    let mean = estimates.iter().sum::<f64>() / repeats as f64;
    assert!((mean - 0.9).abs() < 3.0 * sd / (repeats as f64).sqrt(), "mean {mean}");
}

#[test]
fn rescaled_estimation_recovers_target_fidelity() {
    let psi = w_state(3).unwrap();
    let d = homogeneous_radius(&psi, &Transformation::symmetric()).unwrap();
    let (_, revised) = revise_design(&d).unwrap();
    let (table, scale) = rescale_for_estimation(&revised.table).unwrap();
    let p = rescaled_protocol(&table, scale).unwrap();
    let total = 100_000;
    let hits = simulate_counts(&p, &Source::Pure(psi), 1, total, 77).unwrap();
    let est = fidelity_estimate(hits, total, p.nu(), scale).unwrap();
    assert!((est.fidelity - 1.0).abs() <= 3.0 * est.std_dev, "{est:?}");
    assert!((hits as f64 / total as f64 - 1.0 / scale).abs() < 0.01);
}
