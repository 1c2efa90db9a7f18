use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qsv_core::design::{check_local, max_homogeneous_nu, min_entry_bound};
use qsv_core::linalg::{hermitian_eigenvalues, HermitianOperator, C64};
use qsv_core::pauli::{outcome_projector, positivity_min, quasi_prob, reconstruct, setting_axes, Transformation};
use qsv_core::states::StateVector;
use qsv_core::QsvError;

fn random_hermitian(n: usize, seed: u64) -> HermitianOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1 << n;
    let mut data = vec![C64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for c in r..dim {
            let re: f64 = rand::Rng::random_range(&mut rng, -1.0..1.0);
            let im: f64 = if r == c { 0.0 } else { rand::Rng::random_range(&mut rng, -1.0..1.0) };
            data[r * dim + c] = C64::new(re, im);
            data[c * dim + r] = C64::new(re, -im);
        }
    }
    HermitianOperator::new(dim, data).unwrap()
}

fn weights() -> impl Strategy<Value = Transformation> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64)
        .prop_filter("nonzero", |(a, b, c)| a + b + c > 1e-3)
        .prop_map(|(a, b, c)| {
            let s = a + b + c;
            Transformation::new([a / s, b / s, 1.0 - a / s - b / s]).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_sum_to_trace(n in 1usize..=4, seed in any::<u64>()) {
        let h = random_hermitian(n, seed);
        let spec = hermitian_eigenvalues(&h);
        let sum: f64 = spec.eigenvalues.iter().sum();
        prop_assert!((sum - h.trace()).abs() < 1e-9);
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn table_reconstructs_operator(n in 1usize..=3, seed in any::<u64>(), t in weights()) {
        let h = random_hermitian(n, seed);
        let table = quasi_prob(&h, &t);
        prop_assert!(reconstruct(&table).approx_eq(&h, 1e-9));
        prop_assert!((table.sum() - h.trace()).abs() < 1e-9);
    }

    #[test]
    fn table_is_linear(n in 1usize..=3, s1 in any::<u64>(), s2 in any::<u64>(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let t = Transformation::symmetric();
        let (x, y) = (random_hermitian(n, s1), random_hermitian(n, s2));
        let combined = quasi_prob(&(&x.scale(a) + &y.scale(b)), &t);
        let separate = quasi_prob(&x, &t).combine(a, &quasi_prob(&y, &t), b);
        prop_assert!(combined.max_abs_diff(&separate) < 1e-9);
    }

    #[test]
    fn pure_state_entries_respect_global_minimum(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = StateVector::haar_random(n, &mut rng).unwrap();
        let table = quasi_prob(&psi.projector(), &Transformation::symmetric());
        prop_assert!(positivity_min(&table) >= min_entry_bound(n).unwrap() - 1e-12);
    }

    #[test]
    fn successful_designs_are_local(n in 2usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = StateVector::haar_random(n, &mut rng).unwrap();
        match max_homogeneous_nu(&psi, &Transformation::symmetric()) {
            Ok(d) => {
                let v = check_local(&d.table);
                prop_assert!(v.local);
                prop_assert!(v.positivity_min >= -1e-9);
            }
            Err(QsvError::CompletenessViolation { completeness, design, .. }) => {
                prop_assert!(completeness > 1.0);
                prop_assert!(positivity_min(&design.table) >= -1e-9);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn outcome_projectors_resolve_identity(n in 1usize..=3, setting in 0usize..27) {
        let axes = setting_axes(setting % 3usize.pow(n as u32), n);
        let mut sum = HermitianOperator::zeros(n).unwrap();
        for j in 0..1 << n {
            sum = &sum + &outcome_projector(&axes, j).unwrap();
        }
        prop_assert!(sum.approx_eq(&HermitianOperator::identity(n).unwrap(), 1e-12));
    }
}
