use bellcheck::clifford::{Blade, Multivector, UnitVector};
use bellcheck::models::{
    bell_observable, christian_observable, constraint_check, effective_outcome,
    expectation_over_mu, meter_outcome, pair_product, BellLambda, HiddenState, Interpretation,
    MeterModel,
};
use bellcheck::quantum::{chsh_value, sequential_outcome_tree, singlet_correlation, QmState};
use bellcheck::scenarios::{run_sequential, SequentialModel};
use bellcheck::Sign;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = f64> {
    -1.0..=1.0f64
}

fn multivector() -> impl Strategy<Value = Multivector> {
    prop::array::uniform8(coeff()).prop_map(Multivector::new)
}

fn unit_vector() -> impl Strategy<Value = UnitVector> {
    prop::array::uniform3(coeff())
        .prop_filter("nonzero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-6)
        .prop_map(|v| UnitVector::normalize(v).unwrap())
}

fn meter() -> impl Strategy<Value = MeterModel> {
    (any::<bool>(), any::<bool>()).prop_map(|(d, i)| {
        MeterModel::new(
            if d { Sign::Minus } else { Sign::Plus },
            if i {
                Interpretation::Flipped
            } else {
                Interpretation::Natural
            },
        )
    })
}

fn hidden() -> impl Strategy<Value = HiddenState> {
    prop_oneof![Just(HiddenState::PLUS), Just(HiddenState::MINUS)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn product_is_associative(x in multivector(), y in multivector(), z in multivector()) {
        let lhs = (x * y) * z;
        let rhs = x * (y * z);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-10);
    }

    #[test]
    fn pseudoscalar_is_central(x in multivector()) {
        let i = Multivector::pseudoscalar();
        prop_assert!((i * x).max_abs_diff(&(x * i)) <= 1e-12);
    }

    #[test]
    fn duality_is_an_involution_up_to_sign(x in multivector()) {
        prop_assert!(x.dual().dual().max_abs_diff(&-x) <= 1e-12);
    }

    #[test]
    fn vectors_square_to_their_norm(v in prop::array::uniform3(coeff())) {
        let m = Multivector::vector(v);
        let norm2: f64 = v.iter().map(|c| c * c).sum();
        prop_assert!((m * m).max_abs_diff(&Multivector::scalar(norm2)) <= 1e-12);
    }

    #[test]
    fn grade_projections_sum_to_whole(x in multivector()) {
        let sum = (0..4).fold(Multivector::ZERO, |acc, k| acc + x.grade_project(k));
        prop_assert_eq!(sum, x);
    }

    #[test]
    fn contraction_of_hidden_state_is_the_full_product(n in unit_vector(), mu in hidden()) {
        let m = mu.to_multivector();
        let v = n.to_multivector();
        prop_assert_eq!(m.dot(&v), m * v);
    }

    #[test]
    fn singlet_correlation_is_minus_dot(a in unit_vector(), b in unit_vector()) {
        prop_assert!((singlet_correlation(&a, &b) + a.dot(&b)).abs() <= 1e-12);
        prop_assert!((singlet_correlation(&a, &b) - singlet_correlation(&b, &a)).abs() <= 1e-12);
    }

    #[test]
    fn outcome_tree_is_complete(
        dirs in prop::collection::vec(unit_vector(), 1..=4),
        n in unit_vector(),
        s in any::<bool>(),
    ) {
        let state = QmState::spin_eigenstate(&n, if s { Sign::Plus } else { Sign::Minus });
        let tree = sequential_outcome_tree(&state, &dirs).unwrap();
        prop_assert_eq!(tree.len(), 1 << dirs.len());
        let total: f64 = tree.iter().map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn observable_bivector_has_unit_norm(m in meter(), n in unit_vector(), mu in hidden()) {
        let obs = christian_observable(&m, &n, mu);
        let b = obs.bivector_part();
        prop_assert!(((b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(obs.grade_project(2), obs);
    }

    #[test]
    fn pair_product_is_independent_of_mu(ma in meter(), mb in meter(), a in unit_vector(), b in unit_vector()) {
        prop_assert_eq!(
            pair_product(&ma, &mb, &a, &b, HiddenState::PLUS),
            pair_product(&ma, &mb, &a, &b, HiddenState::MINUS)
        );
    }

    #[test]
    fn observables_average_to_zero(m in meter(), n in unit_vector()) {
        prop_assert_eq!(expectation_over_mu(|mu| christian_observable(&m, &n, mu)), Multivector::ZERO);
    }

    #[test]
    fn observables_square_to_minus_one(ma in meter(), mb in meter(), a in unit_vector(), b in unit_vector()) {
        let c = constraint_check(&ma, &mb, &a, &b);
        prop_assert!(c.square_avg.approx_eq(&Multivector::scalar(-1.0)));
    }

    #[test]
    fn bell_observable_is_odd(a in unit_vector(), l in unit_vector()) {
        prop_assume!(a.dot(&l).abs() > 1e-12);
        prop_assert_eq!(bell_observable(&a, &BellLambda::new(-l)), -bell_observable(&a, &BellLambda::new(l)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn tsirelson_bound(a in unit_vector(), a2 in unit_vector(), b in unit_vector(), b2 in unit_vector()) {
        prop_assert!(chsh_value(&a, &a2, &b, &b2) <= 2.0 * 2f64.sqrt() + 1e-9);
    }
}

#[test]
fn pseudoscalar_commutes_with_every_blade_exactly() {
    let i = Multivector::pseudoscalar();
    for b in Blade::ALL {
        let x = Multivector::blade(b);
        assert_eq!(i.commutator(&x), Multivector::ZERO, "{b:?}");
    }
    assert_eq!(i * i, Multivector::scalar(-1.0));
}

#[test]
fn axis_outcomes_agree_with_natural_reading() {
    let m = MeterModel::standard();
    let axes = [UnitVector::ex(), UnitVector::ey(), UnitVector::ez()];
    for n in axes.iter().flat_map(|n| [*n, -*n]) {
        for mu in HiddenState::BOTH {
            assert_eq!(
                meter_outcome(&m, &n, mu),
                effective_outcome(&n, mu),
                "{n:?} {mu:?}"
            );
        }
    }
}

/// Sampled conditionals agree with their exact values to 4 standard errors
/// in at least 99 of 100 seeds.
#[test]
fn exact_and_sampled_values_agree_across_seeds() {
    for model in [SequentialModel::BellStatic, SequentialModel::BellHemisphere] {
        let mut total = 0;
        let mut agree = 0;
        for seed in 0..100 {
            let out = run_sequential(model, None, 10_000, seed).unwrap();
            let r = &out.report;
            for (name, est) in &r.mc_results {
                let exact = r.exact_real(name).unwrap();
                total += 1;
                agree += usize::from(est.within(exact, 4.0));
            }
        }
        assert!(agree * 100 >= total * 99, "{model:?}: {agree}/{total}");
    }
}
