use batstrip::bat::Objective;
use batstrip::bench::{rastrigin, rosenbrock, sphere, BenchError, BenchFunction};
use proptest::prelude::*;

#[test]
fn sphere_sums_squares() {
    assert_eq!(sphere(&[0.0, 0.0, 0.0]), 0.0);
    assert_eq!(sphere(&[1.0, 1.0, 1.0]), 3.0);
    assert_eq!(sphere(&[2.0]), 4.0);
}

#[test]
fn rosenbrock_vanishes_on_the_ones_vector() {
    assert_eq!(rosenbrock(&[1.0, 1.0]), 0.0);
    assert_eq!(rosenbrock(&[1.0, 1.0, 1.0, 1.0]), 0.0);
    assert_eq!(rosenbrock(&[0.0, 0.0]), 1.0);
    assert_eq!(rosenbrock(&[-1.0, 1.0]), 4.0);
}

#[test]
fn rastrigin_vanishes_at_the_origin() {
    assert_eq!(rastrigin(&[0.0, 0.0]), 0.0);
    assert!((rastrigin(&[0.5]) - 20.25).abs() < 1e-12);
    assert!((rastrigin(&[1.0, 1.0]) - 2.0).abs() < 1e-12);
}

#[test]
fn registry_knows_its_three_functions() {
    assert_eq!(
        BenchFunction::names(),
        &["sphere", "rosenbrock", "rastrigin"]
    );
    for name in BenchFunction::names() {
        let f = BenchFunction::by_name(name, 3).unwrap();
        assert_eq!(f.name, *name);
        assert_eq!(f.dims, 3);
        assert_eq!(f.known_minimum, 0.0);
        assert_eq!(f.evaluate(&f.known_argmin), 0.0);
    }
}

#[test]
fn registry_rejects_unknown_names_and_thin_dimensions() {
    assert!(matches!(
        BenchFunction::by_name("nosuch", 2),
        Err(BenchError::UnknownFunction(_))
    ));
    assert!(matches!(
        BenchFunction::by_name("rosenbrock", 1),
        Err(BenchError::TooFewDims {
            name: "rosenbrock",
            min: 2,
            got: 1
        })
    ));
    assert!(BenchFunction::by_name("sphere", 1).is_ok());
}

#[test]
fn conventional_domains_are_attached() {
    let sphere = BenchFunction::by_name("sphere", 5).unwrap();
    assert_eq!(sphere.default_bounds.lower(), &[-5.12; 5]);
    assert_eq!(sphere.default_bounds.upper(), &[5.12; 5]);
    let rosenbrock = BenchFunction::by_name("rosenbrock", 2).unwrap();
    assert_eq!(rosenbrock.default_bounds.lower(), &[-2.048; 2]);
    assert_eq!(rosenbrock.default_bounds.upper(), &[2.048; 2]);
    let rastrigin = BenchFunction::by_name("rastrigin", 4).unwrap();
    assert_eq!(rastrigin.default_bounds.lower(), &[-5.12; 4]);
    assert_eq!(rastrigin.known_argmin, vec![0.0; 4]);
}

proptest! {
    #[test]
    fn all_three_functions_are_non_negative(
        x in prop::collection::vec(-5.12f64..5.12, 2..6),
    ) {
        prop_assert!(sphere(&x) >= 0.0);
        prop_assert!(rosenbrock(&x) >= 0.0);
        prop_assert!(rastrigin(&x) >= 0.0);
    }

    #[test]
    fn sphere_is_symmetric(x in prop::collection::vec(-5.12f64..5.12, 1..6)) {
        let negated: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert_eq!(sphere(&x), sphere(&negated));
    }
}
