use proptest::prelude::*;
use qlabel::info_theory::*;

proptest! {
    #[test]
    fn entropy_is_symmetric(x in 0.0f64..=1.0) {
        let a: f64 = binary_entropy(x).unwrap();
        let b: f64 = binary_entropy(1.0 - x).unwrap();
        prop_assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn inverse_entropy_round_trips(y in 0.0f64..=1.0) {
        let x: f64 = inverse_binary_entropy(y).unwrap();
        prop_assert!((0.0..=0.5).contains(&x));
        let back: f64 = binary_entropy(x).unwrap();
        prop_assert!((back - y).abs() < 1e-9);
    }

    #[test]
    fn holevo_gap_sign_follows_threshold(eta in 0.0f64..0.5) {
        for kind in [AttackFamily::Collective, AttackFamily::Individual] {
            let gap = holevo_gap(kind, eta).unwrap();
            let star: f64 = eta_star(kind);
            if eta < star - 1e-9 {
                prop_assert!(gap.holevo_condition_met());
            } else if eta > star + 1e-9 {
                prop_assert!(!gap.holevo_condition_met());
            }
        }
    }
}

#[test]
fn collective_threshold_balances_entropy() {
    let star: f64 = eta_star(AttackFamily::Collective);
    assert!((binary_entropy(star).unwrap() - 0.5).abs() < 1e-9);
    assert!((star - 0.110_027_864_438_36).abs() < 1e-9);
}

#[test]
fn individual_threshold_matches_closed_form() {
    let solved: f64 = solve_eta_star(AttackFamily::Individual).unwrap();
    let closed: f64 = individual_eta_star_closed_form();
    assert!((solved - closed).abs() < 1e-9);
    assert!((closed - (1.0 - 1.0 / 2f64.sqrt()) / 2.0).abs() < 1e-15);
}

#[test]
fn memoryless_threshold_is_stored() {
    assert_eq!(eta_star::<f64>(AttackFamily::Memoryless), 0.154);
    assert!(solve_eta_star::<f64>(AttackFamily::Memoryless).is_err());
    assert!(eve_noise_from_disturbance::<f64>(AttackFamily::Memoryless, 0.05).is_err());
}

#[test]
fn eve_noise_decreases_and_meets_threshold() {
    for kind in [AttackFamily::Collective, AttackFamily::Individual] {
        let star: f64 = eta_star(kind);
        let curve: Vec<f64> = (0..100)
            .map(|i| eve_noise_from_disturbance(kind, star * i as f64 / 99.0).unwrap())
            .collect();
        assert!(
            curve.windows(2).all(|w| w[1] < w[0]),
            "{kind} not decreasing"
        );
        assert!((curve[0] - 0.5).abs() < 1e-9);
        assert!(
            (curve[99] - star).abs() < 1e-4,
            "{kind} misses the fixed point"
        );
    }
}

#[test]
fn collective_spot_value() {
    let e: f64 = eve_noise_from_disturbance(AttackFamily::Collective, 0.05).unwrap();
    assert!((e - 0.195_876_011_858_27).abs() < 1e-9);
    let h: f64 = binary_entropy(0.11).unwrap();
    assert!((h - 0.499_915_958_164_528).abs() < 1e-12);
}
