use proptest::prelude::*;
use susyd::grid::{integrate, Grid};
use susyd::hulthen::{self, HulthenPotential};
use susyd::susy::{self, SusyPhase, Superpotential};
use susyd::verify;
use susyd::wavefunction::Zero;
use susyd::{Error, Potential, WaveFunction};

const KAPPA: f64 = 2.8892;

fn two_level_strength() -> impl Strategy<Value = f64> {
    4.05f64..8.95
}

#[test]
fn riccati_holds_on_record_interval() {
    let r = verify::riccati_max_residual(1.0 + 2.0 * KAPPA, verify::RICCATI_RANGE, verify::RICCATI_SAMPLES).unwrap();
    assert!(r < 1e-9, "{r}");
}

#[test]
fn riccati_mismatch_is_reported() {
    let w = Superpotential::new(KAPPA).unwrap();
    let pot = HulthenPotential::new(7.0).unwrap();
    assert!(matches!(
        susy::riccati_residual(&w, &pot, 1.0),
        Err(Error::MismatchedFactorization { .. })
    ));
    // off-by-delta shows up as delta / (e^x - 1)
    let delta = 7.0 - (1.0 + 2.0 * KAPPA);
    let r = susy::riccati_residual_unchecked(&w, &pot, 1.0);
    assert!((r - delta / (1f64.exp() - 1.0)).abs() < 1e-12);
}

#[test]
fn ground_state_is_annihilated() {
    for v0 in [5.0, 6.7784, 8.5] {
        let r = verify::annihilation_ratio(v0).unwrap();
        assert!(r < 1e-8, "V0={v0} ratio {r}");
    }
}

#[test]
fn intertwining_on_excited_state() {
    let v0 = 1.0 + 2.0 * KAPPA;
    let r = verify::intertwining_on(v0, verify::INTERTWINING_RANGE, verify::INTERTWINING_INTERVALS).unwrap();
    assert!(r < 1e-6, "{r}");
    let (n1, n2) = verify::INTERTWINING_ORDER_INTERVALS;
    let coarse = verify::intertwining_on(v0, verify::INTERTWINING_RANGE, n1).unwrap();
    let fine = verify::intertwining_on(v0, verify::INTERTWINING_RANGE, n2).unwrap();
    assert!(verify::observed_order(coarse, fine) >= 3.5);
}

#[test]
fn intertwining_on_arbitrary_function() {
    // the identity holds for any smooth phi, not just eigenstates
    struct Trial;
    impl WaveFunction for Trial {
        fn value(&self, x: f64) -> f64 {
            x * x * (-x).exp()
        }
    }
    let w = Superpotential::new(KAPPA).unwrap();
    let pot = HulthenPotential::new(w.strength()).unwrap();
    let grid = Grid::uniform(0.25, 30.0, 200_000).unwrap();
    let r = susy::intertwining_residual(&w, &pot, &Trial, &grid).unwrap();
    assert!(r < 1e-5, "{r}");
    assert!(matches!(
        susy::intertwining_residual(&w, &pot, &Zero, &grid),
        Err(Error::ZeroFunction)
    ));
}

#[test]
fn partner_potential_asymptotics() {
    let p = Superpotential::new(KAPPA).unwrap().partner_potential();
    for (x, tol) in [(0.01, 0.01), (0.1, 0.05)] {
        let rel = (p.value(x) - p.small_x_asymptote(x)).abs() / p.value(x).abs();
        assert!(rel < tol, "x={x} rel={rel}");
    }
    assert_eq!(p.singularity_order(), 2);
    assert_eq!(p.origin_exponent(), 2.0);
}

#[test]
fn partner_state_properties() {
    let v0 = 1.0 + 2.0 * KAPPA;
    let state = susy::partner_state(v0).unwrap();
    assert!((state.prefactor_norm - 1.0).abs() < 1e-6, "{}", state.prefactor_norm);
    assert!((state.energy - hulthen::eigenvalue(v0, 2).unwrap().energy).abs() < 1e-14);
    let norm = integrate(|x| state.value(x).powi(2), 0.0, 60.0, 200_000);
    assert!((norm - 1.0).abs() < 1e-8);
    assert_eq!(state.value(0.0), 0.0);
    // nodeless: psi~ = c e^{-kx} (1 - e^{-x})^2 keeps one sign
    let grid = Grid::uniform(1e-4, 30.0, 100_000).unwrap();
    let vals = grid.sample(|x| state.value(x));
    assert!(vals.iter().all(|&v| v > 0.0) || vals.iter().all(|&v| v < 0.0));
}

#[test]
fn partner_state_domain() {
    assert!(matches!(susy::partner_state(4.0), Err(Error::OutsideTwoLevelDomain { .. })));
    assert!(matches!(susy::partner_state(9.0), Err(Error::OutsideTwoLevelDomain { .. })));
}

#[test]
fn adjoint_zero_mode_is_not_normalizable() {
    let w = Superpotential::new(KAPPA).unwrap();
    let short = susy::adjoint_zero_mode_weight(&w, 1.0, 5.0).unwrap();
    let long = susy::adjoint_zero_mode_weight(&w, 1.0, 15.0).unwrap();
    assert!(long / short > 1e6, "{}", long / short);
    assert!(susy::adjoint_zero_mode_weight(&w, 0.0, 5.0).is_err());
}

#[test]
fn phase_classification() {
    let v0 = 1.0 + 2.0 * KAPPA;
    let e1 = hulthen::eigenvalue(v0, 1).unwrap().energy;
    assert_eq!(susy::classify_susy(v0, e1).unwrap(), SusyPhase::Unbroken { missing_level: 1 });
    assert_eq!(susy::classify_susy(v0, e1 - 0.1).unwrap(), SusyPhase::Broken);
}

proptest! {
    #[test]
    fn riccati_exact_for_any_kappa(kappa in 0.05f64..20.0, x in 1e-3f64..30.0) {
        let w = Superpotential::new(kappa).unwrap();
        let pot = HulthenPotential::new(w.strength()).unwrap();
        let r = susy::riccati_residual(&w, &pot, x).unwrap();
        let scale = 1.0 + pot.value(x).abs() + w.derivative(x);
        prop_assert!(r.abs() <= 1e-12 * scale);
    }

    #[test]
    fn partner_is_v_plus_two_w_prime(kappa in 0.05f64..20.0, x in 1e-3f64..30.0) {
        let w = Superpotential::new(kappa).unwrap();
        let pot = HulthenPotential::new(w.strength()).unwrap();
        let direct = pot.value(x) + 2.0 * w.derivative(x);
        let p = w.partner_potential().value(x);
        prop_assert!((p - direct).abs() <= 1e-12 * (1.0 + direct.abs() + 2.0 * w.derivative(x)));
    }

    #[test]
    fn ground_state_factorizes(v0 in two_level_strength()) {
        let w = Superpotential::from_strength(v0).unwrap();
        let e1 = hulthen::eigenvalue(v0, 1).unwrap().energy;
        prop_assert!((w.factorization_energy() - e1).abs() <= 1e-12 * e1.abs());
    }
}
