//! Impedance operators, their Robin reduction and the Leontovich limit.

use std::f64::consts::{FRAC_PI_4, PI};

use magskin_core::fit::ConvergenceFit;
use magskin_core::geometry::Surface;
use magskin_core::ibc::*;
use magskin_core::params::{derive_params, leontovich_factor};
use magskin_core::reference::log_grid;
use magskin_core::{Complex64, Error, PhysicalConfig, TangentVector};
use proptest::prelude::*;

const EPS0: f64 = 8.854_187_812_8e-12;

fn unit() -> PhysicalConfig {
    PhysicalConfig::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap()
}

/// `sigma_minus` giving `delta_minus = d` for unit `omega` and `eps0`.
fn sigma_for(d: f64) -> f64 {
    1.0 / (d * d)
}

#[test]
fn operator_examples() {
    let op = impedance_operator(0, &unit()).unwrap();
    assert_eq!(op.scalar_part, Complex64::new(0.0, 0.0));
    assert_eq!(op.curvature_part, None);

    let op = impedance_operator(1, &unit()).unwrap();
    assert!((op.scalar_part - Complex64::from_polar(2f64.powf(0.25), PI / 8.0)).norm() < 1e-15);

    let op = impedance_operator(2, &unit()).unwrap();
    assert!((op.curvature_part.unwrap() - Complex64::new(0.0, -1.0)).norm() < 1e-16);

    assert_eq!(impedance_operator(3, &unit()), Err(Error::UnsupportedOrder(3)));
    let op0 = impedance_operator(0, &unit()).unwrap();
    let dp = derive_params(&unit()).unwrap();
    assert!(matches!(
        consistency_with_lambda(&op0, &dp, &unit()),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn consistency_across_six_decades() {
    let mut worst = 0.0f64;
    for w in log_grid(1e2, 1e8, 13) {
        for s in log_grid(1e2, 1e8, 13) {
            for mp in log_grid(1e-7, 1e-1, 13) {
                let cfg = PhysicalConfig::new(w, EPS0, mp, 1e3 * mp, 1e-3, s).unwrap();
                let dp = derive_params(&cfg).unwrap();
                for k in [1, 2] {
                    let op = impedance_operator(k, &cfg).unwrap();
                    worst = worst.max(consistency_with_lambda(&op, &dp, &cfg).unwrap());
                }
            }
        }
    }
    assert!(worst <= 1e-12, "{worst:e}");
}

#[test]
fn scalar_part_growth_and_argument() {
    let pts: Vec<_> = log_grid(1e2, 1e8, 13)
        .into_iter()
        .map(|s| {
            let cfg = PhysicalConfig {
                sigma_minus: s,
                ..unit()
            };
            let d = impedance_operator(1, &cfg).unwrap().scalar_part;
            assert!(d.arg() > 0.0 && d.arg() <= FRAC_PI_4, "{s}: {}", d.arg());
            (s, d.norm())
        })
        .collect();
    let fit = ConvergenceFit::new(pts).unwrap();
    assert!(fit.slope_within(0.5, 1e-3), "{fit:?}");

    let mut last = 0.0;
    for s in [1e-4, 1e-2, 1.0, 1e2, 1e6, 1e12] {
        let cfg = PhysicalConfig {
            sigma_minus: s,
            ..unit()
        };
        let a = impedance_operator(1, &cfg).unwrap().scalar_part.arg();
        assert!(a > last && a <= FRAC_PI_4);
        last = a;
    }
    assert!((last - FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn robin_shift_between_second_and_first_order() {
    for (r, mu_r) in [(1.0, 100.0), (0.01, 1e4), (3.0, 37.0)] {
        let cfg = unit().with_mu_r(mu_r).unwrap();
        let s = Surface::cylinder(r).unwrap();
        let g1 = robin_coefficient(1, 0, &s, &cfg).unwrap().gamma;
        let g2 = robin_coefficient(2, 0, &s, &cfg).unwrap().gamma;
        let expected = 1.0 / mu_r / (2.0 * r);
        assert!(((g2 - g1).norm() - expected).abs() <= 1e-14 * expected);
    }
    let g = robin_coefficient(0, 4, &Surface::cylinder(1.0).unwrap(), &unit()).unwrap();
    assert_eq!((g.mode, g.gamma), (4, Complex64::new(0.0, 0.0)));
}

#[test]
fn first_order_robin_coefficient_is_minus_eps_lambda() {
    let cfg = PhysicalConfig::new(1.3, 0.7, 2.0, 2.0e4, 0.1, 4.0).unwrap();
    let dp = derive_params(&cfg).unwrap();
    let g = robin_coefficient(1, 1, &Surface::cylinder(0.5).unwrap(), &cfg)
        .unwrap()
        .gamma;
    let expected = -TM_ROBIN_SIGN * dp.eps_small * dp.lambda;
    assert!((g - expected).norm() <= 1e-14 * expected.norm());
}

#[test]
fn leontovich_examples() {
    let at = |d: f64| {
        leontovich_gap(&PhysicalConfig {
            sigma_minus: sigma_for(d),
            ..unit()
        })
        .unwrap()
    };
    assert!(at(1e-3) <= 1e-5, "{}", at(1e-3));
    let ratio = at(1e-1) / at(1e-2);
    assert!((ratio / 100.0 - 1.0).abs() < 0.01, "{ratio}");

    let z = leontovich_factor(&unit()).unwrap();
    assert!((z - Complex64::from_polar(1.0, -FRAC_PI_4)).norm() < 1e-15);
}

#[test]
fn leontovich_gap_is_second_order_in_delta() {
    let sigmas: Vec<f64> = log_grid(1e-4, 1e-1, 7).into_iter().map(sigma_for).collect();
    let table = leontovich_limit_check(&unit(), &sigmas).unwrap();
    assert!(table.warnings.is_empty(), "{:?}", table.warnings);
    assert!(
        table.fit.is_conclusive() && table.fit.slope_within(2.0, 0.05),
        "{:?}",
        table.fit
    );
    assert_eq!(table.rows.len(), 7);
}

#[test]
fn leontovich_sweep_warnings() {
    let table = leontovich_limit_check(&unit(), &[1.0, 4.0, 16.0, 64.0]).unwrap();
    // four points outside the regime, and fewer than four decades
    assert_eq!(table.warnings.len(), 5);
    assert!(table.warnings[4].contains("decades"));
    assert!(leontovich_limit_check(&unit(), &[1.0]).is_err());
}

fn vector() -> impl Strategy<Value = TangentVector> {
    prop::array::uniform4(-1e3f64..1e3)
        .prop_map(|a| TangentVector::new(Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3])))
}

proptest! {
    #[test]
    fn second_order_equals_first_order_on_sphere(
        v in vector(), r in 1e-3f64..1e3, lmr in 0.0f64..8.0, ls in -2.0f64..8.0,
    ) {
        let cfg = PhysicalConfig::new(1.0, 1.0, 1.0, 10f64.powf(lmr), 1.0, 10f64.powf(ls)).unwrap();
        let s = Surface::sphere(r).unwrap();
        let d1 = impedance_operator(1, &cfg).unwrap();
        let d2 = impedance_operator(2, &cfg).unwrap();
        prop_assert_eq!(d2.apply(&s, v), d1.apply(&s, v));
    }
}
