//! Curvature data and shifted metrics of the canonical surfaces.

use magskin_core::fit::ConvergenceFit;
use magskin_core::geometry::Surface;
use magskin_core::{Complex64, Error, TangentVector};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn surfaces() -> [Surface; 5] {
    [
        Surface::Plane,
        Surface::cylinder(1.0).unwrap(),
        Surface::cylinder(0.01).unwrap(),
        Surface::sphere(1.0).unwrap(),
        Surface::sphere(3.5).unwrap(),
    ]
}

fn vector() -> impl Strategy<Value = TangentVector> {
    prop::array::uniform4(-10.0f64..10.0).prop_map(|a| TangentVector::new(c(a[0], a[1]), c(a[2], a[3])))
}

#[test]
fn mean_curvature_examples() {
    assert_eq!(Surface::Plane.mean_curvature(), 0.0);
    assert_eq!(Surface::cylinder(2.0).unwrap().mean_curvature(), 0.25);
    assert_eq!(Surface::sphere(1.0).unwrap().mean_curvature(), 1.0);
}

#[test]
fn mean_curvature_is_half_trace() {
    for s in surfaces() {
        let m = s.curvature_matrix();
        assert_eq!(s.mean_curvature(), 0.5 * (m[0][0] + m[1][1]));
    }
}

#[test]
fn shifted_metric_examples() {
    let m = Surface::Plane.shifted_inverse_metric(0.3).unwrap();
    assert_eq!(m.exact, [[1.0, 0.0], [0.0, 1.0]]);
    assert_eq!(m.truncation_gap(), 0.0);

    let m = Surface::sphere(1.0).unwrap().shifted_inverse_metric(0.1).unwrap();
    let d = 1.0 / 0.81;
    assert!((m.exact[0][0] - d).abs() < 1e-15 && (m.exact[1][1] - d).abs() < 1e-15);
    assert_eq!(m.first_order, [[1.2, 0.0], [0.0, 1.2]]);

    let m = Surface::cylinder(1.0).unwrap().shifted_inverse_metric(0.0).unwrap();
    assert_eq!(m.exact, [[1.0, 0.0], [0.0, 1.0]]);
}

#[test]
fn shifted_metric_truncation_is_second_order() {
    for s in [Surface::cylinder(1.0).unwrap(), Surface::sphere(1.0).unwrap()] {
        let pts: Vec<_> = magskin_core::reference::log_grid(1e-4, 1e-1, 13)
            .into_iter()
            .map(|h| (h, s.shifted_inverse_metric(h).unwrap().truncation_gap()))
            .collect();
        let fit = ConvergenceFit::new(pts).unwrap();
        assert!(fit.slope_within(2.0, 0.05), "{s:?}: {fit:?}");
    }
}

#[test]
fn depth_outside_collar_rejected() {
    let s = Surface::cylinder(1.0).unwrap();
    for h in [-1e-3, 0.5, 2.0, f64::NAN] {
        assert!(matches!(s.shifted_inverse_metric(h), Err(Error::Domain(_))), "{h}");
    }
    assert!(Surface::Plane.shifted_inverse_metric(1e6).is_ok());
}

#[test]
fn invalid_radius_rejected() {
    for r in [0.0, -1.0, f64::INFINITY, f64::NAN] {
        assert!(matches!(
            Surface::cylinder(r),
            Err(Error::InvalidParameter { name: "radius", .. })
        ));
        assert!(Surface::sphere(r).is_err());
    }
}

#[test]
fn config_form() {
    let s: Surface = serde_json::from_str(r#"{"kind": "cylinder", "radius": 0.01}"#).unwrap();
    assert_eq!(s, Surface::Cylinder { radius: 0.01 });
    let s: Surface = serde_json::from_str(r#"{"kind": "sphere", "radius_m": 2.0}"#).unwrap();
    assert_eq!(s, Surface::Sphere { radius: 2.0 });
    let s: Surface = serde_json::from_str(r#"{"kind": "plane"}"#).unwrap();
    assert_eq!(s, Surface::Plane);
    assert!(serde_json::from_str::<Surface>(r#"{"kind": "torus", "radius": 1.0}"#).is_err());
}

proptest! {
    #[test]
    fn sphere_is_umbilic(v in vector(), r in 0.01f64..100.0) {
        let s = Surface::sphere(r).unwrap();
        prop_assert_eq!(s.mean_minus_curvature(v), TangentVector::ZERO);
    }

    #[test]
    fn curvature_is_linear_and_self_adjoint(u in vector(), v in vector(), a in -5.0f64..5.0, b in -5.0f64..5.0) {
        for s in surfaces() {
            let lhs = s.curvature_apply(u * a + v * b);
            let rhs = s.curvature_apply(u) * a + s.curvature_apply(v) * b;
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
            let x = s.curvature_apply(u).inner(&v);
            let y = u.inner(&s.curvature_apply(v));
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn exact_metric_inverts_shifted_metric(h in 0.0f64..0.49, r in 0.1f64..10.0) {
        // a_ab(h) = (1 - k h)^2 per principal direction
        for s in [Surface::cylinder(r).unwrap(), Surface::sphere(r).unwrap()] {
            let h = h * r;
            let m = s.shifted_inverse_metric(h).unwrap();
            for (i, k) in s.principal_curvatures().into_iter().enumerate() {
                let a = (1.0 - k * h).powi(2);
                prop_assert!((m.exact[i][i] * a - 1.0).abs() < 1e-13);
            }
        }
    }
}
