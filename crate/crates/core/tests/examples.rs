use multicrit_core::conditions::{default_weight, example_interval_unchecked};
use multicrit_core::geometry::{circle_sphere_sphere_b2_max, cylinder_triple_t_bounds};
use multicrit_core::{example_interval, Error, ExampleId, ExampleParams, GuaranteedInterval};

mod common;

use common::oracle::{example_closed_form, example_points, rel};

fn interval(id: ExampleId, p: ExampleParams) -> GuaranteedInterval {
    let f = default_weight(id, &p).unwrap();
    example_interval(id, &p, &f).unwrap()
}

#[test]
fn every_configuration_matches_its_closed_form() {
    for id in ExampleId::ALL {
        for p in example_points(id) {
            let (lo, hi, lo_strict, hi_strict) = example_closed_form(id, &p);
            let got = interval(id, p);
            assert!(!got.empty, "{id} {p:?}: empty");
            assert!(rel(got.lo, lo) < 1e-12, "{id} {p:?}: lo {} vs {lo}", got.lo);
            assert!(rel(got.hi, hi) < 1e-12, "{id} {p:?}: hi {} vs {hi}", got.hi);
            assert_eq!((got.lo_strict, got.hi_strict), (lo_strict, hi_strict), "{id} {p:?}");
        }
    }
}

#[test]
fn hopf_over_the_listed_radii() {
    let id = ExampleId::Hopf;
    for t in [1.5, 2.0, 8.0, 100.0] {
        let p = ExampleParams { t, ..ExampleParams::defaults(id) };
        let got = interval(id, p);
        // Absolute: the lower end is a difference of O(1) quantities.
        assert!((got.lo - 3.0 / (4.0 * t.powf(2.0 / 3.0))).abs() <= 1e-15);
        assert_eq!((got.hi, got.hi_strict), (0.75, true));
    }
    let got = interval(id, ExampleParams::defaults(id));
    assert!((got.lo - 3.0 / 16.0).abs() <= 1e-15 && got.hi == 0.75);
}

fn rejected_then_empty(id: ExampleId, p: ExampleParams) {
    let f = default_weight(id, &p).unwrap();
    match example_interval(id, &p, &f) {
        Err(Error::Precondition(_)) => {}
        other => panic!("{id} {p:?}: expected a precondition error, got {other:?}"),
    }
    let got = example_interval_unchecked(id, &p, &f).unwrap();
    assert!(got.empty, "{id} {p:?}: {got:?}");
}

#[test]
fn out_of_window_parameters() {
    let id = ExampleId::CircleSphereSphere;
    let b2 = circle_sphere_sphere_b2_max(10) * 1.5;
    rejected_then_empty(id, ExampleParams { b: b2.sqrt(), ..ExampleParams::defaults(id) });

    let id = ExampleId::CylinderOrbit;
    // Threshold is 2^2 = 4 at n = 5; at t <= 1 the orbit volumes are not ordered.
    for t in [1.5, 2.0, 3.9] {
        rejected_then_empty(id, ExampleParams { t, ..ExampleParams::defaults(id) });
    }

    let id = ExampleId::CylinderTriple;
    let (t1, t2) = cylinder_triple_t_bounds(5, 1.0, 2.0).unwrap();
    let p = ExampleParams { t: 0.5 * t1.max(t2), ..ExampleParams::defaults(id) };
    assert!(example_interval(id, &p, &default_weight(id, &p).unwrap()).is_err());
}
