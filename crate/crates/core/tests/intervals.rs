use multicrit_core::conditions::{
    constant_weight_intervals, separation_interval_generic, separation_interval_holder,
    separation_interval_invariant, separation_interval_sobolev, FProfile, GapStrictness,
    GenericIneqParams, GuaranteedInterval, SeparationData,
};
use multicrit_core::constants::{ConstantBound, Dimensions};
use proptest::prelude::*;

mod common;

use common::oracle::{agrees, oracle_invariant, oracle_sobolev};

#[derive(Clone, Debug)]
struct Sample {
    n: u32,
    k: u32,
    a1: f64,
    a2: f64,
    v: f64,
    b0g2: (f64, f64),
    b0: f64,
    f_max: f64,
    f_min: f64,
}

impl Sample {
    fn f(&self) -> FProfile {
        FProfile::new(self.f_max, self.f_min, 1.0, 0.0, 2).unwrap()
    }

    fn data(&self) -> SeparationData {
        SeparationData {
            a1: self.a1,
            a2: self.a2,
            volume: self.v,
            b0g2: ConstantBound::new(self.b0g2.0, self.b0g2.1).unwrap(),
        }
    }

    fn dims(&self) -> Dimensions {
        Dimensions::new(self.n, self.k).unwrap()
    }
}

/// Parameter sets in which the α-range straddles the constants, so both
/// empty and nonempty outcomes occur.
fn sample(min_reduced: u32) -> impl Strategy<Value = Sample> {
    (5u32..=12)
        .prop_flat_map(move |n| {
            let kmax = n.saturating_sub(min_reduced);
            (
                Just(n),
                0..=kmax,
                0.1f64..10.0,
                1.05f64..6.0,
                1.0f64..500.0,
                0.5f64..30.0,
                0f64..3.0,
                0.2f64..1.2,
                1.0f64..40.0,
                0.1f64..1.0,
            )
        })
        .prop_map(|(n, k, a1, ratio, vscale, lo, w, b0f, f_max, f_min)| Sample {
            n,
            k,
            a1,
            a2: a1 * ratio,
            v: a1 * ratio * vscale,
            b0g2: (lo, lo + w),
            b0: lo * b0f,
            f_max,
            f_min,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn generic_engine_matches_sobolev_form(s in sample(3)) {
        let dims = s.dims();
        let b0 = ConstantBound::exact(s.b0);
        let gen = GenericIneqParams::sobolev(s.n, &b0).unwrap();
        let g = separation_interval_generic(&dims, &gen, &s.data(), &s.f(), GapStrictness::Strict).unwrap();
        let lib = separation_interval_sobolev(&dims, &s.data(), &b0, &s.f(), GapStrictness::Strict).unwrap();
        let o = oracle_sobolev(s.n, s.k, s.a1, s.a2, s.v, s.b0g2, s.b0, s.f_max);
        prop_assert!(agrees(&g, &o, 1e-12).is_ok(), "{:?}", agrees(&g, &o, 1e-12));
        prop_assert!(agrees(&lib, &o, 1e-12).is_ok(), "{:?}", agrees(&lib, &o, 1e-12));
    }

    #[test]
    fn generic_engine_matches_invariant_form(s in sample(5)) {
        let dims = s.dims();
        let data = s.data();
        let gen = GenericIneqParams::invariant(&dims, s.a2, &data.b0g2).unwrap();
        let g = separation_interval_generic(&dims, &gen, &data, &s.f(), GapStrictness::Strict).unwrap();
        let lib = separation_interval_invariant(&dims, &data, &s.f(), GapStrictness::Strict).unwrap();
        let o = oracle_invariant(s.n, s.k, s.a1, s.a2, s.v, s.b0g2, s.f_max);
        prop_assert!(agrees(&g, &o, 1e-12).is_ok(), "{:?}", agrees(&g, &o, 1e-12));
        prop_assert!(agrees(&lib, &o, 1e-12).is_ok(), "{:?}", agrees(&lib, &o, 1e-12));
    }

    #[test]
    fn holder_interval_at_unit_weight_matches_double_lower_end(s in sample(3), g1 in 0.5f64..40.0) {
        let dims = s.dims();
        let data = s.data();
        let h = separation_interval_holder(&dims, &data, &FProfile::constant(1.0).unwrap(), GapStrictness::Strict).unwrap();
        let cw = constant_weight_intervals(&dims, s.a1, s.a2, s.v, &ConstantBound::exact(g1), &data.b0g2).unwrap();
        prop_assert_eq!(h.lo, cw.double.lo);
    }

    #[test]
    fn larger_volume_ratio_never_shrinks(s in sample(5), grow in 1.0f64..3.0) {
        let dims = s.dims();
        let data = s.data();
        let f = s.f();
        let mut wider = data;
        wider.a1 = data.a1 / grow;
        let gen = GenericIneqParams::invariant(&dims, s.a2, &data.b0g2).unwrap();
        for (a, b) in [
            (
                separation_interval_generic(&dims, &gen, &data, &f, GapStrictness::Strict).unwrap(),
                separation_interval_generic(&dims, &gen, &wider, &f, GapStrictness::Strict).unwrap(),
            ),
            (
                separation_interval_holder(&dims, &data, &f, GapStrictness::Strict).unwrap(),
                separation_interval_holder(&dims, &wider, &f, GapStrictness::Strict).unwrap(),
            ),
        ] {
            prop_assert!(subset(&a, &b), "{a:?} not inside {b:?}");
        }
    }

    #[test]
    fn widening_a_bound_never_grows_the_interval(s in sample(3), dlo in 0f64..2.0, dhi in 0f64..2.0, db in 0f64..2.0) {
        let dims = s.dims();
        let data = s.data();
        let f = s.f();
        let mut wide = data;
        wide.b0g2 = ConstantBound::new((s.b0g2.0 - dlo).max(0.01), s.b0g2.1 + dhi).unwrap();
        let b0 = ConstantBound::exact(s.b0);
        let b0w = ConstantBound::new(s.b0, s.b0 + db).unwrap();
        let gen = GenericIneqParams::sobolev(s.n, &b0).unwrap();
        let genw = GenericIneqParams::sobolev(s.n, &b0w).unwrap();
        let pairs = [
            (
                separation_interval_generic(&dims, &gen, &data, &f, GapStrictness::Strict).unwrap(),
                separation_interval_generic(&dims, &genw, &wide, &f, GapStrictness::Strict).unwrap(),
            ),
            (
                separation_interval_holder(&dims, &data, &f, GapStrictness::Strict).unwrap(),
                separation_interval_holder(&dims, &wide, &f, GapStrictness::Strict).unwrap(),
            ),
            (
                constant_weight_intervals(&dims, s.a1, s.a2, s.v, &b0, &data.b0g2).unwrap().double,
                constant_weight_intervals(&dims, s.a1, s.a2, s.v, &b0w, &wide.b0g2).unwrap().double,
            ),
            (
                constant_weight_intervals(&dims, s.a1, s.a2, s.v, &b0, &data.b0g2).unwrap().triple,
                constant_weight_intervals(&dims, s.a1, s.a2, s.v, &b0w, &wide.b0g2).unwrap().triple,
            ),
        ];
        for (narrow, widened) in pairs {
            prop_assert!(subset(&widened, &narrow), "{widened:?} not inside {narrow:?}");
        }
    }
}

/// `a ⊆ b`.
fn subset(a: &GuaranteedInterval, b: &GuaranteedInterval) -> bool {
    if a.empty {
        return true;
    }
    if b.empty {
        return false;
    }
    let lo_ok = a.lo > b.lo || (a.lo == b.lo && (a.lo_strict || !b.lo_strict));
    let hi_ok = a.hi < b.hi || (a.hi == b.hi && (a.hi_strict || !b.hi_strict));
    lo_ok && hi_ok
}

#[test]
fn unknown_upper_estimate_is_reported_not_guessed() {
    let dims = Dimensions::new(8, 0).unwrap();
    let data = SeparationData {
        a1: 1.0,
        a2: 2.0,
        volume: 10.0,
        b0g2: ConstantBound::at_least(5.0),
    };
    let f = FProfile::constant(1.0).unwrap();
    let h = separation_interval_holder(&dims, &data, &f, GapStrictness::Strict).unwrap();
    assert!(h.empty && h.is_unknown());
    let g = separation_interval_invariant(&dims, &data, &f, GapStrictness::Strict).unwrap();
    assert!(g.empty && g.is_unknown());
}

#[test]
fn equal_volumes_rejected() {
    let dims = Dimensions::new(8, 0).unwrap();
    let data = SeparationData {
        a1: 2.0,
        a2: 2.0,
        volume: 10.0,
        b0g2: ConstantBound::exact(5.0),
    };
    let f = FProfile::constant(1.0).unwrap();
    assert!(separation_interval_holder(&dims, &data, &f, GapStrictness::Strict).is_err());
}
