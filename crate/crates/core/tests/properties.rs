use std::sync::Arc;

use proptest::prelude::*;
use vcoalg::finspace::{self, is_continuous, space_from_opens, FinSpace};
use vcoalg::functorlang::{parse_functor, FunctorExpr};
use vcoalg::hybrid::{fmt_sig, round_sig, unfold_ball, BallParams, BallState};
use vcoalg::json::{parse_space, space_to_json};
use vcoalg::vietoris::Variant;

fn preorder() -> impl Strategy<Value = Arc<FinSpace>> {
    (0usize..=5).prop_flat_map(|n| {
        prop::collection::vec(prop::bool::weighted(0.3), n * n).prop_map(move |bits| {
            let pairs: Vec<(usize, usize)> = (0..n * n)
                .filter(|&k| bits[k] && k / n != k % n)
                .map(|k| (k / n, k % n))
                .collect();
            let labels = (0..n).map(|i| format!("p{i}")).collect();
            Arc::new(FinSpace::from_pairs_closed(labels, &pairs))
        })
    })
}

fn functor_expr() -> impl Strategy<Value = FunctorExpr> {
    let leaf = prop_oneof![
        Just(FunctorExpr::Id),
        Just(FunctorExpr::constant("two")),
        Just(FunctorExpr::constant("sierpinski")),
        prop::sample::select(Variant::ALL.to_vec()).prop_map(FunctorExpr::Hyper),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FunctorExpr::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FunctorExpr::prod(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| FunctorExpr::comp(a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn closure_is_a_closure_operator(x in preorder(), mask in any::<u8>()) {
        let s = x.set_of((0..x.len()).filter(|i| mask & (1 << i) != 0));
        let c = x.closure(&s);
        prop_assert!(s.is_subset(&c));
        prop_assert_eq!(x.closure(&c), c.clone());
        prop_assert!(x.is_closed(&c));
        let sat = x.saturation(&s);
        prop_assert!(s.is_subset(&sat) && x.is_open(&sat));
    }

    #[test]
    fn opens_determine_the_space(x in preorder()) {
        let opens = x.opens().unwrap();
        let y = space_from_opens(x.labels().to_vec(), &opens).unwrap();
        prop_assert!(y.same_order(&x));
        for u in &opens {
            let mut complement = x.full_set();
            complement.difference_with(u);
            prop_assert!(x.is_closed(&complement));
        }
    }

    #[test]
    fn json_round_trip(x in preorder()) {
        let y = parse_space(&space_to_json(&x)).unwrap();
        prop_assert_eq!(y.labels(), x.labels());
        prop_assert!(y.same_order(&x));
    }

    #[test]
    fn projections_and_injections(x in preorder(), y in preorder()) {
        let p = finspace::product(&x, &y);
        prop_assert!(is_continuous(&p.proj1) && is_continuous(&p.proj2));
        let c = finspace::coproduct(&x, &y);
        prop_assert!(c.inl.is_embedding() && c.inr.is_embedding());
    }

    #[test]
    fn functor_syntax_round_trips(e in functor_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_functor(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn bouncing_ball_invariants(p in 0.0f64..20.0, v in -10.0f64..10.0, factor in 0.05f64..0.95) {
        let params = BallParams::deterministic(9.8, factor).unwrap();
        let traj = unfold_ball(BallState::new(p, v).unwrap(), 5, &params).unwrap();
        for (k, seg) in traj.segments.iter().enumerate() {
            let d = seg.evolution.duration.as_f64();
            prop_assert!(d >= 0.0);
            prop_assert!(seg.evolution.end_value().abs() <= 1e-9 * (1.0 + p + v * v));
            for i in 0..=16 {
                prop_assert!(seg.evolution.eval(d * i as f64 / 16.0) >= -1e-9 * (1.0 + p + v * v));
            }
            if k > 0 {
                prop_assert_eq!(seg.start.p, 0.0);
                let prev = &traj.segments[k - 1];
                let impact = -(prev.evolution.a1 + 2.0 * prev.evolution.a2 * prev.evolution.duration.as_f64());
                prop_assert!((seg.start.v - factor * impact).abs() <= 1e-9 * (1.0 + impact.abs()));
            }
        }
    }

    #[test]
    fn number_formatting_is_stable(x in -1e6f64..1e6) {
        let r = round_sig(x);
        prop_assert_eq!(round_sig(r), r);
        prop_assert_eq!(fmt_sig(r).parse::<f64>().unwrap(), r);
    }
}
