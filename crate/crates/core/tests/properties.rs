use proptest::prelude::*;
use scarmat_core::cat::Winding;
use scarmat_core::sc::{chain_at, chain_deviation, chain_generic, monodromy, window_weight};
use scarmat_core::scar::{window, ScarParams};
use scarmat_core::torus::{coherent_state, norm, TorusHilbert};
use scarmat_core::{cayley_of, default_cat, Mat2, PhasePoint};

proptest! {
    #[test]
    fn cayley_identity(a in -2.0..2.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64) {
        let m = Mat2::new(1.0, a, 0.0, 1.0) * Mat2::new(1.0, 0.0, b, 1.0) * Mat2::new(1.0, c, 0.0, 1.0);
        prop_assume!((Mat2::IDENTITY + m).det().abs() > 0.1);
        let bm = cayley_of(&m).unwrap().to_mat2();
        let lhs = Mat2::J * bm * (Mat2::IDENTITY + m);
        prop_assert!(lhs.max_abs_diff(&(Mat2::IDENTITY - m)) < 1e-11);
    }

    #[test]
    fn cat_powers_are_symplectic(n in -6i64..6) {
        prop_assert!(default_cat().m.pow(n).is_symplectic(1e-6));
    }

    #[test]
    fn chain_closed_form_matches_generic(t in -6.0..6.0f64) {
        let f = default_cat().frame;
        let g = chain_generic(&f, &monodromy(&f, t), t).unwrap();
        prop_assert!(chain_deviation(&chain_at(&f, t), &g) < 1e-10);
    }

    #[test]
    fn chord_consistency(p in 0.0..1.0f64, q in 0.0..1.0f64, mp in -2i64..=2, mq in -2i64..=2) {
        let c = default_cat();
        let w = Winding::new(mp, mq);
        let xm = PhasePoint::new(p, q);
        let xp = c.m.apply(xm) - w.as_point();
        let chord = c.chord_from_action((xp + xm) * 0.5, w);
        prop_assert!((chord - (xp - xm)).norm_sqr().sqrt() < 1e-10);
    }

    #[test]
    fn window_is_even_and_bounded(t in -20.0..20.0f64, big_t in 0.5..10.0f64) {
        prop_assert_eq!(window(t, big_t), window(-t, big_t));
        prop_assert!(window(t, big_t) <= 1.0);
    }

    #[test]
    fn window_weight_pairs(t in -3i64..3, tr in -10i64..10, phi1 in -3.0..3.0f64, phi2 in -3.0..3.0f64) {
        let p1 = ScarParams::new(PhasePoint::ORIGIN, 3.5).unwrap().with_phi(phi1);
        let p2 = ScarParams::new(PhasePoint::new(0.5, 0.5), 3.5).unwrap().with_phi(phi2);
        let a = window_weight(&p1, &p2, t, tr);
        let b = window_weight(&p2, &p1, -t, -tr);
        prop_assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn coherent_norm_is_dimension_free(n in 50usize..200, p in 0.0..1.0f64, q in 0.0..1.0f64) {
        let h = TorusHilbert::new(n).unwrap();
        let x = PhasePoint::new(p, q);
        let a = norm(&coherent_state(&h, x, 3));
        let b = norm(&coherent_state(&h, x, 4));
        prop_assert!((a - b).abs() < 1e-12);
        prop_assert!((a * a - (n as f64 / 2.0).sqrt()).abs() < 1e-10 * a * a);
    }
}
