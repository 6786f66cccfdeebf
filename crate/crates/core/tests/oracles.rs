#![allow(clippy::excessive_precision)]

use num_complex::Complex64;
use scarmat_core::exact::{
    coherent_element_exact, coherent_element_exact_hp, nilpotent_order, scar_element_double_sum,
    scar_element_exact, ComparisonRecord,
};
use scarmat_core::sc::{coherent_sc_element_torus, ScEngine, ScarScMode};
use scarmat_core::scar::{ehrenfest_time, scar_state, EhrenfestConvention, ScarParams};
use scarmat_core::torus::{cat_propagator, inner, propagator_power, TorusHilbert};
use scarmat_core::{default_cat, Error, PhasePoint};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm()
}

const HALF: PhasePoint = PhasePoint { p: 0.5, q: 0.5 };

// 35-digit references from an independent arbitrary-precision evaluation
#[test]
fn high_precision_oracle_matches_reference_values() {
    let cases = [
        (200, 1, c(-6.9788682059787520509e-15, 2.9562960126537997927e-14)),
        (200, 2, c(2.9417434444342569531e-10, -4.1026763691641069789e-10)),
        (100, 1, c(-4.6309145355831413247e-8, 1.9616868770722055357e-7)),
    ];
    for (n, t, want) in cases {
        let h = TorusHilbert::new(n).unwrap();
        let got = coherent_element_exact_hp(&h, PhasePoint::ORIGIN, HALF, t, 128);
        assert!(rel(want, got) < 1e-14, "N={n} t={t}: {got} vs {want}");
    }
}

#[test]
fn high_precision_agrees_with_dense_when_resolvable() {
    let h = TorusHilbert::new(31).unwrap();
    let u = cat_propagator(&h);
    let x1 = PhasePoint::new(0.2, 0.7);
    for t in [-2, 0, 1, 3] {
        let a = coherent_element_exact(&h, &u, x1, HALF, t);
        let b = coherent_element_exact_hp(&h, x1, HALF, t, 96);
        assert!((a - b).norm() < 1e-13, "t={t}");
    }
}

#[test]
fn coherent_exact_trivial_examples() {
    let h = TorusHilbert::new(40).unwrap();
    let u = cat_propagator(&h);
    let x = PhasePoint::new(0.3, 0.6);
    assert!((coherent_element_exact(&h, &u, x, x, 0) - 1.0).norm() < 1e-14);
    for t in -3..=3 {
        assert!(coherent_element_exact(&h, &u, x, HALF, t).norm() <= 1.0 + 1e-14);
    }
}

#[test]
fn coherent_sc_matches_exact_at_100() {
    let h = TorusHilbert::new(100).unwrap();
    let engine = ScEngine::new(default_cat(), h);
    let exact = coherent_element_exact_hp(&h, PhasePoint::ORIGIN, HALF, 1, 128);
    let sc = coherent_sc_element_torus(&engine, 1, PhasePoint::ORIGIN, HALF).unwrap();
    assert!(rel(exact, sc) < 1e-8);
}

#[test]
fn scar_exact_routes_agree() {
    let h = TorusHilbert::new(60).unwrap();
    let u = cat_propagator(&h);
    let t_e = ehrenfest_time(60, default_cat().frame.lambda, EhrenfestConvention::LogN).unwrap();
    let p1 = ScarParams::new(PhasePoint::ORIGIN, t_e).unwrap().with_phi(0.4);
    let p2 = ScarParams::new(HALF, t_e).unwrap().with_phi(-1.1);
    for t in -1..=2 {
        let a = scar_element_exact(&h, &u, &p1, &p2, t);
        let b = scar_element_double_sum(&h, &u, &p1, &p2, t);
        assert!((a - b).norm() < 1e-13, "t={t}");
    }
    let plain = inner(&scar_state(&h, &u, &p1), &scar_state(&h, &u, &p2));
    assert_eq!(scar_element_exact(&h, &u, &p1, &p2, 0), plain);
}

#[test]
fn scar_sc_exact_w_matches_exact() {
    let n = 104;
    let h = TorusHilbert::new(n).unwrap();
    let u = cat_propagator(&h);
    let t_e = ehrenfest_time(n, default_cat().frame.lambda, EhrenfestConvention::default()).unwrap();
    let p1 = ScarParams::new(PhasePoint::ORIGIN, t_e).unwrap();
    let p2 = ScarParams::new(HALF, t_e).unwrap();
    let engine = ScEngine::new(default_cat(), h);
    for t in 0..=1 {
        let exact = scar_element_exact(&h, &u, &p1, &p2, t);
        let sc = engine.scar_element(&p1, &p2, t, ScarScMode::ExactW).unwrap();
        let rec = ComparisonRecord::new(&p1, &p2, n, t, exact, sc.value, ScarScMode::ExactW);
        assert!(rec.rel_err < 1e-8, "t={t}: {rec:?}");
        assert_eq!(rec.abs_err, (exact - sc.value).norm());
    }
}

#[test]
fn scar_sc_rejects_non_fixed_points() {
    let h = TorusHilbert::new(20).unwrap();
    let engine = ScEngine::new(default_cat(), h);
    let p = ScarParams::new(PhasePoint::new(0.1, 0.2), 3.0).unwrap();
    let q = ScarParams::new(PhasePoint::ORIGIN, 3.0).unwrap();
    let err = engine.scar_element(&p, &q, 0, ScarScMode::ExactW).unwrap_err();
    assert!(matches!(err, Error::NotFixedPoint { .. }));
}

#[test]
fn nilpotency_examples() {
    let one = cat_propagator(&TorusHilbert::new(1).unwrap());
    assert_eq!(nilpotent_order(&one, 1).unwrap().0, 1);
    let h = TorusHilbert::new(5).unwrap();
    let u = cat_propagator(&h);
    let (k, phase) = nilpotent_order(&u, 15).unwrap();
    assert!(k <= 15);
    let p2 = propagator_power(&u, 2 * k as i64);
    let z = Complex64::from_polar(1.0, 2.0 * phase);
    for ((i, j), v) in p2.indexed_iter() {
        let want = if i == j { z } else { Complex64::new(0.0, 0.0) };
        assert!((v - want).norm() < 1e-10);
    }
    assert!(matches!(nilpotent_order(&u, k - 1), Err(Error::NotFound { .. })));
}
