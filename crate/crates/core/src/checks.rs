//! Property suites with measured residuals, shared by the CLI and the tests.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cat::{default_cat, CatMapSpec, Winding};
use crate::error::{Error, Result};
use crate::exact::{nilpotent_order, scar_element_exact};
use crate::sc::{
    chain_at, chain_deviation, chain_generic, coherent_sc_element_plane, monodromy, plane_overlap,
};
use crate::scar::{ehrenfest_time, scar_state, EhrenfestConvention, ScarParams};
use crate::symplectic::{cayley_of, Mat2, PhasePoint};
use crate::torus::{
    cat_propagator, cat_weyl_predicted, coherent_state, inner, max_abs_diff, norm, propagator_power,
    reconstruct, reflection_op, reflection_op_doubled, translation_op, unitarity_residual, weyl_symbol,
    OperatorMatrix, TorusHilbert,
};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Random tuples per composition identity.
pub const TUPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Symplectic,
    Cat,
    Translations,
    /// Everything built on reflection operators; needs odd `N`.
    Weyl,
    Torus,
    Sc,
    Scar,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Symplectic,
        Suite::Cat,
        Suite::Translations,
        Suite::Weyl,
        Suite::Torus,
        Suite::Sc,
        Suite::Scar,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Symplectic => "symplectic",
            Suite::Cat => "cat",
            Suite::Translations => "translations",
            Suite::Weyl => "weyl",
            Suite::Torus => "torus",
            Suite::Sc => "sc",
            Suite::Scar => "scar",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    pub fn new(suite: Suite, name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            suite,
            name: name.into(),
            residual,
            tolerance,
            // NaN fails
            passed: residual <= tolerance,
        }
    }

    fn failed(suite: Suite, name: impl Into<String>, tolerance: f64) -> Self {
        Self::new(suite, name, f64::INFINITY, tolerance)
    }
}

/// Runs one suite at dimension `n`. Fixed-size checks (Table-1 dimensions,
/// the nilpotency scan) ignore `n`.
pub fn run_suite(suite: Suite, n: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ suite as u64);
    let h = TorusHilbert::new(n)?;
    match suite {
        Suite::Symplectic => Ok(symplectic_checks(&mut rng)),
        Suite::Cat => cat_checks(&default_cat(), &mut rng),
        Suite::Translations => Ok(vec![translation_composition(&h, &mut rng)]),
        Suite::Weyl => {
            if n % 2 == 0 {
                return Ok(vec![CheckResult::failed(
                    suite,
                    format!("odd-dimension (N={n})"),
                    0.0,
                )]);
            }
            reflection_checks(&h, &mut rng)
        }
        Suite::Torus => Ok(torus_checks(&h)),
        Suite::Sc => Ok(sc_checks(&mut rng)),
        Suite::Scar => scar_checks(),
    }
}

/// Runs every suite not in `skip`, in [`Suite::ALL`] order.
pub fn run_all(n: usize, seed: u64, skip: &[Suite]) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for s in Suite::ALL {
        if !skip.contains(&s) {
            out.extend(run_suite(s, n, seed)?);
        }
    }
    Ok(out)
}

fn cis_turns(num: i64, den: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * num.rem_euclid(den) as f64 / den as f64)
}

fn random_symplectic(rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let a = rng.random_range(-2.0..2.0);
        let b = rng.random_range(-2.0..2.0);
        let c = rng.random_range(-2.0..2.0);
        let m = Mat2::new(1.0, a, 0.0, 1.0) * Mat2::new(1.0, 0.0, b, 1.0) * Mat2::new(1.0, c, 0.0, 1.0);
        if (Mat2::IDENTITY + m).det().abs() > 0.1 {
            return m;
        }
    }
}

fn symplectic_checks(rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let s = Suite::Symplectic;
    let mut cay = 0.0f64;
    let mut sym = 0.0f64;
    for _ in 0..100 {
        let m = random_symplectic(rng);
        match cayley_of(&m) {
            Ok(b) => {
                let lhs = Mat2::J * b.to_mat2() * (Mat2::IDENTITY + m);
                cay = cay.max(lhs.max_abs_diff(&(Mat2::IDENTITY - m)));
                let bm = b.to_mat2();
                sym = sym.max(bm.max_abs_diff(&bm.transpose()));
            }
            Err(_) => cay = f64::INFINITY,
        }
    }
    let f = default_cat().frame;
    let mut wedge = 0.0f64;
    let mut gram = 0.0f64;
    for _ in 0..100 {
        let (u1, s1, u2, s2) = (
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let (a, b) = (f.from_frame(u1, s1), f.from_frame(u2, s2));
        wedge = wedge.max((a.wedge(b) - (u1 * s2 - s1 * u2)).abs());
        gram = gram.max((f.gram.quad(PhasePoint::new(u1, s1)) - a.norm_sqr()).abs());
    }
    let pd = if f.gram.xx > 0.0 && f.gram.det() > 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    vec![
        CheckResult::new(s, "cayley-identity", cay, 1e-12),
        CheckResult::new(s, "cayley-symmetric", sym, 1e-12),
        CheckResult::new(s, "frame-wedge", wedge, 1e-12),
        CheckResult::new(s, "gram-positive", pd, 0.0),
        CheckResult::new(s, "gram-dot", gram, 1e-12),
    ]
}

/// Largest `|chord(∂S/∂x by central differences) - explicit chord|` over `points` random centres.
pub fn finite_difference_chord(spec: &CatMapSpec, step: f64, points: usize, rng: &mut impl Rng) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..points {
        let xm = PhasePoint::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
        let w = Winding::new(rng.random_range(-2..=2), rng.random_range(-2..=2));
        let xp = spec.m.apply(xm) - w.as_point();
        let x = (xp + xm) * 0.5;
        let ds = |d: PhasePoint| {
            (spec.generating_action(x + d * step, w) - spec.generating_action(x - d * step, w)) / (2.0 * step)
        };
        let grad = PhasePoint::new(ds(PhasePoint::new(1.0, 0.0)), ds(PhasePoint::new(0.0, 1.0)));
        let chord = Mat2::J.scale(-1.0).apply(grad);
        worst = worst.max((chord - (xp - xm)).norm_sqr().sqrt());
    }
    worst
}

fn cat_checks(spec: &CatMapSpec, rng: &mut ChaCha8Rng) -> Result<Vec<CheckResult>> {
    let s = Suite::Cat;
    let mut analytic = 0.0f64;
    for _ in 0..100 {
        let xm = PhasePoint::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
        for mp in -2..=2 {
            for mq in -2..=2 {
                let w = Winding::new(mp, mq);
                let xp = spec.m.apply(xm) - w.as_point();
                let chord = spec.chord_from_action((xp + xm) * 0.5, w);
                analytic = analytic.max((chord - (xp - xm)).norm_sqr().sqrt());
            }
        }
    }
    let fd = finite_difference_chord(spec, 1e-5, 100, rng);
    let mut periodic = 0.0f64;
    let mut count = 0.0f64;
    for l in 1..=3u32 {
        let pts = spec.enumerate_periodic_points(l)?;
        let expected = (spec.m.pow(l as i64) - Mat2::IDENTITY).det().abs().round();
        count = count.max((pts.len() as f64 - expected).abs());
        for p in pts {
            periodic = periodic.max(spec.iterate(p.point, l as i64).torus_distance(p.point));
        }
    }
    Ok(vec![
        CheckResult::new(s, "chord-analytic", analytic, 1e-10),
        CheckResult::new(s, "chord-finite-difference", fd, 1e-6),
        CheckResult::new(s, "periodic-points-return", periodic, 1e-12),
        CheckResult::new(s, "periodic-point-count", count, 0.0),
    ])
}

fn lattice(rng: &mut ChaCha8Rng, n: i64) -> (i64, i64) {
    (rng.random_range(0..n), rng.random_range(0..n))
}

fn shift(rng: &mut ChaCha8Rng, n: i64) -> (i64, i64) {
    (rng.random_range(-n..=n), rng.random_range(-n..=n))
}

/// `T₂T₁ = T₁₊₂ e^{-iξ₁∧ξ₂/2ħ}` for `ξ = (a, b)/N`.
fn translation_composition(h: &TorusHilbert, rng: &mut ChaCha8Rng) -> CheckResult {
    let n = h.n as i64;
    let mut worst = 0.0f64;
    for _ in 0..TUPLES {
        let (a1, b1) = shift(rng, n);
        let (a2, b2) = shift(rng, n);
        let lhs = translation_op(h, a2, b2).dot(&translation_op(h, a1, b1));
        let rhs = translation_op(h, a1 + a2, b1 + b2) * cis_turns(-(a1 * b2 - b1 * a2), 2 * n);
        worst = worst.max(max_abs_diff(&lhs, &rhs));
    }
    CheckResult::new(Suite::Translations, "tt-composition", worst, 1e-12)
}

fn trace_product(a: &OperatorMatrix, b: &OperatorMatrix) -> Complex64 {
    a.iter().zip(b.t().iter()).map(|(x, y)| x * y).sum()
}

fn reflection_checks(h: &TorusHilbert, rng: &mut ChaCha8Rng) -> Result<Vec<CheckResult>> {
    let s = Suite::Weyl;
    let n = h.n as i64;
    let refl = |a: i64, b: i64| reflection_op(h, a, b);
    let mut rt = 0.0f64;
    let mut tr = 0.0f64;
    let mut rr = 0.0f64;
    let mut triple = 0.0f64;
    for _ in 0..TUPLES {
        let (a, b) = lattice(rng, n);
        let (c, d) = shift(rng, n);
        let r = refl(a, b)?;
        let t = translation_op(h, c, d);
        // x∧ξ/ħ = 2π(ad - bc)/N
        let ph = cis_turns(-(a * d - b * c), n);
        rt = rt.max(max_abs_diff(
            &r.dot(&t),
            &(reflection_op_doubled(h, 2 * a - c, 2 * b - d) * ph),
        ));
        tr = tr.max(max_abs_diff(
            &t.dot(&r),
            &(reflection_op_doubled(h, 2 * a + c, 2 * b + d) * ph),
        ));

        let (a1, b1) = lattice(rng, n);
        let (a2, b2) = lattice(rng, n);
        // R_{x₂} R_{x₁} = T_{2(x₂-x₁)} e^{2i x₁∧x₂/ħ}
        let lhs = refl(a2, b2)?.dot(&refl(a1, b1)?);
        let rhs = translation_op(h, 2 * (a2 - a1), 2 * (b2 - b1)) * cis_turns(2 * (a1 * b2 - b1 * a2), n);
        rr = rr.max(max_abs_diff(&lhs, &rhs));

        // R_{x₂} R_x R_{x₁} = e^{iΔ₃/ħ} R_{x₂-x+x₁}, Δ₃ = 2(x₂ - x)∧(x₁ - x)
        let lhs = refl(a2, b2)?.dot(&r).dot(&refl(a1, b1)?);
        let (u, v) = ((a2 - a, b2 - b), (a1 - a, b1 - b));
        let rhs = reflection_op_doubled(h, 2 * (a2 - a + a1), 2 * (b2 - b + b1))
            * cis_turns(2 * (u.0 * v.1 - u.1 * v.0), n);
        triple = triple.max(max_abs_diff(&lhs, &rhs));
    }

    let all: Vec<OperatorMatrix> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .map(|(a, b)| refl(a, b))
        .collect::<Result<_>>()?;
    let mut sum: OperatorMatrix = Array2::zeros((h.n, h.n));
    for r in &all {
        sum += r;
    }
    let complete = max_abs_diff(&(sum / Complex64::from(n as f64)), &h.identity());
    let mut orth = 0.0f64;
    for (i, r1) in all.iter().enumerate() {
        for (j, r2) in all.iter().enumerate() {
            let want = if i == j { n as f64 } else { 0.0 };
            orth = orth.max((trace_product(r1, r2) - want).norm());
        }
    }
    let a_op: OperatorMatrix = Array2::from_shape_fn((h.n, h.n), |_| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let rep = max_abs_diff(&reconstruct(h, &weyl_symbol(h, &a_op)?)?, &a_op);

    let spec = default_cat();
    let u = cat_propagator(h);
    let sym = weyl_symbol(h, &u)?;
    let mut ugxp = 0.0f64;
    for ((a, b), z) in sym.indexed_iter() {
        let x = PhasePoint::new(a as f64 / n as f64, b as f64 / n as f64);
        ugxp = ugxp.max((z - cat_weyl_predicted(h, &spec, x)).norm());
    }
    // time reversal p → -p is antiunitary and maps U to U⁻¹:
    // Uˡ(p, q) = Uˡ⁻(-p, q)* = Uˡ⁻(p, -q)* with Uˡ⁻ the symbol of U⁻ˡ
    let mut qsym = 0.0f64;
    for l in 1..=3 {
        let w = weyl_symbol(h, &propagator_power(&u, l))?;
        let wr = weyl_symbol(h, &propagator_power(&u, -l))?;
        let neg = |i: usize| (h.n - i) % h.n;
        for ((a, b), z) in w.indexed_iter() {
            qsym = qsym
                .max((z - wr[[neg(a), b]].conj()).norm())
                .max((z - wr[[a, neg(b)]].conj()).norm());
        }
    }
    Ok(vec![
        CheckResult::new(s, "rt-composition", rt, 1e-12),
        CheckResult::new(s, "tr-composition", tr, 1e-12),
        CheckResult::new(s, "rr-composition", rr, 1e-12),
        CheckResult::new(s, "triple-reflection", triple, 1e-12),
        CheckResult::new(s, "reflection-completeness", complete, 1e-12),
        CheckResult::new(s, "reflection-trace-orthogonality", orth, 1e-12),
        CheckResult::new(s, "weyl-reconstruction", rep, 1e-12),
        CheckResult::new(s, "cat-symbol-formula", ugxp, 1e-9),
        CheckResult::new(s, "cat-symbol-symmetry", qsym, 1e-12),
    ])
}

/// `max_N |U†U - 1|` over the given dimensions.
pub fn unitarity_over(dims: &[usize]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &n in dims {
        worst = worst.max(unitarity_residual(&cat_propagator(&TorusHilbert::new(n)?)));
    }
    Ok(worst)
}

/// Nilpotency scan: the largest `k(N)/N` found over `dims` (`INFINITY` if some
/// `N` has no scalar power up to `3N`).
pub fn nilpotency_over(dims: std::ops::RangeInclusive<usize>) -> Vec<(usize, Option<(usize, f64)>)> {
    dims.map(|n| {
        let u = cat_propagator(&TorusHilbert::new(n).expect("small dimension"));
        (n, nilpotent_order(&u, 3 * n).ok())
    })
    .collect()
}

fn torus_checks(h: &TorusHilbert) -> Vec<CheckResult> {
    let s = Suite::Torus;
    let u = cat_propagator(h);
    let unit = unitarity_residual(&u);
    let mut commute = 0.0f64;
    for l in 2..=4 {
        let p = propagator_power(&u, l);
        commute = commute.max(max_abs_diff(&u.dot(&p), &p.dot(&u)));
    }
    let mut jmax = 0.0f64;
    for n in [50, 64, 101] {
        let hh = TorusHilbert::new(n).expect("dimension in range");
        let x = PhasePoint::new(0.3, 0.7);
        jmax = jmax.max((norm(&coherent_state(&hh, x, 3)) - norm(&coherent_state(&hh, x, 4))).abs());
    }
    let scan = nilpotency_over(2..=12);
    let nil = if scan.iter().all(|(n, r)| matches!(r, Some((k, _)) if *k <= 3 * n)) {
        0.0
    } else {
        f64::INFINITY
    };
    let mut double = 0.0f64;
    for (n, r) in &scan {
        if let Some((k, phase)) = r {
            let uu = cat_propagator(&TorusHilbert::new(*n).expect("small dimension"));
            let p = propagator_power(&uu, 2 * *k as i64);
            let z = Complex64::from_polar(1.0, 2.0 * phase);
            double = double.max(max_abs_diff(
                &p,
                &(TorusHilbert::new(*n).expect("small").identity() * z),
            ));
        }
    }
    vec![
        CheckResult::new(s, format!("unitarity (N={})", h.n), unit, 1e-12),
        CheckResult::new(s, "commutes-with-powers", commute, 1e-12),
        CheckResult::new(s, "coherent-norm-jmax", jmax, 1e-12),
        CheckResult::new(s, "nilpotency-found (N=2..12)", nil, 0.0),
        CheckResult::new(s, "nilpotency-double-power", double, 1e-10),
    ]
}

/// Largest chain deviation between the closed form and the generic route over
/// `t ∈ {-5..5}` and `random` real `t ∈ [-6, 6]`.
pub fn chain_equivalence(random: usize, rng: &mut impl Rng) -> f64 {
    let f = default_cat().frame;
    let mut ts: Vec<f64> = (-5..=5).map(f64::from).collect();
    ts.extend((0..random).map(|_| rng.random_range(-6.0..6.0)));
    let mut worst = 0.0f64;
    for t in ts {
        let dev = match chain_generic(&f, &monodromy(&f, t), t) {
            Ok(g) => chain_deviation(&chain_at(&f, t), &g),
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(dev);
    }
    worst
}

fn sc_checks(rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let s = Suite::Sc;
    let f = default_cat().frame;
    let chain = chain_equivalence(50, rng);
    let mut vcb = 0.0f64;
    for _ in 0..50 {
        let c = chain_at(&f, rng.random_range(-6.0..6.0));
        let det_v = Complex64::from_polar(c.v_det_mod, c.epsilon);
        let i = Complex64::i();
        for (cb, bb, g, b) in [
            (c.cbar.xx, c.bbar.xx, f.gram.xx, c.b_t.xx),
            (c.cbar.xy, c.bbar.xy, f.gram.xy, c.b_t.xy),
            (c.cbar.yy, c.bbar.yy, f.gram.yy, c.b_t.yy),
        ] {
            vcb = vcb.max(((cb - i * bb) - (g - i * b) / det_v).norm());
        }
    }
    let hbar = 1.0 / (2.0 * PI * 100.0);
    let mut t0 = 0.0f64;
    for _ in 0..20 {
        let x1 = PhasePoint::new(rng.random_range(0.0..0.2), rng.random_range(0.0..0.2));
        let y = PhasePoint::new(rng.random_range(0.0..0.2), rng.random_range(0.0..0.2));
        let a = coherent_sc_element_plane(&f, 0.0, x1, y, 0.75, 1, hbar).value;
        let b = plane_overlap(x1, y, hbar);
        t0 = t0.max((a - b).norm() / b.norm());
    }
    vec![
        CheckResult::new(s, "chain-closed-vs-generic", chain, 1e-10),
        CheckResult::new(s, "chain-cbar-bbar-relation", vcb, 1e-12),
        CheckResult::new(s, "plane-element-t0-overlap", t0, 1e-12),
    ]
}

fn scar_checks() -> Result<Vec<CheckResult>> {
    let s = Suite::Scar;
    let spec = default_cat();
    let x1 = PhasePoint::ORIGIN;
    let x2 = PhasePoint::new(0.5, 0.5);
    let h = TorusHilbert::new(100)?;
    let u = cat_propagator(&h);
    let big_t = ehrenfest_time(h.n, spec.frame.lambda, EhrenfestConvention::default())?;
    let p1 = ScarParams::new(x1, big_t)?.with_phi(0.3);
    let p2 = ScarParams::new(x2, big_t)?.with_phi(-0.8);
    let a = scar_state(&h, &u, &p1);
    let b = scar_state(&h, &u, &p2);
    let herm = (inner(&a, &b) - inner(&b, &a).conj()).norm();
    let mut pair = 0.0f64;
    for t in -2..=2 {
        let g = scar_element_exact(&h, &u, &p1, &p2, t);
        let g_rev = scar_element_exact(&h, &u, &p2, &p1, -t);
        pair = pair.max((g - g_rev.conj()).norm());
    }
    let mut real = 0.0f64;
    for n in [100, 104] {
        let h = TorusHilbert::new(n)?;
        let u = cat_propagator(&h);
        let t = ehrenfest_time(n, spec.frame.lambda, EhrenfestConvention::default())?;
        let z = inner(
            &scar_state(&h, &u, &ScarParams::new(x1, t)?),
            &scar_state(&h, &u, &ScarParams::new(x2, t)?),
        );
        real = real.max(z.im.abs() / z.re.abs());
    }
    // window at 2T from the centre is e^{-64}
    let wide = ScarParams::new(x1, big_t)?.with_cutoff((2.0 * big_t).ceil() as usize);
    let wider = wide.with_cutoff(2 * wide.cutoff);
    let cut = norm(&(scar_state(&h, &u, &wide) - scar_state(&h, &u, &wider)));
    Ok(vec![
        CheckResult::new(s, "hermitian-pairing", herm, 1e-13),
        CheckResult::new(s, "exact-element-conjugate-symmetry", pair, 1e-12),
        CheckResult::new(s, "multiple-of-4-real", real, 1e-9),
        CheckResult::new(s, "cutoff-doubling", cut, 1e-10),
    ])
}
