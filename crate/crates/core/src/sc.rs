//! Semiclassical propagator elements for hyperbolic linear maps.
//!
//! Every quantity is evaluated in the frame `(ζu, ζs)` of the map, where the
//! monodromy is `diag(e^{λt}, e^{-λt})` and the Cayley matrix is off-diagonal.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cat::{ActionPhase, CatMapSpec, ExactFixedPoint};
use crate::error::{Error, Result};
use crate::scar::ScarParams;
use crate::symplectic::{cayley_of, HyperbolicFrame, Mat2, PhasePoint, SymMat2};
use crate::torus::{cis_turns, TorusHilbert};

/// Images whose Gaussian exponent exceeds this are dropped (`e^{-50} ≈ 2e-22`).
pub const GAUSS_CUTOFF: f64 = 50.0;

/// Refuse periodizations that would visit more images than this.
pub const MAX_IMAGES: f64 = 6e7;

/// Linearized dynamics at time `t` in frame coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedChain {
    pub t: f64,
    /// `tanh(tλ/2)`
    pub tau: f64,
    pub b_t: SymMat2,
    pub v_det_mod: f64,
    /// Argument of `det V_t`.
    pub epsilon: f64,
    pub cbar: SymMat2,
    pub bbar: SymMat2,
    pub d: SymMat2,
    pub e: SymMat2,
    /// `|det(Mᵗ + 1)| = 4cosh²(tλ/2)`
    pub det_m1: f64,
    /// Exact `det E`, free of the cancellation in its entries.
    pub det_e: f64,
}

/// Closed-form chain for a map with positive eigenvalues.
pub fn chain_at(f: &HyperbolicFrame, t: f64) -> LinearizedChain {
    let lt = f.lambda * t;
    let tau = (0.5 * lt).tanh();
    let d = f.overlap();
    let (zu2, zs2) = (f.gram.xx, f.gram.yy);
    let one_tau = 1.0 + tau * tau;
    let b_t = SymMat2::new(0.0, tau, 0.0);
    let det_v = Complex64::new(one_tau, 2.0 * d * tau);
    let mod2 = det_v.norm_sqr();
    let cbar = (f.gram.scale(one_tau) - b_t.scale(2.0 * d * tau)).scale(1.0 / mod2);
    let bbar = (b_t.scale(one_tau) + f.gram.scale(2.0 * d * tau)).scale(1.0 / mod2);
    let det_m1 = 4.0 * (0.5 * lt).cosh().powi(2);
    let det1 = det_m1 * mod2;
    let (em, ep) = ((-lt).exp(), lt.exp());
    let dmat = SymMat2::new(2.0 * zu2 * d * em, one_tau + 2.0 * d * d, 2.0 * zs2 * d * ep).scale(tau / det1);
    let ch = lt.cosh();
    let e = SymMat2::new(zu2 * em, d / ch, zs2 * ep).scale(one_tau / det1);
    let det_e = (one_tau / det1).powi(2) * (zu2 * zs2 - d * d / (ch * ch));
    LinearizedChain {
        t,
        tau,
        b_t,
        v_det_mod: mod2.sqrt(),
        epsilon: det_v.arg(),
        cbar,
        bbar,
        d: dmat,
        e,
        det_m1,
        det_e,
    }
}

/// Real-time monodromy `Mᵗ = P diag(e^{λt}, e^{-λt}) P⁻¹` in Cartesian coordinates.
pub fn monodromy(f: &HyperbolicFrame, t: f64) -> Mat2 {
    let p = f.basis();
    let pinv = p.inverse().expect("frame basis has unit determinant");
    p * Mat2::diag((f.lambda * t).exp(), (-f.lambda * t).exp()) * pinv
}

fn cinv(m: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
}

/// The chain obtained the long way: Cartesian monodromy, its Cayley matrix,
/// direct complex inversion of `C - iB_t` and explicit `(Mᵗ+1)⁻¹` conjugation.
pub fn chain_generic(f: &HyperbolicFrame, mt: &Mat2, t: f64) -> Result<LinearizedChain> {
    let p = f.basis();
    let pinv = p.inverse().expect("frame basis has unit determinant");
    let b_cart = cayley_of(mt)?;
    let b_t = b_cart.congruence(&p);
    let c = f.gram;
    let v = [
        [Complex64::new(c.xx, -b_t.xx), Complex64::new(c.xy, -b_t.xy)],
        [Complex64::new(c.xy, -b_t.xy), Complex64::new(c.yy, -b_t.yy)],
    ];
    let det_v = v[0][0] * v[1][1] - v[0][1] * v[1][0];
    let vi = cinv(v);
    // Jᵀ V⁻¹ J with J = [[0, -1], [1, 0]]
    let vt = [[vi[1][1], -vi[1][0]], [-vi[0][1], vi[0][0]]];
    let cbar = SymMat2::new(vt[0][0].re, 0.5 * (vt[0][1].re + vt[1][0].re), vt[1][1].re);
    let bbar = SymMat2::new(-vt[0][0].im, -0.5 * (vt[0][1].im + vt[1][0].im), -vt[1][1].im);
    let m_frame = pinv * *mt * p;
    let mp1 = Mat2::IDENTITY + m_frame;
    let k = mp1.inverse().ok_or(Error::Caustic {
        det: mp1.det(),
        tol: crate::symplectic::CAUSTIC_TOL,
    })?;
    let e = cbar.congruence(&k);
    let d = bbar.congruence(&k);
    Ok(LinearizedChain {
        t,
        tau: b_t.xy,
        b_t,
        v_det_mod: det_v.norm(),
        epsilon: det_v.arg(),
        cbar,
        bbar,
        d,
        e,
        // det(1 + M) = 2 + tr M for symplectic M, without the cancellation in the entries
        det_m1: (2.0 + mt.trace()).abs(),
        det_e: e.det(),
    })
}

/// Largest entry deviation between two chains.
pub fn chain_deviation(a: &LinearizedChain, b: &LinearizedChain) -> f64 {
    [
        a.b_t.max_abs_diff(&b.b_t),
        a.cbar.max_abs_diff(&b.cbar),
        a.bbar.max_abs_diff(&b.bbar),
        a.d.max_abs_diff(&b.d),
        a.e.max_abs_diff(&b.e),
        (a.v_det_mod - b.v_det_mod).abs(),
        (a.epsilon - b.epsilon).abs(),
        (a.det_m1 - b.det_m1).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// `δ = -(Mᵗ + 1)⁻¹ ξ₀`, both in frame coordinates.
pub fn point_shift(f: &HyperbolicFrame, t: f64, xi0: PhasePoint) -> PhasePoint {
    let h = 0.5 * f.lambda * t;
    let den = 2.0 * h.cosh();
    PhasePoint::new(-(-h).exp() * xi0.p / den, -h.exp() * xi0.q / den)
}

/// `S̃ = t(S_fp + ħπα/2) + ¼ ξ₀† B_t ξ₀`.
pub fn action_mid(s_fp: f64, chain: &LinearizedChain, xi0: PhasePoint, t: f64, alpha: i32, hbar: f64) -> f64 {
    t * (s_fp + hbar * 0.5 * PI * alpha as f64) + 0.25 * chain.b_t.quad(xi0)
}

/// Per-image ingredients of the plane element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneTerm {
    /// `ξ₀ = X₁ - Y` in frame coordinates.
    pub xi0: PhasePoint,
    /// Point shift in frame coordinates.
    pub delta: PhasePoint,
    pub action_mid: f64,
    /// `exp(-ξ₀†Eξ₀/ħ)`
    pub gauss_damp: f64,
    /// Total phase in radians, unreduced.
    pub phase: f64,
    pub value: Complex64,
}

/// Plane coherent-state element `⟨X₁|Uᵗ|Y⟩` linearized about the fixed point `Y`:
///
/// `2 e^{-ξ₀†Eξ₀/ħ} exp{(i/ħ)[S̃ - ½X₁∧Y + ξ₀†Dξ₀] - iε/2} / (|det V| det(Mᵗ+1))^{1/2}`.
pub fn coherent_sc_element_plane(
    f: &HyperbolicFrame,
    t: f64,
    x1: PhasePoint,
    y: PhasePoint,
    s_fp: f64,
    alpha: i32,
    hbar: f64,
) -> PlaneTerm {
    let chain = chain_at(f, t);
    let (u, s) = f.to_frame(x1 - y);
    let xi0 = PhasePoint::new(u, s);
    let s_mid = action_mid(s_fp, &chain, xi0, t, alpha, hbar);
    let gauss_damp = (-chain.e.quad(xi0) / hbar).exp();
    let phase = (s_mid - 0.5 * x1.wedge(y) + chain.d.quad(xi0)) / hbar - 0.5 * chain.epsilon;
    let amp = 2.0 * gauss_damp / (chain.v_det_mod * chain.det_m1).sqrt();
    PlaneTerm {
        xi0,
        delta: point_shift(f, t, xi0),
        action_mid: s_mid,
        gauss_damp,
        phase,
        value: Complex64::from_polar(amp, phase),
    }
}

/// Torus element from a plane element by summing over translates `Y = X₂ + k`,
/// `|k_i| ≤ kmax`, each weighted by `e^{iπN k_p k_q} e^{-iπN X₂∧k}`, times `(N/2)^{1/2}`.
///
/// The result pairs with unnormalized torus coherent states.
pub fn torus_periodize<F>(
    element: F,
    x1: PhasePoint,
    x2: PhasePoint,
    kmax: i64,
    h: &TorusHilbert,
) -> Complex64
where
    F: Fn(PhasePoint, PhasePoint) -> Complex64,
{
    let n = h.n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for kp in -kmax..=kmax {
        for kq in -kmax..=kmax {
            let k = PhasePoint::new(kp as f64, kq as f64);
            let turns = 0.5 * ((h.n as i64 * kp * kq).rem_euclid(2)) as f64 - 0.5 * n * x2.wedge(k);
            acc += cis_turns(turns) * element(x1, x2 + k);
        }
    }
    acc * (0.5 * n).sqrt()
}

/// Plane coherent-state overlap `exp[-|X₁ - X₂|²/4ħ - (i/2ħ) X₁∧X₂]`.
pub fn plane_overlap(x1: PhasePoint, x2: PhasePoint, hbar: f64) -> Complex64 {
    let d = x1 - x2;
    Complex64::from_polar((-d.norm_sqr() / (4.0 * hbar)).exp(), -0.5 * x1.wedge(x2) / hbar)
}

/// Integer points `k` with `(c₀ - k)ᵀ Q (c₀ - k) ≤ r`, for a positive form `Q`
/// with determinant `det`, in row order. Reference for the inlined scan in
/// [`ScEngine`].
#[cfg(test)]
fn ellipse_points(q: &SymMat2, det: f64, c0: PhasePoint, r: f64) -> Vec<(i64, i64)> {
    let a = q.xx;
    let vq_max = (r * a / det).sqrt();
    let mut out = Vec::new();
    let kq_lo = (c0.q - vq_max).ceil() as i64;
    let kq_hi = (c0.q + vq_max).floor() as i64;
    for kq in kq_lo..=kq_hi {
        let vq = c0.q - kq as f64;
        let rem = r - det / a * vq * vq;
        if rem < 0.0 {
            continue;
        }
        let centre = -q.xy * vq / a;
        let w = (rem / a).sqrt();
        let lo = (c0.p - centre - w).ceil() as i64;
        let hi = (c0.p - centre + w).floor() as i64;
        out.extend((lo..=hi).map(|kp| (kp, kq)));
    }
    out
}

/// Periodized SC element for one time step, with the image count and the
/// dominant image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodizedElement {
    pub value: Complex64,
    pub images: usize,
    pub principal_k: (i64, i64),
    pub principal: PlaneTerm,
}

/// Semiclassical engine for one map and one Hilbert space; caches periodized
/// coherent elements, which are reused across scar sums.
#[derive(Debug)]
pub struct ScEngine {
    pub spec: CatMapSpec,
    pub h: TorusHilbert,
    cache: RwLock<HashMap<(i64, [u64; 4]), PeriodizedElement>>,
}

fn key(t: i64, x1: PhasePoint, x2: PhasePoint) -> (i64, [u64; 4]) {
    (
        t,
        [x1.p.to_bits(), x1.q.to_bits(), x2.p.to_bits(), x2.q.to_bits()],
    )
}

impl ScEngine {
    pub fn new(spec: CatMapSpec, h: TorusHilbert) -> Self {
        Self {
            spec,
            h,
            cache: RwLock::new(HashMap::new()),
        }
    }

    /// `⟨X₁|Uᵗ|X₂⟩` for unnormalized torus coherent states, `X₂` a fixed point.
    ///
    /// Sums every translate of `X₂` whose Gaussian weight exceeds `e^{-50}`;
    /// the action phase of each translate is reduced exactly.
    pub fn coherent_element(&self, t: i64, x1: PhasePoint, x2: PhasePoint) -> Result<PeriodizedElement> {
        let k = key(t, x1, x2);
        if let Some(v) = self.cache.read().expect("sc cache poisoned").get(&k) {
            return Ok(*v);
        }
        let v = self.compute_element(t, x1, x2)?;
        self.cache.write().expect("sc cache poisoned").insert(k, v);
        Ok(v)
    }

    fn compute_element(&self, t: i64, x1: PhasePoint, x2: PhasePoint) -> Result<PeriodizedElement> {
        let spec = &self.spec;
        let f = &spec.frame;
        let fixed = spec.exact_fixed_point(x2)?;
        let x2 = fixed.point();
        let n = self.h.n as i64;
        let nf = n as f64;
        let hbar = self.h.hbar;
        let tf = t as f64;
        let chain = chain_at(f, tf);

        let e_cart = f.form_to_cartesian(&chain.e);
        let r = GAUSS_CUTOFF * hbar;
        let c0 = x1 - x2;
        let area = PI * r / chain.det_e.sqrt();
        if area > MAX_IMAGES {
            return Err(Error::InvalidParameter(format!(
                "periodization at t={t} needs ~{area:.3e} images"
            )));
        }

        let action = ActionPhase::new(spec, &fixed, n as i128 * t as i128);
        let amp0 = 2.0 / (chain.v_det_mod * chain.det_m1).sqrt() * (0.5 * nf).sqrt();
        let morse_turns = (t * spec.morse_index as i64).rem_euclid(4) as f64 / 4.0;
        let base_turns = morse_turns - chain.epsilon / (4.0 * PI) - 0.5 * nf * x1.wedge(x2);
        let (x1p, x1q) = (
            (0.5 * nf * x1.p).rem_euclid(1.0),
            (0.5 * nf * x1.q).rem_euclid(1.0),
        );
        let den2 = 2 * fixed.den;
        let gauss = chain.e.scale(1.0 / hbar);
        let quad_phase = (chain.b_t.scale(0.25) + chain.d).scale(nf);

        // exact phases (action and periodization) repeat with period L in k
        let period = action.period();
        let exact_turns = |kp: i64, kq: i64| -> f64 {
            // periodization: e^{iπN kp kq} e^{-iπN X₂∧k}, with X₂∧k = (y_p kq - y_q kp)/den
            let wrap_num = (n * (fixed.num[0] * kq - fixed.num[1] * kp)).rem_euclid(den2);
            let wrap = 0.5 * (n * kp * kq).rem_euclid(2) as f64 - wrap_num as f64 / den2 as f64;
            action.turns(kp, kq) + wrap
        };
        let table: Vec<f64> = (0..period * period)
            .map(|i| exact_turns(i / period, i % period))
            .collect();

        let image = |kp: i64, kq: i64| -> (Complex64, f64) {
            let v = c0 - PhasePoint::new(kp as f64, kq as f64);
            let (u, s) = f.to_frame(v);
            let xi0 = PhasePoint::new(u, s);
            let expo = gauss.quad(xi0);
            let exact = table[(kp.rem_euclid(period) * period + kq.rem_euclid(period)) as usize];
            // -½X₁∧Y/ħ with Y = X₂ + k
            let cross_turns = -(x1p * kq as f64 - x1q * kp as f64);
            let turns = exact + base_turns + cross_turns + quad_phase.quad(xi0);
            (cis_turns(turns) * (amp0 * (-expo).exp()), expo)
        };

        // rows of the ellipse (c₀ - k)ᵀ E (c₀ - k) ≤ r, in blocks for the thread pool
        let a = e_cart.xx;
        let vq_max = (r * a / chain.det_e).sqrt();
        let kq_lo = (c0.q - vq_max).ceil() as i64;
        let kq_hi = (c0.q + vq_max).floor() as i64;
        let row = |kq: i64| -> (i64, i64) {
            let vq = c0.q - kq as f64;
            let rem = r - chain.det_e / a * vq * vq;
            if rem < 0.0 {
                return (1, 0);
            }
            let centre = -e_cart.xy * vq / a;
            let w = (rem / a).sqrt();
            (
                (c0.p - centre - w).ceil() as i64,
                (c0.p - centre + w).floor() as i64,
            )
        };
        const BLOCK: i64 = 4096;
        let blocks: Vec<i64> = (kq_lo..=kq_hi).step_by(BLOCK as usize).collect();
        let partial: Vec<(Complex64, usize, f64, (i64, i64))> = blocks
            .par_iter()
            .map(|&b0| {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut count = 0usize;
                let mut best = (f64::INFINITY, (0, 0));
                for kq in b0..(b0 + BLOCK).min(kq_hi + 1) {
                    let (lo, hi) = row(kq);
                    for kp in lo..=hi {
                        let (val, expo) = image(kp, kq);
                        acc += val;
                        count += 1;
                        if expo < best.0 {
                            best = (expo, (kp, kq));
                        }
                    }
                }
                (acc, count, best.0, best.1)
            })
            .collect();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut images = 0;
        let mut best = (f64::INFINITY, (0, 0));
        for (acc, count, e, k) in partial {
            sum += acc;
            images += count;
            if e < best.0 {
                best = (e, k);
            }
        }
        let principal_k = best.1;
        let y = fixed.shifted(principal_k.0, principal_k.1, spec);
        let mut principal = coherent_sc_element_plane(
            f,
            tf,
            x1,
            y.point(),
            spec.generating_action(y.point(), y.winding),
            spec.morse_index,
            hbar,
        );
        principal.value = image(principal_k.0, principal_k.1).0;
        Ok(PeriodizedElement {
            value: sum,
            images,
            principal_k,
            principal,
        })
    }

    /// Semiclassical scar element `⟨φ₁|Uᵗ|φ₂⟩`.
    pub fn scar_element(
        &self,
        p1: &ScarParams,
        p2: &ScarParams,
        t: i64,
        mode: ScarScMode,
    ) -> Result<ScElementBreakdown> {
        for p in [p1, p2] {
            if self.spec.fixed_point_winding(p.center).is_err() {
                return Err(Error::NotFixedPoint { point: p.center });
            }
        }
        let (raw, terms) = self.raw_scar_sum(p1, p2, t, mode)?;
        let (n1, n2) = if p1.normalize || p2.normalize {
            let a = self.raw_scar_sum(p1, p1, 0, mode)?.0;
            let b = self.raw_scar_sum(p2, p2, 0, mode)?.0;
            (
                if p1.normalize { a.re } else { 1.0 },
                if p2.normalize { b.re } else { 1.0 },
            )
        } else {
            (1.0, 1.0)
        };
        let scale = 1.0 / (n1 * n2).sqrt();
        let total_abs: f64 = terms.iter().map(|x| x.contribution.norm()).sum();
        let window = p1.big_t.max(p2.big_t);
        let tail_abs: f64 = terms
            .iter()
            .filter(|x| ((x.t_prime - t) as f64).abs() > window)
            .map(|x| x.contribution.norm())
            .sum();
        Ok(ScElementBreakdown {
            mode,
            t,
            raw,
            norm1: n1,
            norm2: n2,
            value: raw * scale,
            tail_fraction: if total_abs > 0.0 {
                tail_abs / total_abs
            } else {
                0.0
            },
            terms,
        })
    }

    fn raw_scar_sum(
        &self,
        p1: &ScarParams,
        p2: &ScarParams,
        t: i64,
        mode: ScarScMode,
    ) -> Result<(Complex64, Vec<ScTerm>)> {
        let t_primes: Vec<(i64, Complex64)> = match mode {
            ScarScMode::ExactW => {
                let reach = (p1.cutoff + p2.cutoff) as i64;
                (t - reach..=t + reach)
                    .map(|tr| (tr, window_weight(p1, p2, t, tr)))
                    .filter(|(_, w)| w.norm() > 0.0)
                    .collect()
            }
            ScarScMode::PaperA => {
                let big_t = 0.5 * (p1.big_t + p2.big_t);
                let reach = big_t.floor() as i64;
                (t - reach..=t + reach)
                    .map(|tp| (tp, paper_a_weight(big_t, p1.phi, p2.phi, (tp - t) as f64)))
                    .collect()
            }
        };
        let terms: Vec<ScTerm> = t_primes
            .par_iter()
            .map(|&(tp, w)| -> Result<ScTerm> {
                let g = self.coherent_element(tp, p1.center, p2.center)?;
                Ok(ScTerm {
                    t_prime: tp,
                    chain: chain_at(&self.spec.frame, tp as f64),
                    weight: w,
                    kernel: g.value,
                    contribution: w * g.value,
                    images: g.images,
                    principal_k: g.principal_k,
                    principal: g.principal,
                })
            })
            .collect::<Result<_>>()?;
        let raw = terms.iter().map(|x| x.contribution).sum();
        Ok((raw, terms))
    }
}

/// Weight of `⟨X₁|U^{tR}|X₂⟩` in `⟨φ₁|Uᵗ|φ₂⟩`:
/// `Σ_{t₁} e^{i(φ₂t₂ - φ₁t₁)} f(t₁) f(t₂)` with `t₂ = tR - t + t₁`, both within their cutoffs.
pub fn window_weight(p1: &ScarParams, p2: &ScarParams, t: i64, t_r: i64) -> Complex64 {
    let c1 = p1.cutoff as i64;
    (-c1..=c1)
        .map(|t1| p1.weight(t1).conj() * p2.weight(t_r - t + t1))
        .sum()
}

/// [`window_weight`] for two scars sharing `T` and the cutoff.
pub fn discrete_window_weight(
    t: i64,
    t_r: i64,
    phi1: f64,
    phi2: f64,
    big_t: f64,
    cutoff: usize,
) -> Complex64 {
    let p = ScarParams {
        center: PhasePoint::ORIGIN,
        phi: 0.0,
        big_t,
        cutoff,
        normalize: false,
    };
    window_weight(
        &ScarParams { phi: phi1, ..p },
        &ScarParams { phi: phi2, ..p },
        t,
        t_r,
    )
}

/// `A = T (π/2)^{1/2} e^{-T²(φ₂ - φ₁)²/32}`, the time integral of a pair of
/// windows `e^{-(2t/T)²}`.
pub fn amplitude_a(big_t: f64, phi1: f64, phi2: f64) -> f64 {
    big_t * (0.5 * PI).sqrt() * (-(big_t * (phi2 - phi1)).powi(2) / 32.0).exp()
}

/// Continuum weight of `⟨X₁|U^{t+s}|X₂⟩` for windows `e^{-(4t/T)²}`:
/// `(T/4)(π/2)^{1/2} e^{-T²Δφ²/128} e^{-8s²/T²} e^{i(φ₁+φ₂)s/2}`.
pub fn paper_a_weight(big_t: f64, phi1: f64, phi2: f64, s: f64) -> Complex64 {
    let amp = 0.5 * amplitude_a(0.5 * big_t, phi1, phi2) * (-8.0 * s * s / (big_t * big_t)).exp();
    Complex64::from_polar(amp, 0.5 * (phi1 + phi2) * s)
}

/// How the double time sum of a scar element is collapsed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ScarScMode {
    /// Continuum Gaussian weight, `|t - t'| ≤ T`.
    PaperA,
    /// Exact discrete weights over the full support.
    #[default]
    ExactW,
}

impl ScarScMode {
    pub fn name(&self) -> &'static str {
        match self {
            ScarScMode::PaperA => "paperA",
            ScarScMode::ExactW => "exactW",
        }
    }
}

impl fmt::Display for ScarScMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScarScMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "").as_str() {
            "papera" => Ok(ScarScMode::PaperA),
            "exactw" => Ok(ScarScMode::ExactW),
            _ => Err(Error::InvalidParameter(format!("unknown mode `{s}`"))),
        }
    }
}

/// One `t'` term of a scar element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScTerm {
    pub t_prime: i64,
    pub chain: LinearizedChain,
    pub weight: Complex64,
    /// Periodized coherent element at `t'`.
    pub kernel: Complex64,
    pub contribution: Complex64,
    pub images: usize,
    pub principal_k: (i64, i64),
    /// Plane term of the image closest to `X₁`.
    pub principal: PlaneTerm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScElementBreakdown {
    pub mode: ScarScMode,
    pub t: i64,
    pub raw: Complex64,
    pub norm1: f64,
    pub norm2: f64,
    pub value: Complex64,
    /// `Σ|term|` beyond `|t - t'| > T` over `Σ|term|`.
    pub tail_fraction: f64,
    pub terms: Vec<ScTerm>,
}

/// Periodized SC coherent element, normalized by the SC self-overlaps at `t = 0`.
pub fn coherent_sc_element_torus(
    engine: &ScEngine,
    t: i64,
    x1: PhasePoint,
    x2: PhasePoint,
) -> Result<Complex64> {
    let g = engine.coherent_element(t, x1, x2)?.value;
    let n1 = engine.coherent_element(0, x1, x1)?.value.re;
    let n2 = engine.coherent_element(0, x2, x2)?.value.re;
    Ok(g / (n1 * n2).sqrt())
}

/// Convenience wrapper over [`ScEngine::scar_element`].
pub fn scar_sc_element(
    spec: &CatMapSpec,
    h: &TorusHilbert,
    p1: &ScarParams,
    p2: &ScarParams,
    t: i64,
    mode: ScarScMode,
) -> Result<ScElementBreakdown> {
    ScEngine::new(spec.clone(), *h).scar_element(p1, p2, t, mode)
}

/// Fixed point check shared with callers that hold floating coordinates.
pub fn require_fixed(spec: &CatMapSpec, x: PhasePoint) -> Result<ExactFixedPoint> {
    spec.exact_fixed_point(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::default_cat;

    #[test]
    fn chain_at_zero() {
        let f = default_cat().frame;
        let c = chain_at(&f, 0.0);
        assert_eq!(c.b_t, SymMat2::ZERO);
        assert_eq!(c.v_det_mod, 1.0);
        assert_eq!(c.epsilon, 0.0);
        assert_eq!(c.det_m1, 4.0);
        assert!(c.d.max_abs_diff(&SymMat2::ZERO) < 1e-16);
        assert!(c.cbar.max_abs_diff(&f.gram) < 1e-15);
    }

    #[test]
    fn chain_t1_modulus() {
        let f = default_cat().frame;
        let c = chain_at(&f, 1.0);
        let tau = (0.5 * f.lambda).tanh();
        let d = -(3f64.sqrt()) / 3.0;
        let want = ((1.0 + tau * tau).powi(2) + (2.0 * d * tau).powi(2)).sqrt();
        assert!((c.v_det_mod - want).abs() < 1e-14);
        assert!((c.det_m1 - 6.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_generic_route() {
        let spec = default_cat();
        let f = spec.frame;
        for t in -5..=5i64 {
            let a = chain_at(&f, t as f64);
            let b = chain_generic(&f, &spec.m.pow(t), t as f64).unwrap();
            assert!(
                chain_deviation(&a, &b) < 1e-10,
                "t={t}: {}",
                chain_deviation(&a, &b)
            );
        }
        for t in [-5.7, -0.3, 0.45, 2.2, 5.9] {
            let a = chain_at(&f, t);
            let b = chain_generic(&f, &monodromy(&f, t), t).unwrap();
            assert!(chain_deviation(&a, &b) < 1e-10, "t={t}");
        }
    }

    #[test]
    fn point_shift_cartesian_example() {
        let f = default_cat().frame;
        let (u, s) = f.to_frame(PhasePoint::new(-0.5, -0.5));
        let d = point_shift(&f, 1.0, PhasePoint::new(u, s));
        let cart = f.from_frame(d.p, d.q);
        assert!((cart - PhasePoint::new(0.0, 1.0 / 6.0)).norm_sqr().sqrt() < 1e-14);
        assert_eq!(point_shift(&f, 2.0, PhasePoint::ORIGIN), PhasePoint::ORIGIN);
        assert!(point_shift(&f, 40.0, PhasePoint::new(1.0, 1.0)).p.abs() < 1e-20);
    }

    #[test]
    fn action_mid_quadratic_matches_cayley() {
        let spec = default_cat();
        let f = spec.frame;
        let xi = PhasePoint::new(0.3, -0.7);
        for t in [-3i64, 1, 4] {
            let c = chain_at(&f, t as f64);
            let got = action_mid(0.0, &c, xi, t as f64, 0, 1e-3);
            let b = cayley_of(&spec.m.pow(t)).unwrap();
            let want = 0.25 * b.quad(f.from_frame(xi.p, xi.q));
            assert!((got - want).abs() < 1e-11);
        }
        let c = chain_at(&f, 0.0);
        assert_eq!(action_mid(0.75, &c, xi, 0.0, 1, 1e-3), 0.0);
    }

    #[test]
    fn plane_element_reduces_to_overlap_at_t0() {
        let f = default_cat().frame;
        let hbar = 1.0 / (2.0 * PI * 30.0);
        for (x1, y) in [
            (PhasePoint::new(0.1, 0.2), PhasePoint::new(0.15, 0.1)),
            (PhasePoint::new(0.0, 0.0), PhasePoint::new(0.5, 0.5)),
        ] {
            let a = coherent_sc_element_plane(&f, 0.0, x1, y, 0.3, 1, hbar).value;
            let b = plane_overlap(x1, y, hbar) * 2.0 / 4f64.sqrt();
            assert!((a - b).norm() < 1e-12 * b.norm().max(1e-300));
        }
    }

    #[test]
    fn plane_element_on_orbit() {
        let f = default_cat().frame;
        let hbar = 1e-3;
        let x = PhasePoint::new(0.5, 0.5);
        let e = coherent_sc_element_plane(&f, 2.0, x, x, 0.75, 0, hbar);
        let c = chain_at(&f, 2.0);
        assert!((e.value.norm() - 2.0 / (c.v_det_mod * c.det_m1).sqrt()).abs() < 1e-14);
        assert!((e.phase - (2.0 * 0.75 / hbar - 0.5 * c.epsilon)).abs() < 1e-9);
    }

    #[test]
    fn window_weight_trivial() {
        let w = discrete_window_weight(2, 2, 0.0, 0.0, 4.0, 4);
        let want: f64 = (-4..=4).map(|t| crate::scar::window(t as f64, 4.0).powi(2)).sum();
        assert!((w - Complex64::new(want, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn amplitude_examples() {
        let t = 4.0;
        assert!((amplitude_a(t, 0.3, 0.3) - t * (PI / 2.0).sqrt()).abs() < 1e-15);
        let dphi = 32f64.sqrt() / t;
        assert!((amplitude_a(t, 0.0, dphi) - (-1f64).exp() * t * (PI / 2.0).sqrt()).abs() < 1e-14);
        assert_eq!(amplitude_a(t, 0.2, 0.9), amplitude_a(t, 0.9, 0.2));
    }

    #[test]
    fn ellipse_enumeration_matches_box() {
        let q = SymMat2::new(2.0, 0.7, 0.5);
        let c0 = PhasePoint::new(0.3, -0.2);
        let r = 20.0;
        let got = ellipse_points(&q, q.det(), c0, r);
        let mut want = Vec::new();
        for kq in -20..=20 {
            for kp in -20..=20 {
                if q.quad(c0 - PhasePoint::new(kp as f64, kq as f64)) <= r {
                    want.push((kp, kq));
                }
            }
        }
        assert_eq!(got, want);
    }
}
