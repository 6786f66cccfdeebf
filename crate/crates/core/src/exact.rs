//! Brute-force matrix elements by dense linear algebra.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sc::{window_weight, ScarScMode};
use crate::scar::{scar_state, ScarParams};
use crate::symplectic::PhasePoint;
use crate::torus::{apply_power, coherent_state, inner, norm, OperatorMatrix, TorusHilbert, DEFAULT_JMAX};

/// `⟨X₁|Uᵗ|X₂⟩` between normalized torus coherent states.
pub fn coherent_element_exact(
    h: &TorusHilbert,
    u: &OperatorMatrix,
    x1: PhasePoint,
    x2: PhasePoint,
    t: i64,
) -> Complex64 {
    let a = coherent_state(h, x1, DEFAULT_JMAX);
    let b = coherent_state(h, x2, DEFAULT_JMAX);
    inner(&a, &apply_power(u, t, &b)) / (norm(&a) * norm(&b))
}

/// `⟨X₁|Uᵗ|X₂⟩` between unnormalized coherent states, for every `t` in `range`.
pub fn coherent_elements_raw(
    h: &TorusHilbert,
    u: &OperatorMatrix,
    x1: PhasePoint,
    x2: PhasePoint,
    range: std::ops::RangeInclusive<i64>,
) -> Vec<(i64, Complex64)> {
    let a = coherent_state(h, x1, DEFAULT_JMAX);
    let b = coherent_state(h, x2, DEFAULT_JMAX);
    let (lo, hi) = (*range.start(), *range.end());
    let mut out = Vec::new();
    let mut v = apply_power(u, lo, &b);
    for t in lo..=hi {
        if t > lo {
            v = u.dot(&v);
        }
        out.push((t, inner(&a, &v)));
    }
    out
}

/// `⟨φ₁|Uᵗ|φ₂⟩` from explicitly built scar vectors.
pub fn scar_element_exact(
    h: &TorusHilbert,
    u: &OperatorMatrix,
    p1: &ScarParams,
    p2: &ScarParams,
    t: i64,
) -> Complex64 {
    let a = scar_state(h, u, p1);
    let b = scar_state(h, u, p2);
    inner(&a, &apply_power(u, t, &b))
}

/// The same element from the double time sum over coherent elements,
/// `Σ e^{i(φ₂t₂ - φ₁t₁)} f(t₁) f(t₂) ⟨X₁|U^{t+t₂-t₁}|X₂⟩`.
pub fn scar_element_double_sum(
    h: &TorusHilbert,
    u: &OperatorMatrix,
    p1: &ScarParams,
    p2: &ScarParams,
    t: i64,
) -> Complex64 {
    let reach = (p1.cutoff + p2.cutoff) as i64;
    let raw: Complex64 = coherent_elements_raw(h, u, p1.center, p2.center, t - reach..=t + reach)
        .into_iter()
        .map(|(tr, g)| window_weight(p1, p2, t, tr) * g)
        .sum();
    let self_norm = |p: &ScarParams| -> f64 {
        let r = (2 * p.cutoff) as i64;
        coherent_elements_raw(h, u, p.center, p.center, -r..=r)
            .into_iter()
            .map(|(tr, g)| window_weight(p, p, 0, tr) * g)
            .sum::<Complex64>()
            .re
    };
    let n1 = if p1.normalize { self_norm(p1) } else { 1.0 };
    let n2 = if p2.normalize { self_norm(p2) } else { 1.0 };
    raw / (n1 * n2).sqrt()
}

/// Smallest `k ≤ kmax` with `Uᵏ = e^{iφ}·1` within `1e-10`, and `φ`.
pub fn nilpotent_order(u: &OperatorMatrix, kmax: usize) -> Result<(usize, f64)> {
    let mut p = u.clone();
    for k in 1..=kmax {
        if k > 1 {
            p = u.dot(&p);
        }
        let phase = p[[0, 0]];
        if (phase.norm() - 1.0).abs() <= 1e-10 {
            let residual = p
                .indexed_iter()
                .map(|((i, j), z)| if i == j { (z - phase).norm() } else { z.norm() })
                .fold(0.0, f64::max);
            if residual <= 1e-10 {
                return Ok((k, phase.arg()));
            }
        }
    }
    Err(Error::NotFound { kmax })
}

/// One exact-versus-semiclassical comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRecord {
    pub n: usize,
    pub t: i64,
    pub x1: PhasePoint,
    pub x2: PhasePoint,
    pub phi1: f64,
    pub phi2: f64,
    pub big_t: f64,
    pub exact: Complex64,
    pub sc: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub mode: ScarScMode,
}

impl ComparisonRecord {
    pub fn new(
        p1: &ScarParams,
        p2: &ScarParams,
        n: usize,
        t: i64,
        exact: Complex64,
        sc: Complex64,
        mode: ScarScMode,
    ) -> Self {
        let abs_err = (exact - sc).norm();
        Self {
            n,
            t,
            x1: p1.center,
            x2: p2.center,
            phi1: p1.phi,
            phi2: p2.phi,
            big_t: p1.big_t,
            exact,
            sc,
            abs_err,
            rel_err: abs_err / exact.norm().max(1e-300),
            mode,
        }
    }
}

/// Extended-precision evaluation of `⟨X₁|Uᵗ|X₂⟩` for the cat propagator, for
/// elements too small to resolve in `f64` (where dense products carry an
/// absolute error near `1e-16`).
pub fn coherent_element_exact_hp(
    h: &TorusHilbert,
    x1: PhasePoint,
    x2: PhasePoint,
    t: i64,
    bits: usize,
) -> Complex64 {
    hp::coherent_element(h.n, x1, x2, t, bits)
}

mod hp {
    use astro_float::{BigFloat, Consts, RoundingMode};
    use num_complex::Complex64;

    use crate::symplectic::PhasePoint;
    use crate::torus::DEFAULT_JMAX;

    const RM: RoundingMode = RoundingMode::ToEven;

    #[derive(Clone)]
    struct C {
        re: BigFloat,
        im: BigFloat,
    }

    struct Ctx {
        p: usize,
        cc: Consts,
        pi: BigFloat,
    }

    impl Ctx {
        fn num(&self, x: i64) -> BigFloat {
            BigFloat::from_i64(x, self.p)
        }

        fn zero(&self) -> C {
            C {
                re: self.num(0),
                im: self.num(0),
            }
        }

        fn add(&self, a: &C, b: &C) -> C {
            C {
                re: a.re.add(&b.re, self.p, RM),
                im: a.im.add(&b.im, self.p, RM),
            }
        }

        fn mul(&self, a: &C, b: &C) -> C {
            let p = self.p;
            C {
                re: a.re.mul(&b.re, p, RM).sub(&a.im.mul(&b.im, p, RM), p, RM),
                im: a.re.mul(&b.im, p, RM).add(&a.im.mul(&b.re, p, RM), p, RM),
            }
        }

        fn conj_mul(&self, a: &C, b: &C) -> C {
            let ac = C {
                re: a.re.clone(),
                im: a.im.neg(),
            };
            self.mul(&ac, b)
        }

        fn scale(&self, a: &C, s: &BigFloat) -> C {
            C {
                re: a.re.mul(s, self.p, RM),
                im: a.im.mul(s, self.p, RM),
            }
        }

        /// `r e^{iθ}`
        fn polar(&mut self, r: &BigFloat, theta: &BigFloat) -> C {
            let (p, cc) = (self.p, &mut self.cc);
            C {
                re: r.mul(&theta.cos(p, RM, cc), p, RM),
                im: r.mul(&theta.sin(p, RM, cc), p, RM),
            }
        }

        fn to_f64(x: &BigFloat) -> f64 {
            if x.is_zero() {
                return 0.0;
            }
            format!("{x}").parse().unwrap_or(f64::NAN)
        }
    }

    fn coherent(ctx: &mut Ctx, n: usize, x: PhasePoint) -> Vec<C> {
        let p = ctx.p;
        let nn = ctx.num(n as i64);
        let big_p = BigFloat::from_f64(x.p, p);
        let big_q = BigFloat::from_f64(x.q, p);
        let half_q = big_q.div(&ctx.num(2), p, RM);
        let pi_n = ctx.pi.mul(&nn, p, RM);
        let two_pi_n = pi_n.mul(&ctx.num(2), p, RM);
        let jm = DEFAULT_JMAX as i64;
        (0..n as i64)
            .map(|k| {
                let mut acc = ctx.zero();
                for j in -jm..=jm {
                    // q = k/N - j
                    let q = ctx.num(k - j * n as i64).div(&nn, p, RM);
                    let dq = q.sub(&big_q, p, RM);
                    // exp[-πN (q - Q)²]
                    let expo = pi_n.mul(&dq.mul(&dq, p, RM), p, RM).neg();
                    let r = expo.exp(p, RM, &mut ctx.cc);
                    let theta = two_pi_n.mul(&big_p, p, RM).mul(&q.sub(&half_q, p, RM), p, RM);
                    let term = ctx.polar(&r, &theta);
                    acc = ctx.add(&acc, &term);
                }
                acc
            })
            .collect()
    }

    pub fn coherent_element(n: usize, x1: PhasePoint, x2: PhasePoint, t: i64, bits: usize) -> Complex64 {
        let mut ctx = Ctx {
            p: bits,
            cc: Consts::new().expect("constant cache"),
            pi: BigFloat::new(bits),
        };
        ctx.pi = ctx.cc.pi(bits, RM);
        let p = bits;
        let nn = ctx.num(n as i64);
        let one = ctx.num(1);
        // (i/N)^{1/2} = (1 + i)/(2N)^{1/2}; U† uses the conjugates
        let inv_sqrt = one.div(&ctx.num(2 * n as i64).sqrt(p, RM), p, RM);
        let sign = if t >= 0 { 1 } else { -1 };
        let pref = C {
            re: inv_sqrt.clone(),
            im: inv_sqrt.mul(&ctx.num(sign), p, RM),
        };
        let two_pi = ctx.pi.mul(&ctx.num(2), p, RM);
        let roots: Vec<C> = (0..n as i64)
            .map(|e| {
                let theta = two_pi.mul(&ctx.num(sign * e), p, RM).div(&nn, p, RM);
                ctx.polar(&one, &theta)
            })
            .collect();
        let a = coherent(&mut ctx, n, x1);
        let mut v = coherent(&mut ctx, n, x2);
        let ni = n as i64;
        for _ in 0..t.unsigned_abs() {
            // forward: U[k, j] ∝ ω^{k² - jk + j²}; backward: U†[k, j] = conj U[j, k], same exponent
            v = (0..ni)
                .map(|k| {
                    let mut acc = ctx.zero();
                    for j in 0..ni {
                        let e = (k * k - j * k + j * j).rem_euclid(ni) as usize;
                        acc = ctx.add(&acc, &ctx.mul(&roots[e], &v[j as usize]));
                    }
                    ctx.mul(&pref, &acc)
                })
                .collect();
        }
        let dot = |ctx: &Ctx, x: &[C], y: &[C]| -> C {
            x.iter()
                .zip(y)
                .fold(ctx.zero(), |acc, (a, b)| ctx.add(&acc, &ctx.conj_mul(a, b)))
        };
        let num = dot(&ctx, &a, &v);
        let na = dot(&ctx, &a, &a).re;
        let nb = {
            let b = coherent(&mut ctx, n, x2);
            dot(&ctx, &b, &b).re
        };
        let den = na.mul(&nb, p, RM).sqrt(p, RM);
        let z = ctx.scale(&num, &one.div(&den, p, RM));
        Complex64::new(Ctx::to_f64(&z.re), Ctx::to_f64(&z.im))
    }
}
