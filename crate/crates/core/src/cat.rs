//! Classical cat-map dynamics on the unit torus.

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::symplectic::{cayley_of, frame_from_map, HyperbolicFrame, Mat2, PhasePoint, SymMat2};

/// Integer winding vector `m` in `x₊ = M x₋ - m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Winding {
    pub mp: i64,
    pub mq: i64,
}

impl Winding {
    pub const ZERO: Winding = Winding { mp: 0, mq: 0 };

    pub const fn new(mp: i64, mq: i64) -> Self {
        Self { mp, mq }
    }

    pub fn as_point(&self) -> PhasePoint {
        PhasePoint::new(self.mp as f64, self.mq as f64)
    }
}

type IMat = [[i64; 2]; 2];

fn imul(x: &IMat, y: &IMat) -> IMat {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

fn idet(x: &IMat) -> i64 {
    x[0][0] * x[1][1] - x[0][1] * x[1][0]
}

/// A linear automorphism of the torus together with its classical invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct CatMapSpec {
    entries: IMat,
    pub m: Mat2,
    /// Cayley representation of `m`.
    pub b: SymMat2,
    pub frame: HyperbolicFrame,
    /// Morse index per application of the map. The quantum propagator built
    /// with the principal `(i/N)^{1/2}` prefactor carries a phase `e^{iπ/2}` per
    /// step relative to the Weyl-symbol normalization `2 / |det(M+1)|^{1/2}`,
    /// which is exactly index 1.
    pub morse_index: i32,
}

/// Exact rational coordinates of a periodic point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    pub p: Ratio<i64>,
    pub q: Ratio<i64>,
}

impl RationalPoint {
    pub fn to_point(&self) -> PhasePoint {
        PhasePoint::new(
            *self.p.numer() as f64 / *self.p.denom() as f64,
            *self.q.numer() as f64 / *self.q.denom() as f64,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicPoint {
    pub winding: Winding,
    pub exact: RationalPoint,
    pub point: PhasePoint,
}

fn frac_ratio(r: Ratio<i64>) -> Ratio<i64> {
    r - r.floor()
}

impl CatMapSpec {
    /// Builds the spec for an integer matrix `[[a, b], [c, d]]` with unit determinant.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let entries = [[a, b], [c, d]];
        if idet(&entries) != 1 {
            return Err(Error::InvalidParameter(format!(
                "cat matrix must have determinant 1, got {}",
                idet(&entries)
            )));
        }
        let m = Mat2::new(a as f64, b as f64, c as f64, d as f64);
        let b = cayley_of(&m)?;
        let frame = frame_from_map(&m)?;
        Ok(Self {
            entries,
            m,
            b,
            frame,
            morse_index: 1,
        })
    }

    pub fn with_morse_index(mut self, alpha: i32) -> Self {
        self.morse_index = alpha;
        self
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.entries
    }

    fn int_pow(&self, n: u32) -> IMat {
        let mut acc = [[1, 0], [0, 1]];
        for _ in 0..n {
            acc = imul(&acc, &self.entries);
        }
        acc
    }

    fn step(&self, x: PhasePoint, inverse: bool) -> PhasePoint {
        let [[a, b], [c, d]] = self.entries;
        let (a, b, c, d) = if inverse { (d, -b, -c, a) } else { (a, b, c, d) };
        PhasePoint::new(a as f64 * x.p + b as f64 * x.q, c as f64 * x.p + d as f64 * x.q).mod1()
    }

    /// `n` applications of the map (inverse map for negative `n`), reduced mod 1.
    pub fn iterate(&self, x: PhasePoint, n: i64) -> PhasePoint {
        let mut y = x.mod1();
        for _ in 0..n.unsigned_abs() {
            y = self.step(y, n < 0);
        }
        y
    }

    /// `(Mˡ - 1)⁻¹ m` reduced into `[0, 1)²`, exactly.
    pub fn periodic_point_exact(&self, l: u32, m: Winding) -> Result<RationalPoint> {
        let mut a = self.int_pow(l);
        a[0][0] -= 1;
        a[1][1] -= 1;
        let det = idet(&a);
        if det == 0 {
            return Err(Error::DegenerateMap { period: l });
        }
        let p = Ratio::new(a[1][1] * m.mp - a[0][1] * m.mq, det);
        let q = Ratio::new(-a[1][0] * m.mp + a[0][0] * m.mq, det);
        Ok(RationalPoint {
            p: frac_ratio(p),
            q: frac_ratio(q),
        })
    }

    pub fn periodic_point(&self, l: u32, m: Winding) -> Result<PhasePoint> {
        Ok(self.periodic_point_exact(l, m)?.to_point())
    }

    /// All points of period dividing `l`, one winding per point, sorted by coordinates.
    ///
    /// Windings are scanned over the integer box covering `(Mˡ - 1)[0, 1)²`.
    pub fn enumerate_periodic_points(&self, l: u32) -> Result<Vec<PeriodicPoint>> {
        let mut a = self.int_pow(l);
        a[0][0] -= 1;
        a[1][1] -= 1;
        if idet(&a) == 0 {
            return Err(Error::DegenerateMap { period: l });
        }
        let corners = [(0, 0), (1, 0), (0, 1), (1, 1)];
        let images: Vec<(i64, i64)> = corners
            .iter()
            .map(|&(p, q)| (a[0][0] * p + a[0][1] * q, a[1][0] * p + a[1][1] * q))
            .collect();
        let (pmin, pmax) = images
            .iter()
            .fold((i64::MAX, i64::MIN), |(lo, hi), &(p, _)| (lo.min(p), hi.max(p)));
        let (qmin, qmax) = images
            .iter()
            .fold((i64::MAX, i64::MIN), |(lo, hi), &(_, q)| (lo.min(q), hi.max(q)));

        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for mp in pmin..=pmax {
            for mq in qmin..=qmax {
                let w = Winding::new(mp, mq);
                let exact = self.periodic_point_exact(l, w)?;
                if seen.insert(exact) {
                    out.push(PeriodicPoint {
                        winding: w,
                        exact,
                        point: exact.to_point(),
                    });
                }
            }
        }
        out.sort_by_key(|x| x.exact);
        Ok(out)
    }

    /// Center generating function `S(x, m) = xBx + x(B - J)m + ¼ m(B + J̃)m`.
    pub fn generating_action(&self, x: PhasePoint, m: Winding) -> f64 {
        let mv = m.as_point();
        let bm = self.b.to_mat2();
        let b_minus_j = bm - Mat2::J;
        let b_plus_jt = bm + Mat2::J_TILDE;
        self.b.quad(x) + x.dot(b_minus_j.apply(mv)) + 0.25 * mv.dot(b_plus_jt.apply(mv))
    }

    /// Chord `ξ = -J ∂S/∂x` from the analytic gradient of the generating function.
    pub fn chord_from_action(&self, x: PhasePoint, m: Winding) -> PhasePoint {
        let bm = self.b.to_mat2();
        let grad = bm.apply(x) * 2.0 + (bm - Mat2::J).apply(m.as_point());
        Mat2::J.scale(-1.0).apply(grad)
    }

    /// Winding of a fixed point `X`, i.e. `(M - 1) X` rounded to integers.
    pub fn fixed_point_winding(&self, x: PhasePoint) -> Result<Winding> {
        let image = self.m.apply(x) - x;
        let w = Winding::new(image.p.round() as i64, image.q.round() as i64);
        if (image - w.as_point()).norm_sqr().sqrt() > 1e-10 {
            return Err(Error::NotPeriodic { point: x, period: 1 });
        }
        Ok(w)
    }

    /// Per-step action `S(X, (M - 1)X)` of the fixed point `X`.
    pub fn fixed_point_action(&self, x: PhasePoint) -> Result<f64> {
        let w = self.fixed_point_winding(x)?;
        Ok(self.generating_action(x, w))
    }

    /// `|det(M + 1)|`.
    pub fn det_m_plus_one(&self) -> f64 {
        (Mat2::IDENTITY + self.m).det().abs()
    }

    /// Representatives of `Z² / (M + 1) Z²`.
    pub fn winding_classes(&self) -> Vec<Winding> {
        let [[a, b], [c, d]] = self.entries;
        let k = [[a + 1, b], [c, d + 1]];
        let det = idet(&k);
        let n = det.abs();
        // reduce m into the half-open parallelogram spanned by the columns of k
        let mut reps = BTreeSet::new();
        for mp in 0..n {
            for mq in 0..n {
                let cp = Ratio::new(k[1][1] * mp - k[0][1] * mq, det);
                let cq = Ratio::new(-k[1][0] * mp + k[0][0] * mq, det);
                reps.insert((frac_ratio(cp), frac_ratio(cq)));
            }
        }
        reps.into_iter()
            .map(|(cp, cq)| {
                let mp = cp * k[0][0] + cq * k[0][1];
                let mq = cp * k[1][0] + cq * k[1][1];
                Winding::new(mp.to_integer(), mq.to_integer())
            })
            .collect()
    }
}

/// A fixed point with exact coordinates `num / den`, `den = |det(M - 1)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactFixedPoint {
    pub num: [i64; 2],
    pub den: i64,
    pub winding: Winding,
}

impl ExactFixedPoint {
    pub fn point(&self) -> PhasePoint {
        PhasePoint::new(
            self.num[0] as f64 / self.den as f64,
            self.num[1] as f64 / self.den as f64,
        )
    }

    /// The same fixed point translated by the integer vector `k` on the plane.
    pub fn shifted(&self, kp: i64, kq: i64, spec: &CatMapSpec) -> ExactFixedPoint {
        let num = [self.num[0] + kp * self.den, self.num[1] + kq * self.den];
        let [[a, b], [c, d]] = spec.entries;
        let winding = Winding::new(
            self.winding.mp + (a - 1) * kp + b * kq,
            self.winding.mq + c * kp + (d - 1) * kq,
        );
        ExactFixedPoint {
            num,
            den: self.den,
            winding,
        }
    }
}

impl CatMapSpec {
    /// Cayley matrix as integer numerators over `det(1 + M)`.
    fn cayley_integer(&self) -> (IMat, i64) {
        let [[a, b], [c, d]] = self.entries;
        let den = (a + 1) * (d + 1) - b * c;
        // adj(1 + M)
        let adj = [[d + 1, -b], [-c, a + 1]];
        let one_minus = [[1 - a, -b], [-c, 1 - d]];
        // -J = [[0, 1], [-1, 0]]
        let minus_j = [[0, 1], [-1, 0]];
        (imul(&imul(&minus_j, &one_minus), &adj), den)
    }

    /// Exact form of a fixed point given in floating point.
    pub fn exact_fixed_point(&self, x: PhasePoint) -> Result<ExactFixedPoint> {
        let mut a = self.entries;
        a[0][0] -= 1;
        a[1][1] -= 1;
        let den = idet(&a).abs();
        if den == 0 {
            return Err(Error::DegenerateMap { period: 1 });
        }
        let num = [
            (x.p * den as f64).round() as i64,
            (x.q * den as f64).round() as i64,
        ];
        let exact = PhasePoint::new(num[0] as f64 / den as f64, num[1] as f64 / den as f64);
        let image = [
            a[0][0] * num[0] + a[0][1] * num[1],
            a[1][0] * num[0] + a[1][1] * num[1],
        ];
        if (exact - x).norm_sqr().sqrt() > 1e-10 || image[0] % den != 0 || image[1] % den != 0 {
            return Err(Error::NotFixedPoint { point: x });
        }
        Ok(ExactFixedPoint {
            num,
            den,
            winding: Winding::new(image[0] / den, image[1] / den),
        })
    }

    /// Fractional part of `scale · S(Y, m)` for an exact fixed point `Y`,
    /// evaluated in integer arithmetic.
    pub fn action_turns(&self, y: &ExactFixedPoint, scale: i128) -> f64 {
        ActionPhase::new(self, y, scale).turns(0, 0)
    }
}

/// Exact `scale · S(Y + k, m + (M - 1)k) mod 1` for the integer translates of a
/// fixed point `Y`.
#[derive(Debug, Clone, Copy)]
pub struct ActionPhase {
    b: [[i64; 2]; 2],
    b_minus_j: [[i64; 2]; 2],
    b_plus_jt: [[i64; 2]; 2],
    m_minus_one: [[i64; 2]; 2],
    num: [i64; 2],
    den: i64,
    winding: [i64; 2],
    /// `4 den² det(1 + M)`, made positive.
    modulus: i64,
    sign: i64,
    scale: i64,
}

fn quad_i(x: [i64; 2], m: &[[i64; 2]; 2], z: [i64; 2]) -> i64 {
    x[0] * (m[0][0] * z[0] + m[0][1] * z[1]) + x[1] * (m[1][0] * z[0] + m[1][1] * z[1])
}

impl ActionPhase {
    pub fn new(spec: &CatMapSpec, y: &ExactFixedPoint, scale: i128) -> Self {
        let (bn, bd) = spec.cayley_integer();
        let b = bn;
        let [[a, bb], [c, d]] = spec.entries;
        let den = y.den;
        let l = 4 * den * den * bd;
        let modulus = l.abs();
        Self {
            b,
            b_minus_j: [[b[0][0], b[0][1] + bd], [b[1][0] - bd, b[1][1]]],
            b_plus_jt: [[b[0][0], b[0][1] + bd], [b[1][0] + bd, b[1][1]]],
            m_minus_one: [[a - 1, bb], [c, d - 1]],
            num: y.num,
            den,
            winding: [y.winding.mp, y.winding.mq],
            modulus,
            sign: l.signum(),
            scale: scale.rem_euclid(modulus as i128) as i64,
        }
    }

    /// Period `L` of [`ActionPhase::turns`] in each component of `k`.
    pub fn period(&self) -> i64 {
        self.modulus
    }

    pub fn turns(&self, kp: i64, kq: i64) -> f64 {
        // sigma(k) mod L depends on k mod L only
        let k = [kp.rem_euclid(self.modulus), kq.rem_euclid(self.modulus)];
        let v = [self.num[0] + k[0] * self.den, self.num[1] + k[1] * self.den];
        let mk = &self.m_minus_one;
        let m = [
            self.winding[0] + mk[0][0] * k[0] + mk[0][1] * k[1],
            self.winding[1] + mk[1][0] * k[0] + mk[1][1] * k[1],
        ];
        // S = sigma / (4 den² det(1+M))
        let sigma = 4 * quad_i(v, &self.b, v)
            + 4 * self.den * quad_i(v, &self.b_minus_j, m)
            + self.den * self.den * quad_i(m, &self.b_plus_jt, m);
        let r = (self.scale * (self.sign * sigma).rem_euclid(self.modulus)).rem_euclid(self.modulus);
        r as f64 / self.modulus as f64
    }
}

/// The cat map `[[2, 3], [1, 2]]`.
pub fn default_cat() -> CatMapSpec {
    CatMapSpec::new(2, 3, 1, 2).expect("default cat map is hyperbolic and symplectic")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn default_cat_invariants() {
        let c = default_cat();
        assert!(c.b.max_abs_diff(&SymMat2::new(-1.0 / 3.0, 0.0, 1.0)) < 1e-15);
        assert_eq!(c.det_m_plus_one(), 6.0);
        let half = c.frame.lambda / 2.0;
        assert!((4.0 * half.cosh().powi(2) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(CatMapSpec::new(2, 1, 1, 2).is_err());
    }

    #[test]
    fn iterate_examples() {
        let c = default_cat();
        for n in [-3, 0, 1, 5] {
            assert_eq!(c.iterate(PhasePoint::ORIGIN, n), PhasePoint::ORIGIN);
        }
        assert_eq!(c.iterate(PhasePoint::new(0.0, 0.5), 1), PhasePoint::new(0.5, 0.0));
        let x = PhasePoint::new(0.5, 1.0 / 6.0);
        assert!(c.iterate(x, 2).torus_distance(x) < 1e-12);
        let y = PhasePoint::new(0.23, 0.71);
        assert!(c.iterate(c.iterate(y, 3), -3).torus_distance(y) < 1e-12);
    }

    #[test]
    fn fixed_points_exact() {
        let c = default_cat();
        let pts = c.enumerate_periodic_points(1).unwrap();
        let got: Vec<_> = pts.iter().map(|x| (x.exact.p, x.exact.q)).collect();
        assert_eq!(got, vec![(r(0, 1), r(0, 1)), (r(1, 2), r(1, 2))]);
        assert_eq!(c.periodic_point(1, Winding::ZERO).unwrap(), PhasePoint::ORIGIN);
    }

    #[test]
    fn period_two_points_exact() {
        let c = default_cat();
        let pts = c.enumerate_periodic_points(2).unwrap();
        let got: BTreeSet<_> = pts.iter().map(|x| (x.exact.p, x.exact.q)).collect();
        let printed = [
            (0, 1, 0, 1),
            (1, 2, 1, 2),
            (0, 1, 1, 2),
            (1, 2, 0, 1),
            (1, 2, 1, 6),
            (1, 2, 5, 6),
            (0, 1, 1, 6),
            (1, 2, 2, 6),
            (0, 1, 5, 6),
            (1, 2, 4, 6),
            (0, 1, 2, 6),
            (0, 1, 4, 6),
        ];
        let want: BTreeSet<_> = printed.iter().map(|&(a, b, c, d)| (r(a, b), r(c, d))).collect();
        assert_eq!(got, want);
        for x in &pts {
            assert!(c.iterate(x.point, 2).torus_distance(x.point) < 1e-12);
        }
    }

    #[test]
    fn action_at_fixed_points() {
        let c = default_cat();
        assert_eq!(c.generating_action(PhasePoint::ORIGIN, Winding::ZERO), 0.0);
        let half = PhasePoint::new(0.5, 0.5);
        assert_eq!(c.fixed_point_winding(half).unwrap(), Winding::new(2, 1));
        // term by term: xBx = 1/6, x(B-J)m = -1/3, m(B+J̃)m/4 = 11/12
        let s = c.fixed_point_action(half).unwrap();
        assert!((s - (1.0 / 6.0 - 1.0 / 3.0 + 11.0 / 12.0)).abs() < 1e-15);
        assert!((s - 0.75).abs() < 1e-15);
        let three_steps: f64 = (0..3).map(|_| s).sum();
        assert!((three_steps - 3.0 * s).abs() < 1e-15);
    }

    #[test]
    fn non_fixed_point_rejected() {
        let c = default_cat();
        let err = c.fixed_point_action(PhasePoint::new(0.1, 0.2)).unwrap_err();
        assert!(matches!(err, Error::NotPeriodic { .. }));
    }

    #[test]
    fn chord_matches_explicit_map() {
        let c = default_cat();
        for &(p, q) in &[(0.1, 0.7), (0.45, 0.05), (0.9, 0.33)] {
            let xm = PhasePoint::new(p, q);
            for mp in -2..=2 {
                for mq in -2..=2 {
                    let w = Winding::new(mp, mq);
                    let xp = c.m.apply(xm) - w.as_point();
                    let center = (xp + xm) * 0.5;
                    let chord = c.chord_from_action(center, w);
                    assert!((chord - (xp - xm)).norm_sqr().sqrt() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn six_winding_classes() {
        let c = default_cat();
        let reps = c.winding_classes();
        assert_eq!(reps.len(), 6);
    }

    #[test]
    fn exact_action_turns() {
        let c = default_cat();
        let half = c.exact_fixed_point(PhasePoint::new(0.5, 0.5)).unwrap();
        assert_eq!(half.num, [1, 1]);
        assert_eq!(half.den, 2);
        assert_eq!(half.winding, Winding::new(2, 1));
        assert_eq!(c.action_turns(&half, 1), 0.75);
        assert_eq!(c.action_turns(&half, 3), 0.25);
        for (kp, kq) in [(3, -2), (-7, 11), (40, 25)] {
            let y = half.shifted(kp, kq, &c);
            let s = c.generating_action(y.point(), y.winding);
            let want = (7.0 * s).rem_euclid(1.0);
            assert!((c.action_turns(&y, 7) - want).abs() < 1e-9);
            assert_eq!(c.fixed_point_winding(y.point()).unwrap(), y.winding);
        }
        assert!(c.exact_fixed_point(PhasePoint::new(0.5, 0.0)).is_err());
    }
}
