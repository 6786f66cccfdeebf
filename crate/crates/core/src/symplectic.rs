//! Two-dimensional symplectic linear algebra.
//!
//! Phase-space vectors are ordered `(p, q)` everywhere. The symplectic form is
//! `J = [[0, -1], [1, 0]]`, so that `a ∧ b = (J a) · b = a.p * b.q - a.q * b.p`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Threshold on `|det(M + 1)|` below which the Cayley transform is refused.
pub const CAUSTIC_TOL: f64 = 1e-12;

/// A point, chord or center in the `(p, q)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub p: f64,
    pub q: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { p: 0.0, q: 0.0 };

    pub const fn new(p: f64, q: f64) -> Self {
        Self { p, q }
    }

    pub fn wedge(self, other: PhasePoint) -> f64 {
        wedge(self, other)
    }

    pub fn dot(self, other: PhasePoint) -> f64 {
        self.p * other.p + self.q * other.q
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn is_finite(self) -> bool {
        self.p.is_finite() && self.q.is_finite()
    }

    /// Both components reduced into `[0, 1)`.
    pub fn mod1(self) -> Self {
        Self::new(frac(self.p), frac(self.q))
    }

    /// Distance to `other` on the unit torus (minimum over integer shifts).
    pub fn torus_distance(self, other: PhasePoint) -> f64 {
        let dp = self.p - other.p;
        let dq = self.q - other.q;
        let dp = dp - dp.round();
        let dq = dq - dq.round();
        dp.hypot(dq)
    }
}

fn frac(x: f64) -> f64 {
    let r = x - x.floor();
    // x.floor() can leave r == 1.0 for tiny negative x
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl fmt::Display for PhasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

impl Add for PhasePoint {
    type Output = PhasePoint;
    fn add(self, rhs: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.p + rhs.p, self.q + rhs.q)
    }
}

impl AddAssign for PhasePoint {
    fn add_assign(&mut self, rhs: PhasePoint) {
        self.p += rhs.p;
        self.q += rhs.q;
    }
}

impl Sub for PhasePoint {
    type Output = PhasePoint;
    fn sub(self, rhs: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.p - rhs.p, self.q - rhs.q)
    }
}

impl Neg for PhasePoint {
    type Output = PhasePoint;
    fn neg(self) -> PhasePoint {
        PhasePoint::new(-self.p, -self.q)
    }
}

impl Mul<f64> for PhasePoint {
    type Output = PhasePoint;
    fn mul(self, rhs: f64) -> PhasePoint {
        PhasePoint::new(self.p * rhs, self.q * rhs)
    }
}

impl Mul<PhasePoint> for f64 {
    type Output = PhasePoint;
    fn mul(self, rhs: PhasePoint) -> PhasePoint {
        rhs * self
    }
}

/// Symplectic product `a.p * b.q - a.q * b.p`.
pub fn wedge(a: PhasePoint, b: PhasePoint) -> f64 {
    a.p * b.q - a.q * b.p
}

/// Real 2×2 matrix `[[a, b], [c, d]]` acting on `(p, q)` column vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);
    /// The symplectic form `J`.
    pub const J: Mat2 = Mat2::new(0.0, -1.0, 1.0, 0.0);
    /// The exchange matrix `[[0, 1], [1, 0]]`.
    pub const J_TILDE: Mat2 = Mat2::new(0.0, 1.0, 1.0, 0.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn diag(x: f64, y: f64) -> Self {
        Self::new(x, 0.0, 0.0, y)
    }

    /// Matrix whose columns are `c0` and `c1`.
    pub fn from_columns(c0: PhasePoint, c1: PhasePoint) -> Self {
        Self::new(c0.p, c1.p, c0.q, c1.q)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    pub fn apply(&self, x: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.a * x.p + self.b * x.q, self.c * x.p + self.d * x.q)
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Inverse, or `None` when the matrix is singular.
    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(Mat2::new(self.d, -self.b, -self.c, self.a).scale(1.0 / det))
    }

    /// Integer power; negative exponents use the inverse (assumes `det != 0`).
    pub fn pow(&self, n: i64) -> Mat2 {
        let base = if n < 0 {
            self.inverse()
                .expect("singular matrix raised to a negative power")
        } else {
            *self
        };
        let mut e = n.unsigned_abs();
        let mut acc = Mat2::IDENTITY;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq;
            }
            sq = sq * sq;
            e >>= 1;
        }
        acc
    }

    pub fn is_symplectic(&self, tol: f64) -> bool {
        (self.det() - 1.0).abs() <= tol
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, r: Mat2) -> Mat2 {
        Mat2::new(self.a + r.a, self.b + r.b, self.c + r.c, self.d + r.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, r: Mat2) -> Mat2 {
        Mat2::new(self.a - r.a, self.b - r.b, self.c - r.c, self.d - r.d)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, r: Mat2) -> Mat2 {
        Mat2::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

/// Real symmetric 2×2 matrix `[[xx, xy], [xy, yy]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymMat2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl SymMat2 {
    pub const ZERO: SymMat2 = SymMat2::new(0.0, 0.0, 0.0);

    pub const fn new(xx: f64, xy: f64, yy: f64) -> Self {
        Self { xx, xy, yy }
    }

    /// Symmetric part of a general matrix.
    pub fn symmetrize(m: &Mat2) -> Self {
        Self::new(m.a, 0.5 * (m.b + m.c), m.d)
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2::new(self.xx, self.xy, self.xy, self.yy)
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    /// `v† S v`, with `v = (first, second)` in whatever basis the matrix lives in.
    pub fn quad(&self, v: PhasePoint) -> f64 {
        self.xx * v.p * v.p + 2.0 * self.xy * v.p * v.q + self.yy * v.q * v.q
    }

    /// `u† S v`.
    pub fn bilinear(&self, u: PhasePoint, v: PhasePoint) -> f64 {
        self.xx * u.p * v.p + self.xy * (u.p * v.q + u.q * v.p) + self.yy * u.q * v.q
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.xx * s, self.xy * s, self.yy * s)
    }

    /// `Aᵀ S A`.
    pub fn congruence(&self, a: &Mat2) -> SymMat2 {
        SymMat2::symmetrize(&(a.transpose() * self.to_mat2() * *a))
    }

    pub fn inverse(&self) -> Option<SymMat2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(SymMat2::new(self.yy / det, -self.xy / det, self.xx / det))
    }

    pub fn max_abs_diff(&self, other: &SymMat2) -> f64 {
        (self.xx - other.xx)
            .abs()
            .max((self.xy - other.xy).abs())
            .max((self.yy - other.yy).abs())
    }
}

impl Add for SymMat2 {
    type Output = SymMat2;
    fn add(self, r: SymMat2) -> SymMat2 {
        SymMat2::new(self.xx + r.xx, self.xy + r.xy, self.yy + r.yy)
    }
}

impl Sub for SymMat2 {
    type Output = SymMat2;
    fn sub(self, r: SymMat2) -> SymMat2 {
        SymMat2::new(self.xx - r.xx, self.xy - r.xy, self.yy - r.yy)
    }
}

/// Cayley representation: the symmetric `B` with `J B = (1 - M)(1 + M)⁻¹`.
pub fn cayley_of(m: &Mat2) -> Result<SymMat2> {
    let one_plus = Mat2::IDENTITY + *m;
    let det = one_plus.det();
    if det.abs() < CAUSTIC_TOL {
        return Err(Error::Caustic {
            det: det.abs(),
            tol: CAUSTIC_TOL,
        });
    }
    let inv = one_plus.inverse().expect("checked non-singular");
    // J⁻¹ = -J
    let b = Mat2::J.scale(-1.0) * (Mat2::IDENTITY - *m) * inv;
    Ok(SymMat2::symmetrize(&b))
}

/// Stable/unstable eigen-frame of a hyperbolic 2×2 symplectic matrix.
///
/// `zeta_s` has unit Euclidean length and `zeta_u` is scaled so that
/// `zeta_u ∧ zeta_s = 1`; both directions are oriented with positive
/// `q` component (positive `p` when `q` vanishes), flipping `zeta_u` if the
/// orientation would otherwise make the wedge negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicFrame {
    /// Lyapunov exponent per application of the map.
    pub lambda: f64,
    pub zeta_u: PhasePoint,
    pub zeta_s: PhasePoint,
    /// Gram matrix of `(zeta_u, zeta_s)`: the Euclidean scalar product in frame coordinates.
    pub gram: SymMat2,
    /// Sign of the eigenvalues (`+1` for trace > 2, `-1` for trace < -2).
    pub eigen_sign: f64,
}

impl HyperbolicFrame {
    /// `ζu · ζs`, the off-diagonal of the Gram matrix.
    pub fn overlap(&self) -> f64 {
        self.gram.xy
    }

    /// Columns `(ζu, ζs)`: maps frame coordinates to Cartesian ones.
    pub fn basis(&self) -> Mat2 {
        Mat2::from_columns(self.zeta_u, self.zeta_s)
    }

    pub fn to_frame(&self, v: PhasePoint) -> (f64, f64) {
        to_frame_coords(self, v)
    }

    pub fn from_frame(&self, u: f64, s: f64) -> PhasePoint {
        self.zeta_u * u + self.zeta_s * s
    }

    /// Re-expresses a frame-basis quadratic form in Cartesian `(p, q)` coordinates.
    pub fn form_to_cartesian(&self, form: &SymMat2) -> SymMat2 {
        let pinv = self.basis().inverse().expect("frame basis has unit determinant");
        form.congruence(&pinv)
    }
}

fn orient(v: PhasePoint) -> PhasePoint {
    if v.q < 0.0 || (v.q == 0.0 && v.p < 0.0) {
        -v
    } else {
        v
    }
}

fn eigenvector(m: &Mat2, mu: f64) -> PhasePoint {
    // rows of (M - mu) are orthogonal to the eigenvector; use the larger one
    let r0 = PhasePoint::new(m.a - mu, m.b);
    let r1 = PhasePoint::new(m.c, m.d - mu);
    let r = if r0.norm_sqr() >= r1.norm_sqr() { r0 } else { r1 };
    let v = PhasePoint::new(-r.q, r.p);
    orient(v * (1.0 / v.norm_sqr().sqrt()))
}

/// Eigen-frame of a hyperbolic map `M`.
pub fn frame_from_map(m: &Mat2) -> Result<HyperbolicFrame> {
    let tr = m.trace();
    if tr.abs() <= 2.0 {
        return Err(Error::NotHyperbolic { trace: tr.abs() });
    }
    let disc = (tr * tr - 4.0 * m.det()).sqrt();
    let sign = tr.signum();
    // larger-modulus eigenvalue without cancellation; the other from det = 1
    let mu_u = 0.5 * (tr + sign * disc);
    let mu_s = m.det() / mu_u;
    let lambda = mu_u.abs().ln();

    let s_dir = eigenvector(m, mu_s);
    let mut u_dir = eigenvector(m, mu_u);
    let mut w = wedge(u_dir, s_dir);
    if w < 0.0 {
        u_dir = -u_dir;
        w = -w;
    }
    let zeta_u = u_dir * (1.0 / w);
    let zeta_s = s_dir;
    let gram = SymMat2::new(zeta_u.norm_sqr(), zeta_u.dot(zeta_s), zeta_s.norm_sqr());
    Ok(HyperbolicFrame {
        lambda,
        zeta_u,
        zeta_s,
        gram,
        eigen_sign: sign,
    })
}

/// Coordinates `(u, s)` with `v = u ζu + s ζs`.
pub fn to_frame_coords(f: &HyperbolicFrame, v: PhasePoint) -> (f64, f64) {
    (wedge(v, f.zeta_s), wedge(f.zeta_u, v))
}
