//! Finite-dimensional quantum mechanics on the torus.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::cat::CatMapSpec;
use crate::error::{Error, Result};
use crate::symplectic::PhasePoint;

pub type StateVector = Array1<Complex64>;
pub type OperatorMatrix = Array2<Complex64>;

/// Largest dimension accepted by the dense routines.
pub const MAX_DIM: usize = 512;

/// Default image cutoff for coherent-state sums.
pub const DEFAULT_JMAX: usize = 3;

/// `e^{iθ}` for `θ = 2π·turns`, with `turns` reduced before scaling.
pub(crate) fn cis_turns(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (turns - turns.floor()))
}

/// Hilbert space of dimension `N` on the unit torus, `ħ = 1/(2πN)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusHilbert {
    pub n: usize,
    pub hbar: f64,
}

impl TorusHilbert {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "dimension must lie in 1..={MAX_DIM}, got {n}"
            )));
        }
        Ok(Self {
            n,
            hbar: 1.0 / (2.0 * PI * n as f64),
        })
    }

    pub fn identity(&self) -> OperatorMatrix {
        Array2::eye(self.n)
    }

    fn require_odd(&self) -> Result<()> {
        if self.n % 2 == 0 {
            Err(Error::EvenNUnsupported { n: self.n })
        } else {
            Ok(())
        }
    }
}

/// Hannay–Berry propagator of the cat map `[[2, 3], [1, 2]]`:
/// `⟨q_k|U|q_j⟩ = (i/N)^{1/2} exp[2πi(k² - jk + j²)/N]`, principal root.
pub fn cat_propagator(h: &TorusHilbert) -> OperatorMatrix {
    let n = h.n as i64;
    let pref = Complex64::new(0.0, 1.0 / n as f64).sqrt();
    Array2::from_shape_fn((h.n, h.n), |(k, j)| {
        let (k, j) = (k as i64, j as i64);
        let e = (k * k - j * k + j * j).rem_euclid(n);
        pref * cis_turns(e as f64 / n as f64)
    })
}

pub fn adjoint(a: &OperatorMatrix) -> OperatorMatrix {
    a.t().mapv(|z| z.conj())
}

/// `max |A - B|` entrywise.
pub fn max_abs_diff(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `‖U†U - 1‖_max`.
pub fn unitarity_residual(u: &OperatorMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&adjoint(u).dot(u), &Array2::eye(n))
}

pub fn trace(a: &OperatorMatrix) -> Complex64 {
    a.diag().sum()
}

/// `⟨a|b⟩`.
pub fn inner(a: &StateVector, b: &StateVector) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &StateVector) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Integer powers of a unitary matrix, cached.
///
/// Readers share the lock; a missing power is computed outside the lock from
/// the nearest cached power of the same sign and then inserted.
#[derive(Debug)]
pub struct PropagatorPowers {
    forward: Arc<OperatorMatrix>,
    backward: Arc<OperatorMatrix>,
    cache: RwLock<BTreeMap<i64, Arc<OperatorMatrix>>>,
}

impl PropagatorPowers {
    pub fn new(u: OperatorMatrix) -> Self {
        let n = u.nrows();
        let backward = Arc::new(adjoint(&u));
        let forward = Arc::new(u);
        let mut cache = BTreeMap::new();
        cache.insert(0, Arc::new(Array2::eye(n)));
        cache.insert(1, forward.clone());
        cache.insert(-1, backward.clone());
        Self {
            forward,
            backward,
            cache: RwLock::new(cache),
        }
    }

    pub fn base(&self) -> &OperatorMatrix {
        &self.forward
    }

    /// `Uᵗ`; negative `t` uses `U†`.
    pub fn power(&self, t: i64) -> Arc<OperatorMatrix> {
        let (start, mut acc) = {
            let cache = self.cache.read().expect("power cache poisoned");
            if let Some(m) = cache.get(&t) {
                return m.clone();
            }
            let nearest = if t > 0 {
                cache.range(0..t).next_back()
            } else {
                cache.range(t + 1..=0).next()
            };
            let (&s, m) = nearest.expect("identity is always cached");
            (s, (**m).clone())
        };
        let step = if t > 0 { &self.forward } else { &self.backward };
        let dir = t.signum();
        let mut fresh = Vec::new();
        let mut s = start;
        while s != t {
            acc = step.dot(&acc);
            s += dir;
            fresh.push((s, Arc::new(acc.clone())));
        }
        let mut cache = self.cache.write().expect("power cache poisoned");
        for (k, m) in fresh {
            cache.entry(k).or_insert(m);
        }
        cache[&t].clone()
    }

    pub fn cached_exponents(&self) -> Vec<i64> {
        self.cache
            .read()
            .expect("power cache poisoned")
            .keys()
            .copied()
            .collect()
    }
}

/// `Uᵗ` without caching.
pub fn propagator_power(u: &OperatorMatrix, t: i64) -> OperatorMatrix {
    let step = if t >= 0 { u.clone() } else { adjoint(u) };
    let mut acc = Array2::eye(u.nrows());
    for _ in 0..t.unsigned_abs() {
        acc = step.dot(&acc);
    }
    acc
}

/// Applies `Uᵗ` to a vector by repeated multiplication.
pub fn apply_power(u: &OperatorMatrix, t: i64, v: &StateVector) -> StateVector {
    let mut out = v.clone();
    if t >= 0 {
        for _ in 0..t {
            out = u.dot(&out);
        }
    } else {
        let ud = adjoint(u);
        for _ in 0..-t {
            out = ud.dot(&out);
        }
    }
    out
}

/// Unnormalized torus coherent state centred at `X = (P, Q)`:
/// `Σ_j exp[-(q - Q)²/2ħ + iP(q - Q/2)/ħ]` at `q = k/N - j`, `|j| ≤ jmax`.
///
/// Its squared norm is `(N/2)^{1/2}` up to exponentially small corrections.
pub fn coherent_state(h: &TorusHilbert, x: PhasePoint, jmax: usize) -> StateVector {
    let n = h.n as f64;
    let jm = jmax as i64;
    Array1::from_shape_fn(h.n, |k| {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in -jm..=jm {
            let q = k as f64 / n - j as f64;
            let gauss = (-(q - x.q).powi(2) / (2.0 * h.hbar)).exp();
            let turns = n * x.p * (q - 0.5 * x.q);
            acc += cis_turns(turns) * gauss;
        }
        acc
    })
}

/// Translation by `ξ = (a/N, b/N)`: `T|q_k⟩ = e^{iπa(2k+b)/N}|q_{k+b}⟩`.
///
/// The integers are not reduced: shifting `a` by `N` flips the sign by `(-1)^b`.
pub fn translation_op(h: &TorusHilbert, a: i64, b: i64) -> OperatorMatrix {
    let n = h.n as i64;
    let mut out = Array2::zeros((h.n, h.n));
    for k in 0..n {
        let target = (k + b).rem_euclid(n) as usize;
        let num = (a * (2 * k + b)).rem_euclid(2 * n);
        out[[target, k as usize]] = cis_turns(num as f64 / (2 * n) as f64);
    }
    out
}

/// Reflection about `x = (c/2N, d/2N)`:
/// `R|q_k⟩ = e^{2πi c(d - 2k)/2N}|q_{d-k}⟩`.
///
/// Defined for every `N`; the lattice completeness relation needs odd `N`.
pub fn reflection_op_doubled(h: &TorusHilbert, c: i64, d: i64) -> OperatorMatrix {
    let n = h.n as i64;
    let mut out = Array2::zeros((h.n, h.n));
    for k in 0..n {
        let target = (d - k).rem_euclid(n) as usize;
        let num = (c * (d - 2 * k)).rem_euclid(2 * n);
        out[[target, k as usize]] = cis_turns(num as f64 / (2 * n) as f64);
    }
    out
}

/// Reflection about the lattice point `x = (a/N, b/N)`; odd `N` only.
pub fn reflection_op(h: &TorusHilbert, a: i64, b: i64) -> Result<OperatorMatrix> {
    h.require_odd()?;
    Ok(reflection_op_doubled(h, 2 * a, 2 * b))
}

/// `Tr[R_x A]` on the lattice `x = (a/N, b/N)`, indexed `[a, b]`.
pub fn weyl_symbol(h: &TorusHilbert, a_op: &OperatorMatrix) -> Result<Array2<Complex64>> {
    h.require_odd()?;
    let n = h.n as i64;
    // Tr[R A] = Σ_k R[target(k), k] · A[k, target(k)]
    Ok(Array2::from_shape_fn((h.n, h.n), |(a, b)| {
        let (a, b) = (a as i64, b as i64);
        (0..n)
            .map(|k| {
                let target = (2 * b - k).rem_euclid(n) as usize;
                let num = (2 * a * (2 * b - 2 * k)).rem_euclid(2 * n);
                cis_turns(num as f64 / (2 * n) as f64) * a_op[[k as usize, target]]
            })
            .sum()
    }))
}

/// `A = (1/N) Σ_x A_W(x) R_x` over the lattice.
pub fn reconstruct(h: &TorusHilbert, symbol: &Array2<Complex64>) -> Result<OperatorMatrix> {
    h.require_odd()?;
    let n = h.n as i64;
    let mut out = Array2::zeros((h.n, h.n));
    for a in 0..n {
        for b in 0..n {
            let w = symbol[[a as usize, b as usize]] / n as f64;
            for k in 0..n {
                let target = (2 * b - k).rem_euclid(n) as usize;
                let num = (2 * a * (2 * b - 2 * k)).rem_euclid(2 * n);
                out[[target, k as usize]] += w * cis_turns(num as f64 / (2 * n) as f64);
            }
        }
    }
    Ok(out)
}

/// Closed-form Weyl symbol of the cat propagator at `x`:
/// `2/|det(M+1)|^{1/2} Σ_m e^{2πiN S(x, m)}`, with `m` over `Z²/(M+1)Z²`.
pub fn cat_weyl_formula(h: &TorusHilbert, spec: &CatMapSpec, x: PhasePoint) -> Complex64 {
    let pref = 2.0 / spec.det_m_plus_one().sqrt();
    let n = h.n as f64;
    spec.winding_classes()
        .into_iter()
        .map(|m| cis_turns(n * spec.generating_action(x, m)))
        .sum::<Complex64>()
        * pref
}

/// Symbol `Tr[R_x U]` predicted from [`cat_weyl_formula`]: the formula carries
/// the Morse phase `e^{iπα/2}` and a factor ½ from the lattice trace normalization.
///
/// Valid when `N` is coprime to `|det(M+1)|`.
pub fn cat_weyl_predicted(h: &TorusHilbert, spec: &CatMapSpec, x: PhasePoint) -> Complex64 {
    let morse = Complex64::from_polar(0.5, 0.5 * PI * spec.morse_index as f64);
    morse * cat_weyl_formula(h, spec, x)
}
