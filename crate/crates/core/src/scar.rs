//! Scar functions: windowed time sums of propagated coherent states.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symplectic::PhasePoint;
use crate::torus::{adjoint, coherent_state, norm, OperatorMatrix, StateVector, TorusHilbert, DEFAULT_JMAX};

/// Time window `f_T(t) = e^{-(4t/T)²}`.
pub fn window(t: f64, big_t: f64) -> f64 {
    (-(4.0 * t / big_t).powi(2)).exp()
}

/// How the Ehrenfest time is derived from `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EhrenfestConvention {
    /// `ln N`
    LogN,
    /// `ln N / λ`
    #[default]
    LogNOverLambda,
    /// `ln(2πN) = |ln ħ|`
    LogInvHbar,
}

impl EhrenfestConvention {
    pub const ALL: [EhrenfestConvention; 3] = [
        EhrenfestConvention::LogN,
        EhrenfestConvention::LogNOverLambda,
        EhrenfestConvention::LogInvHbar,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EhrenfestConvention::LogN => "logN",
            EhrenfestConvention::LogNOverLambda => "logN-over-lambda",
            EhrenfestConvention::LogInvHbar => "log-inv-hbar",
        }
    }
}

impl fmt::Display for EhrenfestConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EhrenfestConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown T convention `{s}`")))
    }
}

pub fn ehrenfest_time(n: usize, lambda: f64, convention: EhrenfestConvention) -> Result<f64> {
    if n < 2 || lambda <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Ehrenfest time needs N >= 2 and lambda > 0 (N={n}, lambda={lambda})"
        )));
    }
    let ln_n = (n as f64).ln();
    Ok(match convention {
        EhrenfestConvention::LogN => ln_n,
        EhrenfestConvention::LogNOverLambda => ln_n / lambda,
        EhrenfestConvention::LogInvHbar => (2.0 * PI * n as f64).ln(),
    })
}

/// Smallest integer `≥ T/2 + 2`.
pub fn default_cutoff(big_t: f64) -> usize {
    (big_t / 2.0 + 2.0).ceil() as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScarParams {
    pub center: PhasePoint,
    pub phi: f64,
    pub big_t: f64,
    /// Largest `|t|` kept in the time sum.
    pub cutoff: usize,
    pub normalize: bool,
}

impl ScarParams {
    /// Defaults: `φ = 0`, cutoff `⌈T/2 + 2⌉`, normalized.
    pub fn new(center: PhasePoint, big_t: f64) -> Result<Self> {
        if big_t <= 0.0 || !big_t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "T must be positive, got {big_t}"
            )));
        }
        Ok(Self {
            center,
            phi: 0.0,
            big_t,
            cutoff: default_cutoff(big_t),
            normalize: true,
        })
    }

    pub fn with_phi(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = cutoff;
        self
    }

    pub fn with_normalize(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }

    /// Window-and-phase weight `e^{iφt} f_T(t)`, zero outside the cutoff.
    pub fn weight(&self, t: i64) -> Complex64 {
        if t.unsigned_abs() as usize > self.cutoff {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(window(t as f64, self.big_t), self.phi * t as f64)
    }
}

/// `Σ_{|t| ≤ cutoff} e^{iφt} f_T(t) Uᵗ|X⟩`, optionally normalized.
pub fn scar_state(h: &TorusHilbert, u: &OperatorMatrix, p: &ScarParams) -> StateVector {
    let coh = coherent_state(h, p.center, DEFAULT_JMAX);
    let mut out = coh.clone();
    let ud = adjoint(u);
    let mut fwd = coh.clone();
    let mut bwd = coh;
    for t in 1..=p.cutoff as i64 {
        fwd = u.dot(&fwd);
        bwd = ud.dot(&bwd);
        out.scaled_add(p.weight(t), &fwd);
        out.scaled_add(p.weight(-t), &bwd);
    }
    if p.normalize {
        let nrm = norm(&out);
        out.mapv_inplace(|z| z / nrm);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::default_cat;
    use crate::torus::{cat_propagator, inner};

    #[test]
    fn window_values() {
        assert_eq!(window(0.0, 3.0), 1.0);
        assert!((window(1.5, 3.0) - (-4f64).exp()).abs() < 1e-16);
        assert_eq!(window(-1.5, 3.0), window(1.5, 3.0));
    }

    #[test]
    fn ehrenfest_conventions() {
        let lam = default_cat().frame.lambda;
        let t = ehrenfest_time(100, lam, EhrenfestConvention::LogN).unwrap();
        assert!((t - 4.60517).abs() < 1e-5);
        let t = ehrenfest_time(100, lam, EhrenfestConvention::LogNOverLambda).unwrap();
        assert!((t - 3.49683).abs() < 1e-5);
        let t = ehrenfest_time(100, lam, EhrenfestConvention::LogInvHbar).unwrap();
        assert!((t - (200.0 * PI).ln()).abs() < 1e-14);
        for c in EhrenfestConvention::ALL {
            assert_eq!(c.name().parse::<EhrenfestConvention>().unwrap(), c);
            assert!(ehrenfest_time(50, lam, c).unwrap() < ehrenfest_time(51, lam, c).unwrap());
        }
        assert!(ehrenfest_time(1, lam, EhrenfestConvention::LogN).is_err());
    }

    #[test]
    fn zero_cutoff_is_coherent_state() {
        let h = TorusHilbert::new(20).unwrap();
        let u = cat_propagator(&h);
        let p = ScarParams::new(PhasePoint::new(0.5, 0.5), 3.0)
            .unwrap()
            .with_cutoff(0)
            .with_normalize(false);
        let s = scar_state(&h, &u, &p);
        let c = coherent_state(&h, p.center, DEFAULT_JMAX);
        assert!(s.iter().zip(c.iter()).all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn phase_periodicity() {
        let h = TorusHilbert::new(20).unwrap();
        let u = cat_propagator(&h);
        let p = ScarParams::new(PhasePoint::ORIGIN, 4.0).unwrap().with_phi(0.4);
        let a = scar_state(&h, &u, &p);
        let b = scar_state(&h, &u, &p.with_phi(0.4 + 2.0 * PI));
        assert!(a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() < 1e-12));
    }

    #[test]
    fn odd_dimension_overlap_vanishes() {
        let h = TorusHilbert::new(101).unwrap();
        let u = cat_propagator(&h);
        let t = ehrenfest_time(101, default_cat().frame.lambda, Default::default()).unwrap();
        let a = scar_state(&h, &u, &ScarParams::new(PhasePoint::ORIGIN, t).unwrap());
        let b = scar_state(&h, &u, &ScarParams::new(PhasePoint::new(0.5, 0.5), t).unwrap());
        assert!(inner(&a, &b).norm() < 1e-10);
    }
}
