//! Report types and their JSON, CSV and pretty encodings.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use scarmat_core::checks::CheckResult;

use crate::config::{Format, Point, RunConfig};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

/// One exact-versus-semiclassical comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    /// `scar` or `coherent`.
    pub kind: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub t: i64,
    pub x1: Point,
    pub x2: Point,
    pub phi1: f64,
    pub phi2: f64,
    #[serde(rename = "T")]
    pub big_t: f64,
    pub convention: String,
    pub mode: String,
    pub exact: Cx,
    pub sc: Cx,
    pub abs_err: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub name: String,
    /// `None` when the residual is not finite.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

impl From<&CheckResult> for SuiteResult {
    fn from(r: &CheckResult) -> Self {
        Self {
            suite: r.suite.name().to_string(),
            name: r.name.clone(),
            residual: r.residual.is_finite().then_some(r.residual),
            tolerance: r.tolerance,
            passed: r.passed,
        }
    }
}

/// One `t'` term of a semiclassical scar element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub t: i64,
    pub mode: String,
    pub t_prime: i64,
    pub delta: Point,
    pub v_det_mod: f64,
    pub epsilon: f64,
    pub action: f64,
    pub damping: f64,
    pub weight: Cx,
    pub kernel: Cx,
    pub term: Cx,
    pub images: usize,
}

/// Both semiclassical totals of a scar element next to the exact value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScarTotals {
    #[serde(rename = "N")]
    pub n: usize,
    pub t: i64,
    pub exact: Cx,
    pub exact_w: Cx,
    pub paper_a: Cx,
    /// `|paperA - exactW| / |exactW|`
    pub deviation: f64,
    /// Share of `Σ|term|` from `|t - t'| > T`, exactW mode.
    pub tail_fraction: f64,
    /// `t'` of the largest exactW term.
    pub dominant_t_prime: i64,
}

/// Weyl symbol of the propagator at one lattice point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub x: Point,
    pub trace: Cx,
    pub formula: Cx,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub suite_results: Vec<SuiteResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub totals: Vec<ScarTotals>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symbols: Vec<SymbolRow>,
}

impl Report {
    pub fn new(config: RunConfig) -> Self {
        Self {
            config,
            records: Vec::new(),
            suite_results: Vec::new(),
            totals: Vec::new(),
            terms: Vec::new(),
            symbols: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.suite_results.iter().all(|r| r.passed)
    }

    pub fn encode(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.to_csv(),
            Format::Pretty => Ok(self.to_pretty()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        let mut section = |rows: Vec<Vec<String>>, header: &[&str]| -> Result<(), CliError> {
            if rows.is_empty() {
                return Ok(());
            }
            if !out.is_empty() {
                out.push('\n');
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header)?;
            for r in rows {
                w.write_record(&r)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Csv(e.to_string()))?;
            out.push_str(&String::from_utf8_lossy(&bytes));
            Ok(())
        };
        let f = |x: f64| x.to_string();
        section(
            self.records
                .iter()
                .map(|r| {
                    vec![
                        r.kind.clone(),
                        r.n.to_string(),
                        r.t.to_string(),
                        f(r.x1.p),
                        f(r.x1.q),
                        f(r.x2.p),
                        f(r.x2.q),
                        f(r.phi1),
                        f(r.phi2),
                        f(r.big_t),
                        r.convention.clone(),
                        r.mode.clone(),
                        f(r.exact.re),
                        f(r.exact.im),
                        f(r.sc.re),
                        f(r.sc.im),
                        f(r.abs_err),
                        f(r.rel_err),
                    ]
                })
                .collect(),
            &[
                "kind",
                "N",
                "t",
                "x1_p",
                "x1_q",
                "x2_p",
                "x2_q",
                "phi1",
                "phi2",
                "T",
                "convention",
                "mode",
                "exact_re",
                "exact_im",
                "sc_re",
                "sc_im",
                "abs_err",
                "rel_err",
            ],
        )?;
        section(
            self.totals
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.t.to_string(),
                        f(r.exact.re),
                        f(r.exact.im),
                        f(r.exact_w.re),
                        f(r.exact_w.im),
                        f(r.paper_a.re),
                        f(r.paper_a.im),
                        f(r.deviation),
                        f(r.tail_fraction),
                        r.dominant_t_prime.to_string(),
                    ]
                })
                .collect(),
            &[
                "N",
                "t",
                "exact_re",
                "exact_im",
                "exactW_re",
                "exactW_im",
                "paperA_re",
                "paperA_im",
                "deviation",
                "tail_fraction",
                "dominant_t_prime",
            ],
        )?;
        section(
            self.terms
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.t.to_string(),
                        r.mode.clone(),
                        r.t_prime.to_string(),
                        f(r.delta.p),
                        f(r.delta.q),
                        f(r.v_det_mod),
                        f(r.epsilon),
                        f(r.action),
                        f(r.damping),
                        f(r.weight.re),
                        f(r.weight.im),
                        f(r.term.re),
                        f(r.term.im),
                        r.images.to_string(),
                    ]
                })
                .collect(),
            &[
                "N",
                "t",
                "mode",
                "t_prime",
                "delta_u",
                "delta_s",
                "abs_det_v",
                "epsilon",
                "action",
                "damping",
                "weight_re",
                "weight_im",
                "term_re",
                "term_im",
                "images",
            ],
        )?;
        section(
            self.symbols
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        f(r.x.p),
                        f(r.x.q),
                        f(r.trace.re),
                        f(r.trace.im),
                        f(r.formula.re),
                        f(r.formula.im),
                        f(r.abs_err),
                    ]
                })
                .collect(),
            &[
                "N",
                "p",
                "q",
                "trace_re",
                "trace_im",
                "formula_re",
                "formula_im",
                "abs_err",
            ],
        )?;
        section(
            self.suite_results
                .iter()
                .map(|r| {
                    vec![
                        r.suite.clone(),
                        r.name.clone(),
                        r.residual.map(f).unwrap_or_else(|| "inf".into()),
                        f(r.tolerance),
                        r.passed.to_string(),
                    ]
                })
                .collect(),
            &["suite", "check", "residual", "tolerance", "passed"],
        )?;
        Ok(out)
    }

    fn to_pretty(&self) -> String {
        let mut s = String::new();
        let cfg = &self.config;
        let _ = writeln!(
            s,
            "scarmat {}  T-convention={}  mode={}  normalize={}",
            cfg.command.name(),
            cfg.t_convention,
            cfg.mode,
            cfg.normalize
        );
        if !self.records.is_empty() {
            s.push_str(&self.records_table());
        }
        if !self.totals.is_empty() {
            let _ = writeln!(
                s,
                "\n{:>4} {:>3} {:>36} {:>36} {:>36} {:>10} {:>10} {:>4}",
                "N", "t", "exact", "exactW", "paperA", "deviation", "tail", "t'*"
            );
            for r in &self.totals {
                let _ = writeln!(
                    s,
                    "{:>4} {:>3} {:>36} {:>36} {:>36} {:>10.3e} {:>10.3e} {:>4}",
                    r.n,
                    r.t,
                    cx9(r.exact),
                    cx9(r.exact_w),
                    cx9(r.paper_a),
                    r.deviation,
                    r.tail_fraction,
                    r.dominant_t_prime
                );
            }
        }
        if !self.terms.is_empty() {
            let _ = writeln!(
                s,
                "\n{:>4} {:>3} {:>7} {:>4} {:>24} {:>10} {:>10} {:>12} {:>10} {:>36}",
                "N", "t", "mode", "t'", "delta (u, s)", "|detV|", "eps", "action", "damping", "term"
            );
            for r in &self.terms {
                let _ = writeln!(
                    s,
                    "{:>4} {:>3} {:>7} {:>4} {:>24} {:>10.4e} {:>10.4e} {:>12.6e} {:>10.3e} {:>36}",
                    r.n,
                    r.t,
                    r.mode,
                    r.t_prime,
                    format!("({:.3e}, {:.3e})", r.delta.p, r.delta.q),
                    r.v_det_mod,
                    r.epsilon,
                    r.action,
                    r.damping,
                    cx9(r.term)
                );
            }
        }
        if !self.symbols.is_empty() {
            let _ = writeln!(
                s,
                "\n{:>4} {:>12} {:>12} {:>36} {:>36} {:>10}",
                "N", "p", "q", "Tr[R_x U]", "formula", "abs err"
            );
            for r in &self.symbols {
                let _ = writeln!(
                    s,
                    "{:>4} {:>12.9} {:>12.9} {:>36} {:>36} {:>10.3e}",
                    r.n,
                    r.x.p,
                    r.x.q,
                    cx9(r.trace),
                    cx9(r.formula),
                    r.abs_err
                );
            }
        }
        if !self.suite_results.is_empty() {
            s.push('\n');
            for r in &self.suite_results {
                let res = r
                    .residual
                    .map(|x| format!("{x:.3e}"))
                    .unwrap_or_else(|| "inf".into());
                let _ = writeln!(
                    s,
                    "{} {:<12} {:<36} residual {:>10}  tol {:.0e}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.suite,
                    r.name,
                    res,
                    r.tolerance
                );
            }
        }
        s
    }

    /// One row per `N` (and mode, when several) with an exact and a
    /// semiclassical column per `t`, so the default table run has five columns.
    fn records_table(&self) -> String {
        let mut s = String::new();
        let mut ts: Vec<i64> = self.records.iter().map(|r| r.t).collect();
        ts.sort_unstable();
        ts.dedup();
        let mut rows: Vec<(usize, &str, &str)> = self
            .records
            .iter()
            .map(|r| (r.n, r.kind.as_str(), r.mode.as_str()))
            .collect();
        rows.sort();
        rows.dedup();
        let modes = {
            let mut m: Vec<&str> = rows.iter().map(|r| r.2).collect();
            m.sort_unstable();
            m.dedup();
            m.len()
        };
        let _ = write!(s, "\n{:>4}", "N");
        if modes > 1 {
            let _ = write!(s, " {:>10}", "mode");
        }
        for t in &ts {
            let _ = write!(s, " {:>36} {:>36}", format!("exact t={t}"), format!("SC t={t}"));
        }
        s.push('\n');
        for (n, kind, mode) in rows {
            let _ = write!(s, "{n:>4}");
            if modes > 1 {
                let _ = write!(s, " {mode:>10}");
            }
            for t in &ts {
                match self
                    .records
                    .iter()
                    .find(|r| r.n == n && r.t == *t && r.kind == kind && r.mode == mode)
                {
                    Some(r) => {
                        let _ = write!(s, " {:>36} {:>36}", cx9(r.exact), cx9(r.sc));
                    }
                    None => {
                        let _ = write!(s, " {:>36} {:>36}", "-", "-");
                    }
                }
            }
            s.push('\n');
        }
        s
    }
}

/// `x` with 9 significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..9).contains(&mag) {
        format!("{:.*}", (8 - mag).max(0) as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

fn cx9(z: Cx) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} i{}", sig9(z.re), sig9(z.im.abs()))
}
