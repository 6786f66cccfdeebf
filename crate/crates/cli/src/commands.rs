//! The five subcommands.

use num_complex::Complex64;

use scarmat_core::checks::{run_all, run_suite, Suite};
use scarmat_core::exact::{coherent_element_exact_hp, scar_element_exact, ComparisonRecord};
use scarmat_core::sc::{coherent_sc_element_torus, ScElementBreakdown, ScEngine, ScarScMode};
use scarmat_core::scar::{ehrenfest_time, ScarParams};
use scarmat_core::torus::{cat_propagator, cat_weyl_predicted, weyl_symbol, TorusHilbert};
use scarmat_core::{default_cat, Error, PhasePoint};

use crate::config::{Command, RunConfig};
use crate::report::{Record, Report, ScarTotals, SuiteResult, TermRow};
use crate::CliError;

/// Bits of the extended-precision coherent oracle.
const HP_BITS: usize = 128;

/// Exact elements below this are compared in absolute terms.
const ZERO_SCALE: f64 = 1e-10;

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let mut report = Report::new(cfg.clone());
    match cfg.command {
        Command::Table => table(cfg, &mut report)?,
        Command::Coherent => coherent(cfg, &mut report)?,
        Command::Scar => scar(cfg, &mut report)?,
        Command::Props => props(cfg, &mut report)?,
        Command::Weyl => weyl(cfg, &mut report)?,
    }
    report
        .records
        .sort_by(|a, b| (a.n, a.t, &a.mode).cmp(&(b.n, b.t, &b.mode)));
    Ok(report)
}

fn scar_params(cfg: &RunConfig, n: usize) -> Result<(ScarParams, ScarParams), CliError> {
    let big_t = ehrenfest_time(n, default_cat().frame.lambda, cfg.convention()?)?;
    let make = |x: PhasePoint, phi: f64| -> Result<ScarParams, CliError> {
        let mut p = ScarParams::new(x, big_t)?
            .with_phi(phi)
            .with_normalize(cfg.normalize);
        if let Some(c) = cfg.cutoff {
            p = p.with_cutoff(c);
        }
        Ok(p)
    };
    Ok((make(cfg.x1.into(), cfg.phi1)?, make(cfg.x2.into(), cfg.phi2)?))
}

fn record(kind: &str, cfg: &RunConfig, r: &ComparisonRecord, mode: &str) -> Record {
    Record {
        kind: kind.to_string(),
        n: r.n,
        t: r.t,
        x1: r.x1.into(),
        x2: r.x2.into(),
        phi1: r.phi1,
        phi2: r.phi2,
        big_t: r.big_t,
        convention: if kind == "coherent" {
            "-".into()
        } else {
            cfg.t_convention.clone()
        },
        mode: mode.to_string(),
        exact: r.exact.into(),
        sc: r.sc.into(),
        abs_err: r.abs_err,
        rel_err: r.rel_err,
    }
}

fn agreement(kind: &str, r: &ComparisonRecord, tol: f64) -> SuiteResult {
    let (res, what, tol) = if r.exact.norm() <= ZERO_SCALE {
        (r.abs_err, "abs", ZERO_SCALE)
    } else {
        (r.rel_err, "rel", tol)
    };
    SuiteResult {
        suite: kind.to_string(),
        name: format!("N={} t={} exact vs SC ({what})", r.n, r.t),
        residual: Some(res),
        tolerance: tol,
        passed: res <= tol,
    }
}

fn table(cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let mode = cfg.scar_mode()?;
    for &n in &cfg.n_list {
        let h = TorusHilbert::new(n)?;
        let u = cat_propagator(&h);
        let engine = ScEngine::new(default_cat(), h);
        let (p1, p2) = scar_params(cfg, n)?;
        for &t in &cfg.t {
            let exact = scar_element_exact(&h, &u, &p1, &p2, t);
            let sc = engine.scar_element(&p1, &p2, t, mode)?.value;
            let r = ComparisonRecord::new(&p1, &p2, n, t, exact, sc, mode);
            report.records.push(record("scar", cfg, &r, mode.name()));
            if mode == ScarScMode::ExactW {
                report.suite_results.push(agreement("table", &r, 1e-6));
            }
        }
    }
    Ok(())
}

fn coherent(cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let (x1, x2): (PhasePoint, PhasePoint) = (cfg.x1.into(), cfg.x2.into());
    for &n in &cfg.n_list {
        let h = TorusHilbert::new(n)?;
        let engine = ScEngine::new(default_cat(), h);
        for &t in &cfg.t {
            let exact = coherent_element_exact_hp(&h, x1, x2, t, HP_BITS);
            let sc = coherent_sc_element_torus(&engine, t, x1, x2)?;
            let abs_err = (exact - sc).norm();
            let r = ComparisonRecord {
                n,
                t,
                x1,
                x2,
                phi1: 0.0,
                phi2: 0.0,
                big_t: 0.0,
                exact,
                sc,
                abs_err,
                rel_err: abs_err / exact.norm().max(1e-300),
                mode: ScarScMode::ExactW,
            };
            report.records.push(record("coherent", cfg, &r, "periodized"));
            report.suite_results.push(agreement("coherent", &r, 1e-8));
        }
    }
    Ok(())
}

fn dominant(b: &ScElementBreakdown) -> i64 {
    b.terms
        .iter()
        .max_by(|x, y| x.contribution.norm().total_cmp(&y.contribution.norm()))
        .map(|x| x.t_prime)
        .unwrap_or(b.t)
}

fn scar(cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    for &n in &cfg.n_list {
        let h = TorusHilbert::new(n)?;
        let u = cat_propagator(&h);
        let engine = ScEngine::new(default_cat(), h);
        let (p1, p2) = scar_params(cfg, n)?;
        for &t in &cfg.t {
            let w = engine.scar_element(&p1, &p2, t, ScarScMode::ExactW)?;
            let a = engine.scar_element(&p1, &p2, t, ScarScMode::PaperA)?;
            let exact = scar_element_exact(&h, &u, &p1, &p2, t);
            for b in [&w, &a] {
                let r = ComparisonRecord::new(&p1, &p2, n, t, exact, b.value, b.mode);
                report.records.push(record("scar", cfg, &r, b.mode.name()));
                if b.mode == ScarScMode::ExactW {
                    report.suite_results.push(agreement("scar", &r, 1e-8));
                }
            }
            report.totals.push(ScarTotals {
                n,
                t,
                exact: exact.into(),
                exact_w: w.value.into(),
                paper_a: a.value.into(),
                deviation: (a.value - w.value).norm() / w.value.norm().max(1e-300),
                tail_fraction: w.tail_fraction,
                dominant_t_prime: dominant(&w),
            });
            if cfg.breakdown {
                for b in [&w, &a] {
                    let scale = 1.0 / (b.norm1 * b.norm2).sqrt();
                    for term in &b.terms {
                        report.terms.push(TermRow {
                            n,
                            t,
                            mode: b.mode.name().to_string(),
                            t_prime: term.t_prime,
                            delta: term.principal.delta.into(),
                            v_det_mod: term.chain.v_det_mod,
                            epsilon: term.chain.epsilon,
                            action: term.principal.action_mid,
                            damping: term.principal.gauss_damp,
                            weight: term.weight.into(),
                            kernel: term.kernel.into(),
                            term: (term.contribution * scale).into(),
                            images: term.images,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn props(cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let skip = cfg.skipped()?;
    for &n in &cfg.n_list {
        let results = run_all(n, cfg.seed, &skip)?;
        report.suite_results.extend(results.iter().map(|r| {
            let mut s = SuiteResult::from(r);
            if cfg.n_list.len() > 1 {
                s.name = format!("{} (N={n})", s.name);
            }
            s
        }));
    }
    Ok(())
}

fn weyl(cfg: &RunConfig, report: &mut Report) -> Result<(), CliError> {
    let spec = default_cat();
    for &n in &cfg.n_list {
        if n % 2 == 0 {
            return Err(Error::EvenNUnsupported { n }.into());
        }
        let h = TorusHilbert::new(n)?;
        let sym = weyl_symbol(&h, &cat_propagator(&h))?;
        for ((a, b), z) in sym.indexed_iter() {
            let x = PhasePoint::new(a as f64 / n as f64, b as f64 / n as f64);
            let f: Complex64 = cat_weyl_predicted(&h, &spec, x);
            report.symbols.push(crate::report::SymbolRow {
                n,
                x: x.into(),
                trace: (*z).into(),
                formula: f.into(),
                abs_err: (z - f).norm(),
            });
        }
        report
            .suite_results
            .extend(run_suite(Suite::Weyl, n, cfg.seed)?.iter().map(SuiteResult::from));
    }
    Ok(())
}
