//! θ-grid sweeps over a braid closure and their CSV form.

use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::braid::{parse_braid, BraidError, BraidWord};
use crate::jones::InvariantValues;
use crate::nmr::{EvqcPrecision, EvqcSimulator, NmrError};
use crate::state_sum::{bracket_state_sum, StateSumError};
use crate::tl_rep::{ReprError, ReprParams, Representation};

pub const PRESETS: [(&str, &str); 3] = [
    ("trefoil", "s1^3"),
    ("figure8", "s1 s2^-1 s1 s2^-1"),
    ("borromean", "s1 s2^-1 s1 s2^-1 s1 s2^-1"),
];

pub const CSV_HEADER: &str = "theta_deg,theta_rad,A_re,A_im,delta,trace_re,trace_im,trace_nmr_re,trace_nmr_im,\
bracket_re,bracket_im,oracle_re,oracle_im,f_re,f_im,t_re,t_im,jones_re,jones_im,eq9_bound";

pub const DEFAULT_ORACLE_TOLERANCE: f64 = 1e-9;

/// Most grid points accepted in one sweep.
pub const MAX_GRID_POINTS: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("unknown preset {0:?}; valid presets are trefoil, figure8, borromean")]
    UnknownPreset(String),
    #[error("θ = {theta_deg}° ({theta_rad} rad) is not admissible")]
    Inadmissible { theta_deg: f64, theta_rad: f64 },
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error(transparent)]
    Nmr(#[from] NmrError),
    #[error(transparent)]
    StateSum(#[from] StateSumError),
}

pub fn preset(name: &str) -> Result<BraidWord, SweepError> {
    let (_, word) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| SweepError::UnknownPreset(name.to_string()))?;
    Ok(parse_braid(word, 3)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub theta_deg: f64,
    pub theta_rad: f64,
    pub a: Complex64,
    pub delta: f64,
    pub trace_exact: Complex64,
    pub trace_nmr: Complex64,
    pub bracket: Complex64,
    pub bracket_oracle: Option<Complex64>,
    pub f: Complex64,
    pub t: Complex64,
    pub jones: Complex64,
    /// Hard bound on |trace_exact − trace_nmr| for the record's noise level.
    pub eq9_bound: f64,
}

/// `min, min + step, …` up to `max` inclusive, in degrees.
pub fn degree_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, SweepError> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return Err(SweepError::Grid("bounds and step must be finite".into()));
    }
    if step <= 0.0 {
        return Err(SweepError::Grid(format!("step {step} must be positive")));
    }
    if max < min {
        return Err(SweepError::Grid(format!("max {max} is below min {min}")));
    }
    let span = (max - min) / step;
    // Tolerate rounding so that 0..30 step 1 has 31 points.
    let n = (span + 1e-9).floor();
    if n >= MAX_GRID_POINTS as f64 {
        return Err(SweepError::Grid(format!("more than {MAX_GRID_POINTS} points")));
    }
    Ok((0..=n as usize).map(|k| min + k as f64 * step).collect())
}

/// Evaluates `b` at every grid angle (degrees). Grid point k is measured
/// with seed `prec.seed() + k`, so the output depends only on the inputs.
pub fn run_sweep(
    b: &BraidWord,
    grid_deg: &[f64],
    prec: &EvqcPrecision,
    with_oracle: bool,
) -> Result<Vec<SweepRecord>, SweepError> {
    let params: Vec<ReprParams> = grid_deg
        .iter()
        .map(|&deg| {
            let rad = deg.to_radians();
            ReprParams::new(rad).map_err(|_| SweepError::Inadmissible {
                theta_deg: deg,
                theta_rad: rad,
            })
        })
        .collect::<Result<_, _>>()?;

    let mut records = grid_deg
        .par_iter()
        .zip(params.par_iter())
        .enumerate()
        .map(|(k, (&deg, p))| {
            let prec = prec.with_seed(prec.seed().wrapping_add(k as u64));
            evaluate_point(b, deg, p, &prec, with_oracle)
        })
        .collect::<Result<Vec<_>, _>>()?;
    records.sort_by(|x, y| x.theta_rad.total_cmp(&y.theta_rad));
    Ok(records)
}

fn evaluate_point(
    b: &BraidWord,
    theta_deg: f64,
    params: &ReprParams,
    prec: &EvqcPrecision,
    with_oracle: bool,
) -> Result<SweepRecord, SweepError> {
    let rep = Representation::new(*params);
    let u = rep.word(b)?;
    let values = InvariantValues::from_trace(u.trace(), b.exponent_sum(), params);
    let mut sim = EvqcSimulator::new(*prec);
    let trace_nmr = sim.estimate_trace(&u)?;
    let eq9_bound = sim.trace_error_bound(u.dim())?;
    let bracket_oracle = if with_oracle {
        Some(bracket_state_sum(b, params.a())?)
    } else {
        None
    };
    Ok(SweepRecord {
        theta_deg,
        theta_rad: params.theta(),
        a: params.a(),
        delta: params.delta(),
        trace_exact: values.trace,
        trace_nmr,
        bracket: values.bracket,
        bracket_oracle,
        f: values.f,
        t: values.t,
        jones: values.jones,
        eq9_bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ViolationKind {
    /// |bracket − oracle| above the tolerance.
    Oracle { diff: f64 },
    /// |trace_exact − trace_nmr| above the record's bound.
    Bound { diff: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub theta_deg: f64,
    pub kind: ViolationKind,
}

/// Oracle disagreements beyond `oracle_tolerance`, and trace estimates
/// outside their bound (checked only when the bound is positive, i.e. ε > 0).
pub fn find_violations(records: &[SweepRecord], oracle_tolerance: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for r in records {
        if let Some(oracle) = r.bracket_oracle {
            let diff = (r.bracket - oracle).norm();
            if diff.is_nan() || diff > oracle_tolerance {
                out.push(Violation {
                    theta_deg: r.theta_deg,
                    kind: ViolationKind::Oracle { diff },
                });
            }
        }
        if r.eq9_bound > 0.0 {
            let diff = (r.trace_exact - r.trace_nmr).norm();
            if diff.is_nan() || diff > r.eq9_bound {
                out.push(Violation {
                    theta_deg: r.theta_deg,
                    kind: ViolationKind::Bound { diff },
                });
            }
        }
    }
    out
}

/// Twelve significant digits; negative zero prints as zero.
fn num(x: f64) -> String {
    format!("{:.11e}", x + 0.0)
}

pub fn emit_csv<W: Write>(records: &[SweepRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let (oracle_re, oracle_im) = match r.bracket_oracle {
            Some(z) => (num(z.re), num(z.im)),
            None => (String::new(), String::new()),
        };
        let row = [
            num(r.theta_deg),
            num(r.theta_rad),
            num(r.a.re),
            num(r.a.im),
            num(r.delta),
            num(r.trace_exact.re),
            num(r.trace_exact.im),
            num(r.trace_nmr.re),
            num(r.trace_nmr.im),
            num(r.bracket.re),
            num(r.bracket.im),
            oracle_re,
            oracle_im,
            num(r.f.re),
            num(r.f.im),
            num(r.t.re),
            num(r.t.im),
            num(r.jones.re),
            num(r.jones.im),
            num(r.eq9_bound),
        ];
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_grid() -> Vec<f64> {
        degree_grid(0.0, 30.0, 1.0).unwrap()
    }

    #[test]
    fn presets() {
        let t = preset("trefoil").unwrap();
        assert_eq!((t.len(), t.exponent_sum()), (3, 3));
        let f = preset("figure8").unwrap();
        assert_eq!((f.len(), f.exponent_sum()), (4, 0));
        let b = preset("borromean").unwrap();
        assert_eq!((b.len(), b.exponent_sum()), (6, 0));
        let err = preset("unknot").unwrap_err().to_string();
        for name in ["trefoil", "figure8", "borromean"] {
            assert!(err.contains(name));
        }
    }

    #[test]
    fn grid_shapes() {
        let g = default_grid();
        assert_eq!(g.len(), 31);
        assert_eq!((g[0], g[30]), (0.0, 30.0));
        assert_eq!(degree_grid(5.0, 5.0, 1.0).unwrap(), vec![5.0]);
        assert_eq!(degree_grid(0.0, 1.0, 0.1).unwrap().len(), 11);
        assert!(degree_grid(0.0, 1.0, 0.0).is_err());
        assert!(degree_grid(1.0, 0.0, 1.0).is_err());
        assert!(degree_grid(0.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn trefoil_sweep_matches_oracle() {
        let b = preset("trefoil").unwrap();
        let records = run_sweep(&b, &default_grid(), &EvqcPrecision::exact(), true).unwrap();
        assert_eq!(records.len(), 31);
        for r in &records {
            assert!((r.bracket - r.bracket_oracle.unwrap()).norm() <= 1e-9);
            assert!((r.trace_exact - r.trace_nmr).norm() <= 1e-10);
            assert_eq!(r.eq9_bound, 0.0);
        }
        assert!(find_violations(&records, DEFAULT_ORACLE_TOLERANCE).is_empty());
        assert_eq!(find_violations(&records, -1.0).len(), 31);
    }

    #[test]
    fn identity_and_figure_eight_at_zero() {
        let id = BraidWord::identity(3).unwrap();
        let r = run_sweep(&id, &[0.0], &EvqcPrecision::exact(), false).unwrap()[0];
        assert!((r.trace_exact - 2.0).norm() < 1e-12);
        assert!((r.bracket - 4.0).norm() < 1e-12);
        assert_eq!(r.bracket_oracle, None);

        let f8 = preset("figure8").unwrap();
        let r = run_sweep(&f8, &[0.0], &EvqcPrecision::exact(), false).unwrap()[0];
        assert!((r.jones - r.bracket).norm() < 1e-12);
    }

    #[test]
    fn inadmissible_angle_is_reported() {
        let b = preset("trefoil").unwrap();
        match run_sweep(&b, &[10.0, 40.0], &EvqcPrecision::exact(), false) {
            Err(SweepError::Inadmissible { theta_deg, .. }) => assert_eq!(theta_deg, 40.0),
            other => panic!("expected inadmissible error, got {other:?}"),
        }
    }

    #[test]
    fn records_are_sorted_and_deterministic() {
        let b = preset("borromean").unwrap();
        let prec = EvqcPrecision::new(1e-2, 1.0, 99).unwrap();
        let grid: Vec<f64> = (0..=30).rev().map(f64::from).collect();
        let r1 = run_sweep(&b, &grid, &prec, false).unwrap();
        let r2 = run_sweep(&b, &grid, &prec, false).unwrap();
        assert_eq!(r1, r2);
        assert!(r1.windows(2).all(|w| w[0].theta_rad < w[1].theta_rad));
    }

    #[test]
    fn noisy_sweeps_respect_their_bound() {
        let b = preset("figure8").unwrap();
        let grid = default_grid();
        for seed in 0..100 {
            let prec = EvqcPrecision::new(1e-2, 1.0, seed * 31).unwrap();
            let records = run_sweep(&b, &grid, &prec, false).unwrap();
            assert!(find_violations(&records, DEFAULT_ORACLE_TOLERANCE).is_empty());
            assert!(records.iter().all(|r| r.eq9_bound > 0.0));
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        emit_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));

        let b = preset("trefoil").unwrap();
        let records = run_sweep(&b, &default_grid(), &EvqcPrecision::exact(), true).unwrap();
        let mut buf = Vec::new();
        emit_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 32);
        assert_eq!(CSV_HEADER.split(',').count(), 20);
        for line in &lines[1..] {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 20);
            for f in fields {
                let mantissa = f.split('e').next().unwrap().trim_start_matches('-');
                assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 12, "{f}");
                f.parse::<f64>().unwrap();
            }
        }
        assert!(lines[1].starts_with("0.00000000000e0,0.00000000000e0,1.00000000000e0,"));
    }
}
