//! Normalized decoding radii as functions of the normalized distance.

use std::fmt::Write as _;
use std::sync::LazyLock;

use num::{One, Signed, Zero};
use rayon::prelude::*;

use super::BoundError;
use crate::rational::{approximate_f64, int, ratio, to_f64, Rational};

pub const CSV_HEADER: &str = "delta,rho_or_tau_ins,tau_ID,tau_I,tau_D";

/// Rational stand-in for `sqrt(2) - 1`, where the insertion radius at
/// `rho = 0` reaches `1/sqrt(2)`. Added to every sweep as an extra row.
pub static MARKED_DELTA: LazyLock<Rational> =
    LazyLock::new(|| approximate_f64(std::f64::consts::SQRT_2 - 1.0, 1_000_000_000_000));

/// `delta = d/2n`, `rho = t_del/(d/2)`, `tau_ins = t_ins/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusProfile {
    pub delta: Rational,
    pub rho: Rational,
    pub tau_ins: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadiusCurves {
    /// Bound on `(t_ins + t_del)/n` at deletion ratio `rho`.
    pub tau_id: Rational,
    /// Bound on `t_ins/n` at deletion ratio `rho`.
    pub tau_i: Rational,
    /// Bound on `t_del/n` at insertion fraction `tau_ins`.
    pub tau_d: f64,
}

fn tau_i_exact(delta: &Rational, rho: &Rational) -> Rational {
    let one = Rational::one();
    (&one - rho) * delta * (&one - rho * delta) / (&one - delta)
}

fn tau_id_exact(delta: &Rational, rho: &Rational) -> Rational {
    let one = Rational::one();
    let keep = &one - rho;
    delta + &keep * &keep * delta * delta / (&one - delta)
}

fn tau_d_real(delta: f64, tau_ins: f64) -> f64 {
    0.5 * (1.0 + delta - ((1.0 - delta) * (1.0 - delta + 4.0 * tau_ins)).sqrt())
}

pub fn radius_curves(profile: &RadiusProfile) -> Result<RadiusCurves, BoundError> {
    let (zero, one) = (Rational::zero(), Rational::one());
    let RadiusProfile { delta, rho, tau_ins } = profile;
    if delta < &zero || delta >= &one {
        return Err(BoundError::InvalidRange(format!(
            "delta must lie in [0, 1), got {delta}"
        )));
    }
    if rho < &zero || rho >= &one {
        return Err(BoundError::InvalidRange(format!("rho must lie in [0, 1), got {rho}")));
    }
    if tau_ins.is_negative() {
        return Err(BoundError::InvalidRange("tau_ins must be non-negative".into()));
    }
    Ok(RadiusCurves {
        tau_id: tau_id_exact(delta, rho),
        tau_i: tau_i_exact(delta, rho),
        tau_d: tau_d_real(to_f64(delta), to_f64(tau_ins)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// Total radius against delta, one curve per rho.
    InsDel = 1,
    /// Insertion radius against delta, one curve per rho.
    Insertions = 2,
    /// Deletion radius against delta, one curve per tau_ins.
    Deletions = 3,
}

impl Figure {
    pub fn from_number(n: u8) -> Option<Figure> {
        match n {
            1 => Some(Figure::InsDel),
            2 => Some(Figure::Insertions),
            3 => Some(Figure::Deletions),
            _ => None,
        }
    }

    pub fn default_params(self) -> Vec<Rational> {
        match self {
            Figure::InsDel | Figure::Insertions => {
                vec![int(0), ratio(1, 4), ratio(1, 2), ratio(3, 4)]
            }
            Figure::Deletions => vec![int(0), ratio(1, 10), ratio(1, 2), int(1), int(2)],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub delta: Rational,
    /// `rho` for figures 1-2, `tau_ins` for figure 3.
    pub param: Rational,
    pub tau_id: f64,
    pub tau_i: f64,
    pub tau_d: f64,
}

fn fmt10(x: f64) -> String {
    let s = format!("{x:.10}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

impl CurveRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            fmt10(to_f64(&self.delta)),
            fmt10(to_f64(&self.param)),
            fmt10(self.tau_id),
            fmt10(self.tau_i),
            fmt10(self.tau_d)
        )
    }
}

fn delta_grid(step: &Rational) -> Vec<Rational> {
    let mut grid = Vec::new();
    let mut delta = Rational::zero();
    while delta < Rational::one() {
        grid.push(delta.clone());
        delta += step;
    }
    grid.push(MARKED_DELTA.clone());
    grid.sort();
    grid.dedup();
    grid
}

fn row(figure: Figure, delta: &Rational, param: &Rational) -> CurveRow {
    match figure {
        Figure::InsDel | Figure::Insertions => {
            let tau_i = tau_i_exact(delta, param);
            let tau_id = tau_id_exact(delta, param);
            // at the insertion boundary, the deletion radius is rho * delta
            let tau_d = tau_d_real(to_f64(delta), to_f64(&tau_i));
            CurveRow {
                delta: delta.clone(),
                param: param.clone(),
                tau_id: to_f64(&tau_id),
                tau_i: to_f64(&tau_i),
                tau_d,
            }
        }
        Figure::Deletions => {
            let tau_d = tau_d_real(to_f64(delta), to_f64(param));
            CurveRow {
                delta: delta.clone(),
                param: param.clone(),
                tau_id: to_f64(param) + tau_d,
                tau_i: to_f64(param),
                tau_d,
            }
        }
    }
}

/// Sweep rows grouped by curve parameter, delta ascending within each group.
pub fn figure_rows(figure: Figure, step: &Rational, params: &[Rational]) -> Result<Vec<CurveRow>, BoundError> {
    if !step.is_positive() || step >= &Rational::one() {
        return Err(BoundError::InvalidRange("step must lie in (0, 1)".into()));
    }
    for p in params {
        let ok = match figure {
            Figure::InsDel | Figure::Insertions => !p.is_negative() && p < &Rational::one(),
            Figure::Deletions => !p.is_negative(),
        };
        if !ok {
            return Err(BoundError::InvalidRange(format!("curve parameter {p} out of range")));
        }
    }
    let grid = delta_grid(step);
    Ok(params
        .par_iter()
        .flat_map_iter(|p| grid.iter().map(move |d| row(figure, d, p)))
        .collect())
}

pub fn figure_csv(figure: Figure, step: &Rational, params: &[Rational]) -> Result<String, BoundError> {
    let rows = figure_rows(figure, step, params)?;
    let mut out = String::with_capacity(rows.len() * 64);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{}", r.to_csv()).expect("string write");
    }
    Ok(out)
}
