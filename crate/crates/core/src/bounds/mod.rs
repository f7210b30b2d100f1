//! Exact-rational list-size and code-size bounds in the Levenshtein metric.
//!
//! Every feasibility test is an exact comparison of rationals; nothing here
//! touches floating point except the reported real-valued radii.

mod appendix;
mod curves;

pub use appendix::{appendix_report, wz_u_value, AppendixPair, AppendixReport, EditWitness};
pub use curves::{
    figure_csv, figure_rows, radius_curves, CurveRow, Figure, RadiusCurves, RadiusProfile, CSV_HEADER, MARKED_DELTA,
};

use num::{BigInt, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::metric::Word;
use crate::rational::{format_decimal, format_exact, int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundError {
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("inconsistent witness: {0}")]
    InconsistentWitness(String),
}

fn invalid(msg: impl Into<String>) -> BoundError {
    BoundError::InvalidRange(msg.into())
}

/// Outcome of a bound evaluation. `list_bound` is present iff `feasible`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub feasible: bool,
    pub list_bound: Option<Rational>,
    pub list_bound_floor: Option<BigInt>,
}

impl BoundResult {
    fn infeasible() -> Self {
        BoundResult {
            feasible: false,
            list_bound: None,
            list_bound_floor: None,
        }
    }

    fn from_fraction(num: Rational, den: Rational) -> Self {
        if den.is_positive() {
            let bound = num / den;
            let floor = bound.floor().to_integer();
            BoundResult {
                feasible: true,
                list_bound: Some(bound),
                list_bound_floor: Some(floor),
            }
        } else {
            BoundResult::infeasible()
        }
    }

    pub fn floor_u64(&self) -> Option<u64> {
        use num::ToPrimitive;
        self.list_bound_floor.as_ref().and_then(|f| f.to_u64())
    }

    /// One-line human summary, e.g. `feasible, bound 26/3 (~8.666667)` or
    /// `feasible, bound 6`.
    pub fn describe(&self) -> String {
        match &self.list_bound {
            Some(b) if b.is_integer() => format!("feasible, bound {}", format_exact(b)),
            Some(b) => format!("feasible, bound {} (~{})", format_exact(b), format_decimal(b, 6)),
            None => "infeasible".to_string(),
        }
    }
}

impl Serialize for BoundResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BoundResult", 4)?;
        st.serialize_field("feasible", &self.feasible)?;
        st.serialize_field("list_bound", &self.list_bound.as_ref().map(format_exact))?;
        st.serialize_field(
            "list_bound_decimal",
            &self.list_bound.as_ref().map(|b| format_decimal(b, 10)),
        )?;
        st.serialize_field(
            "list_bound_floor",
            &self.list_bound_floor.as_ref().map(|f| f.to_string()),
        )?;
        st.end()
    }
}

/// Parameters of a list-size query: block length, minimum distance, budgets,
/// and optionally the received length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundQuery {
    pub n: u64,
    pub d: u64,
    pub t_ins: u64,
    pub t_del: u64,
    pub received_len: Option<u64>,
}

impl BoundQuery {
    pub fn lemma1(&self) -> Result<BoundResult, BoundError> {
        if let Some(len) = self.received_len {
            if len + self.t_del != self.n + self.t_ins {
                return Err(invalid(format!(
                    "received length {len} must equal n + t_ins - t_del = {}",
                    (self.n + self.t_ins) as i128 - self.t_del as i128
                )));
            }
        }
        lemma1_bound(self.n, self.d, self.t_ins, self.t_del)
    }

    pub fn johnson(&self) -> Result<BoundResult, BoundError> {
        if let Some(len) = self.received_len {
            if len + self.t_del < self.n || len > self.n + self.t_ins {
                return Err(invalid(format!("received length {len} outside [n - t_del, n + t_ins]")));
            }
        }
        johnson_bound(self.n, self.d, self.t_ins, self.t_del)
    }
}

fn check_common(n: u64, d: u64, t_del: u64) -> Result<(), BoundError> {
    if n == 0 {
        return Err(invalid("block length must be positive"));
    }
    if d > 2 * n {
        return Err(invalid(format!("distance {d} exceeds 2n = {}", 2 * n)));
    }
    if t_del > n {
        return Err(invalid(format!("t_del = {t_del} exceeds n = {n}")));
    }
    Ok(())
}

/// List-size bound when exactly `t_ins` insertions and `t_del` deletions
/// turn a codeword into the received word of length `N = n + t_ins - t_del`.
pub fn lemma1_bound(n: u64, d: u64, t_ins: u64, t_del: u64) -> Result<BoundResult, BoundError> {
    check_common(n, d, t_del)?;
    let len = n + t_ins - t_del;
    if len == 0 {
        return Err(invalid("received length n + t_ins - t_del must be at least 1"));
    }
    let (len, n, half_d) = (int(len as i64), int(n as i64), int(d as i64) / int(2));
    let (t_ins, t_del) = (int(t_ins as i64), int(t_del as i64));
    let slack = &half_d - &t_del;
    // d/2 > t_del + t_ins (n - t_del) / N, multiplied through by N > 0
    let num = &len * &slack;
    let den = &num - &t_ins * (&n - &t_del);
    Ok(BoundResult::from_fraction(num, den))
}

/// List-size bound for at most `t_ins` insertions and at most `t_del`
/// deletions, valid for every received length in `[n - t_del, n + t_ins]`.
///
/// Feasible iff `t_ins < (d/2 - t_del)(n - t_del) / (n - d/2)`. When `d = 2n`
/// the right side is read as the limit, so every `t_ins` is feasible as long
/// as `t_del < d/2`.
pub fn johnson_bound(n: u64, d: u64, t_ins: u64, t_del: u64) -> Result<BoundResult, BoundError> {
    check_common(n, d, t_del)?;
    let (nr, half_d) = (int(n as i64), int(d as i64) / int(2));
    let (ti, td) = (int(t_ins as i64), int(t_del as i64));
    let excess = &nr - &half_d;
    let feasible = if excess.is_zero() {
        td < half_d
    } else {
        ti < (&half_d - &td) * (&nr - &td) / &excess
    };
    if !feasible {
        return Ok(BoundResult::infeasible());
    }
    let num = &half_d * (&nr + &ti);
    let den = (&half_d - &td) * (&nr - &td) - &excess * &ti;
    Ok(BoundResult::from_fraction(num, den))
}

/// Equal insertion and deletion radius `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct EqualRadius {
    pub n: u64,
    pub d: u64,
    /// `n - sqrt(n (n - d/2))`; integer radii strictly below it are feasible.
    pub t_equal: f64,
}

impl EqualRadius {
    /// Bound `(d/2)(n+t) / ((d/2 - 2t) n + t^2)` at integer radius `t`.
    pub fn bound_at(&self, t: u64) -> Result<BoundResult, BoundError> {
        if t >= self.n {
            return Err(invalid(format!("radius {t} must be below n = {}", self.n)));
        }
        let (n, t) = (int(self.n as i64), int(t as i64));
        let half_d = int(self.d as i64) / int(2);
        // (n - t)^2 > n (n - d/2), exactly
        let feasible = (&n - &t) * (&n - &t) > &n * (&n - &half_d);
        if !feasible {
            return Ok(BoundResult::infeasible());
        }
        let num = &half_d * (&n + &t);
        let den = (&half_d - int(2) * &t) * &n + &t * &t;
        Ok(BoundResult::from_fraction(num, den))
    }

    /// Largest feasible integer radius, if any.
    pub fn max_radius(&self) -> Option<u64> {
        (0..self.n)
            .rev()
            .find(|&t| self.bound_at(t).map(|b| b.feasible).unwrap_or(false))
    }
}

pub fn equal_radius_bound(n: u64, d: u64) -> Result<EqualRadius, BoundError> {
    check_common(n, d, 0)?;
    let nf = n as f64;
    let t_equal = nf - (nf * (nf - d as f64 / 2.0)).sqrt();
    Ok(EqualRadius { n, d, t_equal })
}

/// Normalized (fractional) form of the Johnson-type bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummaryBound {
    /// Smallest normalized distance that admits the radii.
    pub delta_id: Rational,
    /// `delta - delta_id`, present when positive.
    pub gamma: Option<Rational>,
    pub result: BoundResult,
}

pub fn summary_bound(tau_ins: &Rational, tau_del: &Rational, delta: &Rational) -> Result<SummaryBound, BoundError> {
    let (zero, one) = (int(0), int(1));
    if tau_ins < &zero {
        return Err(invalid("tau_ins must be non-negative"));
    }
    if tau_del < &zero || tau_del >= &one {
        return Err(invalid("tau_del must lie in [0, 1)"));
    }
    if delta < &zero || delta > &one {
        return Err(invalid("delta must lie in [0, 1]"));
    }
    let spread = tau_ins + &one - tau_del;
    let keep = &one - tau_del;
    let delta_id = &one - &keep * &keep / &spread;
    let gamma = delta - &delta_id;
    if !gamma.is_positive() {
        return Ok(SummaryBound {
            delta_id,
            gamma: None,
            result: BoundResult::infeasible(),
        });
    }
    let num = delta * (tau_ins + &one);
    let den = &gamma * &spread;
    Ok(SummaryBound {
        delta_id,
        gamma: Some(gamma),
        result: BoundResult::from_fraction(num, den),
    })
}

/// Code-size bound given a common supersequence of length `received_len`.
pub fn plotkin_bound(n: u64, d: u64, received_len: u64) -> Result<BoundResult, BoundError> {
    check_common(n, d, 0)?;
    if received_len < n {
        return Err(invalid(format!("supersequence length {received_len} below n = {n}")));
    }
    let (n, d, len) = (int(n as i64), int(d as i64), int(received_len as i64));
    // d/(2n) > 1 - n/N  <=>  N d - 2 (N - n) n > 0
    let num = &len * &d;
    let den = &num - int(2) * (&len - &n) * &n;
    Ok(BoundResult::from_fraction(num, den))
}

/// `0 1 .. q-1` repeated `n` times; every word of `[q]^n` is a subsequence.
pub fn canonical_supersequence(q: u32, n: usize) -> Word {
    let symbols = (0..n).flat_map(|_| 0..q).collect();
    Word::new(symbols, q).expect("symbols below q")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::is_subsequence;
    use crate::rational::{parse_rational, ratio};

    #[test]
    fn fixed_length_examples() {
        let b = lemma1_bound(10, 12, 10, 0).unwrap();
        assert!(b.feasible);
        assert_eq!(b.list_bound, Some(int(6)));
        let b = lemma1_bound(10, 12, 0, 5).unwrap();
        assert_eq!(b.list_bound, Some(int(1)));
        assert!(!lemma1_bound(10, 12, 20, 0).unwrap().feasible);
    }

    #[test]
    fn fixed_length_rejects_bad_ranges() {
        assert!(lemma1_bound(10, 12, 0, 11).is_err());
        assert!(lemma1_bound(10, 21, 0, 0).is_err());
        assert!(lemma1_bound(1, 2, 0, 1).is_err());
        assert!(lemma1_bound(0, 0, 0, 0).is_err());
    }

    #[test]
    fn johnson_examples() {
        let b = johnson_bound(10, 12, 10, 0).unwrap();
        assert_eq!(b.list_bound, Some(int(6)));
        assert_eq!(b.floor_u64(), Some(6));
        assert!(!johnson_bound(10, 12, 0, 6).unwrap().feasible);
        assert!(!johnson_bound(10, 12, 0, 7).unwrap().feasible);
    }

    #[test]
    fn johnson_full_distance_corner() {
        // d = 2n: any insertion budget is fine while t_del < n
        let b = johnson_bound(5, 10, 1000, 4).unwrap();
        assert!(b.feasible);
        assert_eq!(b.list_bound, Some(ratio(5 * 1005, 1)));
        assert!(!johnson_bound(5, 10, 0, 5).unwrap().feasible);
    }

    #[test]
    fn johnson_zero_insertions_is_unique_decoding() {
        for n in 1..8u64 {
            for d in (2..=2 * n).step_by(2) {
                let b = johnson_bound(n, d, 0, 0).unwrap();
                assert_eq!(b.list_bound, Some(int(1)), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn johnson_query_checks_received_length() {
        let q = BoundQuery {
            n: 10,
            d: 12,
            t_ins: 2,
            t_del: 1,
            received_len: Some(13),
        };
        assert!(q.johnson().is_err());
        let q = BoundQuery {
            received_len: Some(11),
            ..q
        };
        assert!(q.johnson().unwrap().feasible);
        assert!(q.lemma1().unwrap().feasible);
        let q = BoundQuery {
            received_len: Some(10),
            ..q
        };
        assert!(q.lemma1().is_err());
    }

    #[test]
    fn equal_radius_examples() {
        let e = equal_radius_bound(10, 12).unwrap();
        assert!((e.t_equal - (10.0 - 40f64.sqrt())).abs() < 1e-12);
        let b = e.bound_at(3).unwrap();
        assert_eq!(b.list_bound, Some(ratio(26, 3)));
        assert!(b.list_bound.unwrap() <= int(120));
        assert!(!e.bound_at(4).unwrap().feasible);
        assert_eq!(e.max_radius(), Some(3));
        assert_eq!(equal_radius_bound(7, 14).unwrap().t_equal, 7.0);
    }

    #[test]
    fn equal_radius_stays_below_nd() {
        for n in 1..30u64 {
            for d in (0..=2 * n).step_by(2) {
                let e = equal_radius_bound(n, d).unwrap();
                for t in 0..n {
                    let b = e.bound_at(t).unwrap();
                    let tf = t as f64;
                    if tf < e.t_equal - 1e-9 {
                        assert!(b.feasible, "n={n} d={d} t={t}");
                    } else if tf > e.t_equal + 1e-9 {
                        assert!(!b.feasible, "n={n} d={d} t={t}");
                    }
                    if let Some(v) = b.list_bound {
                        assert!(v <= int((n * d) as i64), "n={n} d={d} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn summary_examples() {
        let s = summary_bound(&int(1), &int(0), &ratio(3, 5)).unwrap();
        assert_eq!(s.delta_id, ratio(1, 2));
        assert_eq!(s.gamma, Some(ratio(1, 10)));
        assert_eq!(s.result.list_bound, Some(int(6)));
        let s = summary_bound(&int(1), &int(0), &ratio(1, 2)).unwrap();
        assert!(!s.result.feasible);
        assert!(summary_bound(&int(0), &int(1), &int(1)).is_err());
    }

    #[test]
    fn summary_delta_id_recomputed_independently() {
        // 1 - 0.96^2 / 1.16 = 1 - 0.9216/1.16 = (1.16 - 0.9216)/1.16 = 0.2384/1.16
        let tau_i = parse_rational("0.2").unwrap();
        let tau_d = parse_rational("0.04").unwrap();
        let s = summary_bound(&tau_i, &tau_d, &int(1)).unwrap();
        assert_eq!(s.delta_id, ratio(2384, 11600));
        assert!((crate::rational::to_f64(&s.delta_id) - 0.205517).abs() < 1e-6);
    }

    #[test]
    fn plotkin_examples() {
        let b = plotkin_bound(4, 6, 8).unwrap();
        assert_eq!(b.list_bound, Some(int(3)));
        assert_eq!(plotkin_bound(5, 4, 5).unwrap().list_bound, Some(int(1)));
        assert!(!plotkin_bound(5, 0, 5).unwrap().feasible);
        assert!(!plotkin_bound(4, 4, 8).unwrap().feasible);
        assert!(plotkin_bound(4, 4, 3).is_err());
    }

    #[test]
    fn supersequence_contains_everything() {
        assert_eq!(canonical_supersequence(2, 3).to_string(), "010101");
        for q in 2..=3u32 {
            for n in 1..=6usize {
                let sup = canonical_supersequence(q, n);
                assert_eq!(sup.len(), q as usize * n);
                for idx in 0..(q as u64).pow(n as u32) {
                    let w = Word::from_index(idx, n, q).unwrap();
                    assert!(is_subsequence(&w, &sup).unwrap());
                }
            }
        }
    }
}
