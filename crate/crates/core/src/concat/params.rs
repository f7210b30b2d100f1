use std::fmt::{self, Write as _};
use std::str::FromStr;

use num::{One, Signed, Zero};

use super::ConcatError;
use crate::rational::{ceil_to_usize, floor_to_usize, format_exact, int, parse_rational, sqrt_ceil, Rational};
use crate::reed_solomon::is_prime;

/// Denominator limit for the rational over-approximation of `sqrt(tau_D)`.
pub const SQRT_DENOMINATOR_LIMIT: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeMode {
    /// Insertions and deletions, windows of stride `floor((1 - tau_D') m / 2)`.
    InsDel,
    /// Insertions only, windows of stride `b`.
    Insertions,
}

impl fmt::Display for DecodeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecodeMode::InsDel => "insdel",
            DecodeMode::Insertions => "insertions",
        })
    }
}

impl FromStr for DecodeMode {
    type Err = ConcatError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "insdel" => Ok(DecodeMode::InsDel),
            "insertions" => Ok(DecodeMode::Insertions),
            other => Err(ConcatError::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcatParams {
    pub mode: DecodeMode,
    pub tau_i: Rational,
    pub tau_d: Rational,
    pub tau_d_prime: Rational,
    pub tau_i_prime: Rational,
    /// Outer rate; the message has `ceil(r n)` symbols.
    pub r: Rational,
    pub ell_prime: u64,
    /// List-size bound of the decoding guarantee.
    pub ell: Rational,
    pub n: usize,
    pub m: usize,
    pub p: u64,
    pub k_ins: Option<usize>,
    pub gamma: Option<Rational>,
    pub b: Option<usize>,
    /// Set when `r` was replaced, which voids the list-size guarantee.
    pub rate_override: bool,
}

fn invalid(msg: impl Into<String>) -> ConcatError {
    ConcatError::InvalidParam(msg.into())
}

fn check_shape(n: usize, m: usize, p: u64, ell_prime: u64) -> Result<(), ConcatError> {
    if n == 0 || m == 0 {
        return Err(invalid("n and m must be positive"));
    }
    if ell_prime == 0 {
        return Err(invalid("ell' must be at least 1"));
    }
    if !is_prime(p) {
        return Err(invalid(format!("p = {p} is not prime")));
    }
    if (p as u128) < n as u128 {
        return Err(invalid(format!(
            "need p >= n distinct evaluation points, got p = {p}, n = {n}"
        )));
    }
    Ok(())
}

fn check_rate(r: &Rational, n: usize) -> Result<(), ConcatError> {
    let rn = r * int(n as i64);
    if rn < Rational::one() {
        let min_n = ceil_to_usize(&(Rational::one() / r)).unwrap_or(usize::MAX);
        return Err(ConcatError::RateTooSmall { rn, min_n });
    }
    Ok(())
}

/// Parameters for the insertion/deletion decoder.
pub fn derive_params(
    tau_i: &Rational,
    tau_d: &Rational,
    ell_prime: u64,
    n: usize,
    m: usize,
    p: u64,
) -> Result<ConcatParams, ConcatError> {
    check_shape(n, m, p, ell_prime)?;
    let params = derive_unchecked(tau_i, tau_d, ell_prime, n, m, p)?;
    check_rate(&params.r, n)?;
    Ok(params)
}

fn derive_unchecked(
    tau_i: &Rational,
    tau_d: &Rational,
    ell_prime: u64,
    n: usize,
    m: usize,
    p: u64,
) -> Result<ConcatParams, ConcatError> {
    let one = Rational::one();
    if tau_i.is_negative() {
        return Err(invalid("tau_I must be non-negative"));
    }
    if tau_d.is_negative() || tau_d >= &one {
        return Err(invalid("tau_D must lie in [0, 1)"));
    }
    let tau_d_prime = sqrt_ceil(tau_d, SQRT_DENOMINATOR_LIMIT);
    if tau_d_prime >= one {
        return Err(invalid("tau_D too close to 1 for the rational square root"));
    }
    let keep = &one - &tau_d_prime;
    let tau_i_prime = int(2) * tau_i / &keep + &keep / int(2);
    let lp = int(ell_prime as i64);
    let sq = (&one + &tau_i_prime) * (&one + &tau_i_prime);
    let keep3 = &keep * &keep * &keep;
    let r = &keep3 * &keep / (int(32) * &sq * &lp);
    let ell = int(16) * &sq * &lp / &keep3;
    let params = ConcatParams {
        mode: DecodeMode::InsDel,
        tau_i: tau_i.clone(),
        tau_d: tau_d.clone(),
        tau_d_prime,
        tau_i_prime,
        r,
        ell_prime,
        ell,
        n,
        m,
        p,
        k_ins: None,
        gamma: None,
        b: None,
        rate_override: false,
    };
    if params.stride() == 0 {
        return Err(invalid(format!(
            "window stride floor((1 - tau_D') m / 2) is 0 for m = {m}"
        )));
    }
    Ok(params)
}

/// [`derive_params`] with the outer rate replaced by `rate`.
pub fn derive_params_with_rate(
    tau_i: &Rational,
    tau_d: &Rational,
    ell_prime: u64,
    n: usize,
    m: usize,
    p: u64,
    rate: &Rational,
) -> Result<ConcatParams, ConcatError> {
    check_shape(n, m, p, ell_prime)?;
    derive_unchecked(tau_i, tau_d, ell_prime, n, m, p)?.with_rate_override(rate.clone())
}

/// Parameters for the insertion-only decoder with window
/// divisor `k` and slack `gamma`.
pub fn derive_insertion_params(
    tau_i: &Rational,
    gamma: &Rational,
    k: usize,
    ell_prime: u64,
    n: usize,
    m: usize,
    p: u64,
) -> Result<ConcatParams, ConcatError> {
    check_shape(n, m, p, ell_prime)?;
    let params = derive_insertion_unchecked(tau_i, gamma, k, ell_prime, n, m, p)?;
    check_rate(&params.r, n)?;
    Ok(params)
}

/// [`derive_insertion_params`] with the outer rate replaced by `rate`.
#[allow(clippy::too_many_arguments)]
pub fn derive_insertion_params_with_rate(
    tau_i: &Rational,
    gamma: &Rational,
    k: usize,
    ell_prime: u64,
    n: usize,
    m: usize,
    p: u64,
    rate: &Rational,
) -> Result<ConcatParams, ConcatError> {
    check_shape(n, m, p, ell_prime)?;
    derive_insertion_unchecked(tau_i, gamma, k, ell_prime, n, m, p)?.with_rate_override(rate.clone())
}

fn derive_insertion_unchecked(
    tau_i: &Rational,
    gamma: &Rational,
    k: usize,
    ell_prime: u64,
    n: usize,
    m: usize,
    p: u64,
) -> Result<ConcatParams, ConcatError> {
    let one = Rational::one();
    if tau_i.is_negative() {
        return Err(invalid("tau_I must be non-negative"));
    }
    if !gamma.is_positive() || gamma >= &one {
        return Err(invalid("gamma must lie in (0, 1)"));
    }
    if k < 2 {
        return Err(invalid("window divisor k must be at least 2"));
    }
    let (mr, kr) = (int(m as i64), int(k as i64));
    let b = ceil_to_usize(&((&one + tau_i) * &mr / &kr)).expect("positive stride");
    // tau_I' m >= tau_I m + b, scaled by (1 + gamma)
    let tau_i_prime = (&one + gamma) * (tau_i + int(b as i64) / &mr);
    let lp = int(ell_prime as i64);
    let r = gamma * gamma / (int(8) * &kr * &kr * &lp);
    let ell = int(4) * &kr * &kr * &lp / gamma;
    Ok(ConcatParams {
        mode: DecodeMode::Insertions,
        tau_i: tau_i.clone(),
        tau_d: Rational::zero(),
        tau_d_prime: Rational::zero(),
        tau_i_prime,
        r,
        ell_prime,
        ell,
        n,
        m,
        p,
        k_ins: Some(k),
        gamma: Some(gamma.clone()),
        b: Some(b),
        rate_override: false,
    })
}

impl ConcatParams {
    /// Replaces the outer rate. The decoder still runs, but the list-size
    /// bound `ell` is no longer implied.
    pub fn with_rate_override(mut self, r: Rational) -> Result<Self, ConcatError> {
        if !r.is_positive() || r > Rational::one() {
            return Err(invalid("overridden rate must lie in (0, 1]"));
        }
        check_rate(&r, self.n)?;
        self.r = r;
        self.rate_override = true;
        Ok(self)
    }

    /// Message length `ceil(r n)`, the outer degree bound.
    pub fn k_outer(&self) -> usize {
        ceil_to_usize(&(&self.r * int(self.n as i64))).unwrap_or(1).max(1)
    }

    pub fn total_len(&self) -> usize {
        self.n * self.m
    }

    /// Window stride.
    pub fn stride(&self) -> usize {
        match self.mode {
            DecodeMode::InsDel => {
                floor_to_usize(&((Rational::one() - &self.tau_d_prime) * int(self.m as i64) / int(2))).unwrap_or(0)
            }
            DecodeMode::Insertions => self.b.expect("insertion mode has b"),
        }
    }

    /// Largest window start index `j` from the decoding procedure.
    pub fn max_start_index(&self) -> usize {
        let one = Rational::one();
        let n = int(self.n as i64);
        match self.mode {
            DecodeMode::InsDel => {
                ceil_to_usize(&(int(2) * (&one + &self.tau_i) * n / (&one - &self.tau_d_prime))).expect("finite")
            }
            DecodeMode::Insertions => {
                let b = int(self.stride() as i64);
                floor_to_usize(&((&one + &self.tau_i) * n * int(self.m as i64) / b)).expect("finite")
            }
        }
    }

    /// Largest window span `j'` (in strides) from the decoding procedure.
    pub fn max_span_index(&self) -> usize {
        let one = Rational::one();
        match self.mode {
            DecodeMode::InsDel => {
                ceil_to_usize(&(int(2) * (&one + &self.tau_i_prime) / (&one - &self.tau_d_prime))).expect("finite")
            }
            DecodeMode::Insertions => self.k_ins.expect("insertion mode has k"),
        }
    }

    /// Longest image of a good block: the block plus the most insertions a
    /// good block may carry.
    pub fn good_block_len(&self) -> usize {
        let one = Rational::one();
        let m = int(self.m as i64);
        let extra = match self.mode {
            DecodeMode::InsDel => int(2) * &self.tau_i / (&one - &self.tau_d_prime) * &m,
            DecodeMode::Insertions => &self.tau_i_prime * &m,
        };
        self.m + floor_to_usize(&extra).expect("finite")
    }

    /// Spacing of window boundaries, `ceil(stride / 2)`. A block image then
    /// sits in a window with fewer than `stride` extra symbols.
    pub fn window_grid(&self) -> usize {
        self.stride().div_ceil(2)
    }

    /// Window lengths that can hold a codeword within the inner budgets.
    pub fn window_lengths(&self) -> (usize, usize) {
        let (ins, del) = self.inner_budgets();
        (self.m.saturating_sub(del).max(1), self.m + ins)
    }

    /// Longest window, in grid steps.
    pub fn window_span(&self) -> usize {
        self.window_lengths().1 / self.window_grid()
    }

    /// `(insertions, deletions)` allowed per window in inner decoding.
    pub fn inner_budgets(&self) -> (usize, usize) {
        let m = int(self.m as i64);
        let ins = floor_to_usize(&(&self.tau_i_prime * &m)).expect("finite");
        let del = floor_to_usize(&(&self.tau_d_prime * &m)).expect("finite");
        (ins, del)
    }

    /// `(insertions, deletions)` allowed over the whole word.
    pub fn outer_budgets(&self) -> (usize, usize) {
        let nm = int(self.total_len() as i64);
        (
            floor_to_usize(&(&self.tau_i * &nm)).expect("finite"),
            floor_to_usize(&(&self.tau_d * &nm)).expect("finite"),
        )
    }

    /// Agreement threshold of the outer list recovery.
    pub fn threshold(&self) -> usize {
        let n = int(self.n as i64);
        let t = match self.mode {
            DecodeMode::InsDel => (Rational::one() - &self.tau_d_prime) * n / int(2),
            DecodeMode::Insertions => self.gamma.as_ref().expect("insertion mode has gamma") * n / int(2),
        };
        ceil_to_usize(&t).expect("finite")
    }

    /// Proven cap on `|J|` when every window list has at most `ell'` entries.
    pub fn pair_cap(&self) -> usize {
        let lp = self.ell_prime as usize;
        match self.mode {
            DecodeMode::InsDel => self.max_start_index() * self.max_span_index() * lp,
            DecodeMode::Insertions => self.max_start_index() * self.k_ins.expect("k") * lp,
        }
    }

    /// Admissible received lengths `[lo, hi]`.
    pub fn length_range(&self) -> (usize, usize) {
        let (ins, del) = self.outer_budgets();
        let nm = self.total_len();
        match self.mode {
            DecodeMode::InsDel => (nm - del.min(nm), nm + ins),
            DecodeMode::Insertions => (nm, nm + ins),
        }
    }

    /// Key-value text form, one `key = value` per line.
    pub fn to_text(&self) -> String {
        let opt_int = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        let mut out = String::new();
        let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").expect("string write");
        kv("mode", self.mode.to_string());
        kv("tau_I", format_exact(&self.tau_i));
        kv("tau_D", format_exact(&self.tau_d));
        kv("tau_D_prime", format_exact(&self.tau_d_prime));
        kv("tau_I_prime", format_exact(&self.tau_i_prime));
        kv("r", format_exact(&self.r));
        kv("ell_prime", self.ell_prime.to_string());
        kv("ell", format_exact(&self.ell));
        kv("n", self.n.to_string());
        kv("m", self.m.to_string());
        kv("p", self.p.to_string());
        kv("k_ins", opt_int(self.k_ins));
        kv("gamma", self.gamma.as_ref().map_or("-".to_string(), format_exact));
        kv("b", opt_int(self.b));
        kv("rate_override", self.rate_override.to_string());
        out
    }

    /// Parses [`ConcatParams::to_text`] output and re-derives every dependent
    /// field to reject inconsistent files.
    pub fn parse(text: &str) -> Result<Self, ConcatError> {
        let mut map = std::collections::HashMap::new();
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConcatError::Parse(format!("expected `key = value`, got {line:?}")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| -> Result<&str, ConcatError> {
            map.get(k)
                .map(String::as_str)
                .ok_or_else(|| ConcatError::Parse(format!("missing key {k:?}")))
        };
        let rat = |k: &str| -> Result<Rational, ConcatError> {
            parse_rational(get(k)?).map_err(|e| ConcatError::Parse(format!("{k}: {e}")))
        };
        let uint = |k: &str| -> Result<u64, ConcatError> {
            get(k)?
                .parse::<u64>()
                .map_err(|e| ConcatError::Parse(format!("{k}: {e}")))
        };
        let mode: DecodeMode = get("mode")?.parse()?;
        let (n, m, p, lp) = (uint("n")? as usize, uint("m")? as usize, uint("p")?, uint("ell_prime")?);
        check_shape(n, m, p, lp)?;
        let tau_i = rat("tau_I")?;
        let mut derived = match mode {
            DecodeMode::InsDel => derive_unchecked(&tau_i, &rat("tau_D")?, lp, n, m, p)?,
            DecodeMode::Insertions => {
                derive_insertion_unchecked(&tau_i, &rat("gamma")?, uint("k_ins")? as usize, lp, n, m, p)?
            }
        };
        let overridden: bool = get("rate_override")?
            .parse()
            .map_err(|e| ConcatError::Parse(format!("rate_override: {e}")))?;
        if overridden {
            derived = derived.with_rate_override(rat("r")?)?;
        } else {
            check_rate(&derived.r, n)?;
        }
        if derived.to_text() != ConcatParams::parse_normalized(&map)? {
            return Err(ConcatError::Parse(
                "stored derived fields disagree with the values recomputed from the inputs".into(),
            ));
        }
        Ok(derived)
    }

    fn parse_normalized(map: &std::collections::HashMap<String, String>) -> Result<String, ConcatError> {
        let keys = [
            "mode",
            "tau_I",
            "tau_D",
            "tau_D_prime",
            "tau_I_prime",
            "r",
            "ell_prime",
            "ell",
            "n",
            "m",
            "p",
            "k_ins",
            "gamma",
            "b",
            "rate_override",
        ];
        let rational_keys = ["tau_I", "tau_D", "tau_D_prime", "tau_I_prime", "r", "ell", "gamma"];
        let mut out = String::new();
        for k in keys {
            let v = map
                .get(k)
                .ok_or_else(|| ConcatError::Parse(format!("missing key {k:?}")))?;
            let v = if rational_keys.contains(&k) && v != "-" {
                format_exact(&parse_rational(v).map_err(|e| ConcatError::Parse(format!("{k}: {e}")))?)
            } else {
                v.clone()
            };
            writeln!(out, "{k} = {v}").expect("string write");
        }
        Ok(out)
    }
}
