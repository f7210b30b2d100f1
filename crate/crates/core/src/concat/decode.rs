use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{check_inner, concat_encode, ConcatError, ConcatParams, DecodeMode, Message};
use crate::inner::InnerCode;
use crate::metric::{in_insdel_ball, MetricError, Word};
use crate::reed_solomon::{brute_force_list_recover, sudan_list_recover, FieldError, PairSet};

/// Largest `p^k` searched exhaustively when Sudan's condition fails.
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodeOptions {
    pub brute_force_cap: u64,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        DecodeOptions {
            brute_force_cap: DEFAULT_BRUTE_FORCE_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OuterRecovery {
    Sudan,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeDiagnostics {
    /// Distinct windows decoded.
    pub windows: usize,
    /// `|J|`.
    pub pairs: usize,
    /// Largest inner list seen in any window.
    pub max_window_list: usize,
    /// Polynomials returned by outer recovery, before the final filter.
    pub outer_list: usize,
    pub recovery: OuterRecovery,
    /// Whether `threshold^2 > 2 k |J|`.
    pub regime_ok: bool,
    pub pair_cap: usize,
    pub threshold: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutput {
    /// Sorted by message index.
    pub messages: Vec<Message>,
    pub diagnostics: DecodeDiagnostics,
}

/// Half-open windows `[g j, g (j + j'))` on the grid `g = ceil(stride / 2)`,
/// clipped to a word of length `len`, keeping only lengths that can hold a
/// codeword within the inner budgets. Sorted and deduplicated.
pub fn windows(params: &ConcatParams, len: usize) -> Vec<(usize, usize)> {
    let g = params.window_grid();
    let (shortest, longest) = params.window_lengths();
    let mut out = BTreeSet::new();
    for start in (0..len).step_by(g) {
        for span in 1..=params.window_span() {
            let end = (start + g * span).min(len);
            if (shortest..=longest).contains(&(end - start)) {
                out.insert((start, end));
            }
        }
    }
    out.into_iter().collect()
}

/// Dispatches on `params.mode`.
pub fn list_decode(
    params: &ConcatParams,
    inner: &InnerCode,
    v: &Word,
    opts: &DecodeOptions,
) -> Result<DecodeOutput, ConcatError> {
    match params.mode {
        DecodeMode::InsDel => list_decode_insdel(params, inner, v, opts),
        DecodeMode::Insertions => list_decode_insertions(params, inner, v, opts),
    }
}

/// Every message whose encoding reaches `v` within
/// `floor(tau_I n m)` insertions and `floor(tau_D n m)` deletions.
pub fn list_decode_insdel(
    params: &ConcatParams,
    inner: &InnerCode,
    v: &Word,
    opts: &DecodeOptions,
) -> Result<DecodeOutput, ConcatError> {
    expect_mode(params, DecodeMode::InsDel)?;
    decode(params, inner, v, opts)
}

/// Every message whose encoding reaches `v` within `floor(tau_I n m)`
/// insertions.
pub fn list_decode_insertions(
    params: &ConcatParams,
    inner: &InnerCode,
    v: &Word,
    opts: &DecodeOptions,
) -> Result<DecodeOutput, ConcatError> {
    expect_mode(params, DecodeMode::Insertions)?;
    decode(params, inner, v, opts)
}

fn expect_mode(params: &ConcatParams, expected: DecodeMode) -> Result<(), ConcatError> {
    if params.mode != expected {
        return Err(ConcatError::WrongMode {
            expected: params.mode,
            found: expected,
        });
    }
    Ok(())
}

fn decode(
    params: &ConcatParams,
    inner: &InnerCode,
    v: &Word,
    opts: &DecodeOptions,
) -> Result<DecodeOutput, ConcatError> {
    check_inner(params, inner)?;
    if v.alphabet_size() != inner.q() {
        return Err(MetricError::AlphabetMismatch(v.alphabet_size(), inner.q()).into());
    }
    let (lo, hi) = params.length_range();
    if v.len() < lo || v.len() > hi {
        return Err(ConcatError::LengthOutOfRange {
            len: v.len(),
            min: lo,
            max: hi,
        });
    }

    let wins = windows(params, v.len());
    let (t_ins, t_del) = params.inner_budgets();
    let lists: Vec<Vec<usize>> = wins
        .par_iter()
        .map(|&(a, b)| inner.decode_indices(&v.symbols()[a..b], t_ins, t_del))
        .collect();
    let max_window_list = lists.iter().map(Vec::len).max().unwrap_or(0);

    let field = inner.field();
    let mut j_set = PairSet::new(field);
    for idx in lists.into_iter().flatten() {
        let (alpha, beta) = inner.pair_of(idx);
        // only alpha_1..alpha_n are evaluation points
        if (alpha.value() as usize) < params.n {
            j_set.insert(alpha, beta)?;
        }
    }

    let k = params.k_outer();
    let threshold = params.threshold();
    let regime_ok = (threshold as u128).pow(2) > 2 * k as u128 * j_set.len() as u128;
    let (polys, recovery) = if regime_ok {
        (sudan_list_recover(&j_set, k, threshold)?, OuterRecovery::Sudan)
    } else {
        match brute_force_list_recover(&j_set, k, threshold, opts.brute_force_cap) {
            Ok(found) => (found, OuterRecovery::BruteForce),
            Err(FieldError::SearchTooLarge { size, cap }) => {
                return Err(ConcatError::Regime {
                    threshold,
                    k,
                    pairs: j_set.len(),
                    search: size,
                    cap,
                })
            }
            Err(e) => return Err(e.into()),
        }
    };

    let (out_ins, out_del) = params.outer_budgets();
    let outer_list = polys.len();
    let mut messages = polys
        .par_iter()
        .map(|f| -> Result<Option<Message>, ConcatError> {
            let msg = Message { symbols: f.padded(k) };
            let c = concat_encode(params, inner, &msg)?;
            Ok(in_insdel_ball(&c, v, out_ins, out_del)?.then_some(msg))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    messages.sort_by_key(Message::index);

    Ok(DecodeOutput {
        messages,
        diagnostics: DecodeDiagnostics {
            windows: wins.len(),
            pairs: j_set.len(),
            max_window_list,
            outer_list,
            recovery,
            regime_ok,
            pair_cap: params.pair_cap(),
            threshold,
        },
    })
}
