//! Concatenated code: a Reed-Solomon outer code over `F_p` whose symbols
//! `(alpha_i, f(alpha_i))` are re-encoded by an inner code over `[q]^m`,
//! together with the windowed list decoders.

mod decode;
mod params;

use std::fmt;

use num::{BigUint, Num, ToPrimitive, Zero};
use thiserror::Error;

use crate::inner::{InnerCode, InnerError};
use crate::metric::{MetricError, Word};
use crate::rational::Rational;
use crate::reed_solomon::{rs_encode, FieldElement, FieldError, PrimeField};

pub use decode::{
    list_decode, list_decode_insdel, list_decode_insertions, windows, DecodeDiagnostics, DecodeOptions, DecodeOutput,
    OuterRecovery, DEFAULT_BRUTE_FORCE_CAP,
};
pub use params::{
    derive_insertion_params, derive_insertion_params_with_rate, derive_params, derive_params_with_rate, ConcatParams,
    DecodeMode, SQRT_DENOMINATOR_LIMIT,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConcatError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("outer code is empty: r*n = {rn} < 1; n must be at least {min_n}")]
    RateTooSmall { rn: Rational, min_n: usize },
    #[error("inner code ({found}) does not match parameters ({expected})")]
    Mismatch { expected: String, found: String },
    #[error("received length {len} outside [{min}, {max}]")]
    LengthOutOfRange { len: usize, min: usize, max: usize },
    #[error("message {0}")]
    BadMessage(String),
    #[error("decoder mode {found} cannot use {expected} parameters")]
    WrongMode { expected: DecodeMode, found: DecodeMode },
    #[error(
        "outer recovery outside the list-recovery regime (threshold {threshold}, k {k}, |J| {pairs}) and p^k = {search} exceeds the brute-force cap {cap}"
    )]
    Regime {
        threshold: usize,
        k: usize,
        pairs: usize,
        search: u128,
        cap: u64,
    },
    #[error("parameter file: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Inner(#[from] InnerError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Outer message `s in F_p^k`, `k = ceil(r n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message {
    symbols: Vec<FieldElement>,
}

impl Message {
    pub fn new(symbols: Vec<FieldElement>, params: &ConcatParams) -> Result<Self, ConcatError> {
        let k = params.k_outer();
        if symbols.len() != k {
            return Err(ConcatError::BadMessage(format!(
                "has {} symbols, expected {k}",
                symbols.len()
            )));
        }
        if let Some(s) = symbols.iter().find(|s| s.field().p() != params.p) {
            return Err(ConcatError::BadMessage(format!("symbol {s:?} not in F_{}", params.p)));
        }
        Ok(Message { symbols })
    }

    pub fn symbols(&self) -> &[FieldElement] {
        &self.symbols
    }

    /// Number of distinct messages, `p^k`.
    pub fn space_size(params: &ConcatParams) -> BigUint {
        num::pow(BigUint::from(params.p), params.k_outer())
    }

    /// The message whose base-`p` digits, least significant first, are
    /// `s_1, .., s_k`.
    pub fn from_index(index: &BigUint, params: &ConcatParams) -> Result<Self, ConcatError> {
        if index >= &Message::space_size(params) {
            return Err(ConcatError::BadMessage(format!(
                "index {index} not below p^k = {}",
                Message::space_size(params)
            )));
        }
        let field = PrimeField::new(params.p)?;
        let p = BigUint::from(params.p);
        let mut rest = index.clone();
        let mut symbols = Vec::with_capacity(params.k_outer());
        for _ in 0..params.k_outer() {
            let digit = (&rest % &p).to_u64().expect("digit below p");
            symbols.push(field.elem(digit));
            rest /= &p;
        }
        Ok(Message { symbols })
    }

    pub fn index(&self) -> BigUint {
        let p = BigUint::from(self.symbols.first().map_or(2, |s| s.field().p()));
        self.symbols
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, s| acc * &p + BigUint::from(s.value()))
    }

    pub fn from_hex(hex: &str, params: &ConcatParams) -> Result<Self, ConcatError> {
        let digits = hex.trim().trim_start_matches("0x");
        let index = BigUint::from_str_radix(digits, 16)
            .map_err(|e| ConcatError::BadMessage(format!("bad hex {hex:?}: {e}")))?;
        Message::from_index(&index, params)
    }

    pub fn to_hex(&self) -> String {
        self.index().to_str_radix(16)
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|s| s.value().to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Message[{self}]")
    }
}

pub(crate) fn check_inner(params: &ConcatParams, inner: &InnerCode) -> Result<(), ConcatError> {
    if inner.m() != params.m || inner.p() != params.p {
        return Err(ConcatError::Mismatch {
            expected: format!("m = {}, p = {}", params.m, params.p),
            found: format!("m = {}, p = {}", inner.m(), inner.p()),
        });
    }
    Ok(())
}

/// Outer symbols `(alpha_i, f_s(alpha_i))` at `alpha_i = i - 1`.
pub fn outer_symbols(params: &ConcatParams, s: &Message) -> Result<Vec<(FieldElement, FieldElement)>, ConcatError> {
    let field = PrimeField::new(params.p)?;
    let points: Vec<FieldElement> = (0..params.n as u64).map(|a| field.elem(a)).collect();
    let values = rs_encode(s.symbols(), &points)?;
    Ok(points.into_iter().zip(values).collect())
}

/// `C_in(alpha_1, f_s(alpha_1)) || .. || C_in(alpha_n, f_s(alpha_n))`.
pub fn concat_encode(params: &ConcatParams, inner: &InnerCode, s: &Message) -> Result<Word, ConcatError> {
    check_inner(params, inner)?;
    let blocks = outer_symbols(params, s)?
        .into_iter()
        .map(|(a, b)| inner.encode(a, b))
        .collect::<Result<Vec<&Word>, _>>()?;
    Ok(Word::concat(blocks, inner.q())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inner::{search_inner_code, DEFAULT_SEARCH_BUDGET};
    use crate::metric::levenshtein_distance;
    use crate::rational::ratio;

    fn setup() -> (ConcatParams, InnerCode) {
        let params = derive_params_with_rate(&ratio(1, 5), &ratio(1, 25), 2, 5, 8, 5, &ratio(2, 5)).unwrap();
        let inner = search_inner_code(4, 8, 5, &ratio(1, 4), 3, DEFAULT_SEARCH_BUDGET).unwrap();
        (params, inner)
    }

    #[test]
    fn message_index_round_trip() {
        let (params, _) = setup();
        assert_eq!(params.k_outer(), 2);
        for i in 0..25u32 {
            let msg = Message::from_index(&BigUint::from(i), &params).unwrap();
            assert_eq!(msg.index(), BigUint::from(i));
            assert_eq!(Message::from_hex(&msg.to_hex(), &params).unwrap(), msg);
        }
        assert!(Message::from_index(&BigUint::from(25u32), &params).is_err());
        assert!(Message::from_hex("zz", &params).is_err());
        let m = Message::from_hex("7", &params).unwrap();
        assert_eq!(m.to_string(), "2,1");
    }

    #[test]
    fn encoding_layout() {
        let (params, inner) = setup();
        let msg = Message::from_hex("b", &params).unwrap();
        let word = concat_encode(&params, &inner, &msg).unwrap();
        assert_eq!(word.len(), params.n * params.m);
        for (i, (a, b)) in outer_symbols(&params, &msg).unwrap().into_iter().enumerate() {
            assert_eq!(&word.slice(i * 8, (i + 1) * 8), inner.encode(a, b).unwrap());
        }
    }

    #[test]
    fn distinct_messages_distinct_words() {
        let (params, inner) = setup();
        let words: Vec<Word> = (0..25u32)
            .map(|i| {
                let msg = Message::from_index(&BigUint::from(i), &params).unwrap();
                concat_encode(&params, &inner, &msg).unwrap()
            })
            .collect();
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                // outer words differ in >= n - k + 1 = 4 blocks
                let a = Message::from_index(&BigUint::from(i as u32), &params).unwrap();
                let b = Message::from_index(&BigUint::from(j as u32), &params).unwrap();
                let (oa, ob) = (outer_symbols(&params, &a).unwrap(), outer_symbols(&params, &b).unwrap());
                assert!(oa.iter().zip(&ob).filter(|(x, y)| x != y).count() >= 4);
                assert!(levenshtein_distance(&words[i], &words[j]).unwrap() > 0);
            }
        }
    }

    #[test]
    fn mismatched_inner_rejected() {
        let (params, _) = setup();
        let other = search_inner_code(4, 10, 5, &ratio(1, 4), 3, DEFAULT_SEARCH_BUDGET).unwrap();
        let msg = Message::from_hex("1", &params).unwrap();
        assert!(matches!(
            concat_encode(&params, &other, &msg),
            Err(ConcatError::Mismatch { .. })
        ));
    }
}
