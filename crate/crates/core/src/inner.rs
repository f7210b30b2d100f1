//! Inner code `F_p x F_p -> [q]^m`, found by seeded greedy random search and
//! decoded by exhaustive ball membership.

use num::{BigInt, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::metric::{lcs_len, CodeBook, MetricError, Word};
use crate::rational::{ceil_to_usize, int, Rational};
use crate::reed_solomon::{FieldElement, FieldError, PrimeField};

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InnerError {
    #[error("need p^2 = {needed} codewords but [q]^m holds only {capacity}")]
    Counting { needed: u128, capacity: u128 },
    #[error("delta target must lie in [0, 1), got {0}")]
    InvalidTarget(Rational),
    #[error(
        "budget of {budget} draws exhausted with {found} of {needed} codewords (partial code reaches delta {achieved})"
    )]
    BudgetExhausted {
        budget: u64,
        found: usize,
        needed: usize,
        achieved: Rational,
    },
    #[error("pair ({alpha}, {beta}) outside F_{p}")]
    PairOutOfRange { alpha: u64, beta: u64, p: u64 },
    #[error("inner code file: {0}")]
    Parse(String),
    #[error("inner code fails verification: {0}")]
    Verification(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerCode {
    field: PrimeField,
    code: CodeBook,
    delta_target: Rational,
    seed: u64,
}

fn required_distance(delta_target: &Rational, m: usize) -> usize {
    ceil_to_usize(&(delta_target * int(2 * m as i64))).unwrap_or(usize::MAX)
}

/// Greedy seeded search: draw uniform words and keep one iff it is at
/// Levenshtein distance `>= 2 * delta_target * m` from every kept word.
pub fn search_inner_code(
    q: u32,
    m: usize,
    p: u64,
    delta_target: &Rational,
    seed: u64,
    budget: u64,
) -> Result<InnerCode, InnerError> {
    let field = PrimeField::new(p)?;
    if q < 2 {
        return Err(MetricError::AlphabetTooSmall(q).into());
    }
    let needed = (p as u128) * (p as u128);
    let capacity = BigInt::from(q).pow(m as u32);
    if BigInt::from(needed) > capacity {
        return Err(InnerError::Counting {
            needed,
            capacity: capacity.to_u128().unwrap_or(u128::MAX),
        });
    }
    if delta_target < &Rational::zero() || delta_target >= &int(1) {
        return Err(InnerError::InvalidTarget(delta_target.clone()));
    }
    let needed = needed as usize;
    let min_d = required_distance(delta_target, m).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kept: Vec<Vec<u32>> = Vec::with_capacity(needed);
    let mut draws = 0;
    while kept.len() < needed {
        if draws == budget {
            let achieved = partial_delta(&kept, m);
            return Err(InnerError::BudgetExhausted {
                budget,
                found: kept.len(),
                needed,
                achieved,
            });
        }
        draws += 1;
        let cand: Vec<u32> = (0..m).map(|_| rng.gen_range(0..q)).collect();
        if kept.iter().all(|w| 2 * (m - lcs_len(w, &cand)) >= min_d) {
            kept.push(cand);
        }
    }
    let words = kept
        .into_iter()
        .map(|s| Word::new(s, q))
        .collect::<Result<Vec<_>, _>>()?;
    InnerCode::from_codewords(field, words, q, m, delta_target.clone(), seed)
}

fn partial_delta(words: &[Vec<u32>], m: usize) -> Rational {
    let mut min = 2 * m;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            min = min.min(2 * (m - lcs_len(a, b)));
        }
    }
    Rational::new(BigInt::from(min), BigInt::from(2 * m))
}

impl InnerCode {
    /// Wraps `p^2` codewords in index order `alpha * p + beta`, verifying
    /// distinctness and the distance target.
    pub fn from_codewords(
        field: PrimeField,
        words: Vec<Word>,
        q: u32,
        m: usize,
        delta_target: Rational,
        seed: u64,
    ) -> Result<Self, InnerError> {
        let p = field.p() as usize;
        if words.len() != p * p {
            return Err(InnerError::Verification(format!(
                "expected {} codewords, found {}",
                p * p,
                words.len()
            )));
        }
        let code = CodeBook::new(words, q, m)?;
        let min_d = code.min_dist().unwrap_or(2 * m);
        if min_d < required_distance(&delta_target, m) {
            return Err(InnerError::Verification(format!(
                "minimum distance {min_d} below 2 * {delta_target} * {m}"
            )));
        }
        Ok(InnerCode {
            field,
            code,
            delta_target,
            seed,
        })
    }

    pub fn q(&self) -> u32 {
        self.code.q()
    }

    pub fn m(&self) -> usize {
        self.code.n()
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn delta_target(&self) -> &Rational {
        &self.delta_target
    }

    pub fn codewords(&self) -> &[Word] {
        self.code.words()
    }

    pub fn min_distance(&self) -> usize {
        self.code.min_dist().unwrap_or(2 * self.m())
    }

    /// Achieved normalized distance `min d_L / 2m`.
    pub fn delta_in(&self) -> Rational {
        Rational::new(BigInt::from(self.min_distance()), BigInt::from(2 * self.m()))
    }

    pub fn index_of(&self, alpha: FieldElement, beta: FieldElement) -> Result<usize, InnerError> {
        let p = self.p();
        if alpha.field() != self.field || beta.field() != self.field {
            return Err(InnerError::PairOutOfRange {
                alpha: alpha.value(),
                beta: beta.value(),
                p,
            });
        }
        Ok((alpha.value() * p + beta.value()) as usize)
    }

    pub fn pair_of(&self, index: usize) -> (FieldElement, FieldElement) {
        let p = self.p() as usize;
        assert!(index < p * p, "index {index} outside the code");
        (self.field.elem((index / p) as u64), self.field.elem((index % p) as u64))
    }

    pub fn encode(&self, alpha: FieldElement, beta: FieldElement) -> Result<&Word, InnerError> {
        Ok(&self.code.words()[self.index_of(alpha, beta)?])
    }

    /// Indices of codewords `c` from which `w` is reachable with at most
    /// `t_ins` insertions and `t_del` deletions.
    pub(crate) fn decode_indices(&self, w: &[u32], t_ins: usize, t_del: usize) -> Vec<usize> {
        let m = self.m();
        // |w| - L <= t_ins and m - L <= t_del with L <= min(m, |w|)
        if w.len() > m + t_ins || w.len() + t_del < m {
            return Vec::new();
        }
        self.code
            .words()
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                let l = lcs_len(c.symbols(), w);
                w.len() - l <= t_ins && m - l <= t_del
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Every pair whose codeword lies within the budgets of `w`.
    pub fn list_decode(
        &self,
        w: &Word,
        t_ins: usize,
        t_del: usize,
    ) -> Result<Vec<(FieldElement, FieldElement)>, InnerError> {
        if w.alphabet_size() != self.q() {
            return Err(MetricError::AlphabetMismatch(w.alphabet_size(), self.q()).into());
        }
        let m = self.m();
        let hits: Vec<usize> = self
            .code
            .words()
            .par_iter()
            .enumerate()
            .filter(|(_, c)| {
                let l = lcs_len(c.symbols(), w.symbols());
                w.len() - l <= t_ins && m - l <= t_del
            })
            .map(|(i, _)| i)
            .collect();
        Ok(hits.into_iter().map(|i| self.pair_of(i)).collect())
    }

    /// Header `q m p delta_num delta_den seed`, then `p^2` codewords in index
    /// order.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {} {} {}\n",
            self.q(),
            self.m(),
            self.p(),
            self.delta_target.numer(),
            self.delta_target.denom(),
            self.seed
        );
        for w in self.code.words() {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, InnerError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| InnerError::Parse("empty file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(InnerError::Parse(format!(
                "header must be `q m p delta_num delta_den seed`, got {header:?}"
            )));
        }
        let num = |i: usize| -> Result<u64, InnerError> {
            fields[i]
                .parse::<u64>()
                .map_err(|e| InnerError::Parse(format!("header field {:?}: {e}", fields[i])))
        };
        let (q, m, p) = (num(0)? as u32, num(1)? as usize, num(2)?);
        let den = num(4)?;
        if den == 0 {
            return Err(InnerError::Parse("zero delta denominator".into()));
        }
        let delta = Rational::new(BigInt::from(num(3)?), BigInt::from(den));
        let seed = num(5)?;
        let words = lines.map(|l| Word::parse(l, q)).collect::<Result<Vec<_>, _>>()?;
        for w in &words {
            if w.len() != m {
                return Err(MetricError::LengthMismatch {
                    expected: m,
                    found: w.len(),
                }
                .into());
            }
        }
        InnerCode::from_codewords(PrimeField::new(p)?, words, q, m, delta, seed)
    }
}

/// Codeword for the pair `(alpha, beta)`.
pub fn inner_encode(code: &InnerCode, alpha: FieldElement, beta: FieldElement) -> Result<Word, InnerError> {
    code.encode(alpha, beta).cloned()
}

/// All pairs whose codeword can be turned into `w` with at most `t_ins`
/// insertions and `t_del` deletions.
pub fn inner_list_decode(
    code: &InnerCode,
    w: &Word,
    t_ins: usize,
    t_del: usize,
) -> Result<Vec<(FieldElement, FieldElement)>, InnerError> {
    code.list_decode(w, t_ins, t_del)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{in_insdel_ball, levenshtein_distance};
    use crate::rational::ratio;

    #[test]
    fn search_meets_target() {
        let code = search_inner_code(4, 8, 3, &ratio(1, 2), 1, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(code.codewords().len(), 9);
        let words = code.codewords();
        let mut min = usize::MAX;
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                min = min.min(levenshtein_distance(&words[i], &words[j]).unwrap());
            }
        }
        assert!(min >= 8);
        assert_eq!(min, code.min_distance());
        assert!(code.delta_in() >= ratio(1, 2));
    }

    #[test]
    fn zero_target_and_counting_bound() {
        let code = search_inner_code(2, 4, 3, &int(0), 5, 10_000).unwrap();
        assert_eq!(code.codewords().len(), 9);
        assert!(matches!(
            search_inner_code(2, 2, 3, &int(0), 1, 1000),
            Err(InnerError::Counting { needed: 9, capacity: 4 })
        ));
        assert!(matches!(
            search_inner_code(2, 4, 3, &int(1), 1, 1000),
            Err(InnerError::InvalidTarget(_))
        ));
    }

    #[test]
    fn budget_reports_partial() {
        match search_inner_code(2, 6, 3, &ratio(9, 10), 3, 500) {
            Err(InnerError::BudgetExhausted { found, needed, .. }) => {
                assert!(found < needed);
                assert_eq!(needed, 9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn deterministic_and_round_trips() {
        let a = search_inner_code(4, 10, 5, &ratio(2, 5), 11, DEFAULT_SEARCH_BUDGET).unwrap();
        let b = search_inner_code(4, 10, 5, &ratio(2, 5), 11, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(a, b);
        assert_eq!(InnerCode::parse(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn pair_index_round_trip() {
        let code = search_inner_code(4, 8, 3, &ratio(1, 4), 2, DEFAULT_SEARCH_BUDGET).unwrap();
        let f = code.field();
        for i in 0..9 {
            let (a, b) = code.pair_of(i);
            assert_eq!(code.index_of(a, b).unwrap(), i);
        }
        let other = PrimeField::new(5).unwrap();
        assert!(code.encode(other.elem(1), other.elem(1)).is_err());
        assert_eq!(code.encode(f.elem(2), f.elem(1)).unwrap(), &code.codewords()[7]);
    }

    #[test]
    fn decoding_matches_ball_filter() {
        let code = search_inner_code(4, 8, 3, &ratio(1, 4), 9, DEFAULT_SEARCH_BUDGET).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let len = rng.gen_range(4..=12);
            let w = Word::new((0..len).map(|_| rng.gen_range(0..4)).collect(), 4).unwrap();
            let (ti, td) = (rng.gen_range(0..6), rng.gen_range(0..4));
            let got = code.list_decode(&w, ti, td).unwrap();
            let expected: Vec<_> = (0..9)
                .filter(|&i| in_insdel_ball(&code.codewords()[i], &w, ti, td).unwrap())
                .map(|i| code.pair_of(i))
                .collect();
            assert_eq!(got, expected);
            let fast: Vec<_> = code
                .decode_indices(w.symbols(), ti, td)
                .into_iter()
                .map(|i| code.pair_of(i))
                .collect();
            assert_eq!(fast, expected);
        }
        let c = code.codewords()[4].clone();
        assert_eq!(code.list_decode(&c, 0, 0).unwrap(), vec![code.pair_of(4)]);
    }
}
