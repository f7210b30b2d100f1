//! Insertion/deletion (Levenshtein) metric primitives.
//!
//! Distances here count insertions and deletions only; a substitution costs
//! two edits. Symbols are stored as integers `0..q`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(u32, u32),
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u32),
    #[error("symbol {symbol} out of range for alphabet of size {q}")]
    SymbolOutOfRange { symbol: u32, q: u32 },
    #[error("code words must share length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("duplicate code word {0}")]
    DuplicateWord(String),
    #[error("minimum distance needs at least two code words, got {0}")]
    TooFewWords(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A finite sequence over the alphabet `{0, .., q-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<u32>,
    q: u32,
}

impl Word {
    pub fn new(symbols: Vec<u32>, q: u32) -> Result<Self, MetricError> {
        if q < 2 {
            return Err(MetricError::AlphabetTooSmall(q));
        }
        if let Some(&symbol) = symbols.iter().find(|&&s| s >= q) {
            return Err(MetricError::SymbolOutOfRange { symbol, q });
        }
        Ok(Word { symbols, q })
    }

    pub fn empty(q: u32) -> Result<Self, MetricError> {
        Word::new(Vec::new(), q)
    }

    /// Parses the text form: base-q digits with no separator when `q <= 10`,
    /// comma-separated integers otherwise.
    pub fn parse(text: &str, q: u32) -> Result<Self, MetricError> {
        let text = text.trim();
        let symbols = if text.is_empty() {
            Vec::new()
        } else if q <= 10 {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .ok_or_else(|| MetricError::Parse(format!("bad digit {c:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?
        } else {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|e| MetricError::Parse(format!("bad symbol {t:?}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        Word::new(symbols, q)
    }

    /// Word with index `index` in the lexicographic enumeration of `[q]^len`.
    pub fn from_index(mut index: u64, len: usize, q: u32) -> Result<Self, MetricError> {
        let mut symbols = vec![0; len];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % q as u64) as u32;
            index /= q as u64;
        }
        Word::new(symbols, q)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u32> {
        self.symbols
    }

    pub fn alphabet_size(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Sub-word `[start, end)`, clamped to the word length.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        let end = end.min(self.len());
        let start = start.min(end);
        Word {
            symbols: self.symbols[start..end].to_vec(),
            q: self.q,
        }
    }

    pub fn concat<'a, I: IntoIterator<Item = &'a Word>>(parts: I, q: u32) -> Result<Word, MetricError> {
        let mut symbols = Vec::new();
        for part in parts {
            check_alphabet(part.q, q)?;
            symbols.extend_from_slice(&part.symbols);
        }
        Word::new(symbols, q)
    }

    fn same_alphabet(&self, other: &Word) -> Result<(), MetricError> {
        check_alphabet(self.q, other.q)
    }
}

fn check_alphabet(a: u32, b: u32) -> Result<(), MetricError> {
    if a == b {
        Ok(())
    } else {
        Err(MetricError::AlphabetMismatch(a, b))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(q={}, {})", self.q, self)
    }
}

/// Length of a longest common subsequence, two-row DP.
pub(crate) fn lcs_len(x: &[u32], y: &[u32]) -> usize {
    let (outer, inner) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    let mut prev = vec![0usize; inner.len() + 1];
    let mut cur = vec![0usize; inner.len() + 1];
    for &a in outer {
        for (j, &b) in inner.iter().enumerate() {
            cur[j + 1] = if a == b { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[inner.len()]
}

pub fn lcs(x: &Word, y: &Word) -> Result<usize, MetricError> {
    x.same_alphabet(y)?;
    Ok(lcs_len(&x.symbols, &y.symbols))
}

/// Minimum number of insertions and deletions turning `x` into `y`.
pub fn levenshtein_distance(x: &Word, y: &Word) -> Result<usize, MetricError> {
    Ok(x.len() + y.len() - 2 * lcs(x, y)?)
}

/// True iff `x` is obtained from `y` by deletions only.
pub fn is_subsequence(x: &Word, y: &Word) -> Result<bool, MetricError> {
    x.same_alphabet(y)?;
    let mut it = y.symbols.iter();
    Ok(x.symbols.iter().all(|s| it.any(|t| t == s)))
}

/// Decoder-side ball membership: `v` can be produced from `c` by at most
/// `t_ins` insertions and at most `t_del` deletions (equivalently, `c` is
/// reached from `v` with the budgets swapped).
pub fn in_insdel_ball(c: &Word, v: &Word, t_ins: usize, t_del: usize) -> Result<bool, MetricError> {
    let common = lcs(c, v)?;
    Ok(v.len() - common <= t_ins && c.len() - common <= t_del)
}

/// An explicit set of distinct equal-length words with its cached minimum
/// Levenshtein distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeBook {
    q: u32,
    n: usize,
    words: Vec<Word>,
    min_dist: Option<usize>,
}

impl CodeBook {
    pub fn new(words: Vec<Word>, q: u32, n: usize) -> Result<Self, MetricError> {
        if q < 2 {
            return Err(MetricError::AlphabetTooSmall(q));
        }
        let mut seen = std::collections::HashSet::new();
        for w in &words {
            check_alphabet(w.q, q)?;
            if w.len() != n {
                return Err(MetricError::LengthMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
            if !seen.insert(w) {
                return Err(MetricError::DuplicateWord(w.to_string()));
            }
        }
        let min_dist = pairwise_min(&words);
        Ok(CodeBook { q, n, words, min_dist })
    }

    pub fn from_words(words: Vec<Word>) -> Result<Self, MetricError> {
        let first = words.first().ok_or(MetricError::TooFewWords(0))?;
        let (q, n) = (first.q, first.len());
        CodeBook::new(words, q, n)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Cached minimum distance; `None` for codes with fewer than two words.
    pub fn min_dist(&self) -> Option<usize> {
        self.min_dist
    }

    /// File form: header `q=<q> n=<n>` then one word per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("q={} n={}\n", self.q, self.n);
        for w in &self.words {
            out.push_str(&w.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, MetricError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| MetricError::Parse("missing header".into()))?;
        let (q, n) = parse_header(header)?;
        let words = lines.map(|l| Word::parse(l, q)).collect::<Result<Vec<_>, _>>()?;
        CodeBook::new(words, q, n)
    }
}

fn parse_header(header: &str) -> Result<(u32, usize), MetricError> {
    let mut q = None;
    let mut n = None;
    for tok in header.split_whitespace() {
        let bad = || MetricError::Parse(format!("bad header token {tok:?}"));
        let (key, value) = tok.split_once('=').ok_or_else(bad)?;
        match key {
            "q" => q = Some(value.parse::<u32>().map_err(|_| bad())?),
            "n" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    match (q, n) {
        (Some(q), Some(n)) => Ok((q, n)),
        _ => Err(MetricError::Parse(format!(
            "header must be `q=<q> n=<n>`, got {header:?}"
        ))),
    }
}

fn pairwise_min(words: &[Word]) -> Option<usize> {
    if words.len() < 2 {
        return None;
    }
    (0..words.len())
        .into_par_iter()
        .filter_map(|i| {
            words[i + 1..]
                .iter()
                .map(|w| words[i].len() + w.len() - 2 * lcs_len(&words[i].symbols, &w.symbols))
                .min()
        })
        .min()
}

pub fn min_code_distance(code: &CodeBook) -> Result<usize, MetricError> {
    code.min_dist.ok_or(MetricError::TooFewWords(code.len()))
}

impl FromStr for CodeBook {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CodeBook::parse(s)
    }
}
