//! Exhaustive oracles: list decoding by membership filter, worst-case list
//! size over all received words, and maximum code size by clique search.

use rayon::prelude::*;
use thiserror::Error;

use crate::metric::{in_insdel_ball, lcs_len, CodeBook, MetricError, Word};

pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;
pub const DEFAULT_CODE_SEARCH_CAP: u64 = 243;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive enumeration of {size} words exceeds cap {cap}")]
    CapExceeded { size: u128, cap: u64 },
    #[error("deletion budget {t_del} exceeds block length {n}")]
    DeletionBudget { t_del: usize, n: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Codewords `c` from which `v` is reachable with at most `t_ins`
/// insertions and `t_del` deletions.
pub fn brute_force_list(code: &CodeBook, v: &Word, t_ins: usize, t_del: usize) -> Result<Vec<Word>, MetricError> {
    let mut out = Vec::new();
    for c in code.words() {
        if in_insdel_ball(c, v, t_ins, t_del)? {
            out.push(c.clone());
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListMax {
    pub max: usize,
    pub witness: Word,
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Best {
    count: usize,
    len: usize,
    index: u64,
}

impl Best {
    // larger count wins, then shorter then lexicographically smaller witness
    fn better(self, other: Best) -> Best {
        let key = |b: Best| (std::cmp::Reverse(b.count), b.len, b.index);
        if key(other) < key(self) {
            other
        } else {
            self
        }
    }
}

/// Worst-case list sizes for every budget pair `(t_ins, t_del)` up to the
/// given maxima, indexed `[t_ins][t_del]`. Every received word of every
/// admissible length is enumerated.
pub fn list_size_table(
    code: &CodeBook,
    t_ins_max: usize,
    t_del_max: usize,
    cap: u64,
) -> Result<Vec<Vec<ListMax>>, OracleError> {
    let (q, n) = (code.q(), code.n());
    if t_del_max > n {
        return Err(OracleError::DeletionBudget { t_del: t_del_max, n });
    }
    let lengths = n - t_del_max..=n + t_ins_max;
    let mut total: u128 = 0;
    for len in lengths.clone() {
        total = total.saturating_add((q as u128).saturating_pow(len as u32));
    }
    if total > cap as u128 {
        return Err(OracleError::CapExceeded { size: total, cap });
    }
    let cells = (t_ins_max + 1) * (t_del_max + 1);
    let seed = vec![
        Best {
            count: 0,
            len: usize::MAX,
            index: u64::MAX
        };
        cells
    ];
    let merge = |a: Vec<Best>, b: Vec<Best>| a.into_iter().zip(b).map(|(x, y)| x.better(y)).collect::<Vec<_>>();
    let words = code.words();
    let mut best = seed.clone();
    for len in lengths {
        let size = (q as u64).pow(len as u32);
        let part = (0..size)
            .into_par_iter()
            .fold(
                || seed.clone(),
                |mut acc, index| {
                    let v = Word::from_index(index, len, q).expect("in range");
                    let lcs: Vec<usize> = words.iter().map(|c| lcs_len(c.symbols(), v.symbols())).collect();
                    for ti in 0..=t_ins_max {
                        for td in 0..=t_del_max {
                            let count = lcs.iter().filter(|&&l| len - l <= ti && n - l <= td).count();
                            let cell = &mut acc[ti * (t_del_max + 1) + td];
                            *cell = cell.better(Best { count, len, index });
                        }
                    }
                    acc
                },
            )
            .reduce(|| seed.clone(), merge);
        best = merge(best, part);
    }
    Ok(best
        .chunks(t_del_max + 1)
        .map(|row| {
            row.iter()
                .map(|b| ListMax {
                    max: b.count,
                    witness: Word::from_index(b.index, b.len, q).expect("witness in range"),
                })
                .collect()
        })
        .collect())
}

/// Largest `|brute_force_list(code, v, t_ins, t_del)|` over all `v`.
pub fn max_list_size(code: &CodeBook, t_ins: usize, t_del: usize, cap: u64) -> Result<ListMax, OracleError> {
    if t_del > code.n() {
        return Err(OracleError::DeletionBudget { t_del, n: code.n() });
    }
    let q = code.q() as u128;
    let total: u128 = (code.n() - t_del..=code.n() + t_ins)
        .map(|l| q.saturating_pow(l as u32))
        .fold(0u128, u128::saturating_add);
    if total > cap as u128 {
        return Err(OracleError::CapExceeded { size: total, cap });
    }
    let (n, words) = (code.n(), code.words());
    let found = (code.n() - t_del..=code.n() + t_ins)
        .flat_map(|len| (0..(code.q() as u64).pow(len as u32)).map(move |i| (len, i)))
        .par_bridge()
        .map(|(len, index)| {
            let v = Word::from_index(index, len, code.q()).expect("in range");
            let count = words
                .iter()
                .filter(|c| {
                    let l = lcs_len(c.symbols(), v.symbols());
                    len - l <= t_ins && n - l <= t_del
                })
                .count();
            Best { count, len, index }
        })
        .reduce(
            || Best {
                count: 0,
                len: usize::MAX,
                index: u64::MAX,
            },
            Best::better,
        );
    Ok(ListMax {
        max: found.count,
        witness: Word::from_index(found.index, found.len, code.q()).expect("witness in range"),
    })
}

struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn has(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

/// Greedy colouring; returns vertices in colour order with their colour
/// number (1-based), which bounds the clique size within each prefix.
fn colour_order(p: &Bits, adj: &[Bits]) -> Vec<(usize, usize)> {
    let mut uncoloured: Vec<usize> = p.iter().collect();
    let mut out = Vec::with_capacity(uncoloured.len());
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut class: Vec<usize> = Vec::new();
        uncoloured.retain(|&v| {
            if class.iter().all(|&u| !adj[u].has(v)) {
                class.push(v);
                false
            } else {
                true
            }
        });
        out.extend(class.into_iter().map(|v| (v, colour)));
    }
    out
}

fn expand(p: Bits, adj: &[Bits], current: &mut Vec<usize>, best: &mut Vec<usize>) {
    let mut p = p;
    let order = colour_order(&p, adj);
    for &(v, colour) in order.iter().rev() {
        if current.len() + colour <= best.len() {
            return;
        }
        current.push(v);
        let next = p.and(&adj[v]);
        if next.is_empty() {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(next, adj, current, best);
        }
        current.pop();
        p.clear(v);
    }
}

/// A maximum-size code in `[q]^n` with minimum Levenshtein distance `>= d`.
pub fn max_code_search(q: u32, n: usize, d: usize, cap: u64) -> Result<CodeBook, OracleError> {
    if q < 2 {
        return Err(MetricError::AlphabetTooSmall(q).into());
    }
    let size = (q as u128).saturating_pow(n as u32);
    if size > cap as u128 {
        return Err(OracleError::CapExceeded { size, cap });
    }
    let size = size as usize;
    let words: Vec<Word> = (0..size as u64)
        .map(|i| Word::from_index(i, n, q).expect("in range"))
        .collect();
    let adj: Vec<Bits> = (0..size)
        .into_par_iter()
        .map(|i| {
            let mut row = Bits::empty(size);
            for j in 0..size {
                if i != j && 2 * (n - lcs_len(words[i].symbols(), words[j].symbols())) >= d {
                    row.set(j);
                }
            }
            row
        })
        .collect();
    let mut all = Bits::empty(size);
    for i in 0..size {
        all.set(i);
    }
    let mut best = Vec::new();
    expand(all, &adj, &mut Vec::new(), &mut best);
    best.sort_unstable();
    let chosen = best.into_iter().map(|i| words[i].clone()).collect();
    Ok(CodeBook::new(chosen, q, n)?)
}
