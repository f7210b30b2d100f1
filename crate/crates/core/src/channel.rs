//! Seeded insertion/deletion channel with a replayable corruption ledger.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::metric::{MetricError, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChannelError {
    #[error("cannot delete {t_del} symbols from a word of length {len}")]
    TooManyDeletions { t_del: usize, len: usize },
    #[error("ledger expects an input of length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("block length must be positive")]
    ZeroBlockLength,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Record of one channel use. Deletions are positions of the input;
/// each insertion is `(position, symbol)` in the word as it stands when the
/// insertion happens. Positions are 0-based here and 1-based in JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorruptionLedger {
    input_len: usize,
    q: u32,
    deletions: Vec<usize>,
    insertions: Vec<(usize, u32)>,
}

/// Corruption attributed to one length-`m` block of the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockStat {
    pub block: usize,
    pub insertions: usize,
    pub deletions: usize,
    /// Half-open span `[start, end)` of the block's image in the output.
    pub start: usize,
    pub end: usize,
}

/// Deletes exactly `t_del` distinct positions, then inserts exactly `t_ins`
/// uniform symbols at uniform positions.
pub fn corrupt(x: &Word, t_ins: usize, t_del: usize, seed: u64) -> Result<(Word, CorruptionLedger), ChannelError> {
    if t_del > x.len() {
        return Err(ChannelError::TooManyDeletions { t_del, len: x.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deletions = sample(&mut rng, x.len(), t_del).into_vec();
    deletions.sort_unstable();
    let mut len = x.len() - t_del;
    let q = x.alphabet_size();
    let insertions = (0..t_ins)
        .map(|_| {
            let pos = rng.gen_range(0..=len);
            len += 1;
            (pos, rng.gen_range(0..q))
        })
        .collect();
    let ledger = CorruptionLedger {
        input_len: x.len(),
        q,
        deletions,
        insertions,
    };
    let y = ledger.replay(x)?;
    Ok((y, ledger))
}

impl CorruptionLedger {
    pub fn deletions(&self) -> &[usize] {
        &self.deletions
    }

    pub fn insertions(&self) -> &[(usize, u32)] {
        &self.insertions
    }

    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub fn output_len(&self) -> usize {
        self.input_len - self.deletions.len() + self.insertions.len()
    }

    fn apply<T: Clone>(&self, items: &[T], inserted: impl Fn(u32) -> T) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(self.output_len());
        let mut dels = self.deletions.iter().peekable();
        for (i, item) in items.iter().enumerate() {
            if dels.peek() == Some(&&i) {
                dels.next();
            } else {
                out.push(item.clone());
            }
        }
        for &(pos, sym) in &self.insertions {
            out.insert(pos, inserted(sym));
        }
        out
    }

    /// Re-applies the recorded events to `x`.
    pub fn replay(&self, x: &Word) -> Result<Word, ChannelError> {
        if x.len() != self.input_len {
            return Err(ChannelError::LengthMismatch {
                expected: self.input_len,
                found: x.len(),
            });
        }
        Ok(Word::new(self.apply(x.symbols(), |s| s), x.alphabet_size())?)
    }

    /// Input position of each output symbol, `None` for inserted ones.
    pub fn origins(&self) -> Vec<Option<usize>> {
        let ids: Vec<Option<usize>> = (0..self.input_len).map(Some).collect();
        self.apply(&ids, |_| None)
    }

    /// Per-block counts for blocks of length `m`. An inserted symbol belongs
    /// to the block of the nearest surviving input symbol on its left (block
    /// 0 if there is none), so block images tile the output.
    pub fn block_stats(&self, m: usize) -> Result<Vec<BlockStat>, ChannelError> {
        if m == 0 {
            return Err(ChannelError::ZeroBlockLength);
        }
        let blocks = self.input_len.div_ceil(m).max(1);
        let mut stats: Vec<BlockStat> = (0..blocks)
            .map(|block| BlockStat {
                block,
                insertions: 0,
                deletions: 0,
                start: 0,
                end: 0,
            })
            .collect();
        for &d in &self.deletions {
            stats[d / m].deletions += 1;
        }
        let mut labels = Vec::with_capacity(self.output_len());
        let mut current = 0;
        for origin in self.origins() {
            match origin {
                Some(i) => current = i / m,
                None => stats[current].insertions += 1,
            }
            labels.push(current);
        }
        let mut pos = 0;
        for s in stats.iter_mut() {
            s.start = pos;
            while pos < labels.len() && labels[pos] == s.block {
                pos += 1;
            }
            s.end = pos;
        }
        Ok(stats)
    }

    pub fn to_json(&self, block_len: Option<usize>) -> Result<serde_json::Value, ChannelError> {
        #[derive(Serialize)]
        struct Insertion {
            position: usize,
            symbol: u32,
        }
        #[derive(Serialize)]
        struct Json {
            input_length: usize,
            output_length: usize,
            deletions: Vec<usize>,
            insertions: Vec<Insertion>,
            #[serde(skip_serializing_if = "Option::is_none")]
            blocks: Option<Vec<BlockStat>>,
        }
        let blocks = block_len
            .map(|m| {
                self.block_stats(m).map(|v| {
                    v.into_iter()
                        .map(|b| BlockStat {
                            start: b.start + 1,
                            end: b.end,
                            block: b.block + 1,
                            ..b
                        })
                        .collect()
                })
            })
            .transpose()?;
        let json = Json {
            input_length: self.input_len,
            output_length: self.output_len(),
            deletions: self.deletions.iter().map(|d| d + 1).collect(),
            insertions: self
                .insertions
                .iter()
                .map(|&(p, s)| Insertion {
                    position: p + 1,
                    symbol: s,
                })
                .collect(),
            blocks,
        };
        Ok(serde_json::to_value(json).expect("ledger serializes"))
    }

    pub fn alphabet_size(&self) -> u32 {
        self.q
    }
}
