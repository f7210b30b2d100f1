//! Witness-based check of the pairwise relation `d_L(c_i, c_j) <= u(i, j)`,
//! together with the explicit counterexamples showing it fails.

use std::collections::BTreeSet;

use serde::Serialize;

use super::BoundError;
use crate::metric::{levenshtein_distance, Word};

/// Deletion positions in a word and in a common reference word that make the
/// two agree. Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EditWitness {
    word: Word,
    reference: Word,
    deletion_positions: BTreeSet<usize>,
    reference_deletions: BTreeSet<usize>,
}

fn delete_positions(w: &Word, positions: &BTreeSet<usize>) -> Vec<u32> {
    w.symbols()
        .iter()
        .enumerate()
        .filter(|(i, _)| !positions.contains(&(i + 1)))
        .map(|(_, &s)| s)
        .collect()
}

impl EditWitness {
    pub fn new(
        word: Word,
        reference: Word,
        deletion_positions: impl IntoIterator<Item = usize>,
        reference_deletions: impl IntoIterator<Item = usize>,
    ) -> Result<Self, BoundError> {
        let deletion_positions: BTreeSet<usize> = deletion_positions.into_iter().collect();
        let reference_deletions: BTreeSet<usize> = reference_deletions.into_iter().collect();
        let bad = |msg: String| BoundError::InconsistentWitness(msg);
        if word.alphabet_size() != reference.alphabet_size() {
            return Err(bad("word and reference use different alphabets".into()));
        }
        if let Some(&p) = deletion_positions.iter().find(|&&p| p == 0 || p > word.len()) {
            return Err(bad(format!("position {p} outside word of length {}", word.len())));
        }
        if let Some(&p) = reference_deletions.iter().find(|&&p| p == 0 || p > reference.len()) {
            return Err(bad(format!(
                "position {p} outside reference of length {}",
                reference.len()
            )));
        }
        if delete_positions(&word, &deletion_positions) != delete_positions(&reference, &reference_deletions) {
            return Err(bad(format!(
                "deleting {deletion_positions:?} from {word} and {reference_deletions:?} from {reference} gives different words"
            )));
        }
        Ok(EditWitness {
            word,
            reference,
            deletion_positions,
            reference_deletions,
        })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn reference(&self) -> &Word {
        &self.reference
    }
}

/// `|D_i ∪ D_j \ {k in D_i ∩ D_j : c_i[k] = c_j[k]}| + |E_i Δ E_j|`.
pub fn wz_u_value(wi: &EditWitness, wj: &EditWitness) -> Result<usize, BoundError> {
    if wi.reference != wj.reference {
        return Err(BoundError::InconsistentWitness(
            "witnesses refer to different reference words".into(),
        ));
    }
    if wi.word.len() != wj.word.len() {
        return Err(BoundError::InconsistentWitness(
            "witness words have different lengths".into(),
        ));
    }
    let (ci, cj) = (wi.word.symbols(), wj.word.symbols());
    let union = wi.deletion_positions.union(&wj.deletion_positions).count();
    let agreeing = wi
        .deletion_positions
        .intersection(&wj.deletion_positions)
        .filter(|&&k| ci[k - 1] == cj[k - 1])
        .count();
    let sym_diff = wi
        .reference_deletions
        .symmetric_difference(&wj.reference_deletions)
        .count();
    Ok(union - agreeing + sym_diff)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixPair {
    pub i: usize,
    pub j: usize,
    pub u: usize,
    pub distance: usize,
}

impl AppendixPair {
    pub fn refutes(&self) -> bool {
        self.distance > self.u
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixReport {
    pub pairs: Vec<AppendixPair>,
}

impl AppendixReport {
    pub fn all_refuted(&self) -> bool {
        self.pairs.iter().all(AppendixPair::refutes)
    }
}

fn word(text: &str, q: u32) -> Word {
    Word::parse(text, q).expect("static word")
}

/// Recomputes the two counterexample families: three binary codewords
/// against `01100`, and two ternary codewords against `000`.
pub fn appendix_report() -> Result<AppendixReport, BoundError> {
    let r1 = word("01100", 2);
    let first = [
        EditWitness::new(word("000000", 2), r1.clone(), [4, 5, 6], [2, 3])?,
        EditWitness::new(word("011100", 2), r1.clone(), [4], [])?,
        EditWitness::new(word("100011", 2), r1, [4, 5, 6], [1, 2])?,
    ];
    let r2 = word("000", 3);
    let second = [
        EditWitness::new(word("000111222", 3), r2.clone(), 4..=9, [])?,
        EditWitness::new(word("222111000", 3), r2, 1..=6, [])?,
    ];

    let mut pairs = Vec::new();
    let mut push = |i: usize, j: usize, a: &EditWitness, b: &EditWitness| -> Result<(), BoundError> {
        let distance =
            levenshtein_distance(a.word(), b.word()).map_err(|e| BoundError::InconsistentWitness(e.to_string()))?;
        pairs.push(AppendixPair {
            i,
            j,
            u: wz_u_value(a, b)?,
            distance,
        });
        Ok(())
    };
    push(1, 2, &first[0], &first[1])?;
    push(1, 3, &first[0], &first[2])?;
    push(2, 3, &first[1], &first[2])?;
    push(4, 5, &second[0], &second[1])?;
    Ok(AppendixReport { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_counterexamples() {
        let report = appendix_report().unwrap();
        let got: Vec<(usize, usize, usize, usize)> = report.pairs.iter().map(|p| (p.i, p.j, p.u, p.distance)).collect();
        assert_eq!(got, vec![(1, 2, 5, 6), (1, 3, 4, 6), (2, 3, 5, 6), (4, 5, 6, 12)]);
        assert!(report.all_refuted());
    }

    #[test]
    fn rejects_inconsistent_witness() {
        let r = word("01100", 2);
        assert!(EditWitness::new(word("000000", 2), r.clone(), [4, 5], [2, 3]).is_err());
        assert!(EditWitness::new(word("000000", 2), r.clone(), [7], []).is_err());
        assert!(EditWitness::new(word("000000", 2), r, [0], []).is_err());
    }

    #[test]
    fn u_value_needs_common_reference() {
        let a = EditWitness::new(word("011", 2), word("01", 2), [3], []).unwrap();
        let b = EditWitness::new(word("011", 2), word("11", 2), [1], []).unwrap();
        assert!(wz_u_value(&a, &b).is_err());
    }
}
