//! Prime fields, univariate polynomials, Reed-Solomon encoding and list
//! recovery.

mod field;
mod poly;
mod sudan;

use std::collections::BTreeSet;

use thiserror::Error;

pub use field::{is_prime, smallest_prime_at_least, FieldElement, PrimeField};
pub use poly::Polynomial;
pub use sudan::{brute_force_list_recover, sudan_list_recover};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("operands live in different fields (F_{0} vs F_{1})")]
    FieldMismatch(u64, u64),
    #[error("evaluation points must be distinct")]
    DuplicatePoints,
    #[error("message length {k} exceeds code length {n}")]
    MessageTooLong { k: usize, n: usize },
    #[error("degree bound k must be at least 1")]
    ZeroDegreeBound,
    #[error("list recovery needs threshold^2 > 2*k*|J|, got threshold={threshold}, k={k}, |J|={pairs}")]
    Regime { threshold: usize, k: usize, pairs: usize },
    #[error("exhaustive search over {size} polynomials exceeds cap {cap}")]
    SearchTooLarge { size: u128, cap: u64 },
}

/// A set of distinct `(alpha, beta)` pairs. Several `beta` per `alpha` are
/// allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    field: PrimeField,
    pairs: BTreeSet<(u64, u64)>,
}

impl PairSet {
    pub fn new(field: PrimeField) -> Self {
        PairSet {
            field,
            pairs: BTreeSet::new(),
        }
    }

    pub fn from_pairs(
        field: PrimeField,
        pairs: impl IntoIterator<Item = (FieldElement, FieldElement)>,
    ) -> Result<Self, FieldError> {
        let mut set = PairSet::new(field);
        for (a, b) in pairs {
            set.insert(a, b)?;
        }
        Ok(set)
    }

    /// Returns whether the pair was new.
    pub fn insert(&mut self, alpha: FieldElement, beta: FieldElement) -> Result<bool, FieldError> {
        for e in [alpha, beta] {
            if e.field() != self.field {
                return Err(FieldError::FieldMismatch(self.field.p(), e.field().p()));
            }
        }
        Ok(self.pairs.insert((alpha.value(), beta.value())))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, alpha: FieldElement, beta: FieldElement) -> bool {
        self.pairs.contains(&(alpha.value(), beta.value()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (FieldElement, FieldElement)> + '_ {
        self.pairs
            .iter()
            .map(|&(a, b)| (self.field.elem(a), self.field.elem(b)))
    }

    pub(crate) fn raw_pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.pairs.iter().copied()
    }

    /// Number of pairs lying on the graph of `f`.
    pub fn agreement(&self, f: &Polynomial) -> usize {
        self.pairs.iter().filter(|&&(a, b)| f.eval_raw(a) == b).count()
    }
}

/// Evaluations of `s_1 + s_2 x + ... + s_k x^(k-1)` at the given points.
pub fn rs_encode(message: &[FieldElement], points: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
    let Some(first) = points.first() else {
        return if message.is_empty() {
            Ok(Vec::new())
        } else {
            Err(FieldError::MessageTooLong { k: message.len(), n: 0 })
        };
    };
    let field = first.field();
    if message.len() > points.len() {
        return Err(FieldError::MessageTooLong {
            k: message.len(),
            n: points.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for x in points {
        if x.field() != field {
            return Err(FieldError::FieldMismatch(field.p(), x.field().p()));
        }
        if !seen.insert(x.value()) {
            return Err(FieldError::DuplicatePoints);
        }
    }
    let poly = Polynomial::from_elements(field, message)?;
    points.iter().map(|&x| poly.eval(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn elems(field: PrimeField, v: &[u64]) -> Vec<FieldElement> {
        v.iter().map(|&x| field.elem(x)).collect()
    }

    #[test]
    fn encode_examples() {
        let field = f(7);
        let pts = elems(field, &[0, 1, 2, 3, 4, 5, 6]);
        let out = rs_encode(&elems(field, &[1, 1]), &pts).unwrap();
        assert_eq!(out, elems(field, &[1, 2, 3, 4, 5, 6, 0]));
        let constant = rs_encode(&elems(field, &[4]), &pts).unwrap();
        assert!(constant.iter().all(|&c| c == field.elem(4)));
        assert_eq!(
            rs_encode(&elems(field, &[1]), &elems(field, &[2, 2])),
            Err(FieldError::DuplicatePoints)
        );
        assert_eq!(
            rs_encode(&elems(field, &[1, 2, 3]), &elems(field, &[0, 1])),
            Err(FieldError::MessageTooLong { k: 3, n: 2 })
        );
    }

    #[test]
    fn minimum_distance_is_n_minus_k_plus_one() {
        // exhaustive pairwise check: distinct messages differ in >= 6 of 7 positions
        let field = f(7);
        let pts = elems(field, &[0, 1, 2, 3, 4, 5, 6]);
        let words: Vec<Vec<FieldElement>> = (0..49)
            .map(|i| rs_encode(&elems(field, &[i % 7, i / 7]), &pts).unwrap())
            .collect();
        let mut min = usize::MAX;
        for a in 0..words.len() {
            for b in a + 1..words.len() {
                min = min.min(words[a].iter().zip(&words[b]).filter(|(x, y)| x != y).count());
            }
        }
        assert_eq!(min, 6);
    }

    #[test]
    fn noiseless_recovery() {
        let field = f(11);
        let poly = Polynomial::new(field, [3, 5]);
        let j = PairSet::from_pairs(field, field.elements().map(|a| (a, poly.eval(a).unwrap()))).unwrap();
        assert_eq!(sudan_list_recover(&j, 2, 11).unwrap(), vec![poly]);
    }

    fn two_graphs(p: u64) -> (PairSet, Polynomial, Polynomial) {
        let field = f(p);
        let f1 = Polynomial::new(field, [1, 2]);
        let f2 = Polynomial::new(field, [4, 6]);
        let mut j = PairSet::new(field);
        for a in field.elements() {
            j.insert(a, f1.eval(a).unwrap()).unwrap();
            j.insert(a, f2.eval(a).unwrap()).unwrap();
        }
        (j, f1, f2)
    }

    #[test]
    fn two_graphs_both_returned() {
        // over F_7 two lines cannot both clear threshold^2 > 4|J|; only the
        // exhaustive search applies there
        let (j, f1, f2) = two_graphs(7);
        assert_eq!(j.len(), 13);
        assert!(matches!(sudan_list_recover(&j, 2, 7), Err(FieldError::Regime { .. })));
        assert_eq!(brute_force_list_recover(&j, 2, 7, 1 << 20).unwrap(), vec![f1, f2]);

        let (j, f1, f2) = two_graphs(11);
        assert_eq!(j.len(), 21);
        let got = sudan_list_recover(&j, 2, 11).unwrap();
        assert_eq!(got, brute_force_list_recover(&j, 2, 11, 1 << 20).unwrap());
        assert_eq!(got, vec![f1, f2]);
    }

    #[test]
    fn regime_violation_reported() {
        let field = f(7);
        let j = PairSet::from_pairs(field, field.elements().map(|a| (a, a))).unwrap();
        assert_eq!(
            sudan_list_recover(&j, 2, 5),
            Err(FieldError::Regime {
                threshold: 5,
                k: 2,
                pairs: 7
            })
        );
        assert_eq!(sudan_list_recover(&j, 0, 5), Err(FieldError::ZeroDegreeBound));
    }

    #[test]
    fn brute_force_cap() {
        let field = f(13);
        let j = PairSet::new(field);
        assert!(matches!(
            brute_force_list_recover(&j, 6, 1, 1000),
            Err(FieldError::SearchTooLarge { .. })
        ));
    }

    type Instance = (u64, usize, Vec<(u64, u64)>, Vec<Vec<u64>>);

    fn pair_set_strategy() -> impl Strategy<Value = Instance> {
        (prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), 1usize..=3).prop_flat_map(|(p, k)| {
            (
                Just(p),
                Just(k),
                prop::collection::vec((0..p, 0..p), 0..=40),
                prop::collection::vec(prop::collection::vec(0..p, k), 0..=3),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn sudan_matches_brute_force((p, k, noise, planted) in pair_set_strategy()) {
            let field = f(p);
            let mut j = PairSet::new(field);
            for coeffs in &planted {
                let poly = Polynomial::new(field, coeffs.iter().copied());
                for a in field.elements() {
                    j.insert(a, poly.eval(a).unwrap()).unwrap();
                }
            }
            for (a, b) in noise {
                if j.len() >= 40 {
                    break;
                }
                j.insert(field.elem(a), field.elem(b)).unwrap();
            }
            // smallest threshold inside the regime
            let threshold = (2 * k * j.len()).isqrt() + 1;
            let got = sudan_list_recover(&j, k, threshold).unwrap();
            let oracle = brute_force_list_recover(&j, k, threshold, 1 << 20).unwrap();
            prop_assert_eq!(&got, &oracle);
            prop_assert!(got.len() <= (2 * j.len() / k).isqrt());
            for poly in &got {
                prop_assert!(j.agreement(poly) >= threshold);
                prop_assert!(poly.degree().is_none_or(|d| d < k));
            }
        }

        #[test]
        fn encode_then_interpolate((p, msg, picks) in (prop::sample::select(vec![5u64, 7, 11, 13]))
            .prop_flat_map(|p| (Just(p), prop::collection::vec(0..p, 1..=p as usize),
                                 prop::sample::subsequence((0..p).collect::<Vec<_>>(), p as usize))))
        {
            let field = f(p);
            let pts: Vec<FieldElement> = field.elements().collect();
            let code = rs_encode(&elems(field, &msg), &pts).unwrap();
            let chosen: Vec<_> = picks.iter().take(msg.len())
                .map(|&i| (pts[i as usize], code[i as usize])).collect();
            let back = Polynomial::interpolate(field, &chosen).unwrap();
            prop_assert_eq!(back.padded(msg.len()), elems(field, &msg));
        }
    }
}
