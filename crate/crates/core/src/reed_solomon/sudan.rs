//! Sudan list recovery: interpolate a low weighted-degree `Q(x, y)` through
//! the pairs, then extract its `y`-roots of the form `y - f(x)`.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::field::PrimeField;
use super::poly::Polynomial;
use super::{FieldError, PairSet};

/// `rows[j]` holds the `x`-coefficients of `y^j`.
type Bivariate = Vec<Vec<u64>>;

/// One nonzero solution of the homogeneous system, if any exists.
fn kernel_vector(f: PrimeField, mut rows: Vec<Vec<u64>>, cols: usize) -> Option<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for cc in c..cols {
                    row[cc] = f.sub(row[cc], f.mul(factor, pivot[cc]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![0; cols];
    v[free] = 1;
    for (ri, &pc) in pivots.iter().enumerate() {
        v[pc] = f.sub(0, rows[ri][free]);
    }
    Some(v)
}

/// `|J| + 1` monomials `x^i y^j` with `i + (k-1) j <= max_wdeg`, lowest `y`
/// powers first.
fn monomials(count: usize, k: usize, max_wdeg: usize) -> Option<Vec<(usize, usize)>> {
    let w = k - 1;
    let mut out = Vec::with_capacity(count);
    let mut j = 0;
    while out.len() < count {
        if w * j > max_wdeg {
            return None;
        }
        for i in 0..=max_wdeg - w * j {
            out.push((i, j));
            if out.len() == count {
                break;
            }
        }
        j += 1;
    }
    Some(out)
}

fn interpolate(j_set: &PairSet, k: usize, max_wdeg: usize) -> Option<Bivariate> {
    let f = j_set.field();
    let mons = monomials(j_set.len() + 1, k, max_wdeg)?;
    let rows: Vec<Vec<u64>> = j_set
        .raw_pairs()
        .map(|(a, b)| {
            mons.iter()
                .map(|&(i, j)| f.mul(f.pow(a, i as u64), f.pow(b, j as u64)))
                .collect()
        })
        .collect();
    let v = kernel_vector(f, rows, mons.len())?;
    let y_deg = mons.iter().map(|m| m.1).max().unwrap_or(0);
    let mut q: Bivariate = vec![Vec::new(); y_deg + 1];
    for (&(i, j), c) in mons.iter().zip(v) {
        if q[j].len() <= i {
            q[j].resize(i + 1, 0);
        }
        q[j][i] = c;
    }
    Some(q)
}

fn strip_x(q: &mut Bivariate) {
    let shift = q
        .iter()
        .filter_map(|row| row.iter().position(|&c| c != 0))
        .min()
        .unwrap_or(0);
    for row in q.iter_mut() {
        row.drain(..shift.min(row.len()));
    }
}

fn eval_y(f: PrimeField, coeffs: &[u64], y: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, y), c))
}

/// `Q(x, x*y + g)`.
fn shift(f: PrimeField, q: &Bivariate, g: u64, binom: &[Vec<u64>]) -> Bivariate {
    let mut out: Bivariate = vec![Vec::new(); q.len()];
    for (j, row) in q.iter().enumerate() {
        for (l, slot) in out.iter_mut().enumerate().take(j + 1) {
            let scale = f.mul(binom[j][l], f.pow(g, (j - l) as u64));
            if scale == 0 {
                continue;
            }
            if slot.len() < row.len() + l {
                slot.resize(row.len() + l, 0);
            }
            for (i, &c) in row.iter().enumerate() {
                slot[i + l] = f.add(slot[i + l], f.mul(c, scale));
            }
        }
    }
    out
}

fn roots(
    f: PrimeField,
    mut q: Bivariate,
    k: usize,
    binom: &[Vec<u64>],
    prefix: &mut Vec<u64>,
    out: &mut BTreeSet<Vec<u64>>,
) {
    if prefix.len() == k {
        out.insert(prefix.clone());
        return;
    }
    strip_x(&mut q);
    let q0: Vec<u64> = q.iter().map(|row| row.first().copied().unwrap_or(0)).collect();
    for g in 0..f.p() {
        if eval_y(f, &q0, g) == 0 {
            let next = shift(f, &q, g, binom);
            prefix.push(g);
            roots(f, next, k, binom, prefix, out);
            prefix.pop();
        }
    }
}

fn binomials_mod(f: PrimeField, n: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut row = vec![1u64; j + 1];
        for l in 1..j {
            row[l] = f.add(rows[j - 1][l - 1], rows[j - 1][l]);
        }
        rows.push(row);
    }
    rows
}

/// Every polynomial of degree `< k` agreeing with at least `threshold` pairs
/// of `j_set`. Requires `threshold^2 > 2 k |J|`.
pub fn sudan_list_recover(j_set: &PairSet, k: usize, threshold: usize) -> Result<Vec<Polynomial>, FieldError> {
    if k == 0 {
        return Err(FieldError::ZeroDegreeBound);
    }
    let size = j_set.len();
    if (threshold as u128).pow(2) <= 2 * k as u128 * size as u128 {
        return Err(FieldError::Regime {
            threshold,
            k,
            pairs: size,
        });
    }
    let f = j_set.field();
    let q = interpolate(j_set, k, threshold - 1).ok_or(FieldError::Regime {
        threshold,
        k,
        pairs: size,
    })?;
    let binom = binomials_mod(f, q.len());
    let mut candidates = BTreeSet::new();
    roots(f, q, k, &binom, &mut Vec::with_capacity(k), &mut candidates);
    let mut found: Vec<Polynomial> = candidates
        .into_iter()
        .map(|c| Polynomial::new(f, c))
        .filter(|poly| j_set.agreement(poly) >= threshold)
        .collect();
    found.sort();
    found.dedup();
    Ok(found)
}

/// Exhaustive search over all `p^k` polynomials. Fails when `p^k > cap`.
pub fn brute_force_list_recover(
    j_set: &PairSet,
    k: usize,
    threshold: usize,
    cap: u64,
) -> Result<Vec<Polynomial>, FieldError> {
    let f = j_set.field();
    let total = (f.p() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(FieldError::SearchTooLarge { size: total, cap });
    }
    let p = f.p();
    let mut found: Vec<Polynomial> = (0..total as u64)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut coeffs = Vec::with_capacity(k);
            for _ in 0..k {
                coeffs.push(idx % p);
                idx /= p;
            }
            let poly = Polynomial::new(f, coeffs);
            (j_set.agreement(&poly) >= threshold).then_some(poly)
        })
        .collect();
    found.sort();
    Ok(found)
}
