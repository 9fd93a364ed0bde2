//! Partial orders up to isomorphism.
//!
//! Every poset on `n` elements is a poset on `n - 1` elements plus a maximal
//! element whose past is a down-set, so level `n` is generated from level
//! `n - 1` and deduplicated by canonical code.

use std::collections::BTreeMap;

use crate::causet::Causet;
use crate::error::{Error, Result};

/// Largest element count [`enumerate_causets`] accepts.
pub const MAX_ENUMERATION: usize = 7;

/// Lexicographically least relation matrix over all relabellings, read row by
/// row with the first entry most significant, together with the predecessor
/// rows under a minimizing labelling.
///
/// Only labellings listing elements by increasing `(past size, future size)`
/// are tried. An isomorphism preserves these sizes, so isomorphic orders try
/// the same set of matrices and get the same minimum.
pub fn canonical_form(preds: &[u64]) -> (u64, Vec<u64>) {
    let n = preds.len();
    assert!(n * n <= 64, "canonical codes cover at most 8 elements");
    let mut up = vec![0u32; n];
    for &row in preds {
        for (x, u) in up.iter_mut().enumerate() {
            if row >> x & 1 == 1 {
                *u += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (preds[x].count_ones(), up[x], x));
    let keys: Vec<(u32, u32)> = order.iter().map(|&x| (preds[x].count_ones(), up[x])).collect();

    let mut search = Search { preds, keys: &keys, order: &order, label: Vec::with_capacity(n), used: 0, best: None };
    search.run();
    let (code, label) = search.best.expect("at least one labelling");
    let mut position = vec![0usize; n];
    for (new, &old) in label.iter().enumerate() {
        position[old] = new;
    }
    let rows = label
        .iter()
        .map(|&old| {
            let mut row = 0u64;
            for (x, &at) in position.iter().enumerate() {
                if preds[old] >> x & 1 == 1 {
                    row |= 1 << at;
                }
            }
            row
        })
        .collect();
    (code, rows)
}

struct Search<'a> {
    preds: &'a [u64],
    keys: &'a [(u32, u32)],
    order: &'a [usize],
    label: Vec<usize>,
    used: u64,
    best: Option<(u64, Vec<usize>)>,
}

impl Search<'_> {
    fn run(&mut self) {
        let pos = self.label.len();
        let n = self.order.len();
        if pos == n {
            let code = matrix_code(self.preds, &self.label);
            if self.best.as_ref().is_none_or(|(b, _)| code < *b) {
                self.best = Some((code, self.label.clone()));
            }
            return;
        }
        for (k, &x) in self.order.iter().enumerate() {
            if self.keys[k] == self.keys[pos] && self.used >> x & 1 == 0 {
                self.used |= 1 << x;
                self.label.push(x);
                self.run();
                self.label.pop();
                self.used &= !(1 << x);
            }
        }
    }
}

/// Relation matrix of `preds` under `label` (new position to old element).
fn matrix_code(preds: &[u64], label: &[usize]) -> u64 {
    let mut code = 0u64;
    for &xi in label {
        for &xj in label {
            code = code << 1 | (preds[xj] >> xi & 1);
        }
    }
    code
}

/// Canonical code with its predecessor rows.
pub type Canonical = (u64, Vec<u64>);

pub fn canonical_code(causet: &Causet) -> u64 {
    canonical_form(causet.predecessor_rows()).0
}

/// Canonical predecessor rows of every poset on `0..=n` elements, one level
/// per size, each in increasing code order.
pub fn enumerate_levels(n: usize) -> Result<Vec<Vec<Canonical>>> {
    if n > MAX_ENUMERATION {
        return Err(Error::Limit(format!(
            "enumeration up to isomorphism is limited to {MAX_ENUMERATION} elements, got {n}"
        )));
    }
    let mut levels = vec![vec![(0u64, Vec::new())]];
    for k in 1..=n {
        let mut next: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for (_, rows) in &levels[k - 1] {
            for down in down_sets(rows) {
                let mut extended = rows.clone();
                extended.push(down);
                let (code, canonical) = canonical_form(&extended);
                next.entry(code).or_insert(canonical);
            }
        }
        levels.push(next.into_iter().collect());
    }
    Ok(levels)
}

/// Subsets closed under taking predecessors.
fn down_sets(preds: &[u64]) -> Vec<u64> {
    let n = preds.len();
    (0u64..1 << n)
        .filter(|&s| (0..n).all(|x| s >> x & 1 == 0 || preds[x] & !s == 0))
        .collect()
}

/// All causets on `n` elements up to isomorphism, in canonical form and in
/// increasing code order. Elements are named `e0, e1, …`.
pub fn enumerate_causets(n: usize) -> Result<Vec<Causet>> {
    let levels = enumerate_levels(n)?;
    levels[n]
        .iter()
        .map(|(_, rows)| Causet::from_closed_rows(rows.clone()))
        .collect()
}
