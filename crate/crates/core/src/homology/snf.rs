//! Integer Smith normal form and modular rank for sparse matrices.
//!
//! Unit pivots are eliminated sparsely first; whatever is left (usually a
//! handful of rows) goes through a dense big-integer Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

/// Sparse row: `(column, value)` sorted by column, no zeros.
pub type SparseRow = Vec<(usize, i64)>;

struct Overflow;

/// `target - factor * src`, merging sorted rows.
fn axpy_i64(target: &[(usize, i64)], src: &[(usize, i64)], factor: i64) -> Result<SparseRow, Overflow> {
    let mut out = Vec::with_capacity(target.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < src.len() {
        let ci = target.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = src.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(target[i]);
            i += 1;
        } else {
            let prod = src[j].1.checked_mul(factor).ok_or(Overflow)?;
            let v = if ci == cj {
                let v = target[i].1.checked_sub(prod).ok_or(Overflow)?;
                i += 1;
                v
            } else {
                prod.checked_neg().ok_or(Overflow)?
            };
            if v != 0 {
                out.push((cj, v));
            }
            j += 1;
        }
    }
    Ok(out)
}

struct Sparse {
    rows: Vec<SparseRow>,
    col_rows: Vec<HashSet<usize>>,
    alive: Vec<bool>,
}

impl Sparse {
    fn new(rows: Vec<SparseRow>, ncols: usize) -> Self {
        let mut col_rows = vec![HashSet::new(); ncols];
        for (r, row) in rows.iter().enumerate() {
            for &(c, _) in row {
                col_rows[c].insert(r);
            }
        }
        let alive = rows.iter().map(|r| !r.is_empty()).collect();
        Sparse { rows, col_rows, alive }
    }

    fn replace_row(&mut self, r: usize, new: SparseRow) {
        for &(c, _) in &self.rows[r] {
            self.col_rows[c].remove(&r);
        }
        for &(c, _) in &new {
            self.col_rows[c].insert(r);
        }
        if new.is_empty() {
            self.alive[r] = false;
        }
        self.rows[r] = new;
    }

    /// Eliminates with pivots accepted by `is_pivot`; `combine(row_r, row_p, a_rc, a_pc)`
    /// returns the updated row `r`. Returns the number of pivots used.
    fn eliminate<F, C>(&mut self, is_pivot: F, mut combine: C) -> Result<usize, Overflow>
    where
        F: Fn(i64) -> bool,
        C: FnMut(&SparseRow, &SparseRow, i64, i64) -> Result<SparseRow, Overflow>,
    {
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(i, r)| Reverse((r.len(), i)))
            .collect();
        let mut pivots = 0;
        while let Some(Reverse((len, p))) = heap.pop() {
            if !self.alive[p] || self.rows[p].len() != len {
                if self.alive[p] && self.rows[p].len() != len {
                    heap.push(Reverse((self.rows[p].len(), p)));
                }
                continue;
            }
            let choice = self.rows[p]
                .iter()
                .filter(|e| is_pivot(e.1))
                .min_by_key(|e| (self.col_rows[e.0].len(), e.0))
                .copied();
            let Some((c, a_pc)) = choice else { continue };
            let mut others: Vec<usize> = self.col_rows[c].iter().copied().filter(|&r| r != p).collect();
            others.sort_unstable();
            let prow = self.rows[p].clone();
            for r in others {
                let a_rc = self.rows[r].iter().find(|e| e.0 == c).unwrap().1;
                let new = combine(&self.rows[r], &prow, a_rc, a_pc)?;
                self.replace_row(r, new);
                if self.alive[r] {
                    heap.push(Reverse((self.rows[r].len(), r)));
                }
            }
            self.replace_row(p, Vec::new());
            pivots += 1;
        }
        Ok(pivots)
    }
}

/// Nonzero invariant factors (absolute values, divisibility chain, ascending).
pub fn invariant_factors(rows: Vec<SparseRow>, ncols: usize) -> Vec<BigInt> {
    let backup = rows.clone();
    let mut sp = Sparse::new(rows, ncols);
    let res = sp.eliminate(|v| v == 1 || v == -1, |r, p, a_rc, a_pc| axpy_i64(r, p, a_rc * a_pc));
    match res {
        Ok(units) => {
            let rest: Vec<SparseRow> = sp.rows.into_iter().filter(|r| !r.is_empty()).collect();
            let mut out = vec![BigInt::one(); units];
            out.extend(dense_invariant_factors(&rest));
            normalize_chain(out)
        }
        Err(Overflow) => normalize_chain(dense_invariant_factors(&backup)),
    }
}

fn dense_invariant_factors(rows: &[SparseRow]) -> Vec<BigInt> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<usize> = rows.iter().flatten().map(|e| e.0).collect();
    cols.sort_unstable();
    cols.dedup();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let mut d = vec![BigInt::zero(); cols.len()];
            for &(c, v) in r {
                d[cols.binary_search(&c).unwrap()] = BigInt::from(v);
            }
            d
        })
        .collect();
    dense_snf_diagonal(&mut a)
}

/// Reduces `a` in place to diagonal form; returns the nonzero diagonal entries.
pub fn dense_snf_diagonal(a: &mut [Vec<BigInt>]) -> Vec<BigInt> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..n {
                    let s = &q * &a[t][j];
                    a[i][j] -= s;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..m {
                    let s = &q * &a[i][t];
                    a[i][j] -= s;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
            // Move the smallest nonzero entry of row/column t to the pivot.
            let mut bi = t;
            let mut bj = t;
            for i in t..m {
                if !a[i][t].is_zero() && a[i][t].abs() < a[bi][bj].abs() {
                    bi = i;
                    bj = t;
                }
            }
            for j in t..n {
                if !a[t][j].is_zero() && a[t][j].abs() < a[bi][bj].abs() {
                    bi = t;
                    bj = j;
                }
            }
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Turns a list of nonzero diagonal entries into the invariant factor chain.
pub fn normalize_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for x in d.iter_mut() {
        *x = x.abs();
    }
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut t, mut newt, mut r, mut newr) = (0i128, 1i128, p as i128, a as i128);
    while newr != 0 {
        let q = r / newr;
        (t, newt) = (newt, t - q * newt);
        (r, newr) = (newr, r - q * newr);
    }
    (t.rem_euclid(p as i128)) as u64
}

/// Rank over the prime field `F_p`.
pub fn rank_mod_p(rows: &[SparseRow], ncols: usize, p: u64) -> usize {
    let pi = p as i64;
    let reduced: Vec<SparseRow> = rows
        .iter()
        .map(|r| r.iter().map(|&(c, v)| (c, v.rem_euclid(pi))).filter(|e| e.1 != 0).collect())
        .collect();
    let mut sp = Sparse::new(reduced, ncols);
    let res = sp.eliminate(
        |v| v != 0,
        |r, prow, a_rc, a_pc| {
            let f = ((a_rc as u128 * mod_inv(a_pc as u64, p) as u128) % p as u128) as u64;
            let mut out = Vec::with_capacity(r.len() + prow.len());
            let (mut i, mut j) = (0, 0);
            while i < r.len() || j < prow.len() {
                let ci = r.get(i).map(|e| e.0).unwrap_or(usize::MAX);
                let cj = prow.get(j).map(|e| e.0).unwrap_or(usize::MAX);
                if ci < cj {
                    out.push(r[i]);
                    i += 1;
                } else {
                    let sub = ((prow[j].1 as u128 * f as u128) % p as u128) as u64;
                    let base = if ci == cj {
                        i += 1;
                        r[i - 1].1 as u64
                    } else {
                        0
                    };
                    let v = (base + p - sub) % p;
                    if v != 0 {
                        out.push((cj, v as i64));
                    }
                    j += 1;
                }
            }
            Ok(out)
        },
    );
    res.unwrap_or_else(|_| unreachable!("modular arithmetic cannot overflow"))
}
