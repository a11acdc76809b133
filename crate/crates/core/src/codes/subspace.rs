//! Minimum-support search over the r-dimensional subspaces of a code.
//!
//! Each subspace of the k-dimensional message space is visited once, as the
//! unique r x k coefficient matrix in reduced row echelon form: pick the pivot
//! columns (lexicographic order), then run an odometer over the free entries.
//! Every coefficient row is kept as a base-p message index, so the support of
//! the image subspace is the OR of r precomputed codeword supports.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::LinearCode;
use crate::linalg::bits::words_for;
use crate::linalg::FMatrix;

/// Upper limit on precomputed support words (32 MiB).
const TABLE_WORDS: u64 = 1 << 22;
/// Upper limit on codeword entries held while building the table (p > 2).
const TABLE_RESIDUES: u64 = 1 << 25;
/// Approximate subspaces per work unit.
const UNIT_SIZE: u64 = 1 << 16;

/// Supports of codewords, addressed by message index `sum c_j p^j`.
pub(crate) struct Codebook<'a> {
    code: &'a LinearCode,
    p: u64,
    stride: usize,
    table: Option<Vec<u64>>,
}

impl<'a> Codebook<'a> {
    pub fn new(code: &'a LinearCode) -> Self {
        let p = code.field().p() as u64;
        let k = code.dimension();
        let n = code.length();
        let stride = words_for(n).max(1);
        let size = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        let fits = size * stride as u128 <= TABLE_WORDS as u128
            && (p == 2 || size * n as u128 <= TABLE_RESIDUES as u128);
        let table = fits.then(|| build_table(code, size as usize, stride));
        Self {
            code,
            p,
            stride,
            table,
        }
    }

    #[inline]
    fn or_support(&self, idx: u64, acc: &mut [u64]) {
        match &self.table {
            Some(t) => {
                let s = &t[idx as usize * self.stride..(idx as usize + 1) * self.stride];
                for (a, w) in acc.iter_mut().zip(s) {
                    *a |= *w;
                }
            }
            None => {
                let cw = self.codeword(idx);
                for (j, &x) in cw.iter().enumerate() {
                    if x != 0 {
                        acc[j / 64] |= 1 << (j % 64);
                    }
                }
            }
        }
    }

    pub fn message(&self, mut idx: u64) -> Vec<u16> {
        let k = self.code.dimension();
        let mut c = vec![0u16; k];
        for slot in c.iter_mut() {
            *slot = (idx % self.p) as u16;
            idx /= self.p;
        }
        c
    }

    pub fn codeword(&self, idx: u64) -> Vec<u16> {
        let f = self.code.field();
        let gen = self.code.generator();
        let mut out = vec![0u16; self.code.length()];
        for (j, &c) in self.message(idx).iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(gen.row(j)) {
                *o = f.add(*o, f.mul(c, g));
            }
        }
        out
    }
}

fn build_table(code: &LinearCode, size: usize, stride: usize) -> Vec<u64> {
    let gen = code.generator();
    let f = code.field();
    let n = code.length();
    let mut table = vec![0u64; size * stride];
    if f.is_binary() {
        let rows = crate::linalg::bits::BitRows::from_residues(gen.rows(), n, &residues(gen));
        for idx in 1..size {
            let low = idx.trailing_zeros() as usize;
            let prev = idx & (idx - 1);
            for w in 0..stride {
                table[idx * stride + w] = table[prev * stride + w] ^ rows.row(low)[w];
            }
        }
        return table;
    }
    let p = f.p() as usize;
    let mut words = vec![0u16; size * n];
    let mut block = 1;
    for j in 0..gen.rows() {
        for a in 1..p {
            for t in 0..block {
                let dst = (a * block + t) * n;
                for c in 0..n {
                    words[dst + c] = f.add(words[t * n + c], f.mul(a as u16, gen.get(j, c)));
                }
            }
        }
        block *= p;
    }
    for idx in 0..size {
        for c in 0..n {
            if words[idx * n + c] != 0 {
                table[idx * stride + c / 64] |= 1 << (c % 64);
            }
        }
    }
    table
}

fn residues(m: &FMatrix) -> Vec<u16> {
    m.row_iter().flat_map(|r| r.iter().copied()).collect()
}

/// One pivot pattern of the r x k echelon coefficient matrix.
struct Pattern {
    /// message index of each row with all free entries zero
    base: Vec<u64>,
    /// (row, weight p^col) for each free entry, row-major
    slots: Vec<(usize, u64)>,
    /// how many leading slots are fixed per work unit
    prefix: usize,
}

struct Unit {
    pattern: usize,
    prefix_value: u64,
}

pub(crate) struct MinSupport {
    pub value: usize,
    pub rows: Vec<u64>,
}

fn combinations(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..r).collect();
    if r > k {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..r).rev().find(|&i| cur[i] != i + k - r) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..r {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Least support size over r-dimensional subspaces, returning the first
/// minimizer in canonical order. Stops as soon as `lower_bound` is attained.
pub(crate) fn min_support(book: &Codebook<'_>, r: usize, lower_bound: usize) -> MinSupport {
    let k = book.code.dimension();
    let p = book.p;
    debug_assert!(1 <= r && r <= k);
    let pw: Vec<u64> = (0..k).map(|j| p.pow(j as u32)).collect();
    let mut inner_max = 0;
    while p.pow(inner_max as u32 + 1) <= UNIT_SIZE {
        inner_max += 1;
    }

    let mut patterns = Vec::new();
    let mut units = Vec::new();
    for pivots in combinations(k, r) {
        let mut slots = Vec::new();
        for (row, &pc) in pivots.iter().enumerate() {
            for col in pc + 1..k {
                if !pivots.contains(&col) {
                    slots.push((row, pw[col]));
                }
            }
        }
        let prefix = slots.len().saturating_sub(inner_max);
        let id = patterns.len();
        units.extend((0..p.pow(prefix as u32)).map(|v| Unit {
            pattern: id,
            prefix_value: v,
        }));
        patterns.push(Pattern {
            base: pivots.iter().map(|&c| pw[c]).collect(),
            slots,
            prefix,
        });
    }

    let stop = AtomicUsize::new(usize::MAX);
    let best = units
        .par_iter()
        .enumerate()
        .filter_map(|(uid, unit)| {
            if uid > stop.load(Ordering::Relaxed) {
                return None;
            }
            let found = scan_unit(
                book,
                &patterns[unit.pattern],
                unit.prefix_value,
                lower_bound,
                || uid > stop.load(Ordering::Relaxed),
            )?;
            if found.value <= lower_bound {
                stop.fetch_min(uid, Ordering::Relaxed);
            }
            Some((found.value, uid, found.rows))
        })
        .min_by_key(|(v, uid, _)| (*v, *uid))
        .expect("at least one subspace");
    MinSupport {
        value: best.0,
        rows: best.2,
    }
}

fn scan_unit(
    book: &Codebook<'_>,
    pat: &Pattern,
    prefix_value: u64,
    lower_bound: usize,
    cancelled: impl Fn() -> bool,
) -> Option<MinSupport> {
    let p = book.p;
    let nslots = pat.slots.len();
    let mut digits = vec![0u64; nslots];
    let mut rows = pat.base.clone();
    let mut v = prefix_value;
    for s in (0..pat.prefix).rev() {
        digits[s] = v % p;
        v /= p;
        let (row, w) = pat.slots[s];
        rows[row] += digits[s] * w;
    }
    let mut acc = vec![0u64; book.stride];
    let mut best: Option<MinSupport> = None;
    let mut ticks = 0u32;
    loop {
        acc.iter_mut().for_each(|a| *a = 0);
        for &idx in &rows {
            book.or_support(idx, &mut acc);
        }
        let weight: usize = acc.iter().map(|w| w.count_ones() as usize).sum();
        if best.as_ref().is_none_or(|b| weight < b.value) {
            best = Some(MinSupport {
                value: weight,
                rows: rows.clone(),
            });
            if weight <= lower_bound {
                return best;
            }
        }
        // odometer over the inner slots, last slot fastest
        let mut s = nslots;
        loop {
            if s == pat.prefix {
                return best;
            }
            s -= 1;
            let (row, w) = pat.slots[s];
            if digits[s] + 1 < p {
                digits[s] += 1;
                rows[row] += w;
                break;
            }
            rows[row] -= (p - 1) * w;
            digits[s] = 0;
        }
        ticks = ticks.wrapping_add(1);
        if ticks.is_multiple_of(4096) && cancelled() {
            return None;
        }
    }
}

/// Basis rows of the subspace spanned by the given message indices.
pub(crate) fn basis_rows(book: &Codebook<'_>, rows: &[u64]) -> FMatrix {
    let code = book.code;
    let mut data = Vec::with_capacity(rows.len() * code.length());
    for &idx in rows {
        data.extend(book.codeword(idx));
    }
    FMatrix::from_residues(code.field(), rows.len(), code.length(), data)
        .expect("codewords are residues")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::gaussian_binomial;
    use crate::linalg::FieldSpec;

    #[test]
    fn combination_order() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    /// Walks every canonical coefficient matrix and checks that the count
    /// matches the Gaussian binomial and that no subspace repeats.
    #[test]
    fn enumeration_visits_each_subspace_once() {
        for (p, k, r) in [
            (2u64, 4usize, 2usize),
            (3, 3, 1),
            (3, 4, 2),
            (5, 3, 2),
            (2, 5, 3),
        ] {
            let f = FieldSpec::new(p).unwrap();
            let code = LinearCode::from_generator(&FMatrix::identity(f, k));
            let book = Codebook::new(&code);
            let mut seen = std::collections::HashSet::new();
            let pw: Vec<u64> = (0..k).map(|j| p.pow(j as u32)).collect();
            for pivots in combinations(k, r) {
                let mut slots = Vec::new();
                for (row, &pc) in pivots.iter().enumerate() {
                    for col in pc + 1..k {
                        if !pivots.contains(&col) {
                            slots.push((row, pw[col]));
                        }
                    }
                }
                for v in 0..p.pow(slots.len() as u32) {
                    let mut rows: Vec<u64> = pivots.iter().map(|&c| pw[c]).collect();
                    let mut x = v;
                    for &(row, w) in &slots {
                        rows[row] += (x % p) * w;
                        x /= p;
                    }
                    let basis = basis_rows(&book, &rows);
                    let canon = basis.rref();
                    assert_eq!(canon.rank, r);
                    assert!(seen.insert(canon.matrix));
                }
            }
            assert_eq!(
                gaussian_binomial(k, r, p),
                num_bigint::BigUint::from(seen.len())
            );
        }
    }

    #[test]
    fn table_and_direct_codewords_agree() {
        let f = FieldSpec::new(3).unwrap();
        let gen = FMatrix::from_rows(f, &[[1, 0, 2, 1], [0, 1, 1, 2]]).unwrap();
        let code = LinearCode::from_generator(&gen);
        let book = Codebook::new(&code);
        assert!(book.table.is_some());
        for idx in 0..9 {
            let mut a = vec![0u64; 1];
            book.or_support(idx, &mut a);
            let direct = book.codeword(idx);
            let mask = direct
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .fold(0u64, |m, (j, _)| m | 1 << j);
            assert_eq!(a[0], mask);
        }
    }
}
