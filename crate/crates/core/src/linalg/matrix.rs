use std::fmt;

use serde::{Deserialize, Serialize};

use super::bits::BitRows;
use super::field::FieldSpec;
use crate::error::{Error, Result};

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

/// Output of [`FMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub matrix: FMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod `p`.
    pub fn from_rows<R: AsRef<[i64]>>(field: FieldSpec, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| field.reduce(x)));
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from residues already in `0..p`.
    pub fn from_residues(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        data: Vec<u16>,
    ) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&x| x as u32 >= field.p()) {
            return Err(Error::InvalidArgument(format!(
                "entry {bad} is not a residue mod {}",
                field.p()
            )));
        }
        Ok(Self {
            field,
            rows,
            cols,
            data,
        })
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        debug_assert!((v as u32) < self.field.p());
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u16]> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FMatrix) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            field: self.field,
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    fn check_field(&self, other: &FMatrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.p(),
                right: other.field.p(),
            });
        }
        Ok(())
    }

    /// Reduced row echelon form. Pivots are chosen as the first nonzero entry
    /// scanning columns left to right, rows top to bottom.
    pub fn rref(&self) -> Echelon {
        if self.field.is_binary() {
            self.rref_packed()
        } else {
            self.rref_residues()
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    fn rref_packed(&self) -> Echelon {
        let mut bits = BitRows::from_residues(self.rows, self.cols, &self.data);
        let pivots = bits.rref();
        Echelon {
            matrix: Self {
                field: self.field,
                rows: self.rows,
                cols: self.cols,
                data: bits.to_residues(),
            },
            rank: pivots.len(),
            pivots,
        }
    }

    fn rref_residues(&self) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let cols = m.cols;
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..cols {
            if next == m.rows {
                break;
            }
            let Some(found) = (next..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if found != next {
                for j in 0..cols {
                    m.data.swap(found * cols + j, next * cols + j);
                }
            }
            let inv = f.inv(m.get(next, c));
            for j in c..cols {
                let v = m.get(next, j);
                m.set(next, j, f.mul(v, inv));
            }
            for r in 0..m.rows {
                let factor = m.get(r, c);
                if r == next || factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(next, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(c);
            next += 1;
        }
        Echelon {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    /// Basis of the right kernel `{v : self * v = 0}`, one vector per row, in RREF.
    pub fn nullspace(&self) -> FMatrix {
        let f = self.field;
        let Echelon {
            matrix: r, pivots, ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = FMatrix::zeros(f, free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            basis.set(i, fc, 1);
            for (row, &pc) in pivots.iter().enumerate() {
                basis.set(i, pc, f.neg(r.get(row, fc)));
            }
        }
        basis.rref().matrix
    }

    /// Exact product `self * rhs`.
    pub fn mat_mul(&self, rhs: &FMatrix) -> Result<FMatrix> {
        self.check_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = self.field;
        if f.is_binary() {
            let a = BitRows::from_residues(self.rows, self.cols, &self.data);
            let b = BitRows::from_residues(rhs.rows, rhs.cols, &rhs.data);
            let prod = a.mul(&b);
            return Ok(Self {
                field: f,
                rows: self.rows,
                cols: rhs.cols,
                data: prod.to_residues(),
            });
        }
        let p = f.p() as u64;
        let mut out = FMatrix::zeros(f, self.rows, rhs.cols);
        let mut acc = vec![0u64; rhs.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (j, slot) in acc.iter_mut().enumerate() {
                    *slot = (*slot + a * rhs.get(k, j) as u64) % p;
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.set(i, j, v as u16);
            }
        }
        Ok(out)
    }

    /// Drops all-zero rows.
    pub(crate) fn without_zero_rows(&self) -> FMatrix {
        let keep: Vec<usize> = (0..self.rows)
            .filter(|&r| self.row(r).iter().any(|&x| x != 0))
            .collect();
        let mut data = Vec::with_capacity(keep.len() * self.cols);
        for r in keep.iter() {
            data.extend_from_slice(self.row(*r));
        }
        Self {
            field: self.field,
            rows: keep.len(),
            cols: self.cols,
            data,
        }
    }
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FMatrix over {} ({}x{})",
            self.field, self.rows, self.cols
        )?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}
