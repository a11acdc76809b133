//! Packed row storage for `F_2`: one bit per entry, 64 entries per word.

#[inline]
pub(crate) fn words_for(cols: usize) -> usize {
    cols.div_ceil(64)
}

/// Row-major packed bit matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitRows {
    pub rows: usize,
    pub cols: usize,
    pub stride: usize,
    pub words: Vec<u64>,
}

impl BitRows {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn from_residues(rows: usize, cols: usize, data: &[u16]) -> Self {
        let mut out = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if data[r * cols + c] & 1 == 1 {
                    out.words[r * out.stride + c / 64] |= 1 << (c % 64);
                }
            }
        }
        out
    }

    pub fn to_residues(&self) -> Vec<u16> {
        let mut data = vec![0u16; self.rows * self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[r * self.cols + c] = self.get(r, c) as u16;
            }
        }
        data
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.words[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    /// `row[dst] ^= row[src]`
    #[inline]
    fn xor_rows(&mut self, dst: usize, src: usize) {
        let s = self.stride;
        if dst == src {
            return;
        }
        let (a, b) = if dst < src {
            let (lo, hi) = self.words.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.words.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for w in 0..s {
            self.words.swap(a * s + w, b * s + w);
        }
    }

    /// In-place reduced row echelon form. Returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(found) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(next, found);
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.xor_rows(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    /// Product `self * rhs` where row `i` of the result is the XOR of the rows
    /// of `rhs` selected by the set bits of row `i` of `self`.
    pub fn mul(&self, rhs: &BitRows) -> BitRows {
        debug_assert_eq!(self.cols, rhs.rows);
        let mut out = BitRows::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let src = rhs.row(k);
                    let dst = &mut out.words[i * out.stride..(i + 1) * out.stride];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= *s;
                    }
                }
            }
        }
        out
    }
}
