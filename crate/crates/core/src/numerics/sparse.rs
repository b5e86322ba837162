use super::NumericsError;

/// Symmetric block-sparse matrix, upper triangle stored row by row.
///
/// Row `i` owns entries `row_ptr[i]..row_ptr[i + 1]`. The first entry of
/// every row is its diagonal block; the remaining entries have column
/// indices strictly greater than `i`. Each entry carries a `block x block`
/// row-major block in `blocks`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSparseSym {
    n: usize,
    block: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    blocks: Vec<f64>,
}

impl BlockSparseSym {
    pub fn new(
        n: usize,
        block: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        blocks: Vec<f64>,
    ) -> Result<Self, NumericsError> {
        let m = BlockSparseSym {
            n,
            block,
            row_ptr,
            col_idx,
            blocks,
        };
        m.validate()?;
        Ok(m)
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<(), NumericsError> {
        let bad = |msg: String| Err(NumericsError::Structure(msg));
        if self.block == 0 {
            return bad("block size must be at least 1".into());
        }
        if self.row_ptr.len() != self.n + 1 {
            return bad(format!(
                "row_ptr has {} entries for {} rows",
                self.row_ptr.len(),
                self.n
            ));
        }
        if self.row_ptr[0] != 0 || self.row_ptr[self.n] != self.col_idx.len() {
            return bad("row_ptr must start at 0 and end at the entry count".into());
        }
        if self.blocks.len() != self.col_idx.len() * self.block * self.block {
            return bad("block storage does not match entry count".into());
        }
        for i in 0..self.n {
            let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
            if hi < lo {
                return bad(format!("row_ptr decreases at row {i}"));
            }
            if hi == lo || self.col_idx[lo] != i {
                return bad(format!("row {i} does not start with its diagonal block"));
            }
            for &c in &self.col_idx[lo + 1..hi] {
                if c <= i || c >= self.n {
                    return bad(format!("row {i} stores column {c} outside the upper triangle"));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn blocks(&self) -> &[f64] {
        &self.blocks
    }

    pub fn entries(&self) -> usize {
        self.col_idx.len()
    }

    /// Row-major `block x block` values of entry `e`.
    #[inline]
    pub fn entry_block(&self, e: usize) -> &[f64] {
        let bb = self.block * self.block;
        &self.blocks[e * bb..(e + 1) * bb]
    }

    /// Entrywise absolute values, same structure.
    pub fn abs(&self) -> BlockSparseSym {
        BlockSparseSym {
            blocks: self.blocks.iter().map(|v| v.abs()).collect(),
            ..self.clone()
        }
    }

    /// Expands to the full dense symmetric matrix of size `n*block`.
    pub fn to_dense(&self) -> super::DenseMatrix {
        let b = self.block;
        let mut out = super::DenseMatrix::zeros(self.n * b, self.n * b);
        for i in 0..self.n {
            for e in self.row_ptr[i]..self.row_ptr[i + 1] {
                let col = self.col_idx[e];
                let blk = self.entry_block(e);
                for r in 0..b {
                    for c in 0..b {
                        out[(i * b + r, col * b + c)] = blk[r * b + c];
                        if col != i {
                            out[(col * b + c, i * b + r)] = blk[r * b + c];
                        }
                    }
                }
            }
        }
        out
    }
}
