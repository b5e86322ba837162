//! Symmetric block-sparse matrix-vector product with a scattered reduction.
//!
//! Only the upper triangle is stored, so each off-diagonal block `M` at
//! `(i, col)` contributes twice: `M·v[col]` to row `i` (gather) and
//! `Mᵀ·v[i]` to row `col` (scatter). Scatter targets depend on the column
//! indices, which is what makes the parallel version a sparse reduction.

use super::KernelError;
use crate::numerics::{BlockSparseSym, DenseMatrix};
use crate::runtime::{parallel_for, ExecConfig, ReductionSlots, Strategy};

/// Largest supported block edge.
pub const MAX_BLOCK: usize = 16;

#[derive(Clone, Debug)]
pub struct SmvpInput {
    pub matrix: BlockSparseSym,
    pub v: DenseMatrix,
    /// Accumulated in place.
    pub w: DenseMatrix,
}

impl SmvpInput {
    pub fn new(matrix: BlockSparseSym, v: DenseMatrix, w: DenseMatrix) -> Result<Self, KernelError> {
        let (n, b) = (matrix.n(), matrix.block());
        if b > MAX_BLOCK {
            return Err(KernelError::Shape(format!("block size {b} exceeds {MAX_BLOCK}")));
        }
        for (name, m) in [("v", &v), ("w", &w)] {
            if m.rows() != n || m.cols() != b {
                return Err(KernelError::Shape(format!(
                    "{name} is {}x{}, expected {n}x{b}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(SmvpInput { matrix, v, w })
    }

    /// Input with a zero-initialized accumulator.
    pub fn with_zero_w(matrix: BlockSparseSym, v: DenseMatrix) -> Result<Self, KernelError> {
        let w = DenseMatrix::zeros(matrix.n(), matrix.block());
        Self::new(matrix, v, w)
    }
}

/// `out[r] = Σ_c blk[r][c]·x[c]`, summed left to right.
#[inline]
fn mat_vec(b: usize, blk: &[f64], x: &[f64], out: &mut [f64]) {
    for r in 0..b {
        let mut s = blk[r * b] * x[0];
        for c in 1..b {
            s += blk[r * b + c] * x[c];
        }
        out[r] = s;
    }
}

/// `out[r] = Σ_c blk[c][r]·x[c]`, summed left to right.
#[inline]
fn mat_t_vec(b: usize, blk: &[f64], x: &[f64], out: &mut [f64]) {
    for r in 0..b {
        let mut s = blk[r] * x[0];
        for c in 1..b {
            s += blk[c * b + r] * x[c];
        }
        out[r] = s;
    }
}

/// Row `i` of the product: calls `scatter(col, r, value)` for every
/// off-diagonal entry in storage order and returns the gathered row sum.
#[inline]
fn row_product(
    a: &BlockSparseSym,
    v: &DenseMatrix,
    i: usize,
    mut scatter: impl FnMut(usize, usize, f64),
) -> [f64; MAX_BLOCK] {
    let b = a.block();
    let (lo, hi) = (a.row_ptr()[i], a.row_ptr()[i + 1]);
    let vi = v.row(i);
    let mut sum = [0.0; MAX_BLOCK];
    let mut tmp = [0.0; MAX_BLOCK];
    mat_vec(b, a.entry_block(lo), vi, &mut sum[..b]);
    for e in lo + 1..hi {
        let col = a.col_idx()[e];
        let blk = a.entry_block(e);
        mat_vec(b, blk, v.row(col), &mut tmp[..b]);
        for r in 0..b {
            sum[r] += tmp[r];
        }
        mat_t_vec(b, blk, vi, &mut tmp[..b]);
        for (r, &t) in tmp[..b].iter().enumerate() {
            scatter(col, r, t);
        }
    }
    sum
}

pub fn smvp_serial(input: &mut SmvpInput) {
    let SmvpInput { matrix, v, w } = input;
    let b = matrix.block();
    for i in 0..matrix.n() {
        let sum = row_product(matrix, v, i, |col, r, t| w[(col, r)] += t);
        for (r, s) in sum[..b].iter().enumerate() {
            w[(i, r)] += s;
        }
    }
}

/// Parallel product over rows. Scatter updates go through reduction slots
/// of the given strategy; the row's own sum is added once per row.
pub fn smvp_parallel(input: &mut SmvpInput, strategy: Strategy, cfg: &ExecConfig) -> Result<(), KernelError> {
    if strategy == Strategy::Serial && cfg.threads() > 1 {
        return Err(KernelError::InvalidArgument(
            "the serial strategy cannot run with more than one thread".into(),
        ));
    }
    let SmvpInput { matrix, v, w } = input;
    let b = matrix.block();
    let mut slots = ReductionSlots::new(strategy, w.as_slice(), b, cfg.threads())?;
    parallel_for(0..matrix.n(), cfg, |worker, i| {
        let sum = row_product(matrix, v, i, |col, r, t| slots.add(worker, col, r, t));
        for (r, &s) in sum[..b].iter().enumerate() {
            slots.add_owned(worker, i, r, s);
        }
    });
    slots.finalize(w.as_mut_slice())?;
    Ok(())
}

/// Per-component magnitude bound: the product recomputed on absolute
/// values, used to scale the error of reordered summations.
pub fn smvp_error_scale(input: &SmvpInput) -> DenseMatrix {
    let abs = |m: &DenseMatrix| {
        DenseMatrix::from_vec(m.rows(), m.cols(), m.as_slice().iter().map(|x| x.abs()).collect()).expect("same shape")
    };
    let mut scaled = SmvpInput {
        matrix: input.matrix.abs(),
        v: abs(&input.v),
        w: abs(&input.w),
    };
    smvp_serial(&mut scaled);
    scaled.w
}

/// Largest `|x - y| / scale` over all components.
pub fn max_scaled_error(reference: &DenseMatrix, candidate: &DenseMatrix, scale: &DenseMatrix) -> f64 {
    reference
        .as_slice()
        .iter()
        .zip(candidate.as_slice())
        .zip(scale.as_slice())
        .map(|((x, y), s)| {
            let d = (x - y).abs();
            if d == 0.0 {
                0.0
            } else {
                d / s.max(f64::MIN_POSITIVE)
            }
        })
        .fold(0.0, f64::max)
}
