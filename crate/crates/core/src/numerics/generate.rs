//! Deterministic input generators. Every generator is a pure function of
//! its size arguments and the state of the supplied [`Rng`].

use rand::seq::index;

use super::{BlockSparseSym, ComplexSplitMatrix, DenseMatrix, NumericsError, Rng};

/// Lower end of the "bounded away from zero" sampling range.
pub const SAFE_LO: f64 = 0.5;
/// Upper end (exclusive) of the "bounded away from zero" sampling range.
pub const SAFE_HI: f64 = 1.5;

/// `n x n` matrix with entries uniform in `[0.5, 1.5)`.
pub fn gen_random_dense(n: usize, rng: &mut Rng) -> DenseMatrix {
    let data = (0..n * n).map(|_| rng.uniform(SAFE_LO, SAFE_HI)).collect();
    DenseMatrix::from_vec(n, n, data).expect("square buffer")
}

/// Symmetric positive definite `Bᵀ·B + n·I` with `B` uniform in `[0, 1)`.
pub fn gen_spd(n: usize, rng: &mut Rng) -> DenseMatrix {
    let b: Vec<f64> = (0..n * n).map(|_| rng.unit()).collect();
    let mut out = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = 0.0;
            for r in 0..n {
                s += b[r * n + i] * b[r * n + j];
            }
            if i == j {
                s += n as f64;
            }
            out[(i, j)] = s;
            out[(j, i)] = s;
        }
    }
    out
}

/// Zeroes row `k` on columns `0..=k` so that elimination meets an exact
/// zero pivot at step `k`: every earlier step computes a zero multiplier
/// for row `k` and leaves those entries untouched. Column `k` below the
/// diagonal is redrawn from the safe range if it holds no nonzero.
pub fn plant_zero_pivot(a: &mut DenseMatrix, k: usize, rng: &mut Rng) -> Result<(), NumericsError> {
    let n = a.rows();
    if !a.is_square() || n < 2 || k > n - 2 {
        return Err(NumericsError::InvalidArgument(format!(
            "zero pivot step {k} must lie in 0..={} for a square matrix of order {n}",
            n.saturating_sub(2)
        )));
    }
    for j in 0..=k {
        a[(k, j)] = 0.0;
    }
    if (k + 1..n).all(|i| a[(i, k)] == 0.0) {
        for i in k + 1..n {
            a[(i, k)] = rng.uniform(SAFE_LO, SAFE_HI);
        }
    }
    Ok(())
}

/// Random dense matrix whose elimination pivot at step `k_plant` is exactly
/// zero while all earlier pivots are nonzero.
pub fn gen_zero_pivot(n: usize, k_plant: usize, rng: &mut Rng) -> Result<DenseMatrix, NumericsError> {
    if n < 2 || k_plant > n - 2 {
        return Err(NumericsError::InvalidArgument(format!(
            "k_plant = {k_plant} out of range for n = {n}"
        )));
    }
    let mut a = gen_random_dense(n, rng);
    plant_zero_pivot(&mut a, k_plant, rng)?;
    Ok(a)
}

/// `m x n` complex matrix with both parts uniform in `[0.5, 1.5)`. Rows in
/// `cold_rows` get a zero in column 0, steering the rotation kernel into
/// one of its rarely taken branches.
pub fn gen_complex_random(
    m: usize,
    n: usize,
    rng: &mut Rng,
    cold_rows: &[usize],
) -> Result<ComplexSplitMatrix, NumericsError> {
    if m < 2 || n < 1 {
        return Err(NumericsError::InvalidArgument(format!(
            "complex matrix needs m >= 2 and n >= 1, got {m}x{n}"
        )));
    }
    if let Some(&r) = cold_rows.iter().find(|&&r| r >= m) {
        return Err(NumericsError::InvalidArgument(format!("cold row {r} outside 0..{m}")));
    }
    let mut re = DenseMatrix::zeros(m, n);
    let mut im = DenseMatrix::zeros(m, n);
    for (r, i) in re.as_mut_slice().iter_mut().zip(im.as_mut_slice()) {
        *r = rng.uniform(SAFE_LO, SAFE_HI);
        *i = rng.uniform(SAFE_LO, SAFE_HI);
    }
    for &r in cold_rows {
        re[(r, 0)] = 0.0;
        im[(r, 0)] = 0.0;
    }
    ComplexSplitMatrix::new(re, im)
}

/// Random symmetric block-sparse matrix and a matching `n x block` vector.
///
/// Each row stores its diagonal block followed by distinct upper-triangle
/// neighbours in ascending column order. The number of stored neighbours per
/// row is `floor(avg_degree)` plus one with probability equal to the
/// fractional part, capped by the columns available to the right of the
/// diagonal. Block and vector values are uniform in `[-1, 1)`.
pub fn gen_block_sparse(n: usize, avg_degree: f64, block: usize, rng: &mut Rng) -> (BlockSparseSym, DenseMatrix) {
    assert!(block >= 1, "block size must be at least 1");
    assert!(avg_degree >= 0.0, "average degree must be nonnegative");
    let whole = avg_degree.floor() as usize;
    let frac = avg_degree - avg_degree.floor();
    let bb = block * block;

    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::new();
    let mut blocks = Vec::new();
    row_ptr.push(0);
    for i in 0..n {
        let available = n - 1 - i;
        let mut count = whole + usize::from(frac > 0.0 && rng.unit() < frac);
        count = count.min(available);
        let mut cols: Vec<usize> = index::sample(rng, available, count)
            .into_iter()
            .map(|c| c + i + 1)
            .collect();
        cols.sort_unstable();
        col_idx.push(i);
        col_idx.extend_from_slice(&cols);
        for _ in 0..(cols.len() + 1) * bb {
            blocks.push(rng.uniform(-1.0, 1.0));
        }
        row_ptr.push(col_idx.len());
    }
    let v_data = (0..n * block).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let a = BlockSparseSym::new(n, block, row_ptr, col_idx, blocks).expect("generated structure is valid");
    (a, DenseMatrix::from_vec(n, block, v_data).expect("vector shape"))
}
