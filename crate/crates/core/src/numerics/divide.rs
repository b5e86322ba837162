//! Floored and ceiling integer division, as required by tiled loop bounds.
//!
//! Both round toward negative/positive infinity rather than truncating
//! toward zero, so `floord(-1, 32) == -1` where C would give `0`.

use super::NumericsError;

/// Largest `q` with `q * d <= n`.
pub fn floord(n: i64, d: i64) -> Result<i64, NumericsError> {
    if d <= 0 {
        return Err(NumericsError::InvalidArgument(format!(
            "divisor must be positive, got {d}"
        )));
    }
    // For a positive divisor the Euclidean quotient is the floor.
    Ok(n.div_euclid(d))
}

/// Smallest `q` with `q * d >= n`; equal to `-floord(-n, d)`.
pub fn ceild(n: i64, d: i64) -> Result<i64, NumericsError> {
    floord(-n, d).map(|q| -q)
}
