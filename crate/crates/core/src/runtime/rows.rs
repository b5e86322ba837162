use std::marker::PhantomData;
use std::ops::{Deref, DerefMut};
#[cfg(debug_assertions)]
use std::sync::atomic::{AtomicIsize, Ordering};

use crate::numerics::DenseMatrix;

/// Row-granular shared view of a matrix for workers that touch disjoint rows.
///
/// The schedule, not the borrow checker, rules out conflicting access, so
/// acquiring a row is `unsafe`. Debug builds keep a reader/writer count per
/// row and panic on any overlap of a writer with another access.
pub struct SharedRows<'a> {
    ptr: *mut f64,
    rows: usize,
    cols: usize,
    #[cfg(debug_assertions)]
    claims: Vec<AtomicIsize>,
    _borrow: PhantomData<&'a mut [f64]>,
}

// SAFETY: access goes through `row`/`row_mut`, whose callers promise that no
// row is written while another thread reads or writes it.
unsafe impl Send for SharedRows<'_> {}
unsafe impl Sync for SharedRows<'_> {}

impl<'a> SharedRows<'a> {
    pub fn new(m: &'a mut DenseMatrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        SharedRows {
            ptr: m.as_mut_slice().as_mut_ptr(),
            rows,
            cols,
            #[cfg(debug_assertions)]
            claims: (0..rows).map(|_| AtomicIsize::new(0)).collect(),
            _borrow: PhantomData,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Shared access to row `i`.
    ///
    /// # Safety
    /// No other thread may hold row `i` mutably while the guard lives.
    #[inline]
    pub unsafe fn row(&self, i: usize) -> RowRef<'_> {
        assert!(i < self.rows, "row {i} out of range");
        #[cfg(debug_assertions)]
        {
            let prev = self.claims[i].fetch_add(1, Ordering::AcqRel);
            assert!(prev >= 0, "row {i} read while being written");
        }
        RowRef {
            slice: std::slice::from_raw_parts(self.ptr.add(i * self.cols), self.cols),
            #[cfg(debug_assertions)]
            claim: &self.claims[i],
        }
    }

    /// Exclusive access to row `i`.
    ///
    /// # Safety
    /// No other thread may access row `i` while the guard lives.
    #[inline]
    pub unsafe fn row_mut(&self, i: usize) -> RowMut<'_> {
        assert!(i < self.rows, "row {i} out of range");
        #[cfg(debug_assertions)]
        {
            let ok = self.claims[i].compare_exchange(0, -1, Ordering::AcqRel, Ordering::Acquire);
            assert!(ok.is_ok(), "row {i} written concurrently with another access");
        }
        RowMut {
            slice: std::slice::from_raw_parts_mut(self.ptr.add(i * self.cols), self.cols),
            #[cfg(debug_assertions)]
            claim: &self.claims[i],
        }
    }
}

pub struct RowRef<'s> {
    slice: &'s [f64],
    #[cfg(debug_assertions)]
    claim: &'s AtomicIsize,
}

impl Deref for RowRef<'_> {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        self.slice
    }
}

impl Drop for RowRef<'_> {
    fn drop(&mut self) {
        #[cfg(debug_assertions)]
        self.claim.fetch_sub(1, Ordering::AcqRel);
    }
}

pub struct RowMut<'s> {
    slice: &'s mut [f64],
    #[cfg(debug_assertions)]
    claim: &'s AtomicIsize,
}

impl Deref for RowMut<'_> {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        self.slice
    }
}

impl DerefMut for RowMut<'_> {
    fn deref_mut(&mut self) -> &mut [f64] {
        self.slice
    }
}

impl Drop for RowMut<'_> {
    fn drop(&mut self) {
        #[cfg(debug_assertions)]
        self.claim.store(0, Ordering::Release);
    }
}
