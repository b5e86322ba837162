//! Matrix containers, division helpers for tiled loop bounds, seeded input
//! generators and Matrix Market ingestion.

mod dense;
mod divide;
mod generate;
mod market;
mod rng;
mod sparse;

use thiserror::Error;

pub use dense::{ComplexSplitMatrix, DenseMatrix};
pub use divide::{ceild, floord};
pub use generate::{
    gen_block_sparse, gen_complex_random, gen_random_dense, gen_spd, gen_zero_pivot, plant_zero_pivot, SAFE_HI, SAFE_LO,
};
pub use market::{parse_matrix_market, parse_matrix_market_limited, write_matrix_market, MarketError};
pub use rng::Rng;
pub use sparse::BlockSparseSym;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid sparse structure: {0}")]
    Structure(String),
}
