//! Exact coefficient tables for the discriminant form and the residue-class
//! exponential sums built on top of them.

pub mod cache;
pub mod coeffs;
pub mod expsum;
pub mod ntt;
pub mod sieve;
pub mod tau;

pub use cache::{load_or_build, read_cache, verify_cache, write_cache, CacheReport};
pub use coeffs::{gl3_coeff, sym2_from_dirichlet, GL3Coefficient, TableCheck};
pub use expsum::{character_sum_c, kloosterman, ramanujan_sum, Sign};
pub use sieve::Sieve;
pub use tau::{build_tau_table, CoefficientTable};

#[derive(Debug, thiserror::Error)]
pub enum ArithError {
    #[error("residue system too small for n_max = {n_max}: need {needed_bits:.1} bits, have {available_bits:.1}")]
    Capacity { n_max: usize, needed_bits: f64, available_bits: f64 },
    #[error("data error: {0}")]
    Data(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("index ({m}, {n}) outside table range 1..={n_max}")]
    OutOfRange { m: usize, n: usize, n_max: usize },
    #[error("cache format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `rankin_selberg_coeffs`: `λ_{φ×φ}(n)` for every `n` in the table.
pub fn rankin_selberg_coeffs(table: &CoefficientTable) -> &[f64] {
    table.rs_values()
}

/// `sym2_coeffs`: `A(1, n)` for every `n` in the table.
pub fn sym2_coeffs(table: &CoefficientTable) -> &[f64] {
    table.sym2_values()
}
