//! Numerical laboratory for second moments of Hecke eigenvalues: exact
//! coefficient tables, exponent pairs, the delta symbol, oscillatory
//! integrals, L-function evaluation and the experiment driver.

pub mod arith;
pub mod exppair;
pub mod bump;
pub mod fit;
pub mod oscint;
pub mod quad;
pub mod deltasym;
pub mod lfunc;
pub mod labcli;
