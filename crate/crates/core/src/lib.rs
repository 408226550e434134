//! Partial-MDS (maximally recoverable) codes with one global parity over
//! small finite fields: exact field and matrix arithmetic, brute-force
//! PMDS and MR oracles, constructions, standard-form classification,
//! template completion search and erasure decoding.

pub mod classify;
pub mod cli;
pub mod construct;
pub mod decode;
pub mod difftest;
pub mod field;
pub mod format;
pub mod matrix;
pub mod mds;
pub mod pmds;
