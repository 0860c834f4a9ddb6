//! Generators and independent oracles for the easyprove test suites.
//!
//! The oracles here deliberately avoid the code paths they check: truth
//! tables and finite models evaluate formulas directly, and the brute-force
//! matcher guesses bindings from positions and confirms them by
//! substitution.

pub mod checks;
pub mod eval;
pub mod gen;
pub mod matcher;
pub mod prover;
pub mod walk;
