//! Shared helpers for the benchmark targets.

use spin7_core::basis::{label_count, Seq};
use spin7_core::zmod::ZVec;

/// The all-ones vector over every label of length n.
pub fn full_basis_vector(n: usize) -> ZVec {
    ZVec::from_terms(n, (0..label_count(n)).map(|r| (Seq::unrank(n, r).unwrap(), 1)))
        .expect("coefficients are tiny")
}
