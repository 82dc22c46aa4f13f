//! Hamilton-bond verification and enumeration, and the constructive spanning
//! partitions into even caterpillars and induced paths, with independent
//! certificate verification.

mod bonds;
mod certificates;
mod frame;
mod partition;

pub use bonds::{
    balanced_per_degree, degree_deficiency_sum, degree_sum_identity_holds, end_tree_census,
    enumerate_hamilton_bonds, induces_tree, is_hamilton_bond, orders_within, Bipartition,
    DegreeCensus, DEFAULT_BOND_LIMIT,
};
pub use certificates::{
    equitable_two_coloring, extract_caterpillar, extract_path, verify_caterpillar,
    verify_certificate, verify_path, CaterpillarCertificate, CertError, PathCertificate,
    SpanningCertificate,
};
pub use frame::{contract_inner, contract_top, layered_from_imported, Frame, Surgered};
pub use partition::{partition_even_caterpillars, partition_induced_paths};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpanError {
    #[error("sides do not partition the vertex set")]
    NotAPartition,
    #[error("order {order} exceeds the enumeration bound {limit}")]
    BoundExceeded { order: usize, limit: usize },
    #[error("not a Hamilton bond")]
    NotAHamiltonBond,
    #[error("vertex set does not induce a tree")]
    NotATree,
    #[error("no admissible value in [{a}, {b}] for modulus {m}")]
    NoWindowValue { a: u64, b: u64, m: u64 },
    #[error("order {0} is not congruent to 2 mod 4")]
    OrderNotTwoModFour(u64),
    #[error("class premise not met: {0}")]
    PremiseViolated(String),
    #[error("structural assertion failed: {0}")]
    StructuralAssertion(String),
    #[error("no orientation-preserving isomorphism between orbit mates")]
    IsoNotFound,
    #[error("layer metadata does not match the layered pattern: {0}")]
    BadLayers(String),
    #[error(transparent)]
    Factor(#[from] crate::trifactor::FactorError),
    #[error(transparent)]
    Walk(#[from] crate::indexcalc::WalkError),
    #[error(transparent)]
    Build(#[from] crate::builder::BuildError),
    #[error(transparent)]
    Certificate(#[from] certificates::CertError),
}

/// Smallest value of the form 2^k or m - 2^k inside [a, b], scanning
/// exponents downward from the largest power of two not exceeding m.
pub fn window_pow2(a: u64, b: u64, m: u64) -> Result<u64, SpanError> {
    if m < 3 || a > b || b > m {
        return Err(SpanError::NoWindowValue { a, b, m });
    }
    let mut k = 63 - m.leading_zeros() as u64;
    loop {
        let p = 1u64 << k;
        if p >= a && p <= b {
            return Ok(p);
        }
        let q = m - p;
        if q >= a && q <= b {
            return Ok(q);
        }
        if k == 0 {
            return Err(SpanError::NoWindowValue { a, b, m });
        }
        k -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_examples() {
        assert_eq!(window_pow2(2, 4, 9).unwrap(), 4);
        assert_eq!(window_pow2(5, 7, 9).unwrap(), 5);
        assert_eq!(window_pow2(1, 1, 3).unwrap(), 1);
    }

    #[test]
    fn window_always_succeeds_under_the_length_premise() {
        // Windows with a < b of length at least m/3 - 1 always contain a
        // value.
        for m in 3..=200u64 {
            for a in 0..m {
                let b = (a + (m.div_ceil(3) - 1).max(1)).min(m);
                let v = window_pow2(a, b, m).unwrap();
                assert!(v >= a && v <= b);
            }
        }
    }
}
