use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{ahu_code, CanonicalCode, Tree, TreeError};

pub const MAX_ENUMERATION_SIZE: usize = 12;

/// All isomorphism classes of free trees on `n` vertices, sorted by code.
///
/// Every tree on `n` vertices is a tree on `n - 1` vertices plus a leaf, so
/// the classes are grown one vertex at a time: attach a leaf at every vertex
/// of every class representative, canonicalize, deduplicate.
pub fn enumerate_free_trees(n: usize) -> Result<Vec<CanonicalCode>, TreeError> {
    if !(1..=MAX_ENUMERATION_SIZE).contains(&n) {
        return Err(TreeError::SizeOutOfRange(n));
    }
    let mut classes: BTreeSet<CanonicalCode> = BTreeSet::from([ahu_code(&Tree::single())]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for code in &classes {
            let t = code.to_tree();
            for v in 0..t.vertex_count() {
                next.insert(ahu_code(&t.with_leaf_at(v)));
            }
        }
        classes = next;
    }
    Ok(classes.into_iter().collect())
}

/// The lower bound `n^(n-2) / n!` on the number of tree isomorphism classes,
/// as an exact fraction. For `n = 1` the power is read as `1/n`.
pub fn cayley_lower_bound(n: usize) -> BigRational {
    assert!(n >= 1, "the bound is defined for n >= 1");
    let base = BigInt::from(n);
    let labelled = if n >= 2 {
        BigRational::from_integer(num_traits::pow(base, n - 2))
    } else {
        BigRational::new(BigInt::one(), base)
    };
    let factorial: BigInt = (1..=n).map(BigInt::from).product();
    labelled / BigRational::from_integer(factorial)
}
