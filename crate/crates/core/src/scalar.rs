use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact integer coefficient type used for generator entries, multiplicities
/// and lattice vectors.
///
/// Automatically implemented for every signed integer type with the usual
/// `num` traits, which covers `i64`, `i128` and `num_bigint::BigInt`. Fixed-width
/// instantiations panic on overflow (overflow checks are enabled in every
/// profile of this workspace); `BigInt` never overflows.
pub trait Scalar:
    Integer + Signed + Clone + Ord + Hash + Debug + Display + FromStr + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("count fits in scalar")
    }

    fn parse_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Ord + Hash + Debug + Display + FromStr + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

pub(crate) fn gcd_all<'a, T: Scalar, I: IntoIterator<Item = &'a T>>(items: I) -> T {
    items.into_iter().fold(T::zero(), |acc, x| acc.gcd(x))
}
