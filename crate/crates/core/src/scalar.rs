//! Exact scalar types the linear-algebra kernel is generic over.
//!
//! Everything homological in this crate is exact, so the scalar trait asks
//! for an integer domain rather than a float. `BigInt` is the default used by
//! the chain-level layers; machine integers are available for callers that
//! know their entries stay small.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact signed integer type usable as a matrix or polynomial coefficient.
pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + Ord + Hash + Integer + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits every scalar type")
    }

    /// Residue in `[0, p)`.
    fn residue(&self, p: u64) -> u64 {
        let modulus = <Self as FromPrimitive>::from_u64(p).expect("prime fits scalar");
        self.mod_floor(&modulus).to_u64().expect("residue is below the modulus")
    }

    fn from_residue(r: u64) -> Self {
        <Self as FromPrimitive>::from_u64(r).expect("residue fits scalar")
    }
}

impl Scalar for i64 {}
impl Scalar for i128 {}
impl Scalar for BigInt {}
