//! Integer scalar abstraction used by the lattice routines.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact signed integers: `i32`, `i64`, `i128`, `num_bigint::BigInt`.
///
/// Implemented automatically for every type meeting the bounds. The lattice
/// code only ever clones, never copies, so arbitrary-precision integers work
/// unchanged.
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("scalar type cannot represent i64 value")
    }
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + 'static
{
}
