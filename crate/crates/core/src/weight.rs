//! Edge cost scalar.
//!
//! Every cost in a heterogeneous graph is a non-negative integer. The graph,
//! reduction and solver code is written against [`Weight`] so the same
//! machinery runs on `u32`, `u64` or `u128` costs; the crate root fixes the
//! default to [`crate::Cost`].

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{NumCast, PrimInt, Unsigned};

/// An exact, unsigned integer cost type.
pub trait Weight:
    PrimInt + Unsigned + Hash + fmt::Debug + fmt::Display + FromStr + Send + Sync + 'static
{
    /// Lossless conversion from a machine integer, `None` if it does not fit.
    fn from_usize(v: usize) -> Option<Self> {
        <Self as NumCast>::from(v)
    }

    /// Checked sum of an iterator of costs.
    fn checked_sum<I: IntoIterator<Item = Self>>(iter: I) -> Option<Self> {
        iter.into_iter()
            .try_fold(Self::zero(), |acc, w| acc.checked_add(&w))
    }
}

impl<T> Weight for T where
    T: PrimInt + Unsigned + Hash + fmt::Debug + fmt::Display + FromStr + Send + Sync + 'static
{
}
