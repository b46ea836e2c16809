//! Scalar abstraction shared by the numeric modules.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used by the solver, the baselines and the analysis
/// driver. Implemented for `f32` and `f64`.
pub trait Scalar:
    Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts a count, which is exact for every count this crate produces
    /// below `2^24` (`f32`) or `2^53` (`f64`).
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as a float")
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// Correctly rounded sum of `values` (Shewchuk's partials with a final
/// half-even correction).
///
/// The result depends only on the multiset of inputs, not their order, and
/// is monotone in every argument. Inputs must be finite.
pub fn exact_sum<T: Float>(values: impl IntoIterator<Item = T>) -> T {
    let mut partials: Vec<T> = Vec::new();
    for mut x in values {
        let mut kept = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != T::zero() {
                partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        partials.truncate(kept);
        partials.push(x);
    }

    let Some(mut n) = partials.len().checked_sub(1) else {
        return T::zero();
    };
    let mut hi = partials[n];
    let mut lo = T::zero();
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != T::zero() {
            break;
        }
    }
    // Round half to even across the remaining partials.
    if n > 0 {
        let next = partials[n - 1];
        let same_sign =
            (lo < T::zero() && next < T::zero()) || (lo > T::zero() && next > T::zero());
        if same_sign {
            let y = lo + lo;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
    }
    hi
}
