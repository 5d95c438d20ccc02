//! Floating-point abstraction shared by every numeric module.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the toolkit is generic over: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts a count into the scalar type.
    fn count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Draws a uniform value in `[0, 1)` at the precision of `T`.
///
/// The draw always comes from an `f64` so that sessions seeded identically
/// consume the generator identically whatever the scalar type.
pub fn uniform<T: Scalar, R: rand::Rng + ?Sized>(rng: &mut R) -> T {
    let u: f64 = rng.random();
    let v = T::lit(u);
    if v >= T::one() {
        T::one() - T::epsilon()
    } else {
        v
    }
}
