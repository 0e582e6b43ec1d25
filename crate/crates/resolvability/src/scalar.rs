//! Scalar abstraction for the numeric kernels.
//!
//! Every probabilistic type in this crate is generic over [`Real`], which
//! bundles the floating-point operations the library needs with per-type
//! tolerance constants. `f64` is the default everywhere and is what the
//! acceptance tolerances are calibrated for; `f32` is available for quick,
//! lower-precision experiments and carries proportionally looser tolerances,
//! since validation that demands 1e-9 mass accuracy would reject nearly every
//! honestly rounded single-precision input.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::{Product, Sum};
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the library can compute with.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Product<Self>
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Accepted deviation of total probability mass from one at construction.
    const MASS_TOL: Self;

    /// Residual below which a linear constraint counts as satisfied.
    const FEAS_TOL: Self;

    /// Objective gap below which two optimizer vertices count as tied.
    const TIE_TOL: Self;

    /// Interval width at which golden-section line searches stop.
    const SEARCH_TOL: Self;

    /// Half-width of the band around a rate threshold that is reported as
    /// borderline rather than decided.
    const BOUNDARY_BAND: Self;

    /// Conversion from an `f64` constant. Panics only for values a float
    /// cannot represent at all, which no caller produces.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant must convert")
    }

    /// Conversion from a count.
    fn of_usize(x: usize) -> Self {
        Self::from_usize(x).expect("usize count must convert")
    }
}

impl Real for f64 {
    const MASS_TOL: Self = 1e-9;
    const FEAS_TOL: Self = 1e-9;
    const TIE_TOL: Self = 1e-10;
    const SEARCH_TOL: Self = 1e-10;
    const BOUNDARY_BAND: Self = 1e-6;
}

impl Real for f32 {
    const MASS_TOL: Self = 1e-5;
    const FEAS_TOL: Self = 1e-5;
    const TIE_TOL: Self = 1e-6;
    const SEARCH_TOL: Self = 1e-6;
    const BOUNDARY_BAND: Self = 1e-4;
}
