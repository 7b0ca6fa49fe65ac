//! The constant worst-order height bound for square instances.

use std::fmt;

use crate::packing::{area_lower_bound, Packing};
use crate::rational::Rational;

/// Copies of the squares sufficient to cover the unoccupied space below
/// `h_BL - GUARD_ROWS * h_max`.
pub const COVER_COPIES: u32 = 12;
/// Rows of height `h_max` cut off the top of the strip in the covering.
pub const GUARD_ROWS: u32 = 3;

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub bl_height: Rational,
    pub lower_bound: Rational,
    pub cover_copies: u32,
    pub guard_rows: u32,
    pub pass: bool,
}

impl BoundReport {
    /// The bound factor `f + g + 1`.
    pub fn factor(&self) -> u32 {
        self.cover_copies + self.guard_rows + 1
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "height {} vs {} * lower bound {}: {}",
            self.bl_height,
            self.factor(),
            self.lower_bound,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotSquaresError;

impl fmt::Display for NotSquaresError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "the height bound applies to square instances only")
    }
}

impl std::error::Error for NotSquaresError {}

/// Checks `height <= (f + g + 1) * max(area / W, h_max)` exactly. The
/// right-hand side lower-bounds the optimal height, so passing here is
/// implied by the covering argument and is the strongest machine-checkable
/// form of the constant bound.
pub fn check_global_bound(packing: &Packing) -> Result<BoundReport, NotSquaresError> {
    if !packing.instance().all_squares() {
        return Err(NotSquaresError);
    }
    let bl_height = packing.height();
    let lower_bound = area_lower_bound(packing.instance());
    let factor = Rational::from_int((COVER_COPIES + GUARD_ROWS + 1) as i64);
    let pass = bl_height <= factor * &lower_bound;
    Ok(BoundReport {
        bl_height,
        lower_bound,
        cover_copies: COVER_COPIES,
        guard_rows: GUARD_ROWS,
        pass,
    })
}
