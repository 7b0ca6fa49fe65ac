//! Coordinate abstraction for the placer.
//!
//! Placement needs only ordered addition, so it runs generically over `i64`
//! and `Rational`. Whenever the instance admits a common denominator small
//! enough that every reachable coordinate fits comfortably in an `i64`, the
//! engine scales up front and works in integers; the scaling is exact, so
//! results are identical to the rational path (and tested to be).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::instance::Instance;
use crate::rational::Rational;

pub trait Coord: Clone + Ord + Debug {
    fn zero() -> Self;
    fn plus(&self, rhs: &Self) -> Self;
}

impl Coord for i64 {
    fn zero() -> Self {
        0
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
}

impl Coord for Rational {
    fn zero() -> Self {
        Rational::zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
}

/// Instance data rescaled to integers: every width/height multiplied by the
/// lcm of all denominators.
pub(crate) struct Scaled {
    pub width: i64,
    pub sizes: Vec<(i64, i64)>,
    pub scale: BigInt,
}

/// Every coordinate the placer can produce is a sum of item sizes bounded by
/// `W + sum of heights`, so that value (scaled) has to fit with room to
/// spare.
const I64_HEADROOM: i64 = i64::MAX / 8;

pub(crate) fn scale_instance(instance: &Instance) -> Option<Scaled> {
    let mut l = BigInt::one();
    l = l.lcm(instance.width().denom());
    for item in instance.items() {
        l = l.lcm(item.width.denom());
        l = l.lcm(item.height.denom());
    }

    let to_scaled = |q: &Rational| -> Option<i64> {
        let scaled = q.numer() * (&l / q.denom());
        scaled.to_i64()
    };

    let width = to_scaled(instance.width())?;
    let mut reach = width.checked_add(0)?;
    let mut sizes = Vec::with_capacity(instance.len());
    for item in instance.items() {
        let w = to_scaled(&item.width)?;
        let h = to_scaled(&item.height)?;
        reach = reach.checked_add(h)?;
        if reach > I64_HEADROOM {
            return None;
        }
        sizes.push((w, h));
    }
    Some(Scaled {
        width,
        sizes,
        scale: l,
    })
}

pub(crate) fn unscale(value: i64, scale: &BigInt) -> Rational {
    Rational::from_bigint(BigInt::from(value), scale.clone())
}
