//! Exact-arithmetic strip packing.
//!
//! Everything is built on arbitrary-precision rationals: the bottom-left
//! placement rule, the adversarial instance families that drive it to bad
//! heights, ordering search (exhaustive, sampled, and k-local), and the
//! structural analysis of the unoccupied space a bottom-left packing leaves
//! behind (adjacency graphs, boundary circuits, cover partitions, trenches,
//! and the constant-factor height bound for squares).

pub mod analysis;
pub mod engine;
pub mod generators;
pub mod instance;
pub mod local_search;
pub mod packing;
pub mod rational;
pub mod rng;

pub use instance::{Instance, InstanceError, Item, Ordering, OrderingError};
pub use packing::{area_lower_bound, placement_violations, Packing, Placement, Rect, Violation};
pub use rational::Rational;
