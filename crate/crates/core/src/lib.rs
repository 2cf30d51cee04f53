//! Rectangle packing: shelf heuristics, Steinberg packing, GAP dynamic
//! programs, container packings, L-packings, and solvers for the 2-D
//! geometric knapsack and strip packing problems, with brute-force oracles.

pub mod classify;
pub mod containers;
pub mod error;
pub mod format;
pub mod gap;
pub mod knap2d;
pub mod lpack;
mod maxrects;
pub mod model;
pub mod nfdh;
pub mod oracle;
pub mod steinberg;
pub mod strip;
pub mod validate;

pub use error::{Error, Result};
pub use model::{
    Arm, Eps, Instance, Item, ItemId, KnapsackInstance, LInstance, Mode, Packing, Placement, Rect,
    Region, StripInstance,
};
pub use validate::{validate_packing, ValidationReport, Violation};
