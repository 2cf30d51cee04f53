//! Container packings: candidate sizes, layouts, and the layout solvers.

pub mod candidate;
pub mod layout;
pub mod solve;

pub use candidate::{expand_candidate_set, expand_candidate_set_capped};
pub use layout::{enumerate_geometries, enumerate_layouts, parse_eps, Container, ContainerKind, Layout};
pub use solve::{
    layout_gap, layout_upper_bound, pack_area_container, round_container, solve_for_layout, solve_for_layout_exact,
    solve_for_layout_with, solve_items_for_layout, GapMode, LayoutSolution, Oriented, DEFAULT_GUESS_CAP,
};
