//! Routing and spectrum assignment for elastic optical networks.
//!
//! The core pieces are [`SliceSet`] (available spectrum on a link), the
//! [`Multigraph`] topology with shared per-link spectrum, the label-setting
//! [`search`] that finds the cheapest path with enough contiguous common
//! spectrum, spectrum-blind baselines, allocation policies, and a dynamic
//! traffic simulator.

pub mod baselines;
pub mod policies;
pub mod router;
pub mod routing;
pub mod sim;
pub mod spectrum;
pub mod topology;

pub use policies::{alloc_first, alloc_fittest, AllocationPolicy};
pub use router::{RouteAttempt, Router, RouterKind};
pub use routing::{search, search_with, Demand, DemandError, RouteResult, SearchCounters};
pub use spectrum::{Fragment, SliceSet, Slot, SpectrumError};
pub use topology::{Cost, EdgeId, LinkId, Multigraph, NodeId, Point};
