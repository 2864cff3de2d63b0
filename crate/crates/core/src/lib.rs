//! Global placement of rectangular blocks by direct minimization of the
//! half-perimeter wirelength under rectified-linear boundary and overlap
//! penalties.
//!
//! The crate is organized bottom-up:
//!
//! * [`netlist`] holds the circuit hypergraph, the die and placements.
//! * [`bookshelf`] reads and writes GSRC Bookshelf floorplan files.
//! * [`objective`] evaluates every penalty-model term together with a
//!   hand-derived subgradient.
//! * [`grid`] is the uniform-grid broad phase used to find candidate
//!   overlapping pairs.
//! * [`sampler`] draws degree-weighted mini-batches of nets.
//! * [`optimizer`] contains the random batch splitting solver and the GD and
//!   ADAM baselines.
//! * [`legalize`] removes residual overlap after global placement.

pub mod bookshelf;
pub mod grid;
pub mod legalize;
pub mod netlist;
pub mod objective;
pub mod optimizer;
pub mod sampler;
pub mod synth;

mod error;

pub use error::{Error, Result};
pub use netlist::{Cell, CellId, CellKind, Net, NetId, Netlist, Placement, Region};
