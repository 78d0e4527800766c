//! List coloring of signed planar graphs: exact search, constructive
//! coloring procedures, gadget verification and discharging audits.

pub mod choose5;
pub mod cli;
pub mod discharging;
pub mod gadgets;
pub mod girth5;
pub mod graph;
pub mod io;
pub mod planar;
pub mod random;
pub mod report;
pub mod solver;

pub use graph::{Color, Coloring, ListAssignment, Sign, SignedGraph, Vertex};
pub use planar::RotationEmbedding;

/// Exact scalar used for discharging charges.
pub type Charge = num_rational::Rational64;

/// Charge ledger over [`Charge`].
pub type Ledger = discharging::ChargeLedger<Charge>;
