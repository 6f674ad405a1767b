//! Constructive realizations of graph classes as graphs of stably matchable
//! pairs.

mod grid;
mod grid_patterns;
mod lattice;
mod nae;
mod outerplanar;
mod product;
mod regular;

pub use grid::{grid_decision, realize_grid};
pub use lattice::{join_irreducible_order, lower_set_count, realize_lattice_subcubic, Poset};
pub use nae::{nae3sat_graph, witness_from_assignment, ClauseGadget, ConnectorGadget, NaeFormula, NaeLiteral, NaeMetadata, NaeWitness, TermGadget};
pub use outerplanar::{outer_cycle, realize_outerplanar};
pub use product::realize_product;
pub use regular::{realize_regular, regular_decomposition, regularize};
