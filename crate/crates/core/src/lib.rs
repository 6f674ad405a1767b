//! Graphs of stably matchable pairs: stable matching instances, rotation
//! systems, constructive realizations and recognition algorithms.

pub mod analysis;
pub mod error;
pub mod families;
pub mod formats;
pub mod graph;
pub mod instance;
pub mod order;
pub mod realize;
pub mod recognize;
pub mod rotation;

pub use error::{Error, Result};
pub use graph::{BipartiteGraph, Matching};
pub use instance::{Instance, Side};
pub use order::StrictOrder;
pub use rotation::{Rotation, RotationSystem};
