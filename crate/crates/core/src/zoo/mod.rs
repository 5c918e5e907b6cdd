//! Concrete cover problems: set cover, vertex cover, real-valued weighted
//! coverage and connected dominating set, with their text formats and
//! seeded generators.

mod cds;
mod coverage;
mod dsu;
pub mod format;
pub mod generate;
mod graph;

pub use cds::{cds_problem, connected_ordering, count_incident_components, count_induced_components, CdsPotential};
pub use coverage::{
    set_cover_problem, vertex_cover_problem, weighted_coverage_problem, SetSystemInstance, WeightedCoverageInstance,
};
pub use dsu::Dsu;
pub use graph::{all_connected_graphs, GraphInstance};
