//! Attributed stream hypergraphs.
//!
//! An attributed stream hypergraph couples three dimensions of a networked
//! system in one structure:
//!
//! * **high-order topology** — hyperedges connect arbitrary node sets, not
//!   just pairs;
//! * **time** — nodes and hyperedges are present at discrete instants of a
//!   closed axis, recorded as merged presence intervals;
//! * **node attributes** — each node carries categorical attribute values
//!   that may change over time.
//!
//! [`Ash`] is the container. Construction is single-writer
//! ([`Ash::add_hyperedge`], [`Ash::set_attribute`]); afterwards every query
//! is a pure read, so a finished `Ash` can be shared freely across threads.
//!
//! Analysis lives in dedicated modules:
//!
//! * [`measures`] — purity, entropy, star homogeneity and their averages;
//! * [`s_analysis`] — s-incidence, s-line graphs, s-components and
//!   time-respecting s-walks under five optimality objectives;
//! * [`transforms`] — bipartite projection, dual hypergraph, clique
//!   expansion;
//! * [`inference`] — building an `Ash` from timestamped dyadic contact
//!   streams via window aggregation and clique promotion;
//! * [`io`] — JSON documents, interaction/profile CSV input and plot-ready
//!   CSV output.

pub mod error;
pub mod inference;
pub mod io;
pub mod measures;
pub mod model;
pub mod pairgraph;
pub mod profiles;
pub mod s_analysis;
pub mod synthetic;
pub mod timeline;
pub mod transforms;

pub use error::{AshError, Result};
pub use model::{Ash, EdgeId, NodeId, TemporalHyperedge};
pub use pairgraph::PairGraph;
pub use profiles::{EntropyNorm, NodeProfile, ValueSpan};
pub use timeline::{PresenceTimeline, TimeAxis};
