//! Random trees and graphs grown by continuous-time quantum walkers.
//!
//! One or more walkers evolve under the adjacency matrix of the current graph
//! as Hamiltonian, `U(t) = exp(-i A t)`. After an exponentially distributed
//! waiting time every walker is measured in the node basis and a new node is
//! attached to the set of nodes where the walkers collapsed.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, ensembles and
//! the command line live in the `qwgrow` companion crate.
//!
//! * [`graph`]: append-only simple undirected graphs.
//! * [`linalg`]: dense symmetric eigensolver and a Chebyshev propagator.
//! * [`walk`]: walker states, evolution, measurement and collapse times.
//! * [`rng`]: the seeded random stream and seed splitting.
//! * [`growth`]: the growth loop, traces and replay.
//! * [`star`]: closed-form star results used as oracles.
//! * [`poly`]: exact characteristic polynomials and their real roots.
//! * [`metrics`]: degree histogram, power-law fit, diameter, leaves, clustering.

#![no_std]
#![deny(missing_docs)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod graph;
pub mod growth;
pub mod linalg;
pub mod metrics;
pub mod poly;
pub mod rng;
pub mod star;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{Graph, NodeId};
pub use growth::{grow, replay, step, CollapseEvent, CollapsePolicy, GrowthTrace, RunConfig};
pub use metrics::{DegreeHistogram, MetricsReport, PowerLawFit};
pub use poly::IntPolynomial;
pub use rng::RandomStream;
pub use star::StarChain;
pub use walk::{Propagator, WalkerState};
