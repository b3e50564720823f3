//! Horofunction boundaries of locally finite graphs of linear growth.
//!
//! * [`graph`]: rooted graphs, BFS layers, Busemann functions, geodesic rays
//!   and horofunction approximations.
//! * [`npartite`]: layered (ℕ-partite) graphs, Hall matchings, monotone
//!   reachability graphs and the monotone path cover.
//! * [`cayley`]: built-in Cayley graphs, the group action on horofunctions,
//!   finite orbits and homomorphisms onto ℤ.
//! * [`spec`]: the JSON input formats.

pub mod cayley;
pub mod error;
pub mod graph;
pub mod npartite;
pub mod par;
pub mod spec;

pub use error::{Error, Result};
pub use graph::{Limits, RootedGraph};
pub use par::Execution;
