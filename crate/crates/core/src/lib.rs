//! Distance labeling schemes for unweighted graphs.
//!
//! Every node gets a bit-string label; the distance between two nodes is
//! decoded from their two labels alone. Schemes:
//!
//! * [`preserving`]: warm-up, `[D, 2D]`-preserving and full D-preserving
//!   labels, plus the trivial all-distances table.
//! * [`sparse`]: exact labels for bounded-degree graphs and for sparse graphs
//!   via the split transform.
//! * [`additive`]: r-additive labels.
//!
//! [`harness`] drives generation, encoding, verification and benchmarks and
//! backs the `distlab` binary.

pub mod additive;
pub mod codec;
pub mod graph;
pub mod harness;
pub mod label;
pub mod preserving;
pub mod sparse;

pub use codec::{BitCursor, BitString, BitWriter, CodecError};
pub use graph::{Dist, Graph, GraphError, HopDistance, NodeId, INF};
pub use label::{decode, DecodeError, EncodeError, Label, LabelSet, ParsedLabel, SchemeTag};
