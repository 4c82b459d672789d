//! Randomized list coloring of k-partite, k-uniform hypergraphs.
//!
//! Every edge of such a hypergraph picks exactly one vertex from each of
//! the k parts. Vertices carry color lists; the goal is a proper coloring
//! from the lists, meaning no edge is monochromatic. The crate builds the
//! whole pipeline around one random experiment — sample the first k−1
//! parts from a rank-tilted distribution, then try to finish the last
//! part greedily:
//!
//! - [`hypergraph`]: instances, validation, and a regularizing embedding.
//! - [`lists`]: color lists and list assignments.
//! - [`sampler`]: the tilted distribution and the exact probabilities of
//!   landing and blocking events under it.
//! - [`analysis`]: list-size thresholds, load bounds, and the certificate
//!   deciding when the local lemma applies.
//! - [`solver`]: the resampling solver plus an independent coloring
//!   verifier.
//! - [`oracle`]: exhaustive ground truth, exact star-instance formulas,
//!   Monte Carlo estimators, and the exact choice number at tiny scale.
//! - [`generators`]: complete/random instances and adversarial list
//!   families for experiments.
//! - [`io`]: plain-text instance, list, and coloring formats.

pub mod analysis;
pub mod error;
pub mod generators;
pub mod hypergraph;
pub mod io;
pub mod lists;
pub mod oracle;
pub mod sampler;
pub mod solver;

pub use error::{Error, Result};
pub use hypergraph::{Edge, InstanceData, KPartiteHypergraph, RegularEmbedding, VertexId};
pub use lists::{ColorList, ListAssignment};
pub use num::BigRational;
