//! Community detection by sparse recovery on the random-walk graph Laplacian.
//!
//! The crate finds one cluster at a time: a cheap correlation step narrows the
//! search to a candidate set around a seed vertex, and a greedy sparse solver
//! then identifies which candidates do *not* belong. Iterating removes one
//! cluster per round until the whole graph is partitioned.
//!
//! The `examples/` directory walks through each capability.

pub mod baselines;
pub mod bench;
pub mod bipartite;
pub mod diagnostics;
pub mod error;
pub mod graph;
pub mod index_set;
pub mod io;
pub mod operator;
pub mod partition;
pub mod pipeline;
pub mod pursuit;
pub mod random_graphs;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{build_graph, induced_subgraph, LaplacianView, SparseGraph};
pub use index_set::IndexSet;
pub use operator::{ColumnOperator, ColumnSubset, DenseMatrix};
pub use partition::Partition;
pub use pursuit::{connected_component_omp, iscp, scp, threshold_stage, ClusterResult, ScpConfig};
pub use random_graphs::{gen_er, gen_sbm, SbmParams};
