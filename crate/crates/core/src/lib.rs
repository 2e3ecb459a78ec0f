//! Pairwise compatibility graphs: witness trees, threshold tolerance
//! caterpillars, geometric intersection models and exhaustive recognition of
//! small graphs with an exact simplex solver.
//!
//! Trees, models and instances are generic over the number type; the aliases
//! below fix it to arbitrary-precision rationals, which is what the text
//! formats and the recognizer produce.

pub mod format;
pub mod geometry;
pub mod graph;
pub mod lp;
pub mod num;
pub mod recognizer;
pub mod threshold;
pub mod tree;

pub type Rational = num_rational::Ratio<num_bigint::BigInt>;

pub type WeightedTree = tree::WeightedTree<Rational>;
pub type PcgWitness = tree::PcgWitness<Rational>;
pub type DistanceMatrix = tree::DistanceMatrix<Rational>;
pub type TtInstance = threshold::TtInstance<Rational>;
pub type Shape = geometry::Shape<Rational>;
pub type GeometricModel = geometry::GeometricModel<Rational>;
pub type LinearProgram = lp::LinearProgram<num_bigint::BigInt>;
pub type StrictSystem = lp::StrictSystem<num_bigint::BigInt>;

pub use format::ParseError;
pub use geometry::{intersects, model_graph, paper_model, Dimension, GeometryError, PAPER_MODELS};
pub use graph::{are_isomorphic, enumerate_graphs, graph_h, Graph, GraphError};
pub use lp::{solve, strict_feasibility, Outcome, Relation};
pub use num::{ExactInt, Scalar};
pub use recognizer::{
    enumerate_topologies, recognize_pcg, topology_feasible, Certificate, Recognition, RecognizeError, RecognizeOptions,
    Topology,
};
pub use threshold::{integerize, threshold_realize, tt_realize, tt_witness};
pub use tree::{is_caterpillar, leaf_distance_matrix, mlpg_eval, normalize_tree, pcg_eval};
