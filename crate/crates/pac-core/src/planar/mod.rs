//! Planarity testing, embeddings, faces and planarization.

mod generate;
mod graph;
mod kuratowski;
mod lr;
mod planarize;
mod rotation;

pub use generate::{
    binary_tree, grid_graph, path_graph, random_forest, random_triangulation, star_graph,
};
pub use graph::{GraphError, UGraph};
pub use kuratowski::{kuratowski_witness, Kuratowski, KuratowskiKind};
pub use lr::{embed, is_planar};
pub use planarize::{planarize_dag, planarize_disk, planarize_graph, Drawing, DrawingRoute};
pub use rotation::{Face, RotationSystem};

/// Result of [`test_planarity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Planarity {
    /// A planar rotation system of the input.
    Embedding(RotationSystem),
    /// A Kuratowski subgraph certifying non-planarity.
    Witness(Kuratowski),
}

/// Left-right planarity test returning an Euler-checked embedding or a
/// Kuratowski subdivision.
pub fn test_planarity(g: &UGraph) -> Planarity {
    match embed(g) {
        Some(r) => {
            debug_assert!(r.is_planar_embedding());
            Planarity::Embedding(r)
        }
        None => Planarity::Witness(kuratowski_witness(g).expect("non-planar graph has a witness")),
    }
}
