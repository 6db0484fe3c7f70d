//! Enumeration and verification of crosspatch knight graphs.
//!
//! Two knight moves form a cross when their midpoints coincide; a knight
//! graph is crosspatch when every move belongs to a cross. Every cross is
//! centered on a unit board edge, so a crosspatch graph is encoded by its
//! set of red board edges ([`RedSet`]).
//!
//! The crate enumerates crosspatch pseudotours (every square of degree
//! two), builds the auxiliary graph H on board vertices, and checks the
//! structural facts that hold on rectangular boards: H-degrees are 0 or 2,
//! corner permutations along H-cycles are even, and the knight graph splits
//! into an even number of cycles. It also searches for crosspatch tours and
//! for wrapped boards where the degree property fails.

pub mod board;
pub mod census;
pub mod corner;
pub mod cross;
pub mod engine;
pub mod error;
pub mod hgraph;
pub mod json;
pub mod oracle;
pub mod par;
pub mod render;
mod search;
pub mod symmetry;
pub mod tour;
pub mod verify;

pub use board::{Board, BoardEdge, BoardVertex, Dir4, EdgeDir, Square, Topology};
pub use corner::{step_permutation, Corner, CornerPermutation, Parity};
pub use cross::{cross_partner, knight_moves, move_to_edge, CrossPair, CrossTable, KnightMove};
pub use engine::{
    cycle_decomposition, enumerate_exact, enumerate_pseudotours, realize_graph, CrosspatchGraph,
    CycleDecomposition, EnumOptions, Enumeration, Parallelism, Progress, RedSet,
};
pub use error::{Error, Result};
pub use search::Decision;
