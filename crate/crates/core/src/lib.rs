//! Rook placements on Ferrers boards, the posets they form under Bruhat
//! order, and the block normal form that classifies those posets.

pub mod board;
pub mod bruhat;
pub mod corpus;
pub mod placement;
pub mod poset;
pub mod reconstruct;
pub mod verify;

pub use board::{equivalent, Block, BoardError, GjwSequence, NormalForm, Partition};
pub use bruhat::{avoids_312, board_from_312, lower_bruhat_interval, top_permutation, Permutation, PermutationError};
pub use placement::{PlacementError, RookPlacement};
pub use poset::{are_isomorphic, build_poset, BoardPoset, IsoOracle, Poset, PosetError};
pub use reconstruct::{reconstruct, reconstruct_with, ReconstructError, ReconstructOptions, Reconstruction};
