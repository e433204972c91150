//! Magic partially filled arrays over finite abelian groups: representation,
//! verification, block-based constructions, and exhaustive search.

pub mod array;
pub mod blocks;
pub mod constructions;
pub mod graph;
pub mod group;
pub mod ingredients;
pub mod search;
pub mod serial;
pub mod verify;

pub use array::{ArraySet, Pfa};
pub use group::{Group, GroupElement};
pub use verify::{MagicSpec, OmegaSpec, VerificationReport};
