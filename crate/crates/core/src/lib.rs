//! Exact decoders for toric, planar and rotated surface codes.

pub mod bits;
pub mod chain;
pub mod error;
pub mod gadgets;
pub mod gf2;
pub mod lattice;
pub mod matching;
pub mod noise;
pub mod rng;
pub mod smlc;
pub mod sim;
pub mod smw;
pub mod verify;

pub use bits::Bits;
pub use chain::{Chain, ChainFile, Grade};
pub use error::{Error, Result};
pub use lattice::{build_lattice, CodeFamily, Family, Lattice, LatticePair, Side};
