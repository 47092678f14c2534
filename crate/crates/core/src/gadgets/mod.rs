//! Fisher gadgets and decorated graphs.

pub mod catalog;
pub mod decorated;

pub use catalog::{make_gadget, single_vertex, Gadget, Parity, Slot};
pub use decorated::{
    build_decorated, llr_weight, DEdge, DecoratedGraph, DecorationProfile, DefectStyle, EvenStyle, Origin,
    Owner, Placed, Weighting, Weights,
};
