//! Deciding and constructing circle drawings of signed graphs in which
//! every vertex sits strictly closer to all of its friends than to any of
//! its enemies, plus the proper circular-arc machinery the construction
//! rests on.

pub mod angle;
pub mod arcs;
pub mod construction;
pub mod drawing;
pub mod graph;
pub mod io;
pub mod recognition;
pub mod render;
pub mod solver;
pub mod twosat;
