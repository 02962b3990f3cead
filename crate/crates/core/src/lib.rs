#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod spacetime;
pub mod sphere;
pub mod surface;
pub mod geometry;
pub mod spinor;
pub mod embedding;
pub mod boundary;
pub mod np;
pub mod mass;
pub mod config;
pub mod cli;
