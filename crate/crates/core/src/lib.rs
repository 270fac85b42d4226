//! Discrete-event simulation of a roadside broadcaster, mobile receivers and a
//! mobile jammer over a free-space radio channel, with steerable antennas.

// `!(x > 0.0)` is used throughout to reject NaN alongside out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod antenna;
pub mod engine;
pub mod geometry;
pub mod pipeline;
pub mod propagation;
pub mod report;
pub mod scenario;
