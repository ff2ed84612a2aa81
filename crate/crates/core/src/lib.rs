//! Benchmark toolkit for relative validity indices under varying similarity
//! paradigms: datasets, distance measures, clustering, internal and external
//! indices, selection schemes and the experiment harness.

pub mod dataset;
pub mod distances;
pub mod evi;
pub mod harness;
pub mod partitions;
pub mod rvi;
pub mod schemes;
