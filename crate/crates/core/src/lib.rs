pub mod bounds;
pub mod dynamics;
pub mod exact;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod greedy;
pub mod io;
pub mod schedule;
pub mod transforms;
pub mod tree;
