pub mod cli;
pub mod finite_descent;
pub mod lie_core;
pub mod oracles;
pub mod picard_tables;
pub mod rep_algebra;
