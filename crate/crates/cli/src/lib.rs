//! Command-line front end for the cover engine: instance file parsing and
//! emission, seeded generators, the solve/bench/generate drivers, and the
//! JSON result document with its re-verification path.

pub mod document;
pub mod format;
pub mod generate;
pub mod run;
