//! Chess960 corpus analysis.
//!
//! The pipeline reads PGN games, counts each side's men in five board
//! regions at chosen move numbers, and uses those counts two ways: as
//! feature rows for outcome classifiers (k-nearest neighbours, random
//! forest, gradient boosted trees) and as per-phase deltas that assign each
//! start position the region its play develops towards.

pub mod chess;
pub mod dataset;
pub mod diag;
pub mod game;
pub mod ingest;
pub mod learn;
pub mod par;
pub mod regions;
pub mod report;
pub mod rng;
pub mod synth;
pub mod themes;

pub use game::{position_at_move, GameError, GameRecord, Outcome};
