pub mod cli;
pub mod config;
pub mod error;
pub mod geometry;
pub mod loss;
pub mod pantilt;
pub mod planner;
pub mod pose_eval;
pub mod randomizer;
pub mod records;
pub mod simulator;
pub mod synthetic;
pub mod surface;

pub use error::{Error, Result};
