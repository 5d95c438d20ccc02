pub mod bounds;
pub mod histograms;
pub mod learn;
pub mod protocol;
pub mod selfcheck;
mod shared;
pub mod sweep;
pub mod thresholds;
