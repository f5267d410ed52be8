pub mod budget;
pub mod correlation;
pub mod design;
pub mod discrepancy;
pub mod distance;
pub mod error;
pub mod io;
pub mod matrix;
pub mod nets;
pub mod oa;
pub mod olh;
pub mod rng;
pub mod sampling;
pub mod search;
