pub mod cli;
pub mod decoder;
pub mod error;
pub mod gaussian;
pub mod gkp;
pub mod rng;
pub mod noise;
pub mod surface;
pub mod threshold;
