//! Command-line driver, file formats, instance generators and experiment
//! suites around `integrale-core`.

pub mod decimal;
pub mod driver;
pub mod experiment;
pub mod format;
pub mod generate;
