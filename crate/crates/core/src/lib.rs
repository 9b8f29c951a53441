pub mod carlson;
pub mod cli;
pub mod coupling;
pub mod fit;
pub mod hadamard;
pub mod report;
pub mod specfun;
pub mod zeros;
