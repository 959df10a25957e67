pub mod asymptotics;
pub mod certifier;
pub mod cli;
pub mod error;
pub mod exact;
pub mod numerics;
pub mod polynomials;
