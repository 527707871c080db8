pub mod error;
pub mod linalg;
pub mod par;
pub mod rng;
pub mod tol;
pub mod numrange;
pub mod opt;
pub mod bj;
pub mod report;
pub mod gns;
pub mod approx;
pub mod oracle;
pub mod io;
pub mod cli;
pub mod demo;
pub mod suite;
