pub mod classify;
pub mod cli;
pub mod criteria;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod states;
pub mod tolerance;
