//! A numerical laboratory for the almost Mathieu operator
//!
//! (Hu)(n) = u(n+1) + u(n−1) + 2λ cos 2π(θ + nα) u(n)
//!
//! built around exact rational arithmetic for the frequency/phase and log-domain
//! (optionally extended-precision) recursions for everything exponentially large
//! or small.

pub mod arithmetic;
pub mod asymptotics;
pub mod cli;
pub mod eigensolve;
pub mod error;
pub mod hierarchy;
pub mod logdomain;
pub mod operator;
pub mod real;
pub mod sctest;

pub use error::{Error, Result};
pub use real::{Real, XReal};
