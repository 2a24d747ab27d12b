//! Simulation of `(S, R)` pairs: the exact inverse-transform sampler and an
//! independent Euler–Maruyama path oracle.

mod exact;
mod oracle;
mod rng;

pub use exact::{sample_ig, sample_x0_given_s, BackwardRecurrence, ExactSampler, LatentDraw};
pub use oracle::{oracle_sample_pair, OracleConfig};
pub use rng::RngStream;
