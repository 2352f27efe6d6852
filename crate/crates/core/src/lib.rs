pub mod busemann;
pub mod env;
pub mod error;
pub mod experiments;
pub mod farm;
pub mod lattice;
pub mod limits;
pub mod nu;
pub mod rng;
pub mod stationary;
pub mod tasep;
pub mod stats;
pub mod suite;

pub use error::{Error, Result};
pub use lattice::{LatticePath, Vertex, WeightSource, WeightWindow};
pub use rng::{SimRng, StreamKey};
