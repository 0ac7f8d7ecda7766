pub mod analysis;
pub mod correlators;
pub mod error;
pub mod gaussian_entropy;
pub mod polar2d;
pub mod profiles;
pub mod quadrature;
pub mod specfun;
pub mod theory;
pub mod transforms;

pub use error::{Error, Result};
pub use analysis::{FitResult, ShortDistanceConstants};
pub use correlators::{CorrelatorValue, Phase};
pub use gaussian_entropy::{EntropyPoint, EntropyProfile, EntropyResult};
pub use polar2d::DiscEntropy;
pub use profiles::{Channel, Dimension, State, Statistics};
pub use theory::{IrScheme, Theory, TheoryConfig};
