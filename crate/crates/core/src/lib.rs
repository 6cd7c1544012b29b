//! Performance bounds for maximum-likelihood decoding of binary linear codes
//! and code ensembles on memoryless binary-input symmetric channels.

pub mod channel;
pub mod codebook;
pub mod curve;
pub mod density;
pub mod ensemble;
pub mod error;
pub mod gallager;
pub mod geometric;
pub mod lower;
pub mod optimize;
pub mod oracle;
pub mod quad;
pub mod sampling;
pub mod special;
pub mod union;

pub use channel::ChannelModel;
pub use codebook::{DistanceSpectrum, Iowef, LinearCode, WeightConvention, WeightTable};
pub use error::{Error, ErrorClass, Result};
pub use gallager::{BoundParams, TiltFamily, TiltingMeasure};
pub use curve::{BoundCurve, BoundInput, BoundKind};
pub use geometric::Region;
pub use lower::{EventSystem, WeightingFamily};
