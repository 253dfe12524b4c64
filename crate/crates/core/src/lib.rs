//! Numerical engine for Bloch theory on surface groups: exact group
//! algebra, sampled unitary representations, the abstract and hyperbolic
//! Bloch transforms, and magnetic twists by line bundles.

pub mod bloch_abstract;
pub mod bloch_hyperbolic;
pub mod error;
pub mod gamma_fn;
pub mod group;
pub mod hyperbolic;
pub mod linalg;
pub mod magnetic;
pub mod packet;
pub mod rep_variety;
pub mod rng;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};

pub type DiskPoint64 = hyperbolic::DiskPoint<f64>;
pub type DiskPoint32 = hyperbolic::DiskPoint<f32>;
pub type Mobius64 = hyperbolic::Mobius<f64>;
pub type Mobius32 = hyperbolic::Mobius<f32>;
pub type WavePacket64 = packet::WavePacket<f64>;
pub type WavePacket32 = packet::WavePacket<f32>;
pub type GaugePotential64 = magnetic::GaugePotential<f64>;
