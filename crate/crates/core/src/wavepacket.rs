//! Free-particle Gaussian wavepackets in natural units (ħ = m = 1).
//!
//! A packet is anchored at a spacetime event: the emission event for a
//! source-side packet, or the absorption event for a detector-side packet.
//! Both roles share one functional form,
//!
//! ```text
//! ψ(x, t) = (2σ²/π)^{1/4} · (i(t − t₀) + 2σ²)^{-1/2} · exp(−(x − x₀)² / (2i(t − t₀) + 4σ²))
//! ```
//!
//! which at `t = t₀` is a real Gaussian whose probability density has
//! standard deviation σ. Conjugation of detector-side packets happens where
//! amplitude densities are assembled, not here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Value type for wavefunctions, densities and amplitudes.
pub type ComplexAmplitude = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeEvent {
    pub position: f64,
    pub time: f64,
}

impl SpacetimeEvent {
    pub const fn new(position: f64, time: f64) -> Self {
        Self { position, time }
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite() && self.time.is_finite()
    }
}

/// Which side of a transition a packet belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    /// ψ, emitted at a source.
    Ket,
    /// φ, anchored at a detector; enters densities as φ*.
    Bra,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PacketError {
    #[error("packet width must be positive and finite, got {0}")]
    InvalidWidth(f64),
    #[error("packet origin must be finite, got ({position}, {time})")]
    NonFiniteOrigin { position: f64, time: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPacket {
    origin: SpacetimeEvent,
    width: f64,
    role: Role,
}

impl GaussianPacket {
    pub fn new(origin: SpacetimeEvent, width: f64, role: Role) -> Result<Self, PacketError> {
        if !(width.is_finite() && width > 0.0) {
            return Err(PacketError::InvalidWidth(width));
        }
        if !origin.is_finite() {
            return Err(PacketError::NonFiniteOrigin {
                position: origin.position,
                time: origin.time,
            });
        }
        Ok(Self {
            origin,
            width,
            role,
        })
    }

    /// Unit-width source packet.
    pub fn ket(position: f64, time: f64) -> Self {
        Self {
            origin: SpacetimeEvent::new(position, time),
            width: 1.0,
            role: Role::Ket,
        }
    }

    /// Unit-width detector packet.
    pub fn bra(position: f64, time: f64) -> Self {
        Self {
            origin: SpacetimeEvent::new(position, time),
            width: 1.0,
            role: Role::Bra,
        }
    }

    pub fn origin(&self) -> SpacetimeEvent {
        self.origin
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn evaluate(&self, x: f64, t: f64) -> ComplexAmplitude {
        let s2 = self.width * self.width;
        let dt = t - self.origin.time;
        let dx = x - self.origin.position;
        let prefactor = (2.0 * s2 / PI).powf(0.25);
        let spread = Complex64::new(2.0 * s2, dt);
        let exponent = -Complex64::new(dx * dx, 0.0) / (2.0 * spread);
        prefactor * spread.sqrt().inv() * exponent.exp()
    }

    /// Standard deviation of |ψ(·, t)|².
    pub fn density_sigma(&self, t: f64) -> f64 {
        let s2 = self.width * self.width;
        let dt = t - self.origin.time;
        (4.0 * s2 * s2 + dt * dt).sqrt() / (2.0 * self.width)
    }

    /// Same packet re-anchored at another event.
    pub fn with_origin(&self, origin: SpacetimeEvent) -> Self {
        Self { origin, ..*self }
    }
}
