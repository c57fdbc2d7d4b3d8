//! Transition amplitudes and interference patterns for one and two free
//! Gaussian quanta, in the conventional (collapse at detection) and the
//! time-symmetric (transition amplitude density) formulations.
//!
//! ```
//! use twoquanta::{probability, QuadratureConfig, Statistics, TransitionSpec};
//!
//! let spec = TransitionSpec::paper_two_quanta(Statistics::Boson);
//! let p = probability(&spec, &QuadratureConfig::default()).unwrap();
//! assert!((p - 6.25e-3).abs() < 5e-6);
//! ```

pub mod exec;
pub mod quadrature;
pub mod scan;
pub mod transitions;
pub mod wavepacket;

pub use exec::ExecMode;
pub use quadrature::{
    gaussian_overlap_oracle, Interval, QuadratureConfig, QuadratureError, Scheme,
};
pub use scan::{
    default_field_axes, rotation_symmetry_audit, sample_field, scan_detectors, scan_detectors_with,
    FieldAxes, FieldBlock, GridSpec, ProbabilityGrid, ScanError,
};
pub use transitions::{
    amplitude, amplitude_conventional, amplitude_time_symmetric, build_density, density_value,
    probability, AmplitudeDensity, Formulation, PathPermutation, Statistics, TransitionAmplitude,
    TransitionError, TransitionSpec,
};
pub use wavepacket::{ComplexAmplitude, GaussianPacket, Role, SpacetimeEvent};
