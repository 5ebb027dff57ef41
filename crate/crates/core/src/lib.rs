//! Quantum particle on the surface of a helical tube.
//!
//! The crate builds the tube geometry from curvature `kappa`, torsion `tau`
//! and radius `rho0`, evaluates the curvature-induced potential and the extra
//! potential of the flat-measure gauge, and computes the band structure in a
//! two-band model together with brute-force reference spectra.
//!
//! Energies are `2 mu E / hbar^2` throughout.
//!
//! ```
//! use helitube::{BandModel, HelixSpec};
//!
//! let spec = HelixSpec::from_epsilon(1.0, 1.0, 0.05).unwrap();
//! let gap = BandModel::new(spec).zone_boundary_gap();
//! assert!(gap > 0.0);
//! ```

pub mod bloch;
pub mod eigen;
pub mod error;
pub mod field;
pub mod geometry;
pub mod helix;
pub mod operators;
pub mod oracle;
pub mod spectral;
pub mod verify;

pub use bloch::{
    coupling, coupling_coefficients, cylinder_limit_energy, gap_scaling, BandModel, BandSource, BandStructure,
    BlochVector, CouplingTable, GapFit, KPath, ReciprocalVector,
};
pub use eigen::{eigensolve, CMatrix, SpectrumResult};
pub use error::{Error, Result};
pub use field::{sample_field, sample_field_with_period, CellGrid, Quantity, ScalarField2D};
pub use geometry::{Curvatures, FrameSample, SurfaceSample, Vec3};
pub use helix::HelixSpec;
pub use operators::{EffectiveParams, Gauge, Perturbation, SurfaceOperators, WaveField};
pub use oracle::{band_sweep, Basis, DiscretizedHamiltonian, OracleOptions};
