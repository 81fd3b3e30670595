//! Vacuum dispersion energy between two ground-state dipoles inside a
//! rectangular, perfectly conducting hollow waveguide in the tight
//! confinement regime, where every mode cutoff lies above the dipole
//! transition frequencies.
//!
//! Natural units throughout: ħ = c = 1, permittivity ε carried explicitly,
//! lengths in the unit of the guide width `a`.
//!
//! * [`modes`]: geometry, TE/TM modes, cutoffs, transverse profiles.
//! * [`coupling`]: per-mode coupling functions `F^μ_mn,ij(z)` in closed form
//!   and by contour/real-axis quadrature.
//! * [`energy`]: mode-summed coupling tensor, dispersion energy with
//!   certified truncation tails, free-space references.
//! * [`oracle`]: brute-force fourth-order sum over all twelve time orderings.
//! * [`asymptotic`]: small-separation lattice sums and their integral
//!   approximations.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod asymptotic;
pub mod bessel;
pub mod checks;
pub mod coupling;
pub mod energy;
pub mod error;
pub mod fit;
pub mod modes;
pub mod oracle;
pub mod quadrature;
pub mod species;
pub mod units;

pub use asymptotic::{fbar_zz_direct, fbar_zz_integral, smallz_f_components, te_smallz_scaling, SumSpec};
pub use bessel::bessel_k0;
pub use coupling::{
    f_quadrature, f_te_closed, f_tm_closed, Axis, CouplingMethod, CouplingValue, OrientationPair, QuadratureSpec,
    Regularization, TeFactor, TmSign,
};
pub use energy::{
    dispersion_energy, f_tensor, mode_tensor, polarizability, ratio_to_freespace, u_freespace_cp, u_freespace_vdw,
    u_retarded_closed, Conventions, EnergyBreakdown, FTensor, FreeSpaceForm, ModeSelection, PairConfiguration,
    RatioReference, Tensor3, Truncation,
};
pub use error::{Error, Result};
pub use modes::{
    cutoff_wavenumber, enumerate_modes, mode_frequency, normalization_integral, transverse_profile, Complex3Vector,
    Geometry, ModeIndex, Normalization, Polarization, TransversePoint,
};
pub use oracle::{fourth_order_oracle, OracleResult, OracleSpec, OrderingSet, TimeOrdering};
pub use species::{DipoleSpecies, DipoleTransition, Orientation};
