//! Numerical toolkit for screw-motion constant-mean-curvature tubes in the
//! homogeneous 3-manifolds E(kappa, tau).
//!
//! The crate computes profile curves of screw-motion CMC surfaces (closed-form
//! radius plus quadrature heights, with a direct arclength ODE integrator as an
//! independent oracle), solves for the tube energies where the profile closes,
//! classifies moduli points, decides embeddedness and foliation questions for
//! the solved families, runs isoperimetric area/volume sweeps in the compact
//! model, and exports curves and meshes as CSV/OBJ.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the out-of-range
// values, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod export;
pub mod isoperimetric;
pub mod moduli;
pub mod ode;
pub mod profile;
pub mod quad;
pub mod roots;
pub mod space;

pub use analysis::{
    dihedral_order, embedded_berger, embedded_noncompact, foliation_decision, hmax_closed_form,
    hmax_derivative, solve_x0, BergerEmbedding, DecisionRecord, FoliationVerdict,
};
pub use error::{Error, Result};
pub use export::{sample_surface, write_curve_csv, write_obj, Chart, SurfaceGrid};
pub use isoperimetric::{
    ambient_volume, profile_sweep, tube_area, tube_volume, write_sweep_csv, SweepRow,
};
pub use moduli::{
    boundary_h0, classify, nil_uniqueness_bound, tube_energy, tube_family, FamilyEntry,
    FamilyReport, JBracket, SolveStatus, SurfaceClass, TubeSolution,
};
pub use ode::{integrate_ode_direct, integrate_to_sigma, OdeSolution, StepControl};
pub use profile::{
    boundary_integrand, boundary_residual, closing_defect, h_max, height_at, height_derivative,
    radius_at, radius_derivative, radius_extremes, ModuliPoint, ProfileCurve,
};
pub use quad::QuadratureSettings;
pub use roots::RootFindSettings;
pub use space::{AmbientSpace, BergerPitch, Pitch, TrigKind};
