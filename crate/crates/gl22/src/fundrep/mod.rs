//! The deformed gl(2|2) loop algebra and its fundamental evaluation
//! representation, with the affine derivation and central extension.

pub mod affine;
pub mod algebra;
pub mod represent;
pub mod serre;

pub use affine::{
    cocycle, cocycle_jacobi, derivation_check, derivative_fd_residual, max_contour_radius, richardson, w_linearity_residual,
    x_derivatives, CocycleJacobiReport, DerivationReport, Laurent, XDerivatives,
};
pub use algebra::{eps, AlgebraElement, GeneratorTerm, Kind, LoopAlgebra};
pub use represent::{homomorphism_residual, represent, represent_element, represent_kind, supertrace};
pub use serre::{serre_chevalley_check, Chevalley, SerreReport, CARTAN};
