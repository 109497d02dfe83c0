//! Fiber map, Gramian field and optimal θ-shift-invariant approximation.

pub mod fiber;
pub mod sinc;
pub mod sis;

pub use fiber::{fiber_map, gramian_field, FiberField, FiberGrid, FiberNormalization, GramianField, OffsetWindow};
pub use sinc::{analytic_sinc_fibers, display_coefficients, sinc_error_table, sinc_family_member};
pub use sis::{approximation_error, fit_sis, project, synthesize_generator, SisModel};
