//! Planar convex geometry for rate regions: half-plane and vertex
//! representations, pentagons, unions and hulls, Fourier-Motzkin projection
//! and boundary concavity checks.

mod concavity;
mod fourier_motzkin;
mod pentagon;
mod region;

pub use concavity::{check_boundary_concavity, ConcavityReport, DEFAULT_CONCAVITY_TOL};
pub use fourier_motzkin::{fourier_motzkin_project, Inequality, LinearSystem};
pub use pentagon::{pareto_pentagons, pentagon_to_region, Pentagon};
pub use region::{union_area, union_over_sweep, HalfPlane, Point, RateRegion, CONTAINMENT_SLACK};
