//! Numerical machinery that checks analytic results independently:
//! quadrature, finite-difference Hamiltonians, Sturm bisection, inverse
//! iteration and residual/orthonormality/node diagnostics.

pub mod diagnostics;
pub mod eigen;
pub mod operator;
pub mod quadrature;

pub use diagnostics::{count_nodes, gram_defect, orthonormality_matrix, residual_norm, ResidualSystem};
pub use eigen::{eigenvector, lowest_eigenvalues, lowest_eigenvalues_near, richardson, sturm_count, sturm_counts};
pub use operator::{discretize_constant, discretize_pdem, Grid, TridiagonalOperator, MASS_FLOOR};
pub use quadrature::{integrate, integrate_panels, QuadratureRule, QuadratureSettings};
