//! Numerical Kähler geometry: the tube over an exponential family, complex
//! projective space, and the Veronese immersion of the binomial family.
//!
//! Everything here is binary64. Seeded sampling for the check suites uses
//! [`KAHLER_SEED`].

mod projective;
mod tube;
mod veronese;

pub use projective::{
    alpha_map, fs_line_area, fs_metric, hamiltonian_check_pm, hamiltonian_check_pm_with, in_scaled_simplex, k_map,
    mu_c_p1, mu_prime, torus_action_pm, FsMetric, ProjectivePoint,
};
pub use tube::{
    calibrate_frame_scale, closedness_check, dombrowski_metric, hamiltonian_check_tube, kahler_form,
    kahler_form_from_metric, tube_action, tube_momentum, Frame, MetricField, TubePoint, TUBE_FRAME_SCALE,
};
pub use veronese::{
    binomial_pmf, pullback_isometry_check, rho_binomial, rho_binomial_derivative, t_binomial, verify_equivariance,
    verify_equivariance_with, verify_veronese_momentum, veronese,
};

/// Seed for sampled Kähler check points.
pub const KAHLER_SEED: u64 = 0xA11CE;
