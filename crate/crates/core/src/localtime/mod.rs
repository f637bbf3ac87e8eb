//! Local time of `B` and the identities it satisfies.
//!
//! Two estimators are provided and compared throughout:
//!
//! * the window estimator `(1/2ε) Σ 1_(a−ε,a+ε)(B_{t_i}) Δ⟨B⟩_i`, a direct
//!   discretization of the occupation density against `d⟨B⟩`;
//! * the Tanaka estimator `|B_t − a| − |a| − Σ sgn(B_{t_i} − a) ΔB_i`.
//!
//! All integrands are sampled at left endpoints and `sgn(0) = 0`.

mod checks;
mod convex;
mod estimators;
mod field;
mod mollifier;

pub use checks::{
    delta_bound_check, dyadic_levels, holder_exponent, level_increment, occupation_check,
    qv_of_local_time, stochastic_fubini_check, DeltaBoundReport, FubiniReport, HolderReport,
    OccupationReport, QvReport,
};
pub use convex::{convex_ito_check, ConvexItoReport, ConvexSpec, PiecewiseDensity};
pub use estimators::{
    binned_local_times, tanaka_local_time, tanaka_residual, window_local_time,
};
pub use field::{local_time_field, local_time_field_strided, LocalTimeField};
pub use mollifier::{
    bump, mollified_phi_eps, phi_eps, phi_eps_prime, phi_eps_second, MollifierSpec,
};
