//! One-dimensional log-concave toolkit: densities with CDF/quantile and
//! conditioning, monotone transport with exact W2, sup-convolution integrals,
//! and the lemma-level checks used by the verification suites.

mod checks;
mod density;
mod supconv;
mod transport;

pub use checks::{
    check_bobkov_poincare, check_conditioned_variance_monotone, check_density_envelope,
    check_grunbaum, check_prop_pl_stability, check_prop_transport_stability, ENVELOPE_C,
};
pub use density::{
    random_log_concave, rasterize_log_concave, read_density_csv, write_density_csv, Density1d,
    Error, Interval, Result,
};
pub use supconv::{refined_supconv_integral, supconv_1d_integral};
pub use transport::{
    crude_w2_bounds, monotone_transport, pushforward_residual, w2_1d, CrudeBoundMode,
    TransportMap1d,
};
