//! Anisotropic Hörmander spaces `H^{s, s*gamma; phi}`: the weight
//! `r_gamma`, function parameters `phi` and their screening, the
//! Dini-type integral test, spectral norms of sampled functions, and
//! embedding comparisons between space indices.

mod class_m;
mod dini;
mod embedding;
mod grid;
mod norm;
mod phi;
mod quad;

pub use class_m::{check_class_m, ClassMConfig, ClassMReport, SlowVariationProbe};
pub use dini::{dini_integral, dini_settings, dini_integral_numeric, DiniMethod, DiniResult, DiniVerdict};
pub use embedding::{embedding_order, Embedding};
pub use grid::{AnisoGridFunction, TimeSupport};
pub use norm::{norm_full_space, SpaceTag, EDGE_DECAY_TOLERANCE};
pub use phi::FunctionParameter;
pub use quad::integrate_adaptive;

/// `r_gamma(xi, eta) = (1 + |xi|^2 + |eta|^{2 gamma})^{1/2}`.
pub fn weight_r_gamma(xi: &[f64], eta: f64, gamma: f64) -> f64 {
    let xi2: f64 = xi.iter().map(|v| v * v).sum();
    (1.0 + xi2 + eta.abs().powf(2.0 * gamma)).sqrt()
}
