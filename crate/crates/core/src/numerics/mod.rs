//! Floating-point side: the step law of the forest-coding walk, its local
//! limit, the map-Airy density and the freezer jump kernels.

mod airy;
mod britikov;
mod forest_sampler;
mod kernel;
mod mu;
mod quad;
mod walk;

pub use airy::{airy_ai, airy_ai_prime, airy_p1, airy_pt, p1_left_tail, p1_right_tail, AI0, P1_AT_ZERO};
pub use britikov::{britikov_count, critical_lambda, Regime, CRITICAL_BAND};
pub use forest_sampler::{sample_uniform_forest, uniform_cayley_tree, SampledForest, MAX_ATTEMPTS};
pub use kernel::{jump_density, jump_kernel_g, predicted_jump_rate};
pub use mu::{mu_mean_tail, mu_pmf, mu_tail_mass, MuLaw};
pub use quad::{adaptive_simpson, p1_normalization};
pub use walk::{walk_pmf, WalkPmfTable};
