//! The Markov chain induced by π = |ψ|², its spectral gap, the implicit
//! observable L and the canonical-path congestion bound.
//!
//! Two kernels are available. [`Kernel::Pairwise`] proposes a uniformly
//! random flip set of size 1..=k and accepts with the heat-bath ratio
//! π(y)/(π(x)+π(y)). [`Kernel::Block`] picks a uniformly random k-subset A
//! and resamples x_A from π conditioned on x_{A^c}; its similarity transform
//! is exactly the operator whose expectation the shadow-overlap estimator
//! returns. Both agree for k = 1.

mod chain;
mod congestion;
mod observable;
mod scaling;
mod spectral;

pub use chain::*;
pub use congestion::*;
pub use observable::*;
pub use scaling::*;
pub use spectral::*;
