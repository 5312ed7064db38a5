//! Mesoscopic entanglement generated by a common heat bath.
//!
//! Two non-interacting spin-1/2 chains share a thermal bath. Collective
//! fluctuation operators of the chains behave as four bosonic modes whose
//! dissipative dynamics is Gaussian. This crate
//!
//! - builds the single-site algebra and the Lindblad generator ([`spin_algebra`],
//!   [`microscopic`]),
//! - propagates Gaussian states of the fluctuation modes in closed form
//!   ([`mesoscopic`]),
//! - measures `a₁ | b₁` entanglement by logarithmic negativity ([`entanglement`]),
//!
//! on top of a small dense complex linear algebra kernel ([`numerics`]).

pub mod entanglement;
pub mod error;
pub mod mesoscopic;
pub mod microscopic;
pub mod numerics;
pub mod spin_algebra;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use spin_algebra::ModelParams;
