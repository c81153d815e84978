//! Steady treadmilling of an incompressible elastic shell that accretes at
//! the surface of a rigid sphere and ablates at its outer surface.
//!
//! * [`strain_energy`]: reduced energies `W(lambda)` and their checks.
//! * [`mechanics`]: stretches, velocity and residual stresses in the shell.
//! * [`diffusion`]: steady free-particle flux and chemical potential.
//! * [`treadmill`]: characteristic scales, the solvability test, the root
//!   solver and the small/large bead asymptotes.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffusion;
pub mod error;
pub mod mechanics;
pub mod root;
pub mod strain_energy;
pub mod treadmill;

pub use diffusion::{Side, SteadyProfiles, TransportParams};
pub use error::{Error, Result, Unsolvable};
pub use mechanics::{FieldSample, ShellGeometry};
pub use strain_energy::{CustomEnergy, MooneyRivlin, NeoHookean, ReducedEnergy, ValidationReport};
pub use treadmill::{
    compute_scales, solvable, solve, solve_at_eta, LargeBeadEstimate, LargeBeadRegime, ModelParams,
    Scales, SmallBeadLimit, TreadmillState,
};
