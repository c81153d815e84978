//! Kinematics and residual stress in the grown spherical shell.
//!
//! Material is laid down unstretched at the inner surface `r0` and pushed
//! outward, so a particle at radius `r` carries hoop stretch `r/r0` and,
//! by incompressibility, radial stretch `(r0/r)^2`. With a traction-free
//! outer surface the radial stress integrates in closed form to
//! `sigma_r(r) = W(r/r0) - W(r1/r0)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::strain_energy::ReducedEnergy;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellGeometry {
    pub r0: f64,
    pub r1: f64,
}

impl ShellGeometry {
    pub fn new(r0: f64, r1: f64) -> Result<Self> {
        if !(r0 > 0.0 && r1 >= r0 && r1.is_finite()) {
            return Err(Error::InvalidGeometry { r0, r1 });
        }
        Ok(ShellGeometry { r0, r1 })
    }

    /// `nu = r1 / r0`.
    pub fn ratio(&self) -> f64 {
        self.r1 / self.r0
    }

    pub fn thickness(&self) -> f64 {
        self.r1 - self.r0
    }

    fn check_inside(&self, r: f64) -> Result<()> {
        if r >= self.r0 && r <= self.r1 {
            Ok(())
        } else {
            Err(Error::RadiusOutOfRange {
                r,
                lo: self.r0,
                hi: self.r1,
            })
        }
    }
}

/// Pointwise state of the solid at radius `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub r: f64,
    pub lambda_r: f64,
    pub lambda_theta: f64,
    pub sigma_r: f64,
    pub sigma_theta: f64,
    /// Radial particle velocity, present only when an accretion speed is given.
    pub v: Option<f64>,
}

/// Current radius of the particle with material coordinate `z`, given the
/// growth surface currently sits at `z0` and has radius `r0`.
pub fn radius_of_particle(z: f64, z0: f64, r0: f64) -> Result<f64> {
    if z < z0 {
        return Err(Error::ParticleNotInBody { z, z0 });
    }
    if !(r0 > 0.0) {
        return Err(Error::InvalidGeometry { r0, r1: r0 });
    }
    Ok((r0 * r0 * r0 + 3.0 * r0 * r0 * (z - z0)).cbrt())
}

fn check_outside_bead(r: f64, r0: f64) -> Result<()> {
    if !(r0 > 0.0) {
        return Err(Error::InvalidGeometry { r0, r1: r });
    }
    if r >= r0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::RadiusOutOfRange {
            r,
            lo: r0,
            hi: f64::INFINITY,
        })
    }
}

/// Principal stretches `(lambda_r, lambda_theta)` at radius `r`.
pub fn stretches(r: f64, r0: f64) -> Result<(f64, f64)> {
    check_outside_bead(r, r0)?;
    let q = r0 / r;
    Ok((q * q, r / r0))
}

/// Radial particle speed; `v0` is the speed of the growth surface.
pub fn velocity(r: f64, v0: f64, r0: f64) -> Result<f64> {
    check_outside_bead(r, r0)?;
    let q = r0 / r;
    Ok(v0 * q * q)
}

/// Growth rate of the outer radius implied by the surface speeds: the
/// volume balance `r1^2 dr1/dt = r0^2 (V1 + V0)`. Zero when treadmilling.
pub fn outer_radius_rate(geom: &ShellGeometry, v0: f64, v1: f64) -> f64 {
    let q = geom.r0 / geom.r1;
    q * q * (v1 + v0)
}

pub fn radial_stress(r: f64, geom: &ShellGeometry, energy: &dyn ReducedEnergy) -> Result<f64> {
    geom.check_inside(r)?;
    Ok(energy.w(r / geom.r0) - energy.w(geom.ratio()))
}

pub fn hoop_stress(r: f64, geom: &ShellGeometry, energy: &dyn ReducedEnergy) -> Result<f64> {
    let sigma_r = radial_stress(r, geom, energy)?;
    let l = r / geom.r0;
    Ok(sigma_r + 0.5 * l * energy.dw(l))
}

pub fn sample(
    r: f64,
    geom: &ShellGeometry,
    energy: &dyn ReducedEnergy,
    v0: Option<f64>,
) -> Result<FieldSample> {
    let (lambda_r, lambda_theta) = stretches(r, geom.r0)?;
    let v = match v0 {
        Some(v0) => Some(velocity(r, v0, geom.r0)?),
        None => None,
    };
    Ok(FieldSample {
        r,
        lambda_r,
        lambda_theta,
        sigma_r: radial_stress(r, geom, energy)?,
        sigma_theta: hoop_stress(r, geom, energy)?,
        v,
    })
}

/// `n` samples uniformly spaced in `r` on `[r0, r1]`, endpoints included.
pub fn stress_profile(
    geom: &ShellGeometry,
    energy: &dyn ReducedEnergy,
    n: usize,
    v0: Option<f64>,
) -> Result<Vec<FieldSample>> {
    if n < 2 {
        return Err(Error::InvalidGrid(format!(
            "profile needs at least 2 points, got {n}"
        )));
    }
    radial_grid(geom, n)
        .into_iter()
        .map(|r| sample(r, geom, energy, v0))
        .collect()
}

pub(crate) fn radial_grid(geom: &ShellGeometry, n: usize) -> Vec<f64> {
    let dr = geom.thickness() / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                geom.r1
            } else {
                geom.r0 + dr * i as f64
            }
        })
        .collect()
}

/// Largest mismatch between a centered difference of `sigma_r` and the
/// equilibrium right-hand side `W'(r/r0)/r0` over the interior grid points.
pub fn equilibrium_residual(
    geom: &ShellGeometry,
    energy: &dyn ReducedEnergy,
    n: usize,
) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidGrid(format!(
            "residual needs at least 3 points, got {n}"
        )));
    }
    let dr = geom.thickness() / (n - 1) as f64;
    if dr == 0.0 {
        return Ok(0.0);
    }
    // sigma_r up to its additive constant, which drops out of the difference
    // and would otherwise trip the range check one rounding step past r1.
    let sigma = |r: f64| energy.w(r / geom.r0);
    let mut worst = 0.0_f64;
    for i in 1..n - 1 {
        let r = geom.r0 + dr * i as f64;
        let fd = (sigma(r + dr) - sigma(r - dr)) / (2.0 * dr);
        let rhs = energy.dw(r / geom.r0) / geom.r0;
        worst = worst.max((fd - rhs).abs());
    }
    Ok(worst)
}
