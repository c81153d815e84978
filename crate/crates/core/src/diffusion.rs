//! Steady radial transport of free particles.
//!
//! Away from the two surfaces the flux is divergence free, so `r^2 h` is
//! constant on each side of `r1`; Fick's law `h = -M dmu/dr` then fixes the
//! chemical potential up to the boundary values `mu0` and `mu_inf`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransportParams {
    /// Mobility inside the solid.
    pub m_inner: f64,
    /// Mobility outside the solid.
    pub m_outer: f64,
    pub rho_r: f64,
    pub mu_inf: f64,
}

impl TransportParams {
    pub fn new(m_inner: f64, m_outer: f64, rho_r: f64, mu_inf: f64) -> Result<Self> {
        for (name, v) in [("M_inner", m_inner), ("M_outer", m_outer), ("rhoR", rho_r)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !mu_inf.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mu_inf must be finite, got {mu_inf}"
            )));
        }
        Ok(TransportParams {
            m_inner,
            m_outer,
            rho_r,
            mu_inf,
        })
    }
}

/// Which side of the outer surface a one-sided value is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

/// Closed-form flux and chemical-potential fields for a steady state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyProfiles {
    pub transport: TransportParams,
    pub r0: f64,
    pub r1: f64,
    pub v0: f64,
    pub v1: f64,
    pub mu0: f64,
}

impl SteadyProfiles {
    pub fn new(
        transport: TransportParams,
        r0: f64,
        r1: f64,
        v0: f64,
        v1: f64,
        mu0: f64,
    ) -> Result<Self> {
        if !(r0 > 0.0 && r1 > r0 && r1.is_finite()) {
            return Err(Error::InvalidGeometry { r0, r1 });
        }
        Ok(SteadyProfiles {
            transport,
            r0,
            r1,
            v0,
            v1,
            mu0,
        })
    }

    /// Radial flux `h(r)`. At `r1` the flux jumps, so `side` picks the limit;
    /// elsewhere it is ignored.
    pub fn flux(&self, r: f64, side: Side) -> Result<f64> {
        flux(
            r,
            side,
            self.v0,
            self.v1,
            self.r0,
            self.r1,
            self.transport.rho_r,
        )
    }

    pub fn chemical_potential(&self, r: f64) -> Result<f64> {
        if !(r >= self.r0) {
            return Err(Error::RadiusOutOfRange {
                r,
                lo: self.r0,
                hi: f64::INFINITY,
            });
        }
        if r < self.r1 {
            Ok(self.inner_potential(r))
        } else {
            Ok(self.outer_potential(r))
        }
    }

    /// Limit of the inner branch at `r1`; equals the outer value whenever the
    /// profiles came from a consistent steady state.
    pub fn mu_below_r1(&self) -> f64 {
        self.inner_potential(self.r1)
    }

    fn inner_potential(&self, r: f64) -> f64 {
        let t = &self.transport;
        self.mu0 + t.rho_r * self.r0 * self.v0 / t.m_inner * (1.0 - self.r0 / r)
    }

    fn outer_potential(&self, r: f64) -> f64 {
        let t = &self.transport;
        let net = self.v0 + self.v1;
        if net == 0.0 {
            return t.mu_inf;
        }
        t.mu_inf - t.rho_r * net / t.m_outer * (self.r0 * self.r0 / r)
    }

    /// Mass-balance residuals at `r0` and `r1` for this state with `mu1`
    /// taken as the value of the outer branch at `r1`.
    pub fn interface_residuals(&self) -> (f64, f64) {
        let mu1 = self.outer_potential(self.r1);
        interface_residuals(
            self.v0,
            self.v1,
            self.mu0,
            mu1,
            self.r0,
            self.r1 - self.r0,
            &self.transport,
        )
        .expect("geometry checked at construction")
    }
}

/// Free-particle flux. Negative values point toward the bead.
pub fn flux(r: f64, side: Side, v0: f64, v1: f64, r0: f64, r1: f64, rho_r: f64) -> Result<f64> {
    if !(r >= r0) {
        return Err(Error::RadiusOutOfRange {
            r,
            lo: r0,
            hi: f64::INFINITY,
        });
    }
    let q = r0 / r;
    let inside = r < r1 || (r == r1 && side == Side::Below);
    let speed = if inside { v0 } else { v0 + v1 };
    Ok(-rho_r * speed * q * q)
}

/// Residuals of the two interface conditions that make the chemical
/// potential continuous at `r1 = r0 + d`:
///
/// ```text
/// res0 = rhoR V0        - M_in  (mu1 - mu0)/d * r1/r0
/// res1 = rhoR (V0 + V1) - M_out (mu_inf - mu1) * r1/r0^2
/// ```
///
/// The shell is described by its thickness `d` rather than `r1` so thin
/// shells do not lose digits to `r1 - r0`.
pub fn interface_residuals(
    v0: f64,
    v1: f64,
    mu0: f64,
    mu1: f64,
    r0: f64,
    d: f64,
    transport: &TransportParams,
) -> Result<(f64, f64)> {
    if !(d > 0.0 && r0 > 0.0 && d.is_finite()) {
        return Err(Error::InvalidGeometry { r0, r1: r0 + d });
    }
    let t = transport;
    let ratio = 1.0 + d / r0;
    let res0 = t.rho_r * v0 - t.m_inner * (mu1 - mu0) / d * ratio;
    let res1 = t.rho_r * (v0 + v1) - t.m_outer * (t.mu_inf - mu1) * ratio / r0;
    Ok((res0, res1))
}

/// Magnitudes the two interface residuals should be compared against: the
/// sum of the absolute values of every term before cancellation.
pub fn interface_residual_scales(
    v0: f64,
    v1: f64,
    mu0: f64,
    mu1: f64,
    r0: f64,
    d: f64,
    transport: &TransportParams,
) -> (f64, f64) {
    let t = transport;
    let ratio = 1.0 + d / r0;
    let s0 = t.rho_r * v0.abs() + t.m_inner * (mu1.abs() + mu0.abs()) / d * ratio;
    let s1 =
        t.rho_r * (v0.abs() + v1.abs()) + t.m_outer * (t.mu_inf.abs() + mu1.abs()) * ratio / r0;
    (s0, s1)
}
