//! Steady treadmilling: accretion at the bead balanced by ablation at the
//! outer surface.
//!
//! Eliminating the surface chemical potential and the accretion speed from
//! the three governing equations leaves a single equation for the radius
//! ratio `nu = r1/r0`,
//!
//! ```text
//! g(nu) = V* / (1 + eta (1 - 1/nu))  =  V** + W(nu)/b1 = h(nu),
//! ```
//!
//! where `g` decreases from `V*` and `h` increases without bound from `V**`.
//! A root with `nu > 1` and positive speed exists exactly when `V* > 0` and
//! `V* > V**`, and it is then unique. The solver works in the offset
//! `x = nu - 1` so that thin shells keep full relative precision.

use std::sync::Arc;

use serde::Serialize;

use crate::diffusion::{self, SteadyProfiles, TransportParams};
use crate::error::{Error, Result, Unsolvable};
use crate::root::{self, Bracket};
use crate::strain_energy::ReducedEnergy;

/// Relative tolerance on `nu - 1` used by [`solve`].
pub const ROOT_RTOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct ModelParams {
    pub energy: Arc<dyn ReducedEnergy>,
    /// Kinetic modulus at the inner (accreting) surface.
    pub b0: f64,
    /// Kinetic modulus at the outer (ablating) surface.
    pub b1: f64,
    pub mu_r0: f64,
    pub mu_r1: f64,
    pub mu_inf: f64,
    pub rho_r: f64,
    /// Mobility inside the solid.
    pub mobility: f64,
    /// Bead radius.
    pub r0: f64,
}

impl ModelParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        energy: Arc<dyn ReducedEnergy>,
        b0: f64,
        b1: f64,
        mu_r0: f64,
        mu_r1: f64,
        mu_inf: f64,
        rho_r: f64,
        mobility: f64,
        r0: f64,
    ) -> Result<Self> {
        let p = ModelParams {
            energy,
            b0,
            b1,
            mu_r0,
            mu_r1,
            mu_inf,
            rho_r,
            mobility,
            r0,
        };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        let positive = [
            ("b0", self.b0),
            ("b1", self.b1),
            ("rhoR", self.rho_r),
            ("M", self.mobility),
            ("r0", self.r0),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("muR0", self.mu_r0),
            ("muR1", self.mu_r1),
            ("mu_inf", self.mu_inf),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn scales(&self) -> Scales {
        compute_scales(self)
    }

    /// Same material and chemistry with bead radius `r0`.
    pub fn with_r0(&self, r0: f64) -> Self {
        ModelParams { r0, ..self.clone() }
    }

    /// Same material and chemistry with the bead radius chosen so that
    /// `r0 / ell* = eta`.
    pub fn with_eta(&self, eta: f64) -> Self {
        self.with_r0(eta * self.scales().ell_star)
    }

    /// Transport data for the diffusion fields; `m_outer` never enters a
    /// treadmilling state but is needed for general profiles.
    pub fn transport(&self, m_outer: f64) -> Result<TransportParams> {
        TransportParams::new(self.mobility, m_outer, self.rho_r, self.mu_inf)
    }
}

/// Characteristic velocity, length and chemical-potential scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scales {
    pub v_star: f64,
    pub v_star_star: f64,
    pub ell_star: f64,
    pub mu_star: f64,
    pub eta: f64,
}

pub fn compute_scales(p: &ModelParams) -> Scales {
    let sum_b = p.b0 + p.b1;
    let ell_star = sum_b * p.mobility / (p.rho_r * p.rho_r);
    Scales {
        v_star: (p.mu_r1 - p.mu_r0) * p.rho_r / sum_b,
        v_star_star: (p.mu_r1 - p.mu_inf) * p.rho_r / p.b1,
        ell_star,
        mu_star: (p.b0 * p.mu_r1 + p.b1 * p.mu_r0) / sum_b,
        eta: p.r0 / ell_star,
    }
}

/// `Ok(())` when a treadmilling state exists, otherwise the first violated
/// inequality.
pub fn solvable(p: &ModelParams) -> std::result::Result<(), Unsolvable> {
    let s = compute_scales(p);
    if !(s.v_star > 0.0) {
        Err(Unsolvable::NonPositiveVstar)
    } else if !(s.v_star > s.v_star_star) {
        Err(Unsolvable::VstarNotAboveVstarstar)
    } else {
        Ok(())
    }
}

/// Kinetic branch `V* / (1 + eta (1 - 1/lambda))`.
pub fn g(eta: f64, lambda: f64, v_star: f64) -> Result<f64> {
    if !(lambda >= 1.0) {
        return Err(Error::StretchBelowOne(lambda));
    }
    if !(eta >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eta must be non-negative, got {eta}"
        )));
    }
    Ok(g_offset(eta, lambda - 1.0, v_star))
}

/// Elastic branch `V** + W(lambda)/b1`.
pub fn h(lambda: f64, v_star_star: f64, b1: f64, energy: &dyn ReducedEnergy) -> Result<f64> {
    if !(lambda >= 1.0) {
        return Err(Error::StretchBelowOne(lambda));
    }
    Ok(h_offset(lambda - 1.0, v_star_star, b1, energy))
}

#[inline]
fn g_offset(eta: f64, x: f64, v_star: f64) -> f64 {
    // 1 - 1/lambda = x / (1 + x)
    v_star / (1.0 + eta * (x / (1.0 + x)))
}

#[inline]
fn h_offset(x: f64, v_star_star: f64, b1: f64, energy: &dyn ReducedEnergy) -> f64 {
    v_star_star + energy.w(1.0 + x) / b1
}

/// `g(lambda) - h(lambda)`; its unique zero on `lambda > 1` is the
/// treadmilling radius ratio.
pub fn mismatch(p: &ModelParams, lambda: f64) -> Result<f64> {
    if !(lambda >= 1.0) {
        return Err(Error::StretchBelowOne(lambda));
    }
    let s = compute_scales(p);
    Ok(mismatch_offset(p, &s, lambda - 1.0))
}

fn mismatch_offset(p: &ModelParams, s: &Scales, x: f64) -> f64 {
    g_offset(s.eta, x, s.v_star) - h_offset(x, s.v_star_star, p.b1, p.energy.as_ref())
}

/// Full steady solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreadmillState {
    pub eta: f64,
    pub nu: f64,
    pub r1: f64,
    /// Thickness `r1 - r0`.
    pub d: f64,
    pub v0: f64,
    pub v1: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub f0: f64,
    pub f1: f64,
}

impl TreadmillState {
    pub fn d_over_r0(&self) -> f64 {
        self.nu - 1.0
    }

    /// Diffusion fields of this state.
    pub fn profiles(&self, p: &ModelParams, m_outer: f64) -> Result<SteadyProfiles> {
        SteadyProfiles::new(
            p.transport(m_outer)?,
            p.r0,
            self.r1,
            self.v0,
            self.v1,
            self.mu0,
        )
    }
}

/// Root of the mismatch in the offset `x = nu - 1`, without consulting
/// [`solvable`]. `None` when no sign change exists on `(0, 1e9]`.
pub fn attempt_root(p: &ModelParams) -> Option<(f64, f64)> {
    let s = compute_scales(p);
    let f = |x: f64| mismatch_offset(p, &s, x);
    let x = root::positive_root(f, s.v_star - s.v_star_star, ROOT_RTOL).ok()?;
    Some((1.0 + x, g_offset(s.eta, x, s.v_star)))
}

fn root_offset(p: &ModelParams, s: &Scales) -> Result<f64> {
    // Scale by V* so the tolerances behave the same for any unit system.
    let inv = 1.0 / s.v_star;
    let f = |x: f64| inv * mismatch_offset(p, s, x);
    let bracket: Bracket = root::bracket_sign_change(f, inv * (s.v_star - s.v_star_star))?;
    let x = root::brent(f, bracket, ROOT_RTOL)?;
    if !(x > 0.0) {
        return Err(Error::NumericFailure(format!(
            "root offset {x} is not positive"
        )));
    }
    Ok(x)
}

pub fn solve(p: &ModelParams) -> Result<TreadmillState> {
    p.check()?;
    solve_with_scales(p, &compute_scales(p))
}

/// Solves with the bead radius set by `eta = r0 / ell*`.
///
/// `eta = 0` is the limit of an infinitely mobile solid: the kinetic branch
/// is the constant `V*`, and lengths are reported relative to `p.r0`.
pub fn solve_at_eta(p: &ModelParams, eta: f64) -> Result<TreadmillState> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "eta must be non-negative, got {eta}"
        )));
    }
    if eta == 0.0 {
        p.check()?;
        let s = Scales {
            eta: 0.0,
            ..compute_scales(p)
        };
        return solve_with_scales(p, &s);
    }
    solve(&p.with_eta(eta))
}

fn solve_with_scales(p: &ModelParams, s: &Scales) -> Result<TreadmillState> {
    solvable(p).map_err(Error::NoTreadmillingState)?;
    let s = *s;
    let x = root_offset(p, &s)?;

    let nu = 1.0 + x;
    let w = p.energy.w(nu);
    // Both branches agree at the root. With V** < 0 the elastic branch
    // cancels as V0 -> 0, so the kinetic branch is the accurate one there.
    let v0 = if s.v_star_star >= 0.0 {
        s.v_star_star + w / p.b1
    } else {
        g_offset(s.eta, x, s.v_star)
    };
    let mu0 = p.mu_inf - (p.b0 + p.b1) * (s.v_star - v0) / p.rho_r;
    let v1 = -v0;
    Ok(TreadmillState {
        eta: s.eta,
        nu,
        r1: p.r0 * nu,
        d: p.r0 * x,
        v0,
        v1,
        mu0,
        mu1: p.mu_inf,
        f0: p.b0 * v0,
        f1: p.b1 * v1,
    })
}

/// Residual of one governing equation together with the magnitude of the
/// terms that cancel in it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.value.abs()
        } else {
            self.value.abs() / self.scale
        }
    }
}

/// Back-substitutes a state into the three treadmilling equations:
/// Fick's law through the shell and the two linear kinetic laws.
pub fn system_residuals(p: &ModelParams, st: &TreadmillState) -> [Residual; 3] {
    let w = p.energy.w(st.nu);
    let rho = p.rho_r;
    let geo = p.mobility * st.nu / st.d;
    let fick = Residual {
        value: rho * st.v0 - geo * (p.mu_inf - st.mu0),
        scale: rho * st.v0.abs() + geo * (p.mu_inf.abs() + st.mu0.abs()),
    };
    let inner = Residual {
        value: p.b0 * st.v0 - (st.mu0 - p.mu_r0) * rho + w,
        scale: p.b0 * st.v0.abs() + (st.mu0.abs() + p.mu_r0.abs()) * rho + w,
    };
    let outer = Residual {
        value: p.b1 * st.v0 + (p.mu_inf - p.mu_r1) * rho - w,
        scale: p.b1 * st.v0.abs() + (p.mu_inf.abs() + p.mu_r1.abs()) * rho + w,
    };
    [fick, inner, outer]
}

/// Driving forces recomputed from chemistry and strain energy, paired with
/// the kinetic values `b0 V0`, `b1 V1` stored in the state.
pub fn driving_force_residuals(p: &ModelParams, st: &TreadmillState) -> [Residual; 2] {
    let w = p.energy.w(st.nu);
    let rho = p.rho_r;
    [
        Residual {
            value: st.f0 - ((st.mu0 - p.mu_r0) * rho - w),
            scale: st.f0.abs() + (st.mu0.abs() + p.mu_r0.abs()) * rho + w,
        },
        Residual {
            value: st.f1 - ((st.mu1 - p.mu_r1) * rho - w),
            scale: st.f1.abs() + (st.mu1.abs() + p.mu_r1.abs()) * rho + w,
        },
    ]
}

/// Interface mass-balance residuals of a state, with `mu1 = mu_inf`.
pub fn interface_residuals(
    p: &ModelParams,
    st: &TreadmillState,
    m_outer: f64,
) -> Result<[Residual; 2]> {
    let t = p.transport(m_outer)?;
    let (a, b) = diffusion::interface_residuals(st.v0, st.v1, st.mu0, st.mu1, p.r0, st.d, &t)?;
    let (sa, sb) =
        diffusion::interface_residual_scales(st.v0, st.v1, st.mu0, st.mu1, p.r0, st.d, &t);
    Ok([
        Residual {
            value: a,
            scale: sa,
        },
        Residual {
            value: b,
            scale: sb,
        },
    ])
}

/// Sign-change interval of the mismatch in `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignChange {
    pub lo: f64,
    pub hi: f64,
}

impl SignChange {
    pub fn contains(&self, lambda: f64) -> bool {
        self.lo <= lambda && lambda <= self.hi
    }
}

/// Smallest offset `lambda - 1` sampled by [`grid_scan_oracle`].
pub const ORACLE_MIN_OFFSET: f64 = 1e-14;

/// Brute-force scan of the mismatch for sign changes.
///
/// The scan samples `lambda = 1` exactly and then `n` points with
/// `lambda - 1` log-spaced on `[1e-14, lambda_max - 1]`. It uses only the
/// branch definitions, never the solver. Exactly one sign change is
/// expected; any other count is reported as [`Error::OracleInconsistent`].
pub fn grid_scan_oracle(p: &ModelParams, lambda_max: f64, n: usize) -> Result<Vec<SignChange>> {
    solvable(p).map_err(Error::NoTreadmillingState)?;
    if !(lambda_max > 1.0 + ORACLE_MIN_OFFSET && lambda_max.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "lambda_max must exceed 1, got {lambda_max}"
        )));
    }
    if n < 100 {
        return Err(Error::InvalidGrid(format!(
            "oracle needs at least 100 points, got {n}"
        )));
    }
    let s = compute_scales(p);
    let (a, b) = (ORACLE_MIN_OFFSET.ln(), (lambda_max - 1.0).ln());
    let offsets = std::iter::once(0.0)
        .chain((0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()));

    let mut changes = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for x in offsets {
        let f = mismatch_offset(p, &s, x);
        if f == 0.0 {
            continue;
        }
        if let Some((x_prev, f_prev)) = last {
            if f.signum() != f_prev.signum() {
                changes.push(SignChange {
                    lo: 1.0 + x_prev,
                    hi: 1.0 + x,
                });
            }
        }
        last = Some((x, f));
    }
    if changes.len() != 1 {
        return Err(Error::OracleInconsistent {
            count: changes.len(),
        });
    }
    Ok(changes)
}

/// Stretch `nu > 1` with `W(nu) = level`, for `level > 0`.
pub fn energy_level_stretch(energy: &dyn ReducedEnergy, level: f64) -> Result<f64> {
    if !(level > 0.0 && level.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "energy level must be positive, got {level}"
        )));
    }
    let inv = 1.0 / level;
    let f = |x: f64| inv * (level - energy.w(1.0 + x));
    let x = root::positive_root(f, 1.0, ROOT_RTOL)?;
    Ok(1.0 + x)
}

/// Limit of the solution as the bead shrinks, `eta -> 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallBeadLimit {
    pub nu_star: f64,
    pub v0_limit: f64,
    pub mu0_limit: f64,
}

pub fn small_bead_asymptote(p: &ModelParams) -> Result<SmallBeadLimit> {
    solvable(p).map_err(Error::NoTreadmillingState)?;
    let s = compute_scales(p);
    let nu_star = energy_level_stretch(p.energy.as_ref(), p.b1 * (s.v_star - s.v_star_star))?;
    Ok(SmallBeadLimit {
        nu_star,
        v0_limit: s.v_star,
        mu0_limit: p.mu_inf,
    })
}

/// Thin-shell estimate of `d/r0` for a small bead, from the quadratic
/// expansion of `W` about 1: `sqrt(2 (mu_inf - mu*) rhoR / W''(1))`.
pub fn small_bead_quadratic(p: &ModelParams) -> Result<f64> {
    solvable(p).map_err(Error::NoTreadmillingState)?;
    let curvature = p.energy.d2w(1.0);
    if !(curvature > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "W''(1) must be positive, got {curvature}"
        )));
    }
    let s = compute_scales(p);
    Ok((2.0 * (p.mu_inf - s.mu_star) * p.rho_r / curvature).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LargeBeadRegime {
    /// `V** >= 0`: the shell thins like `1/eta` and `V0 -> V**`.
    DiffusionLimited,
    /// `V** < 0`: the ratio tends to `nu** > 1` and `V0` decays like `1/eta`.
    FiniteRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LargeBeadEstimate {
    pub regime: LargeBeadRegime,
    /// `None` at exactly `V** = 0`, where the thinning rate is not defined.
    pub d_over_r0: Option<f64>,
    pub v0: f64,
    pub mu0_limit: f64,
    pub nu_star_star: Option<f64>,
}

/// Leading-order behavior for a large bead, evaluated at `eta`.
pub fn large_bead_asymptote(p: &ModelParams, eta: f64) -> Result<LargeBeadEstimate> {
    solvable(p).map_err(Error::NoTreadmillingState)?;
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eta must be positive, got {eta}"
        )));
    }
    let s = compute_scales(p);
    if s.v_star_star >= 0.0 {
        let d_over_r0 = if s.v_star_star > 0.0 {
            Some((s.v_star / s.v_star_star - 1.0) / eta)
        } else {
            None
        };
        Ok(LargeBeadEstimate {
            regime: LargeBeadRegime::DiffusionLimited,
            d_over_r0,
            v0: s.v_star_star,
            mu0_limit: p.mu_inf + (p.b0 + p.b1) * (s.v_star_star - s.v_star) / p.rho_r,
            nu_star_star: None,
        })
    } else {
        let nu = energy_level_stretch(p.energy.as_ref(), -p.b1 * s.v_star_star)?;
        Ok(LargeBeadEstimate {
            regime: LargeBeadRegime::FiniteRatio,
            d_over_r0: Some(nu - 1.0),
            v0: s.v_star / (1.0 - 1.0 / nu) / eta,
            mu0_limit: p.mu_inf + p.mu_r0 - p.mu_r1,
            nu_star_star: Some(nu),
        })
    }
}

/// Diffusion-limited thickness estimate written on the chemical
/// potentials, `(mu_inf - mu*) / (mu_R1 - mu_inf) / eta`. Defined only
/// when `mu_R1 > mu_inf`.
pub fn diffusion_limited_thickness(p: &ModelParams, eta: f64) -> Option<f64> {
    let s = compute_scales(p);
    if p.mu_r1 > p.mu_inf && eta > 0.0 {
        Some((p.mu_inf - s.mu_star) / (p.mu_r1 - p.mu_inf) / eta)
    } else {
        None
    }
}
