//! Reduced strain energies for isochoric equi-biaxial stretch.
//!
//! Under the deformation `(lambda^-2, lambda, lambda)` every isotropic
//! incompressible material collapses to a scalar function `W(lambda)`.
//! The solver only ever needs `W` and its first two derivatives, so that
//! is the whole interface.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Reduced strain energy `W(lambda)` per unit volume with analytic
/// derivatives.
///
/// Implementors may assume `lambda > 0` in `w`, `dw` and `d2w`; the
/// `eval_*` methods check it. Nothing is validated at construction, so a
/// pathological energy can be built on purpose and fed to [`validate`].
pub trait ReducedEnergy: Send + Sync + fmt::Debug {
    fn w(&self, lambda: f64) -> f64;
    fn dw(&self, lambda: f64) -> f64;
    fn d2w(&self, lambda: f64) -> f64;

    /// Human readable tag used in reports.
    fn name(&self) -> &str {
        "custom"
    }

    /// Small-strain shear modulus, `W''(1) / 12`.
    ///
    /// For the neo-Hookean energy this is exactly `G`.
    fn shear_modulus(&self) -> f64 {
        self.d2w(1.0) / 12.0
    }

    fn eval_w(&self, lambda: f64) -> Result<f64> {
        check_stretch(lambda)?;
        Ok(self.w(lambda))
    }

    fn eval_dw(&self, lambda: f64) -> Result<f64> {
        check_stretch(lambda)?;
        Ok(self.dw(lambda))
    }

    fn eval_d2w(&self, lambda: f64) -> Result<f64> {
        check_stretch(lambda)?;
        Ok(self.d2w(lambda))
    }
}

fn check_stretch(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveStretch(lambda))
    }
}

/// Neo-Hookean solid, `W(lambda) = (G/2)(lambda^-4 + 2 lambda^2 - 3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeoHookean {
    pub shear_modulus: f64,
}

impl NeoHookean {
    pub fn new(shear_modulus: f64) -> Result<Self> {
        if !(shear_modulus > 0.0 && shear_modulus.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "neo-Hookean shear modulus must be positive, got {shear_modulus}"
            )));
        }
        Ok(NeoHookean { shear_modulus })
    }
}

impl ReducedEnergy for NeoHookean {
    // Factored as (G/2)(l^2-1)^2 (2l^2+1) / l^4 so that W(1+x) keeps full
    // relative precision when x is tiny.
    fn w(&self, lambda: f64) -> f64 {
        let l2 = lambda * lambda;
        let s = (lambda - 1.0) * (lambda + 1.0);
        0.5 * self.shear_modulus * s * s * (2.0 * l2 + 1.0) / (l2 * l2)
    }

    fn dw(&self, lambda: f64) -> f64 {
        2.0 * self.shear_modulus * (lambda - lambda.powi(-5))
    }

    fn d2w(&self, lambda: f64) -> f64 {
        2.0 * self.shear_modulus * (1.0 + 5.0 * lambda.powi(-6))
    }

    fn name(&self) -> &str {
        "neo-hookean"
    }

    fn shear_modulus(&self) -> f64 {
        self.shear_modulus
    }
}

/// Mooney-Rivlin solid `C1 (I1 - 3) + C2 (I2 - 3)` restricted to
/// equi-biaxial stretch. `C2 = 0` recovers neo-Hookean with `G = 2 C1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MooneyRivlin {
    pub c1: f64,
    pub c2: f64,
}

impl MooneyRivlin {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        let ok = c1.is_finite() && c2.is_finite() && c1 >= 0.0 && c2 >= 0.0 && c1 + c2 > 0.0;
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "Mooney-Rivlin constants must be non-negative with C1 + C2 > 0, got C1={c1}, C2={c2}"
            )));
        }
        Ok(MooneyRivlin { c1, c2 })
    }
}

impl ReducedEnergy for MooneyRivlin {
    fn w(&self, lambda: f64) -> f64 {
        // I1 - 3 = (l^2-1)^2 (2l^2+1) / l^4,  I2 - 3 = (l^2-1)^2 (l^2+2) / l^2
        let l2 = lambda * lambda;
        let s = (lambda - 1.0) * (lambda + 1.0);
        let s2 = s * s;
        self.c1 * s2 * (2.0 * l2 + 1.0) / (l2 * l2) + self.c2 * s2 * (l2 + 2.0) / l2
    }

    fn dw(&self, lambda: f64) -> f64 {
        self.c1 * (4.0 * lambda - 4.0 * lambda.powi(-5))
            + self.c2 * (4.0 * lambda.powi(3) - 4.0 * lambda.powi(-3))
    }

    fn d2w(&self, lambda: f64) -> f64 {
        self.c1 * (4.0 + 20.0 * lambda.powi(-6))
            + self.c2 * (12.0 * lambda * lambda + 12.0 * lambda.powi(-4))
    }

    fn name(&self) -> &str {
        "mooney-rivlin"
    }
}

/// Energy assembled from three user supplied functions.
pub struct CustomEnergy<F, G, H> {
    name: String,
    w: F,
    dw: G,
    d2w: H,
}

impl<F, G, H> CustomEnergy<F, G, H>
where
    F: Fn(f64) -> f64 + Send + Sync,
    G: Fn(f64) -> f64 + Send + Sync,
    H: Fn(f64) -> f64 + Send + Sync,
{
    pub fn new(name: impl Into<String>, w: F, dw: G, d2w: H) -> Self {
        CustomEnergy {
            name: name.into(),
            w,
            dw,
            d2w,
        }
    }
}

impl<F, G, H> fmt::Debug for CustomEnergy<F, G, H> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomEnergy")
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl<F, G, H> ReducedEnergy for CustomEnergy<F, G, H>
where
    F: Fn(f64) -> f64 + Send + Sync,
    G: Fn(f64) -> f64 + Send + Sync,
    H: Fn(f64) -> f64 + Send + Sync,
{
    fn w(&self, lambda: f64) -> f64 {
        (self.w)(lambda)
    }

    fn dw(&self, lambda: f64) -> f64 {
        (self.dw)(lambda)
    }

    fn d2w(&self, lambda: f64) -> f64 {
        (self.d2w)(lambda)
    }

    fn name(&self) -> &str {
        &self.name
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub energy: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub const CHECK_REFERENCE_STATE: &str = "reference_state";
pub const CHECK_SLOPE_SIGN: &str = "slope_sign";
pub const CHECK_POSITIVITY: &str = "positivity";
pub const CHECK_GROWTH: &str = "growth";
pub const CHECK_DW_CONSISTENCY: &str = "dw_consistency";
pub const CHECK_D2W_CONSISTENCY: &str = "d2w_consistency";

const FD_REL_STEP: f64 = 1e-5;
const FD_REL_TOL: f64 = 1e-6;

/// Checks the structural assumptions on `W` over an `n`-point log grid on
/// `[lambda_min, lambda_max]`.
///
/// Unboundedness cannot be tested directly; the growth check asks for `W`
/// to increase monotonically on `[1, lambda_max]` and to climb at least one
/// shear modulus above `W(1)`.
pub fn validate(
    energy: &dyn ReducedEnergy,
    lambda_min: f64,
    lambda_max: f64,
    n: usize,
) -> Result<ValidationReport> {
    if !(lambda_min > 0.0 && lambda_min < 1.0 && lambda_max > 1.0 && lambda_max.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "need 0 < lambda_min < 1 < lambda_max, got [{lambda_min}, {lambda_max}]"
        )));
    }
    if n < 3 {
        return Err(Error::InvalidGrid(format!(
            "need at least 3 points, got {n}"
        )));
    }

    let grid = log_grid(lambda_min, lambda_max, n);
    let scale = energy_scale(energy, &grid);
    let mut checks = Vec::with_capacity(6);

    let w1 = energy.w(1.0);
    let dw1 = energy.dw(1.0);
    checks.push(Check {
        name: CHECK_REFERENCE_STATE,
        passed: w1.abs() <= 1e-12 * scale && dw1.abs() <= 1e-10 * scale,
        detail: format!("W(1)={w1:e}, W'(1)={dw1:e}, scale={scale:e}"),
    });

    let off_one = || grid.iter().copied().filter(|l| (l - 1.0).abs() > 1e-12);

    let bad_sign: Vec<f64> = off_one()
        .filter(|&l| !(energy.dw(l) * (l - 1.0) > 0.0))
        .collect();
    checks.push(Check {
        name: CHECK_SLOPE_SIGN,
        passed: bad_sign.is_empty(),
        detail: describe_failures("W'(l)(l-1) <= 0", &bad_sign),
    });

    let non_positive: Vec<f64> = off_one().filter(|&l| !(energy.w(l) > 0.0)).collect();
    checks.push(Check {
        name: CHECK_POSITIVITY,
        passed: non_positive.is_empty(),
        detail: describe_failures("W(l) <= 0", &non_positive),
    });

    let mut upper: Vec<f64> = vec![1.0];
    upper.extend(grid.iter().copied().filter(|&l| l > 1.0));
    let monotone = upper.windows(2).all(|p| energy.w(p[1]) > energy.w(p[0]));
    let w_max = energy.w(lambda_max);
    checks.push(Check {
        name: CHECK_GROWTH,
        passed: monotone && w_max > w1 + scale,
        detail: format!("monotone on [1, {lambda_max}]: {monotone}; W(lambda_max)={w_max:e}"),
    });

    let (dw_err, dw_at) = worst_fd_mismatch(&grid, scale, |l| energy.w(l), |l| energy.dw(l));
    checks.push(Check {
        name: CHECK_DW_CONSISTENCY,
        passed: dw_err <= FD_REL_TOL,
        detail: format!("worst relative mismatch {dw_err:e} at lambda={dw_at}"),
    });

    let (d2w_err, d2w_at) = worst_fd_mismatch(&grid, scale, |l| energy.dw(l), |l| energy.d2w(l));
    checks.push(Check {
        name: CHECK_D2W_CONSISTENCY,
        passed: d2w_err <= FD_REL_TOL,
        detail: format!("worst relative mismatch {d2w_err:e} at lambda={d2w_at}"),
    });

    Ok(ValidationReport {
        energy: energy.name().to_string(),
        checks,
    })
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

fn energy_scale(energy: &dyn ReducedEnergy, grid: &[f64]) -> f64 {
    let g = energy.shear_modulus();
    if g.is_finite() && g > 0.0 {
        return g;
    }
    // Degenerate curvature at 1: fall back on the magnitude of W itself.
    let m = grid.iter().map(|&l| energy.w(l).abs()).fold(0.0, f64::max);
    if m > 0.0 && m.is_finite() {
        m
    } else {
        1.0
    }
}

fn worst_fd_mismatch(
    grid: &[f64],
    scale: f64,
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
) -> (f64, f64) {
    let mut worst = (0.0, grid[0]);
    for &l in grid {
        let h = FD_REL_STEP * l;
        let fd = (f(l + h) - f(l - h)) / (2.0 * h);
        let exact = df(l);
        let err = (fd - exact).abs() / (exact.abs() + scale);
        if !(err <= worst.0) {
            worst = (err, l);
        }
    }
    worst
}

fn describe_failures(what: &str, at: &[f64]) -> String {
    match at {
        [] => "ok".to_string(),
        [first, ..] => format!(
            "{what} at {} grid points, first at lambda={first}",
            at.len()
        ),
    }
}
