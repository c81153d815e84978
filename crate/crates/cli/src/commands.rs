use rayon::prelude::*;
use serde::Serialize;
use treadmill_core::diffusion::{Side, SteadyProfiles};
use treadmill_core::mechanics::{self, ShellGeometry};
use treadmill_core::strain_energy::{self, ValidationReport};
use treadmill_core::treadmill::{self, ModelParams, Scales, SignChange, TreadmillState};
use treadmill_core::Error;

use crate::config::RunConfig;
use crate::output::{self, Format};
use crate::CliError;

fn require_solvable(p: &ModelParams) -> Result<(), CliError> {
    treadmill::solvable(p).map_err(|why| CliError::Core(Error::NoTreadmillingState(why)))
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub params: RunConfig,
    pub scales: Scales,
    pub state: TreadmillState,
}

pub fn solve(cfg: &RunConfig) -> Result<SolveReport, CliError> {
    let p = cfg.model_params()?;
    require_solvable(&p)?;
    let state = treadmill::solve(&p)?;
    Ok(SolveReport {
        params: *cfg,
        scales: p.scales(),
        state,
    })
}

const STATE_HEADER: &[&str] = &[
    "eta",
    "nu",
    "r1",
    "d",
    "V0",
    "V1",
    "mu0",
    "mu1",
    "f0",
    "f1",
    "Vstar",
    "Vstarstar",
    "ellStar",
    "muStar",
];

pub fn render_solve(report: &SolveReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => output::json(report),
        Format::Csv => {
            let (s, c) = (&report.state, &report.scales);
            let row = [
                s.eta,
                s.nu,
                s.r1,
                s.d,
                s.v0,
                s.v1,
                s.mu0,
                s.mu1,
                s.f0,
                s.f1,
                c.v_star,
                c.v_star_star,
                c.ell_star,
                c.mu_star,
            ];
            Ok(output::csv_table(
                STATE_HEADER,
                [row.iter().copied().map(Some).collect()],
            ))
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub eta_min: f64,
    pub eta_max: f64,
    pub points: usize,
    pub linear: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            eta_min: 1e-6,
            eta_max: 1e6,
            points: 121,
            linear: false,
        }
    }
}

impl SweepOptions {
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        let SweepOptions {
            eta_min,
            eta_max,
            points,
            linear,
        } = *self;
        if points < 2 {
            return Err(CliError::Input(format!(
                "--points must be at least 2, got {points}"
            )));
        }
        if !(eta_min > 0.0 && eta_max > eta_min && eta_max.is_finite()) {
            return Err(CliError::Input(format!(
                "eta range must satisfy 0 < eta-min < eta-max, got [{eta_min}, {eta_max}]"
            )));
        }
        let last = (points - 1) as f64;
        let mut grid: Vec<f64> = if linear {
            (0..points)
                .map(|i| eta_min + (eta_max - eta_min) * i as f64 / last)
                .collect()
        } else {
            let (a, b) = (eta_min.ln(), eta_max.ln());
            (0..points)
                .map(|i| (a + (b - a) * i as f64 / last).exp())
                .collect()
        };
        grid[0] = eta_min;
        grid[points - 1] = eta_max;
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct SweepRow {
    pub eta: f64,
    pub nu: f64,
    pub d_over_r0: f64,
    #[serde(rename = "V0")]
    pub v0: f64,
    #[serde(rename = "V0_over_Vstar")]
    pub v0_over_vstar: f64,
    pub mu0: f64,
    pub f0: f64,
    pub f1: f64,
    pub d_small_bead_est: Option<f64>,
    pub d_diffusion_limited_est: Option<f64>,
}

pub const SWEEP_HEADER: &[&str] = &[
    "eta",
    "nu",
    "d_over_r0",
    "V0",
    "V0_over_Vstar",
    "mu0",
    "f0",
    "f1",
    "d_small_bead_est",
    "d_diffusion_limited_est",
];

impl SweepRow {
    fn cells(&self) -> Vec<Option<f64>> {
        vec![
            Some(self.eta),
            Some(self.nu),
            Some(self.d_over_r0),
            Some(self.v0),
            Some(self.v0_over_vstar),
            Some(self.mu0),
            Some(self.f0),
            Some(self.f1),
            self.d_small_bead_est,
            self.d_diffusion_limited_est,
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepTable {
    pub params: RunConfig,
    pub scales: Scales,
    pub rows: Vec<SweepRow>,
}

/// Solves on an `eta` grid by varying the bead radius with everything else
/// held fixed. Rows are computed in parallel and returned in grid order.
pub fn sweep(cfg: &RunConfig, opts: &SweepOptions) -> Result<SweepTable, CliError> {
    let grid = opts.grid()?;
    let p = cfg.model_params()?;
    require_solvable(&p)?;
    let small = treadmill::small_bead_asymptote(&p)?;
    let v_star = p.scales().v_star;

    let rows = grid
        .par_iter()
        .map(|&eta| {
            let st = treadmill::solve_at_eta(&p, eta)?;
            Ok(SweepRow {
                eta,
                nu: st.nu,
                d_over_r0: st.d_over_r0(),
                v0: st.v0,
                v0_over_vstar: st.v0 / v_star,
                mu0: st.mu0,
                f0: st.f0,
                f1: st.f1,
                d_small_bead_est: Some(small.nu_star - 1.0),
                d_diffusion_limited_est: treadmill::diffusion_limited_thickness(&p, eta),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;

    Ok(SweepTable {
        params: *cfg,
        scales: p.scales(),
        rows,
    })
}

pub fn render_sweep(table: &SweepTable, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => output::json(table),
        Format::Csv => Ok(output::csv_table(
            SWEEP_HEADER,
            table.rows.iter().map(SweepRow::cells),
        )),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ProfileOptions {
    pub grid_n: usize,
    /// Mechanics-only geometry `(r1, V0)`; skips the solve.
    pub geometry: Option<(f64, f64)>,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            grid_n: 101,
            geometry: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub r: f64,
    pub lambda_r: f64,
    pub lambda_theta: f64,
    #[serde(rename = "sigma_r_over_G")]
    pub sigma_r_over_g: f64,
    #[serde(rename = "sigma_theta_over_G")]
    pub sigma_theta_over_g: f64,
    #[serde(rename = "v_over_V0")]
    pub v_over_v0: f64,
    pub h: f64,
    pub mu: f64,
}

pub const PROFILE_HEADER: &[&str] = &[
    "r",
    "lambda_r",
    "lambda_theta",
    "sigma_r_over_G",
    "sigma_theta_over_G",
    "v_over_V0",
    "h",
    "mu",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxAtOuter {
    pub below: f64,
    pub above: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileTable {
    pub params: RunConfig,
    pub scales: Scales,
    /// `None` for mechanics-only profiles.
    pub state: Option<TreadmillState>,
    pub r1: f64,
    #[serde(rename = "V0")]
    pub v0: f64,
    pub flux_at_r1: FluxAtOuter,
    pub rows: Vec<ProfileRow>,
}

pub fn profiles(cfg: &RunConfig, opts: &ProfileOptions) -> Result<ProfileTable, CliError> {
    if opts.grid_n < 2 {
        return Err(CliError::Input(format!(
            "--grid-n must be at least 2, got {}",
            opts.grid_n
        )));
    }
    let p = cfg.model_params()?;
    let transport = p.transport(cfg.m_outer)?;

    let (state, diffusion) = match opts.geometry {
        None => {
            require_solvable(&p)?;
            let st = treadmill::solve(&p)?;
            (Some(st), st.profiles(&p, cfg.m_outer)?)
        }
        Some((r1, v0)) => {
            if !(r1 > p.r0 && v0.is_finite()) {
                return Err(CliError::Input(format!(
                    "mechanics-only profile needs r1 > r0 = {} and finite V0, got r1={r1}, V0={v0}",
                    p.r0
                )));
            }
            // Treadmilling-like interior: V1 = -V0 and mu continuous at r1
            // with the reservoir value.
            let rise = p.rho_r * p.r0 * v0 / p.mobility * (1.0 - p.r0 / r1);
            let d = SteadyProfiles::new(transport, p.r0, r1, v0, -v0, p.mu_inf - rise)?;
            (None, d)
        }
    };

    let geom = ShellGeometry::new(p.r0, diffusion.r1)?;
    let v0 = diffusion.v0;
    let g = p.energy.shear_modulus();
    let samples = mechanics::stress_profile(&geom, p.energy.as_ref(), opts.grid_n, Some(v0))?;
    let rows = samples
        .into_iter()
        .map(|s| {
            Ok(ProfileRow {
                r: s.r,
                lambda_r: s.lambda_r,
                lambda_theta: s.lambda_theta,
                sigma_r_over_g: s.sigma_r / g,
                sigma_theta_over_g: s.sigma_theta / g,
                v_over_v0: mechanics::velocity(s.r, 1.0, geom.r0)?,
                h: diffusion.flux(s.r, Side::Below)?,
                mu: if s.r == geom.r1 {
                    diffusion.mu_below_r1()
                } else {
                    diffusion.chemical_potential(s.r)?
                },
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;

    Ok(ProfileTable {
        params: *cfg,
        scales: p.scales(),
        state,
        r1: geom.r1,
        v0,
        flux_at_r1: FluxAtOuter {
            below: diffusion.flux(geom.r1, Side::Below)?,
            above: diffusion.flux(geom.r1, Side::Above)?,
        },
        rows,
    })
}

pub fn render_profiles(table: &ProfileTable, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => output::json(table),
        Format::Csv => Ok(output::csv_table(
            PROFILE_HEADER,
            table.rows.iter().map(|r| {
                vec![
                    Some(r.r),
                    Some(r.lambda_r),
                    Some(r.lambda_theta),
                    Some(r.sigma_r_over_g),
                    Some(r.sigma_theta_over_g),
                    Some(r.v_over_v0),
                    Some(r.h),
                    Some(r.mu),
                ]
            }),
        )),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub energy_points: usize,
    pub oracle_points: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            lambda_min: 0.1,
            lambda_max: 10.0,
            energy_points: 100,
            oracle_points: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub status: OracleStatus,
    pub detail: String,
    pub lambda_max: Option<f64>,
    pub brackets: Vec<SignChange>,
    pub nu: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateReport {
    pub passed: bool,
    pub energy: ValidationReport,
    pub solvable: bool,
    pub unsolvable_reason: Option<String>,
    pub oracle: OracleReport,
}

/// Largest `lambda_max` tried when widening the oracle's scan window.
const ORACLE_LAMBDA_CAP: f64 = 1e9;

/// Widens the scan window by decades until the mismatch is negative at its
/// right end.
pub fn oracle_window(p: &ModelParams) -> Result<f64, Error> {
    let mut lambda_max = 10.0;
    while treadmill::mismatch(p, lambda_max)? >= 0.0 {
        lambda_max *= 10.0;
        if lambda_max > ORACLE_LAMBDA_CAP {
            return Err(Error::NumericFailure(format!(
                "mismatch still non-negative at lambda = {ORACLE_LAMBDA_CAP:e}"
            )));
        }
    }
    Ok(lambda_max)
}

pub fn validate(cfg: &RunConfig, opts: &ValidateOptions) -> Result<ValidateReport, CliError> {
    let p = cfg.model_params()?;
    let energy = strain_energy::validate(
        p.energy.as_ref(),
        opts.lambda_min,
        opts.lambda_max,
        opts.energy_points,
    )?;

    let solvability = treadmill::solvable(&p);
    let oracle = match solvability {
        Err(why) => OracleReport {
            status: OracleStatus::Skipped,
            detail: format!("no treadmilling state: {why}"),
            lambda_max: None,
            brackets: Vec::new(),
            nu: None,
        },
        Ok(()) => run_oracle(&p, opts.oracle_points),
    };

    Ok(ValidateReport {
        passed: energy.passed() && oracle.status != OracleStatus::Fail,
        energy,
        solvable: solvability.is_ok(),
        unsolvable_reason: solvability.err().map(|why| why.to_string()),
        oracle,
    })
}

fn run_oracle(p: &ModelParams, n: usize) -> OracleReport {
    let fail = |detail: String, lambda_max: Option<f64>| OracleReport {
        status: OracleStatus::Fail,
        detail,
        lambda_max,
        brackets: Vec::new(),
        nu: None,
    };
    let lambda_max = match oracle_window(p) {
        Ok(l) => l,
        Err(e) => return fail(e.to_string(), None),
    };
    let brackets = match treadmill::grid_scan_oracle(p, lambda_max, n) {
        Ok(b) => b,
        Err(e) => return fail(e.to_string(), Some(lambda_max)),
    };
    match treadmill::solve(p) {
        Ok(st) if brackets[0].contains(st.nu) => OracleReport {
            status: OracleStatus::Pass,
            detail: "exactly one sign change, containing the solver root".to_string(),
            lambda_max: Some(lambda_max),
            brackets,
            nu: Some(st.nu),
        },
        Ok(st) => OracleReport {
            status: OracleStatus::Fail,
            detail: format!("solver root {} lies outside the oracle bracket", st.nu),
            lambda_max: Some(lambda_max),
            brackets,
            nu: Some(st.nu),
        },
        Err(e) => fail(e.to_string(), Some(lambda_max)),
    }
}

pub fn render_validate(report: &ValidateReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => output::json(report),
        Format::Csv => {
            let mut out = String::from("check,passed,detail\n");
            for c in &report.energy.checks {
                out.push_str(&format!(
                    "{},{},\"{}\"\n",
                    c.name,
                    c.passed,
                    c.detail.replace('"', "'")
                ));
            }
            let oracle_ok = report.oracle.status != OracleStatus::Fail;
            out.push_str(&format!(
                "uniqueness_oracle,{},\"{}\"\n",
                oracle_ok,
                report.oracle.detail.replace('"', "'")
            ));
            Ok(out)
        }
    }
}
