//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p treadmill-cli --test acceptance`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::Command;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treadmill_cli::commands::{self, SweepOptions};
use treadmill_cli::config::RunConfig;
use treadmill_core::diffusion::Side;
use treadmill_core::mechanics::{self, ShellGeometry};
use treadmill_core::strain_energy::{MooneyRivlin, NeoHookean, ReducedEnergy};
use treadmill_core::treadmill::{self, ModelParams, TreadmillState};

type Outcome = Result<String, String>;

// ---------------------------------------------------------------------------
// Independent references, written from the model definitions only.

/// Speed scales computed directly from the raw parameters.
fn v_star(p: &ModelParams) -> f64 {
    (p.mu_r1 - p.mu_r0) * p.rho_r / (p.b0 + p.b1)
}

fn v_star_star(p: &ModelParams) -> f64 {
    (p.mu_r1 - p.mu_inf) * p.rho_r / p.b1
}

/// Bisection for `W(nu) = level` on `nu > 1`.
fn bisect_level(energy: &dyn ReducedEnergy, level: f64) -> f64 {
    assert!(level > 0.0);
    let (mut lo, mut hi) = (1.0_f64, 2.0_f64);
    while energy.w(hi) < level {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if energy.w(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn nh(g: f64) -> Arc<dyn ReducedEnergy> {
    Arc::new(NeoHookean::new(g).unwrap())
}

#[allow(clippy::too_many_arguments)]
fn model(
    energy: Arc<dyn ReducedEnergy>,
    b0: f64,
    b1: f64,
    mu_r0: f64,
    mu_r1: f64,
    mu_inf: f64,
    rho: f64,
    m: f64,
) -> ModelParams {
    ModelParams::new(energy, b0, b1, mu_r0, mu_r1, mu_inf, rho, m, 1.0).unwrap()
}

/// Fixed cases covering both signs of `V**` and two materials.
fn reference_cases() -> Vec<(&'static str, ModelParams)> {
    vec![
        (
            "nh V**>0",
            model(nh(1.0), 1.0, 1.0, 0.0, 1.0, 0.9, 1.0, 1.0),
        ),
        (
            "nh V**<0",
            model(nh(1.0), 1.0, 1.0, 0.0, 1.0, 1.5, 1.0, 1.0),
        ),
        (
            "nh stiff V**>0",
            model(nh(7.5), 0.3, 2.0, -1.0, 2.0, 1.2, 0.6, 3.0),
        ),
        (
            "nh soft V**<0",
            model(nh(0.2), 4.0, 0.5, 0.5, 1.5, 2.5, 2.0, 0.4),
        ),
        (
            "mooney-rivlin V**>0",
            model(
                Arc::new(MooneyRivlin::new(0.4, 0.1).unwrap()),
                1.0,
                2.0,
                0.0,
                2.0,
                1.5,
                1.0,
                1.0,
            ),
        ),
        (
            "mooney-rivlin V**<0",
            model(
                Arc::new(MooneyRivlin::new(0.4, 0.1).unwrap()),
                2.0,
                1.0,
                0.0,
                2.0,
                2.5,
                1.0,
                1.0,
            ),
        ),
    ]
}

/// Randomized parameter sets, roughly half of which are solvable.
fn random_cases(n: usize, seed: u64) -> Vec<ModelParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let logu = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| 10f64.powf(rng.gen_range(lo..hi));
    (0..n)
        .map(|_| {
            let energy: Arc<dyn ReducedEnergy> = if rng.gen_bool(0.7) {
                nh(logu(&mut rng, -1.0, 1.0))
            } else {
                Arc::new(
                    MooneyRivlin::new(logu(&mut rng, -1.0, 0.5), rng.gen_range(0.0..1.0)).unwrap(),
                )
            };
            let b0 = logu(&mut rng, -1.0, 1.0);
            let b1 = logu(&mut rng, -1.0, 1.0);
            let mu_r0 = rng.gen_range(-2.0..2.0);
            let mu_r1 = mu_r0 + rng.gen_range(-1.0..3.0);
            let mu_star = (b0 * mu_r1 + b1 * mu_r0) / (b0 + b1);
            let mu_inf = mu_star + rng.gen_range(-1.5..3.0);
            let rho = logu(&mut rng, -0.7, 0.7);
            let m = logu(&mut rng, -1.0, 1.0);
            let eta = logu(&mut rng, -6.0, 6.0);
            model(energy, b0, b1, mu_r0, mu_r1, mu_inf, rho, m).with_eta(eta)
        })
        .collect()
}

fn config(mu_inf: f64) -> RunConfig {
    RunConfig {
        mu_inf,
        ..RunConfig::default()
    }
}

fn sweep_121(cfg: &RunConfig) -> commands::SweepTable {
    let opts = SweepOptions {
        eta_min: 1e-6,
        eta_max: 1e6,
        points: 121,
        linear: false,
    };
    commands::sweep(cfg, &opts).unwrap()
}

// ---------------------------------------------------------------------------
// Criteria

fn criterion_1(cases: &[ModelParams]) -> Outcome {
    let mut solvable_count = 0;
    for (i, p) in cases.iter().enumerate() {
        let claimed = treadmill::solvable(p).is_ok();
        let expected = v_star(p) > 0.0 && v_star(p) > v_star_star(p);
        if claimed != expected {
            return Err(format!(
                "case {i}: solvable()={claimed}, inequalities say {expected}"
            ));
        }
        let found = matches!(treadmill::attempt_root(p), Some((nu, v0)) if nu > 1.0 && v0 > 0.0);
        if claimed != found {
            return Err(format!(
                "case {i}: solvable()={claimed} but bracketing found={found}"
            ));
        }
        if !claimed {
            continue;
        }
        solvable_count += 1;
        let st = treadmill::solve(p).map_err(|e| format!("case {i}: {e}"))?;
        let mut lambda_max = 10.0;
        while treadmill::mismatch(p, lambda_max).unwrap() >= 0.0 {
            lambda_max *= 10.0;
        }
        let brackets = treadmill::grid_scan_oracle(p, lambda_max, 10_000)
            .map_err(|e| format!("case {i}: {e}"))?;
        if brackets.len() != 1 || !brackets[0].contains(st.nu) {
            return Err(format!("case {i}: oracle {brackets:?} vs nu={}", st.nu));
        }
    }
    if solvable_count == 0 || solvable_count == cases.len() {
        return Err(format!(
            "sample does not span both outcomes ({solvable_count} solvable)"
        ));
    }
    Ok(format!(
        "{} sets, {solvable_count} solvable, oracle agrees on all",
        cases.len()
    ))
}

fn criterion_2(states: &[(ModelParams, TreadmillState)]) -> Outcome {
    for (p, st) in states {
        let (vs, vss) = (v_star(p), v_star_star(p));
        if !(vss < st.v0 && st.v0 < vs) {
            return Err(format!(
                "V**={vss:e} V0={:e} V*={vs:e} at eta={:e}",
                st.v0, st.eta
            ));
        }
    }
    Ok(format!("{} solved states", states.len()))
}

fn criterion_3() -> Outcome {
    let mut worst = (0.0_f64, 0.0_f64);
    for (name, p) in reference_cases() {
        let st = treadmill::solve_at_eta(&p, 1e-8).map_err(|e| format!("{name}: {e}"))?;
        let nu_star = bisect_level(p.energy.as_ref(), p.b1 * (v_star(&p) - v_star_star(&p)));
        let ev = rel(st.v0, v_star(&p));
        let en = rel(st.nu, nu_star);
        if ev > 1e-6 || en > 1e-6 {
            return Err(format!("{name}: V0 rel {ev:e}, nu rel {en:e}"));
        }
        worst = (worst.0.max(ev), worst.1.max(en));
    }
    Ok(format!(
        "worst V0 rel {:.1e}, nu rel {:.1e}",
        worst.0, worst.1
    ))
}

fn check_large_positive(
    p: &ModelParams,
    st: &TreadmillState,
    eta: f64,
) -> Result<(f64, f64), String> {
    let vs = v_star(p);
    let vss = v_star_star(p);
    let ev = rel(st.v0, vss);
    let ed = rel(eta * (st.nu - 1.0), vs / vss - 1.0);
    if ev > 1e-4 || ed > 1e-3 {
        return Err(format!("V0 rel {ev:e}, eta(nu-1) rel {ed:e}"));
    }
    Ok((ev, ed))
}

fn check_large_negative(p: &ModelParams, st: &TreadmillState, eta: f64) -> Result<f64, String> {
    let nu2 = bisect_level(p.energy.as_ref(), -p.b1 * v_star_star(p));
    let e = rel(eta * st.v0, v_star(p) / (1.0 - 1.0 / nu2));
    if e > 1e-3 {
        return Err(format!("eta V0 rel {e:e}"));
    }
    Ok(e)
}

fn criterion_4() -> Outcome {
    let mut worst = (0.0_f64, 0.0_f64);
    let mut n = 0;
    for (name, p) in reference_cases()
        .into_iter()
        .filter(|(_, p)| v_star_star(p) > 0.0)
    {
        let st = treadmill::solve_at_eta(&p, 1e8).map_err(|e| format!("{name}: {e}"))?;
        let (a, b) = check_large_positive(&p, &st, 1e8).map_err(|e| format!("{name}: {e}"))?;
        worst = (worst.0.max(a), worst.1.max(b));
        n += 1;
    }
    Ok(format!(
        "{n} cases, worst V0 rel {:.1e}, eta(nu-1) rel {:.1e}",
        worst.0, worst.1
    ))
}

fn criterion_5() -> Outcome {
    let mut worst = 0.0_f64;
    let mut n = 0;
    for (name, p) in reference_cases()
        .into_iter()
        .filter(|(_, p)| v_star_star(p) < 0.0)
    {
        let st = treadmill::solve_at_eta(&p, 1e8).map_err(|e| format!("{name}: {e}"))?;
        worst = worst.max(check_large_negative(&p, &st, 1e8).map_err(|e| format!("{name}: {e}"))?);
        n += 1;
    }
    Ok(format!("{n} cases, worst eta V0 rel {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0_f64;
    let mut n = 0;
    for &g in &[0.5, 1.0, 4.0] {
        for &drive in &[1e-6, 1e-4, 1e-3, 3e-3, 1e-2, 2e-2, 3e-2] {
            // mu* = 0.5 with b0 = b1 and mu_R in {0, 1}
            let p = model(nh(g), 1.0, 1.0, 0.0, 1.0, 0.5 + drive, 1.0, 1.0);
            let exact =
                bisect_level(p.energy.as_ref(), p.b1 * (v_star(&p) - v_star_star(&p))) - 1.0;
            if exact > 0.05 {
                continue;
            }
            let quad = treadmill::small_bead_quadratic(&p).map_err(|e| e.to_string())?;
            let e = rel(quad, exact);
            if e > 0.05 {
                return Err(format!(
                    "G={g} drive={drive}: estimate {quad} vs {exact} ({e:.3})"
                ));
            }
            worst = worst.max(e);
            n += 1;
        }
    }
    if n < 10 {
        return Err(format!("only {n} cases had nu*-1 <= 0.05"));
    }
    Ok(format!("{n} cases, worst rel {worst:.3}"))
}

fn criterion_7() -> Outcome {
    let mut worst_ratio = (f64::INFINITY, 0.0_f64);
    for &g in &[0.2, 1.0, 7.5] {
        let energy = NeoHookean::new(g).unwrap();
        for &nu in &[1.01, 1.3, 2.0, 5.0] {
            let geom = ShellGeometry::new(1.0, nu).unwrap();
            let s1 = mechanics::radial_stress(geom.r1, &geom, &energy).unwrap();
            if s1 != 0.0 {
                return Err(format!("sigma_r(r1) = {s1:e} for G={g}, nu={nu}"));
            }
            let s0 = mechanics::radial_stress(geom.r0, &geom, &energy).unwrap();
            if (s0 + energy.w(nu)).abs() > 1e-12 * g {
                return Err(format!("sigma_r(r0) + W(nu) = {:e}", s0 + energy.w(nu)));
            }
            let coarse = mechanics::equilibrium_residual(&geom, &energy, 101).unwrap();
            let fine = mechanics::equilibrium_residual(&geom, &energy, 201).unwrap();
            let ratio = coarse / fine;
            if !(3.5..=4.5).contains(&ratio) {
                return Err(format!("convergence ratio {ratio} for G={g}, nu={nu}"));
            }
            worst_ratio = (worst_ratio.0.min(ratio), worst_ratio.1.max(ratio));
        }
    }
    Ok(format!(
        "ratios in [{:.3}, {:.3}]",
        worst_ratio.0, worst_ratio.1
    ))
}

fn criterion_8(states: &[(ModelParams, TreadmillState)]) -> Outcome {
    let mut worst = 0.0_f64;
    for (p, st) in states {
        let mut all = treadmill::system_residuals(p, st).to_vec();
        all.extend(treadmill::driving_force_residuals(p, st));
        all.extend(treadmill::interface_residuals(p, st, p.mobility).map_err(|e| e.to_string())?);
        for r in all {
            let e = r.relative();
            if !(e <= 1e-10) {
                return Err(format!("residual {r:?} (rel {e:e}) at eta={:e}", st.eta));
            }
            worst = worst.max(e);
        }
        if st.mu1 != p.mu_inf || st.v1 != -st.v0 {
            return Err(format!("outer front state mu1={} v1={}", st.mu1, st.v1));
        }
        let prof = st.profiles(p, p.mobility).map_err(|e| e.to_string())?;
        for k in 0..5 {
            let r = st.r1 * (1.0 + k as f64 * 2.5);
            let h = prof.flux(r, Side::Above).map_err(|e| e.to_string())?;
            if h != 0.0 {
                return Err(format!("outside flux {h:e} at r={r}"));
            }
        }
    }
    Ok(format!("{} states, worst rel {worst:.1e}", states.len()))
}

fn criterion_9() -> Outcome {
    let mut notes = Vec::new();
    for mu_inf in [0.9, 1.5] {
        let cfg = config(mu_inf);
        let p = cfg.model_params().unwrap();
        let table = sweep_121(&cfg);
        let rows = &table.rows;
        if rows.len() != 121 {
            return Err(format!("{} rows", rows.len()));
        }
        for w in rows.windows(2) {
            if !(w[1].d_over_r0 < w[0].d_over_r0) {
                return Err(format!("d/r0 not decreasing at eta={:e}", w[1].eta));
            }
        }
        let first = &rows[0];
        let nu_star = bisect_level(p.energy.as_ref(), p.b1 * (v_star(&p) - v_star_star(&p)));
        let (ev, en) = (rel(first.v0, v_star(&p)), rel(first.nu, nu_star));
        if ev > 1e-6 || en > 1e-6 {
            return Err(format!(
                "mu_inf={mu_inf} first row: V0 rel {ev:e}, nu rel {en:e}"
            ));
        }
        let last = rows.last().unwrap();
        let st = treadmill::solve_at_eta(&p, last.eta).unwrap();
        if st.nu != last.nu || st.v0 != last.v0 {
            return Err("last row differs from a direct solve".into());
        }
        if v_star_star(&p) > 0.0 {
            check_large_positive(&p, &st, last.eta)?;
        } else {
            check_large_negative(&p, &st, last.eta)?;
        }
        notes.push(format!("V**={:+}", v_star_star(&p)));
    }
    Ok(format!(
        "121 rows strictly decreasing for {}",
        notes.join(", ")
    ))
}

fn criterion_10() -> Outcome {
    let cfg = config(0.9);
    let a = commands::render_sweep(&sweep_121(&cfg), treadmill_cli::output::Format::Csv).unwrap();
    let b = commands::render_sweep(&sweep_121(&cfg), treadmill_cli::output::Format::Csv).unwrap();
    if a != b {
        return Err("in-process sweeps differ".into());
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg_path = dir.path().join("run.cfg");
    std::fs::write(&cfg_path, "energy.kind = neo-hookean\nchem.mu_inf = 0.9\n").unwrap();
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_treadmill"))
            .args(["sweep", "--config"])
            .arg(&cfg_path)
            .args(["--eta-min", "1e-6", "--eta-max", "1e6", "--points", "121"])
            .output()
            .expect("run treadmill binary");
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let (x, y) = (run(), run());
    if x != y {
        return Err("binary sweeps differ".into());
    }
    if x != a.as_bytes() {
        return Err("binary output differs from in-process rendering".into());
    }
    Ok(format!("{} bytes identical across 4 runs", x.len()))
}

fn main() {
    let cases = random_cases(500, 0x7EAD_0001);

    let mut states: Vec<(ModelParams, TreadmillState)> = cases
        .iter()
        .filter(|p| treadmill::solvable(p).is_ok())
        .map(|p| (p.clone(), treadmill::solve(p).unwrap()))
        .collect();
    for (_, p) in reference_cases() {
        for k in -8..=8 {
            let eta = 10f64.powi(k);
            states.push((p.with_eta(eta), treadmill::solve_at_eta(&p, eta).unwrap()));
        }
    }

    let results: Vec<(&str, Outcome)> = vec![
        (
            "solvability matches bracketing; oracle finds one root",
            criterion_1(&cases),
        ),
        ("strict bounds V** < V0 < V*", criterion_2(&states)),
        ("small-bead limit at eta = 1e-8", criterion_3()),
        ("large-bead limit at eta = 1e8, V** > 0", criterion_4()),
        ("large-bead limit at eta = 1e8, V** < 0", criterion_5()),
        ("quadratic thickness estimate within 5%", criterion_6()),
        (
            "mechanics closed forms and O(dr^2) equilibrium",
            criterion_7(),
        ),
        (
            "residuals <= 1e-10 and zero outside flux",
            criterion_8(&states),
        ),
        (
            "121-point sweep strictly decreasing with matching ends",
            criterion_9(),
        ),
        ("byte-identical sweep CSV", criterion_10()),
    ];

    let mut failed = 0;
    for (i, (title, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2}: {title} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {title} ({detail})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
