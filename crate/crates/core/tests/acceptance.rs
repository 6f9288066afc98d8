//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line before
//! asserting, so `cargo test --test acceptance -- --nocapture` gives a
//! summary.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use opomech::correlations::{gaussian_discord, mutual_information, OptimizerSettings};
use opomech::entropy::{
    entropy_production, entropy_production_offdiagonal, entropy_production_trace,
    irreversible_drift, near_divergence,
};
use opomech::gaussian::{build_diffusion_for, build_drift};
use opomech::langevin::{estimate_steady_covariance, SimulationSettings};
use opomech::lyapunov::{lyapunov_residual, solve_steady_covariance};
use opomech::point::{analyze, Quantities};
use opomech::sweep::presets::configs;
use opomech::sweep::{emit, run_sweep, Preset, PresetOptions, SweepResult};
use opomech::{CovarianceMatrix, EffectiveParams};

fn report(id: &str, ok: bool, detail: String) {
    println!(
        "criterion {id}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
}

fn pi_s(p: &EffectiveParams) -> Option<f64> {
    analyze(p, Quantities::default(), &OptimizerSettings::default())
        .unwrap()
        .entropy
        .map(|e| e.pi_s)
}

fn rel_diff(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

/// Random parameters over the studied ranges; `g_zero` forces `G = 0`.
fn draw(rng: &mut ChaCha8Rng, g_zero: bool) -> EffectiveParams {
    EffectiveParams {
        delta_a: rng.random_range(-3.0..3.0),
        omega_b: 1.0,
        kappa: rng.random_range(0.05..2.5),
        gamma: rng.random_range(1e-3..0.2),
        coupling_g: if g_zero {
            0.0
        } else {
            rng.random_range(0.0..0.4)
        },
        chi_mag: rng.random_range(0.0..1.2),
        phi: rng.random_range(0.0..2.0 * PI),
        n_b: rng.random_range(0.0..200.0),
        n_a: 0.0,
    }
}

/// Stable draws with their steady covariance.
fn stable_draws(
    seed: u64,
    count: usize,
    g_zero_every: usize,
) -> Vec<(EffectiveParams, CovarianceMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = draw(&mut rng, g_zero_every > 0 && out.len() % g_zero_every == 0);
        let a = build_drift(&p);
        if !a.is_stable() {
            continue;
        }
        let d = build_diffusion_for(&p).unwrap();
        let v = solve_steady_covariance(&a, &d).unwrap();
        out.push((p, v));
    }
    out
}

#[test]
fn c01_equilibrium_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let p = EffectiveParams {
            coupling_g: 0.0,
            chi_mag: 0.0,
            ..draw(&mut rng, true)
        };
        let a = build_drift(&p);
        let d = build_diffusion_for(&p).unwrap();
        let v = solve_steady_covariance(&a, &d).unwrap();
        let pi = entropy_production(&v, &p).pi_s;
        worst = worst.max(pi.abs() / (p.kappa + p.gamma));
    }
    let ok = worst <= 1e-10;
    report("1", ok, format!("max |pi_s|/(kappa+gamma) = {worst:.2e}"));
    assert!(ok);
}

#[test]
fn c02_three_forms_agree() {
    let mut worst = 0.0_f64;
    let mut count = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    while count < 1000 {
        let p = draw(&mut rng, false);
        let a = build_drift(&p);
        // The off-diagonal form is undefined on kappa^2 = chi^2 cos^2(phi).
        if !a.is_stable() || near_divergence(&p) {
            continue;
        }
        count += 1;
        let d = build_diffusion_for(&p).unwrap();
        let v = solve_steady_covariance(&a, &d).unwrap();
        let modes = entropy_production(&v, &p).pi_s;
        let trace = entropy_production_trace(&v, &irreversible_drift(&p), &d).unwrap();
        let offdiag = entropy_production_offdiagonal(&v, &p).unwrap();
        worst = worst
            .max(rel_diff(modes, trace))
            .max(rel_diff(modes, offdiag))
            .max(rel_diff(trace, offdiag));
    }
    let ok = worst <= 1e-8;
    report(
        "2",
        ok,
        format!("max pairwise relative difference = {worst:.2e} over 1000 points"),
    );
    assert!(ok);
}

#[test]
fn c03_lyapunov_certification() {
    let mut worst_res = 0.0_f64;
    let mut worst_rel = 0.0_f64;
    for (p, v) in stable_draws(303, 1000, 10) {
        let a = build_drift(&p).to_dynamic();
        let d = build_diffusion_for(&p).unwrap().to_dynamic();
        let res = lyapunov_residual(&a, &v.to_dynamic(), &d) / d.norm();
        worst_res = worst_res.max(res);

        let (k, g, w, gg) = (p.kappa, p.gamma, p.omega_b, p.coupling_g);
        let (c, s) = (p.chi_cos(), p.chi_sin());
        let th = 2.0 * p.n_b + 1.0;
        let expected = [
            k / (2.0 * (k - c)) + (p.delta_a + s) / (k - c) * v.v(1, 2),
            k / (2.0 * (k + c)) + gg / (k + c) * v.v(2, 3) - (p.delta_a - s) / (k + c) * v.v(1, 2),
            th / 2.0 + w / g * v.v(3, 4),
            th / 2.0 + gg / g * v.v(1, 4) - w / g * v.v(3, 4),
        ];
        for (i, e) in expected.iter().enumerate() {
            worst_rel = worst_rel.max(rel_diff(v.v(i + 1, i + 1), *e));
        }
    }
    let ok = worst_res <= 1e-10 && worst_rel <= 1e-8;
    report(
        "3",
        ok,
        format!(
            "max residual/||D|| = {worst_res:.2e}, max diagonal-relation error = {worst_rel:.2e}"
        ),
    );
    assert!(ok);
}

#[test]
fn c04_oracle_equivalence() {
    let fig1 = |delta_a, chi, n_b| EffectiveParams {
        delta_a,
        kappa: 0.5,
        gamma: 0.01,
        coupling_g: 0.1,
        chi_mag: chi,
        phi: 0.8 * PI,
        n_b,
        ..EffectiveParams::default()
    };
    let fig2 = |delta_a, chi, phi, n_b| EffectiveParams {
        kappa: 0.51,
        phi,
        ..fig1(delta_a, chi, n_b)
    };
    let points = [
        fig1(1.0, 0.5, 10.0),
        fig1(-1.0, 0.3, 100.0),
        fig1(2.0, 0.0, 10.0),
        fig2(1.0, 0.5, 0.7 * PI, 100.0),
        fig2(1.0, 0.5, 1.7 * PI, 10.0),
    ];
    let mut worst = 0.0_f64;
    for (i, p) in points.iter().enumerate() {
        let a = build_drift(p);
        let d = build_diffusion_for(p).unwrap();
        let v = solve_steady_covariance(&a, &d).unwrap();
        let settings = SimulationSettings {
            rng_seed: 4000 + i as u64,
            ..SimulationSettings::default()
        };
        assert_eq!(
            (settings.dt, settings.n_traj, settings.t_sample),
            (1e-3, 32, 1e4)
        );
        let est = estimate_steady_covariance(&a.to_dynamic(), &d.to_dynamic(), &settings).unwrap();
        let z = est.max_z_score(&v.to_dynamic());
        println!("  point {i}: max |V_mc - V| / stderr = {z:.2}");
        worst = worst.max(z);
    }
    let ok = worst <= 5.0;
    report("4", ok, format!("max z over 5 points = {worst:.2}"));
    assert!(ok);
}

fn fig1_result() -> SweepResult {
    run_sweep(&configs(Preset::Fig1, &PresetOptions::default()).remove(0)).unwrap()
}

/// `(delta_a, mu_a, mu_b)` for one `(chi, n_b)` curve of the fig1 sweep.
fn fig1_curve(r: &SweepResult, chi: f64, n_b: f64) -> Vec<(f64, Option<(f64, f64)>)> {
    r.records
        .iter()
        .filter(|rec| rec.coordinates[1] == chi && rec.coordinates[2] == n_b)
        .map(|rec| {
            (
                rec.coordinates[0],
                rec.report.entropy.map(|e| (e.mu_a, e.mu_b)),
            )
        })
        .collect()
}

#[test]
fn c05a_mu_a_grows_with_chi() {
    let r = fig1_result();
    let c0 = fig1_curve(&r, 0.0, 10.0);
    let c3 = fig1_curve(&r, 0.3, 10.0);
    let c5 = fig1_curve(&r, 0.5, 10.0);
    let mut compared = 0;
    let mut violations = Vec::new();
    for ((x, a), ((_, b), (_, c))) in c0.iter().zip(c3.iter().zip(&c5)) {
        // Comparison only where all three curves have a steady state.
        if let (Some(a), Some(b), Some(c)) = (a, b, c) {
            compared += 1;
            if !(c.0 > b.0 && b.0 > a.0) {
                violations.push(*x);
            }
        }
    }
    let ok = violations.is_empty() && compared > 0;
    report(
        "5a",
        ok,
        format!(
            "{compared} stable detunings compared, {} violations {:?}",
            violations.len(),
            violations
        ),
    );
    assert!(ok);
}

#[test]
fn c05b_mu_b_changes_sign() {
    let r = fig1_result();
    let mut details = Vec::new();
    let mut ok = true;
    for n_b in [10.0, 100.0] {
        let vals: Vec<f64> = fig1_curve(&r, 0.0, n_b)
            .iter()
            .filter_map(|(_, e)| e.map(|e| e.1))
            .collect();
        let pos = vals.iter().any(|&m| m > 0.0);
        let neg = vals.iter().any(|&m| m < 0.0);
        ok &= pos && neg;
        let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        details.push(format!("n_b = {n_b}: mu_b in [{min:.3e}, {max:.3e}]"));
    }
    report("5b", ok, details.join("; "));
    assert!(ok);
}

#[test]
fn c05c_mu_a_even_in_detuning() {
    let r = fig1_result();
    let curve = fig1_curve(&r, 0.0, 10.0);
    let n = curve.len();
    let mut worst = (0.0_f64, 0.0, 0.0, 0.0);
    for i in 0..n / 2 {
        let (x, a) = curve[i];
        let (y, b) = curve[n - 1 - i];
        assert!((x + y).abs() < 1e-12);
        if let (Some(a), Some(b)) = (a, b) {
            let d = rel_diff(a.0, b.0);
            if d > worst.0 {
                worst = (d, y, b.0, a.0);
            }
        }
    }
    let ok = worst.0 <= 0.05;
    report(
        "5c",
        ok,
        format!(
            "max relative asymmetry {:.1}% at |delta_a| = {:.2}: mu_a(+) = {:.4}, mu_a(-) = {:.4}",
            worst.0 * 100.0,
            worst.1,
            worst.2,
            worst.3
        ),
    );
    assert!(ok);
}

#[test]
fn c06_phase_dip() {
    let base = EffectiveParams {
        delta_a: 1.0,
        kappa: 0.51,
        gamma: 0.01,
        coupling_g: 0.1,
        n_b: 100.0,
        ..EffectiveParams::default()
    };
    let reference = pi_s(&EffectiveParams {
        chi_mag: 0.0,
        ..base
    })
    .unwrap();
    let n = 2000;
    let below: Vec<f64> = (0..n)
        .map(|i| 2.0 * PI * i as f64 / n as f64)
        .filter(|&phi| {
            pi_s(&EffectiveParams {
                chi_mag: 0.5,
                phi,
                ..base
            })
            .is_some_and(|p| p < reference)
        })
        .collect();
    let ok = !below.is_empty();
    let range = below
        .first()
        .zip(below.last())
        .map_or("none".into(), |(a, b)| {
            format!("phi/pi in [{:.3}, {:.3}]", a / PI, b / PI)
        });
    report(
        "6",
        ok,
        format!("pi_s(chi=0.5) < pi_s(chi=0) = {reference:.5} for {range}"),
    );
    assert!(ok);
}

#[test]
fn c07_divergence_boundary() {
    let chi = 0.5;
    let base = EffectiveParams {
        delta_a: 0.0,
        chi_mag: chi,
        phi: 0.0,
        coupling_g: 0.1,
        gamma: 0.01,
        n_b: 10.0,
        ..EffectiveParams::default()
    };
    let at = |kappa: f64| EffectiveParams { kappa, ..base };
    let reference = pi_s(&at(2.0 * chi)).unwrap();
    let mut largest = 0.0_f64;
    let mut exceeded_at = None;
    for k in 1..=16 {
        let kappa = chi + 10f64.powf(-(k as f64) / 2.0);
        match pi_s(&at(kappa)) {
            Some(p) => {
                largest = largest.max(p / reference);
                if p > 1e3 * reference && exceeded_at.is_none() {
                    exceeded_at = Some(kappa);
                }
            }
            None => break,
        }
    }
    let beyond_unstable = (1..=8).all(|k| !build_drift(&at(chi - 10f64.powi(-k))).is_stable())
        && !build_drift(&at(0.5 * chi)).is_stable();
    let ok = exceeded_at.is_some() && beyond_unstable;
    report(
        "7",
        ok,
        format!(
            "pi_s/pi_s(kappa=2chi) reaches {largest:.3e} while stable (first > 1e3 at kappa - chi = {:?}); unstable below: {beyond_unstable}",
            exceeded_at.map(|k| k - chi)
        ),
    );
    assert!(ok);
}

#[test]
fn c08_decoupling_limit() {
    let base = EffectiveParams {
        kappa: 0.5,
        gamma: 0.01,
        coupling_g: 0.1,
        chi_mag: 0.0,
        n_b: 10.0,
        ..EffectiveParams::default()
    };
    let max = (0..=600)
        .filter_map(|i| {
            pi_s(&EffectiveParams {
                delta_a: -3.0 + 0.01 * i as f64,
                ..base
            })
        })
        .fold(0.0_f64, f64::max);
    let far = pi_s(&EffectiveParams {
        delta_a: 50.0,
        ..base
    })
    .unwrap();
    let ok = far < 1e-3 * max;
    report(
        "8",
        ok,
        format!("pi_s(50) = {far:.3e}, max on [-3, 3] = {max:.4}"),
    );
    assert!(ok);
}

#[test]
fn c09_correlation_bounds() {
    let opt = OptimizerSettings::default();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut min_d = f64::INFINITY;
    let mut zero_block = 0;
    let mut worst_zero = 0.0_f64;
    for (p, v) in stable_draws(909, 1000, 5) {
        let i = mutual_information(&v).unwrap();
        let d = gaussian_discord(&v, &opt).unwrap();
        min_d = min_d.min(d.discord);
        worst_excess = worst_excess.max(d.discord - i);
        if v.c().iter().all(|&x| x == 0.0) {
            zero_block += 1;
            worst_zero = worst_zero.max(i.abs()).max(d.discord.abs());
        } else {
            // Only uncoupled draws are expected to give a vanishing block.
            assert!(p.coupling_g > 0.0, "C block not zero at G = 0: {}", v.c());
        }
    }
    let ok = min_d >= 0.0 && worst_excess <= 1e-9 && zero_block > 0 && worst_zero <= 1e-10;
    report(
        "9",
        ok,
        format!(
            "min D = {min_d:.2e}, max D - I = {worst_excess:.2e}, {zero_block} zero-C draws with max |I|, |D| = {worst_zero:.2e}"
        ),
    );
    assert!(ok);
}

#[test]
fn c10_correlation_profiles() {
    let cfg = configs(Preset::Fig3, &PresetOptions::default()).remove(0);
    let r = run_sweep(&cfg).unwrap();
    type Row = (f64, Option<(f64, f64, f64)>);
    let curve = |chi: f64| -> Vec<Row> {
        r.records
            .iter()
            .filter(|rec| rec.coordinates[1] == chi)
            .map(|rec| {
                let q = rec
                    .report
                    .entropy
                    .zip(rec.report.mutual_info)
                    .zip(rec.report.discord.as_ref());
                (
                    rec.coordinates[0],
                    q.map(|((e, i), d)| (e.pi_s, i, d.discord)),
                )
            })
            .collect()
    };

    let c0 = curve(0.0);
    let peak = |neg: bool, f: &dyn Fn(&(f64, f64, f64)) -> f64| -> f64 {
        c0.iter()
            .filter(|(x, _)| if neg { *x < 0.0 } else { *x > 0.0 })
            .filter_map(|(x, q)| q.as_ref().map(|q| (*x, f(q))))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
            .0
    };
    let mut peaks_ok = true;
    let mut details = Vec::new();
    for neg in [true, false] {
        let xp = peak(neg, &|q| q.0);
        let xi = peak(neg, &|q| q.1);
        peaks_ok &= (xp - xi).abs() <= 0.2
            && (xp.abs() - 1.0).abs() <= 0.2
            && (xi.abs() - 1.0).abs() <= 0.2;
        details.push(format!("peaks pi_s {xp:.2}, I {xi:.2}"));
    }

    // Longest run of consecutive steps on delta_a < 0 with pi_s rising and I, D falling.
    let c5 = curve(0.5);
    let mut best = (0, 0.0, 0.0);
    let mut run = (0, 0.0);
    for w in c5.windows(2) {
        let ((x0, q0), (x1, q1)) = (&w[0], &w[1]);
        let trend = match (q0, q1) {
            (Some(a), Some(b)) if *x1 < 0.0 => b.0 > a.0 && b.1 < a.1 && b.2 < a.2,
            _ => false,
        };
        if trend {
            if run.0 == 0 {
                run.1 = *x0;
            }
            run.0 += 1;
            if run.0 > best.0 {
                best = (run.0, run.1, *x1);
            }
        } else {
            run.0 = 0;
        }
    }
    // A subinterval: at least a few consecutive grid steps.
    let trend_ok = best.0 >= 3;
    details.push(format!(
        "chi = 0.5: pi_s up, I and D down on [{:.2}, {:.2}] ({} steps)",
        best.1, best.2, best.0
    ));
    let ok = peaks_ok && trend_ok;
    report("10", ok, details.join("; "));
    assert!(ok);
}

#[test]
fn c11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut same = true;
    let mut files = 0;
    for preset in Preset::ALL {
        for run in ["a", "b"] {
            let opts = PresetOptions {
                out_dir: Some(dir.path().join(run)),
                ..Default::default()
            };
            for cfg in configs(preset, &opts) {
                emit(&run_sweep(&cfg).unwrap()).unwrap();
            }
        }
        for cfg in configs(preset, &PresetOptions::default()) {
            let name = cfg.output_path.file_name().unwrap().to_owned();
            let a = std::fs::read(dir.path().join("a").join(&name)).unwrap();
            let b = std::fs::read(dir.path().join("b").join(&name)).unwrap();
            same &= a == b;
            files += 1;
        }
    }
    report(
        "11",
        same,
        format!("{files} preset CSV files compared byte for byte"),
    );
    assert!(same);
}
