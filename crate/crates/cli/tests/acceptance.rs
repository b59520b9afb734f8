//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use forcebench::coupling::{
    coupled_response, destabilizing_gain_search, mixed_stability_check, passive_load_sample,
    LoadRanges,
};
use forcebench::lti::{bandwidth, step_metrics, step_response};
use forcebench::metrics::{lcs, lrt, passivity_index_of, pii, transparency_residual};
use forcebench::sysid::fit_rational;
use forcebench::{poly, FitConfig, FrequencyGrid, FrequencyResponseData, System, TransferFunction};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn tf(num: &[f64], den: &[f64]) -> TransferFunction {
    TransferFunction::new(num, den).unwrap()
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<String, String> {
    if (got - want).abs() <= tol {
        Ok(format!("{name} = {got:.6}"))
    } else {
        Err(format!("{name} = {got} (want {want} +/- {tol})"))
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let detail = f()?;
    let elapsed = start.elapsed();
    if elapsed > limit {
        return Err(format!("{detail}; took {elapsed:?} (limit {limit:?})"));
    }
    Ok(format!("{detail}; {:.2} s", elapsed.as_secs_f64()))
}

fn analytic_tr() -> Check {
    timed(Duration::from_secs(1), || {
        let g = tf(&[1.0], &[1.0, 1.0]);
        let exact = 0.5f64.sqrt();
        let model = transparency_residual(&g.clone().into())
            .map_err(|e| e.to_string())?
            .value;
        let a = within("TR model", model, exact, 1e-4)?;
        let data = FrequencyResponseData::from_tf(&g, &FrequencyGrid::default()).unwrap();
        let measured = transparency_residual(&data.into())
            .map_err(|e| e.to_string())?
            .value;
        let b = within("TR data", measured, exact, 0.01 * exact)?;
        Ok(format!("{a}, {b}"))
    })
}

fn analytic_lrt() -> Check {
    let grid = FrequencyGrid::default();
    let a = lrt(&tf(&[2.0], &[1.0, 1.0]).into(), &grid).map_err(|e| e.to_string())?;
    let b = lrt(&tf(&[1.0], &[1.0, 0.2, 1.0]).into(), &grid).map_err(|e| e.to_string())?;
    Ok(format!(
        "{}, {}",
        within("LRT 2/(s+1)", a, 0.5, 1e-6)?,
        within("LRT 1/(s^2+0.2s+1)", b, 0.19900, 1e-3)?
    ))
}

fn oracle_equivalence() -> Check {
    timed(Duration::from_secs(60), || {
        let grid = FrequencyGrid::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst: f64 = 0.0;
        for case in 0..50 {
            let zt = common::random_stable(&mut rng, 4);
            let threshold = lrt(&zt.clone().into(), &grid).map_err(|e| e.to_string())?;
            let found = destabilizing_gain_search(&zt, &grid).map_err(|e| e.to_string())?;
            let rel = (found.alpha_star - threshold).abs() / threshold;
            worst = worst.max(rel);
            if rel > 0.02 {
                return Err(format!(
                    "case {case} ({zt}): alpha* {} vs LRT {threshold}",
                    found.alpha_star
                ));
            }
            let loop_poly = |alpha: f64| {
                poly::sub(
                    &poly::mul(zt.den(), found.delta.den()),
                    &poly::scale(&poly::mul(zt.num(), found.delta.num()), alpha),
                )
            };
            let full_degree = zt.den().len() + found.delta.den().len() - 1;
            let stable = |alpha: f64| {
                let p = loop_poly(alpha);
                p.len() == full_degree && p[0] > 0.0 && poly::roots(&p).iter().all(|r| r.re < 0.0)
            };
            if !stable(0.99 * found.alpha_star) || stable(1.01 * found.alpha_star) {
                return Err(format!(
                    "case {case} ({zt}): no stability flip around alpha* {}",
                    found.alpha_star
                ));
            }
        }
        Ok(format!("50 cases, worst relative gap {worst:.2e}"))
    })
}

fn pii_analytic() -> Check {
    let r = pii(
        &tf(&[-1.0], &[1.0, 1.0]).into(),
        0.05,
        &FrequencyGrid::default(),
    )
    .map_err(|e| e.to_string())?;
    if r.omega1 != 0.0 || r.interval_empty {
        return Err(format!(
            "omega1 = {}, empty = {}",
            r.omega1, r.interval_empty
        ));
    }
    Ok(format!(
        "omega1 = 0, {}, {}",
        within("omega2", r.omega2, 6.0849, 1e-3)?,
        within("M", r.m, 0.16217, 1e-3)?
    ))
}

fn passivity_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut on_boundary = 0;
    for i in 0..10_000 {
        let scale = 10f64.powf(rng.random_range(-3.0..3.0));
        let re = match i % 10 {
            0 => 0.0,
            1 => rng.random_range(-1e-9..1e-9),
            _ => scale * rng.random_range(-1.0..1.0),
        };
        let g = Complex64::new(re, scale * rng.random_range(-1.0..1.0));
        let Some(r) = passivity_index_of(g) else {
            continue;
        };
        let slack = 1e-12;
        let consistent = if re >= 0.0 {
            r <= 1.0 + slack
        } else {
            r > 1.0 - slack
        };
        let boundary = (r - 1.0).abs() <= slack;
        on_boundary += usize::from(boundary);
        if !consistent || (!boundary && (r <= 1.0) != (re >= 0.0)) {
            return Err(format!("G = {g}: R = {r}"));
        }
    }
    Ok(format!(
        "10000 samples, {on_boundary} within the boundary slack"
    ))
}

fn gradient_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    while checked < 100 {
        let zb = common::random_stable(&mut rng, 3);
        let zt = common::random_stable(&mut rng, 3);
        let y = common::random_stable(&mut rng, 2);
        let w = common::log_uniform(&mut rng, 0.01, 100.0);
        // T_y varies on the scale |1 − Z_t Y| / |Z_t| in Y.
        let (zt_w, y_w) = (zt.eval(w).unwrap(), y.eval(w).unwrap());
        let delta = 1e-3 * (1.0 - zt_w * y_w).norm() / zt_w.norm();
        let at = |d: f64| {
            coupled_response(&zb, &zt, &(&y + &TransferFunction::gain(d)))
                .and_then(|c| c.t_y.eval(w))
        };
        let (Ok(p1), Ok(m1), Ok(p2), Ok(m2), Ok(t)) = (
            at(delta),
            at(-delta),
            at(0.5 * delta),
            at(-0.5 * delta),
            at(0.0),
        ) else {
            continue;
        };
        let fd = (4.0 * (p2 - m2) / delta - (p1 - m1) / (2.0 * delta)) / 3.0;
        let analytic = t * t * zt.eval(w).unwrap() / zb.eval(w).unwrap();
        let rel = (fd - analytic).norm() / analytic.norm();
        worst = worst.max(rel);
        if rel > 1e-4 {
            return Err(format!(
                "tuple {checked}: finite difference {fd} vs {analytic}"
            ));
        }
        checked += 1;
    }
    Ok(format!("100 tuples, worst relative error {worst:.2e}"))
}

fn mixed_sufficiency() -> Check {
    let grid = FrequencyGrid::default();
    let zb = tf(&[1.0], &[0.05, 1.0]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let loads = passive_load_sample(7, 200, &LoadRanges::default()).map_err(|e| e.to_string())?;
    let mut guaranteed = 0;
    for load in loads {
        let zt = common::random_stable(&mut rng, 3).scale(common::log_uniform(&mut rng, 0.01, 1.0));
        let zt = if rng.random_bool(0.5) {
            zt.scale(-1.0)
        } else {
            zt
        };
        let y = load.admittance();
        let zt_sys: System = zt.clone().into();
        let interval = pii(&zt_sys, 0.05, &grid).map_err(|e| e.to_string())?;
        let verdict = mixed_stability_check(&zt_sys, &y.clone().into(), &interval, &grid)
            .map_err(|e| e.to_string())?;
        if verdict.guaranteed {
            guaranteed += 1;
            if !coupled_response(&zb, &zt, &y)
                .map_err(|e| e.to_string())?
                .stable
            {
                return Err(format!("counterexample: Z_t = {zt}, load {load:?}"));
            }
        }
    }
    Ok(format!(
        "200 pairs, {guaranteed} certified, 0 counterexamples"
    ))
}

fn classical_metrics() -> Check {
    let first = tf(&[1.0], &[1.0, 1.0]);
    let bw = bandwidth(&first, &FrequencyGrid::default()).map_err(|e| e.to_string())?;
    let rise = step_metrics(&step_response(&first, 12.0, None).unwrap(), 1.0)
        .map_err(|e| e.to_string())?;
    let second = tf(&[1.0], &[1.0, 0.2, 1.0]);
    let under = step_metrics(&step_response(&second, 120.0, None).unwrap(), 1.0)
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "{}, {}, {}",
        within("bandwidth", bw.omega, 1.0, 1e-5)?,
        within("rise time", rise.rise_time, 2.1972, 1e-3)?,
        within("overshoot", under.overshoot, 0.7292, 1e-3)?
    ))
}

fn identification_round_trip() -> Check {
    let truth = tf(&[1.0], &[1.0, 2.0, 2.0]);
    let grid = FrequencyGrid::new(1e-2, 1e3, 1001).unwrap();
    let data = FrequencyResponseData::from_tf(&truth, &grid).unwrap();
    let fit = fit_rational(&data, &FitConfig::new(0, 2, 5)).map_err(|e| e.to_string())?;
    let coeff_err = fit
        .tf
        .num()
        .iter()
        .zip(truth.num())
        .chain(fit.tf.den().iter().zip(truth.den()))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if fit.tf.den().len() != 3 || coeff_err > 1e-6 {
        return Err(format!(
            "fitted {} (coefficient error {coeff_err:e})",
            fit.tf
        ));
    }

    let analysis = FrequencyGrid::default();
    let zb = tf(&[100.0], &[1.0, 20.0, 100.0]);
    let zb_data: System = FrequencyResponseData::from_tf(&zb, &analysis)
        .unwrap()
        .into();
    let zb_fit: System = fit_rational(
        &FrequencyResponseData::from_tf(&zb, &analysis).unwrap(),
        &FitConfig::new(0, 2, 5),
    )
    .map_err(|e| e.to_string())?
    .tf
    .into();
    let zt_data: System = FrequencyResponseData::from_tf(&truth, &analysis)
        .unwrap()
        .into();
    let zt_fit: System = fit.tf.into();
    let pairs = [
        (
            "TR",
            transparency_residual(&zt_fit).map(|r| r.value),
            transparency_residual(&zt_data).map(|r| r.value),
        ),
        ("LRT", lrt(&zt_fit, &analysis), lrt(&zt_data, &analysis)),
        (
            "LCS",
            lcs(&zt_fit, &zb_fit, &analysis, None).map(|r| r.value),
            lcs(&zt_data, &zb_data, &analysis, None).map(|r| r.value),
        ),
    ];
    let mut worst: f64 = 0.0;
    for (name, a, b) in pairs {
        let (a, b) = (a.map_err(|e| e.to_string())?, b.map_err(|e| e.to_string())?);
        let rel = (a - b).abs() / a.abs();
        worst = worst.max(rel);
        if rel > 0.01 {
            return Err(format!("{name}: fit {a} vs data {b}"));
        }
    }
    Ok(format!(
        "coefficient error {coeff_err:.1e}, metric gap {worst:.1e}"
    ))
}

fn workspace() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_forcebench"))
        .current_dir(workspace())
        .env_remove("FORCEBENCH_GRID_POINTS")
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn report_format() -> Check {
    let got = run_cli(&[
        "compare",
        "--report",
        "fixtures/table_dob1.json",
        "--report",
        "fixtures/table_dob2.json",
        "--format",
        "markdown",
    ])?;
    let want =
        std::fs::read(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/table_i_ii.md"))
            .map_err(|e| e.to_string())?;
    if got == want {
        Ok(format!("{} bytes identical to golden file", got.len()))
    } else {
        Err(format!(
            "rendered table differs:\n{}",
            String::from_utf8_lossy(&got)
        ))
    }
}

fn determinism() -> Check {
    let pair = [
        "compare",
        "--controller",
        "DOB-1=fixtures/dob1_zb.json,fixtures/dob1_zt.json",
        "--controller",
        "DOB-2=fixtures/dob2_zb.json,fixtures/dob2_zt.json",
    ];
    let mut sizes = Vec::new();
    for format in ["json", "markdown", "csv"] {
        let args: Vec<&str> = pair.iter().copied().chain(["--format", format]).collect();
        let (a, b) = (run_cli(&args)?, run_cli(&args)?);
        if a != b {
            return Err(format!("{format} output differs between runs"));
        }
        sizes.push(format!("{format} {} bytes", a.len()));
    }
    Ok(format!("byte-identical reruns ({})", sizes.join(", ")))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 11] = [
        ("analytic TR", analytic_tr),
        ("analytic LRT", analytic_lrt),
        ("oracle equivalence", oracle_equivalence),
        ("PII analytic case", pii_analytic),
        ("passivity equivalence", passivity_equivalence),
        ("load sensitivity gradient", gradient_check),
        ("mixed-check sufficiency", mixed_sufficiency),
        ("classical Z_b metrics", classical_metrics),
        ("identification round trip", identification_round_trip),
        ("report format golden file", report_format),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
