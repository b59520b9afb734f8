mod common;

use forcebench::coupling::{
    coupled_response, destabilizing_gain_search, mixed_stability_check, passive_load_sample,
    small_gain_check, LoadRanges,
};
use forcebench::metrics::{lrt, pii};
use forcebench::{poly, FrequencyGrid, System, TransferFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn sensitivity_to_load() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 100 {
        let zb = common::random_stable(&mut rng, 3);
        let zt = common::random_stable(&mut rng, 3);
        let y = common::random_stable(&mut rng, 2);
        let w = common::log_uniform(&mut rng, 0.01, 100.0);
        // T_y varies on the scale |1 − Z_t Y| / |Z_t| in Y.
        let (zt_w, y_w) = (zt.eval(w).unwrap(), y.eval(w).unwrap());
        let delta = 1e-3 * (1.0 - zt_w * y_w).norm() / zt_w.norm();

        let nominal = coupled_response(&zb, &zt, &y);
        let at = |d: f64| {
            coupled_response(&zb, &zt, &(&y + &TransferFunction::gain(d)))
                .and_then(|c| c.t_y.eval(w))
        };
        let (Ok(nominal), Ok(p1), Ok(m1), Ok(p2), Ok(m2)) = (
            nominal,
            at(delta),
            at(-delta),
            at(0.5 * delta),
            at(-0.5 * delta),
        ) else {
            continue;
        };
        let Ok(t) = nominal.t_y.eval(w) else {
            continue;
        };
        // Central differences with one Richardson step.
        let coarse = (p1 - m1) / (2.0 * delta);
        let fine = (p2 - m2) / delta;
        let fd = (4.0 * fine - coarse) / 3.0;
        let analytic = t * t * zt.eval(w).unwrap() / zb.eval(w).unwrap();
        assert!(
            (fd - analytic).norm() <= 1e-4 * analytic.norm(),
            "{fd} vs {analytic}"
        );
        checked += 1;
    }
}

#[test]
fn destabilizing_gain_matches_threshold() {
    let grid = FrequencyGrid::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let zt = common::random_stable(&mut rng, 4);
        let threshold = lrt(&zt.clone().into(), &grid).unwrap();
        let found = destabilizing_gain_search(&zt, &grid).unwrap();
        assert!(
            (found.alpha_star - threshold).abs() <= 0.02 * threshold,
            "{zt}: {} vs {threshold}",
            found.alpha_star
        );

        let loop_poly = |alpha: f64| {
            poly::sub(
                &poly::mul(zt.den(), found.delta.den()),
                &poly::scale(&poly::mul(zt.num(), found.delta.num()), alpha),
            )
        };
        let rightmost = |alpha: f64| {
            poly::roots(&loop_poly(alpha))
                .iter()
                .map(|r| r.re)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let below = loop_poly(0.99 * found.alpha_star);
        let above = loop_poly(1.01 * found.alpha_star);
        let degree_kept =
            |p: &[f64]| p.len() == zt.den().len() + found.delta.den().len() - 1 && p[0] > 0.0;
        assert!(degree_kept(&below) && rightmost(0.99 * found.alpha_star) < 0.0);
        assert!(!degree_kept(&above) || rightmost(1.01 * found.alpha_star) > 0.0);
    }
}

#[test]
fn mixed_check_is_sufficient() {
    let grid = FrequencyGrid::default();
    let zb = TransferFunction::new(&[1.0], &[0.05, 1.0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let loads = passive_load_sample(13, 200, &LoadRanges::default()).unwrap();
    let mut guaranteed = 0;
    for load in loads {
        // Mostly small transparency errors so that the check is informative.
        let zt = common::random_stable(&mut rng, 3).scale(common::log_uniform(&mut rng, 0.01, 1.0));
        let zt = if rng.random_bool(0.5) {
            zt.scale(-1.0)
        } else {
            zt
        };
        let y = load.admittance();
        let zt_sys: System = zt.clone().into();
        let p = pii(&zt_sys, 0.05, &grid).unwrap();
        let verdict = mixed_stability_check(&zt_sys, &y.clone().into(), &p, &grid).unwrap();
        if verdict.guaranteed {
            guaranteed += 1;
            let coupled = coupled_response(&zb, &zt, &y).unwrap();
            assert!(coupled.stable, "{zt} with {load:?}: {}", verdict.reason);
        }
    }
    assert!(guaranteed > 50, "only {guaranteed} certified pairs");
}

#[test]
fn small_gain_implies_stability() {
    let grid = FrequencyGrid::default();
    let zb = TransferFunction::gain(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for load in passive_load_sample(14, 100, &LoadRanges::default()).unwrap() {
        let zt = common::random_stable(&mut rng, 3);
        let y = load.admittance();
        let check = small_gain_check(&zt.clone().into(), &y.clone().into(), &grid).unwrap();
        if check.holds {
            assert!(coupled_response(&zb, &zt, &y).unwrap().stable);
        }
    }
}
