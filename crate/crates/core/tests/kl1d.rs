use zoquad_core::kl1d::{initial_gap, kl_search_1d, KlProblem, NoisyFunction1d};
use zoquad_core::NoiseModel;

fn quartic(x: f64) -> f64 {
    (x - 0.3).powi(4)
}

fn problem() -> KlProblem {
    KlProblem::new(4.0, 1.08, 0.75).unwrap()
}

/// Calls and the certified gap `g0 / 2^T` after the final round.
fn run_at(eps: f64) -> (f64, f64) {
    let p = problem();
    let g0 = initial_gap(p.c1, p.c2, p.alpha).unwrap();
    let mut oracle = NoisyFunction1d::new(quartic, NoiseModel::Zero, 0).unwrap();
    let out = kl_search_1d(&p, &mut oracle, eps, 0.1).unwrap();
    (out.calls as f64, g0 / 2f64.powi(out.iterations as i32))
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>()
}

#[test]
fn sample_count_follows_rate_in_certified_gap() {
    // calls ≈ C · g^{−(2α+5)/3} up to log factors, g the final certified gap
    let exponent = (2.0 * 0.75 + 5.0) / 3.0;
    let runs: Vec<(f64, f64)> = (0..6).map(|k| run_at(0.05 / 2f64.powi(k))).collect();
    let scaled: Vec<f64> = runs.iter().map(|&(c, g)| c * g.powf(exponent)).collect();
    let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = scaled.iter().cloned().fold(0.0, f64::max);
    assert!(hi / lo <= 10.0, "{scaled:?}");

    let xs: Vec<f64> = runs.iter().map(|r| r.1.ln()).collect();
    let ys: Vec<f64> = runs.iter().map(|r| r.0.ln()).collect();
    let s = slope(&xs, &ys);
    assert!((-s - exponent).abs() <= 0.5, "slope {s}");
}

#[test]
fn round_count_squares_the_target() {
    // ⌈2 log2(g0/ε)⌉ halvings leave a certified gap of at most ε²/g0
    let p = problem();
    let g0 = initial_gap(p.c1, p.c2, p.alpha).unwrap();
    for k in 0..6 {
        let eps = 0.05 / 2f64.powi(k);
        let (_, g) = run_at(eps);
        assert!(g <= eps * eps / g0 * (1.0 + 1e-12));
        assert!(g > eps * eps / g0 / 4.0);
    }
}

#[test]
fn gaussian_runs_mostly_succeed() {
    let mut ok = 0;
    for seed in 0..20 {
        let mut oracle = NoisyFunction1d::new(quartic, NoiseModel::Gaussian, seed).unwrap();
        let out = kl_search_1d(&problem(), &mut oracle, 0.05, 0.1).unwrap();
        if quartic(out.x) <= 0.05 {
            ok += 1;
        }
    }
    assert!(ok >= 18);
}
