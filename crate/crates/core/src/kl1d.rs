//! Gradient-free 1D search for smooth functions with a Kurdyka–Łojasiewicz
//! growth condition `|f'(x)| ≥ C1 (f(x) − f*)^α`, `α ∈ (1/2, 1]`.
//!
//! The search keeps a centre `x_c` and a gap bound `g ≥ f(x_c) − f*`, and
//! halves `g` once per outer iteration. Each iteration runs a global phase
//! that shrinks an interval `[x_c − L, x_c + L]` known to contain a global
//! minimum (or a point already good enough), followed by a local grid
//! search over that interval.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimators::sample_count_pac;
use crate::math;
use crate::noise::{NoiseModel, NoiseSampler};

/// Noisy evaluations of a 1D function.
pub trait NoisyOracle1d {
    /// One observation `f(x) + w`.
    fn sample(&mut self, x: f64) -> f64;

    /// Total observations drawn so far.
    fn calls(&self) -> u64;

    /// Mean of `n` fresh observations at `x`.
    fn sample_mean(&mut self, x: f64, n: u64) -> f64 {
        let mut sum = 0.0;
        for _ in 0..n {
            sum += self.sample(x);
        }
        sum / n as f64
    }
}

/// A closure observed through additive [`NoiseModel`] noise.
pub struct NoisyFunction1d<F> {
    f: F,
    noise: NoiseSampler,
    rng: ChaCha8Rng,
    calls: u64,
}

impl<F: FnMut(f64) -> f64> NoisyFunction1d<F> {
    /// `f` must be deterministic: batched means evaluate it once per batch.
    pub fn new(f: F, noise: NoiseModel, seed: u64) -> Result<Self> {
        Ok(Self {
            f,
            noise: noise.sampler()?,
            rng: ChaCha8Rng::seed_from_u64(seed),
            calls: 0,
        })
    }
}

impl<F: FnMut(f64) -> f64> NoisyOracle1d for NoisyFunction1d<F> {
    fn sample(&mut self, x: f64) -> f64 {
        self.calls += 1;
        (self.f)(x) + self.noise.sample(&mut self.rng)
    }

    fn calls(&self) -> u64 {
        self.calls
    }

    fn sample_mean(&mut self, x: f64, n: u64) -> f64 {
        if self.noise.is_zero() {
            // every observation is identical
            self.calls += n;
            return (self.f)(x);
        }
        let value = (self.f)(x);
        let mut sum = 0.0;
        for _ in 0..n {
            sum += value + self.noise.sample(&mut self.rng);
        }
        self.calls += n;
        sum / n as f64
    }
}

/// Constants certified by the caller: KL constant `c1`, smoothness constant
/// `c2` and exponent `alpha`, plus an optional interval every query is
/// clamped into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlProblem {
    pub c1: f64,
    pub c2: f64,
    pub alpha: f64,
    pub domain: Option<(f64, f64)>,
}

impl KlProblem {
    pub fn new(c1: f64, c2: f64, alpha: f64) -> Result<Self> {
        if !(c1 > 0.0 && c1.is_finite()) || !(c2 > 0.0 && c2.is_finite()) {
            return Err(Error::InvalidArgument("KL constants c1 and c2 must be positive"));
        }
        if !(alpha > 0.5 && alpha <= 1.0) {
            return Err(Error::InvalidArgument("KL exponent must lie in (1/2, 1]"));
        }
        Ok(Self {
            c1,
            c2,
            alpha,
            domain: None,
        })
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::InvalidArgument("domain must satisfy lo <= hi"));
        }
        self.domain = Some((lo, hi));
        Ok(self)
    }

    fn clamp(&self, x: f64) -> f64 {
        match self.domain {
            Some((lo, hi)) => x.max(lo).min(hi),
            None => x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchState {
    pub center: f64,
    /// Bound on `f(center) − f*`.
    pub gap: f64,
    /// Half-width `L` of the interval around the centre.
    pub half_width: f64,
    pub iteration: u32,
}

/// One interval-halving step of the global phase, recorded after the
/// halving: the new interval `[center − half_width, center + half_width]`
/// satisfies `f(center ± half_width) ≥ f(center) − slope · half_width`
/// whenever all samples were accurate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalStep {
    pub center: f64,
    pub half_width: f64,
    /// `C0 + Δ_C` evaluated at the new half-width.
    pub slope: f64,
    /// Oracle calls spent in this step.
    pub calls: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalPhase {
    pub state: SearchState,
    pub steps: Vec<GlobalStep>,
}

/// Record of a full [`kl_search_1d`] run.
#[derive(Debug, Clone, PartialEq)]
pub struct KlSearchOutcome {
    pub x: f64,
    pub calls: u64,
    pub iterations: u32,
    /// Failure probability granted to each outer iteration.
    pub delta_schedule: Vec<f64>,
    /// Centres at the end of every phase (global, local, global, …),
    /// starting with the initial centre.
    pub centers: Vec<f64>,
    pub global_steps: Vec<GlobalStep>,
}

/// `(4 C2 / C1²)^{1/(2α−1)}`, a bound on `f(0) − f*` over the sublevel set
/// of the starting point.
pub fn initial_gap(c1: f64, c2: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.5) {
        return Err(Error::InvalidArgument("KL exponent must exceed 1/2"));
    }
    KlProblem::new(c1, c2, alpha)?;
    Ok(math::powf(4.0 * c2 / (c1 * c1), 1.0 / (2.0 * alpha - 1.0)))
}

fn sample<O: NoisyOracle1d + ?Sized>(oracle: &mut O, x: f64, eps: f64, delta: f64) -> Result<f64> {
    let n = sample_count_pac(eps, delta)?;
    Ok(oracle.sample_mean(x, n))
}

/// Index of the smallest score, preferring `incumbent` and then the lowest
/// index on ties.
fn argmin_prefer(scores: &[f64], incumbent: usize) -> usize {
    let mut best = incumbent;
    for (i, &s) in scores.iter().enumerate() {
        if s < scores[best] {
            best = i;
        }
    }
    best
}

fn check_state(state: &SearchState, delta_t: f64) -> Result<()> {
    if !(state.gap > 0.0) || !state.gap.is_finite() {
        return Err(Error::InvalidArgument("gap bound must be positive"));
    }
    if !(delta_t > 0.0 && delta_t < 1.0) {
        return Err(Error::InvalidArgument("failure probability must lie in (0, 1)"));
    }
    Ok(())
}

/// Global phase: halve the interval while `L > L_th`, moving the centre to
/// the best of `{x_c − L/2, x_c, x_c + L/2}` under the penalized score
/// `(C0 + Δ_C)|y − x_c| + f̂(y)`.
pub fn global_phase<O: NoisyOracle1d + ?Sized>(
    problem: &KlProblem,
    oracle: &mut O,
    state: SearchState,
    delta_t: f64,
) -> Result<GlobalPhase> {
    check_state(&state, delta_t)?;
    let g = state.gap;
    let c0 = 0.5 * problem.c1 * (1.0 - problem.alpha) * math::powf(g / 2.0, problem.alpha);
    if !(c0 > 0.0) {
        return Err(Error::Degenerate("C0 vanishes (alpha = 1 or underflow)"));
    }
    let threshold = math::cbrt(math::sqrt(g * g * g * g * g / problem.c2) / (c0 * c0));
    let relax = |l: f64| c0 * math::powf(threshold / (2.0 * l), 2.0 / 3.0);

    let mut center = state.center;
    let mut l = g / c0;
    let mut steps = Vec::new();
    while l > threshold {
        let before = oracle.calls();
        let delta_c = relax(l);
        let eps_l = delta_c * l / 8.0;
        let delta_l = delta_t * threshold / (24.0 * l);
        let candidates = [
            problem.clamp(center - l / 2.0),
            center,
            problem.clamp(center + l / 2.0),
        ];
        let mut scores = [0.0; 3];
        for (score, &y) in scores.iter_mut().zip(&candidates) {
            *score = (c0 + delta_c) * (y - center).abs() + sample(oracle, y, eps_l, delta_l)?;
        }
        center = candidates[argmin_prefer(&scores, 1)];
        l /= 2.0;
        steps.push(GlobalStep {
            center,
            half_width: l,
            slope: c0 + relax(l),
            calls: oracle.calls() - before,
        });
    }
    Ok(GlobalPhase {
        state: SearchState {
            center,
            half_width: l,
            ..state
        },
        steps,
    })
}

/// Local phase: grid search with `N + 1` points over `[x_c − L, x_c + L]`,
/// `N = 2⌈L / √(g/C2)⌉`, handicapping the incumbent by `2ε_s`. Halves `g`.
pub fn local_phase<O: NoisyOracle1d + ?Sized>(
    problem: &KlProblem,
    oracle: &mut O,
    state: SearchState,
    delta_t: f64,
) -> Result<SearchState> {
    check_state(&state, delta_t)?;
    if !(state.half_width > 0.0) || !state.half_width.is_finite() {
        return Err(Error::InvalidArgument("interval half-width must be positive"));
    }
    let g = state.gap;
    let l = state.half_width;
    let half = math::ceil(l / math::sqrt(g / problem.c2));
    if !(half < (u32::MAX / 4) as f64) {
        return Err(Error::InvalidArgument("local grid too large"));
    }
    let n = 2 * half as usize;
    let eps_s = g / 16.0;
    let delta_s = delta_t / (2.0 * (n + 1) as f64);

    let mid = n / 2;
    let mut points = Vec::with_capacity(n + 1);
    let mut scores = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let y = if i == mid {
            state.center
        } else {
            problem.clamp(state.center - l + 2.0 * l * i as f64 / n as f64)
        };
        let mut score = sample(oracle, y, eps_s, delta_s)?;
        if i == mid {
            score -= 2.0 * eps_s;
        }
        points.push(y);
        scores.push(score);
    }
    Ok(SearchState {
        center: points[argmin_prefer(&scores, mid)],
        gap: g / 2.0,
        iteration: state.iteration + 1,
        ..state
    })
}

/// Runs `T = ⌈2 log2(g0/ε)⌉` iterations of global then local phase from
/// `x_c = 0`. Iteration `t` (1-based) gets failure probability
/// `δ / 2^{T−t+1}`, so the schedule sums to `δ (1 − 2^{−T}) < δ`.
///
/// Returns `x = 0` without querying when `ε` already exceeds the initial
/// gap bound.
pub fn kl_search_1d<O: NoisyOracle1d + ?Sized>(
    problem: &KlProblem,
    oracle: &mut O,
    eps: f64,
    delta: f64,
) -> Result<KlSearchOutcome> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("target accuracy must be positive"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument("failure probability must lie in (0, 1)"));
    }
    let g0 = initial_gap(problem.c1, problem.c2, problem.alpha)?;
    let start_calls = oracle.calls();
    let mut outcome = KlSearchOutcome {
        x: 0.0,
        calls: 0,
        iterations: 0,
        delta_schedule: Vec::new(),
        centers: alloc::vec![0.0],
        global_steps: Vec::new(),
    };
    if eps >= g0 {
        return Ok(outcome);
    }
    let rounds = math::ceil(2.0 * math::log2(g0 / eps)) as u32;
    let mut state = SearchState {
        center: 0.0,
        gap: g0,
        half_width: 0.0,
        iteration: 0,
    };
    for t in 1..=rounds {
        let delta_t = delta / math::powf(2.0, f64::from(rounds - t + 1));
        outcome.delta_schedule.push(delta_t);
        let global = global_phase(problem, oracle, state, delta_t)?;
        outcome.global_steps.extend_from_slice(&global.steps);
        outcome.centers.push(global.state.center);
        state = local_phase(problem, oracle, global.state, delta_t)?;
        outcome.centers.push(state.center);
    }
    outcome.x = state.center;
    outcome.iterations = rounds;
    outcome.calls = oracle.calls() - start_calls;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quartic(x: f64) -> f64 {
        (x - 0.3).powi(4)
    }

    // f = (x − 0.3)⁴ has |f'| = 4 f^{3/4} and f'' ≤ 1.08 on its sublevel set [0, 0.6].
    fn quartic_problem() -> KlProblem {
        KlProblem::new(4.0, 1.08, 0.75).unwrap()
    }

    #[test]
    fn initial_gap_examples() {
        assert!((initial_gap(2.0, 1.0, 0.75).unwrap() - 1.0).abs() < 1e-15);
        assert!((initial_gap(2.0, 4.0, 1.0).unwrap() - 4.0).abs() < 1e-15);
        assert!((initial_gap(4.0, 4.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(initial_gap(1.0, 1.0, 0.5).is_err());
        assert!(initial_gap(0.0, 1.0, 0.75).is_err());
    }

    #[test]
    fn problem_validation() {
        assert!(KlProblem::new(1.0, 1.0, 1.2).is_err());
        assert!(KlProblem::new(1.0, -1.0, 0.8).is_err());
        assert!(quartic_problem().with_domain(1.0, 0.0).is_err());
    }

    #[test]
    fn global_phase_keeps_minimizer_inside() {
        let p = quartic_problem();
        let mut oracle = NoisyFunction1d::new(quartic, NoiseModel::Zero, 0).unwrap();
        let state = SearchState {
            center: 0.0,
            gap: initial_gap(p.c1, p.c2, p.alpha).unwrap(),
            half_width: 0.0,
            iteration: 0,
        };
        let out = global_phase(&p, &mut oracle, state, 0.05).unwrap();
        assert!(!out.steps.is_empty());
        let s = out.state;
        assert!(s.center - s.half_width <= 0.3 && 0.3 <= s.center + s.half_width);
        for step in &out.steps {
            assert_eq!(step.calls % 3, 0);
        }
    }

    #[test]
    fn global_phase_keeps_optimal_center() {
        let p = KlProblem::new(4.0, 1.08, 0.75).unwrap();
        let mut oracle = NoisyFunction1d::new(|x: f64| x.powi(4), NoiseModel::Zero, 0).unwrap();
        let state = SearchState {
            center: 0.0,
            gap: 0.05,
            half_width: 0.0,
            iteration: 0,
        };
        let out = global_phase(&p, &mut oracle, state, 0.1).unwrap();
        assert!(!out.steps.is_empty());
        assert_eq!(out.state.center, 0.0);
    }

    #[test]
    fn global_phase_skips_when_interval_small() {
        // L_th / L = (C0² / (g C2))^{1/6}: a tiny smoothness constant puts the
        // starting interval below the threshold.
        let p = KlProblem::new(1.0, 1e-12, 0.75).unwrap();
        let mut oracle = NoisyFunction1d::new(|x: f64| x * x, NoiseModel::Zero, 0).unwrap();
        let state = SearchState {
            center: 0.0,
            gap: 1.0,
            half_width: 0.0,
            iteration: 0,
        };
        let out = global_phase(&p, &mut oracle, state, 0.1).unwrap();
        assert!(out.steps.is_empty());
        assert_eq!(oracle.calls(), 0);
    }

    #[test]
    fn global_phase_rejects_alpha_one() {
        let p = KlProblem::new(1.0, 1.0, 1.0).unwrap();
        let mut oracle = NoisyFunction1d::new(|x: f64| x * x, NoiseModel::Zero, 0).unwrap();
        let state = SearchState {
            center: 0.0,
            gap: 1.0,
            half_width: 0.0,
            iteration: 0,
        };
        assert!(matches!(
            global_phase(&p, &mut oracle, state, 0.1),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn local_phase_hits_grid_minimizer() {
        // g = C2 makes √(g/C2) = 1 = L, so N = 2 and the grid is {-1, 0, 1}.
        let p = KlProblem::new(1.0, 1.0, 0.75).unwrap();
        let mut oracle = NoisyFunction1d::new(|x: f64| (x - 1.0) * (x - 1.0), NoiseModel::Zero, 0).unwrap();
        let state = SearchState {
            center: 0.0,
            gap: 1.0,
            half_width: 1.0,
            iteration: 0,
        };
        let next = local_phase(&p, &mut oracle, state, 0.1).unwrap();
        assert_eq!(next.center, 1.0);
        assert_eq!(next.gap, 0.5);
    }

    #[test]
    fn local_phase_handicap_retains_incumbent() {
        // Grid neighbours beat the centre by less than 2ε_s = g/8.
        let p = KlProblem::new(1.0, 1.0, 0.75).unwrap();
        let f = |x: f64| if x == 0.0 { 0.1 } else { 0.05 };
        let mut oracle = NoisyFunction1d::new(f, NoiseModel::Zero, 0).unwrap();
        let state = SearchState {
            center: 0.0,
            gap: 1.0,
            half_width: 1.0,
            iteration: 0,
        };
        assert_eq!(local_phase(&p, &mut oracle, state, 0.1).unwrap().center, 0.0);
    }

    #[test]
    fn local_phase_quantization_bound() {
        let p = quartic_problem();
        let mut oracle = NoisyFunction1d::new(quartic, NoiseModel::Zero, 0).unwrap();
        let state = SearchState {
            center: 0.1,
            gap: 0.02,
            half_width: 0.5,
            iteration: 0,
        };
        let next = local_phase(&p, &mut oracle, state, 0.1).unwrap();
        let half = (0.5 / (0.02f64 / 1.08).sqrt()).ceil();
        let spacing = 0.5 / (2.0 * half);
        assert!(quartic(next.center) <= p.c2 * spacing * spacing);
        assert!(quartic(next.center) <= 0.02 / 4.0);
    }

    #[test]
    fn eps_above_gap_returns_origin() {
        let p = quartic_problem();
        let mut oracle = NoisyFunction1d::new(quartic, NoiseModel::Gaussian, 0).unwrap();
        let out = kl_search_1d(&p, &mut oracle, 1.0, 0.1).unwrap();
        assert_eq!(out.x, 0.0);
        assert_eq!(out.calls, 0);
        assert!(kl_search_1d(&p, &mut oracle, 0.0, 0.1).is_err());
        assert!(kl_search_1d(&p, &mut oracle, 0.01, 1.0).is_err());
    }

    #[test]
    fn noiseless_search_descends_and_dominates() {
        let p = quartic_problem();
        for eps in [0.05, 0.01, 1e-3] {
            let mut oracle = NoisyFunction1d::new(quartic, NoiseModel::Zero, 0).unwrap();
            let out = kl_search_1d(&p, &mut oracle, eps, 0.1).unwrap();
            assert!(quartic(out.x) <= eps);
            for w in out.centers.windows(2) {
                assert!(quartic(w[1]) <= quartic(w[0]));
            }
            for s in &out.global_steps {
                let fc = quartic(s.center);
                let bound = fc - s.slope * s.half_width;
                assert!(quartic(s.center - s.half_width) >= bound);
                assert!(quartic(s.center + s.half_width) >= bound);
            }
            let total: f64 = out.delta_schedule.iter().sum();
            assert!(total < 0.1);
            assert_eq!(out.calls, oracle.calls());
        }
    }
}
