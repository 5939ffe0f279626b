//! Position-space evolution.
//!
//! The state at time `t` is stored densely over positions `-t..=t`. One step
//! maps
//!
//! ```text
//! psi_{t+1}(x) = P psi_t(x+1) + Q psi_t(x-1)
//! ```
//!
//! with `(P, Q)` swapped for `(P1, Q1)` on the transitions selected by the
//! [`Schedule`].

use num_complex::Complex64 as C64;

use crate::coin::{build_coins, Coins, Schedule, SplitCoin, Spinor, WalkParams};
use crate::error::{Error, Result};

/// Default cap on the number of steps [`evolve`] will take.
pub const DEFAULT_MAX_T: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_MAX_T`].
pub const MAX_T_ENV: &str = "QWALK_MAX_T";

/// Rounding floor below which a negative probability is clamped to zero.
const NEGATIVE_FLOOR: f64 = -1e-15;

const ZERO: Spinor = [C64::new(0.0, 0.0), C64::new(0.0, 0.0)];

/// Step cap honoring `QWALK_MAX_T`.
pub fn max_time() -> u64 {
    std::env::var(MAX_T_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_T)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    time: u64,
    amps: Vec<Spinor>,
}

impl StateVector {
    /// Builds a state from amplitudes over `-time..=time`.
    pub fn from_amplitudes(time: u64, amps: Vec<Spinor>) -> Result<Self> {
        if amps.len() as u64 != 2 * time + 1 {
            return Err(Error::Config(format!(
                "state at time {time} needs {} amplitudes, got {}",
                2 * time + 1,
                amps.len()
            )));
        }
        Ok(StateVector { time, amps })
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    /// Position of the first stored amplitude, `-t`.
    pub fn offset(&self) -> i64 {
        -(self.time as i64)
    }

    pub fn amplitudes(&self) -> &[Spinor] {
        &self.amps
    }

    /// Amplitude at `x`; zero outside the light cone.
    pub fn amplitude(&self, x: i64) -> Spinor {
        let idx = x - self.offset();
        if idx < 0 || idx as usize >= self.amps.len() {
            ZERO
        } else {
            self.amps[idx as usize]
        }
    }

    /// `(x, amplitude)` pairs over the window.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Spinor)> + '_ {
        let off = self.offset();
        self.amps.iter().enumerate().map(move |(i, a)| (off + i as i64, a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(spinor_norm_sqr).sum()
    }
}

pub fn spinor_norm_sqr(v: &Spinor) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr()
}

/// `P(X_t = x)` over the window `-t..=t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    time: u64,
    offset: i64,
    probs: Vec<f64>,
}

impl Distribution {
    /// Wraps raw probabilities, clamping rounding-level negatives to zero.
    pub fn from_raw(time: u64, offset: i64, mut probs: Vec<f64>) -> Result<Self> {
        for (i, p) in probs.iter_mut().enumerate() {
            if *p < 0.0 {
                if *p < NEGATIVE_FLOOR {
                    return Err(Error::NegativeProbability { x: offset + i as i64, value: *p });
                }
                *p = 0.0;
            }
        }
        Ok(Distribution { time, offset, probs })
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn get(&self, x: i64) -> f64 {
        let idx = x - self.offset;
        if idx < 0 || idx as usize >= self.probs.len() {
            0.0
        } else {
            self.probs[idx as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let off = self.offset;
        self.probs.iter().enumerate().map(move |(i, &p)| (off + i as i64, p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Amplitude `(alpha, beta)` at the origin at `t = 0`.
pub fn initial_state(params: &WalkParams) -> StateVector {
    StateVector { time: 0, amps: vec![params.spinor()] }
}

/// One step `t -> t+1`.
pub fn step(state: &StateVector, params: &WalkParams, schedule: &Schedule) -> StateVector {
    let coins = build_coins(params);
    let split = coins.split_at(schedule, state.time, params.tau());
    step_with(state, split)
}

fn step_with(state: &StateVector, split: &SplitCoin) -> StateVector {
    let old = &state.amps;
    let n = old.len();
    let [p0, p1] = split.p.0[0];
    let [q0, q1] = split.q.0[1];
    let mut amps = vec![ZERO; n + 2];
    // new index j holds x = j - t - 1; x+1 sits at old index j, x-1 at j-2
    for (j, out) in amps.iter_mut().enumerate() {
        if j < n {
            let a = &old[j];
            out[0] = p0 * a[0] + p1 * a[1];
        }
        if j >= 2 {
            let b = &old[j - 2];
            out[1] = q0 * b[0] + q1 * b[1];
        }
    }
    StateVector { time: state.time + 1, amps }
}

/// A walk in progress. Caches the coin matrices between steps.
#[derive(Debug, Clone)]
pub struct Walker {
    coins: Coins,
    schedule: Schedule,
    tau: u64,
    state: StateVector,
}

impl Walker {
    pub fn new(params: &WalkParams, schedule: Schedule) -> Self {
        Walker {
            coins: build_coins(params),
            schedule,
            tau: params.tau(),
            state: initial_state(params),
        }
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }

    pub fn advance(&mut self) -> &StateVector {
        let split = self.coins.split_at(&self.schedule, self.state.time, self.tau);
        self.state = step_with(&self.state, split);
        &self.state
    }
}

/// State at `t_final`, capped by [`max_time`].
pub fn evolve(params: &WalkParams, schedule: &Schedule, t_final: u64) -> Result<StateVector> {
    evolve_with_cap(params, schedule, t_final, max_time())
}

pub fn evolve_with_cap(
    params: &WalkParams,
    schedule: &Schedule,
    t_final: u64,
    cap: u64,
) -> Result<StateVector> {
    evolve_inspect(params, schedule, t_final, cap, |_| {})
}

/// Evolves to `t_final`, handing every intermediate state (including `t = 0`)
/// to `inspect`.
pub fn evolve_inspect<F>(
    params: &WalkParams,
    schedule: &Schedule,
    t_final: u64,
    cap: u64,
    mut inspect: F,
) -> Result<StateVector>
where
    F: FnMut(&StateVector),
{
    if t_final > cap {
        return Err(Error::TimeCap { requested: t_final, cap });
    }
    let mut walker = Walker::new(params, schedule.clone());
    inspect(walker.state());
    for _ in 0..t_final {
        inspect(walker.advance());
    }
    Ok(walker.into_state())
}

pub fn distribution(state: &StateVector) -> Distribution {
    Distribution {
        time: state.time,
        offset: state.offset(),
        probs: state.amps.iter().map(spinor_norm_sqr).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::Preset;
    use std::f64::consts::FRAC_PI_4;

    fn walk(theta: f64, theta1: f64, tau: u64, preset: Preset) -> WalkParams {
        let [a, b] = preset.spinor();
        WalkParams::new(theta, theta1, tau, a, b).unwrap()
    }

    #[test]
    fn initial_state_sits_at_origin() {
        let p = walk(0.7, 0.0, 2, Preset::Up);
        let s = initial_state(&p);
        assert_eq!(s.time(), 0);
        assert_eq!(s.amplitude(0), Preset::Up.spinor());
        assert_eq!(s.amplitude(1), ZERO);
        let d = distribution(&s);
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![(0, 1.0)]);

        let sym = initial_state(&walk(0.7, 0.0, 2, Preset::Symmetric));
        assert_eq!(sym.amplitude(0), Preset::Symmetric.spinor());
        assert!((sym.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn first_step_splits_by_coin_component() {
        let theta: f64 = 0.9;
        let (s, c) = theta.sin_cos();
        let p = walk(theta, 2.0, 5, Preset::Up);
        let s1 = step(&initial_state(&p), &p, &Schedule::HalfTime);
        assert_eq!(s1.amplitude(-1), [C64::new(c, 0.0), C64::new(0.0, 0.0)]);
        assert_eq!(s1.amplitude(1), [C64::new(0.0, 0.0), C64::new(s, 0.0)]);
        let d = distribution(&s1);
        assert!((d.get(-1) - c * c).abs() < 1e-15);
        assert!((d.get(1) - s * s).abs() < 1e-15);
        assert_eq!(d.get(0), 0.0);
    }

    #[test]
    fn hadamard_two_steps() {
        let p = walk(FRAC_PI_4, 0.0, 10, Preset::Up);
        let d = distribution(&evolve(&p, &Schedule::Usual, 2).unwrap());
        assert!((d.get(-2) - 0.25).abs() < 1e-15);
        assert!((d.get(0) - 0.5).abs() < 1e-15);
        assert!((d.get(2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn half_time_uses_alternate_coin_on_transition_out_of_tau() {
        // theta1 = 0 makes H diagonal: the transition out of tau keeps
        // each component moving the way it was labelled.
        let p = walk(FRAC_PI_4, 0.0, 0, Preset::Up);
        let s1 = evolve(&p, &Schedule::HalfTime, 1).unwrap();
        assert_eq!(distribution(&s1).get(-1), 1.0);
        let usual = evolve(&p, &Schedule::Usual, 1).unwrap();
        assert!((distribution(&usual).get(-1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_time_is_the_initial_state() {
        let p = walk(1.1, 0.2, 0, Preset::Symmetric);
        assert_eq!(evolve(&p, &Schedule::HalfTime, 0).unwrap(), initial_state(&p));
    }

    #[test]
    fn time_cap_is_enforced() {
        let p = walk(1.1, 0.2, 0, Preset::Up);
        let err = evolve_with_cap(&p, &Schedule::Usual, 11, 10).unwrap_err();
        assert!(matches!(err, Error::TimeCap { requested: 11, cap: 10 }));
    }

    #[test]
    fn negative_probabilities() {
        let d = Distribution::from_raw(1, -1, vec![0.5, -1e-16, 0.5]).unwrap();
        assert_eq!(d.get(0), 0.0);
        let err = Distribution::from_raw(1, -1, vec![0.5, -1e-9, 0.5]).unwrap_err();
        assert!(matches!(err, Error::NegativeProbability { x: 0, .. }));
    }

    #[test]
    fn usual_walk_has_no_spike_at_origin() {
        let p = walk(FRAC_PI_4, FRAC_PI_4, 0, Preset::Symmetric);
        let d = distribution(&evolve(&p, &Schedule::Usual, 500).unwrap());
        let near: f64 = (-2..=2).map(|x| d.get(x)).sum();
        assert!(near < 0.01, "mass near origin {near}");
    }

    #[test]
    fn localized_walk_has_spikes_near_origin() {
        let p = walk(FRAC_PI_4, 0.0, 249, Preset::Symmetric);
        let d = distribution(&evolve(&p, &Schedule::HalfTime, 500).unwrap());
        let peak = d.get(0).max(d.get(2)).max(d.get(-2));
        let far = (10..400).step_by(2).map(|x| d.get(x)).fold(0.0, f64::max);
        assert!(peak > 0.08 && peak > 5.0 * far, "peak {peak}, far max {far}");
    }
}
