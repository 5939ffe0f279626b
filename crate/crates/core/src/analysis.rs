//! Convergence diagnostics linking finite-time walks to the limit laws.

use rayon::prelude::*;
use serde::Serialize;

use crate::coin::{Schedule, WalkParams};
use crate::dynamics::{distribution, evolve, spinor_norm_sqr, Distribution};
use crate::error::{Error, Result};
use crate::limits::{LimitDensity, Parity};
use crate::spectral::spectral_point_amplitude;

/// Exponent of the window `|x| <= t^p` whose mass is credited to the atom
/// at the origin when comparing against the limit law.
pub const ATOM_WINDOW_EXPONENT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    /// `P(X_t = x)`
    Mass { x: i64 },
    /// Kolmogorov distance of `X_t / t` to the limit law.
    Ks,
    /// `E[(X_t / t)^r]`
    Moment { r: u32 },
}

/// One observable sampled over increasing half-times.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub observable: Observable,
    pub parity: Parity,
    taus: Vec<u64>,
    values: Vec<f64>,
}

impl ConvergenceTrace {
    pub fn new(observable: Observable, parity: Parity, taus: Vec<u64>, values: Vec<f64>) -> Result<Self> {
        if taus.len() != values.len() {
            return Err(Error::Config(format!(
                "{} half-times but {} values",
                taus.len(),
                values.len()
            )));
        }
        if taus.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("half-times must be strictly increasing".into()));
        }
        Ok(ConvergenceTrace { observable, parity, taus, values })
    }

    pub fn taus(&self) -> &[u64] {
        &self.taus
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.taus.iter().copied().zip(self.values.iter().copied())
    }

    /// Running means `(v_0 + ... + v_i) / (i + 1)`.
    pub fn cesaro_means(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                acc += v;
                acc / (i + 1) as f64
            })
            .collect()
    }

    /// Mean over the entries with `tau >= from`.
    pub fn mean_from(&self, from: u64) -> Option<f64> {
        let tail: Vec<f64> = self.iter().filter(|(t, _)| *t >= from).map(|(_, v)| v).collect();
        (!tail.is_empty()).then(|| tail.iter().sum::<f64>() / tail.len() as f64)
    }
}

fn check_taus(taus: &[u64]) -> Result<()> {
    if taus.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("half-times must be strictly increasing".into()));
    }
    Ok(())
}

/// `P(X_t = x)` at `t = 2 tau + 1` or `2 tau + 2` for every `tau`, read from
/// the exact single-site spectral evaluation (cost linear in `tau`).
pub fn mass_trace(params: &WalkParams, x: i64, parity: Parity, taus: &[u64]) -> Result<ConvergenceTrace> {
    check_taus(taus)?;
    let values = taus
        .par_iter()
        .map(|&tau| {
            let p = params.with_tau(tau);
            spinor_norm_sqr(&spectral_point_amplitude(&p, &Schedule::HalfTime, parity.time(tau), x))
        })
        .collect();
    ConvergenceTrace::new(Observable::Mass { x }, parity, taus.to_vec(), values)
}

/// [`mass_trace`] by full position-space evolution.
pub fn mass_trace_direct(params: &WalkParams, x: i64, parity: Parity, taus: &[u64]) -> Result<ConvergenceTrace> {
    check_taus(taus)?;
    let values = taus
        .par_iter()
        .map(|&tau| {
            let p = params.with_tau(tau);
            let state = evolve(&p, &Schedule::HalfTime, parity.time(tau))?;
            Ok(distribution(&state).get(x))
        })
        .collect::<Result<Vec<f64>>>()?;
    ConvergenceTrace::new(Observable::Mass { x }, parity, taus.to_vec(), values)
}

pub fn ks_trace(params: &WalkParams, parity: Parity, taus: &[u64]) -> Result<ConvergenceTrace> {
    check_taus(taus)?;
    let values = taus
        .par_iter()
        .map(|&tau| rescaled_cdf_distance(&params.with_tau(tau), parity.time(tau)))
        .collect::<Result<Vec<f64>>>()?;
    ConvergenceTrace::new(Observable::Ks, parity, taus.to_vec(), values)
}

pub fn moment_trace(params: &WalkParams, r: u32, parity: Parity, taus: &[u64]) -> Result<ConvergenceTrace> {
    check_taus(taus)?;
    let values = taus
        .par_iter()
        .map(|&tau| {
            let p = params.with_tau(tau);
            let state = evolve(&p, &Schedule::HalfTime, parity.time(tau))?;
            Ok(moment(&distribution(&state), r))
        })
        .collect::<Result<Vec<f64>>>()?;
    ConvergenceTrace::new(Observable::Moment { r }, parity, taus.to_vec(), values)
}

/// Walk mass within `|x| <= t^ATOM_WINDOW_EXPONENT`.
pub fn atom_mass(dist: &Distribution) -> f64 {
    let w = atom_window(dist.time());
    dist.iter().filter(|(x, _)| (*x as f64).abs() <= w).map(|(_, p)| p).sum()
}

fn atom_window(t: u64) -> f64 {
    (t as f64).powf(ATOM_WINDOW_EXPONENT)
}

/// Kolmogorov distance between the law of `X_t / t` and `law`.
///
/// With `atom_window = Some(p)` the walk mass on `|x| <= t^p` is moved to the
/// origin first. The localized part of the walk sits on both sides of zero at
/// every finite time, so without the window the distance stalls near half the
/// atom.
pub fn kolmogorov_distance(dist: &Distribution, law: &LimitDensity, atom_window: Option<f64>) -> f64 {
    let t = dist.time().max(1) as f64;
    let mut points: Vec<(f64, f64)> = match atom_window {
        Some(p) => {
            let w = t.powf(p);
            let mut pts: Vec<(f64, f64)> = dist
                .iter()
                .filter(|&(x, prob)| (x as f64).abs() > w && prob > 0.0)
                .map(|(x, prob)| (x as f64 / t, prob))
                .collect();
            let centre: f64 = dist.iter().filter(|(x, _)| (*x as f64).abs() <= w).map(|(_, p)| p).sum();
            pts.push((0.0, centre));
            pts
        }
        None => dist
            .iter()
            .filter(|&(_, prob)| prob > 0.0)
            .map(|(x, prob)| (x as f64 / t, prob))
            .collect(),
    };
    points.sort_by(|a, b| a.0.total_cmp(&b.0));

    // The empirical CDF is a step function and the limit CDF is monotone, so
    // the supremum is attained at a jump, from the left or from the right.
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for (y, p) in points {
        worst = worst.max((below - law.cdf_left(y)).abs());
        below += p;
        worst = worst.max((below - law.cdf(y)).abs());
    }
    worst.min(1.0)
}

/// Kolmogorov distance of `X_t / t` to the weak limit, for `t = 2 tau + 1`
/// or `2 tau + 2`.
pub fn rescaled_cdf_distance(params: &WalkParams, t: u64) -> Result<f64> {
    Parity::of_time(t, params.tau())?;
    let dist = distribution(&evolve(params, &Schedule::HalfTime, t)?);
    Ok(kolmogorov_distance(&dist, &LimitDensity::new(params), Some(ATOM_WINDOW_EXPONENT)))
}

/// `E[(X_t / t)^r]`.
pub fn moment(dist: &Distribution, r: u32) -> f64 {
    let t = dist.time();
    if t == 0 {
        return if r == 0 { dist.total() } else { 0.0 };
    }
    let t = t as f64;
    dist.iter().map(|(x, p)| (x as f64 / t).powi(r as i32) * p).sum()
}

/// `lim E[(X_t / t)^r] = 0^r Delta + int x^r f_ac(x) dx`.
pub fn limit_moment(params: &WalkParams, r: u32) -> f64 {
    LimitDensity::new(params).moment(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentComparison {
    pub r: u32,
    pub simulated: f64,
    pub limit: f64,
}

/// Finite-time walk against the weak limit at one time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub t: u64,
    pub tau: u64,
    pub ks_distance: f64,
    pub delta_mass_sim: f64,
    pub delta_mass_theory: f64,
    pub moments: Vec<MomentComparison>,
}

/// Compares the walk at time `t` (half-time chosen so `t` is `2 tau + 1` or
/// `2 tau + 2`) with the limit law, for moments `0..=max_r`.
pub fn compare(params: &WalkParams, t: u64, max_r: u32) -> Result<CompareReport> {
    let tau = if t % 2 == 1 { (t - 1) / 2 } else { t.saturating_sub(2) / 2 };
    let params = params.with_tau(tau);
    Parity::of_time(t, tau)?;
    let dist = distribution(&evolve(&params, &Schedule::HalfTime, t)?);
    let law = LimitDensity::new(&params);
    Ok(CompareReport {
        t,
        tau,
        ks_distance: kolmogorov_distance(&dist, &law, Some(ATOM_WINDOW_EXPONENT)),
        delta_mass_sim: atom_mass(&dist),
        delta_mass_theory: law.delta_mass,
        moments: (0..=max_r)
            .map(|r| MomentComparison { r, simulated: moment(&dist, r), limit: law.moment(r) })
            .collect(),
    })
}
