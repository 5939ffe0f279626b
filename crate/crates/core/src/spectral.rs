//! Fourier-space evolution and the eigen-structure of `U(k) = R(k) U`.
//!
//! Two independent uses:
//!
//! * [`spectral_evolve`] runs the walk pointwise in `k` on an `N`-point grid
//!   and transforms back. The walk at time `t` is supported on `|x| <= t`,
//!   so the trapezoid sum of the inverse transform is exact once
//!   `N >= 2t + 2`; the result must agree with [`crate::dynamics::evolve`]
//!   to rounding.
//! * [`eigensystem`] and [`asymptotic_amplitude`] give the closed-form
//!   spectral data and the limiting amplitudes around the origin.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::coin::{build_coins, fourier_coin, CoinMatrix, Schedule, Spinor, WalkParams};
use crate::dynamics::StateVector;
use crate::error::{Error, Result};
use crate::limits::Parity;

/// Below this radicand the closed-form eigenvector is swapped for the
/// cofactor form.
const RADICAND_FLOOR: f64 = 1e-8;

/// Eigenvalues and normalized eigenvectors of `U(k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPair {
    pub k: f64,
    pub lambda: [C64; 2],
    pub v: [Spinor; 2],
}

impl SpectralPair {
    /// `<v_j | phi>`
    pub fn coefficient(&self, j: usize, phi: &Spinor) -> C64 {
        self.v[j][0].conj() * phi[0] + self.v[j][1].conj() * phi[1]
    }

    /// `U(k)^n` assembled from the spectral projectors.
    pub fn power(&self, n: u64) -> CoinMatrix {
        let mut out = CoinMatrix::ZERO;
        for j in 0..2 {
            let ln = C64::from_polar(1.0, self.lambda[j].arg() * n as f64);
            let v = &self.v[j];
            for r in 0..2 {
                for c in 0..2 {
                    out.0[r][c] += ln * v[r] * v[c].conj();
                }
            }
        }
        out
    }
}

/// Closed-form eigen-decomposition of `U(k)` for coin angle `theta`.
///
/// `lambda_{1,2} = +-sqrt(1 - c^2 sin^2 k) + i c sin k` and
/// `v_{1,2} ~ [s e^{ik}, +-r - c cos k]` with `r = sqrt(1 - c^2 sin^2 k)`.
pub fn eigensystem(params: &WalkParams, k: f64) -> SpectralPair {
    let (s, c) = params.theta().sin_cos();
    let (sk, ck) = k.sin_cos();
    // 1 - c^2 sin^2 k rewritten as s^2 + c^2 cos^2 k
    let r = (s * s + c * c * ck * ck).sqrt();
    let lambda = [C64::new(r, c * sk), C64::new(-r, c * sk)];
    // (r + c cos k)(r - c cos k) = s^2: form the larger factor directly and
    // the smaller by division
    let (plus, minus) = if c * ck >= 0.0 {
        let plus = r + c * ck;
        (plus, s * s / plus)
    } else {
        let minus = r - c * ck;
        (s * s / minus, minus)
    };
    let mut v = [[C64::new(0.0, 0.0); 2]; 2];
    for (j, radicand_num, lower) in [(0usize, plus, minus), (1usize, minus, -plus)] {
        let radicand = radicand_num / (2.0 * s * s * r);
        v[j] = if radicand >= RADICAND_FLOOR {
            let norm = radicand.sqrt();
            [C64::from_polar(s * norm, k), C64::new(lower * norm, 0.0)]
        } else {
            cofactor_eigenvector(c, s, k, lambda[j])
        };
    }
    SpectralPair { k, lambda, v }
}

/// Eigenvector read off the second row of `U(k) - lambda`:
/// `[lambda + c e^{-ik}, s e^{-ik}]`, normalized.
fn cofactor_eigenvector(c: f64, s: f64, k: f64, lambda: C64) -> Spinor {
    let e = C64::from_polar(1.0, -k);
    let v = [lambda + e * c, e * s];
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / norm, v[1] / norm]
}

/// `N` equally spaced wavenumbers `k_j = -pi + 2 pi j / N`.
pub fn k_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| -PI + 2.0 * PI * j as f64 / n as f64).collect()
}

/// Smallest grid on which the inverse transform of a time-`t` state is exact.
pub fn min_grid(t: u64) -> usize {
    2 * t as usize + 2
}

/// A wavefunction sampled on [`k_grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct FourierState {
    pub grid: Vec<f64>,
    pub values: Vec<Spinor>,
}

impl FourierState {
    /// `(1/N) sum_k |Psi(k)|^2`, equal to the position-space norm.
    pub fn mean_norm_sqr(&self) -> f64 {
        let sum: f64 = self.values.iter().map(crate::dynamics::spinor_norm_sqr).sum();
        sum / self.values.len() as f64
    }
}

/// `Psi(k) = sum_x e^{-ikx} psi(x)` on an `n`-point grid.
pub fn fourier_transform(state: &StateVector, n: usize) -> FourierState {
    let mut buf = [vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); n]];
    // e^{-i k_j x} = (-1)^x e^{-2 pi i j x / N}
    for (x, a) in state.iter() {
        let m = x.rem_euclid(n as i64) as usize;
        let sign = if x.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        buf[0][m] += a[0] * sign;
        buf[1][m] += a[1] * sign;
    }
    let fft = FftPlanner::new().plan_fft_forward(n);
    for b in buf.iter_mut() {
        fft.process(b);
    }
    FourierState {
        grid: k_grid(n),
        values: (0..n).map(|j| [buf[0][j], buf[1][j]]).collect(),
    }
}

/// Position-space amplitudes over `-t..=t` from a transform on a grid of
/// at least `2t + 2` points.
pub fn inverse_transform(fs: &FourierState, t: u64) -> Result<StateVector> {
    let n = fs.values.len();
    if n < min_grid(t) {
        return Err(Error::GridTooSmall { n, t, required: min_grid(t) });
    }
    let mut buf = [
        fs.values.iter().map(|v| v[0]).collect::<Vec<_>>(),
        fs.values.iter().map(|v| v[1]).collect::<Vec<_>>(),
    ];
    let ifft = FftPlanner::new().plan_fft_inverse(n);
    for b in buf.iter_mut() {
        ifft.process(b);
    }
    let scale = 1.0 / n as f64;
    let t = t as i64;
    let amps = (-t..=t)
        .map(|x| {
            let m = x.rem_euclid(n as i64) as usize;
            let sign = if x.rem_euclid(2) == 0 { scale } else { -scale };
            [buf[0][m] * sign, buf[1][m] * sign]
        })
        .collect();
    StateVector::from_amplitudes(t as u64, amps)
}

/// Evolves pointwise in `k` on an `n`-point grid and transforms back.
pub fn spectral_evolve(
    params: &WalkParams,
    schedule: &Schedule,
    t_final: u64,
    n: usize,
) -> Result<StateVector> {
    if n < min_grid(t_final) {
        return Err(Error::GridTooSmall { n, t: t_final, required: min_grid(t_final) });
    }
    let coins = build_coins(params);
    let psi0 = params.spinor();
    let tau = params.tau();
    let grid = k_grid(n);
    let values = grid
        .par_iter()
        .map(|&k| {
            let uk = fourier_coin(&coins.u, k);
            let hk = fourier_coin(&coins.h, k);
            let mut v = psi0;
            for t in 0..t_final {
                let m = if schedule.uses_alternate(t, tau) { &hk } else { &uk };
                v = m.apply(&v);
            }
            v
        })
        .collect();
    inverse_transform(&FourierState { grid, values }, t_final)
}

/// `psi_t(x)` at a single site, from the spectral projectors of `U(k)`.
///
/// Costs `O(t)` per call (independent of how many steps are taken), which
/// makes long sweeps over the half-time affordable.
pub fn spectral_point_amplitude(
    params: &WalkParams,
    schedule: &Schedule,
    t: u64,
    x: i64,
) -> Spinor {
    if x.unsigned_abs() > t {
        return [C64::new(0.0, 0.0); 2];
    }
    let coins = build_coins(params);
    let tau = params.tau();
    // lengths of the runs of default-coin steps between alternate steps
    let mut runs = Vec::new();
    let mut run = 0u64;
    for step in 0..t {
        if schedule.uses_alternate(step, tau) {
            runs.push(run);
            run = 0;
        } else {
            run += 1;
        }
    }
    runs.push(run);

    let n = min_grid(t);
    let psi0 = params.spinor();
    let sum = k_grid(n)
        .into_iter()
        .map(|k| {
            let pair = eigensystem(params, k);
            let hk = fourier_coin(&coins.h, k);
            let mut v = pair.power(runs[0]).apply(&psi0);
            for &r in &runs[1..] {
                v = pair.power(r).apply(&hk.apply(&v));
            }
            let phase = C64::from_polar(1.0, k * x as f64);
            [v[0] * phase, v[1] * phase]
        })
        .fold([C64::new(0.0, 0.0); 2], |acc, v| [acc[0] + v[0], acc[1] + v[1]]);
    [sum[0] / n as f64, sum[1] / n as f64]
}

/// Limiting amplitude `psi_t(x)` at `t = 2 tau + 1` (odd) or `2 tau + 2`
/// (even) as `tau -> infinity`, with the `(-1)^tau` phase dropped.
pub fn asymptotic_amplitude(params: &WalkParams, x: i64, parity: Parity) -> Spinor {
    let tr = params.trig();
    let (c, s) = (tr.c, tr.s);
    let d = tr.mismatch();
    let m = s.abs();
    let (a, b) = (params.alpha(), params.beta());
    let zero = [C64::new(0.0, 0.0); 2];
    let i = C64::new(0.0, 1.0);
    // I_x = (i (1-|s|)/|c|)^|x|
    let ix = |x: i64| (i * ((1.0 - m) / c.abs())).powu(x.unsigned_abs() as u32);
    match parity {
        Parity::Even => {
            if x.rem_euclid(2) != 0 {
                return zero;
            }
            let pre = d / (c * c);
            match x {
                0 => [-b * (pre * m * (1.0 - m)), a * (pre * m * (1.0 - m))],
                -2 => {
                    let i2 = ix(2);
                    [
                        (-i2 * a * (c * s) - b * (1.0 - m)) * pre,
                        i2 * (a * (m * (1.0 - m)) + b * (c * s)) * pre,
                    ]
                }
                2 => {
                    let i2 = ix(2);
                    [
                        i2 * (a * (c * s) - b * (m * (1.0 - m))) * pre,
                        (a * (1.0 - m) - i2 * b * (c * s)) * pre,
                    ]
                }
                _ => {
                    let sg = x.signum() as f64;
                    let w = ix(x) * pre;
                    [
                        w * (a * (sg * c * s) - b * (m * (1.0 - sg * m))),
                        w * (a * (m * (1.0 + sg * m)) - b * (sg * c * s)),
                    ]
                }
            }
        }
        Parity::Odd => {
            if x.rem_euclid(2) == 0 {
                return zero;
            }
            match x {
                -1 => {
                    let pre = d * (1.0 - m) / (c * c * c);
                    [
                        (a * s - b * c) * (c * pre),
                        (-a * (m * (1.0 - m)) - b * (c * s)) * pre,
                    ]
                }
                1 => {
                    let pre = d * (1.0 - m) / (c * c * c);
                    [
                        (a * (c * s) - b * (m * (1.0 - m))) * pre,
                        -(a * c + b * s) * (c * pre),
                    ]
                }
                _ => {
                    // J_x = i (c1 s - s1 c) I_x / (c^2 |c| (1 - |s|))
                    let jx = i * ix(x) * (d / (c * c * c.abs() * (1.0 - m)));
                    if x < 0 {
                        [
                            -jx * (a * (s * (1.0 - m)) + b * (c * m)) * (c * c),
                            jx * (a * (c * m * (1.0 - m)) + b * (c * c * s)) * (1.0 - m),
                        ]
                    } else {
                        [
                            jx * (-a * (c * c * s) + b * (c * m * (1.0 - m))) * (1.0 - m),
                            -jx * (a * (c * m) - b * (s * (1.0 - m))) * (c * c),
                        ]
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::Preset;
    use crate::dynamics::{evolve, spinor_norm_sqr};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn walk(theta: f64, theta1: f64, tau: u64, preset: Preset) -> WalkParams {
        let [a, b] = preset.spinor();
        WalkParams::new(theta, theta1, tau, a, b).unwrap()
    }

    fn max_amp_diff(a: &StateVector, b: &StateVector) -> f64 {
        a.iter()
            .map(|(x, u)| {
                let v = b.amplitude(x);
                (u[0] - v[0]).norm().max((u[1] - v[1]).norm())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn eigenvalues_at_special_wavenumbers() {
        let p = walk(FRAC_PI_4, 0.0, 1, Preset::Up);
        let e0 = eigensystem(&p, 0.0);
        assert!((e0.lambda[0] - 1.0).norm() < 1e-15);
        assert!((e0.lambda[1] + 1.0).norm() < 1e-15);
        let e = eigensystem(&p, FRAC_PI_2);
        let expected = C64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        assert!((e.lambda[0] - expected).norm() < 1e-15);
    }

    #[test]
    fn eigenpairs_satisfy_definition() {
        for theta in [0.2, FRAC_PI_4, 1.3, 2.5, 4.0, 5.9] {
            let p = walk(theta, 0.0, 1, Preset::Up);
            let uk_of = |k| fourier_coin(&CoinMatrix::reflection(theta), k);
            for j in 0..997 {
                let k = -PI + 2.0 * PI * j as f64 / 997.0;
                let e = eigensystem(&p, k);
                let uk = uk_of(k);
                for n in 0..2 {
                    assert!((e.lambda[n].norm() - 1.0).abs() < 1e-13);
                    assert!((spinor_norm_sqr(&e.v[n]) - 1.0).abs() < 1e-12);
                    let lhs = uk.apply(&e.v[n]);
                    let res = ((lhs[0] - e.lambda[n] * e.v[n][0]).norm_sqr()
                        + (lhs[1] - e.lambda[n] * e.v[n][1]).norm_sqr())
                    .sqrt();
                    assert!(res < 1e-12, "theta={theta} k={k} j={n}: residual {res}");
                }
                assert!((e.lambda[0] * e.lambda[1] + 1.0).norm() < 1e-13);
                assert!(e.coefficient(0, &e.v[1]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cofactor_form_spans_the_same_eigenline() {
        for theta in [0.3, 2.0, 4.4] {
            let p = walk(theta, 0.0, 1, Preset::Up);
            let (s, c) = theta.sin_cos();
            for k in [-3.0, -1.2, 0.0, 0.7, FRAC_PI_2, 2.9] {
                let e = eigensystem(&p, k);
                for j in 0..2 {
                    let alt = cofactor_eigenvector(c, s, k, e.lambda[j]);
                    let overlap = e.coefficient(j, &alt).norm();
                    assert!((overlap - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn projector_powers_match_repeated_products() {
        let p = walk(0.8, 0.0, 1, Preset::Up);
        let u = CoinMatrix::reflection(0.8);
        for k in [-2.2, 0.1, 1.9] {
            let uk = fourier_coin(&u, k);
            let e = eigensystem(&p, k);
            let mut acc = CoinMatrix::IDENTITY;
            for n in 0..30 {
                assert!((e.power(n) - acc).max_abs() < 1e-12, "k={k} n={n}");
                acc = uk * acc;
            }
        }
    }

    #[test]
    fn transform_round_trip_and_plancherel() {
        let p = walk(0.6, 2.1, 4, Preset::Symmetric);
        let s = evolve(&p, &Schedule::HalfTime, 13).unwrap();
        for n in [min_grid(13), 64] {
            let fs = fourier_transform(&s, n);
            assert!((fs.mean_norm_sqr() - s.norm_sqr()).abs() < 1e-12);
            let back = inverse_transform(&fs, 13).unwrap();
            assert!(max_amp_diff(&s, &back) < 1e-13);
        }
    }

    #[test]
    fn grid_too_small_is_an_error() {
        let p = walk(0.6, 2.1, 4, Preset::Symmetric);
        let err = spectral_evolve(&p, &Schedule::HalfTime, 10, 21).unwrap_err();
        assert!(matches!(err, Error::GridTooSmall { n: 21, t: 10, required: 22 }));
    }

    #[test]
    fn spectral_evolve_recovers_initial_state() {
        let p = walk(0.6, 2.1, 4, Preset::Symmetric);
        let s = spectral_evolve(&p, &Schedule::HalfTime, 0, 2).unwrap();
        assert!((s.amplitude(0)[0] - p.alpha()).norm() < 1e-15);
        assert!((s.amplitude(0)[1] - p.beta()).norm() < 1e-15);
    }

    #[test]
    fn spectral_evolve_matches_position_space() {
        let p = walk(FRAC_PI_4, 0.0, 4, Preset::Up);
        let direct = evolve(&p, &Schedule::HalfTime, 9).unwrap();
        let spec = spectral_evolve(&p, &Schedule::HalfTime, 9, min_grid(9)).unwrap();
        assert!(max_amp_diff(&direct, &spec) < 1e-12);

        let direct = evolve(&p, &Schedule::Usual, 100).unwrap();
        let spec = spectral_evolve(&p, &Schedule::Usual, 100, min_grid(100)).unwrap();
        assert!(max_amp_diff(&direct, &spec) < 1e-10);
    }

    #[test]
    fn point_amplitude_matches_position_space() {
        let p = walk(1.1, 2.6, 7, Preset::Symmetric);
        for schedule in [Schedule::Usual, Schedule::HalfTime, "steps:2,9".parse().unwrap()] {
            let direct = evolve(&p, &schedule, 21).unwrap();
            for x in -22..=22 {
                let a = spectral_point_amplitude(&p, &schedule, 21, x);
                let b = direct.amplitude(x);
                assert!((a[0] - b[0]).norm() < 1e-12 && (a[1] - b[1]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn asymptotic_amplitude_examples() {
        let theta = 0.9;
        let theta1 = 2.3;
        let p = walk(theta, theta1, 1, Preset::Symmetric);
        let tr = p.trig();
        let m = tr.s.abs();
        let expected = (tr.mismatch() * tr.s * (1.0 - m)).powi(2) / tr.c.powi(4);
        let got = spinor_norm_sqr(&asymptotic_amplitude(&p, 0, Parity::Even));
        assert!((got - expected).abs() < 1e-15);
        assert_eq!(asymptotic_amplitude(&p, 0, Parity::Odd), [C64::new(0.0, 0.0); 2]);

        let h = walk(FRAC_PI_4, 0.0, 1, Preset::Symmetric);
        let expected = (139.0 - 98.0 * 2f64.sqrt()) / 4.0;
        for x in [-2, 2] {
            let got = spinor_norm_sqr(&asymptotic_amplitude(&h, x, Parity::Even));
            assert!((got - expected).abs() < 1e-14, "x={x}: {got}");
        }
    }

    #[test]
    fn asymptotic_amplitude_is_approached_by_the_walk() {
        // the limit holds up to (-1)^tau and an O(tau^{-1/2}) remainder
        let tau = 1001;
        let p = walk(FRAC_PI_4, 0.0, tau, Preset::Symmetric);
        let sign = if tau % 2 == 0 { 1.0 } else { -1.0 };
        for parity in [Parity::Odd, Parity::Even] {
            let s = evolve(&p, &Schedule::HalfTime, parity.time(tau)).unwrap();
            for x in -5..=5 {
                let lim = asymptotic_amplitude(&p, x, parity);
                let got = s.amplitude(x);
                let err = (got[0] * sign - lim[0]).norm() + (got[1] * sign - lim[1]).norm();
                assert!(err < 0.03, "{parity:?} x={x}: {err}");
            }
        }
    }
}
