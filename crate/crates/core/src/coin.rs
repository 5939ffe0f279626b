//! Walk parameters and the coin matrices.
//!
//! Both coins come from the real one-parameter reflection family
//!
//! ```text
//! C(theta) = [ cos(theta)   sin(theta) ]
//!            [ sin(theta)  -cos(theta) ]
//! ```
//!
//! The default coin `U` uses `theta`, the alternate coin `H` uses `theta1`.
//! Each coin is split into `P` (top row, moves the walker left) and `Q`
//! (bottom row, moves the walker right) so that `P + Q` is the coin.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-component coin amplitude `[up, down]`.
pub type Spinor = [C64; 2];

/// Default distance (radians) from 0, pi/2, pi, 3pi/2 under which `theta`
/// is rejected.
pub const DEFAULT_ANGLE_TOLERANCE: f64 = 1e-9;

/// Spinors within this distance of unit norm are accepted as-is.
const NORM_EXACT: f64 = 1e-12;
/// Spinors within this distance of unit norm are renormalized; beyond it
/// they are rejected.
const NORM_RENORMALIZE: f64 = 1e-9;

/// Full problem specification: both coin angles, the half-time and the
/// initial spinor at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    theta: f64,
    theta1: f64,
    tau: u64,
    alpha: C64,
    beta: C64,
}

impl WalkParams {
    pub fn new(theta: f64, theta1: f64, tau: u64, alpha: C64, beta: C64) -> Result<Self> {
        Self::with_tolerance(theta, theta1, tau, alpha, beta, DEFAULT_ANGLE_TOLERANCE)
    }

    /// Like [`WalkParams::new`] with an explicit excluded-angle tolerance.
    pub fn with_tolerance(
        theta: f64,
        theta1: f64,
        tau: u64,
        alpha: C64,
        beta: C64,
        angle_tolerance: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("theta", theta),
            ("theta1", theta1),
            ("alpha_re", alpha.re),
            ("alpha_im", alpha.im),
            ("beta_re", beta.re),
            ("beta_im", beta.im),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        let r = theta.rem_euclid(FRAC_PI_2);
        if r.min(FRAC_PI_2 - r) < angle_tolerance {
            return Err(Error::ExcludedAngle { theta, tolerance: angle_tolerance });
        }
        let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
        let (alpha, beta) = if (norm_sq - 1.0).abs() <= NORM_EXACT {
            (alpha, beta)
        } else if (norm_sq - 1.0).abs() <= NORM_RENORMALIZE {
            let n = norm_sq.sqrt();
            (alpha / n, beta / n)
        } else {
            return Err(Error::NotNormalized { norm_sq });
        };
        Ok(WalkParams { theta, theta1, tau, alpha, beta })
    }

    /// Same walk with a different half-time.
    pub fn with_tau(mut self, tau: u64) -> Self {
        self.tau = tau;
        self
    }

    /// Same walk with a different alternate-coin angle.
    pub fn with_theta1(mut self, theta1: f64) -> Self {
        self.theta1 = theta1;
        self
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn theta1(&self) -> f64 {
        self.theta1
    }
    pub fn tau(&self) -> u64 {
        self.tau
    }
    pub fn alpha(&self) -> C64 {
        self.alpha
    }
    pub fn beta(&self) -> C64 {
        self.beta
    }
    pub fn spinor(&self) -> Spinor {
        [self.alpha, self.beta]
    }

    /// `(c, s, c1, s1)`.
    pub fn trig(&self) -> Trig {
        Trig {
            c: self.theta.cos(),
            s: self.theta.sin(),
            c1: self.theta1.cos(),
            s1: self.theta1.sin(),
        }
    }
}

/// Cosines and sines of both coin angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trig {
    pub c: f64,
    pub s: f64,
    pub c1: f64,
    pub s1: f64,
}

impl Trig {
    /// `c1*s - s1*c`, i.e. `sin(theta - theta1)`. Every localized quantity
    /// carries its square as a prefactor.
    pub fn mismatch(&self) -> f64 {
        self.c1 * self.s - self.s1 * self.c
    }
}

/// The two initial states used throughout the figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// `(1/sqrt2, i/sqrt2)`
    Symmetric,
    /// `(1, 0)`
    Up,
}

impl Preset {
    pub fn spinor(self) -> Spinor {
        match self {
            Preset::Symmetric => [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2)],
            Preset::Up => [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        }
    }
}

/// Which steps use the alternate coin `H`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Schedule {
    /// `H` is never applied.
    Usual,
    /// `H` drives the single transition from time `tau` to `tau + 1`.
    #[default]
    HalfTime,
    /// `H` drives the transition out of every listed time. No limit theorem
    /// is known for more than one swap.
    Steps(BTreeSet<u64>),
}

impl Schedule {
    /// Whether the transition `t -> t+1` uses `H` for a walk with half-time `tau`.
    pub fn uses_alternate(&self, t: u64, tau: u64) -> bool {
        match self {
            Schedule::Usual => false,
            Schedule::HalfTime => t == tau,
            Schedule::Steps(steps) => steps.contains(&t),
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Usual => f.write_str("usual"),
            Schedule::HalfTime => f.write_str("half"),
            Schedule::Steps(steps) => {
                f.write_str("steps:")?;
                let list: Vec<String> = steps.iter().map(u64::to_string).collect();
                f.write_str(&list.join(","))
            }
        }
    }
}

impl std::str::FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "usual" => Ok(Schedule::Usual),
            "half" | "half-time" | "single-half-time" => Ok(Schedule::HalfTime),
            _ => {
                let list = s
                    .strip_prefix("steps:")
                    .ok_or_else(|| Error::Config(format!("unknown schedule `{s}`")))?;
                let steps = list
                    .split(',')
                    .filter(|p| !p.is_empty())
                    .map(|p| {
                        p.trim()
                            .parse::<u64>()
                            .map_err(|e| Error::Config(format!("bad step `{p}` in schedule: {e}")))
                    })
                    .collect::<Result<BTreeSet<u64>>>()?;
                Ok(Schedule::Steps(steps))
            }
        }
    }
}

/// A 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix(pub [[C64; 2]; 2]);

impl CoinMatrix {
    pub const ZERO: CoinMatrix = CoinMatrix([[C64::new(0.0, 0.0); 2]; 2]);
    pub const IDENTITY: CoinMatrix = CoinMatrix([
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ]);

    pub fn real(m: [[f64; 2]; 2]) -> Self {
        CoinMatrix([
            [C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)],
            [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)],
        ])
    }

    /// The reflection coin of angle `theta`.
    pub fn reflection(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::real([[c, s], [s, -c]])
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    pub fn apply(&self, v: &Spinor) -> Spinor {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        CoinMatrix([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        CoinMatrix([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |(M^dagger M - I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self - Self::IDENTITY).max_abs()
    }

    pub fn scale(&self, z: C64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|e| *e *= z);
        out
    }
}

impl Mul for CoinMatrix {
    type Output = CoinMatrix;

    #[allow(clippy::needless_range_loop)]
    fn mul(self, rhs: CoinMatrix) -> CoinMatrix {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = CoinMatrix::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }
}

impl Add for CoinMatrix {
    type Output = CoinMatrix;

    fn add(self, rhs: CoinMatrix) -> CoinMatrix {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl std::ops::Sub for CoinMatrix {
    type Output = CoinMatrix;

    fn sub(self, rhs: CoinMatrix) -> CoinMatrix {
        self + rhs.scale(C64::new(-1.0, 0.0))
    }
}

/// The pair of split matrices driving one step: `P` acts on the amplitude
/// arriving from `x+1`, `Q` on the one arriving from `x-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCoin {
    pub p: CoinMatrix,
    pub q: CoinMatrix,
}

impl SplitCoin {
    fn of(coin: &CoinMatrix) -> Self {
        let z = C64::new(0.0, 0.0);
        let m = &coin.0;
        SplitCoin {
            p: CoinMatrix([[m[0][0], m[0][1]], [z, z]]),
            q: CoinMatrix([[z, z], [m[1][0], m[1][1]]]),
        }
    }
}

/// Every matrix the walk needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coins {
    pub u: CoinMatrix,
    pub h: CoinMatrix,
    pub default_split: SplitCoin,
    pub alternate_split: SplitCoin,
}

impl Coins {
    pub fn p(&self) -> CoinMatrix {
        self.default_split.p
    }
    pub fn q(&self) -> CoinMatrix {
        self.default_split.q
    }
    pub fn p1(&self) -> CoinMatrix {
        self.alternate_split.p
    }
    pub fn q1(&self) -> CoinMatrix {
        self.alternate_split.q
    }

    /// The split pair used for the transition `t -> t+1`.
    pub fn split_at(&self, schedule: &Schedule, t: u64, tau: u64) -> &SplitCoin {
        if schedule.uses_alternate(t, tau) {
            &self.alternate_split
        } else {
            &self.default_split
        }
    }
}

pub fn build_coins(params: &WalkParams) -> Coins {
    let u = CoinMatrix::reflection(params.theta);
    let h = CoinMatrix::reflection(params.theta1);
    Coins {
        u,
        h,
        default_split: SplitCoin::of(&u),
        alternate_split: SplitCoin::of(&h),
    }
}

/// `R(k) * coin` with `R(k) = diag(e^{ik}, e^{-ik})`.
pub fn fourier_coin(coin: &CoinMatrix, k: f64) -> CoinMatrix {
    let up = C64::from_polar(1.0, k);
    let down = up.conj();
    let m = &coin.0;
    CoinMatrix([[up * m[0][0], up * m[0][1]], [down * m[1][0], down * m[1][1]]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn params(theta: f64, theta1: f64) -> WalkParams {
        let [a, b] = Preset::Symmetric.spinor();
        WalkParams::new(theta, theta1, 3, a, b).unwrap()
    }

    fn assert_mat_close(a: &CoinMatrix, b: &CoinMatrix, tol: f64) {
        let d = (*a - *b).max_abs();
        assert!(d <= tol, "matrices differ by {d}: {a:?} vs {b:?}");
    }

    #[test]
    fn hadamard_at_quarter_pi() {
        let coins = build_coins(&params(FRAC_PI_4, 0.0));
        let r = FRAC_1_SQRT_2;
        assert_mat_close(&coins.u, &CoinMatrix::real([[r, r], [r, -r]]), 1e-15);
    }

    #[test]
    fn alternate_coin_at_zero_is_pauli_z() {
        let coins = build_coins(&params(FRAC_PI_4, 0.0));
        assert_eq!(coins.h, CoinMatrix::real([[1.0, 0.0], [0.0, -1.0]]));
    }

    #[test]
    fn excluded_angles_are_rejected() {
        let [a, b] = Preset::Up.spinor();
        for theta in [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2, 2.0 * PI, FRAC_PI_2 + 5e-10] {
            let err = WalkParams::new(theta, 0.0, 1, a, b).unwrap_err();
            assert!(matches!(err, Error::ExcludedAngle { .. }), "theta={theta}: {err}");
        }
        assert!(WalkParams::new(FRAC_PI_2 + 1e-8, 0.0, 1, a, b).is_ok());
        // theta1 is unrestricted
        assert!(WalkParams::new(FRAC_PI_4, FRAC_PI_2, 1, a, b).is_ok());
        // custom tolerance
        let err = WalkParams::with_tolerance(FRAC_PI_2 + 1e-4, 0.0, 1, a, b, 1e-3).unwrap_err();
        assert!(matches!(err, Error::ExcludedAngle { .. }));
    }

    #[test]
    fn normalization_is_checked_separately() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let err = WalkParams::new(FRAC_PI_4, 0.0, 1, one * 1.1, zero).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
        // small drift is renormalized
        let p = WalkParams::new(FRAC_PI_4, 0.0, 1, one * (1.0 + 1e-10), zero).unwrap();
        assert!((p.alpha().norm_sqr() - 1.0).abs() < 1e-15);
        let err = WalkParams::new(f64::NAN, 0.0, 1, one, zero).unwrap_err();
        assert!(matches!(err, Error::NonFinite("theta")));
    }

    #[test]
    fn splits_sum_to_coins() {
        for i in 1..200 {
            let theta = i as f64 * 0.0313;
            let Ok(p) = WalkParams::new(theta, theta * 1.7, 1, C64::new(1.0, 0.0), C64::new(0.0, 0.0))
            else {
                continue;
            };
            let coins = build_coins(&p);
            assert!((coins.p() + coins.q() - coins.u).max_abs() <= 1e-15);
            assert!((coins.p1() + coins.q1() - coins.h).max_abs() <= 1e-15);
            assert_eq!(coins.p().0[1], [C64::new(0.0, 0.0); 2]);
            assert_eq!(coins.q().0[0], [C64::new(0.0, 0.0); 2]);
            for m in [coins.u, coins.h] {
                assert!(m.unitarity_defect() < 1e-15);
                assert_eq!(m, m.transpose());
                assert!((m.det() + 1.0).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn fourier_coin_examples() {
        let u = CoinMatrix::reflection(FRAC_PI_4);
        assert_eq!(fourier_coin(&u, 0.0), u);

        let r = FRAC_1_SQRT_2;
        let expected = CoinMatrix([
            [C64::new(0.0, r), C64::new(0.0, r)],
            [C64::new(0.0, -r), C64::new(0.0, r)],
        ]);
        assert_mat_close(&fourier_coin(&u, FRAC_PI_2), &expected, 1e-15);
    }

    #[test]
    fn fourier_coin_is_unitary_and_periodic_in_theta() {
        for theta in [0.3, FRAC_PI_4, 2.0, 4.1] {
            let u = CoinMatrix::reflection(theta);
            let u_wrapped = CoinMatrix::reflection(theta + 2.0 * PI);
            for j in 0..1000 {
                let k = -PI + 2.0 * PI * j as f64 / 1000.0;
                let uk = fourier_coin(&u, k);
                assert!(uk.unitarity_defect() < 1e-13);
                assert_mat_close(&uk, &fourier_coin(&u_wrapped, k), 1e-14);
            }
        }
    }

    #[test]
    fn schedule_parsing_and_dispatch() {
        assert_eq!("usual".parse::<Schedule>().unwrap(), Schedule::Usual);
        assert_eq!("half".parse::<Schedule>().unwrap(), Schedule::HalfTime);
        let s: Schedule = "steps:3,7".parse().unwrap();
        assert!(s.uses_alternate(3, 0) && s.uses_alternate(7, 0) && !s.uses_alternate(5, 5));
        assert_eq!(s.to_string(), "steps:3,7");
        assert!(Schedule::HalfTime.uses_alternate(4, 4));
        assert!(!Schedule::HalfTime.uses_alternate(3, 4));
        assert!("sometimes".parse::<Schedule>().is_err());
        assert!("steps:1,x".parse::<Schedule>().is_err());
    }

    #[test]
    fn single_step_set_matches_half_time() {
        let coins = build_coins(&params(0.4, 1.3));
        let steps = Schedule::Steps([5].into_iter().collect());
        for t in 0..20 {
            assert_eq!(
                coins.split_at(&steps, t, 5),
                coins.split_at(&Schedule::HalfTime, t, 5)
            );
        }
    }
}
