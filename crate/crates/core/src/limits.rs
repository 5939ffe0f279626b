//! Closed-form limit laws.
//!
//! * Point masses: `lim P(X_t = x)` along `t = 2 tau + 1` and `t = 2 tau + 2`.
//!   They decay geometrically in `|x|` and sum to the delta mass, not to one.
//! * Weak limit of `X_t / t`: a delta mass at the origin plus an absolutely
//!   continuous density on `(-|c|, |c|)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::coin::{Trig, WalkParams};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Which of the two observation times after the half-time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// `t = 2 tau + 1`
    Odd,
    /// `t = 2 tau + 2`
    Even,
}

impl Parity {
    pub fn time(self, tau: u64) -> u64 {
        match self {
            Parity::Odd => 2 * tau + 1,
            Parity::Even => 2 * tau + 2,
        }
    }

    pub fn of_time(t: u64, tau: u64) -> Result<Parity> {
        if t == 2 * tau + 1 {
            Ok(Parity::Odd)
        } else if t == 2 * tau + 2 {
            Ok(Parity::Even)
        } else {
            Err(Error::TimeNotAroundHalfTime { t, tau })
        }
    }

    /// Half-time that puts `t` at this parity, if any.
    pub fn tau_for(self, t: u64) -> Option<u64> {
        match self {
            Parity::Odd if t % 2 == 1 => Some((t - 1) / 2),
            Parity::Even if t >= 2 && t.is_multiple_of(2) => Some((t - 2) / 2),
            _ => None,
        }
    }

    /// Whether `x` can carry mass at this parity.
    pub fn admits(self, x: i64) -> bool {
        match self {
            Parity::Odd => x.rem_euclid(2) == 1,
            Parity::Even => x.rem_euclid(2) == 0,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            _ => Err(Error::Config(format!("parity must be `odd` or `even`, got `{s}`"))),
        }
    }
}

/// A limiting point mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitMass {
    pub position: i64,
    pub parity: Parity,
    pub value: f64,
}

/// `|a|^2`, `|b|^2` and `a conj(b) + conj(a) b` for one ordering of the spinor.
#[derive(Debug, Clone, Copy)]
struct Weights {
    first: f64,
    second: f64,
    cross: f64,
}

impl Weights {
    fn new(a: C64, b: C64) -> Self {
        Weights {
            first: a.norm_sqr(),
            second: b.norm_sqr(),
            cross: 2.0 * (a * b.conj()).re,
        }
    }

    /// `(alpha, beta)` for `x > 0`, `(beta, alpha)` for `x < 0`.
    fn oriented(params: &WalkParams, x: i64) -> Self {
        if x < 0 {
            Weights::new(params.beta(), params.alpha())
        } else {
            Weights::new(params.alpha(), params.beta())
        }
    }
}

fn sign(x: i64) -> f64 {
    x.signum() as f64
}

fn k1(x: i64, w: Weights, t: &Trig) -> f64 {
    let (c, s, m) = (t.c, t.s, t.s.abs());
    c * c * w.first + 2.0 * s * s * (1.0 - m) * w.second + sign(x) * c * s * (1.0 - m) * w.cross
}

fn k2(x: i64, w: Weights, t: &Trig) -> f64 {
    let (c, s, m) = (t.c, t.s, t.s.abs());
    c * c * s * w.first + s * (1.0 - m).powi(2) * w.second
        - sign(x) * c * m * (1.0 - m) * w.cross
}

fn k3(x: i64, w: Weights, t: &Trig) -> f64 {
    let (c, s, m) = (t.c, t.s, t.s.abs());
    c * c * (1.0 - s * s * m * (2.0 - m)) * w.first
        + 2.0 * s * s * (1.0 - m).powi(3) * w.second
        + sign(x) * c * s * (1.0 + s * s) * (1.0 - m).powi(2) * w.cross
}

fn k4(x: i64, w: Weights, t: &Trig) -> f64 {
    let (c, s, m) = (t.c, t.s, t.s.abs());
    s * s * (w.first - w.second) - sign(x) * c * s * w.cross + m
}

/// Geometric decay ratio per unit of `|x|`: `((1 - |s|)/c)^2`.
fn decay(t: &Trig) -> f64 {
    ((1.0 - t.s.abs()) / t.c).powi(2)
}

/// `lim P(X_t = x)` as `tau -> infinity` with `t` of the given parity.
pub fn theorem1_limit(params: &WalkParams, x: i64, parity: Parity) -> f64 {
    if !parity.admits(x) {
        return 0.0;
    }
    let t = params.trig();
    let (c, s, m) = (t.c, t.s, t.s.abs());
    let d2 = t.mismatch().powi(2);
    let w = Weights::oriented(params, x);
    let geometric = decay(&t).powi(x.unsigned_abs() as i32);
    match parity {
        Parity::Odd => match x.abs() {
            1 => d2 * (1.0 - m).powi(2) / c.powi(6) * k1(x, w, &t),
            _ => 2.0 * d2 * s / (c.powi(4) * (1.0 - m)) * geometric * k2(x, w, &t),
        },
        Parity::Even => match x.abs() {
            0 => d2 * s * s * (1.0 - m).powi(2) / c.powi(4),
            2 => d2 * (1.0 - m).powi(2) / c.powi(8) * k3(x, w, &t),
            _ => 2.0 * d2 * m / c.powi(4) * geometric * k4(x, w, &t),
        },
    }
}

/// Limit masses for `-xmax..=xmax`.
pub fn limit_masses(params: &WalkParams, parity: Parity, xmax: u64) -> Vec<LimitMass> {
    let xmax = xmax as i64;
    (-xmax..=xmax)
        .map(|x| LimitMass { position: x, parity, value: theorem1_limit(params, x, parity) })
        .collect()
}

/// `sum_x lim P(X_t = x)`, with the geometric tails summed in closed form.
pub fn limit_mass_total(params: &WalkParams, parity: Parity) -> f64 {
    let t = params.trig();
    let (c, s, m) = (t.c, t.s, t.s.abs());
    let d2 = t.mismatch().powi(2);
    let rho = decay(&t);
    let pos = Weights::oriented(params, 1);
    let neg = Weights::oriented(params, -1);
    match parity {
        Parity::Odd => {
            let near = theorem1_limit(params, -1, parity) + theorem1_limit(params, 1, parity);
            // sum over x = 3, 5, 7, ... of rho^x
            let tail = rho.powi(3) / (1.0 - rho * rho);
            let coeff = 2.0 * d2 * s / (c.powi(4) * (1.0 - m));
            near + coeff * tail * (k2(3, pos, &t) + k2(-3, neg, &t))
        }
        Parity::Even => {
            let near = theorem1_limit(params, 0, parity)
                + theorem1_limit(params, -2, parity)
                + theorem1_limit(params, 2, parity);
            let tail = rho.powi(4) / (1.0 - rho * rho);
            let coeff = 2.0 * d2 * m / c.powi(4);
            near + coeff * tail * (k4(4, pos, &t) + k4(-4, neg, &t))
        }
    }
}

/// Mass of the atom at the origin in the weak limit, `(c1 s - s1 c)^2 / (1 + |s|)`.
pub fn delta_mass(params: &WalkParams) -> f64 {
    let t = params.trig();
    t.mismatch().powi(2) / (1.0 + t.s.abs())
}

/// The weak limit of `X_t / t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitDensity {
    pub delta_mass: f64,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    c: f64,
    s: f64,
    /// Coefficient of `x` in the initial-state weight `1 - slope * x`.
    slope: f64,
}

impl LimitDensity {
    pub fn new(params: &WalkParams) -> Self {
        let t = params.trig();
        let d = t.mismatch();
        let w = Weights::new(params.alpha(), params.beta());
        LimitDensity {
            delta_mass: delta_mass(params),
            a0: t.c * t.c,
            a1: 2.0 * t.s1 * t.c * d - t.c1 * t.c1,
            a2: d * d,
            c: t.c,
            s: t.s,
            slope: w.first - w.second + w.cross * t.s / t.c,
        }
    }

    /// Half-width `|c|` of the support.
    pub fn edge(&self) -> f64 {
        self.c.abs()
    }

    /// `1 - (|a|^2 - |b|^2 + (a conj(b) + conj(a) b) s / c) x`
    pub fn weight(&self, x: f64) -> f64 {
        1.0 - self.slope * x
    }

    /// `(a2 x^4 + a1 x^2 + a0) / (c^2 (1 - x^2))`, identically one when the
    /// coins coincide.
    pub fn correction(&self, x: f64) -> f64 {
        let x2 = x * x;
        (self.a2 * x2 * x2 + self.a1 * x2 + self.a0) / (self.c * self.c * (1.0 - x2))
    }

    /// Density of the usual walk (no coin swap) with the same weight.
    pub fn usual_density(&self, x: f64) -> f64 {
        if x.abs() >= self.edge() {
            return 0.0;
        }
        self.s.abs() / (PI * (1.0 - x * x) * (self.c * self.c - x * x).sqrt()) * self.weight(x)
    }

    /// Absolutely continuous part of the weak limit at `x`.
    pub fn ac(&self, x: f64) -> Result<f64> {
        if x.abs() == self.edge() {
            return Err(Error::DensitySingular { x });
        }
        if x.abs() > self.edge() {
            return Ok(0.0);
        }
        Ok(self.usual_density(x) * self.correction(x))
    }

    /// The density after `x = |c| sin u`; the inverse square root cancels
    /// against the Jacobian, leaving a smooth function of `u`.
    fn ac_in_angle(&self, u: f64) -> f64 {
        let x = self.edge() * u.sin();
        self.s.abs() / (PI * (1.0 - x * x)) * self.weight(x) * self.correction(x)
    }

    /// `int_lo^hi x^r f_ac(x) dx`, clipped to the support.
    pub fn ac_moment_between(&self, lo: f64, hi: f64, r: u32) -> f64 {
        let e = self.edge();
        let to_angle = |x: f64| (x / e).clamp(-1.0, 1.0).asin();
        let (ul, uh) = (to_angle(lo), to_angle(hi));
        if uh <= ul {
            return 0.0;
        }
        GaussLegendre::standard().integrate(ul, uh, |u| {
            let x = e * u.sin();
            x.powi(r as i32) * self.ac_in_angle(u)
        })
    }

    /// Total mass of the absolutely continuous part.
    pub fn ac_mass(&self) -> f64 {
        self.ac_moment_between(-self.edge(), self.edge(), 0)
    }

    /// `P(Y <= x)` for the limit law `Y`.
    pub fn cdf(&self, x: f64) -> f64 {
        let atom = if x >= 0.0 { self.delta_mass } else { 0.0 };
        if x <= -self.edge() {
            return atom;
        }
        let ac = if x >= self.edge() {
            self.ac_mass()
        } else {
            self.ac_moment_between(-self.edge(), x, 0)
        };
        atom + ac
    }

    /// `P(Y < x)`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        if x == 0.0 {
            self.cdf(0.0) - self.delta_mass
        } else {
            self.cdf(x)
        }
    }

    /// `E[Y^r] = 0^r Delta + int x^r f_ac(x) dx`.
    pub fn moment(&self, r: u32) -> f64 {
        let atom = if r == 0 { self.delta_mass } else { 0.0 };
        atom + self.ac_moment_between(-self.edge(), self.edge(), r)
    }
}

/// Absolutely continuous part of the weak-limit density at `x`. The atom at
/// the origin is reported by [`delta_mass`].
pub fn theorem2_density(params: &WalkParams, x: f64) -> Result<f64> {
    LimitDensity::new(params).ac(x)
}

pub fn limit_cdf(params: &WalkParams, x: f64) -> f64 {
    LimitDensity::new(params).cdf(x)
}
