#![allow(dead_code)]

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use qwalk::coin::{Preset, WalkParams};
use std::f64::consts::{FRAC_PI_2, TAU};

pub fn preset(theta: f64, theta1: f64, tau: u64, preset: Preset) -> WalkParams {
    let [a, b] = preset.spinor();
    WalkParams::new(theta, theta1, tau, a, b).unwrap()
}

/// Coin angle at least `margin` away from the excluded values.
pub fn angle(margin: f64) -> impl Strategy<Value = f64> {
    (0.0..TAU).prop_filter("excluded angle", move |t| {
        let r = t.rem_euclid(FRAC_PI_2);
        r.min(FRAC_PI_2 - r) > margin
    })
}

pub fn spinor() -> impl Strategy<Value = [C64; 2]> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("degenerate", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            [C64::new(v[0] / n, v[1] / n), C64::new(v[2] / n, v[3] / n)]
        })
}

pub fn params(margin: f64) -> impl Strategy<Value = WalkParams> {
    (angle(margin), 0.0..TAU, 0u64..64, spinor())
        .prop_map(|(theta, theta1, tau, [a, b])| WalkParams::new(theta, theta1, tau, a, b).unwrap())
}

/// `n` reproducible draws from `strategy`.
pub fn sample<S: Strategy>(strategy: S, n: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).expect("strategy draws").current())
        .collect()
}
