//! How finite walks approach the limit laws: point-mass traces, Kolmogorov
//! distance of `X_t / t`, and moments.
//!
//! ```text
//! cargo run --release -p qwalk --example convergence
//! ```

use std::f64::consts::FRAC_PI_4;

use qwalk::analysis::{compare, mass_trace, rescaled_cdf_distance};
use qwalk::coin::{Preset, WalkParams};
use qwalk::limits::{theorem1_limit, Parity};

fn main() -> qwalk::Result<()> {
    let [a, b] = Preset::Symmetric.spinor();
    let params = WalkParams::new(FRAC_PI_4, 0.0, 0, a, b)?;

    let taus = [10, 50, 250, 1000, 1001];
    for (x, parity) in [(1, Parity::Odd), (0, Parity::Even), (2, Parity::Even)] {
        let trace = mass_trace(&params, x, parity, &taus)?;
        let limit = theorem1_limit(&params, x, parity);
        let row: Vec<String> = trace.iter().map(|(tau, v)| format!("tau={tau}: {:+.5}", v - limit)).collect();
        println!("P(X_t={x}) - limit at {parity} times: {}", row.join("  "));
    }

    for t in [401u64, 1601, 4001] {
        let d = rescaled_cdf_distance(&params.with_tau((t - 1) / 2), t)?;
        println!("Kolmogorov distance at t = {t}: {d:.6}");
    }

    let report = compare(&params, 4002, 2)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}
