//! Snapshot of the localized walk next to the usual walk.
//!
//! ```text
//! cargo run --release -p qwalk --example localization
//! ```

use std::f64::consts::FRAC_PI_4;

use qwalk::coin::{Preset, Schedule, WalkParams};
use qwalk::dynamics::{distribution, evolve};
use qwalk::limits::{theorem1_limit, Parity};

fn main() -> qwalk::Result<()> {
    let [a, b] = Preset::Symmetric.spinor();
    let tau = 249;
    let swapped = WalkParams::new(FRAC_PI_4, 0.0, tau, a, b)?;
    let usual = swapped.with_theta1(FRAC_PI_4);

    let t = Parity::Even.time(tau);
    let loc = distribution(&evolve(&swapped, &Schedule::HalfTime, t)?);
    let hom = distribution(&evolve(&usual, &Schedule::Usual, t)?);

    println!("t = {t}, tau = {tau}, theta = pi/4");
    println!("{:>4} {:>12} {:>12} {:>12}", "x", "swapped", "limit", "usual");
    for x in (-8..=8).step_by(2) {
        println!(
            "{x:>4} {:>12.6} {:>12.6} {:>12.6}",
            loc.get(x),
            theorem1_limit(&swapped, x, Parity::Even),
            hom.get(x)
        );
    }
    let near = |d: &qwalk::dynamics::Distribution| (-10..=10).map(|x| d.get(x)).sum::<f64>();
    println!("mass on |x| <= 10: swapped {:.4}, usual {:.4}", near(&loc), near(&hom));
    Ok(())
}
