//! The same walk under the three coin schedules. Swapping the coin more than
//! once has no known limit theorem; this only shows the data.
//!
//! ```text
//! cargo run --release -p qwalk --example schedules
//! ```

use std::f64::consts::FRAC_PI_4;

use qwalk::coin::{Preset, Schedule, WalkParams};
use qwalk::dynamics::{distribution, evolve};

fn main() -> qwalk::Result<()> {
    let [a, b] = Preset::Symmetric.spinor();
    let params = WalkParams::new(FRAC_PI_4, 0.0, 100, a, b)?;
    let t = 202;
    for schedule in [Schedule::Usual, Schedule::HalfTime, "steps:50,100,150".parse()?] {
        let d = distribution(&evolve(&params, &schedule, t)?);
        let centre: f64 = (-10..=10).map(|x| d.get(x)).sum();
        println!("{:<18} t = {t}: P(|X_t| <= 10) = {centre:.5}, P(X_t = 0) = {:.5}", schedule.to_string(), d.get(0));
    }
    Ok(())
}
