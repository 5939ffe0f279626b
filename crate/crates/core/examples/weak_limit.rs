//! The weak limit of `X_t / t`: atom, density, distribution function and
//! moments.
//!
//! ```text
//! cargo run --release -p qwalk --example weak_limit
//! ```

use std::f64::consts::FRAC_PI_4;

use qwalk::coin::{Preset, WalkParams};
use qwalk::limits::LimitDensity;

fn main() -> qwalk::Result<()> {
    for (theta1, label) in [(0.0, "theta1 = 0"), (FRAC_PI_4, "theta1 = theta")] {
        let [a, b] = Preset::Up.spinor();
        let params = WalkParams::new(FRAC_PI_4, theta1, 0, a, b)?;
        let law = LimitDensity::new(&params);
        println!("{label}: delta = {:.9}, a0 = {:.6}, a1 = {:.6}, a2 = {:.6}", law.delta_mass, law.a0, law.a1, law.a2);
        println!("  delta + continuous mass = {:.12}", law.delta_mass + law.ac_mass());
        for x in [-0.6, -0.3, 0.0, 0.3, 0.6] {
            println!("  f_ac({x:>5}) = {:>10.6}   F({x:>5}) = {:.6}", law.ac(x)?, law.cdf(x));
        }
        let moments: Vec<String> = (0..=4).map(|r| format!("{:.6}", law.moment(r))).collect();
        println!("  moments r = 0..4: {}", moments.join(", "));
    }
    Ok(())
}
