//! Limiting point masses around the origin and their total.
//!
//! ```text
//! cargo run --release -p qwalk --example point_masses
//! ```

use std::f64::consts::FRAC_PI_4;

use qwalk::coin::{Preset, WalkParams};
use qwalk::limits::{delta_mass, limit_mass_total, limit_masses, Parity};
use qwalk::spectral::asymptotic_amplitude;
use qwalk::dynamics::spinor_norm_sqr;

fn main() -> qwalk::Result<()> {
    for preset in [Preset::Symmetric, Preset::Up] {
        let [a, b] = preset.spinor();
        let params = WalkParams::new(FRAC_PI_4, 0.0, 0, a, b)?;
        println!("initial state {preset:?}");
        for parity in [Parity::Odd, Parity::Even] {
            println!("  {parity} times:");
            for m in limit_masses(&params, parity, 6).into_iter().filter(|m| m.value > 0.0) {
                let amp = spinor_norm_sqr(&asymptotic_amplitude(&params, m.position, parity));
                println!("    x = {:>3}: {:.9}  (from limiting amplitude {:.9})", m.position, m.value, amp);
            }
            println!("    total {:.12}", limit_mass_total(&params, parity));
        }
        println!("  delta mass {:.12}  (1/(2+sqrt 2) = {:.12})", delta_mass(&params), 1.0 / (2.0 + 2f64.sqrt()));
    }
    Ok(())
}
