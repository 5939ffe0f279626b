//! Position-space evolution checked against the Fourier-space route, plus
//! the eigen-structure of the Fourier-space coin.
//!
//! ```text
//! cargo run --release -p qwalk --example spectral_oracle
//! ```

use num_complex::Complex64 as C64;
use qwalk::coin::{Schedule, WalkParams};
use qwalk::dynamics::evolve;
use qwalk::spectral::{eigensystem, k_grid, min_grid, spectral_evolve};

fn main() -> qwalk::Result<()> {
    let s = 0.5f64.sqrt();
    let params = WalkParams::new(0.3, 1.1, 7, C64::new(s, 0.0), C64::new(0.0, s))?;

    for schedule in [Schedule::Usual, Schedule::HalfTime, "steps:3,7,12".parse()?] {
        for t in [1, 30, 200] {
            let direct = evolve(&params, &schedule, t)?;
            let spec = spectral_evolve(&params, &schedule, t, min_grid(t))?;
            let dev = direct
                .iter()
                .map(|(x, a)| {
                    let b = spec.amplitude(x);
                    (a[0] - b[0]).norm().max((a[1] - b[1]).norm())
                })
                .fold(0.0, f64::max);
            println!("schedule {schedule:<14} t = {t:>3}: max amplitude gap {dev:.2e}");
        }
    }

    let mut worst_product: f64 = 0.0;
    let mut worst_modulus: f64 = 0.0;
    for k in k_grid(1000) {
        let e = eigensystem(&params, k);
        worst_product = worst_product.max((e.lambda[0] * e.lambda[1] + 1.0).norm());
        worst_modulus = worst_modulus.max((e.lambda[0].norm() - 1.0).abs().max((e.lambda[1].norm() - 1.0).abs()));
    }
    println!("over 1000 wavenumbers: max |l1 l2 + 1| = {worst_product:.2e}, max ||l| - 1| = {worst_modulus:.2e}");
    Ok(())
}
