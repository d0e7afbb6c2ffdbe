//! The orbit z → αz + (1-α) and the ratio h(z) along it, for each
//! characterization.
//!
//! cargo run --example characterization_orbits

use num_complex::Complex64;
use selfdecomp::verify::{characterization_iteration, CharacterizationKind};

fn main() -> selfdecomp::Result<()> {
    let kinds = [
        CharacterizationKind::Exponential { beta: 0.5 },
        CharacterizationKind::Gamma { r: 2.5, alpha: 0.3 },
        CharacterizationKind::Gaussian { alpha: 0.7 },
    ];
    for kind in kinds {
        let t = characterization_iteration(kind, Complex64::new(3.0, 2.0), 40)?;
        println!("{kind:?}: limit h(1) = {:.15}", t.limit.re);
        for k in [0, 1, 2, 5, 10, 20, 40] {
            println!(
                "  z_{k:<2} = {:>32.15}   h = {:.15}",
                t.orbit[k], t.h_values[k]
            );
        }
        println!(
            "  contraction error {:.1e}, max |h - h(1)| {:.1e}",
            t.contraction_error, t.h_deviation
        );
    }
    Ok(())
}
