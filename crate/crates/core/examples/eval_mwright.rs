//! M-Wright densities for a few orders, with the β = 1/2 closed form
//! e^{-t²/4}/√π alongside.
//!
//! cargo run --example eval_mwright

use selfdecomp::specfun::{m_wright, MWrightParams, SeriesConfig};

fn main() -> selfdecomp::Result<()> {
    let cfg = SeriesConfig::default();
    let betas = [0.2, 0.5, 0.8];
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>14}",
        "t", "M_0.2", "M_0.5", "M_0.8", "closed 1/2"
    );
    for i in 0..=12 {
        let t = 0.5 * i as f64;
        print!("{t:>6.2}");
        for &b in &betas {
            print!(" {:>14.8e}", m_wright(MWrightParams::new(b)?, t, &cfg)?);
        }
        let exact = (-t * t / 4.0).exp() / std::f64::consts::PI.sqrt();
        println!(" {exact:>14.8e}");
    }
    Ok(())
}
