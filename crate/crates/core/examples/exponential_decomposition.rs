//! Y0 = Y0^β · Y_β for three orders: registry, convolution and KS.
//!
//! cargo run --release --example exponential_decomposition

use selfdecomp::verify::{verify_exponential_decomposition, VerifyConfig};

fn main() -> selfdecomp::Result<()> {
    let cfg = VerifyConfig::default();
    for beta in [0.2, 0.5, 0.8] {
        let r = verify_exponential_decomposition(beta, &cfg)?;
        println!("{} pass={}", r.test_id, r.pass);
        for name in ["registry", "convolution", "ks"] {
            if let Some(s) = r.sub_check(name) {
                println!(
                    "  {name:<12} metric {:.3e} threshold {:.0e}",
                    s["metric"].as_f64().unwrap_or(f64::NAN),
                    s["threshold"].as_f64().unwrap_or(f64::NAN)
                );
            }
        }
    }
    Ok(())
}
