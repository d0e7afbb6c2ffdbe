//! Z_r = Z_r^α · Y_{α,r} with the Fox H residual, and the same check with a
//! deliberately wrong residual (r + 0.5), which must fail.
//!
//! cargo run --release --example gamma_decomposition

use selfdecomp::distributions::DistributionSpec;
use selfdecomp::verify::{
    verify_gamma_decomposition, verify_gamma_decomposition_with_residual, VerifyConfig,
};

fn main() -> selfdecomp::Result<()> {
    let cfg = VerifyConfig::default();
    let (r, alpha) = (2.5, 0.7);
    let good = verify_gamma_decomposition(r, alpha, &cfg)?;
    let wrong = DistributionSpec::foxh_residual(r + 0.5, alpha)?;
    let bad = verify_gamma_decomposition_with_residual(r, alpha, wrong, &cfg)?;
    for rep in [good, bad] {
        println!("{} pass={}", rep.test_id, rep.pass);
        for name in ["registry", "convolution", "ks"] {
            println!("  {name:<12} pass={:?}", rep.sub_check_passed(name));
        }
    }
    Ok(())
}
