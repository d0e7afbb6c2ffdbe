//! The Laplace transform of M_β is E_β(-s), and
//! ∫ e^{-x} E_β(-x^β t) dx = 1/(1+t).
//!
//! cargo run --example laplace_pairs

use selfdecomp::verify::{laplace_pair_check, VerifyConfig};

fn main() -> selfdecomp::Result<()> {
    let cfg = VerifyConfig::default();
    for beta in [0.2, 0.5, 0.8, 1.0] {
        let r = laplace_pair_check(beta, &[0.5, 1.0, 2.0], &cfg)?;
        println!(
            "{} pass={} worst/threshold={:.2e}",
            r.test_id, r.pass, r.metric
        );
    }
    Ok(())
}
