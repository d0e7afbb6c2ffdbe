//! |U| = |U|^α · X_α: the Wright and H-function forms of ρ_{X_α}, its
//! Mellin transform and normalization, and the product law. The report is
//! printed as JSON.
//!
//! cargo run --release --example gaussian_decomposition [alpha]

use selfdecomp::verify::{verify_gaussian_decomposition, VerifyConfig};

fn main() -> selfdecomp::Result<()> {
    let alpha = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(0.5);
    let r = verify_gaussian_decomposition(alpha, &VerifyConfig::default())?;
    println!("{}", serde_json::to_string_pretty(&r)?);
    Ok(())
}
