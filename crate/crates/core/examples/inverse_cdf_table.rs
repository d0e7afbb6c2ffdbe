//! Builds the inverse-CDF table of a Fox H residual, caches it on disk and
//! samples from it.
//!
//! cargo run --release --example inverse_cdf_table

use selfdecomp::distributions::{sample_with, DistributionSpec, TableStore};
use selfdecomp::mellin::QuadratureConfig;

fn main() -> selfdecomp::Result<()> {
    let dir = std::env::temp_dir().join("selfdecomp-tables");
    let store = TableStore::with_cache_dir(&dir);
    let spec = DistributionSpec::foxh_residual(1.0, 0.3)?;
    let start = std::time::Instant::now();
    let table = store.get_or_build(spec, 1024, &QuadratureConfig::default())?;
    println!(
        "{spec}: {} knots in {:.2?}, cached under {}",
        table.len(),
        start.elapsed(),
        dir.display()
    );
    for p in [0.001, 0.1, 0.5, 0.9, 0.999] {
        println!("  quantile({p}) = {:.10}", table.quantile(p));
    }
    let draws = sample_with(spec, 100_000, 1, &store)?;
    println!(
        "  mean of 1e5 draws {:.5} (exact 𝓜ρ(2) = {:.5})",
        draws.mean(),
        mean(spec)?
    );
    Ok(())
}

/// E[Y] = 𝓜ρ(2).
fn mean(spec: DistributionSpec) -> selfdecomp::Result<f64> {
    let m = selfdecomp::mellin::analytic_mellin(spec, num_complex::Complex64::new(2.0, 0.0))?;
    Ok(m.value.re)
}
