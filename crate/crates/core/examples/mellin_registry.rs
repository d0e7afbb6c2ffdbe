//! Closed-form Mellin transforms next to quadrature, for every family.
//!
//! cargo run --example mellin_registry

use num_complex::Complex64;
use selfdecomp::distributions::DistributionSpec;
use selfdecomp::mellin::{analytic_mellin, numeric_mellin, strip_of, QuadratureConfig};

fn main() -> selfdecomp::Result<()> {
    let specs = [
        DistributionSpec::exponential(),
        DistributionSpec::gamma(2.5)?,
        DistributionSpec::weibull(0.7)?,
        DistributionSpec::one_sided_stable(0.5)?,
        DistributionSpec::m_wright(0.3)?,
        DistributionSpec::foxh_residual(0.5, 0.7)?,
        DistributionSpec::gaussian_residual(0.5)?,
        DistributionSpec::half_normal(),
    ];
    let z = Complex64::new(1.25, 0.75);
    let cfg = QuadratureConfig::default();
    for spec in specs {
        let strip = strip_of(spec);
        let exact = analytic_mellin(spec, z)?;
        let num = numeric_mellin(&spec, z, strip, &cfg)?;
        println!(
            "{spec:<36} strip {strip:<14} closed {:.12} quadrature {:.12} (rel. diff {:.1e})",
            exact.value,
            num.value,
            (num.value - exact.value).norm() / exact.value.norm()
        );
    }
    Ok(())
}
