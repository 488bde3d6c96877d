//! Certified intervals for k_m and the growth of the conditionality envelope.

use lindy::basis::BasisContext;
use lindy::conditionality::{bound_report, complement_bounds, envelope_check};
use lindy::indexing::DeltaSpec;
use lindy::sparse::PContext;

fn main() -> lindy::error::Result<()> {
    for p in [1.0, 0.5] {
        let b: BasisContext<f64> =
            BasisContext::from_delta(DeltaSpec::constant(2)?, 1 << 16, PContext::new(p)?)?;
        println!("p = {p}");
        for m in [2, 8, 64, 1024] {
            let r = bound_report(&b, m)?;
            let upper = r.certified_upper.unwrap_or(f64::INFINITY);
            let (lo_c, hi_c) = complement_bounds(b.ctx(), (r.witnessed_lower, upper));
            println!(
                "  m = {m:>5}: Gamma = {:>2}, k_m in [{:.3}, {:.3}], k_m^c in [{lo_c:.3}, {hi_c:.3}]",
                r.gamma, r.witnessed_lower, upper
            );
        }
        let env = envelope_check(&b, &[16, 256, 4096])?;
        println!(
            "  (ln m)^(1/p) ratios: lower {:.3}, upper {:.3}",
            env.lower_over_log,
            env.upper_over_log.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
