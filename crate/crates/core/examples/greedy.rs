//! One greedy step and a small quasi-greedy scan.

use lindy::basis::{BasisContext, CoefficientVector};
use lindy::greedy::{
    greedy_projection, quasi_greedy_bounds, quasi_greedy_scan, restricted_truncation,
};
use lindy::indexing::DeltaSpec;
use lindy::sparse::{PContext, SparseVector};

fn main() -> lindy::error::Result<()> {
    let b: BasisContext<f64> =
        BasisContext::from_delta(DeltaSpec::constant(2)?, 1 << 14, PContext::new(1.0)?)?;
    let a = CoefficientVector(SparseVector::from_entries([(1, 1.0), (2, 0.3)]));
    let g = greedy_projection(&b, &a, 1)?;
    println!(
        "G_1 keeps {:?}; ||f - G_1 f|| / ||f|| = {}",
        g.greedy_set,
        g.norms.residual.to_f64() / g.norms.f.to_f64()
    );
    let u: Vec<(u64, f64)> = restricted_truncation(&a, 2)?
        .0
        .iter()
        .map(|(k, &x)| (k, x))
        .collect();
    println!("U_2 = {u:?}");

    let report = quasi_greedy_scan(&b, 200, 256, 11)?;
    let (residual, projection) = quasi_greedy_bounds(b.ctx());
    let (r, q) = (report.worst_residual, report.worst_projection);
    println!(
        "worst residual ratio {:.4} at trial {}, m = {} (bound {residual})",
        r.ratio, r.trial, r.m
    );
    println!(
        "worst projection ratio {:.4} at trial {}, m = {} (bound {projection})",
        q.ratio, q.trial, q.m
    );
    Ok(())
}
