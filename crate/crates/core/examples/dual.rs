//! Sums of dual functionals and the column sums behind them.

use lindy::basis::BasisContext;
use lindy::dual::{column_q_bound, dual_row, sparse_level_sum};
use lindy::indexing::DeltaSpec;
use lindy::sparse::PContext;

fn main() -> lindy::error::Result<()> {
    let b: BasisContext<f64> =
        BasisContext::from_delta(DeltaSpec::constant(2)?, 1 << 14, PContext::new(1.0)?)?;
    for m in [4, 64, 1024] {
        let r = dual_row(&b, m)?;
        println!(
            "m = {m:>4}: Gamma = {:>2}, sum x*_j(1) = {:.3}, positive sup = {:.3}, alternating sup = {:.3}",
            r.gamma, r.first_coordinate, r.positive_sup, r.alternating_sup
        );
    }
    println!("sparse level sum up to n = 8: {}", sparse_level_sum(&b, 8)?);

    let half: BasisContext<f64> =
        BasisContext::from_delta(DeltaSpec::constant(2)?, 1 << 14, PContext::new(0.5)?)?;
    let c = column_q_bound(&half, 1, 1.0, 12)?;
    println!(
        "column 1, q = 1 at p = 1/2: {:.4} <= {}",
        c.total(),
        c.bound
    );
    Ok(())
}
