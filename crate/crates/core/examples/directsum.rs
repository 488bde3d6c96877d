//! Direct sums of initial sections and their greedy behaviour.

use lindy::basis::BasisContext;
use lindy::directsum::{directsum_conditionality, directsum_greedy, BlockLayout, EtaSpec};
use lindy::indexing::DeltaSpec;
use lindy::sparse::{PContext, SparseVector};

fn main() -> lindy::error::Result<()> {
    let layout = BlockLayout::from_eta(&EtaSpec::Geometric(2.0), 6)?;
    println!(
        "block sizes {:?}, dimension {}",
        layout.sizes(),
        layout.dimension()
    );
    let b: BasisContext<f64> =
        BasisContext::from_delta(DeltaSpec::constant(2)?, 1 << 12, PContext::new(1.0)?)?;

    let coeffs = SparseVector::from_entries([(1, 1.0), (3, 0.5), (8, -0.7), (40, 0.2)]);
    let g = directsum_greedy(&layout, &b, &coeffs, 2)?;
    println!(
        "G_2 keeps {:?}; norms f = {:.4}, G_2 f = {:.4}, residual = {:.4}",
        g.greedy_set, g.norms.0.value, g.norms.1.value, g.norms.2.value
    );

    for row in directsum_conditionality(&layout, &b, &[2, 8, 32])? {
        println!(
            "m = {:>2}: k_m in [{:.3}, {:.3}]",
            row.m, row.lower, row.upper
        );
    }
    Ok(())
}
