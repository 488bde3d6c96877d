//! Finitely supported vectors, p-norms and exact arithmetic.

use lindy::sparse::{PContext, SparseVector};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> lindy::error::Result<()> {
    let v: SparseVector<f64> = SparseVector::from_entries([(1, 1.0), (2, 1.0)]);
    for p in ["1", "0.5", "1/3"] {
        let ctx: PContext = p.parse()?;
        println!("p = {p}: ||e1 + e2|| = {}", v.p_norm(&ctx).value);
    }

    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let w =
        SparseVector::from_entries([(1, BigRational::from_integer(BigInt::from(1))), (4, half)]);
    for q in [1, 2] {
        // At p = 1/2 the power sum is irrational and comes back as an enclosure.
        let power = w.p_power(&PContext::reciprocal(q)?);
        println!(
            "||e1 + e4/2||^p at p = 1/{q}: {power} (exact: {})",
            power.is_exact()
        );
    }
    print!("as text:\n{}", w.to_f64().to_text());
    Ok(())
}
