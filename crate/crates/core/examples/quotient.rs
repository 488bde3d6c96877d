//! The quotient map onto step functions on [0, 1).

use lindy::basis::BasisContext;
use lindy::indexing::DeltaSpec;
use lindy::quotient::{interval, q_map, step_p_norm};
use lindy::sparse::{PContext, SparseVector};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> lindy::error::Result<()> {
    let b: BasisContext<BigRational> =
        BasisContext::from_delta(DeltaSpec::constant(3)?, 1 << 10, PContext::reciprocal(2)?)?;
    for j in [1, 2, 3, 4, 7] {
        let i = interval(b.tables(), j)?;
        println!("I_{j} = [{}, {})", i.left, i.right);
    }
    println!(
        "Q(x_4) is zero: {}",
        q_map(&b, &b.basis_vector(4)?)?.is_zero()
    );

    let one = BigRational::from_integer(BigInt::from(1));
    let v = SparseVector::from_entries([(2, one.clone()), (7, -one)]);
    let f = q_map(&b, &v)?;
    print!("Q(e_2 - e_7):\n{}", f.to_csv()?);
    println!(
        "||Q(e_2 - e_7)|| = {}, ||e_2 - e_7|| = {}",
        step_p_norm(&f, b.ctx()).value,
        v.p_norm(b.ctx()).value
    );
    Ok(())
}
