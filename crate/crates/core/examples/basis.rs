//! Basis and dual vectors, synthesis, and the embedding into l_p.

use lindy::basis::{BasisContext, CoefficientVector};
use lindy::indexing::DeltaSpec;
use lindy::sparse::{PContext, Scalar, SparseVector};
use num_rational::BigRational;

fn entries<S: Scalar + std::fmt::Display>(v: &SparseVector<S>) -> Vec<String> {
    v.iter().map(|(j, x)| format!("{j}: {x}")).collect()
}

fn main() -> lindy::error::Result<()> {
    let exact: BasisContext<BigRational> =
        BasisContext::from_delta(DeltaSpec::constant(2)?, 1 << 10, PContext::reciprocal(1)?)?;
    for k in 1..=3 {
        println!("x_{k}: {:?}", entries(&exact.basis_vector(k)?));
    }
    for j in [3, 5, 9] {
        println!("x*_{j}: {:?}", entries(&exact.dual_vector(j)?));
    }

    let b: BasisContext<f64> =
        BasisContext::from_delta(DeltaSpec::constant(2)?, 1 << 12, PContext::new(0.5)?)?;
    let a = CoefficientVector(SparseVector::from_entries([(1, 1.0), (2, 0.3), (5, -2.0)]));
    let x = b.synthesize(&a)?;
    println!("sum a_k x_k: {:?}", entries(&x));
    println!("its p-norm at p = 1/2: {}", x.p_norm(b.ctx()).value);
    let back = b.analyze(&x, 5)?;
    println!("recovered coefficients: {:?}", entries(&back.0));

    let y = SparseVector::from_entries([(1, 1.0), (3, -1.0)]);
    let (jy, py) = b.embed_and_project(&y)?;
    println!("J(y): {:?}", entries(&jy));
    println!("P(J(y)): {:?}", entries(&py));
    Ok(())
}
