//! σ, ρ, Λ and Γ for a few δ sequences.

use lindy::indexing::{DeltaSpec, IndexTables};

fn main() -> lindy::error::Result<()> {
    for spec in ["const:2", "const:3", "list:2,3,4,...", "pow:0.5"] {
        let t = IndexTables::new(spec.parse::<DeltaSpec>()?, 1 << 16)?;
        let sigma: Vec<u64> = (1..=6).map(|k| t.sigma(k)).collect::<Result<_, _>>()?;
        let lambda: Vec<u64> = (0..6).map(|n| t.lambda(n)).collect::<Result<_, _>>()?;
        println!("{spec:>16}  sigma(1..6) = {sigma:?}");
        println!("{:>16}  Lambda(0..5) = {lambda:?}", "");
        println!(
            "{:>16}  rho(17) = {}, Gamma(1000) = {}",
            "",
            t.rho(17)?,
            t.gamma(1000)?
        );
    }
    Ok(())
}
