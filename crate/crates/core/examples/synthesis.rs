//! δ from milestones and from a concave profile.

use lindy::synthesis::{
    delta_from_concave, delta_from_milestones, growth_band, validate_milestones, ConcaveFamily,
    ConcaveSpec,
};

fn main() -> lindy::error::Result<()> {
    let milestones = [1, 2, 6, 30, 210];
    println!(
        "{milestones:?} valid: {}",
        validate_milestones(&milestones).is_valid()
    );
    let delta = delta_from_milestones(&milestones)?;
    println!(
        "delta(1..8) = {:?}",
        (1..=8).map(|n| delta.d(n)).collect::<Vec<_>>()
    );

    let family = ConcaveFamily::Power(0.5);
    let synth = delta_from_concave(ConcaveSpec {
        family,
        target_length: 8,
    })?;
    println!(
        "sqrt profile: a = {}, b = {}, milestones = {:?}",
        synth.a, synth.b, synth.milestones
    );
    let tables = synth.tables()?;
    let end = (*synth.milestones.last().unwrap()).min(1 << 20);
    let band = growth_band(&tables, &family, end)?;
    println!(
        "Gamma(m)/phi(log m) in [{:.3}, {:.3}] for 4 <= m < {}",
        band.c1, band.c2, band.m_end
    );
    Ok(())
}
