//! Every battery at a size that finishes in seconds.

use super::commands::{
    basis_rows, constants_rows, context, directsum_rows, dual_rows, greedy_rows, indexing_rows,
    quotient_rows, tables,
};
use super::grid::powers_of_two;
use super::{ExperimentConfig, Report};
use crate::directsum::{BlockLayout, EtaSpec};
use crate::error::Result;

pub(super) fn verify(cfg: &ExperimentConfig) -> Result<Report> {
    let trials = cfg.trials_or(300);
    let grid = cfg.grid_or(|| powers_of_two(256));
    let top = grid.iter().copied().max().unwrap_or(1);
    let support = cfg.max_support.min(256);
    let local = ExperimentConfig {
        max_support: support,
        ..cfg.clone()
    };

    let mut rows = indexing_rows(&*tables(cfg, 2 * top + 2)?, &grid)?;
    rows.extend(basis_rows::<f64>(cfg, 64, trials)?);

    let b = context::<f64>(cfg, (4 * top.max(support) + 2).max(1 << 16))?;
    rows.extend(greedy_rows(&local, &b, trials, Some(&grid))?);
    rows.extend(constants_rows(&b, &grid)?);
    rows.extend(quotient_rows::<f64>(cfg, 64, 5, trials)?);

    let eta = cfg.eta.clone().unwrap_or(EtaSpec::Geometric(2.0));
    let layout = BlockLayout::from_eta(&eta, cfg.blocks.min(10))?;
    let ds = context::<f64>(cfg, (4 * top).max(layout.largest() + 2).max(1 << 16))?;
    rows.extend(directsum_rows(&local, &layout, &ds, &grid, trials)?);

    let mut dual_grid: Vec<u64> = grid
        .iter()
        .copied()
        .chain([512])
        .filter(|&m| m <= 512)
        .collect();
    dual_grid.sort_unstable();
    dual_grid.dedup();
    rows.extend(dual_rows(cfg, &b, &b, &dual_grid, trials.min(100))?);

    Ok(rows.into())
}
