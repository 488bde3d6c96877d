//! One function per subcommand, each producing report rows.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;

use super::grid::powers_of_two;
use super::report::Row;
use super::tags;
use super::{ExperimentConfig, Report};
use crate::basis::BasisContext;
use crate::conditionality::{bound_report, complement_bounds, envelope_check};
use crate::directsum::{
    directsum_conditionality, directsum_greedy, isomorphism_norm, BlockLayout, EtaSpec,
};
use crate::dual::{
    column_level_power_sums, column_q_bound, dual_democracy_scan, dual_row, norming_check,
    sparse_level_sum,
};
use crate::error::{capacity, Error, Result};
use crate::greedy::{democracy_scan, lebesgue_bounds, quasi_greedy_scan, truncation_scan};
use crate::indexing::IndexTables;
use crate::quotient::{q_map, step_p_power, StepFunction};
use crate::random::{random_coefficients, trial_rng};
use crate::sparse::{PContext, PowerSum, Scalar, SparseVector};
use crate::synthesis::{
    delta_from_concave, growth_band, validate_milestones, ConcaveFamily, ConcaveSpec,
};

/// Largest table built by the subcommands.
pub(super) const MAX_TABLE: u64 = 1 << 22;

pub(super) fn tables(cfg: &ExperimentConfig, max_index: u64) -> Result<Arc<IndexTables>> {
    if max_index > MAX_TABLE {
        return Err(capacity(format!(
            "a table of {max_index} indices exceeds the limit {MAX_TABLE}"
        )));
    }
    Ok(Arc::new(IndexTables::new(
        cfg.delta.clone(),
        max_index.max(64),
    )?))
}

pub(super) fn context<S: Scalar>(
    cfg: &ExperimentConfig,
    max_index: u64,
) -> Result<BasisContext<S>> {
    BasisContext::new(tables(cfg, max_index)?, cfg.ctx)
}

fn max_of(grid: &[u64]) -> u64 {
    grid.iter().copied().max().unwrap_or(1)
}

pub(super) fn indexing(cfg: &ExperimentConfig) -> Result<Report> {
    let grid = cfg.grid_or(|| powers_of_two(1 << 20));
    let t = tables(cfg, 2 * max_of(&grid) + 2)?;
    indexing_rows(&t, &grid).map(Report::from)
}

pub(super) fn indexing_rows(t: &IndexTables, grid: &[u64]) -> Result<Vec<Row>> {
    let classical = t.delta().to_string() == "const:2";
    let mut rows = Vec::new();
    for &m in grid {
        let g = t.gamma(m)? as f64;
        let g2 = t.gamma(2 * m)? as f64;
        rows.push(
            Row::le("gamma", tags::DOUBLING, Some(m), g, g)
                .with_reference(t.lambda(g as u32)? as f64),
        );
        rows.push(Row::le(
            "gamma_doubling",
            tags::DOUBLING,
            Some(m),
            g2,
            g + 1.0,
        ));
        if m >= 2 {
            rows.push(Row::le(
                "gamma_doubling_upper",
                tags::DOUBLING,
                Some(m),
                g + 1.0,
                2.0 * g,
            ));
        }
        if classical {
            let log = (m as f64).log2();
            let (lo, hi) = (log.floor(), log.ceil());
            rows.push(
                Row::le("gamma_classical", tags::CLASSICAL_GAMMA, Some(m), lo, hi)
                    .with_reference(g)
                    .with_pass(lo <= g && g <= hi),
            );
        }
    }
    Ok(rows)
}

pub(super) fn synthesize(cfg: &ExperimentConfig) -> Result<Report> {
    let family = cfg.phi.unwrap_or(ConcaveFamily::Power(0.5));
    let synthesis = delta_from_concave(ConcaveSpec {
        family,
        target_length: cfg.len.unwrap_or(8),
    })?;
    if let Some(path) = &cfg.out {
        std::fs::write(path, synthesis.delta.to_table_text(synthesis.table_len()))?;
    }
    let t = synthesis.tables()?;
    let check = validate_milestones(&synthesis.milestones);
    let rebuilt: Vec<u64> = (0..synthesis.milestones.len() as u32)
        .map(|n| t.lambda(n))
        .collect::<Result<_>>()?;
    let mut rows = vec![
        Row::verdict("milestones_valid", tags::MILESTONES, None, check.is_valid())
            .with_witness(format!("{check:?}")),
        Row::verdict(
            "round_trip",
            tags::MILESTONES,
            None,
            rebuilt == synthesis.milestones,
        )
        .with_witness(format!("rebuilt {rebuilt:?}")),
    ];
    let m_end = (*synthesis
        .milestones
        .last()
        .expect("milestones are nonempty"))
    .min(1 << 24);
    if m_end > 4 {
        let band = growth_band(&t, &family, m_end)?;
        rows.push(
            Row::le("growth_band", tags::GROWTH, Some(m_end), band.c1, band.c2)
                .with_pass(band.c1 > 0.0 && band.c2.is_finite()),
        );
    }
    let diagnostics = serde_json::to_value(&synthesis).map_err(|e| Error::Io(e.to_string()))?;
    Ok(Report {
        rows,
        diagnostics: Some(diagnostics),
    })
}

pub(super) fn basis(cfg: &ExperimentConfig) -> Result<Report> {
    let k_max = cfg.grid.as_deref().map_or(64, max_of);
    let trials = cfg.trials_or(1000);
    if cfg.exact {
        basis_rows::<BigRational>(cfg, k_max, trials)
    } else {
        basis_rows::<f64>(cfg, k_max, trials)
    }
    .map(Report::from)
}

fn equal<S: Scalar>(a: &S, b: &S) -> bool {
    if S::EXACT {
        a == b
    } else {
        (a.to_f64() - b.to_f64()).abs() <= 1e-12 * b.to_f64().abs().max(1.0)
    }
}

pub(super) fn basis_rows<S: Scalar>(
    cfg: &ExperimentConfig,
    k_max: u64,
    trials: u64,
) -> Result<Vec<Row>> {
    let b = context::<S>(cfg, 16 * k_max + 64)?;
    let ctx = *b.ctx();
    let last = b.tables().sigma(k_max + 1)? - 1;
    let big = context::<S>(cfg, last.max(16 * k_max + 64) + 2)?;
    let broken = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let coeffs = big.analyze(&big.basis_vector(k)?, k_max)?;
            let bad = (1..=k_max).find(|&j| {
                let expect = if j == k { S::one() } else { S::zero() };
                !equal(&coeffs.value(j), &expect)
            });
            Ok(bad.map(|j| (j, k)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    let mut rows = vec![Row::verdict(
        "biorthogonality",
        tags::BIORTHOGONAL,
        Some(k_max),
        broken.is_none(),
    )
    .with_witness(format!("first failing pair (j, k) = {broken:?}"))];

    let two = PowerSum::from_integer(2);
    let mut norm_bad = None;
    let mut sup_bad = None;
    for k in 1..=k_max {
        let np = b.basis_vector(k)?.p_power(&ctx);
        if !np.agrees_with(&two, 1e-12) || (S::EXACT && np != two) {
            norm_bad.get_or_insert(k);
        }
        if !equal(&b.dual_vector(k)?.sup_norm(), &S::one()) {
            sup_bad.get_or_insert(k);
        }
    }
    rows.push(
        Row::verdict(
            "basis_norm_power",
            tags::BASIS_NORM,
            Some(k_max),
            norm_bad.is_none(),
        )
        .with_reference(2.0)
        .with_witness(format!("first index with ‖x_k‖^p ≠ 2: {norm_bad:?}")),
    );
    rows.push(
        Row::verdict(
            "dual_sup_norm",
            tags::DUAL_SUP,
            Some(k_max),
            sup_bad.is_none(),
        )
        .with_reference(1.0)
        .with_witness(format!("first index with ‖x_k*‖_∞ ≠ 1: {sup_bad:?}")),
    );

    // P∘J on a full coefficient vector of length k_max, then ‖P y‖^p <= 2‖y‖^p.
    let e = big.embedding_indices(k_max as usize)?;
    let top = *e.last().expect("k_max >= 1");
    // J x reaches σ(top + 1) − 1; P needs blocks up to half of that.
    let reach = tables(cfg, top + 2)?.sigma(top + 1)?;
    let wide = context::<S>(cfg, reach / 2 + 2)?;
    let x: SparseVector<S> = (1..=k_max)
        .map(|k| {
            (
                k,
                S::from_rational(&BigRational::new(
                    BigInt::from(k as i64 % 7 - 3),
                    BigInt::from(4),
                )),
            )
        })
        .collect();
    let (_, back) = wide.embed_and_project(&x)?;
    rows.push(Row::verdict(
        "embed_project_identity",
        tags::EMBEDDING,
        Some(k_max),
        back == x || (!S::EXACT && back.sub(&x).sup_norm().to_f64() < 1e-12),
    ));
    let wide_f = wide.with_scalar::<f64>()?;
    let worst = (0..trials)
        .into_par_iter()
        .map(|t| {
            let y = random_coefficients(&mut trial_rng(cfg.seed, t), top).into_vector();
            let py = wide_f.project(&y)?;
            Ok::<f64, Error>(py.p_power(&ctx).to_f64() / y.p_power(&ctx).to_f64())
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
    rows.push(Row::le(
        "projection_power_ratio",
        tags::EMBEDDING,
        Some(k_max),
        worst,
        2.0,
    ));
    Ok(rows)
}

pub(super) fn greedy(cfg: &ExperimentConfig) -> Result<Report> {
    let b = context::<f64>(
        cfg,
        4 * cfg.max_support.max(cfg.grid.as_deref().map_or(0, max_of)) + 2,
    )?;
    greedy_rows(cfg, &b, cfg.trials_or(10_000), cfg.grid.as_deref()).map(Report::from)
}

pub(super) fn greedy_rows(
    cfg: &ExperimentConfig,
    b: &BasisContext<f64>,
    trials: u64,
    democracy_grid: Option<&[u64]>,
) -> Result<Vec<Row>> {
    let qg = quasi_greedy_scan(b, trials, cfg.max_support, cfg.seed)?;
    let witness =
        |w: crate::greedy::Worst| format!("seed {} trial {} m {}", cfg.seed, w.trial, w.m);
    let mut rows = vec![
        Row::le(
            "residual_ratio",
            tags::QUASI_GREEDY,
            None,
            qg.worst_residual.ratio,
            qg.residual_bound,
        )
        .with_witness(witness(qg.worst_residual)),
        Row::le(
            "projection_ratio",
            tags::QUASI_GREEDY,
            None,
            qg.worst_projection.ratio,
            qg.projection_bound,
        )
        .with_witness(witness(qg.worst_projection)),
    ];
    if let Some(grid) = democracy_grid {
        let dem_trials = trials.min(1000);
        for row in democracy_scan(
            b,
            &grid.iter().map(|&m| m as usize).collect::<Vec<_>>(),
            dem_trials,
            cfg.seed,
        )? {
            let m = Some(row.m as u64);
            rows.push(Row::le(
                "democracy_lower",
                tags::DEMOCRACY,
                m,
                row.lower_bound,
                row.min,
            ));
            rows.push(Row::le(
                "democracy_upper",
                tags::DEMOCRACY,
                m,
                row.max,
                row.upper_bound,
            ));
            rows.push(Row::le(
                "democracy_upper_p_triangle",
                tags::DEMOCRACY,
                m,
                row.max,
                row.upper_bound_p_triangle,
            ));
        }
        let tr = truncation_scan(b, trials.min(1000), 20, cfg.seed)?;
        rows.push(
            Row::verdict(
                "restricted_truncation",
                tags::TRUNCATION,
                None,
                tr.measured_bound.is_finite(),
            )
            .with_values(Some(tr.measured_bound), None),
        );
        rows.push(Row::le(
            "succ_nested_ratio",
            tags::SUCC,
            None,
            tr.max_nested_ratio,
            tr.measured_bound,
        ));
    }
    Ok(rows)
}

/// 2^{1/p}/(1 − 2^{-1/p}): ratio of the democracy bounds (2m)^{1/p} and (1 − 2^{-1/p}) m^{1/p}.
pub(super) fn superdemocracy_bound(ctx: &PContext) -> f64 {
    let two = ctx.two_root();
    two / (1.0 - 1.0 / two)
}

pub(super) fn constants(cfg: &ExperimentConfig) -> Result<Report> {
    let grid = cfg.grid_or(|| powers_of_two(4096));
    let cap = (4 * max_of(&grid)).max(1 << 16);
    if cfg.exact {
        constants_rows(&context::<BigRational>(cfg, cap)?, &grid)
    } else {
        constants_rows(&context::<f64>(cfg, cap)?, &grid)
    }
    .map(Report::from)
}

pub(super) fn constants_rows<S: Scalar>(b: &BasisContext<S>, grid: &[u64]) -> Result<Vec<Row>> {
    let ctx = *b.ctx();
    let two = ctx.two_root();
    let reports = grid
        .par_iter()
        .map(|&m| bound_report(b, m))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for r in &reports {
        let m = Some(r.m);
        rows.push(
            Row::le(
                "k_m",
                tags::MAIN,
                m,
                r.witnessed_lower,
                r.certified_upper.unwrap_or(f64::NAN),
            )
            .with_values(Some(r.witnessed_lower), r.certified_upper)
            .with_reference(r.reference)
            .with_pass(r.consistent())
            .with_witness(r.witness.clone()),
        );
        rows.push(Row::le(
            "k_m_lower_sandwich",
            tags::LOWER,
            m,
            r.reference / (two * two),
            r.witnessed_lower,
        ));
        rows.push(
            Row::lt("v_power", tags::LOWER, m, 1.0 + r.gamma as f64, r.v_power)
                .with_pass(r.v_exceeds)
                .with_witness(r.witness.clone()),
        );
        if let Some(upper) = r.certified_upper {
            rows.push(Row::le(
                "k_m_upper_sandwich",
                tags::UPPER,
                m,
                upper,
                two * r.reference,
            ));
            let kc = complement_bounds(&ctx, (r.witnessed_lower, upper));
            rows.push(Row::le("k_m_complement", tags::MAIN, m, kc.0, kc.1));
            let (lo, hi) = lebesgue_bounds(&ctx, kc, superdemocracy_bound(&ctx))?;
            rows.push(Row::le("lebesgue", tags::LEBESGUE, m, lo, hi));
        }
    }
    let env_grid: Vec<u64> = grid.iter().copied().filter(|&m| m >= 2).collect();
    if !env_grid.is_empty() {
        let env = envelope_check(b, &env_grid)?;
        rows.push(
            Row::verdict(
                "envelope_lower_over_log",
                tags::ENVELOPE,
                None,
                env.lower_over_log.is_finite(),
            )
            .with_values(Some(env.lower_over_log), None),
        );
        if let Some(u) = env.upper_over_log {
            rows.push(
                Row::verdict(
                    "envelope_upper_over_log",
                    tags::ENVELOPE,
                    None,
                    u.is_finite(),
                )
                .with_values(None, Some(u)),
            );
        }
        if let Some((lo, hi)) = env.gamma_band {
            rows.push(
                Row::le("gamma_band", tags::MAIN, None, lo, hi)
                    .with_pass(lo > 0.0 && lo <= hi && hi.is_finite()),
            );
        }
    }
    Ok(rows)
}

/// ±(a/c)^q with a, c in [1, 9]: the q-th root stays rational.
fn perfect_power_entry<R: Rng>(rng: &mut R, ctx: &PContext) -> BigRational {
    let q = ctx.root_index().unwrap_or(1);
    let a = BigInt::from(rng.random_range(1..=9));
    let c = BigInt::from(rng.random_range(1..=9));
    let r = BigRational::new(num_traits::Pow::pow(&a, q), num_traits::Pow::pow(&c, q));
    if rng.random::<bool>() {
        r
    } else {
        -r
    }
}

pub(super) fn quotient(cfg: &ExperimentConfig) -> Result<Report> {
    let k_max = cfg.grid.as_deref().map_or(256, max_of);
    let trials = cfg.trials_or(1000);
    if cfg.exact {
        quotient_rows::<BigRational>(cfg, k_max, 6, trials)
    } else {
        quotient_rows::<f64>(cfg, k_max, 6, trials)
    }
    .map(Report::from)
}

pub(super) fn quotient_rows<S: Scalar>(
    cfg: &ExperimentConfig,
    k_max: u64,
    levels: u32,
    trials: u64,
) -> Result<Vec<Row>> {
    // Levels ending below 2^14; fast-growing δ gives fewer.
    let probe = tables(cfg, 1 << 16)?;
    let levels = (0..=levels)
        .take_while(|&n| probe.lambda(n + 1).is_ok_and(|end| end <= 1 << 14))
        .last()
        .unwrap_or(0);
    let level_end = probe.lambda(levels + 1)?;
    let b = context::<S>(cfg, (k_max + 2).max(level_end + 2))?;
    let ctx = *b.ctx();
    let zero_ok = |f: &crate::quotient::StepFunction<S>| {
        if S::EXACT {
            f.is_zero()
        } else {
            f.values().iter().all(|v| v.to_f64().abs() < 1e-9)
        }
    };
    let kernel_bad = (1..=k_max)
        .into_par_iter()
        .map(|k| Ok::<_, Error>((!zero_ok(&q_map(&b, &b.basis_vector(k)?)?)).then_some(k)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    let mut rows = vec![
        Row::verdict("kernel", tags::KERNEL, Some(k_max), kernel_bad.is_none())
            .with_witness(format!("first k with Q(x_k) ≠ 0: {kernel_bad:?}")),
    ];
    for n in 0..=levels {
        let level = b.tables().level_interval(n)?;
        let mut rng = trial_rng(cfg.seed, 1_000_000 + n as u64);
        let v: SparseVector<S> = level
            .map(|j| (j, S::from_rational(&perfect_power_entry(&mut rng, &ctx))))
            .collect();
        let image = step_p_power(&q_map(&b, &v)?, &ctx);
        let input = v.p_power(&ctx);
        let pass = if S::EXACT {
            image == input
        } else {
            image.agrees_with(&input, 1e-9)
        };
        rows.push(
            Row::verdict("level_isometry", tags::ISOMETRY, Some(n as u64), pass)
                .with_values(Some(image.lower_f64()), Some(input.upper_f64())),
        );
    }
    let support = (b.tables().max_index() / 2).min(64);
    let results = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let size = rng.random_range(1..=support as usize);
            let idx = crate::random::random_subset(&mut rng, support, size);
            let v: SparseVector<S> = idx
                .into_iter()
                .map(|j| (j, S::from_rational(&perfect_power_entry(&mut rng, &ctx))))
                .collect();
            let f = q_map(&b, &v)?;
            let input = v.p_power(&ctx);
            let (image, ok) = if S::EXACT {
                let image = step_p_power(&f, &ctx);
                let ok = image.certainly_le(&input);
                (image, ok)
            } else {
                let image = PowerSum::Float(rounding_free_lower(&b, &v, &f)?);
                let ok = image.to_f64() <= input.to_f64() * (1.0 + 1e-12);
                (image, ok)
            };
            Ok::<_, Error>((image.upper_f64() / input.lower_f64(), ok, t))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let failed = results.iter().find(|r| !r.1).map(|r| r.2);
    rows.push(
        Row::le("contraction", tags::CONTRACTION, None, worst, 1.0)
            .with_pass(failed.is_none())
            .with_witness(format!("seed {} trial {failed:?}", cfg.seed)),
    );
    Ok(rows)
}

/// Σ max(|f_i| − e_i, 0)^p |piece_i| where e_i bounds the rounding error of
/// the float sum behind f_i: cancellation makes |f_i|^p unreliable near zero.
fn rounding_free_lower<S: Scalar>(
    b: &BasisContext<S>,
    v: &SparseVector<S>,
    f: &StepFunction<S>,
) -> Result<f64> {
    let ctx = b.ctx();
    let magnitudes: SparseVector<S> = v.iter().map(|(j, x)| (j, x.abs())).collect();
    let envelope = q_map(b, &magnitudes)?;
    let gamma = (v.len() as f64 + 2.0) * f64::EPSILON;
    Ok(f.pieces()
        .map(|(l, r, x)| {
            let mid = (l + r) / BigInt::from(2);
            let slack = gamma * envelope.eval(&mid).to_f64();
            let len = <BigRational as Scalar>::to_f64(&(r - l));
            ctx.power((x.to_f64().abs() - slack).max(0.0)) * len
        })
        .sum())
}

pub(super) fn directsum(cfg: &ExperimentConfig) -> Result<Report> {
    let eta = cfg.eta.clone().unwrap_or(EtaSpec::Geometric(2.0));
    let layout = BlockLayout::from_eta(&eta, cfg.blocks)?;
    let grid = cfg.grid_or(|| powers_of_two(4096));
    let b = context::<f64>(
        cfg,
        (4 * max_of(&grid)).max(layout.largest() + 2).max(1 << 16),
    )?;
    directsum_rows(cfg, &layout, &b, &grid, cfg.trials_or(1000)).map(Report::from)
}

pub(super) fn directsum_rows(
    cfg: &ExperimentConfig,
    layout: &BlockLayout,
    b: &BasisContext<f64>,
    grid: &[u64],
    trials: u64,
) -> Result<Vec<Row>> {
    let ctx = *b.ctx();
    let dim = layout.dimension();
    let support = cfg.max_support.min(dim);
    let ratios = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let size = rng.random_range(1..=support as usize);
            let idx = crate::random::random_subset(&mut rng, dim, size);
            let a: SparseVector<f64> = idx
                .into_iter()
                .map(|g| {
                    (
                        g,
                        crate::random::random_sign(&mut rng)
                            * crate::random::log_uniform_magnitude(&mut rng),
                    )
                })
                .collect();
            let blocks = layout.split(&a)?;
            let iso = isomorphism_norm(layout, b, &blocks)?.value;
            Ok::<_, Error>(iso / a.p_norm(&ctx).value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    let mut rows = vec![
        Row::le("isomorphism_lower", tags::ISOMORPHISM, None, 1.0, lo),
        Row::le(
            "isomorphism_upper",
            tags::ISOMORPHISM,
            None,
            hi,
            ctx.two_root(),
        ),
    ];
    // Residual ratios of the greedy algorithm on the direct sum.
    let qg_trials = trials.min(100);
    let residual = (0..qg_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed ^ 0x5eed, t);
            let a = random_coefficients(&mut rng, support.min(256)).into_vector();
            let mut worst: f64 = 0.0;
            let mut m = 1;
            while m <= a.len() {
                let out = directsum_greedy(layout, b, &a, m)?;
                worst = worst.max(out.norms.2.value / out.norms.0.value);
                m *= 2;
            }
            Ok::<_, Error>(worst)
        })
        .try_reduce(|| 0.0, |x, y| Ok(x.max(y)))?;
    rows.push(Row::le(
        "directsum_residual_ratio",
        tags::DIRECT_SUM,
        None,
        residual,
        ctx.two_root(),
    ));
    // The upper bound for k_m needs a nondecreasing δ.
    if !b.tables().is_nondecreasing() {
        return Ok(rows);
    }
    for r in directsum_conditionality(layout, b, grid)? {
        rows.push(
            Row::le(
                "k_m_directsum",
                tags::DIRECT_SUM,
                Some(r.m),
                r.lower,
                r.upper,
            )
            .with_reference(ctx.root(r.gamma.max(1) as f64))
            .with_pass(r.lower <= r.upper * (1.0 + 1e-9) && r.bounded(ctx.two_root())),
        );
    }
    Ok(rows)
}

pub(super) fn dual(cfg: &ExperimentConfig) -> Result<Report> {
    let grid = cfg.grid_or(|| powers_of_two(4096));
    let cap = (2 * max_of(&grid) + 2).max(1 << 16);
    if cfg.exact {
        dual_rows(
            cfg,
            &context::<BigRational>(cfg, cap)?,
            &context::<f64>(cfg, cap)?,
            &grid,
            cfg.trials_or(200),
        )
    } else {
        let b = context::<f64>(cfg, cap)?;
        dual_rows(cfg, &b, &b, &grid, cfg.trials_or(200))
    }
    .map(Report::from)
}

pub(super) fn dual_rows<S: Scalar>(
    cfg: &ExperimentConfig,
    b: &BasisContext<S>,
    bf: &BasisContext<f64>,
    grid: &[u64],
    trials: u64,
) -> Result<Vec<Row>> {
    let ctx = *b.ctx();
    let per_m = grid
        .par_iter()
        .map(|&m| dual_row(b, m))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    // The sup-norm chain concerns the dual of the p = 1 basis.
    let banach = ctx.p() == 1.0;
    for r in &per_m {
        let m = Some(r.m);
        let column: PowerSum = (1..=r.m)
            .map(|j| Ok(b.dual_entry(j, 1)?.p_power(&ctx)))
            .sum::<Result<PowerSum>>()?;
        let gamma = PowerSum::from_integer(r.gamma as i64);
        rows.push(
            Row::lt(
                "column_first_power_sum",
                tags::COLUMN,
                m,
                r.gamma as f64,
                column.to_f64(),
            )
            .with_pass(column.certainly_gt(&gamma)),
        );
        if !banach {
            continue;
        }
        rows.push(
            Row::lt(
                "dual_first_coordinate",
                tags::DUAL_LOWER,
                m,
                r.gamma as f64,
                r.first_coordinate,
            )
            .with_pass(r.exceeds_gamma),
        );
        rows.push(Row::le(
            "dual_alternating_sup",
            tags::DUAL_LOWER,
            m,
            r.alternating_sup,
            2.0,
        ));
        rows.push(Row::le(
            "dual_positive_sup",
            tags::DUAL_LOWER,
            m,
            r.gamma as f64,
            2.0 * r.positive_sup,
        ));
        rows.push(
            Row::verdict("dual_lebesgue_upper", tags::DUAL_DEMOCRACY, m, true)
                .with_values(Some(r.quasi_greedy_lower), Some(r.lebesgue_upper)),
        );
    }
    let sampled: Vec<u64> = grid.iter().copied().filter(|&m| m <= 1024).collect();
    for r in dual_democracy_scan(bf, &sampled, trials.min(200), cfg.seed)? {
        rows.push(Row::le(
            "dual_democracy",
            tags::DUAL_DEMOCRACY,
            Some(r.m),
            r.max_sup,
            r.bound,
        ));
    }
    let mut n = 0u32;
    while b.tables().lambda(n + 1).is_ok() && n < 40 {
        n += 1;
    }
    rows.push(Row::le(
        "sparse_level_sum",
        tags::DUAL_LOWER,
        Some(n as u64),
        sparse_level_sum(b, n)?.to_f64(),
        2.0,
    ));
    let mut bad = None;
    for k in 1..=64 {
        for (level, s) in column_level_power_sums(b, k, 64)?.into_iter().enumerate() {
            if s != BigRational::from_integer(1.into()) {
                bad.get_or_insert((k, level));
            }
        }
    }
    rows.push(
        Row::verdict(
            "column_level_sums",
            tags::BLOCK_SUM,
            Some(64),
            bad.is_none(),
        )
        .with_witness(format!("first (k, level) with sum ≠ 1: {bad:?}")),
    );
    if ctx.p() < 1.0 {
        let c = column_q_bound(b, 1, 1.0, 64)?;
        rows.push(
            Row::le("column_q_sum", tags::LQ_SUM, None, c.total(), c.bound).with_pass(c.pass()),
        );
    }
    let norming = (0..trials.min(50))
        .map(|t| {
            let y = random_coefficients(&mut trial_rng(cfg.seed ^ 0xd0a1, t), 24).into_vector();
            norming_check(bf, &y, 20, cfg.seed.wrapping_add(t))
        })
        .collect::<Result<Vec<_>>>()?;
    let failed = norming.iter().position(|r| !r.pass);
    rows.push(
        Row::verdict("norming", tags::NORMING, None, failed.is_none())
            .with_witness(format!("first failing sample {failed:?}")),
    );
    Ok(rows)
}
