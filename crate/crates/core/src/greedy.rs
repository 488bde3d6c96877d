//! Thresholding greedy algorithm, restricted truncations, and the empirical
//! quasi-greedy, democracy and Lebesgue estimates.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{BasisContext, CoefficientVector};
use crate::error::{Error, Result};
use crate::random::{random_coefficients, random_sign, random_subset, trial_rng};
use crate::sparse::{PContext, PowerSum, Scalar, SparseVector};

/// Power sums of f, G_m f and f − G_m f.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyNorms {
    pub f: PowerSum,
    pub projection: PowerSum,
    pub residual: PowerSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyOutcome<S: Scalar> {
    pub greedy_set: Vec<u64>,
    pub projection: CoefficientVector<S>,
    pub residual: CoefficientVector<S>,
    pub norms: GreedyNorms,
}

/// Support ordered by decreasing magnitude, lowest index first among ties.
pub fn greedy_order<S: Scalar>(a: &SparseVector<S>) -> Vec<u64> {
    let mut entries: Vec<(u64, S)> = a.iter().map(|(k, x)| (k, x.abs())).collect();
    entries.sort_by(|(i, x), (j, y)| y.partial_cmp(x).unwrap_or(Ordering::Equal).then(i.cmp(j)));
    entries.into_iter().map(|(k, _)| k).collect()
}

/// G_m: the m largest coefficients, lowest index on ties. m beyond the support
/// gives the identity.
pub fn greedy_projection<S: Scalar>(
    bctx: &BasisContext<S>,
    a: &CoefficientVector<S>,
    m: usize,
) -> Result<GreedyOutcome<S>> {
    let mut greedy_set: Vec<u64> = greedy_order(a).into_iter().take(m).collect();
    greedy_set.sort_unstable();
    let projection = coordinate_projection(a, greedy_set.iter().copied());
    let residual: CoefficientVector<S> =
        a.restrict(|k| greedy_set.binary_search(&k).is_err()).into();
    let ctx = bctx.ctx();
    let norms = GreedyNorms {
        f: bctx.synthesize(a)?.p_power(ctx),
        projection: bctx.synthesize(&projection)?.p_power(ctx),
        residual: bctx.synthesize(&residual)?.p_power(ctx),
    };
    Ok(GreedyOutcome {
        greedy_set,
        projection,
        residual,
        norms,
    })
}

/// U_m: (min magnitude on the greedy set) · sign(a_j) on the greedy set.
pub fn restricted_truncation<S: Scalar>(
    a: &CoefficientVector<S>,
    m: usize,
) -> Result<CoefficientVector<S>> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    let set: Vec<u64> = greedy_order(a).into_iter().take(m).collect();
    let Some(&last) = set.last() else {
        return Ok(CoefficientVector::new());
    };
    let level = a.value(last).abs();
    Ok(set
        .into_iter()
        .map(|k| (k, a.value(k).signum() * level.clone()))
        .collect())
}

/// S_A: the coefficients restricted to A.
pub fn coordinate_projection<S: Scalar>(
    a: &CoefficientVector<S>,
    set: impl IntoIterator<Item = u64>,
) -> CoefficientVector<S> {
    let keep: std::collections::BTreeSet<u64> = set.into_iter().collect();
    a.restrict(|k| keep.contains(&k)).into()
}

/// Residual and projection bounds: 2^{1/p} and min{3^{1/p}, 2^{2/p}/(2^{1/p} − 1)}.
pub fn quasi_greedy_bounds(ctx: &PContext) -> (f64, f64) {
    let two = ctx.two_root();
    let three = ctx.root(3.0);
    (two, three.min(two * two / (two - 1.0)))
}

/// Worst ratio seen, with the trial and m that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Worst {
    pub ratio: f64,
    pub trial: u64,
    pub m: usize,
}

impl Worst {
    fn none() -> Self {
        Worst {
            ratio: 0.0,
            trial: u64::MAX,
            m: 0,
        }
    }

    fn max(self, other: Worst) -> Worst {
        match self.ratio.partial_cmp(&other.ratio) {
            Some(Ordering::Greater) => self,
            Some(Ordering::Less) => other,
            _ if self.trial <= other.trial => self,
            _ => other,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiGreedyReport {
    pub trials: u64,
    pub max_support: u64,
    pub seed: u64,
    pub residual_bound: f64,
    pub projection_bound: f64,
    pub worst_residual: Worst,
    pub worst_projection: Worst,
    pub pass: bool,
}

/// Relative slack for scan comparisons.
pub const SLACK: f64 = 1e-9;

/// ‖G_m f‖/‖f‖ and ‖f − G_m f‖/‖f‖ for m = 0..=|supp a|, computed incrementally.
pub fn greedy_ratio_trace(
    bctx: &BasisContext<f64>,
    a: &CoefficientVector<f64>,
) -> Result<Vec<(f64, f64)>> {
    let ctx = *bctx.ctx();
    let tables = bctx.tables();
    let Some(top) = a.max_index() else {
        return Ok(vec![(0.0, 0.0)]);
    };
    let len = tables.sigma(top + 1)? as usize;
    // x: full vector; g: greedy part; pending: contributors not yet moved to g.
    let mut x = vec![0.0f64; len];
    let mut g = vec![0.0f64; len];
    let mut pending = vec![0u8; len];
    let contributions = |k: u64, ak: f64| -> Result<Vec<(usize, f64)>> {
        let mut out = vec![(k as usize, ak)];
        let c = -ak * bctx.weight(k);
        out.extend(tables.block(k)?.map(|j| (j as usize, c)));
        Ok(out)
    };
    for (k, ak) in a.iter() {
        for (j, c) in contributions(k, *ak)? {
            x[j] += c;
            pending[j] += 1;
        }
    }
    let pf: f64 = x.iter().map(|v| ctx.power(*v)).sum();
    let mut pg = 0.0;
    let mut pr = pf;
    let ratio = |s: f64| ctx.root((s / pf).max(0.0));
    let mut trace = Vec::with_capacity(a.len() + 1);
    trace.push((0.0, 1.0));
    for k in greedy_order(a) {
        for (j, c) in contributions(k, a.value(k))? {
            let (old_g, old_r) = (g[j], x[j] - g[j]);
            pending[j] -= 1;
            g[j] = if pending[j] == 0 { x[j] } else { g[j] + c };
            let new_r = if pending[j] == 0 { 0.0 } else { x[j] - g[j] };
            pg += ctx.power(g[j]) - ctx.power(old_g);
            pr += ctx.power(new_r) - ctx.power(old_r);
        }
        trace.push((ratio(pg), ratio(pr)));
    }
    Ok(trace)
}

/// Seeded scan over random coefficient vectors and every m.
pub fn quasi_greedy_scan(
    bctx: &BasisContext<f64>,
    trials: u64,
    max_support: u64,
    seed: u64,
) -> Result<QuasiGreedyReport> {
    if trials == 0 || max_support == 0 {
        return Err(Error::Domain(
            "trials and max_support must be positive".into(),
        ));
    }
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| {
            let a = random_coefficients(&mut trial_rng(seed, t), max_support);
            let trace = greedy_ratio_trace(bctx, &a)?;
            let mut proj = Worst::none();
            let mut resid = Worst::none();
            for (m, (gp, gr)) in trace.into_iter().enumerate() {
                proj = proj.max(Worst {
                    ratio: gp,
                    trial: t,
                    m,
                });
                resid = resid.max(Worst {
                    ratio: gr,
                    trial: t,
                    m,
                });
            }
            Ok((proj, resid))
        })
        .collect::<Result<Vec<_>>>()?;
    let (worst_projection, worst_residual) = per_trial
        .into_iter()
        .fold((Worst::none(), Worst::none()), |(p, r), (tp, tr)| {
            (p.max(tp), r.max(tr))
        });
    let (residual_bound, projection_bound) = quasi_greedy_bounds(bctx.ctx());
    let pass = worst_residual.ratio <= residual_bound * (1.0 + SLACK)
        && worst_projection.ratio <= projection_bound * (1.0 + SLACK);
    Ok(QuasiGreedyReport {
        trials,
        max_support,
        seed,
        residual_bound,
        projection_bound,
        worst_residual,
        worst_projection,
        pass,
    })
}

/// ‖1_{ε,A}‖ = ‖Σ_{k∈A} ε_k x_k‖
pub fn signed_sum_norm(bctx: &BasisContext<f64>, set: &[u64], signs: &[f64]) -> Result<f64> {
    let top = set.iter().copied().max().unwrap_or(0) as usize;
    let mut dense = vec![0.0; top];
    for (&k, &e) in set.iter().zip(signs) {
        dense[k as usize - 1] = e;
    }
    Ok(bctx.prefix_power_sum(&dense)?.norm(bctx.ctx()))
}

#[derive(Debug, Clone, Serialize)]
pub struct DemocracyRow {
    pub m: usize,
    pub min: f64,
    pub max: f64,
    /// (1 − 2^{-1/p}) m^{1/p}
    pub lower_bound: f64,
    /// 2 m^{1/p}
    pub upper_bound: f64,
    /// (2m)^{1/p}, what the p-triangle inequality gives.
    pub upper_bound_p_triangle: f64,
    pub samples: u64,
}

impl DemocracyRow {
    pub fn pass(&self) -> bool {
        self.min >= self.lower_bound * (1.0 - SLACK) && self.max <= self.upper_bound * (1.0 + SLACK)
    }

    pub fn pass_p_triangle(&self) -> bool {
        self.min >= self.lower_bound * (1.0 - SLACK)
            && self.max <= self.upper_bound_p_triangle * (1.0 + SLACK)
    }
}

/// Samples A ⊆ [1, 4m] with |A| = m and uniform signs; the all-plus initial
/// segment [1, m] is always included.
pub fn democracy_scan(
    bctx: &BasisContext<f64>,
    m_values: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<DemocracyRow>> {
    let ctx = *bctx.ctx();
    m_values
        .iter()
        .enumerate()
        .map(|(row, &m)| {
            if m == 0 {
                return Err(Error::Domain("democracy needs m >= 1".into()));
            }
            let range = 4 * m as u64;
            let initial: Vec<u64> = (1..=m as u64).collect();
            let first = signed_sum_norm(bctx, &initial, &vec![1.0; m])?;
            let norms = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed ^ ((row as u64) << 40), t);
                    let set = random_subset(&mut rng, range, m);
                    let signs: Vec<f64> = (0..m).map(|_| random_sign(&mut rng)).collect();
                    signed_sum_norm(bctx, &set, &signs)
                })
                .collect::<Result<Vec<f64>>>()?;
            let (min, max) = norms
                .into_iter()
                .fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v)));
            let mp = ctx.root(m as f64);
            Ok(DemocracyRow {
                m,
                min,
                max,
                lower_bound: (1.0 - 1.0 / ctx.two_root()) * mp,
                upper_bound: 2.0 * mp,
                upper_bound_p_triangle: ctx.root(2.0 * m as f64),
                samples: trials + 1,
            })
        })
        .collect()
}

/// k_m^c <= L_m <= (1 + Δ_s^p/(2^p − 1)^2)^{1/p} k_m^c, applied to an interval for k_m^c.
pub fn lebesgue_bounds(ctx: &PContext, km_c: (f64, f64), delta_s: f64) -> Result<(f64, f64)> {
    let (lo, hi) = km_c;
    if lo > hi {
        return Err(Error::BoundOrdering {
            lower: lo,
            upper: hi,
        });
    }
    if delta_s < 1.0 {
        return Err(Error::Domain(format!(
            "delta_s must be at least 1, got {delta_s}"
        )));
    }
    let p = ctx.p();
    let factor = ctx.root(1.0 + delta_s.powf(p) / (2f64.powf(p) - 1.0).powi(2));
    Ok((lo, factor * hi))
}

#[derive(Debug, Clone, Serialize)]
pub struct TruncationReport {
    /// sup ‖U_m f‖/‖f‖ over the sampled family.
    pub measured_bound: f64,
    /// Largest ‖1_{γ,B}‖/‖1_{γ,A}‖ over sampled nested pairs.
    pub max_nested_ratio: f64,
    pub pairs: u64,
    pub pass: bool,
}

/// Measures sup ‖U_m f‖/‖f‖ on random f (m <= `max_m`) and on
/// f = 1_{γ,A} + ε 1_{γ,B} for nested B ⊆ A, whose truncation U_{|B|} f is
/// (1 + ε) 1_{γ,B}; then checks ‖1_{γ,B}‖ <= C ‖1_{γ,A}‖ with the measured C.
pub fn truncation_scan(
    bctx: &BasisContext<f64>,
    trials: u64,
    max_m: usize,
    seed: u64,
) -> Result<TruncationReport> {
    const EPS: f64 = 1e-9;
    let ctx = *bctx.ctx();
    let rows = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let a = random_coefficients(&mut rng, 4 * max_m as u64);
            let fnorm = bctx.synthesize(&a)?.p_norm(&ctx).value;
            let mut best: f64 = 0.0;
            for m in 1..=max_m.min(a.len()) {
                let u = restricted_truncation(&a, m)?;
                best = best.max(bctx.synthesize(&u)?.p_norm(&ctx).value / fnorm);
            }
            let size = 1 + (t as usize % max_m);
            let set_a = random_subset(&mut rng, 4 * max_m as u64, size);
            let inner = 1 + (t as usize / max_m) % size;
            let set_b: Vec<u64> = random_subset(&mut rng, size as u64, inner)
                .into_iter()
                .map(|i| set_a[i as usize - 1])
                .collect();
            let gamma: Vec<f64> = set_a.iter().map(|_| random_sign(&mut rng)).collect();
            let sign_of = |k: u64| gamma[set_a.binary_search(&k).expect("B is inside A")];
            let f: CoefficientVector<f64> = set_a
                .iter()
                .map(|&k| {
                    (
                        k,
                        sign_of(k) * if set_b.contains(&k) { 1.0 + EPS } else { 1.0 },
                    )
                })
                .collect();
            let u = restricted_truncation(&f, set_b.len())?;
            let expected: CoefficientVector<f64> = set_b
                .iter()
                .map(|&k| (k, sign_of(k) * (1.0 + EPS)))
                .collect();
            debug_assert!(u.iter().all(|(k, x)| (x - expected.value(k)).abs() < 1e-15));
            let u_ratio =
                bctx.synthesize(&u)?.p_norm(&ctx).value / bctx.synthesize(&f)?.p_norm(&ctx).value;
            let ones_a: Vec<f64> = set_a.iter().map(|&k| sign_of(k)).collect();
            let ones_b: Vec<f64> = set_b.iter().map(|&k| sign_of(k)).collect();
            let nested =
                signed_sum_norm(bctx, &set_b, &ones_b)? / signed_sum_norm(bctx, &set_a, &ones_a)?;
            Ok((best.max(u_ratio), nested))
        })
        .collect::<Result<Vec<_>>>()?;
    let measured_bound = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let max_nested_ratio = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(TruncationReport {
        measured_bound,
        max_nested_ratio,
        pairs: trials,
        pass: measured_bound.is_finite() && max_nested_ratio <= measured_bound * (1.0 + 1e-6),
    })
}
