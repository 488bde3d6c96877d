//! Upper bounds and constructive lower bounds for the conditionality
//! constants k_m and k̃_m.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::BasisContext;
use crate::error::{Error, Result};
use crate::sparse::{PContext, PowerSum, Scalar, SparseVector};

/// Columns scanned exactly by [`km_upper`]; later columns get the tail bound.
pub const DEFAULT_COLUMNS: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Frontier {
    /// Indices [start, end), all with the same column value.
    Known { value: f64, start: u64, end: u64 },
    /// Nodes beyond the tables; `value` dominates everything below them.
    Bounded { value: f64 },
}

impl Frontier {
    fn value(&self) -> f64 {
        match *self {
            Frontier::Known { value, .. } | Frontier::Bounded { value } => value,
        }
    }
}

impl Eq for Frontier {}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        let start = |f: &Frontier| match *f {
            Frontier::Known { start, .. } => start,
            Frontier::Bounded { .. } => u64::MAX,
        };
        self.value()
            .total_cmp(&other.value())
            .then_with(|| start(other).cmp(&start(self)))
    }
}

/// Float sum that tracks its rounding errors exactly and rounds up on demand,
/// so that an exactly representable result stays exact.
#[derive(Debug, Default, Clone, Copy)]
struct UpwardSum {
    total: f64,
    error: f64,
}

impl UpwardSum {
    /// Adds count × value.
    fn add_product(&mut self, count: f64, value: f64) {
        let product = count * value;
        let e_mul = count.mul_add(value, -product);
        let sum = self.total + product;
        let bv = sum - self.total;
        let e_add = (self.total - (sum - bv)) + (product - bv);
        self.total = sum;
        self.error += e_mul.abs() + e_add.abs();
    }

    fn upper(&self) -> f64 {
        if self.error == 0.0 {
            self.total
        } else {
            (self.total + self.error.next_up()).next_up()
        }
    }
}

/// value / d, rounded up when inexact.
fn divide_up(value: f64, d: f64) -> f64 {
    let q = value / d;
    if q.mul_add(d, -value) < 0.0 {
        q.next_up()
    } else {
        q
    }
}

/// Upper bound for the sum of the m largest |x_j*(k)|^p.
///
/// |x_j*(k)|^p is a product of 1/d along the ρ-orbit, so the column is a tree
/// rooted at k whose values shrink going down; best-first search visits the
/// top m exactly. Values are rounded up, so the result is an upper bound even
/// when they are not representable. Below the tabulated range the search stops with the bound
/// (remaining count) × (largest frontier value).
pub fn column_top_power(bctx_tables: &crate::indexing::IndexTables, k: u64, m: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("columns start at 1".into()));
    }
    let tables = bctx_tables;
    let mut heap = BinaryHeap::new();
    heap.push(Frontier::Known {
        value: 1.0,
        start: k,
        end: k + 1,
    });
    let mut remaining = m;
    let mut total = UpwardSum::default();
    while remaining > 0 {
        let Some(top) = heap.pop() else { break };
        match top {
            Frontier::Bounded { value } => {
                total.add_product(remaining as f64, value);
                break;
            }
            Frontier::Known { value, start, end } => {
                let take = remaining.min(end - start);
                total.add_product(take as f64, value);
                remaining -= take;
                if remaining == 0 {
                    break;
                }
                for j in start..start + take {
                    let child = divide_up(value, tables.d(j) as f64);
                    if j <= tables.max_index() {
                        let block = tables.block(j)?;
                        heap.push(Frontier::Known {
                            value: child,
                            start: block.start,
                            end: block.end,
                        });
                    } else {
                        heap.push(Frontier::Bounded { value: child });
                    }
                }
            }
        }
    }
    Ok(total.upper())
}

/// max over columns k <= k_max of (sum of the m largest |x_j*(k)|^p)^{1/p}.
pub fn t_norm_top<S: Scalar>(bctx: &BasisContext<S>, m: u64, k_max: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("t_norm_top needs m >= 1".into()));
    }
    let tables = bctx.tables();
    let best = (1..=k_max)
        .into_par_iter()
        .map(|k| column_top_power(tables, k, m))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
    Ok(bctx.ctx().root(best))
}

/// Bound on the top-m column sum valid for every column k >= `from`, when δ is
/// nondecreasing. Level n of column k sums to 1 and its entries are at most
/// μ_n, the value along the leftmost chain; μ_n only shrinks as k grows. The
/// bound is the best choice of m entries under those two constraints.
pub fn column_tail_power(tables: &crate::indexing::IndexTables, from: u64, m: u64) -> Result<f64> {
    if !tables.is_nondecreasing() {
        return Err(Error::NotMonotone);
    }
    let d_beyond = tables.d(tables.max_index() + 1) as f64;
    let mut index = Some(from);
    let mut mu = 1.0f64;
    // (value, count) classes: ⌊1/μ⌋ entries of μ and one remainder per level.
    let mut classes: Vec<(f64, f64)> = Vec::new();
    let target = m as f64;
    loop {
        let count_above = classes
            .iter()
            .filter(|c| c.0 >= mu)
            .map(|c| c.1)
            .sum::<f64>();
        if count_above >= target {
            break;
        }
        let full = (1.0 / mu).floor();
        classes.push((mu, full));
        let covered = full * mu;
        let rest = if full.mul_add(mu, -covered) < 0.0 {
            (1.0 - covered).next_up()
        } else {
            1.0 - covered
        };
        if rest > 0.0 {
            classes.push((rest, 1.0));
        }
        let d = match index {
            Some(j) => tables.d(j) as f64,
            None => d_beyond,
        };
        mu = divide_up(mu, d);
        index = match index {
            Some(j) if j <= tables.max_index() + 1 => {
                Some(tables.sigma(j)?).filter(|&s| s <= tables.max_index() + 1)
            }
            _ => None,
        };
    }
    classes.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut remaining = target;
    let mut total = UpwardSum::default();
    for (value, count) in classes {
        let take = remaining.min(count);
        total.add_product(take, value);
        remaining -= take;
        if remaining <= 0.0 {
            break;
        }
    }
    Ok(total.upper())
}

/// Upper bound for k_m: min(2^{1/p} T, 2^{1/p} (1+Γ(m))^{1/p}), where T bounds
/// the top-m column norms over all columns.
pub fn km_upper<S: Scalar>(bctx: &BasisContext<S>, m: u64) -> Result<f64> {
    km_upper_with(bctx, m, DEFAULT_COLUMNS)
}

pub fn km_upper_with<S: Scalar>(bctx: &BasisContext<S>, m: u64, columns: u64) -> Result<f64> {
    let tables = bctx.tables();
    if !tables.is_nondecreasing() {
        return Err(Error::NotMonotone);
    }
    let ctx = bctx.ctx();
    let k_max = columns.clamp(1, tables.max_index());
    let head = t_norm_top(bctx, m, k_max)?;
    let tail = ctx.root(column_tail_power(tables, k_max + 1, m)?);
    let t = head.max(tail);
    let gamma = tables.gamma(m)? as f64;
    Ok(ctx.two_root() * t.min(ctx.root(1.0 + gamma)))
}

/// Lower and upper bounds for k_m^c from bounds on k_m, via the p-triangle
/// inequality: ‖Id − S_A‖^p <= 1 + ‖S_A‖^p and ‖S_A‖^p <= 1 + ‖Id − S_A‖^p.
pub fn complement_bounds(ctx: &PContext, km: (f64, f64)) -> (f64, f64) {
    let p = ctx.p();
    let lower = ctx.root((km.0.powf(p) - 1.0).max(1.0));
    (lower, ctx.root(1.0 + km.1.powf(p)))
}

/// The u/v witness of size m, kept as coefficients in the basis:
/// u_m = Σ b_k x_k and v_m = Σ c_k x_k.
#[derive(Debug, Clone)]
pub struct UvWitness<S: Scalar> {
    pub m: u64,
    pub u_coefficients: Vec<S>,
    pub v_coefficients: Vec<S>,
    pub u_power: PowerSum,
    pub v_power: PowerSum,
    /// 2^{-1/p} ‖v_m‖ / ‖u_m‖
    pub lower_estimate: f64,
}

impl<S: Scalar> UvWitness<S> {
    /// Whether ‖v_m‖^p > 1 + Γ(m), certain in exact mode.
    pub fn v_exceeds(&self, gamma: u32) -> bool {
        self.v_power
            .certainly_gt(&PowerSum::from_integer(1 + gamma as i64))
    }
}

/// Runs u_{k+1} = u_k − u_k(k+1) x_{k+1}, v_{k+1} = v_k − sign(v_k(k+1)) u_k(k+1) x_{k+1}
/// on coefficients. With r = ρ(k+1), u_k(k+1) = −b_r w_r and v_k(k+1) = −c_r w_r,
/// so the vectors never need to be materialized.
pub fn uv_witness<S: Scalar>(bctx: &BasisContext<S>, m: u64) -> Result<UvWitness<S>> {
    if m == 0 {
        return Err(Error::Domain("uv witness needs m >= 1".into()));
    }
    let tables = bctx.tables();
    tables.sigma(m + 1)?;
    let mut b = vec![S::one()];
    let mut c = vec![S::one()];
    for j in 2..=m {
        let r = tables.rho(j)? as usize;
        let w = bctx.weight(r as u64);
        let u_next = -(b[r - 1].clone() * w.clone());
        let v_next = -(c[r - 1].clone() * w);
        b.push(-u_next.clone());
        c.push(-(v_next.sign_or_one() * u_next));
    }
    let u_power = bctx.prefix_power_sum(&b)?;
    let v_power = bctx.prefix_power_sum(&c)?;
    if !u_power.agrees_with(&PowerSum::from_integer(2), 1e-9) {
        return Err(Error::Invariant(format!(
            "‖u_{m}‖^p = {u_power}, expected 2"
        )));
    }
    let ctx = bctx.ctx();
    let lower_estimate = ctx.root(v_power.lower_f64() / u_power.upper_f64()) / ctx.two_root();
    Ok(UvWitness {
        m,
        u_coefficients: b,
        v_coefficients: c,
        u_power,
        v_power,
        lower_estimate,
    })
}

/// One step of the explicit recursion with both sides of the norm identity
/// ‖v_{k+1}‖^p − ‖v_k‖^p = (|v_k(k+1)| + |u_k(k+1)|)^p + |u_k(k+1)|^p − |v_k(k+1)|^p.
#[derive(Debug, Clone)]
pub struct UvStep {
    pub k: u64,
    pub u_next_coordinate: f64,
    pub expected_coordinate: f64,
    pub lhs: PowerSum,
    pub rhs: PowerSum,
}

/// The explicit vectors u_m and v_m, plus the per-step trace.
#[derive(Debug, Clone)]
pub struct UvVectors<S: Scalar> {
    pub u: SparseVector<S>,
    pub v: SparseVector<S>,
    pub steps: Vec<UvStep>,
}

impl<S: Scalar> UvVectors<S> {
    /// Whether every step satisfies the identity and u_k(k+1) = −x_{k+1}*(1).
    pub fn consistent(&self) -> bool {
        self.steps.iter().all(|s| {
            s.lhs.agrees_with(&s.rhs, 1e-9)
                && (s.u_next_coordinate - s.expected_coordinate).abs()
                    <= 1e-12 * s.expected_coordinate.abs().max(1.0)
        })
    }
}

pub fn uv_vectors<S: Scalar>(bctx: &BasisContext<S>, m: u64) -> Result<UvVectors<S>> {
    if m == 0 {
        return Err(Error::Domain("uv witness needs m >= 1".into()));
    }
    let ctx = bctx.ctx();
    let mut u = bctx.basis_vector(1)?;
    let mut v = u.clone();
    let mut steps = Vec::new();
    for k in 1..m {
        let x = bctx.basis_vector(k + 1)?;
        let uk = u.value(k + 1);
        let vk = v.value(k + 1);
        let before = v.p_power(ctx);
        u.axpy(&(-uk.clone()), &x);
        v.axpy(&(-(vk.sign_or_one() * uk.clone())), &x);
        let after = v.p_power(ctx);
        let lhs = after + before.scale(&BigRational::from_integer(BigInt::from(-1)));
        let sum = vk.abs() + uk.abs();
        let rhs = sum.p_power(ctx)
            + uk.p_power(ctx)
            + vk.p_power(ctx)
                .scale(&BigRational::from_integer(BigInt::from(-1)));
        steps.push(UvStep {
            k,
            u_next_coordinate: uk.to_f64(),
            expected_coordinate: -bctx.dual_entry(k + 1, 1)?.to_f64(),
            lhs,
            rhs,
        });
    }
    Ok(UvVectors { u, v, steps })
}

/// Certified interval for one m, with its reference (1+Γ(m))^{1/p}.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub m: u64,
    pub gamma: u32,
    /// None when δ is not nondecreasing.
    pub certified_upper: Option<f64>,
    pub witnessed_lower: f64,
    pub reference: f64,
    pub v_power: f64,
    pub v_exceeds: bool,
    pub witness: String,
}

impl BoundReport {
    pub fn consistent(&self) -> bool {
        self.certified_upper
            .is_none_or(|u| self.witnessed_lower <= u * (1.0 + 1e-9))
    }

    /// 2^{-2/p}(1+Γ)^{1/p} <= lower and upper <= 2^{1/p}(1+Γ)^{1/p}.
    pub fn sandwiched(&self, ctx: &PContext) -> bool {
        let two = ctx.two_root();
        let low_ok = self.witnessed_lower >= self.reference / (two * two) * (1.0 - 1e-9);
        let high_ok = self
            .certified_upper
            .is_some_and(|u| u <= two * self.reference * (1.0 + 1e-9));
        low_ok && high_ok && self.v_exceeds
    }
}

pub fn bound_report<S: Scalar>(bctx: &BasisContext<S>, m: u64) -> Result<BoundReport> {
    let gamma = bctx.tables().gamma(m)?;
    let witness = uv_witness(bctx, m)?;
    let certified_upper = match km_upper(bctx, m) {
        Ok(u) => Some(u),
        Err(Error::NotMonotone) => None,
        Err(e) => return Err(e),
    };
    Ok(BoundReport {
        m,
        gamma,
        certified_upper,
        witnessed_lower: witness.lower_estimate,
        reference: bctx.ctx().root(1.0 + gamma as f64),
        v_power: witness.v_power.lower_f64(),
        v_exceeds: witness.v_exceeds(gamma),
        witness: format!("A = [1, {m}], f = u_{m}, S_A f = v_{m}"),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub exponent: f64,
    pub rows: Vec<BoundReport>,
    /// max lower / (ln m)^exponent
    pub lower_over_log: f64,
    /// max upper / (ln m)^exponent, when uppers exist
    pub upper_over_log: Option<f64>,
    /// (min lower, max upper) / Γ^{1/p}(m), nondecreasing δ only
    pub gamma_band: Option<(f64, f64)>,
}

/// Ratios of the bounds against (ln m)^{1/p}.
pub fn envelope_check<S: Scalar>(bctx: &BasisContext<S>, m_grid: &[u64]) -> Result<EnvelopeReport> {
    envelope_check_with(bctx, m_grid, bctx.ctx().inv_p())
}

/// Ratios of the bounds against (ln m)^exponent.
pub fn envelope_check_with<S: Scalar>(
    bctx: &BasisContext<S>,
    m_grid: &[u64],
    exponent: f64,
) -> Result<EnvelopeReport> {
    if let Some(&m) = m_grid.iter().find(|&&m| m < 2) {
        return Err(Error::Domain(format!(
            "envelope grid needs m >= 2, got {m}"
        )));
    }
    let rows = m_grid
        .par_iter()
        .map(|&m| bound_report(bctx, m))
        .collect::<Result<Vec<_>>>()?;
    let env = |m: u64| (m as f64).ln().powf(exponent);
    let lower_over_log = rows
        .iter()
        .map(|r| r.witnessed_lower / env(r.m))
        .fold(0.0, f64::max);
    let uppers: Option<Vec<f64>> = rows
        .iter()
        .map(|r| r.certified_upper.map(|u| u / env(r.m)))
        .collect();
    let upper_over_log = uppers.map(|u| u.into_iter().fold(0.0, f64::max));
    let ctx = bctx.ctx();
    let gamma_band = if bctx.tables().is_nondecreasing() {
        let scaled = |r: &BoundReport, x: f64| x / ctx.root(r.gamma.max(1) as f64);
        let lo = rows
            .iter()
            .map(|r| scaled(r, r.witnessed_lower))
            .fold(f64::INFINITY, f64::min);
        let hi = rows
            .iter()
            .filter_map(|r| r.certified_upper.map(|u| scaled(r, u)))
            .fold(0.0, f64::max);
        Some((lo, hi))
    } else {
        None
    };
    Ok(EnvelopeReport {
        exponent,
        rows,
        lower_over_log,
        upper_over_log,
        gamma_band,
    })
}
