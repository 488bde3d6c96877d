//! The dual basis: sup-norms of signed sums of x_j*, column sums, and the
//! norming check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::BasisContext;
use crate::error::{Error, Result};
use crate::random::{random_coefficients, random_sign, random_subset, trial_rng};
use crate::sparse::{Scalar, SparseVector};

/// Σ_{j∈A} ε_j x_j* together with its sup-norm.
#[derive(Debug, Clone)]
pub struct DualCombination<S: Scalar> {
    pub set: Vec<u64>,
    pub signs: Vec<S>,
    pub vector: SparseVector<S>,
    pub sup_norm: S,
}

/// Σ_j c_j x_j* for coefficients c on [1, top], evaluated coordinatewise:
/// T(k) = c_k + w_k Σ_{i∈[σ(k),σ(k+1)), i<=top} T(i), since supp x_j* lies on the
/// ρ-orbit of j. Costs O(top).
pub fn dual_combination_dense<S: Scalar>(bctx: &BasisContext<S>, c: &[S]) -> Result<Vec<S>> {
    let top = c.len() as u64;
    let mut t = c.to_vec();
    if top >= 2 {
        bctx.tables().rho(top)?;
    }
    for j in (2..=top).rev() {
        let r = bctx.tables().rho(j)?;
        let add = t[j as usize - 1].clone() * bctx.weight(r);
        t[r as usize - 1] = t[r as usize - 1].clone() + add;
    }
    Ok(t)
}

/// ‖Σ_{j∈A} ε_j x_j*‖_∞, scanning coordinates 1..=max(A).
pub fn dual_sum_supnorm<S: Scalar>(
    bctx: &BasisContext<S>,
    set: &[u64],
    signs: &[S],
) -> Result<DualCombination<S>> {
    if set.len() != signs.len() {
        return Err(Error::Domain("one sign per index".into()));
    }
    let top = set.iter().copied().max().unwrap_or(0);
    let mut c = vec![S::zero(); top as usize];
    for (&j, e) in set.iter().zip(signs) {
        if j == 0 {
            return Err(Error::Domain("indices start at 1".into()));
        }
        c[j as usize - 1] = c[j as usize - 1].clone() + e.clone();
    }
    let dense = dual_combination_dense(bctx, &c)?;
    let vector: SparseVector<S> = dense
        .into_iter()
        .enumerate()
        .map(|(i, x)| (i as u64 + 1, x))
        .collect();
    Ok(DualCombination {
        set: set.to_vec(),
        signs: signs.to_vec(),
        sup_norm: vector.sup_norm(),
        vector,
    })
}

/// ‖Σ_{n<=n_max} x*_{Λ(n)}‖_∞
pub fn sparse_level_sum<S: Scalar>(bctx: &BasisContext<S>, n_max: u32) -> Result<S> {
    let set = (0..=n_max)
        .map(|n| bctx.tables().lambda(n))
        .collect::<Result<Vec<_>>>()?;
    let ones = vec![S::one(); set.len()];
    Ok(dual_sum_supnorm(bctx, &set, &ones)?.sup_norm)
}

/// Per-m dual quantities on the initial segment [1, m].
#[derive(Debug, Clone, Serialize)]
pub struct DualRow {
    pub m: u64,
    pub gamma: u32,
    /// Σ_{j<=m} x_j*(1)
    pub first_coordinate: f64,
    /// ‖Σ_{j<=m} x_j*‖_∞
    pub positive_sup: f64,
    /// ‖Σ_{j<=m} (−1)^j x_j*‖_∞
    pub alternating_sup: f64,
    /// 4 + 3Γ(m), an upper bound for the Lebesgue constant L_m.
    pub lebesgue_upper: f64,
    /// Γ(m)/8, the quasi-greedy lower bound the two sup-norms imply.
    pub quasi_greedy_lower: f64,
    pub exceeds_gamma: bool,
}

impl DualRow {
    /// Σ x_j*(1) > Γ(m), alternating sup <= 2, and Γ(m) <= 2 ‖Σ x_j*‖_∞.
    pub fn pass(&self) -> bool {
        self.exceeds_gamma
            && self.alternating_sup <= 2.0
            && self.gamma as f64 <= 2.0 * self.positive_sup
    }
}

pub fn dual_row<S: Scalar>(bctx: &BasisContext<S>, m: u64) -> Result<DualRow> {
    let gamma = bctx.tables().gamma(m)?;
    let plus = dual_combination_dense(bctx, &vec![S::one(); m as usize])?;
    let alt: Vec<S> = (1..=m)
        .map(|j| if j % 2 == 0 { S::one() } else { -S::one() })
        .collect();
    let alt = dual_combination_dense(bctx, &alt)?;
    let sup = |v: &[S]| {
        v.iter()
            .map(|x| x.abs())
            .fold(S::zero(), |a, b| if b > a { b } else { a })
    };
    let first = plus[0].clone();
    let g = S::from_rational(&BigRational::from_integer(BigInt::from(gamma)));
    Ok(DualRow {
        m,
        gamma,
        first_coordinate: first.to_f64(),
        positive_sup: sup(&plus).to_f64(),
        alternating_sup: sup(&alt).to_f64(),
        lebesgue_upper: 4.0 + 3.0 * gamma as f64,
        quasi_greedy_lower: gamma as f64 / 8.0,
        exceeds_gamma: first > g,
    })
}

/// Maximum sup-norm of sampled ±-sums over |A| = m inside [1, 4m], against (1+Γ(m))^{1/p}.
#[derive(Debug, Clone, Serialize)]
pub struct DualDemocracyRow {
    pub m: u64,
    pub max_sup: f64,
    pub bound: f64,
    pub pass: bool,
}

pub fn dual_democracy_scan(
    bctx: &BasisContext<f64>,
    m_values: &[u64],
    trials: u64,
    seed: u64,
) -> Result<Vec<DualDemocracyRow>> {
    m_values
        .iter()
        .enumerate()
        .map(|(row, &m)| {
            let gamma = bctx.tables().gamma(m)?;
            let max_sup = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(seed ^ ((row as u64) << 40), t);
                    let set = random_subset(&mut rng, 4 * m, m as usize);
                    let signs: Vec<f64> = set.iter().map(|_| random_sign(&mut rng)).collect();
                    Ok::<f64, Error>(dual_sum_supnorm(bctx, &set, &signs)?.sup_norm)
                })
                .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
            let bound = bctx.ctx().root(1.0 + gamma as f64);
            Ok(DualDemocracyRow {
                m,
                max_sup,
                bound,
                pass: max_sup <= bound * (1.0 + 1e-9),
            })
        })
        .collect()
}

/// Ranges of equal value in one level of column k.
type LevelRanges = Vec<(BigRational, u64, u64)>;

fn next_level(
    bctx_tables: &crate::indexing::IndexTables,
    level: &LevelRanges,
) -> Result<Option<LevelRanges>> {
    let tables = bctx_tables;
    let mut out: LevelRanges = Vec::new();
    for (value, start, end) in level {
        if *end > tables.max_index() + 1 {
            return Ok(None);
        }
        let mut j = *start;
        while j < *end {
            let d = tables.d(j);
            let mut k = j + 1;
            while k < *end && tables.d(k) == d {
                k += 1;
            }
            let child = value / BigInt::from(d);
            let (s, e) = (tables.sigma(j)?, tables.sigma(k)?);
            match out.last_mut() {
                Some(last) if last.0 == child && last.2 == s => last.2 = e,
                _ => out.push((child, s, e)),
            }
            j = k;
        }
    }
    Ok(Some(out))
}

/// Σ_{j∈J_{k,n}} |x_j*(k)|^p for n = 0, 1, ... while level n fits in the
/// tables, at most `max_levels` levels. Exact: each term is a product of 1/d.
pub fn column_level_power_sums<S: Scalar>(
    bctx: &BasisContext<S>,
    k: u64,
    max_levels: u32,
) -> Result<Vec<BigRational>> {
    if k == 0 {
        return Err(Error::Domain("columns start at 1".into()));
    }
    let mut level: LevelRanges = vec![(BigRational::one(), k, k + 1)];
    let mut sums = Vec::new();
    for _ in 0..max_levels {
        sums.push(level.iter().map(|(v, s, e)| v * BigInt::from(e - s)).sum());
        match next_level(bctx.tables(), &level)? {
            Some(next) => level = next,
            None => break,
        }
    }
    Ok(sums)
}

#[derive(Debug, Clone, Serialize)]
pub struct ColumnQBound {
    pub k: u64,
    pub q: f64,
    /// Partial sums of Σ_j |x_j*(k)|^q after each level.
    pub partial_sums: Vec<f64>,
    pub bound: f64,
}

impl ColumnQBound {
    pub fn total(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }

    pub fn pass(&self) -> bool {
        self.partial_sums.windows(2).all(|w| w[0] <= w[1]) && self.total() <= self.bound
    }
}

/// Σ_j |x_j*(k)|^q truncated at the tables, against 1/(1 − 2^{(p−q)/p}).
pub fn column_q_bound<S: Scalar>(
    bctx: &BasisContext<S>,
    k: u64,
    q: f64,
    max_levels: u32,
) -> Result<ColumnQBound> {
    let p = bctx.ctx().p();
    if q.is_nan() || q <= p {
        return Err(Error::Domain(format!("q must exceed p = {p}")));
    }
    let ratio = q / p;
    let mut level: LevelRanges = vec![(BigRational::one(), k, k + 1)];
    let mut partial_sums = Vec::new();
    let mut acc = 0.0;
    for _ in 0..max_levels {
        acc += level
            .iter()
            .map(|(v, s, e)| (e - s) as f64 * <BigRational as Scalar>::to_f64(v).powf(ratio))
            .sum::<f64>();
        partial_sums.push(acc);
        match next_level(bctx.tables(), &level)? {
            Some(next) => level = next,
            None => break,
        }
    }
    Ok(ColumnQBound {
        k,
        q,
        partial_sums,
        bound: 1.0 / (1.0 - 2f64.powf((p - q) / p)),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NormingReport {
    /// max |⟨y, x⟩| over the sampled and constructed unit vectors.
    pub best: f64,
    pub sup_norm: f64,
    /// 2^{-1/p} ‖S_N y‖_∞ with N = max supp(y).
    pub constructive_lower: f64,
    pub pass: bool,
}

/// Pairs y with random unit vectors of X_p and with x = 2^{-1/p} z_j, where
/// z_j is the cleared vector with S_N z_j = e_j, so ⟨y, x⟩ = 2^{-1/p} y(j).
pub fn norming_check(
    bctx: &BasisContext<f64>,
    y: &SparseVector<f64>,
    trials: u64,
    seed: u64,
) -> Result<NormingReport> {
    let ctx = *bctx.ctx();
    let sup_norm = y.sup_norm();
    let Some(n) = y.max_index() else {
        return Ok(NormingReport {
            best: 0.0,
            sup_norm: 0.0,
            constructive_lower: 0.0,
            pass: true,
        });
    };
    let scale = 1.0 / ctx.two_root();
    let constructive = y
        .support()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&j| {
            let x = bctx.cleared_vector(j, n)?.scale(&scale);
            Ok::<f64, Error>(y.pairing(&x).abs())
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
    let sampled = (0..trials)
        .into_par_iter()
        .map(|t| {
            let a = random_coefficients(&mut trial_rng(seed, t), n.max(2));
            let x = bctx.synthesize(&a)?;
            let norm = x.p_norm(&ctx).value;
            Ok::<f64, Error>(y.pairing(&x).abs() / norm)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;
    let best = constructive.max(sampled);
    let constructive_lower = scale * sup_norm;
    let tol = 1e-12 * sup_norm.max(1.0);
    Ok(NormingReport {
        best,
        sup_norm,
        constructive_lower,
        pass: best <= sup_norm + tol && best >= constructive_lower - tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexing::DeltaSpec;
    use crate::sparse::PContext;

    fn classical<S: Scalar>(p: f64) -> BasisContext<S> {
        BasisContext::from_delta(
            DeltaSpec::constant(2).unwrap(),
            1 << 12,
            PContext::new(p).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn signed_sums() {
        let b = classical::<BigRational>(1.0);
        let one = BigRational::one();
        let c = dual_sum_supnorm(&b, &[1, 2, 3], &[one.clone(), one.clone(), one.clone()]).unwrap();
        assert_eq!(c.vector.to_text(), "1 2\n2 1\n3 1\n");
        let c =
            dual_sum_supnorm(&b, &[1, 2, 3], &[-one.clone(), one.clone(), -one.clone()]).unwrap();
        assert_eq!(c.vector.to_text(), "1 -1\n2 1\n3 -1\n");
        assert_eq!(c.sup_norm, one);
        assert!(dual_sum_supnorm::<BigRational>(&b, &[], &[])
            .unwrap()
            .vector
            .is_empty());
        for j in [1, 7, 40] {
            let direct = b.dual_vector(j).unwrap();
            assert_eq!(
                dual_sum_supnorm(&b, &[j], &[BigRational::one()])
                    .unwrap()
                    .vector,
                direct
            );
        }
    }

    #[test]
    fn columns() {
        let b = classical::<BigRational>(0.5);
        for s in column_level_power_sums(&b, 3, 8).unwrap() {
            assert!(s.is_one());
        }
        let c = column_q_bound(&b, 1, 1.0, 12).unwrap();
        assert_eq!(c.bound, 2.0);
        assert!(c.pass() && c.partial_sums.len() == 12);
        assert!(sparse_level_sum(&b, 6).unwrap() <= BigRational::from_integer(2.into()));
    }

    #[test]
    fn norming_unit_vector() {
        let b = classical::<f64>(0.5);
        let r = norming_check(&b, &SparseVector::unit(5), 50, 1).unwrap();
        assert!(r.pass);
        assert!(r.best >= 0.25 - 1e-12 && r.sup_norm == 1.0);
    }
}
