//! The basis x_k, its dual functionals x_j*, and the maps built from them.

use std::collections::BTreeSet;
use std::ops::{Deref, DerefMut};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::indexing::{DeltaSpec, IndexTables};
use crate::sparse::{PContext, PowerSum, Scalar, SparseVector};

/// Cached weights beyond this index are recomputed on demand in exact mode.
const EXACT_WEIGHT_CACHE: u64 = 1 << 14;

/// Coefficients (a_k) with respect to the basis.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoefficientVector<S: Scalar>(pub SparseVector<S>);

impl<S: Scalar> CoefficientVector<S> {
    pub fn new() -> Self {
        CoefficientVector(SparseVector::new())
    }

    pub fn into_vector(self) -> SparseVector<S> {
        self.0
    }
}

impl<S: Scalar> Deref for CoefficientVector<S> {
    type Target = SparseVector<S>;

    fn deref(&self) -> &SparseVector<S> {
        &self.0
    }
}

impl<S: Scalar> DerefMut for CoefficientVector<S> {
    fn deref_mut(&mut self) -> &mut SparseVector<S> {
        &mut self.0
    }
}

impl<S: Scalar> FromIterator<(u64, S)> for CoefficientVector<S> {
    fn from_iter<I: IntoIterator<Item = (u64, S)>>(iter: I) -> Self {
        CoefficientVector(SparseVector::from_entries(iter))
    }
}

impl<S: Scalar> From<SparseVector<S>> for CoefficientVector<S> {
    fn from(v: SparseVector<S>) -> Self {
        CoefficientVector(v)
    }
}

/// Index tables, the exponent p, and the weights w_k = d_k^{-1/p}.
#[derive(Debug, Clone)]
pub struct BasisContext<S: Scalar> {
    tables: Arc<IndexTables>,
    ctx: PContext,
    weights: Vec<S>,
}

/// The vectors x_{k,n}, k <= n, and the Banach–Mazur bound 2^{1/p}.
#[derive(Debug, Clone)]
pub struct OrthogonalSection<S: Scalar> {
    pub vectors: Vec<SparseVector<S>>,
    pub distance_bound: f64,
}

impl<S: Scalar> BasisContext<S> {
    /// Exact scalars require 1/p to be a positive integer.
    pub fn new(tables: Arc<IndexTables>, ctx: PContext) -> Result<Self> {
        if S::EXACT {
            ctx.require_exact()?;
        }
        let cached = if S::EXACT {
            tables.max_index().min(EXACT_WEIGHT_CACHE)
        } else {
            tables.max_index()
        };
        let mut weights = Vec::with_capacity(cached as usize + 1);
        weights.push(S::zero());
        for k in 1..=cached {
            weights.push(S::inv_root(tables.d(k), &ctx));
        }
        Ok(BasisContext {
            tables,
            ctx,
            weights,
        })
    }

    pub fn from_delta(delta: DeltaSpec, max_index: u64, ctx: PContext) -> Result<Self> {
        Self::new(Arc::new(IndexTables::new(delta, max_index)?), ctx)
    }

    /// The same tables and p with another scalar type.
    pub fn with_scalar<T: Scalar>(&self) -> Result<BasisContext<T>> {
        BasisContext::new(self.tables.clone(), self.ctx)
    }

    pub fn tables(&self) -> &IndexTables {
        &self.tables
    }

    pub fn shared_tables(&self) -> Arc<IndexTables> {
        self.tables.clone()
    }

    pub fn ctx(&self) -> &PContext {
        &self.ctx
    }

    /// w_k = d_k^{-1/p}
    pub fn weight(&self, k: u64) -> S {
        match self.weights.get(k as usize) {
            Some(w) if k > 0 => w.clone(),
            _ => S::inv_root(self.tables.d(k), &self.ctx),
        }
    }

    /// w_k^p = 1/d_k, exact for every p.
    pub fn weight_power(&self, k: u64) -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(self.tables.d(k)))
    }

    /// x_k = e_k − w_k Σ_{j∈[σ(k),σ(k+1))} e_j
    pub fn basis_vector(&self, k: u64) -> Result<SparseVector<S>> {
        let block = self.tables.block(k)?;
        let w = -self.weight(k);
        let mut v = SparseVector::unit(k);
        for j in block {
            v.set(j, w.clone());
        }
        Ok(v)
    }

    /// x_j* = Σ_{n=0}^{Γ(j)} (Π_{r=1}^n w_{ρ^r(j)}) e_{ρ^n(j)}
    pub fn dual_vector(&self, j: u64) -> Result<SparseVector<S>> {
        let mut v = SparseVector::new();
        let mut coef = S::one();
        let mut cur = j;
        v.set(cur, coef.clone());
        while cur > 1 {
            cur = self.tables.rho(cur)?;
            coef = coef * self.weight(cur);
            v.set(cur, coef.clone());
        }
        Ok(v)
    }

    /// x_j*(k), zero unless k lies on the ρ-orbit of j.
    pub fn dual_entry(&self, j: u64, k: u64) -> Result<S> {
        let mut coef = S::one();
        let mut cur = j;
        while cur > k {
            cur = self.tables.rho(cur)?;
            coef = coef * self.weight(cur);
        }
        Ok(if cur == k { coef } else { S::zero() })
    }

    /// Σ a_k x_k, coordinatewise x(j) = a_j − a_{ρ(j)} w_{ρ(j)}.
    pub fn synthesize(&self, a: &CoefficientVector<S>) -> Result<SparseVector<S>> {
        let mut x = SparseVector::new();
        for (k, ak) in a.iter() {
            x.add_at(k, ak.clone());
            let c = -(ak.clone() * self.weight(k));
            for j in self.tables.block(k)? {
                x.add_at(j, c.clone());
            }
        }
        Ok(x)
    }

    /// (⟨x_j*, v⟩)_{j <= up_to}, via ⟨x_j*, v⟩ = v(j) + w_{ρ(j)} ⟨x_{ρ(j)}*, v⟩.
    pub fn analyze(&self, v: &SparseVector<S>, up_to: u64) -> Result<CoefficientVector<S>> {
        if up_to == 0 || v.is_empty() {
            return Ok(CoefficientVector::new());
        }
        if up_to >= self.tables.rho_limit() {
            return Err(crate::error::capacity(format!("analyze up to {up_to}")));
        }
        let mut c: Vec<S> = Vec::with_capacity(up_to as usize + 1);
        c.push(S::zero());
        c.push(v.value(1));
        for j in 2..=up_to {
            let r = self.tables.rho(j)?;
            let inherited = c[r as usize].clone() * self.weight(r);
            c.push(v.value(j) + inherited);
        }
        Ok(c.into_iter()
            .enumerate()
            .skip(1)
            .map(|(j, x)| (j as u64, x))
            .collect())
    }

    /// ‖Σ_{k<=m} c_k x_k‖^p for dense coefficients c = (c_1, ..., c_m), in O(m)
    /// plus the length of the trailing blocks. Nothing is materialized.
    pub fn prefix_power_sum(&self, c: &[S]) -> Result<PowerSum> {
        let m = c.len() as u64;
        if m == 0 {
            return Ok(PowerSum::zero());
        }
        let ctx = &self.ctx;
        let mut head = Vec::with_capacity(c.len());
        head.push(c[0].clone());
        for j in 2..=m {
            let r = self.tables.rho(j)?;
            head.push(c[j as usize - 1].clone() - c[r as usize - 1].clone() * self.weight(r));
        }
        let mut total = sum_powers(head.iter(), ctx);
        for r in 1..=m {
            let block = self.tables.block(r)?;
            let tail = block.end.saturating_sub(block.start.max(m + 1));
            if tail > 0 {
                let entry = (c[r as usize - 1].clone() * self.weight(r)).p_power(ctx);
                total = total + entry.scale(&BigRational::from_integer(BigInt::from(tail)));
            }
        }
        Ok(total)
    }

    /// The vector x with x(i) = 0 for i <= n, i ≠ j, x(j) = 1 and ‖x‖^p = 2:
    /// start from x_j and clear coordinates j+1..=n with x ← x − x(i) x_i.
    pub fn cleared_vector(&self, j: u64, n: u64) -> Result<SparseVector<S>> {
        if j == 0 {
            return Err(Error::Domain("indices start at 1".into()));
        }
        let mut x = self.basis_vector(j)?;
        for i in j + 1..=n {
            let xi = x.value(i);
            if !xi.is_zero() {
                x.axpy(&(-xi), &self.basis_vector(i)?);
            }
        }
        Ok(x)
    }

    /// x_{k,n} for k = 1..=n.
    pub fn orthogonalized_section(&self, n: u64) -> Result<OrthogonalSection<S>> {
        self.tables.sigma(n + 1)?;
        let vectors = (1..=n)
            .map(|k| self.cleared_vector(k, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(OrthogonalSection {
            vectors,
            distance_bound: self.ctx.two_root(),
        })
    }

    /// Σ_{k<=n} a_k x_{k,n}: the element of span(x_1..x_n) whose first n
    /// coordinates are a.
    pub fn lp_isomorphism(&self, a: &SparseVector<S>, n: u64) -> Result<SparseVector<S>> {
        let b = self.isomorphism_coefficients(a, n)?;
        let coeffs: CoefficientVector<S> = b
            .into_iter()
            .enumerate()
            .map(|(j, x)| (j as u64 + 1, x))
            .collect();
        self.synthesize(&coeffs)
    }

    /// ‖Σ_{k<=n} a_k x_{k,n}‖^p without building the vector.
    pub fn lp_isomorphism_power(&self, a: &SparseVector<S>, n: u64) -> Result<PowerSum> {
        self.prefix_power_sum(&self.isomorphism_coefficients(a, n)?)
    }

    /// Basis coefficients b_1..b_n of Σ a_k x_{k,n}: b_j = a_j + w_{ρ(j)} b_{ρ(j)}.
    fn isomorphism_coefficients(&self, a: &SparseVector<S>, n: u64) -> Result<Vec<S>> {
        if let Some(top) = a.max_index() {
            if top > n {
                return Err(Error::Domain(format!(
                    "coefficient at {top} beyond dimension {n}"
                )));
            }
        }
        let mut b: Vec<S> = Vec::with_capacity(n as usize);
        if n == 0 {
            return Ok(b);
        }
        b.push(a.value(1));
        for j in 2..=n {
            let r = self.tables.rho(j)?;
            let v = a.value(j) + b[r as usize - 1].clone() * self.weight(r);
            b.push(v);
        }
        Ok(b)
    }

    /// n_1 = 2 and n_{i+1} = least j > n_i with ρ(j) ∉ {n_1, ..., n_i}.
    /// The supports of the x_{n_i} are pairwise disjoint.
    pub fn embedding_indices(&self, count: usize) -> Result<Vec<u64>> {
        let mut chosen = Vec::with_capacity(count);
        let mut set = BTreeSet::new();
        let mut j = 2;
        while chosen.len() < count {
            if !set.contains(&self.tables.rho(j)?) {
                chosen.push(j);
                set.insert(j);
            }
            j += 1;
        }
        Ok(chosen)
    }

    /// J(x) = 2^{-1/p} Σ x(k) x_{n_k}
    pub fn embed(&self, x: &SparseVector<S>) -> Result<SparseVector<S>> {
        let Some(top) = x.max_index() else {
            return Ok(SparseVector::new());
        };
        let idx = self.embedding_indices(top as usize)?;
        let scale = S::one() / S::two_root(&self.ctx);
        let coeffs: CoefficientVector<S> = x
            .iter()
            .map(|(k, xk)| (idx[k as usize - 1], scale.clone() * xk.clone()))
            .collect();
        self.synthesize(&coeffs)
    }

    /// P(y) = 2^{1/p} Σ_k ⟨x*_{n_k}, S_{A_{n_k}} y⟩ e_k with A_n = supp(x_n).
    pub fn project(&self, y: &SparseVector<S>) -> Result<SparseVector<S>> {
        let Some(top) = y.max_index() else {
            return Ok(SparseVector::new());
        };
        let two = S::two_root(&self.ctx);
        let mut out = SparseVector::new();
        let mut chosen = BTreeSet::new();
        let mut k = 0u64;
        for j in 2..=top {
            if chosen.contains(&self.tables.rho(j)?) {
                continue;
            }
            chosen.insert(j);
            k += 1;
            // σ(j) >= 2j, so blocks of j > top/2 miss the support of y.
            let block = if 2 * j <= top {
                self.tables.block(j)?
            } else {
                0..0
            };
            let mut local = y.restrict_range(block);
            if let Some(x) = y.get(j) {
                local.set(j, x.clone());
            }
            if local.is_empty() {
                continue;
            }
            let value = self.dual_vector(j)?.pairing(&local);
            out.set(k, two.clone() * value);
        }
        Ok(out)
    }

    /// (J(x), P(J(x)))
    pub fn embed_and_project(
        &self,
        x: &SparseVector<S>,
    ) -> Result<(SparseVector<S>, SparseVector<S>)> {
        let jx = self.embed(x)?;
        let back = self.project(&jx)?;
        Ok((jx, back))
    }
}

fn sum_powers<'a, S: Scalar>(values: impl Iterator<Item = &'a S>, ctx: &PContext) -> PowerSum {
    if S::EXACT {
        values.map(|x| x.p_power(ctx)).sum()
    } else {
        PowerSum::Float(values.map(|x| ctx.power(x.to_f64())).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn classical() -> BasisContext<BigRational> {
        BasisContext::from_delta(
            DeltaSpec::constant(2).unwrap(),
            256,
            PContext::new(1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn float_context_rejects_nothing_exact_rejects_irrational_p() {
        let t = Arc::new(IndexTables::new(DeltaSpec::constant(2).unwrap(), 16).unwrap());
        let ctx = PContext::new(0.3).unwrap();
        assert!(BasisContext::<f64>::new(t.clone(), ctx).is_ok());
        assert!(matches!(
            BasisContext::<BigRational>::new(t, ctx),
            Err(Error::Inexact(_))
        ));
    }

    #[test]
    fn dual_entries_follow_the_orbit() {
        let b = classical();
        assert_eq!(b.dual_entry(5, 1).unwrap(), q(1, 4));
        assert_eq!(b.dual_entry(5, 2).unwrap(), q(1, 2));
        assert_eq!(b.dual_entry(5, 3).unwrap(), q(0, 1));
    }

    #[test]
    fn prefix_power_sum_matches_synthesis() {
        let b = classical();
        let c = vec![q(1, 1), q(-3, 7), q(2, 5), q(0, 1), q(1, 9)];
        let coeffs: CoefficientVector<_> = c
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, x)| (i as u64 + 1, x))
            .collect();
        let direct = b.synthesize(&coeffs).unwrap().p_power(b.ctx());
        assert_eq!(b.prefix_power_sum(&c).unwrap(), direct);
    }

    #[test]
    fn isomorphism_matches_section() {
        let b = classical();
        let n = 9;
        let sec = b.orthogonalized_section(n).unwrap();
        let a: SparseVector<BigRational> = [(1, q(1, 2)), (4, q(-2, 3)), (9, q(5, 1))]
            .into_iter()
            .collect();
        let mut expected = SparseVector::new();
        for (k, ak) in a.iter() {
            expected.axpy(ak, &sec.vectors[k as usize - 1]);
        }
        assert_eq!(b.lp_isomorphism(&a, n).unwrap(), expected);
    }

    #[test]
    fn embedding_indices_have_disjoint_supports() {
        let b = classical();
        let idx = b.embedding_indices(40).unwrap();
        assert_eq!(idx[0], 2);
        let mut seen = BTreeSet::new();
        for &n in &idx {
            for j in b.basis_vector(n).unwrap().support() {
                assert!(seen.insert(j), "coordinate {j} shared");
            }
        }
    }
}
