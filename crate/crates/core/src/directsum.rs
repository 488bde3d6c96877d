//! Finite ℓ_p-sums of initial sections of X_p(δ): blocks of sizes N_1, N_2, ...
//! carried by one global index.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{BasisContext, CoefficientVector};
use crate::conditionality::{km_upper, uv_witness};
use crate::error::{Error, Result};
use crate::greedy::greedy_order;
use crate::sparse::{PNorm, PowerSum, Scalar, SparseVector};

/// Block sizes N_k, k = 0, 1, 2, ...
#[derive(Debug, Clone, PartialEq)]
pub enum EtaSpec {
    /// N_k = ⌈r^k⌉
    Geometric(f64),
    /// N_k = k + 1
    Linear,
    /// Listed sizes, the last one repeating.
    List(Vec<u64>),
}

impl EtaSpec {
    pub fn size(&self, k: usize) -> Result<u64> {
        match self {
            EtaSpec::Geometric(r) => {
                let x = r.powi(k as i32).ceil();
                if x >= u64::MAX as f64 {
                    Err(crate::error::capacity(format!("block {k} of geom:{r}")))
                } else {
                    Ok(x as u64)
                }
            }
            EtaSpec::Linear => Ok(k as u64 + 1),
            EtaSpec::List(v) => Ok(v
                .get(k)
                .copied()
                .unwrap_or(*v.last().expect("lists are nonempty"))),
        }
    }
}

impl FromStr for EtaSpec {
    type Err = Error;

    /// `geom:<r>` | `linear` | `list:<n1,n2,...>`
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "linear" {
            return Ok(EtaSpec::Linear);
        }
        let bad = || Error::InvalidSpec(format!("bad eta spec '{s}'"));
        match s.split_once(':').ok_or_else(bad)? {
            ("geom", r) => {
                let r: f64 = r.trim().parse().map_err(|_| bad())?;
                if !(r.is_finite() && r >= 1.0) {
                    return Err(Error::InvalidSpec(format!(
                        "geometric ratio must be >= 1, got {r}"
                    )));
                }
                Ok(EtaSpec::Geometric(r))
            }
            ("list", body) => {
                let v = body
                    .split(',')
                    .map(|t| t.trim().parse::<u64>().ok().filter(|&n| n >= 1))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(bad)?;
                if v.is_empty() {
                    return Err(bad());
                }
                Ok(EtaSpec::List(v))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for EtaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaSpec::Geometric(r) => write!(f, "geom:{r}"),
            EtaSpec::Linear => write!(f, "linear"),
            EtaSpec::List(v) => {
                let items: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "list:{}", items.join(","))
            }
        }
    }
}

/// Sizes and offsets of finitely many blocks. Global indices start at 1 and
/// run through block 0, then block 1, and so on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    sizes: Vec<u64>,
    offsets: Vec<u64>,
}

impl BlockLayout {
    pub fn new(sizes: Vec<u64>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Domain(
                "block sizes must be positive and nonempty".into(),
            ));
        }
        let mut offsets = Vec::with_capacity(sizes.len() + 1);
        let mut acc = 0u64;
        offsets.push(0);
        for &n in &sizes {
            acc = acc
                .checked_add(n)
                .ok_or_else(|| crate::error::capacity("total block size"))?;
            offsets.push(acc);
        }
        Ok(BlockLayout { sizes, offsets })
    }

    pub fn from_eta(eta: &EtaSpec, blocks: usize) -> Result<Self> {
        Self::new((0..blocks).map(|k| eta.size(k)).collect::<Result<_>>()?)
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn dimension(&self) -> u64 {
        *self.offsets.last().expect("offsets are nonempty")
    }

    pub fn largest(&self) -> u64 {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.sizes.windows(2).all(|w| w[0] <= w[1])
    }

    /// (block, local index) for a global index.
    pub fn to_local(&self, global: u64) -> Result<(usize, u64)> {
        if global == 0 || global > self.dimension() {
            return Err(Error::Domain(format!(
                "global index {global} outside [1, {}]",
                self.dimension()
            )));
        }
        let block = self.offsets.partition_point(|&o| o < global) - 1;
        Ok((block, global - self.offsets[block]))
    }

    pub fn to_global(&self, block: usize, local: u64) -> Result<u64> {
        match self.sizes.get(block) {
            Some(&n) if local >= 1 && local <= n => Ok(self.offsets[block] + local),
            Some(&n) => Err(Error::BlockSupport {
                block,
                index: local,
                size: n,
            }),
            None => Err(Error::Domain(format!("no block {block}"))),
        }
    }

    /// Global coefficients cut into per-block local coefficients.
    pub fn split<S: Scalar>(&self, a: &SparseVector<S>) -> Result<Vec<CoefficientVector<S>>> {
        let mut out = vec![CoefficientVector::new(); self.blocks()];
        for (g, x) in a.iter() {
            let (b, l) = self.to_local(g)?;
            out[b].set(l, x.clone());
        }
        Ok(out)
    }

    pub fn join<S: Scalar>(&self, blocks: &[CoefficientVector<S>]) -> Result<SparseVector<S>> {
        let mut out = SparseVector::new();
        for (b, block) in blocks.iter().enumerate() {
            for (l, x) in block.iter() {
                out.set(self.to_global(b, l)?, x.clone());
            }
        }
        Ok(out)
    }

    fn check<S: Scalar>(&self, blocks: &[CoefficientVector<S>]) -> Result<()> {
        if blocks.len() > self.blocks() {
            return Err(Error::Domain(format!(
                "{} blocks for a layout of {}",
                blocks.len(),
                self.blocks()
            )));
        }
        for (b, block) in blocks.iter().enumerate() {
            if let Some(top) = block.max_index() {
                if top > self.sizes[b] {
                    return Err(Error::BlockSupport {
                        block: b,
                        index: top,
                        size: self.sizes[b],
                    });
                }
            }
        }
        Ok(())
    }
}

/// (Σ_k ‖Σ_j a_{k,j} x_j‖^p)^{1/p}, each block synthesized in X_p.
pub fn block_norm<S: Scalar>(
    layout: &BlockLayout,
    bctx: &BasisContext<S>,
    blocks: &[CoefficientVector<S>],
) -> Result<PNorm> {
    layout.check(blocks)?;
    let ctx = bctx.ctx();
    let parts = blocks
        .par_iter()
        .map(|b| Ok(bctx.synthesize(b)?.p_power(ctx)))
        .collect::<Result<Vec<PowerSum>>>()?;
    Ok(PNorm::from_power(parts.into_iter().sum(), ctx))
}

/// The same norm after sending each block a ↦ Σ_{j<=N_k} a_j x_{j,N_k}, the
/// coordinates in which the space is compared with ℓ_p.
pub fn isomorphism_norm<S: Scalar>(
    layout: &BlockLayout,
    bctx: &BasisContext<S>,
    blocks: &[CoefficientVector<S>],
) -> Result<PNorm> {
    layout.check(blocks)?;
    let ctx = bctx.ctx();
    let parts = blocks
        .par_iter()
        .zip(layout.sizes.par_iter())
        .map(|(b, &n)| {
            if b.is_empty() {
                return Ok(PowerSum::zero());
            }
            bctx.lp_isomorphism_power(b, n)
        })
        .collect::<Result<Vec<PowerSum>>>()?;
    Ok(PNorm::from_power(parts.into_iter().sum(), ctx))
}

#[derive(Debug, Clone)]
pub struct DirectSumGreedy<S: Scalar> {
    /// Global indices, sorted.
    pub greedy_set: Vec<u64>,
    pub projection: SparseVector<S>,
    pub residual: SparseVector<S>,
    pub norms: (PNorm, PNorm, PNorm),
}

/// G_m over global indices, lowest global index first among ties.
pub fn directsum_greedy<S: Scalar>(
    layout: &BlockLayout,
    bctx: &BasisContext<S>,
    coeffs: &SparseVector<S>,
    m: usize,
) -> Result<DirectSumGreedy<S>> {
    let mut greedy_set: Vec<u64> = greedy_order(coeffs).into_iter().take(m).collect();
    greedy_set.sort_unstable();
    let projection = coeffs.restrict(|g| greedy_set.binary_search(&g).is_ok());
    let residual = coeffs.restrict(|g| greedy_set.binary_search(&g).is_err());
    let norm = |v: &SparseVector<S>| block_norm(layout, bctx, &layout.split(v)?);
    Ok(DirectSumGreedy {
        norms: (norm(coeffs)?, norm(&projection)?, norm(&residual)?),
        greedy_set,
        projection,
        residual,
    })
}

/// Lower and upper bounds for k_m of the direct sum.
#[derive(Debug, Clone, Serialize)]
pub struct DirectSumBound {
    pub m: u64,
    pub gamma: u32,
    /// uv witness of size min(m, largest block), placed in the largest block.
    pub lower: f64,
    /// Blockwise: ‖S_A f‖^p = Σ_k ‖S_{A_k} f_k‖^p <= max k_m^p ‖f‖^p.
    pub upper: f64,
    pub lower_ratio: f64,
    pub upper_ratio: f64,
}

impl DirectSumBound {
    /// 2^{-2/p} <= lower / Γ^{1/p} and upper / Γ^{1/p} <= 2^{2/p}.
    pub fn bounded(&self, two_root: f64) -> bool {
        let tol = 1e-9;
        self.lower_ratio >= (1.0 - tol) / (two_root * two_root)
            && self.upper_ratio <= two_root * two_root * (1.0 + tol)
    }
}

pub fn directsum_conditionality<S: Scalar>(
    layout: &BlockLayout,
    bctx: &BasisContext<S>,
    m_grid: &[u64],
) -> Result<Vec<DirectSumBound>> {
    let ctx = bctx.ctx();
    let big = layout.largest();
    m_grid
        .par_iter()
        .map(|&m| {
            if m == 0 {
                return Err(Error::Domain("m must be >= 1".into()));
            }
            let gamma = bctx.tables().gamma(m)?;
            let lower = uv_witness(bctx, m.min(big))?.lower_estimate;
            let upper = km_upper(bctx, m)?;
            let scale = ctx.root(gamma.max(1) as f64);
            Ok(DirectSumBound {
                m,
                gamma,
                lower,
                upper,
                lower_ratio: lower / scale,
                upper_ratio: upper / scale,
            })
        })
        .collect()
}
