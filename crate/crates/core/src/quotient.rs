//! The interval partition I_j of [0,1), the functions h_j = λ_j 1_{I_j}, and
//! the quotient map Q_p(e_j) = h_j onto step functions of L_p[0,1].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::basis::BasisContext;
use crate::error::{Error, Result};
use crate::indexing::IndexTables;
use crate::sparse::{PContext, PNorm, PowerSum, Scalar, SparseVector};

/// I_j = [left, right), with the path of (parent, child ordinal) pairs from I_1.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicInterval {
    pub left: BigRational,
    pub right: BigRational,
    pub path: Vec<(u64, u64)>,
}

impl DyadicInterval {
    pub fn length(&self) -> BigRational {
        &self.right - &self.left
    }
}

/// I_1 = [0,1); for j in [σ(k), σ(k+1)), I_j is piece number j − σ(k) of the
/// d_k equal parts of I_k.
pub fn interval(tables: &IndexTables, j: u64) -> Result<DyadicInterval> {
    let orbit = tables.orbit(j)?;
    let mut left = BigRational::zero();
    let mut len = BigRational::one();
    let mut path = Vec::with_capacity(orbit.len().saturating_sub(1));
    for pair in orbit.windows(2).rev() {
        let (child, parent) = (pair[0], pair[1]);
        let ordinal = child - tables.sigma(parent)?;
        len /= BigInt::from(tables.d(parent));
        left += &len * BigInt::from(ordinal);
        path.push((parent, ordinal));
    }
    Ok(DyadicInterval {
        right: &left + &len,
        left,
        path,
    })
}

/// A step function on [0,1): `values[i]` on [breakpoints[i], breakpoints[i+1]).
/// Adjacent pieces always carry different values.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction<S: Scalar> {
    breakpoints: Vec<BigRational>,
    values: Vec<S>,
}

impl<S: Scalar> StepFunction<S> {
    pub fn zero() -> Self {
        StepFunction {
            breakpoints: vec![BigRational::zero(), BigRational::one()],
            values: vec![S::zero()],
        }
    }

    /// Builds from pieces, merging equal neighbours.
    pub fn new(breakpoints: Vec<BigRational>, values: Vec<S>) -> Result<Self> {
        let ok = breakpoints.len() == values.len() + 1
            && breakpoints.first().is_some_and(|t| t.is_zero())
            && breakpoints.last().is_some_and(|t| t.is_one())
            && breakpoints.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(Error::Domain(
                "breakpoints must increase from 0 to 1, one more than values".into(),
            ));
        }
        let mut merged_t = vec![breakpoints[0].clone()];
        let mut merged_v: Vec<S> = Vec::with_capacity(values.len());
        for (i, v) in values.into_iter().enumerate() {
            if merged_v.last() == Some(&v) {
                *merged_t.last_mut().expect("nonempty") = breakpoints[i + 1].clone();
            } else {
                merged_v.push(v);
                merged_t.push(breakpoints[i + 1].clone());
            }
        }
        Ok(StepFunction {
            breakpoints: merged_t,
            values: merged_v,
        })
    }

    pub fn breakpoints(&self) -> &[BigRational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&BigRational, &BigRational, &S)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, v)| (&w[0], &w[1], v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Value at t ∈ [0,1).
    pub fn eval(&self, t: &BigRational) -> S {
        let i = self.breakpoints.partition_point(|b| b <= t);
        self.values
            .get(i.wrapping_sub(1))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    /// CSV rows `t_left,t_right,value`, rationals as `num/den`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["t_left", "t_right", "value"])
            .map_err(err)?;
        for (a, b, v) in self.pieces() {
            w.write_record([render_rational(a), render_rational(b), v.render()])
                .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

fn render_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// λ_j = |I_j|^{-1/p}, exact when 1/p is an integer.
pub fn lambda<S: Scalar>(interval: &DyadicInterval, ctx: &PContext) -> S {
    S::pow_inv_p(&interval.length().recip(), ctx)
}

/// Q_p v = Σ v(j) λ_j 1_{I_j} on the common refinement of the I_j.
pub fn q_map<S: Scalar>(bctx: &BasisContext<S>, v: &SparseVector<S>) -> Result<StepFunction<S>> {
    if v.is_empty() {
        return Ok(StepFunction::zero());
    }
    let ctx = bctx.ctx();
    let mut terms = Vec::with_capacity(v.len());
    for (j, x) in v.iter() {
        let iv = interval(bctx.tables(), j)?;
        let h = lambda::<S>(&iv, ctx);
        terms.push((iv.left, iv.right, x.clone() * h));
    }
    // The intervals are nested or disjoint, so those covering a point form a
    // chain. A sweep keeps that chain on a stack and sums it afresh on every
    // piece, which keeps float rounding local to the piece.
    terms.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
    let mut cuts: Vec<BigRational> = terms
        .iter()
        .flat_map(|(l, r, _)| [l.clone(), r.clone()])
        .chain([BigRational::zero(), BigRational::one()])
        .collect();
    cuts.sort();
    cuts.dedup();
    let mut stack: Vec<(BigRational, S)> = Vec::new();
    let mut next = terms.into_iter().peekable();
    let mut values = Vec::with_capacity(cuts.len() - 1);
    for t in &cuts[..cuts.len() - 1] {
        while stack.last().is_some_and(|(r, _)| r <= t) {
            stack.pop();
        }
        while let Some((_, r, c)) = next.next_if(|(l, _, _)| l == t) {
            stack.push((r, c));
        }
        values.push(stack.iter().fold(S::zero(), |acc, (_, c)| acc + c.clone()));
    }
    StepFunction::new(cuts, values)
}

/// Σ_i |value_i|^p (t_{i+1} − t_i)
pub fn step_p_power<S: Scalar>(f: &StepFunction<S>, ctx: &PContext) -> PowerSum {
    f.pieces()
        .filter(|(_, _, v)| !v.is_zero())
        .map(|(a, b, v)| v.p_power(ctx).scale(&(b - a)))
        .sum()
}

pub fn step_p_norm<S: Scalar>(f: &StepFunction<S>, ctx: &PContext) -> PNorm {
    PNorm::from_power(step_p_power(f, ctx), ctx)
}
