//! Finitely supported vectors with ℓ_p and sup-norm arithmetic.

mod power;
mod scalar;

use std::collections::btree_map::{self, BTreeMap};
use std::fmt::Write as _;
use std::ops::RangeBounds;

pub use power::{root_enclosure, PContext, PNorm, PowerSum};
pub use scalar::{parse_rational, Scalar};

use crate::error::{Error, Result};

/// A finitely supported vector indexed by coordinates `j >= 1`.
///
/// Zero entries are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector<S> {
    entries: BTreeMap<u64, S>,
}

impl<S: Scalar> Default for SparseVector<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> SparseVector<S> {
    pub fn new() -> Self {
        SparseVector {
            entries: BTreeMap::new(),
        }
    }

    /// The unit vector e_j.
    pub fn unit(j: u64) -> Self {
        let mut v = Self::new();
        v.set(j, S::one());
        v
    }

    /// Builds a vector, summing repeated coordinates.
    pub fn from_entries(entries: impl IntoIterator<Item = (u64, S)>) -> Self {
        let mut v = Self::new();
        for (j, x) in entries {
            v.add_at(j, x);
        }
        v
    }

    pub fn get(&self, j: u64) -> Option<&S> {
        self.entries.get(&j)
    }

    /// v(j), zero off the support.
    pub fn value(&self, j: u64) -> S {
        self.entries.get(&j).cloned().unwrap_or_else(S::zero)
    }

    pub fn set(&mut self, j: u64, x: S) {
        assert!(j >= 1, "coordinates start at 1");
        if x.is_zero() {
            self.entries.remove(&j);
        } else {
            self.entries.insert(j, x);
        }
    }

    /// v(j) += x
    pub fn add_at(&mut self, j: u64, x: S) {
        assert!(j >= 1, "coordinates start at 1");
        if x.is_zero() {
            return;
        }
        match self.entries.entry(j) {
            btree_map::Entry::Vacant(e) => {
                e.insert(x);
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + x;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u64, &S)> + '_ {
        self.entries.iter().map(|(j, x)| (*j, x))
    }

    pub fn support(&self) -> impl DoubleEndedIterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_index(&self) -> Option<u64> {
        self.entries.keys().next_back().copied()
    }

    /// self += c·other
    pub fn axpy(&mut self, c: &S, other: &SparseVector<S>) {
        if c.is_zero() {
            return;
        }
        for (j, x) in other.iter() {
            self.add_at(j, c.clone() * x.clone());
        }
    }

    pub fn add(&self, other: &SparseVector<S>) -> SparseVector<S> {
        let mut out = self.clone();
        out.axpy(&S::one(), other);
        out
    }

    pub fn sub(&self, other: &SparseVector<S>) -> SparseVector<S> {
        let mut out = self.clone();
        out.axpy(&(-S::one()), other);
        out
    }

    pub fn scale(&self, c: &S) -> SparseVector<S> {
        if c.is_zero() {
            return Self::new();
        }
        SparseVector {
            entries: self
                .entries
                .iter()
                .map(|(j, x)| (*j, c.clone() * x.clone()))
                .collect(),
        }
    }

    /// Keeps the coordinates for which `keep` holds.
    pub fn restrict(&self, mut keep: impl FnMut(u64) -> bool) -> SparseVector<S> {
        SparseVector {
            entries: self
                .entries
                .iter()
                .filter(|(j, _)| keep(**j))
                .map(|(j, x)| (*j, x.clone()))
                .collect(),
        }
    }

    /// Restriction to a coordinate range, e.g. the head S_N = `restrict_range(..=N)`.
    pub fn restrict_range(&self, range: impl RangeBounds<u64>) -> SparseVector<S> {
        SparseVector {
            entries: self
                .entries
                .range(range)
                .map(|(j, x)| (*j, x.clone()))
                .collect(),
        }
    }

    /// Σ u(j)v(j)
    pub fn pairing(&self, other: &SparseVector<S>) -> S {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = S::zero();
        for (j, x) in small.iter() {
            if let Some(y) = large.get(j) {
                acc = acc + x.clone() * y.clone();
            }
        }
        acc
    }

    /// Σ |v(j)|^p
    pub fn p_power(&self, ctx: &PContext) -> PowerSum {
        if S::EXACT {
            self.entries.values().map(|x| x.p_power(ctx)).sum()
        } else {
            PowerSum::Float(self.entries.values().map(|x| ctx.power(x.to_f64())).sum())
        }
    }

    pub fn p_norm(&self, ctx: &PContext) -> PNorm {
        PNorm::from_power(self.p_power(ctx), ctx)
    }

    /// max |v(j)|, zero for the zero vector.
    pub fn sup_norm(&self) -> S {
        self.entries
            .values()
            .map(|x| x.abs())
            .fold(S::zero(), |m, x| if x > m { x } else { m })
    }

    pub fn to_f64(&self) -> SparseVector<f64> {
        SparseVector::from_entries(self.iter().map(|(j, x)| (j, x.to_f64())))
    }

    /// One `index value` line per stored entry.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (j, x) in self.iter() {
            let _ = writeln!(out, "{j} {}", x.render());
        }
        out
    }

    /// Parses `index value` lines; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut v = Self::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || {
                Error::InvalidSpec(format!(
                    "line {}: expected 'index value', got '{line}'",
                    lineno + 1
                ))
            };
            let mut parts = line.split_whitespace();
            let j: u64 = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
            let x = parts.next().and_then(S::parse).ok_or_else(bad)?;
            if j == 0 || parts.next().is_some() {
                return Err(bad());
            }
            v.add_at(j, x);
        }
        Ok(v)
    }
}

impl<S: Scalar> FromIterator<(u64, S)> for SparseVector<S> {
    fn from_iter<I: IntoIterator<Item = (u64, S)>>(iter: I) -> Self {
        Self::from_entries(iter)
    }
}
