use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Bits of precision used when a q-th root of a rational is not itself rational.
const ROOT_PRECISION_BITS: u32 = 96;

/// The exponent p of the quasi-norm, 0 < p <= 1.
///
/// When 1/p is a positive integer q the context allows exact rational arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PContext {
    p: f64,
    root_index: Option<u32>,
}

impl PContext {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Domain(format!("p must lie in (0, 1], got {p}")));
        }
        let inv = 1.0 / p;
        let q = inv.round();
        let root_index = if (inv - q).abs() < 1e-12 && q >= 1.0 && q <= u32::MAX as f64 {
            Some(q as u32)
        } else {
            None
        };
        Ok(PContext { p, root_index })
    }

    /// The context with p = 1/q.
    pub fn reciprocal(q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::Domain("1/p must be positive".into()));
        }
        Ok(PContext {
            p: 1.0 / q as f64,
            root_index: Some(q),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn inv_p(&self) -> f64 {
        match self.root_index {
            Some(q) => q as f64,
            None => 1.0 / self.p,
        }
    }

    /// q = 1/p when it is a positive integer.
    pub fn root_index(&self) -> Option<u32> {
        self.root_index
    }

    pub fn allows_exact(&self) -> bool {
        self.root_index.is_some()
    }

    pub fn require_exact(&self) -> Result<u32> {
        self.root_index.ok_or(Error::Inexact(self.p))
    }

    /// 2^{1/p}
    pub fn two_root(&self) -> f64 {
        2f64.powf(self.inv_p())
    }

    /// x^{1/p} for a nonnegative float.
    pub fn root(&self, x: f64) -> f64 {
        match self.root_index {
            Some(1) => x,
            Some(q) => x.powi(q as i32),
            None => x.powf(1.0 / self.p),
        }
    }

    /// |x|^p for a float.
    pub fn power(&self, x: f64) -> f64 {
        match self.root_index {
            Some(1) => x.abs(),
            Some(2) => x.abs().sqrt(),
            _ => x.abs().powf(self.p),
        }
    }
}

impl FromStr for PContext {
    type Err = Error;

    /// Accepts a decimal (`0.5`) or a fraction (`1/2`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: f64 = num.trim().parse().map_err(|_| bad_p(s))?;
            let den: f64 = den.trim().parse().map_err(|_| bad_p(s))?;
            if num == 1.0 && den >= 1.0 && den.fract() == 0.0 {
                return PContext::reciprocal(den as u32);
            }
            return PContext::new(num / den);
        }
        PContext::new(s.parse().map_err(|_| bad_p(s))?)
    }
}

fn bad_p(s: &str) -> Error {
    Error::InvalidSpec(format!("cannot parse p from '{s}'"))
}

/// A p-th power sum Σ|v(j)|^p.
///
/// Float mode carries a single f64. Exact mode carries a rational enclosure
/// `[lo, hi]`; the two ends coincide whenever every term was a perfect q-th power.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerSum {
    Float(f64),
    Enclosure { lo: BigRational, hi: BigRational },
}

impl PowerSum {
    pub fn zero() -> Self {
        PowerSum::exact(BigRational::zero())
    }

    pub fn exact(r: BigRational) -> Self {
        PowerSum::Enclosure {
            lo: r.clone(),
            hi: r,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        PowerSum::exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// The exact value, if known.
    pub fn exact_value(&self) -> Option<&BigRational> {
        match self {
            PowerSum::Enclosure { lo, hi } if lo == hi => Some(lo),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact_value().is_some()
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            PowerSum::Float(x) => *x,
            PowerSum::Enclosure { lo, hi } if lo == hi => ratio_to_f64(lo),
            PowerSum::Enclosure { lo, hi } => {
                ratio_to_f64(&((lo + hi) / BigRational::from_integer(2.into())))
            }
        }
    }

    pub fn lower_f64(&self) -> f64 {
        match self {
            PowerSum::Float(x) => *x,
            PowerSum::Enclosure { lo, .. } => ratio_to_f64(lo),
        }
    }

    pub fn upper_f64(&self) -> f64 {
        match self {
            PowerSum::Float(x) => *x,
            PowerSum::Enclosure { hi, .. } => ratio_to_f64(hi),
        }
    }

    /// The quasi-norm (Σ|v(j)|^p)^{1/p}.
    pub fn norm(&self, ctx: &PContext) -> f64 {
        ctx.root(self.to_f64())
    }

    pub fn scale(&self, r: &BigRational) -> PowerSum {
        match self {
            PowerSum::Float(x) => PowerSum::Float(x * ratio_to_f64(r)),
            PowerSum::Enclosure { lo, hi } => {
                if r.is_negative() {
                    PowerSum::Enclosure {
                        lo: hi * r,
                        hi: lo * r,
                    }
                } else {
                    PowerSum::Enclosure {
                        lo: lo * r,
                        hi: hi * r,
                    }
                }
            }
        }
    }

    /// Ordering that is certain: for enclosures `None` means they overlap.
    pub fn compare(&self, other: &PowerSum) -> Option<Ordering> {
        match (self, other) {
            (PowerSum::Enclosure { lo: a, hi: b }, PowerSum::Enclosure { lo: c, hi: d }) => {
                if a == b && c == d {
                    Some(a.cmp(c))
                } else if b < c {
                    Some(Ordering::Less)
                } else if a > d {
                    Some(Ordering::Greater)
                } else {
                    None
                }
            }
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }

    pub fn certainly_gt(&self, other: &PowerSum) -> bool {
        self.compare(other) == Some(Ordering::Greater)
    }

    pub fn certainly_lt(&self, other: &PowerSum) -> bool {
        self.compare(other) == Some(Ordering::Less)
    }

    /// `self <= other`, certain in exact mode.
    pub fn certainly_le(&self, other: &PowerSum) -> bool {
        matches!(self.compare(other), Some(Ordering::Less | Ordering::Equal))
    }

    /// Whether the two values may be equal: exact equality for exact values,
    /// overlap for enclosures, relative tolerance for floats.
    pub fn agrees_with(&self, other: &PowerSum, rel_tol: f64) -> bool {
        match (self, other) {
            (PowerSum::Enclosure { .. }, PowerSum::Enclosure { .. }) => !matches!(
                self.compare(other),
                Some(Ordering::Less | Ordering::Greater)
            ),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                (a - b).abs() <= rel_tol * a.abs().max(b.abs()).max(1.0)
            }
        }
    }
}

impl Add for PowerSum {
    type Output = PowerSum;

    fn add(self, rhs: PowerSum) -> PowerSum {
        match (self, rhs) {
            (PowerSum::Enclosure { lo: a, hi: b }, PowerSum::Enclosure { lo: c, hi: d }) => {
                PowerSum::Enclosure {
                    lo: a + c,
                    hi: b + d,
                }
            }
            (x, y) => PowerSum::Float(x.to_f64() + y.to_f64()),
        }
    }
}

impl<'a> Add<&'a PowerSum> for PowerSum {
    type Output = PowerSum;

    fn add(self, rhs: &'a PowerSum) -> PowerSum {
        self + rhs.clone()
    }
}

impl Sum for PowerSum {
    fn sum<I: Iterator<Item = PowerSum>>(iter: I) -> PowerSum {
        iter.fold(PowerSum::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for PowerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PowerSum::Float(x) => write!(f, "{x}"),
            PowerSum::Enclosure { lo, hi } if lo == hi => write!(f, "{lo}"),
            PowerSum::Enclosure { lo, hi } => {
                write!(f, "[{}, {}]", ratio_to_f64(lo), ratio_to_f64(hi))
            }
        }
    }
}

/// A quasi-norm returned together with its p-th power.
#[derive(Debug, Clone, PartialEq)]
pub struct PNorm {
    pub power: PowerSum,
    pub value: f64,
}

impl PNorm {
    pub fn from_power(power: PowerSum, ctx: &PContext) -> Self {
        let value = power.norm(ctx);
        PNorm { power, value }
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 only fails for values outside the f64 range.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Rigorous enclosure of r^{1/q} for r >= 0.
pub fn root_enclosure(r: &BigRational, q: u32) -> (BigRational, BigRational) {
    debug_assert!(!r.is_negative());
    if q == 1 || r.is_zero() || r.is_one() {
        return (r.clone(), r.clone());
    }
    let (n, d) = (r.numer(), r.denom());
    let rn = n.nth_root(q);
    let rd = d.nth_root(q);
    if Pow::pow(&rn, q) == *n && Pow::pow(&rd, q) == *d {
        let x = BigRational::new(rn, rd);
        return (x.clone(), x);
    }
    let scale = BigInt::one() << ROOT_PRECISION_BITS as usize;
    let scaled: BigInt = (n * Pow::pow(&scale, q)) / d;
    let floor = scaled.nth_root(q);
    let lo = BigRational::new(floor.clone(), scale.clone());
    let hi = BigRational::new(floor + 1, scale);
    (lo, hi)
}
