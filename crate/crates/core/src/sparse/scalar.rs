use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use super::power::{ratio_to_f64, root_enclosure, PContext, PowerSum};

/// Scalar field used by vectors: `f64` or exact `BigRational`.
pub trait Scalar: Clone + Debug + PartialOrd + Signed + Send + Sync + 'static {
    /// Whether arithmetic in this type is exact.
    const EXACT: bool;

    fn from_f64(x: f64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn to_f64(&self) -> f64;

    /// r^{1/p} for a positive rational r. Exact for rationals when 1/p is an integer.
    fn pow_inv_p(r: &BigRational, ctx: &PContext) -> Self;

    /// |self|^p as a power-sum term.
    fn p_power(&self, ctx: &PContext) -> PowerSum;

    fn parse(s: &str) -> Option<Self>;
    fn render(&self) -> String;

    /// d^{-1/p}
    fn inv_root(d: u64, ctx: &PContext) -> Self {
        Self::pow_inv_p(&BigRational::new(BigInt::one(), BigInt::from(d)), ctx)
    }

    /// 2^{1/p}
    fn two_root(ctx: &PContext) -> Self {
        Self::pow_inv_p(&BigRational::from_integer(BigInt::from(2)), ctx)
    }

    /// +1 for nonnegative values, -1 otherwise.
    fn sign_or_one(&self) -> Self {
        if self.is_negative() {
            -Self::one()
        } else {
            Self::one()
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_rational(r: &BigRational) -> Self {
        ratio_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn pow_inv_p(r: &BigRational, ctx: &PContext) -> Self {
        ctx.root(ratio_to_f64(r))
    }

    fn p_power(&self, ctx: &PContext) -> PowerSum {
        PowerSum::Float(ctx.power(*self))
    }

    fn parse(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((n, d)) => Some(n.trim().parse::<f64>().ok()? / d.trim().parse::<f64>().ok()?),
            None => s.trim().parse().ok(),
        }
    }

    fn render(&self) -> String {
        format!("{self}")
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn pow_inv_p(r: &BigRational, ctx: &PContext) -> Self {
        match ctx.root_index() {
            Some(q) => Pow::pow(r, q),
            None => Self::from_f64(ctx.root(ratio_to_f64(r))),
        }
    }

    fn p_power(&self, ctx: &PContext) -> PowerSum {
        match ctx.root_index() {
            Some(q) => {
                let (lo, hi) = root_enclosure(&self.abs(), q);
                PowerSum::Enclosure { lo, hi }
            }
            None => PowerSum::Float(ctx.power(ratio_to_f64(self))),
        }
    }

    fn parse(s: &str) -> Option<Self> {
        parse_rational(s.trim())
    }

    fn render(&self) -> String {
        if self.is_integer() {
            format!("{}", self.numer())
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Parses `n`, `n/d`, or a plain decimal `-1.25` exactly; exponent forms go through f64.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(n));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if !frac.is_empty() && frac.bytes().all(|b| b.is_ascii_digit()) {
            let negative = int.starts_with('-');
            let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
            let n: BigInt = digits.parse().ok()?;
            let d = Pow::pow(BigInt::from(10), frac.len() as u32);
            let r = BigRational::new(n, d);
            return Some(if negative { -r } else { r });
        }
    }
    s.parse::<f64>().ok().and_then(BigRational::from_float)
}
