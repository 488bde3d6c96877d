//! Integer combinatorics of the construction: σ, ρ, Λ, Γ and the block intervals.

use std::fmt;
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;

use crate::error::{capacity, Error, Result};

/// The rule generating δ = (d_n)_{n>=1}.
#[derive(Debug, Clone, PartialEq)]
pub enum DeltaRule {
    /// d_n = c
    Constant(u64),
    /// The listed values, then `tail` forever.
    Explicit { values: Vec<u64>, tail: u64 },
    /// The listed values, then continued with common difference `step`.
    Arithmetic { values: Vec<u64>, step: u64 },
    /// d_n = max(2, ⌈n^a⌉)
    Power(f64),
    /// A finite table; the last value repeats beyond it.
    Table(Vec<u64>),
}

/// A δ-sequence with every term at least 2.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSpec {
    rule: DeltaRule,
    nondecreasing: bool,
}

impl DeltaSpec {
    pub fn constant(c: u64) -> Result<Self> {
        check_terms(&[c])?;
        Ok(DeltaSpec {
            rule: DeltaRule::Constant(c),
            nondecreasing: true,
        })
    }

    /// Explicit values; without a tail the last value repeats.
    pub fn explicit(values: Vec<u64>, tail: Option<u64>) -> Result<Self> {
        let last = *values
            .last()
            .ok_or_else(|| Error::InvalidSpec("empty delta list".into()))?;
        let tail = tail.unwrap_or(last);
        check_terms(&values)?;
        check_terms(&[tail])?;
        let nondecreasing = is_sorted(&values) && tail >= last;
        Ok(DeltaSpec {
            rule: DeltaRule::Explicit { values, tail },
            nondecreasing,
        })
    }

    /// d_n = n + 1, i.e. (2, 3, 4, ...).
    pub fn successive() -> Self {
        DeltaSpec {
            rule: DeltaRule::Arithmetic {
                values: vec![2, 3],
                step: 1,
            },
            nondecreasing: true,
        }
    }

    /// The listed values continued by the difference of the last two, as in
    /// `list:2,3,4,...`.
    pub fn arithmetic(values: Vec<u64>) -> Result<Self> {
        let [.., a, b] = values[..] else {
            return Err(Error::InvalidSpec(
                "'...' needs at least two listed values".into(),
            ));
        };
        if b < a {
            return Err(Error::InvalidSpec(format!(
                "decreasing progression {a},{b},..."
            )));
        }
        check_terms(&values)?;
        let nondecreasing = is_sorted(&values);
        Ok(DeltaSpec {
            rule: DeltaRule::Arithmetic {
                values,
                step: b - a,
            },
            nondecreasing,
        })
    }

    pub fn power(a: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "pow exponent must be finite and >= 0, got {a}"
            )));
        }
        Ok(DeltaSpec {
            rule: DeltaRule::Power(a),
            nondecreasing: true,
        })
    }

    pub fn table(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpec("empty delta table".into()));
        }
        check_terms(&values)?;
        let nondecreasing = is_sorted(&values);
        Ok(DeltaSpec {
            rule: DeltaRule::Table(values),
            nondecreasing,
        })
    }

    /// Reads a `table:` file: one integer per line.
    pub fn from_table_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
        Self::from_table_text(&text)
    }

    pub fn from_table_text(text: &str) -> Result<Self> {
        let values = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.parse::<u64>()
                    .map_err(|_| Error::InvalidSpec(format!("bad table entry '{l}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::table(values)
    }

    /// The `table:` file contents for the first `len` terms.
    pub fn to_table_text(&self, len: u64) -> String {
        (1..=len).map(|n| format!("{}\n", self.d(n))).collect()
    }

    pub fn rule(&self) -> &DeltaRule {
        &self.rule
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.nondecreasing
    }

    /// d_n for n >= 1.
    pub fn d(&self, n: u64) -> u64 {
        debug_assert!(n >= 1);
        match &self.rule {
            DeltaRule::Constant(c) => *c,
            DeltaRule::Explicit { values, tail } => {
                values.get(n as usize - 1).copied().unwrap_or(*tail)
            }
            DeltaRule::Arithmetic { values, step } => match values.get(n as usize - 1) {
                Some(&d) => d,
                None => {
                    let last = *values.last().expect("progressions have two terms");
                    let extra = n - values.len() as u64;
                    step.checked_mul(extra)
                        .and_then(|x| x.checked_add(last))
                        .unwrap_or(u64::MAX)
                }
            },
            DeltaRule::Power(a) => power_term(n, *a),
            DeltaRule::Table(values) => values
                .get(n as usize - 1)
                .copied()
                .unwrap_or_else(|| *values.last().expect("tables are nonempty")),
        }
    }
}

fn power_term(n: u64, a: f64) -> u64 {
    let x = (n as f64).powf(a);
    let r = x.round();
    let c = if (x - r).abs() <= 1e-9 * r.max(1.0) {
        r
    } else {
        x.ceil()
    };
    if c >= u64::MAX as f64 {
        u64::MAX
    } else {
        (c as u64).max(2)
    }
}

fn check_terms(values: &[u64]) -> Result<()> {
    match values.iter().position(|&d| d < 2) {
        Some(i) => Err(Error::InvalidSpec(format!(
            "delta terms must be >= 2 (term {} is {})",
            i + 1,
            values[i]
        ))),
        None => Ok(()),
    }
}

fn is_sorted(values: &[u64]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1])
}

impl FromStr for DeltaSpec {
    type Err = Error;

    /// `const:<c>` | `list:<c1,c2,...>[;tail=<c>]` | `list:<c1,c2>,...` | `pow:<a>` | `table:<file>`
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = s.split_once(':').ok_or_else(|| {
            Error::InvalidSpec(format!("delta spec '{s}' lacks a 'kind:' prefix"))
        })?;
        let int = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidSpec(format!("bad integer '{t}' in delta spec")))
        };
        match kind {
            "const" => DeltaSpec::constant(int(body)?),
            "list" => {
                let (list, tail) = match body.split_once(';') {
                    Some((list, tail)) => {
                        let tail = tail.trim().strip_prefix("tail=").ok_or_else(|| {
                            Error::InvalidSpec(format!("expected 'tail=<c>' in '{s}'"))
                        })?;
                        (list, Some(int(tail)?))
                    }
                    None => (body, None),
                };
                let mut terms: Vec<&str> = list.split(',').map(str::trim).collect();
                if terms.last() == Some(&"...") {
                    if tail.is_some() {
                        return Err(Error::InvalidSpec(format!("'...' and a tail in '{s}'")));
                    }
                    terms.pop();
                    let values = terms.into_iter().map(int).collect::<Result<Vec<_>>>()?;
                    return DeltaSpec::arithmetic(values);
                }
                let values = terms.into_iter().map(int).collect::<Result<Vec<_>>>()?;
                DeltaSpec::explicit(values, tail)
            }
            "pow" => {
                let a: f64 = body
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("bad exponent '{body}'")))?;
                DeltaSpec::power(a)
            }
            "table" => DeltaSpec::from_table_file(body.trim()),
            other => Err(Error::InvalidSpec(format!("unknown delta kind '{other}'"))),
        }
    }
}

impl fmt::Display for DeltaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match &self.rule {
            DeltaRule::Constant(c) => write!(f, "const:{c}"),
            DeltaRule::Explicit { values, tail } => write!(f, "list:{};tail={tail}", join(values)),
            DeltaRule::Arithmetic { values, .. } => write!(f, "list:{},...", join(values)),
            DeltaRule::Power(a) => write!(f, "pow:{a}"),
            DeltaRule::Table(values) if values.len() <= 8 => write!(f, "list:{}", join(values)),
            DeltaRule::Table(values) => write!(f, "table[{} terms]", values.len()),
        }
    }
}

/// Eagerly built σ and Λ tables up to `max_index`.
///
/// σ(k) is stored for `1 <= k <= max_index + 1`, so ρ is available on
/// `[2, σ(max_index + 1))`.
#[derive(Debug, Clone)]
pub struct IndexTables {
    delta: DeltaSpec,
    sigma: Vec<u64>,
    lambda: Vec<u64>,
    max_index: u64,
}

impl IndexTables {
    /// Builds the tables. If σ overflows u64 before `max_index`, the capacity is
    /// lowered to the last index whose σ(k + 1) still fits.
    pub fn new(delta: DeltaSpec, max_index: u64) -> Result<Self> {
        if max_index < 1 {
            return Err(Error::Domain("max_index must be at least 1".into()));
        }
        if max_index >= usize::MAX as u64 / 16 {
            return Err(capacity(format!(
                "max_index {max_index} too large to tabulate"
            )));
        }
        let mut sigma: Vec<u64> = Vec::with_capacity(max_index as usize + 2);
        sigma.push(0);
        sigma.push(2);
        let mut k = 1;
        while k <= max_index {
            match sigma[k as usize].checked_add(delta.d(k)) {
                Some(next) => sigma.push(next),
                None => break,
            }
            k += 1;
        }
        let max_index = sigma.len() as u64 - 2;
        if max_index < 1 {
            return Err(capacity("sigma overflows at the first index"));
        }
        let mut lambda = vec![1u64];
        loop {
            let last = *lambda.last().expect("nonempty");
            if last > max_index + 1 {
                break;
            }
            lambda.push(sigma[last as usize]);
        }
        Ok(IndexTables {
            delta,
            sigma,
            lambda,
            max_index,
        })
    }

    pub fn delta(&self) -> &DeltaSpec {
        &self.delta
    }

    pub fn max_index(&self) -> u64 {
        self.max_index
    }

    /// First index for which ρ is unknown: σ(max_index + 1).
    pub fn rho_limit(&self) -> u64 {
        self.sigma[self.max_index as usize + 1]
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.delta.is_nondecreasing()
    }

    /// d_k
    pub fn d(&self, k: u64) -> u64 {
        if k >= 1 && k <= self.max_index {
            self.sigma[k as usize + 1] - self.sigma[k as usize]
        } else {
            self.delta.d(k)
        }
    }

    /// σ(k) = 2 + Σ_{j<k} d_j
    pub fn sigma(&self, k: u64) -> Result<u64> {
        if k == 0 {
            return Err(Error::Domain("sigma is defined for k >= 1".into()));
        }
        self.sigma
            .get(k as usize)
            .copied()
            .ok_or_else(|| capacity(format!("sigma({k}) beyond max_index {}", self.max_index)))
    }

    /// σ^{(n)}(k)
    pub fn sigma_iter(&self, k: u64, n: u32) -> Result<u64> {
        (0..n).try_fold(k, |j, _| self.sigma(j))
    }

    /// The block [σ(k), σ(k+1)) of coordinates carried by x_k.
    pub fn block(&self, k: u64) -> Result<Range<u64>> {
        Ok(self.sigma(k)?..self.sigma(k + 1)?)
    }

    /// ρ(k) = j iff σ(j) <= k < σ(j+1).
    pub fn rho(&self, k: u64) -> Result<u64> {
        if k < 2 {
            return Err(Error::Domain(format!("rho is defined for k >= 2, got {k}")));
        }
        if k >= self.rho_limit() {
            return Err(capacity(format!(
                "rho({k}) needs sigma beyond max_index {}",
                self.max_index
            )));
        }
        let table = &self.sigma[1..];
        Ok(table.partition_point(|&s| s <= k) as u64)
    }

    /// The ρ-orbit j, ρ(j), ρ²(j), ..., 1.
    pub fn orbit(&self, j: u64) -> Result<Vec<u64>> {
        if j == 0 {
            return Err(Error::Domain("indices start at 1".into()));
        }
        let mut orbit = vec![j];
        let mut cur = j;
        while cur > 1 {
            cur = self.rho(cur)?;
            orbit.push(cur);
        }
        Ok(orbit)
    }

    /// Λ(n) = σ^{(n)}(1)
    pub fn lambda(&self, n: u32) -> Result<u64> {
        self.lambda
            .get(n as usize)
            .copied()
            .ok_or_else(|| capacity(format!("Lambda({n}) beyond max_index {}", self.max_index)))
    }

    /// Λ(0), Λ(1), ... as far as tabulated.
    pub fn lambdas(&self) -> &[u64] {
        &self.lambda
    }

    /// Γ(m): the n with Λ(n) <= m < Λ(n+1).
    pub fn gamma(&self, m: u64) -> Result<u32> {
        if m == 0 {
            return Err(Error::Domain("gamma is defined for m >= 1".into()));
        }
        let n1 = self.lambda.partition_point(|&l| l <= m);
        if n1 >= self.lambda.len() {
            return Err(capacity(format!("Gamma({m}) beyond the tabulated levels")));
        }
        Ok(n1 as u32 - 1)
    }

    /// Largest m with Γ(m) known.
    pub fn gamma_limit(&self) -> u64 {
        self.lambda.last().copied().unwrap_or(1) - 1
    }

    /// J_{k,n} = [σ^{(n)}(k), σ^{(n)}(k+1))
    pub fn block_interval(&self, k: u64, n: u32) -> Result<Range<u64>> {
        if k == 0 {
            return Err(Error::Domain("indices start at 1".into()));
        }
        Ok(self.sigma_iter(k, n)?..self.sigma_iter(k + 1, n)?)
    }

    /// J_n = [Λ(n), Λ(n+1))
    pub fn level_interval(&self, n: u32) -> Result<Range<u64>> {
        Ok(self.lambda(n)?..self.lambda(n + 1)?)
    }

    /// Σ(A) = ∪_{k∈A} [σ(k), σ(k+1)), sorted.
    pub fn sigma_set(&self, a: impl IntoIterator<Item = u64>) -> Result<Vec<u64>> {
        let mut ks: Vec<u64> = a.into_iter().collect();
        ks.sort_unstable();
        ks.dedup();
        let mut out = Vec::new();
        for k in ks {
            out.extend(self.block(k)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classical(max: u64) -> IndexTables {
        IndexTables::new(DeltaSpec::constant(2).unwrap(), max).unwrap()
    }

    #[test]
    fn parse_grammar() {
        assert_eq!("const:3".parse::<DeltaSpec>().unwrap().d(10), 3);
        let l: DeltaSpec = "list:2,3,5;tail=7".parse().unwrap();
        assert_eq!((l.d(1), l.d(3), l.d(4), l.d(100)), (2, 5, 7, 7));
        assert!(l.is_nondecreasing());
        let l: DeltaSpec = "list:3,2".parse().unwrap();
        assert!(!l.is_nondecreasing());
        let p: DeltaSpec = "pow:0.5".parse().unwrap();
        assert_eq!((p.d(1), p.d(4), p.d(5), p.d(9)), (2, 2, 3, 3));
        assert!("const:1".parse::<DeltaSpec>().is_err());
        assert!("list:2,1".parse::<DeltaSpec>().is_err());
        assert!("wat:2".parse::<DeltaSpec>().is_err());
        assert!("2".parse::<DeltaSpec>().is_err());
        let a: DeltaSpec = "list:2,3,4,...".parse().unwrap();
        assert_eq!((a.d(1), a.d(3), a.d(4), a.d(1000)), (2, 4, 5, 1001));
        assert_eq!(DeltaSpec::successive().d(77), a.d(77));
        assert_eq!(a.to_string(), "list:2,3,4,...");
        assert!("list:2,...".parse::<DeltaSpec>().is_err());
        assert!("list:5,3,...".parse::<DeltaSpec>().is_err());
    }

    #[test]
    fn table_text_round_trip() {
        let d = DeltaSpec::table(vec![2, 2, 3, 5]).unwrap();
        let text = d.to_table_text(4);
        assert_eq!(DeltaSpec::from_table_text(&text).unwrap(), d);
        assert_eq!(d.d(9), 5);
    }

    #[test]
    fn overflow_lowers_capacity() {
        let t = IndexTables::new(DeltaSpec::power(12.0).unwrap(), 1 << 12).unwrap();
        assert!(t.max_index() < 1 << 12);
        assert!(t.sigma(t.max_index() + 1).is_ok());
        assert!(t.sigma(t.max_index() + 2).is_err());
    }

    #[test]
    fn domain_errors() {
        let t = classical(16);
        assert!(matches!(t.rho(1), Err(Error::Domain(_))));
        assert!(matches!(t.rho(1000), Err(Error::CapacityExceeded(_))));
        assert!(matches!(t.gamma(0), Err(Error::Domain(_))));
        assert!(matches!(t.gamma(1 << 20), Err(Error::CapacityExceeded(_))));
    }
}
