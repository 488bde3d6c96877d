//! Synthesis of δ-sequences with prescribed level growth.
//!
//! A milestone list M_0 = 1, M_1 = 2, M_2 >= 4, ... becomes the Λ-sequence of
//! the synthesized δ. Concave profiles φ are turned into milestones through
//! M(x) = ⌊exp(φ^{-1}(x))⌋.

use serde::Serialize;

use crate::error::{capacity, Error, Result};
use crate::indexing::{DeltaSpec, IndexTables};

/// Largest number of δ terms a synthesized table may hold.
pub const TABLE_CAP: u64 = 1 << 22;

/// Largest offset tried by the concave pipeline.
pub const A_MAX: u64 = 64;

/// Outcome of [`validate_milestones`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MilestoneCheck {
    /// Smallest violating index, with a reason.
    pub violation: Option<(usize, String)>,
}

impl MilestoneCheck {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }

    pub fn first_violation(&self) -> Option<usize> {
        self.violation.as_ref().map(|(n, _)| *n)
    }
}

fn ceil_div(a: u128, b: u128) -> u128 {
    a.div_ceil(b)
}

/// Checks the start values, strict growth and the ratio condition
/// ⌈A_n⌉ <= ⌊A_{n+1}⌋ with A_n = (M_{n+1} − M_n)/(M_n − M_{n−1}).
pub fn validate_milestones(m: &[u64]) -> MilestoneCheck {
    let fail = |n: usize, why: String| MilestoneCheck {
        violation: Some((n, why)),
    };
    if m.len() < 3 {
        return fail(
            m.len(),
            format!("need at least 3 milestones, got {}", m.len()),
        );
    }
    if m[0] != 1 {
        return fail(0, format!("M_0 must be 1, got {}", m[0]));
    }
    if m[1] != 2 {
        return fail(1, format!("M_1 must be 2, got {}", m[1]));
    }
    if m[2] < 4 {
        return fail(2, format!("M_2 must be at least 4, got {}", m[2]));
    }
    if let Some(n) = (1..m.len()).find(|&n| m[n] <= m[n - 1]) {
        return fail(n, format!("milestones must increase strictly at n = {n}"));
    }
    let gap = |n: usize| (m[n] - m[n - 1]) as u128;
    for n in 1..m.len() - 2 {
        let up = ceil_div(gap(n + 1), gap(n));
        let down = gap(n + 2) / gap(n + 1);
        if up > down {
            return fail(
                n,
                format!("ratio condition fails at n = {n}: {up} > {down}"),
            );
        }
    }
    MilestoneCheck { violation: None }
}

/// The δ whose Λ-sequence is `m` on the covered prefix.
///
/// The table holds d_t for 1 <= t < M_{L−1}; its last value repeats beyond.
pub fn delta_from_milestones(m: &[u64]) -> Result<DeltaSpec> {
    let check = validate_milestones(m);
    if let Some((n, why)) = check.violation {
        return Err(Error::InvalidMilestones(format!("index {n}: {why}")));
    }
    let l = m.len() - 1;
    let top = m[l - 1];
    if top - 1 > TABLE_CAP {
        return Err(capacity(format!(
            "milestone table needs {} terms, cap is {TABLE_CAP}",
            top - 1
        )));
    }
    let h = convex_interpolant(m);
    let values = h.windows(2).map(|w| (w[1] - w[0]) as u64).collect();
    DeltaSpec::table(values)
}

/// h(t) for t = 1..=M_{L−1}, the piecewise-linear convex map with h(M_{n−1}) = M_n.
fn convex_interpolant(m: &[u64]) -> Vec<i128> {
    let l = m.len() - 1;
    let mut h = Vec::with_capacity(m[l - 1] as usize);
    let mi = |n: usize| m[n] as i128;
    for n in 1..l {
        let (lo, mid, hi) = (mi(n - 1), mi(n), mi(n + 1));
        let (num, den) = (hi - mid, mid - lo);
        let (floor_a, ceil_a) = (num / den, (num + den - 1) / den);
        let last = if n == l - 1 { mid } else { mid - 1 };
        for t in lo..=last {
            let f = mid + floor_a * (t - lo);
            let g = hi - ceil_a * (mid - t);
            h.push(f.max(g));
        }
    }
    h
}

/// Concave profile φ with φ(0) = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ConcaveFamily {
    /// φ(x) = x^c, 0 < c <= 1
    Power(f64),
    /// φ(x) = log(1 + x)
    Log1p,
}

impl ConcaveFamily {
    pub fn phi(&self, x: f64) -> f64 {
        match self {
            ConcaveFamily::Power(c) => x.powf(*c),
            ConcaveFamily::Log1p => x.ln_1p(),
        }
    }

    /// φ^{-1}(y) by bisection on a geometrically grown bracket.
    pub fn psi(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        while self.phi(hi) < y {
            hi *= 2.0;
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        let mut lo = 0.0;
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.phi(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// M(x) = ⌊exp(ψ(x))⌋, or `None` beyond u64.
    pub fn milestone(&self, x: u64) -> Option<u64> {
        let e = self.psi(x as f64).exp();
        if e.is_finite() && e < u64::MAX as f64 {
            Some(e.floor() as u64)
        } else {
            None
        }
    }

    fn is_linear(&self) -> bool {
        matches!(self, ConcaveFamily::Power(c) if (c - 1.0).abs() < 1e-12)
    }
}

impl std::str::FromStr for ConcaveFamily {
    type Err = Error;

    /// `pow:<c>` or `log1p`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "log1p" {
            return Ok(ConcaveFamily::Log1p);
        }
        let c: f64 = s
            .strip_prefix("pow:")
            .and_then(|c| c.trim().parse().ok())
            .ok_or_else(|| {
                Error::InvalidSpec(format!("expected 'pow:<c>' or 'log1p', got '{s}'"))
            })?;
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::InvalidSpec(format!(
                "power exponent must lie in (0, 1], got {c}"
            )));
        }
        Ok(ConcaveFamily::Power(c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcaveSpec {
    pub family: ConcaveFamily,
    /// Requested number of levels L (milestones M_0..M_L).
    pub target_length: usize,
}

/// δ produced by the concave pipeline with its diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct ConcaveSynthesis {
    #[serde(skip)]
    pub delta: DeltaSpec,
    pub a: u64,
    pub b: u32,
    pub milestones: Vec<u64>,
    pub requested_length: usize,
    /// Integer range of x on which the eligibility inequalities were checked.
    pub checked_range: Option<(u64, u64)>,
    pub warnings: Vec<String>,
}

impl ConcaveSynthesis {
    /// Number of δ terms in the table.
    pub fn table_len(&self) -> u64 {
        self.milestones[self.milestones.len() - 2] - 1
    }

    /// Tables large enough to rebuild every milestone.
    pub fn tables(&self) -> Result<IndexTables> {
        IndexTables::new(self.delta.clone(), self.table_len().max(1) + 1)
    }
}

/// Runs the concave pipeline: pick the least eligible offset a, then b with
/// 2^b <= M(a+1) − M(a) < 2^{b+1}, and M_n = 2^n (n <= b),
/// M_n = M(n − b + a) − M(a) + 2^b (n >= b).
pub fn delta_from_concave(spec: ConcaveSpec) -> Result<ConcaveSynthesis> {
    if spec.target_length < 3 {
        return Err(Error::Domain(format!(
            "target_length must be at least 3, got {}",
            spec.target_length
        )));
    }
    let family = spec.family;
    if family.is_linear() {
        return classical(spec);
    }
    let mut last_range = None;
    for a in 0..=A_MAX {
        let (Some(ma), Some(ma1)) = (family.milestone(a), family.milestone(a + 1)) else {
            break;
        };
        if ma1 < ma + 2 {
            continue;
        }
        let b = 63 - (ma1 - ma).leading_zeros();
        let mut warnings = Vec::new();
        let mut milestones = Vec::with_capacity(spec.target_length + 1);
        for n in 0..=spec.target_length as u64 {
            let value = if n <= b as u64 {
                Some(1u64 << n)
            } else {
                family
                    .milestone(n - b as u64 + a)
                    .and_then(|mx| (mx - ma).checked_add(1 << b))
            };
            match value {
                Some(v) => milestones.push(v),
                None => {
                    warnings.push(format!("M_{n} exceeds u64; length truncated"));
                    break;
                }
            }
        }
        while milestones.len() >= 3 && milestones[milestones.len() - 2] - 1 > TABLE_CAP {
            milestones.pop();
            if warnings.iter().all(|w| !w.contains("table cap")) {
                warnings.push(format!("table cap {TABLE_CAP} reached; length truncated"));
            }
        }
        if milestones.len() < 3 {
            continue;
        }
        let l = milestones.len() as u64 - 1;
        let range = if l + a >= b as u64 + 3 {
            Some((a, l + a - b as u64 - 3))
        } else {
            None
        };
        last_range = range.or(last_range);
        if let Some((lo, hi)) = range {
            if !(lo..=hi).all(|x| eligible(&family, x)) {
                continue;
            }
        }
        if !validate_milestones(&milestones).is_valid() {
            continue;
        }
        if milestones.len() - 1 < spec.target_length {
            warnings.push(format!(
                "requested {} levels, produced {}",
                spec.target_length,
                milestones.len() - 1
            ));
        }
        let delta = delta_from_milestones(&milestones)?;
        return Ok(ConcaveSynthesis {
            delta,
            a,
            b,
            milestones,
            requested_length: spec.target_length,
            checked_range: range,
            warnings,
        });
    }
    Err(Error::SearchFailure {
        a_max: A_MAX,
        range: match last_range {
            Some((lo, hi)) => format!("[{lo}, {hi}]"),
            None => "[]".into(),
        },
    })
}

/// 5 <= ⌈H(x)⌉ <= ⌊H(x+1)⌋ with H(x) = (M(x+2) − M(x+1))/(M(x+1) − M(x)).
fn eligible(family: &ConcaveFamily, x: u64) -> bool {
    let m: Option<Vec<u128>> = (0..4)
        .map(|i| family.milestone(x + i).map(u128::from))
        .collect();
    let Some(m) = m else { return false };
    if m[1] <= m[0] || m[2] <= m[1] || m[3] <= m[2] {
        return false;
    }
    let up = ceil_div(m[2] - m[1], m[1] - m[0]);
    let down = (m[3] - m[2]) / (m[2] - m[1]);
    5 <= up && up <= down
}

/// The classical milestones M_n = 2^n, i.e. δ ≡ 2.
fn classical(spec: ConcaveSpec) -> Result<ConcaveSynthesis> {
    let mut warnings = vec!["linear profile: classical milestones 2^n".to_string()];
    let mut l = spec.target_length.min(63);
    while (1u64 << (l - 1)) - 1 > TABLE_CAP {
        l -= 1;
    }
    if l < spec.target_length {
        warnings.push(format!(
            "requested {} levels, produced {l}",
            spec.target_length
        ));
    }
    let milestones: Vec<u64> = (0..=l).map(|n| 1u64 << n).collect();
    Ok(ConcaveSynthesis {
        delta: delta_from_milestones(&milestones)?,
        a: 0,
        b: l as u32,
        milestones,
        requested_length: spec.target_length,
        checked_range: None,
        warnings,
    })
}

/// Two-sided band c₁ <= Γ(m)/φ(log m) <= c₂ over 4 <= m < `m_end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthBand {
    pub c1: f64,
    pub c2: f64,
    pub m_end: u64,
}

pub fn growth_band(tables: &IndexTables, family: &ConcaveFamily, m_end: u64) -> Result<GrowthBand> {
    let mut c1 = f64::INFINITY;
    let mut c2 = 0.0f64;
    for m in 4..m_end {
        let r = tables.gamma(m)? as f64 / family.phi((m as f64).ln());
        c1 = c1.min(r);
        c2 = c2.max(r);
    }
    Ok(GrowthBand { c1, c2, m_end })
}
