//! One verdict line per acceptance criterion. Exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use lindy::basis::BasisContext;
use lindy::conditionality::bound_report;
use lindy::directsum::{directsum_conditionality, isomorphism_norm, BlockLayout, EtaSpec};
use lindy::dual::{column_level_power_sums, column_q_bound, dual_democracy_scan};
use lindy::greedy::{democracy_scan, quasi_greedy_scan};
use lindy::indexing::{DeltaSpec, IndexTables};
use lindy::quotient::{q_map, step_p_power};
use lindy::random::{log_uniform_magnitude, random_sign, random_subset, trial_rng};
use lindy::sparse::{PContext, PowerSum, Scalar, SparseVector};
use lindy::synthesis::{
    delta_from_concave, growth_band, validate_milestones, ConcaveFamily, ConcaveSpec,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use rand::Rng;

type Q = BigRational;
type Verdict = Result<String, String>;

const SEED: u64 = 20_240_611;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn ctx(p: &str) -> PContext {
    p.parse().expect("valid p")
}

fn delta(s: &str) -> DeltaSpec {
    s.parse().expect("valid delta")
}

/// δ synthesized from φ(x) = x^{1/2}.
fn synthesized_half() -> DeltaSpec {
    delta_from_concave(ConcaveSpec {
        family: ConcaveFamily::Power(0.5),
        target_length: 8,
    })
    .expect("synthesis succeeds")
    .delta
}

fn deltas() -> Vec<(String, DeltaSpec)> {
    vec![
        ("const:2".into(), delta("const:2")),
        ("list:2,3,4,...".into(), delta("list:2,3,4,...")),
        ("synthesized pow:0.5".into(), synthesized_half()),
    ]
}

fn context<S: Scalar>(d: &DeltaSpec, max_index: u64, p: &str) -> BasisContext<S> {
    BasisContext::from_delta(d.clone(), max_index, ctx(p)).expect("tables fit")
}

fn lib<T>(r: lindy::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn criterion_1() -> Verdict {
    const N: u64 = 512;
    for (name, d) in deltas() {
        let reach = lib(IndexTables::new(d.clone(), N + 2))?
            .sigma(N + 1)
            .map_err(|e| e.to_string())?;
        for p in ["1", "1/2"] {
            let b = context::<Q>(&d, reach + 2, p);
            let duals = (1..=N)
                .map(|j| b.dual_vector(j))
                .collect::<lindy::Result<Vec<_>>>();
            let duals = lib(duals)?;
            for k in 1..=N {
                let x = lib(b.basis_vector(k))?;
                for (j, dual) in duals.iter().enumerate() {
                    let j = j as u64 + 1;
                    let expected = if j == k { Q::one() } else { Q::zero() };
                    if dual.pairing(&x) != expected {
                        return Err(format!("⟨x*_{j}, x_{k}⟩ ≠ δ_jk for {name}, p = {p}"));
                    }
                }
            }
        }
    }
    Ok(format!(
        "⟨x_j*, x_k⟩ = δ_jk exactly for j, k ≤ {N}, three δ, p ∈ {{1, 1/2}}"
    ))
}

fn criterion_2() -> Verdict {
    const N: u64 = 512;
    let two = PowerSum::from_integer(2);
    for (name, d) in deltas() {
        for p in ["1", "1/2"] {
            let b = context::<Q>(&d, N + 2, p);
            for k in 1..=N {
                let power = lib(b.basis_vector(k))?.p_power(b.ctx());
                if power != two {
                    return Err(format!("‖x_{k}‖^p = {power} for {name}, p = {p}"));
                }
                let sup = lib(b.dual_vector(k))?.sup_norm();
                if sup != Q::one() {
                    return Err(format!("‖x*_{k}‖_∞ = {sup} for {name}, p = {p}"));
                }
            }
        }
    }
    Ok(format!("‖x_k‖^p = 2 and ‖x_k*‖_∞ = 1 exactly for k ≤ {N}"))
}

fn criterion_3() -> Verdict {
    let mut notes = Vec::new();
    for p in ["1", "1/2"] {
        let b = context::<f64>(&delta("const:2"), 1 << 14, p);
        let r = lib(quasi_greedy_scan(&b, 10_000, 2048, SEED))?;
        notes.push(format!(
            "p = {p}: residual {:.6} ≤ {:.6}, projection {:.6} ≤ {:.6}",
            r.worst_residual.ratio, r.residual_bound, r.worst_projection.ratio, r.projection_bound
        ));
        if !r.pass {
            return Err(notes.join("; "));
        }
    }
    Ok(notes.join("; "))
}

fn criterion_4() -> Verdict {
    let grid: Vec<usize> = (0..=10).map(|i| 1 << i).collect();
    let mut notes = Vec::new();
    let mut failed = false;
    for p in ["1", "1/2"] {
        let b = context::<f64>(&delta("const:2"), 1 << 14, p);
        let rows = lib(democracy_scan(&b, &grid, 500, SEED))?;
        match rows.iter().find(|r| !r.pass()) {
            None => notes.push(format!("p = {p}: all m ≤ 1024 within bounds")),
            Some(r) => {
                failed = true;
                notes.push(format!(
                    "p = {p}: m = {} has max ‖1_(ε,A)‖ = {} > 2m^(1/p) = {} (min {} vs lower {})",
                    r.m, r.max, r.upper_bound, r.min, r.lower_bound
                ));
            }
        }
    }
    if failed {
        Err(notes.join("; "))
    } else {
        Ok(notes.join("; "))
    }
}

fn criterion_5() -> Verdict {
    let grid: Vec<u64> = (1..=12).map(|i| 1 << i).collect();
    let mut checked = 0;
    for (name, d) in [
        ("const:2", delta("const:2")),
        ("list:2,3,4,...", delta("list:2,3,4,...")),
    ] {
        for p in ["1", "1/2"] {
            let b = context::<Q>(&d, 1 << 15, p);
            for &m in &grid {
                let r = lib(bound_report(&b, m))?;
                if !r.sandwiched(b.ctx()) {
                    return Err(format!(
                        "{name}, p = {p}, m = {m}: lower {} upper {:?} reference {} ‖v‖^p {} (certain: {})",
                        r.witnessed_lower, r.certified_upper, r.reference, r.v_power, r.v_exceeds
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} (δ, p, m) cases with m ∈ {{2, 4, ..., 4096}}; ‖v_m‖^p > 1+Γ(m) certified"
    ))
}

fn criterion_6() -> Verdict {
    const M: u64 = 1 << 20;
    let classical = lib(IndexTables::new(delta("const:2"), 2 * M + 2))?;
    for m in 1..=M {
        let g = lib(classical.gamma(m))? as u64;
        let log = m.ilog2() as u64;
        let ceil = if m.is_power_of_two() { log } else { log + 1 };
        if g < log || g > ceil {
            return Err(format!("Γ({m}) = {g} outside [{log}, {ceil}]"));
        }
    }
    for spec in ["const:2", "const:3", "list:2,3,4,...", "pow:0.5"] {
        let t = lib(IndexTables::new(delta(spec), 2 * M + 2))?;
        for m in 1..=M {
            let g = lib(t.gamma(m))?;
            let g2 = lib(t.gamma(2 * m))?;
            if g2 > g + 1 || (m >= 2 && g + 1 > 2 * g) {
                return Err(format!("{spec}: Γ({m}) = {g}, Γ({}) = {g2}", 2 * m));
            }
        }
    }
    Ok("Γ classical band and doubling for all m ≤ 2^20".into())
}

fn criterion_7() -> Verdict {
    let mut levels = 0;
    for (name, d) in deltas() {
        for p in ["1", "1/2"] {
            let b = context::<Q>(&d, 1 << 16, p);
            for k in 1..=64 {
                let sums = lib(column_level_power_sums(&b, k, 64))?;
                if let Some(n) = sums.iter().position(|s| !s.is_one()) {
                    return Err(format!(
                        "{name}, p = {p}: level {n} of column {k} sums to {}",
                        sums[n]
                    ));
                }
                levels += sums.len();
            }
        }
    }
    let b = context::<Q>(&delta("const:2"), 1 << 16, "1/2");
    let mut worst: f64 = 0.0;
    for k in 1..=64 {
        let c = lib(column_q_bound(&b, k, 1.0, 64))?;
        if !c.pass() {
            return Err(format!(
                "column {k}: Σ|x_j*(k)| = {} > {}",
                c.total(),
                c.bound
            ));
        }
        worst = worst.max(c.total() / c.bound);
    }
    Ok(format!("{levels} level sums equal 1; (p, q) = (1/2, 1) column sums at most {worst:.6} of the bound"))
}

/// ±(a/c)^{1/p} with a, c ∈ [1, 9]: rational, with a rational p-th power.
fn perfect_power<R: Rng>(rng: &mut R, root: u32) -> Q {
    let a = BigInt::from(rng.random_range(1..=9));
    let c = BigInt::from(rng.random_range(1..=9));
    let r = Q::new(Pow::pow(&a, root), Pow::pow(&c, root));
    if rng.random::<bool>() {
        r
    } else {
        -r
    }
}

fn criterion_8() -> Verdict {
    for (p, root) in [("1", 1u32), ("1/2", 2)] {
        let b = context::<Q>(&delta("const:2"), 1 << 10, p);
        let ctx = *b.ctx();
        for k in 1..=256 {
            if !lib(q_map(&b, &lib(b.basis_vector(k))?))?.is_zero() {
                return Err(format!("p = {p}: Q(x_{k}) ≠ 0"));
            }
        }
        for n in 0..=6 {
            let mut rng = trial_rng(SEED, n as u64);
            let v: SparseVector<Q> = lib(b.tables().level_interval(n))?
                .map(|j| (j, perfect_power(&mut rng, root)))
                .collect();
            if step_p_power(&lib(q_map(&b, &v))?, &ctx) != v.p_power(&ctx) {
                return Err(format!("p = {p}: level {n} is not isometric"));
            }
        }
        for t in 0..1000 {
            let mut rng = trial_rng(SEED + 1, t);
            let size = rng.random_range(1..=64);
            let v: SparseVector<Q> = random_subset(&mut rng, 128, size)
                .into_iter()
                .map(|j| (j, perfect_power(&mut rng, root)))
                .collect();
            let image = step_p_power(&lib(q_map(&b, &v))?, &ctx);
            if !image.certainly_le(&v.p_power(&ctx)) {
                return Err(format!("p = {p}: trial {t} has ‖Qv‖^p = {image} > ‖v‖^p"));
            }
        }
    }
    Ok("kernel k ≤ 256, levels n ≤ 6 isometric, 1000 contractions, all exact".into())
}

/// Secant exponents ln(Γ(M_{n+1})/Γ(M_n)) / ln(ln M_{n+1} / ln M_n) past the
/// dyadic prefix M_n = 2^n, n ≤ b, that every profile shares.
fn secant_exponents(milestones: &[u64], b: u32) -> Vec<f64> {
    let start = (b as usize).clamp(1, milestones.len().saturating_sub(2));
    (start..milestones.len() - 1)
        .map(|n| {
            let (lo, hi) = (milestones[n] as f64, milestones[n + 1] as f64);
            ((n + 1) as f64 / n as f64).ln() / (hi.ln() / lo.ln()).ln()
        })
        .collect()
}

fn criterion_9() -> Verdict {
    let mut bands = BTreeMap::new();
    let mut notes = Vec::new();
    for (name, family) in [
        ("pow:1", ConcaveFamily::Power(1.0)),
        ("pow:0.5", ConcaveFamily::Power(0.5)),
        ("log1p", ConcaveFamily::Log1p),
    ] {
        let s = lib(delta_from_concave(ConcaveSpec {
            family,
            target_length: 8,
        }))?;
        if !validate_milestones(&s.milestones).is_valid() {
            return Err(format!("{name}: milestones {:?} invalid", s.milestones));
        }
        let t = lib(s.tables())?;
        let rebuilt: Vec<u64> = lib((0..s.milestones.len() as u32)
            .map(|n| t.lambda(n))
            .collect())?;
        if rebuilt != s.milestones {
            return Err(format!("{name}: rebuilt {rebuilt:?} ≠ {:?}", s.milestones));
        }
        let m_end = (*s.milestones.last().expect("nonempty")).min(1 << 24);
        let band = lib(growth_band(&t, &family, m_end))?;
        if !(band.c1 > 0.0 && band.c2.is_finite()) {
            return Err(format!("{name}: band [{}, {}]", band.c1, band.c2));
        }
        let exps = secant_exponents(&s.milestones, s.b);
        let lo = exps.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = exps.iter().copied().fold(0.0, f64::max);
        notes.push(format!(
            "{name}: Γ/φ(log m) ∈ [{:.3}, {:.3}], exponents [{lo:.3}, {hi:.3}]",
            band.c1, band.c2
        ));
        bands.insert(name, (lo, hi));
    }
    let (one, half) = (bands["pow:1"], bands["pow:0.5"]);
    if half.1 < one.0 {
        Ok(notes.join("; "))
    } else {
        Err(format!("exponent bands overlap: {}", notes.join("; ")))
    }
}

fn criterion_10() -> Verdict {
    const M: u64 = 4096;
    let b = context::<Q>(&delta("const:2"), 4 * M, "1");
    let t = b.tables();
    let mut first = Q::zero();
    // Σ_{j≤m} (−1)^j x_j*, with a multiset of |entries| for the running sup.
    let mut alt: BTreeMap<u64, Q> = BTreeMap::new();
    let mut magnitudes: BTreeMap<Q, usize> = BTreeMap::new();
    for m in 1..=M {
        let x = lib(b.dual_vector(m))?;
        first += x.value(1);
        let sign = if m % 2 == 0 { Q::one() } else { -Q::one() };
        for (i, c) in x.iter() {
            let entry = alt.entry(i).or_insert_with(Q::zero);
            if !entry.is_zero() {
                let old = entry.abs();
                let count = magnitudes.get_mut(&old).expect("tracked");
                *count -= 1;
                if *count == 0 {
                    magnitudes.remove(&old);
                }
            }
            *entry += &sign * c;
            if !entry.is_zero() {
                *magnitudes.entry(entry.abs()).or_insert(0) += 1;
            }
        }
        let gamma = lib(t.gamma(m))?;
        if first <= Q::from_integer(gamma.into()) {
            return Err(format!("Σ_(j≤{m}) x_j*(1) = {first} ≤ Γ = {gamma}"));
        }
        let sup = magnitudes
            .keys()
            .next_back()
            .cloned()
            .unwrap_or_else(Q::zero);
        if sup > q(2, 1) {
            return Err(format!("alternating sum at m = {m} has sup {sup}"));
        }
    }
    let bf = context::<f64>(&delta("const:2"), 4 * M, "1");
    let grid: Vec<u64> = (0..=12).map(|i| 1 << i).collect();
    let rows = lib(dual_democracy_scan(&bf, &grid, 200, SEED))?;
    if let Some(r) = rows.iter().find(|r| !r.pass) {
        return Err(format!(
            "m = {}: sampled sup {} > 1 + Γ = {}",
            r.m, r.max_sup, r.bound
        ));
    }
    Ok(format!(
        "all m ≤ {M} exact; Φ-upper sampled on m ∈ {{1, 2, ..., 4096}}"
    ))
}

fn criterion_11() -> Verdict {
    const N: u64 = 256;
    for p in ["1", "1/2"] {
        let probe = context::<Q>(&delta("const:2"), 4 * N, p);
        let top = *lib(probe.embedding_indices(N as usize))?
            .last()
            .expect("nonempty");
        let reach = lib(probe.tables().sigma(top + 1))?;
        let b = context::<Q>(&delta("const:2"), reach / 2 + 2, p);
        let ctx = *b.ctx();
        let mut inputs: Vec<SparseVector<Q>> = (1..=N).map(SparseVector::unit).collect();
        for t in 0..20 {
            let mut rng = trial_rng(SEED + 2, t);
            let mut x = SparseVector::new();
            for k in 1..=N {
                if rng.random_bool(0.5) {
                    x.set(k, q(rng.random_range(-50..=50), rng.random_range(1..=12)));
                }
            }
            x.set(N, q(1, 3));
            inputs.push(x);
        }
        for x in &inputs {
            let (_, back) = lib(b.embed_and_project(x))?;
            if &back != x {
                return Err(format!(
                    "p = {p}: P(J(x)) ≠ x for x supported in [1, {}]",
                    x.max_index().unwrap_or(0)
                ));
            }
        }
        for t in 0..1000 {
            let mut rng = trial_rng(SEED + 3, t);
            let size = rng.random_range(1..=64);
            let y: SparseVector<Q> = random_subset(&mut rng, top, size)
                .into_iter()
                .map(|k| {
                    (
                        k,
                        Q::from_integer(rng.random_range(-9i64..=9).pow(2).into()),
                    )
                })
                .collect();
            let py = lib(b.project(&y))?.p_power(&ctx);
            let bound = y.p_power(&ctx).scale(&q(2, 1));
            if !py.certainly_le(&bound) {
                return Err(format!(
                    "p = {p}: trial {t} has ‖Py‖^p = {py} > 2‖y‖^p = {bound}"
                ));
            }
        }
    }
    Ok(format!(
        "P∘J = Id on {} vectors supported ≤ {N}; 1000 projections per p, exact",
        N + 20
    ))
}

fn criterion_12() -> Verdict {
    let layout = lib(BlockLayout::from_eta(&EtaSpec::Geometric(2.0), 13))?;
    let dim = layout.dimension();
    let mut notes = Vec::new();
    for p in ["1", "1/2"] {
        let b = context::<f64>(&delta("const:2"), 1 << 16, p);
        let ctx = *b.ctx();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for t in 0..1000 {
            let mut rng = trial_rng(SEED + 4, t);
            let size = rng.random_range(1..=256);
            let a: SparseVector<f64> = random_subset(&mut rng, dim, size)
                .into_iter()
                .map(|g| (g, random_sign(&mut rng) * log_uniform_magnitude(&mut rng)))
                .collect();
            let ratio = lib(isomorphism_norm(&layout, &b, &lib(layout.split(&a))?))?.value
                / a.p_norm(&ctx).value;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
        if lo < 1.0 - 1e-9 || hi > ctx.two_root() * (1.0 + 1e-9) {
            return Err(format!(
                "p = {p}: ratios in [{lo}, {hi}], expected [1, {}]",
                ctx.two_root()
            ));
        }
        let grid: Vec<u64> = (1..=12).map(|i| 1 << i).collect();
        let bounds = lib(directsum_conditionality(&layout, &b, &grid))?;
        if let Some(r) = bounds.iter().find(|r| !r.bounded(ctx.two_root())) {
            return Err(format!(
                "p = {p}, m = {}: ratios {} and {} against Γ^(1/p)",
                r.m, r.lower_ratio, r.upper_ratio
            ));
        }
        let worst = bounds.iter().map(|r| r.upper_ratio).fold(0.0, f64::max);
        notes.push(format!(
            "p = {p}: sandwich [{lo:.4}, {hi:.4}], growth ratio ≤ {worst:.3}"
        ));
    }
    Ok(notes.join("; "))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("biorthogonality", criterion_1),
        ("norm facts", criterion_2),
        ("quasi-greedy constants", criterion_3),
        ("democracy", criterion_4),
        ("conditionality sandwich", criterion_5),
        ("classical numerics", criterion_6),
        ("column sums", criterion_7),
        ("quotient", criterion_8),
        ("synthesis round trip", criterion_9),
        ("dual basis", criterion_10),
        ("embedding and projection", criterion_11),
        ("direct sum", criterion_12),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({secs:.1}s) {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} {name}: FAIL ({secs:.1}s) {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
