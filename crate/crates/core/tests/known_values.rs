//! Small hand-checkable values across the library.

use lindy::basis::{BasisContext, CoefficientVector};
use lindy::conditionality::{km_upper, t_norm_top, uv_witness};
use lindy::directsum::{block_norm, BlockLayout};
use lindy::dual::{column_q_bound, dual_sum_supnorm, norming_check, sparse_level_sum};
use lindy::error::Error;
use lindy::greedy::{
    coordinate_projection, greedy_projection, lebesgue_bounds, restricted_truncation,
    signed_sum_norm,
};
use lindy::indexing::{DeltaSpec, IndexTables};
use lindy::quotient::{interval, q_map, step_p_norm, StepFunction};
use lindy::sparse::{PContext, SparseVector};
use lindy::synthesis::{delta_from_milestones, growth_band, validate_milestones, ConcaveFamily};
use num_bigint::BigInt;
use num_rational::BigRational;

fn two() -> IndexTables {
    IndexTables::new(DeltaSpec::constant(2).unwrap(), 1 << 12).unwrap()
}

fn successive() -> IndexTables {
    IndexTables::new(DeltaSpec::successive(), 1 << 12).unwrap()
}

fn basis(p: f64) -> BasisContext<f64> {
    BasisContext::from_delta(
        DeltaSpec::constant(2).unwrap(),
        1 << 12,
        PContext::new(p).unwrap(),
    )
    .unwrap()
}

fn exact(q: u32) -> BasisContext<BigRational> {
    BasisContext::from_delta(
        DeltaSpec::constant(2).unwrap(),
        1 << 10,
        PContext::reciprocal(q).unwrap(),
    )
    .unwrap()
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn vec_f(entries: &[(u64, f64)]) -> SparseVector<f64> {
    SparseVector::from_entries(entries.iter().copied())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

#[test]
fn sigma_values() {
    let t = two();
    assert_eq!(t.sigma(1).unwrap(), 2);
    assert_eq!(t.sigma(3).unwrap(), 6);
    assert_eq!(successive().sigma(3).unwrap(), 7);
}

#[test]
fn rho_values() {
    let t = two();
    assert_eq!(t.rho(2).unwrap(), 1);
    assert_eq!(t.rho(5).unwrap(), 2);
    let three = IndexTables::new(DeltaSpec::constant(3).unwrap(), 256).unwrap();
    assert_eq!(three.rho(7).unwrap(), 2);
}

#[test]
fn lambda_and_gamma_values() {
    let t = two();
    assert_eq!(t.lambda(0).unwrap(), 1);
    assert_eq!(t.lambda(3).unwrap(), 8);
    assert_eq!(successive().lambda(2).unwrap(), 4);
    assert_eq!(t.gamma(1).unwrap(), 0);
    assert_eq!(t.gamma(7).unwrap(), 2);
    assert_eq!(t.gamma(8).unwrap(), 3);
}

#[test]
fn block_intervals_and_sigma_sets() {
    let t = two();
    assert_eq!(t.block_interval(1, 2).unwrap(), 4..8);
    assert_eq!(t.block_interval(2, 1).unwrap(), 4..6);
    assert_eq!(t.block_interval(5, 0).unwrap(), 5..6);
    assert_eq!(t.sigma_set([1]).unwrap(), vec![2, 3]);
    assert_eq!(t.sigma_set([1, 2]).unwrap(), vec![2, 3, 4, 5]);
    assert!(t.sigma_set([]).unwrap().is_empty());
}

#[test]
fn invalid_delta_is_rejected() {
    assert!(matches!(DeltaSpec::constant(1), Err(Error::InvalidSpec(_))));
    assert!("const:1".parse::<DeltaSpec>().is_err());
}

#[test]
fn milestone_checks() {
    assert!(validate_milestones(&[1, 2, 4, 8, 16]).is_valid());
    let bad = validate_milestones(&[1, 2, 4, 6]);
    assert!(!bad.is_valid());
    assert_eq!(bad.first_violation(), Some(1));
    assert!(!validate_milestones(&[1, 2, 3]).is_valid());
}

#[test]
fn doubling_milestones_give_constant_two() {
    let d = delta_from_milestones(&[1, 2, 4, 8, 16, 32]).unwrap();
    assert!((1..=4).all(|n| d.d(n) == 2));
}

#[test]
fn linear_profile_tracks_log() {
    let band = growth_band(&two(), &ConcaveFamily::Power(1.0), 1 << 10).unwrap();
    assert!(band.c1 >= 0.25 && band.c2 <= 4.0, "{band:?}");
}

#[test]
fn sparse_norms_and_pairing() {
    let half = PContext::new(0.5).unwrap();
    let one = PContext::new(1.0).unwrap();
    assert!(close(vec_f(&[(1, 1.0), (2, 1.0)]).p_norm(&half).value, 4.0));
    assert!(close(
        vec_f(&[(1, 1.0), (2, -0.5), (3, -0.5)]).p_norm(&one).value,
        2.0
    ));
    assert_eq!(vec_f(&[(1, 1.0)]).sup_norm(), 1.0);
    assert_eq!(vec_f(&[(1, 1.0), (2, 0.5)]).sup_norm(), 1.0);
    assert_eq!(vec_f(&[(1, -1.0), (2, 1.0), (3, -1.0)]).sup_norm(), 1.0);
    assert_eq!(
        vec_f(&[(1, 1.0), (2, 0.5)]).pairing(&SparseVector::unit(2)),
        0.5
    );
}

#[test]
fn basis_and_dual_vectors() {
    let b = exact(1);
    let x1 = SparseVector::from_entries([(1, r(1, 1)), (2, r(-1, 2)), (3, r(-1, 2))]);
    let x2 = SparseVector::from_entries([(2, r(1, 1)), (4, r(-1, 2)), (5, r(-1, 2))]);
    assert_eq!(b.basis_vector(1).unwrap(), x1);
    assert_eq!(b.basis_vector(2).unwrap(), x2);
    let d3 = SparseVector::from_entries([(1, r(1, 2)), (3, r(1, 1))]);
    let d5 = SparseVector::from_entries([(1, r(1, 4)), (2, r(1, 2)), (5, r(1, 1))]);
    assert_eq!(b.dual_vector(3).unwrap(), d3);
    assert_eq!(b.dual_vector(5).unwrap(), d5);
}

#[test]
fn synthesis_and_analysis() {
    let b = exact(1);
    let a: CoefficientVector<BigRational> =
        CoefficientVector(SparseVector::from_entries([(1, r(1, 1)), (2, r(3, 10))]));
    let expected = SparseVector::from_entries([
        (1, r(1, 1)),
        (2, r(-1, 5)),
        (3, r(-1, 2)),
        (4, r(-3, 20)),
        (5, r(-3, 20)),
    ]);
    assert_eq!(b.synthesize(&a).unwrap(), expected);

    let coeffs = b.analyze(&SparseVector::unit(1), 7).unwrap();
    let want = [
        r(1, 1),
        r(1, 2),
        r(1, 2),
        r(1, 4),
        r(1, 4),
        r(1, 4),
        r(1, 4),
    ];
    for (j, w) in (1..=7).zip(want) {
        assert_eq!(coeffs.0.value(j), w, "coordinate {j}");
    }
}

#[test]
fn cleared_vector_has_norm_two() {
    let b = exact(1);
    let z = b.cleared_vector(1, 2).unwrap();
    let want =
        SparseVector::from_entries([(1, r(1, 1)), (3, r(-1, 2)), (4, r(-1, 4)), (5, r(-1, 4))]);
    assert_eq!(z, want);
    assert_eq!(z.p_power(b.ctx()).exact_value(), Some(&r(2, 1)));
}

#[test]
fn first_greedy_step() {
    let b = basis(1.0);
    let a = CoefficientVector(vec_f(&[(1, 1.0), (2, 0.3)]));
    let out = greedy_projection(&b, &a, 1).unwrap();
    assert_eq!(out.greedy_set, vec![1]);
    assert!(close(out.norms.f.to_f64(), 2.0));
    assert!(close(out.norms.residual.to_f64(), 0.6));
    assert!(close(
        out.norms.residual.to_f64() / out.norms.f.to_f64(),
        0.3
    ));
}

#[test]
fn restricted_truncation_levels_out() {
    let a = CoefficientVector(vec_f(&[(1, 1.0), (2, 0.3)]));
    let u = restricted_truncation(&a, 2).unwrap();
    assert_eq!(u.0, vec_f(&[(1, 0.3), (2, 0.3)]));
    let empty: CoefficientVector<f64> = CoefficientVector::new();
    assert_eq!(restricted_truncation(&empty, 1), Err(Error::EmptyInput));
}

#[test]
fn coordinate_projection_norm() {
    let b = basis(1.0);
    let a = CoefficientVector(vec_f(&[(1, 1.0), (2, 0.3)]));
    let s = coordinate_projection(&a, [2]);
    assert!(close(b.synthesize(&s).unwrap().p_norm(b.ctx()).value, 0.6));
}

#[test]
fn democracy_pair() {
    let b = basis(1.0);
    assert!(close(
        signed_sum_norm(&b, &[1, 2], &[1.0, 1.0]).unwrap(),
        3.0
    ));
}

#[test]
fn lebesgue_factor() {
    let ctx = PContext::new(1.0).unwrap();
    let (lo, hi) = lebesgue_bounds(&ctx, (1.0, 1.0), 1.0).unwrap();
    assert_eq!(lo, 1.0);
    assert!(close(hi, 2.0));
    assert!(matches!(
        lebesgue_bounds(&ctx, (2.0, 1.0), 1.0),
        Err(Error::BoundOrdering { .. })
    ));
}

#[test]
fn column_top_norms() {
    let b = basis(1.0);
    assert!(close(t_norm_top(&b, 1, 64).unwrap(), 1.0));
    assert!(close(t_norm_top(&b, 2, 64).unwrap(), 1.5));
    assert!(close(t_norm_top(&b, 7, 64).unwrap(), 3.0));
}

#[test]
fn conditionality_upper_bounds() {
    assert!(close(km_upper(&basis(1.0), 2).unwrap(), 3.0));
    assert!(km_upper(&basis(0.5), 2).unwrap() <= 16.0);
}

#[test]
fn uv_pair_at_two() {
    let b = exact(1);
    let w = uv_witness(&b, 2).unwrap();
    assert_eq!(w.u_power.exact_value(), Some(&r(2, 1)));
    assert_eq!(w.v_power.exact_value(), Some(&r(3, 1)));
    assert!(close(w.lower_estimate, 0.75));
}

#[test]
fn dyadic_intervals() {
    let t = two();
    let cases = [
        (1, (0, 1), (1, 1)),
        (2, (0, 1), (1, 2)),
        (3, (1, 2), (1, 1)),
        (5, (1, 4), (1, 2)),
    ];
    for (j, (ln, ld), (rn, rd)) in cases {
        let i = interval(&t, j).unwrap();
        assert_eq!((i.left, i.right), (r(ln, ld), r(rn, rd)), "I_{j}");
    }
}

#[test]
fn quotient_kills_basis_vectors() {
    let b = exact(1);
    for k in 1..20 {
        assert!(
            q_map(&b, &b.basis_vector(k).unwrap()).unwrap().is_zero(),
            "x_{k}"
        );
    }
}

#[test]
fn step_function_norm() {
    let f = StepFunction::new(vec![r(0, 1), r(1, 2), r(1, 1)], vec![r(2, 1), r(0, 1)]).unwrap();
    let n = step_p_norm(&f, &PContext::new(1.0).unwrap());
    assert!(close(n.value, 1.0));
}

#[test]
fn two_block_direct_sum() {
    let b = basis(1.0);
    let layout = BlockLayout::new(vec![1, 1]).unwrap();
    let blocks = vec![CoefficientVector(vec_f(&[(1, 1.0)])); 2];
    assert!(close(block_norm(&layout, &b, &blocks).unwrap().value, 4.0));
}

#[test]
fn dual_sums() {
    let b = exact(1);
    let plus = dual_sum_supnorm(&b, &[1, 2, 3], &vec![r(1, 1); 3]).unwrap();
    assert_eq!(plus.vector.value(1), r(2, 1));
    assert_eq!(plus.sup_norm, r(2, 1));
    let alt = dual_sum_supnorm(&b, &[1, 2, 3], &[r(-1, 1), r(1, 1), r(-1, 1)]).unwrap();
    assert_eq!(alt.sup_norm, r(1, 1));
    assert_eq!(sparse_level_sum(&b, 0).unwrap(), r(1, 1));
    for n in 0..8 {
        assert!(sparse_level_sum(&b, n).unwrap() <= r(2, 1));
    }
}

#[test]
fn column_q_sum() {
    let b = basis(0.5);
    let c = column_q_bound(&b, 1, 1.0, 12).unwrap();
    assert!(close(c.bound, 2.0));
    assert!(c.pass(), "{c:?}");
}

#[test]
fn norming_on_units() {
    for p in [1.0, 0.5] {
        let b = basis(p);
        let rep = norming_check(&b, &SparseVector::unit(3), 20, 1).unwrap();
        assert!(rep.pass);
        assert!(close(rep.constructive_lower, 2f64.powf(-1.0 / p)));
    }
}
