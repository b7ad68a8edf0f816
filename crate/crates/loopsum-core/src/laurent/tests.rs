use proptest::prelude::*;

use super::*;
use crate::cyclofield::{Cyclo, Rational};
use crate::error::CoreError;

fn zvars(n: usize) -> VarSet {
    VarSet::numbered("z", n)
}

fn poly(vars: &VarSet, terms: &[(&[i32], Cyclo)]) -> LaurentPoly {
    LaurentPoly::from_terms(vars, terms.iter().map(|(e, c)| (e.to_vec(), c.clone())))
        .expect("well-formed terms")
}

fn one() -> Cyclo {
    Cyclo::one()
}

#[test]
fn zero_polynomial_is_the_empty_map() {
    let vars = zvars(2);
    let p = poly(&vars, &[(&[1, 0], one()), (&[0, 1], one())]);
    let diff = p.checked_sub(&p).unwrap();
    assert!(diff.is_zero());
    assert_eq!(diff.term_count(), 0);
    assert_eq!(diff.to_string(), "0");
    assert_eq!(p.checked_add(&diff).unwrap(), p);
}

#[test]
fn conjugate_binomials_multiply_to_difference_of_squares() {
    let vars = zvars(1);
    let p = poly(&vars, &[(&[1], one()), (&[-1], one())]);
    let q = poly(&vars, &[(&[1], one()), (&[-1], -&one())]);
    let expected = poly(&vars, &[(&[2], one()), (&[-2], -&one())]);
    assert_eq!(p.checked_mul(&q).unwrap(), expected);
}

#[test]
fn product_against_monomial_shifts_exponents() {
    let vars = zvars(2);
    let sum = poly(&vars, &[(&[1, 0], one()), (&[0, 1], one())]);
    let product = sum.mul_monomial(&[1, 1], &one()).unwrap();
    let expected = poly(&vars, &[(&[2, 1], one()), (&[1, 2], one())]);
    assert_eq!(product, expected);
}

#[test]
fn arithmetic_requires_matching_variable_sets() {
    let p = LaurentPoly::one(&zvars(1));
    let q = LaurentPoly::one(&zvars(2));
    assert!(matches!(
        p.checked_add(&q),
        Err(CoreError::VarSetMismatch { .. })
    ));
    assert!(matches!(
        p.checked_mul(&q),
        Err(CoreError::VarSetMismatch { .. })
    ));
}

#[test]
fn substitute_scales_and_renames() {
    // z1 + 1/z1 with z1 -> w * zeta becomes w*zeta + w^-1*zeta^-1.
    let vars = zvars(1);
    let p = poly(&vars, &[(&[1], one()), (&[-1], one())]);
    let result = p.substitute("z1", &Cyclo::omega(), "zeta", false).unwrap();
    let zeta = VarSet::new(["zeta"]).unwrap();
    let expected = poly(
        &zeta,
        &[(&[1], Cyclo::omega()), (&[-1], Cyclo::omega_pow(-1))],
    );
    assert_eq!(result, expected);
    assert_eq!(result.vars().names(), ["zeta".to_string()]);
}

#[test]
fn substitute_with_fresh_target_keeps_the_slot() {
    let vars = zvars(2);
    let p = poly(&vars, &[(&[1, 0], one()), (&[0, 1], one())]);
    let result = p
        .substitute("z2", &-&Cyclo::one(), "t", false)
        .unwrap();
    let expected_vars = VarSet::new(["z1", "t"]).unwrap();
    let expected = poly(&expected_vars, &[(&[1, 0], one()), (&[0, 1], -&one())]);
    assert_eq!(result, expected);
}

#[test]
fn substitute_merges_into_existing_variable() {
    // The elementary symmetric function of degree 2 in (z1, z2, z3), with
    // z2 -> w*zeta and z3 -> zeta/w, collapses to z1*zeta + zeta^2.
    let vars = zvars(3);
    let e2 = poly(
        &vars,
        &[
            (&[1, 1, 0], one()),
            (&[1, 0, 1], one()),
            (&[0, 1, 1], one()),
        ],
    );
    let step = e2.substitute("z2", &Cyclo::omega(), "zeta", false).unwrap();
    let result = step
        .substitute("z3", &Cyclo::omega_pow(-1), "zeta", false)
        .unwrap();
    let expected_vars = VarSet::new(["z1", "zeta"]).unwrap();
    let expected = poly(&expected_vars, &[(&[1, 1], one()), (&[0, 2], one())]);
    assert_eq!(result, expected);
}

#[test]
fn substitute_rejects_zero_coefficient() {
    let p = LaurentPoly::var(&zvars(1), "z1").unwrap();
    assert!(matches!(
        p.substitute("z1", &Cyclo::zero(), "t", false),
        Err(CoreError::ZeroValue(_))
    ));
    assert!(matches!(
        p.subst_const("z1", &Cyclo::zero()),
        Err(CoreError::ZeroValue(_))
    ));
}

#[test]
fn invert_var_flips_exponents() {
    let vars = zvars(1);
    let p = poly(&vars, &[(&[1], one()), (&[2], Cyclo::from_int(2))]);
    let expected = poly(&vars, &[(&[-1], one()), (&[-2], Cyclo::from_int(2))]);
    assert_eq!(p.invert_var("z1").unwrap(), expected);
}

#[test]
fn subst_const_removes_the_variable() {
    let vars = zvars(2);
    // z1*z2 + z2^2 at z1 = -1 gives z2^2 - z2.
    let p = poly(&vars, &[(&[1, 1], one()), (&[0, 2], one())]);
    let result = p.subst_const("z1", &-&Cyclo::one()).unwrap();
    let z2 = VarSet::new(["z2"]).unwrap();
    let expected = poly(&z2, &[(&[2], one()), (&[1], -&one())]);
    assert_eq!(result, expected);
}

#[test]
fn evaluate_handles_negative_exponents() {
    let vars = zvars(1);
    let p = poly(&vars, &[(&[1], one()), (&[-1], one())]);
    let pt = EvalPoint::new([("z1", Cyclo::from_int(2))]).unwrap();
    assert_eq!(p.evaluate(&pt).unwrap(), Cyclo::from_ratio(5, 2));
}

#[test]
fn evaluate_can_hit_a_root_in_the_field() {
    // z1*z2 - 1 vanishes at z1 = w, z2 = 1 - w because w*(1-w) = 1.
    let vars = zvars(2);
    let p = poly(&vars, &[(&[1, 1], one()), (&[0, 0], -&one())]);
    let pt = EvalPoint::new([
        ("z1", Cyclo::omega()),
        ("z2", Cyclo::new(Rational::from_integer(1.into()), Rational::from_integer((-1).into()))),
    ])
    .unwrap();
    assert!(p.evaluate(&pt).unwrap().is_zero());
}

#[test]
fn evaluate_requires_full_coverage_and_nonzero_values() {
    let vars = zvars(2);
    let p = LaurentPoly::var(&vars, "z1").unwrap();
    let pt = EvalPoint::new([("z1", Cyclo::from_int(3))]).unwrap();
    assert!(matches!(
        p.evaluate(&pt),
        Err(CoreError::MissingAssignment(name)) if name == "z2"
    ));
    assert!(matches!(
        EvalPoint::new([("z1", Cyclo::zero())]),
        Err(CoreError::ZeroValue(name)) if name == "z1"
    ));
}

#[test]
fn evaluate_of_zero_is_zero() {
    let vars = zvars(1);
    let pt = EvalPoint::new([("z1", Cyclo::from_int(7))]).unwrap();
    assert!(LaurentPoly::zero(&vars).evaluate(&pt).unwrap().is_zero());
}

#[test]
fn exact_divide_factors_a_difference_of_squares() {
    let vars = zvars(2);
    let num = poly(&vars, &[(&[2, 0], one()), (&[0, 2], -&one())]);
    let den = poly(&vars, &[(&[1, 0], one()), (&[0, 1], -&one())]);
    let expected = poly(&vars, &[(&[1, 0], one()), (&[0, 1], one())]);
    assert_eq!(exact_divide(&num, &den).unwrap(), expected);
}

#[test]
fn exact_divide_handles_laurent_shifts() {
    let vars = zvars(1);
    // (z1 + 1/z1) / (1/z1) = z1^2 + 1.
    let num = poly(&vars, &[(&[1], one()), (&[-1], one())]);
    let den = poly(&vars, &[(&[-1], one())]);
    let expected = poly(&vars, &[(&[2], one()), (&[0], one())]);
    assert_eq!(exact_divide(&num, &den).unwrap(), expected);
}

#[test]
fn exact_divide_reports_the_remainder() {
    let vars = zvars(2);
    // z1^2 - z2^2 + 1 is not divisible by z1 - z2.
    let num = poly(
        &vars,
        &[(&[2, 0], one()), (&[0, 2], -&one()), (&[0, 0], one())],
    );
    let den = poly(&vars, &[(&[1, 0], one()), (&[0, 1], -&one())]);
    match exact_divide(&num, &den) {
        Err(CoreError::NotDivisible { remainder, .. }) => assert!(!remainder.is_zero()),
        other => panic!("expected a divisibility failure, got {other:?}"),
    }
}

#[test]
fn exact_divide_by_zero_is_an_error() {
    let vars = zvars(1);
    let p = LaurentPoly::one(&vars);
    assert!(matches!(
        exact_divide(&p, &LaurentPoly::zero(&vars)),
        Err(CoreError::DivisionByZero)
    ));
}

#[test]
fn coeff_in_var_projects_onto_the_remaining_variables() {
    let vars = VarSet::new(["z1", "t"]).unwrap();
    // t^4 + z1*t^2
    let p = poly(&vars, &[(&[0, 4], one()), (&[1, 2], one())]);
    let z_only = VarSet::new(["z1"]).unwrap();
    assert_eq!(p.coeff_in_var("t", 4).unwrap(), LaurentPoly::one(&z_only));
    assert_eq!(
        p.coeff_in_var("t", 2).unwrap(),
        LaurentPoly::var(&z_only, "z1").unwrap()
    );
    assert!(p.coeff_in_var("t", 3).unwrap().is_zero());
    assert!(p.coeff_in_var("t", 0).unwrap().is_zero());
}

#[test]
fn compare_detects_equality_and_proportionality() {
    let vars = zvars(2);
    let p = poly(&vars, &[(&[1, 0], one()), (&[0, 1], one())]);
    assert_eq!(compare::compare(&p, &p).unwrap(), Comparison::Equal);
    let q = p.scale(&Cyclo::omega());
    assert_eq!(
        compare::compare(&p, &q).unwrap(),
        Comparison::Proportional(Cyclo::omega())
    );
}

#[test]
fn compare_produces_a_reproducible_witness() {
    let vars = zvars(2);
    let p = LaurentPoly::var(&vars, "z1").unwrap();
    let q = LaurentPoly::var(&vars, "z2").unwrap();
    let first = compare::compare(&p, &q).unwrap();
    let second = compare::compare(&p, &q).unwrap();
    assert_eq!(first, second);
    match first {
        Comparison::Distinct(pt) => {
            assert_ne!(p.evaluate(&pt).unwrap(), q.evaluate(&pt).unwrap());
        }
        other => panic!("expected distinct, got {other:?}"),
    }
}

#[test]
fn compare_distinguishes_same_support_different_ratios() {
    let vars = zvars(2);
    let p = poly(&vars, &[(&[1, 0], one()), (&[0, 1], one())]);
    let q = poly(&vars, &[(&[1, 0], one()), (&[0, 1], Cyclo::from_int(2))]);
    assert!(matches!(
        compare::compare(&p, &q).unwrap(),
        Comparison::Distinct(_)
    ));
}

#[test]
fn display_follows_the_rendering_grammar() {
    let vars = zvars(2);
    let mixed = poly(
        &vars,
        &[(&[-1, 2], Cyclo::new(Rational::from_integer(1.into()), Rational::from_integer((-1).into())))],
    );
    assert_eq!(mixed.to_string(), "(1 - 1w)*z1^-1*z2^2");

    let z1 = zvars(1);
    let balanced = poly(&z1, &[(&[1], one()), (&[-1], one())]);
    assert_eq!(balanced.to_string(), "z1 + z1^-1");

    let rational = poly(&z1, &[(&[2], Cyclo::from_ratio(-2, 3))]);
    assert_eq!(rational.to_string(), "-2/3*z1^2");

    assert_eq!(LaurentPoly::one(&z1).to_string(), "1");
    let omega_const = LaurentPoly::constant(&z1, Cyclo::omega());
    assert_eq!(omega_const.to_string(), "(1w)");

    let antisym = poly(&vars, &[(&[2, 1], -&one()), (&[1, 2], -&one())]);
    assert_eq!(antisym.to_string(), "-z1^2*z2 - z1*z2^2");
}

#[test]
fn parse_inverts_display_on_fixed_examples() {
    let vars = zvars(2);
    for text in [
        "(1 - 1w)*z1^-1*z2^2",
        "-2/3*z1^2",
        "z1 + z2^-1",
        "0",
        "1",
        "(1w)",
        "-z1^2*z2 - z1*z2^2",
        "(1/2 - 3/4w)*z1 + 5",
    ] {
        let p = LaurentPoly::parse(text, &vars).unwrap();
        assert_eq!(p.to_string(), text, "round trip of {text:?}");
    }
}

#[test]
fn parse_rejects_unknown_variables_and_garbage() {
    let vars = zvars(1);
    assert!(matches!(
        LaurentPoly::parse("z1 + q", &vars),
        Err(CoreError::UnknownVariable(name)) if name == "q"
    ));
    assert!(LaurentPoly::parse("z1^x", &vars).is_err());
    assert!(LaurentPoly::parse("", &vars).is_err());
}

#[test]
fn json_round_trip_is_bit_exact() {
    let vars = zvars(2);
    let p = poly(
        &vars,
        &[
            (&[-1, 2], Cyclo::new(Rational::new(1.into(), 2.into()), Rational::from_integer(3.into()))),
            (&[0, 0], Cyclo::from_ratio(-7, 5)),
        ],
    );
    let text = serde_json::to_string(&p).unwrap();
    let back: LaurentPoly = serde_json::from_str(&text).unwrap();
    assert_eq!(back, p);

    let value = serde_json::to_value(&p).unwrap();
    assert_eq!(value["vars"], serde_json::json!(["z1", "z2"]));
    assert_eq!(value["terms"][0]["exponents"], serde_json::json!([0, 0]));
    assert_eq!(value["terms"][0]["coeff"]["a"], serde_json::json!("-7/5"));
    assert_eq!(value["terms"][1]["exponents"], serde_json::json!([-1, 2]));
    assert_eq!(value["terms"][1]["coeff"]["b"], serde_json::json!("3"));
}

#[test]
fn embed_aligns_variables_by_name() {
    let small = zvars(2);
    let big = zvars(3);
    let p = poly(&small, &[(&[1, -1], one())]);
    let embedded = p.embed(&big).unwrap();
    let expected = poly(&big, &[(&[1, -1, 0], one())]);
    assert_eq!(embedded, expected);
    assert!(matches!(
        p.embed(&VarSet::new(["z1"]).unwrap()),
        Err(CoreError::UnknownVariable(_))
    ));
}

#[test]
fn swap_vars_exchanges_exponent_columns() {
    let vars = zvars(2);
    let p = poly(&vars, &[(&[2, 1], one())]);
    let swapped = p.swap_vars("z1", "z2").unwrap();
    assert_eq!(swapped, poly(&vars, &[(&[1, 2], one())]));
    let sym = poly(&vars, &[(&[1, 0], one()), (&[0, 1], one())]);
    assert_eq!(sym.swap_vars("z1", "z2").unwrap(), sym);
}

#[test]
fn varset_rejects_duplicates() {
    assert!(matches!(
        VarSet::new(["z1", "z1"]),
        Err(CoreError::DuplicateVariable(_))
    ));
    let vars = zvars(2);
    assert!(matches!(
        vars.with_appended("z2"),
        Err(CoreError::DuplicateVariable(_))
    ));
    assert_eq!(vars.with_appended("t").unwrap().names(), ["z1", "z2", "t"]);
}

// ---------------------------------------------------------------------------
// Property tests
// ---------------------------------------------------------------------------

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=8).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn arb_cyclo() -> impl Strategy<Value = Cyclo> {
    (arb_rational(), arb_rational()).prop_map(|(a, b)| Cyclo::new(a, b))
}

fn arb_nonzero_cyclo() -> impl Strategy<Value = Cyclo> {
    arb_cyclo().prop_filter("nonzero", |c| !c.is_zero())
}

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    let term = (prop::collection::vec(-3i32..=3, 3), arb_cyclo());
    prop::collection::vec(term, 0..6).prop_map(|terms| {
        LaurentPoly::from_terms(&zvars(3), terms).expect("aligned terms")
    })
}

fn arb_point(names: Vec<String>) -> impl Strategy<Value = EvalPoint> {
    let coords = prop::collection::vec(
        (-9i64..=9, 1i64..=4).prop_map(|(n, d)| {
            let n = if n == 0 { 1 } else { n };
            Cyclo::from_ratio(n, d)
        }),
        names.len(),
    );
    coords.prop_map(move |values| {
        EvalPoint::new(names.iter().cloned().zip(values)).expect("nonzero coordinates")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn results_stay_canonical_and_equality_is_structural(p in arb_poly(), q in arb_poly()) {
        let sum = p.checked_add(&q).unwrap();
        let product = p.checked_mul(&q).unwrap();
        prop_assert!(sum.is_canonical());
        prop_assert!(product.is_canonical());
        prop_assert_eq!(sum.checked_sub(&q).unwrap(), p.clone());
        prop_assert_eq!(p.checked_add(&q).unwrap(), q.checked_add(&p).unwrap());
        prop_assert_eq!(p.checked_mul(&q).unwrap(), q.checked_mul(&p).unwrap());
    }
}

proptest! {
    #[test]
    fn evaluate_is_a_ring_homomorphism(
        p in arb_poly(),
        q in arb_poly(),
        pt in arb_point(vec!["z1".into(), "z2".into(), "z3".into()]),
    ) {
        let sum = p.checked_add(&q).unwrap();
        let product = p.checked_mul(&q).unwrap();
        let (vp, vq) = (p.evaluate(&pt).unwrap(), q.evaluate(&pt).unwrap());
        prop_assert_eq!(sum.evaluate(&pt).unwrap(), &vp + &vq);
        prop_assert_eq!(product.evaluate(&pt).unwrap(), &vp * &vq);
    }

    #[test]
    fn substitute_commutes_with_evaluation(
        p in arb_poly(),
        c in arb_nonzero_cyclo(),
        invert in any::<bool>(),
        pt in arb_point(vec!["z1".into(), "w".into(), "z3".into()]),
    ) {
        let substituted = p.substitute("z2", &c, "w", invert).unwrap();
        let direct = substituted.evaluate(&pt).unwrap();
        let w = pt.get("w").unwrap();
        let z2 = &c * &w.pow(if invert { -1 } else { 1 }).unwrap();
        let composed_pt = EvalPoint::new([
            ("z1", pt.get("z1").unwrap().clone()),
            ("z2", z2),
            ("z3", pt.get("z3").unwrap().clone()),
        ]).unwrap();
        prop_assert_eq!(direct, p.evaluate(&composed_pt).unwrap());
    }

    #[test]
    fn exact_divide_round_trips(
        p in arb_poly(),
        d in arb_poly().prop_filter("nonzero divisor", |d| !d.is_zero()),
    ) {
        let product = p.checked_mul(&d).unwrap();
        let quotient = exact_divide(&product, &d).unwrap();
        prop_assert_eq!(quotient, p);
    }

    #[test]
    fn text_and_json_round_trip(p in arb_poly()) {
        let text = p.to_string();
        let reparsed = LaurentPoly::parse(&text, p.vars()).unwrap();
        prop_assert_eq!(&reparsed, &p);
        let json = serde_json::to_string(&p).unwrap();
        let back: LaurentPoly = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, p);
    }
}
