use std::collections::BTreeMap;

use astro_float::{BigFloat, RoundingMode};
use curvlab_expr::{
    bits_for_digits, eval_numeric, parse_expr, rational_to_float, zero_test, Assignment,
    Assumption, BigRational, Expr, Kernel, SymbolTable, ZeroCertificate, ZeroTestConfig,
};
use num_bigint::BigInt;
use proptest::prelude::*;

const RM: RoundingMode = RoundingMode::ToEven;

fn table() -> SymbolTable {
    SymbolTable::new(&["r", "x"], &["a", "m"])
        .unwrap()
        .with_assumption("a", Assumption::Positive)
        .unwrap()
}

fn leaf() -> impl Strategy<Value = Expr> {
    let t = table();
    prop_oneof![
        (-5i64..=5).prop_map(Expr::integer),
        (1i64..=5, 1i64..=4).prop_map(|(n, d)| Expr::ratio(n, d)),
        prop::sample::select(vec!["r", "x", "a", "m"])
            .prop_map(move |s| Expr::symbol(&t.lookup(s).unwrap())),
    ]
}

/// Random expressions built from ring operations, nonzero division,
/// small powers and kernel calls.
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| a.checked_div(&b).unwrap_or_else(|| a.clone())),
            (inner.clone(), 0i32..=3).prop_map(|(a, n)| a.pow(n)),
            (
                prop::sample::select(vec![Kernel::Exp, Kernel::Sinh, Kernel::Cosh, Kernel::Sin, Kernel::Cos]),
                leaf(),
                leaf()
            )
                .prop_map(|(k, u, v)| Expr::call(k, u * v)),
        ]
    })
}

fn point(vals: &[(&str, BigRational)]) -> Assignment {
    let t = table();
    vals.iter()
        .map(|(n, v)| (t.lookup(n).unwrap(), v.clone()))
        .collect()
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_idempotent(e in expr()) {
        let again = Expr::from_parts(e.num().clone(), e.den().clone()).unwrap();
        prop_assert_eq!(&again, &e);
        let t = table();
        let reparsed = parse_expr(&e.to_string(), &t).unwrap();
        prop_assert_eq!(reparsed, e);
    }

    #[test]
    fn derivative_is_linear(e1 in expr(), e2 in expr()) {
        let v = table().lookup("r").unwrap();
        let lhs = (&e1 + &e2).diff(&v);
        let rhs = e1.diff(&v) + e2.diff(&v);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_matches_central_difference(
        e in expr(),
        rn in 1i64..=40, rd in 1i64..=9,
        xn in -30i64..=30, an in 1i64..=20, mn in -20i64..=20,
    ) {
        let v = table().lookup("r").unwrap();
        let d = e.diff(&v);
        let base = [("x", ratio(xn, 7)), ("a", ratio(an, 5)), ("m", ratio(mn, 11))];
        let r0 = ratio(rn, rd);
        let h = BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 20));
        let at = |r: BigRational| {
            let mut pts: Vec<(&str, BigRational)> = base.to_vec();
            pts.push(("r", r));
            point(&pts)
        };
        let (Ok(dv), Ok(fp), Ok(fm)) = (
            eval_numeric(&d, &at(r0.clone()), 50),
            eval_numeric(&e, &at(&r0 + &h), 50),
            eval_numeric(&e, &at(&r0 - &h), 50),
        ) else {
            return Ok(());
        };
        let p = bits_for_digits(50);
        let two_h = rational_to_float(&(&h + &h), p);
        let fd = fp.sub(&fm, p, RM).div(&two_h, p, RM);
        let err = dv.sub(&fd, p, RM).abs();
        let one = BigFloat::from_i64(1, p);
        let scale = if dv.abs().cmp(&one).unwrap_or(0) > 0 { dv.abs() } else { one };
        let tol = rational_to_float(&BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 15)), p)
            .mul(&scale, p, RM);
        prop_assert!(err.cmp(&tol).unwrap_or(1) <= 0, "e = {e}, d = {d}");
    }

    #[test]
    fn nonzero_certificates_reevaluate_above_tolerance(e in expr()) {
        let t = table();
        let cfg = ZeroTestConfig::default();
        if let ZeroCertificate::ProvedNonzero { witness, .. } = zero_test(&e, &t, &cfg) {
            let v = eval_numeric(&e, &witness, cfg.digits).unwrap();
            let p = bits_for_digits(cfg.digits);
            let tol = rational_to_float(
                &BigRational::new(1.into(), num_traits::pow(BigInt::from(10), cfg.tolerance_exponent as usize)),
                p,
            );
            prop_assert!(v.abs().cmp(&tol).unwrap_or(0) > 0);
        } else {
            prop_assert!(e.is_zero() || !e.is_kernel_free());
        }
    }

    #[test]
    fn difference_with_itself_is_proved_zero(e in expr()) {
        let t = table();
        let z = &e - &e;
        prop_assert_eq!(zero_test(&z, &t, &ZeroTestConfig::default()), ZeroCertificate::ProvedZero);
    }
}

#[test]
fn substitution_into_identity_stays_zero() {
    let t = table();
    let e = parse_expr("cosh(m*r)^2 - sinh(m*r)^2 - 1", &t).unwrap();
    let mut map = BTreeMap::new();
    map.insert(t.lookup("m").unwrap(), parse_expr("2*a", &t).unwrap());
    let s = e.substitute(&map).unwrap();
    assert!(zero_test(&s, &t, &ZeroTestConfig::default()).is_zero());
}
