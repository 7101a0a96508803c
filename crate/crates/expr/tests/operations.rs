use curvlab_expr::{
    eval_exact, eval_numeric, parse_expr, Assignment, Assumption, BigRational, ParseErrorKind,
    SymbolTable, ZeroCertificate, ZeroTestConfig,
};

fn table() -> SymbolTable {
    SymbolTable::new(&["t", "phi", "r", "z"], &["a", "m", "x"])
        .unwrap()
        .with_assumption("a", Assumption::Nonzero)
        .unwrap()
}

fn p(s: &str) -> curvlab_expr::Expr {
    parse_expr(s, &table()).unwrap()
}

fn asg(pairs: &[(&str, i64)]) -> Assignment {
    let t = table();
    pairs
        .iter()
        .map(|(n, v)| (t.lookup(n).unwrap(), BigRational::from_integer((*v).into())))
        .collect()
}

fn zt(s: &str) -> ZeroCertificate {
    curvlab_expr::zero_test(&p(s), &table(), &ZeroTestConfig::default())
}

#[test]
fn parse_metric_entry() {
    let e = p("r^2 - a^2*r^4");
    assert!(e.is_polynomial());
    assert_eq!(e.num().num_terms(), 2);
    assert_eq!(e, p("r^2*(1 - a^2*r^2)"));
}

#[test]
fn parse_commutes() {
    assert_eq!(p("2*a*r^2"), p("a*r^2*2"));
}

#[test]
fn parse_kernel_power() {
    let e = p("sinh(m*r/2)^2");
    assert_eq!(e.to_string(), "sinh(1/2*m*r)^2");
    assert_eq!(e.kernel_atoms().len(), 1);
}

#[test]
fn parse_errors() {
    let t = table();
    let err = parse_expr("a + q", &t).unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::UnknownIdentifier(_)));
    assert_eq!(err.offset, 4);
    let err = parse_expr("r^1.5", &t).unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::NonIntegerExponent(_)));
    let err = parse_expr("(a + r", &t).unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::UnexpectedEnd { .. }));
    let err = parse_expr("a^2^3", &t).unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::ChainedPower));
}

#[test]
fn derivatives() {
    let r = table().lookup("r").unwrap();
    assert_eq!(p("a*r^2").diff(&r), p("2*a*r"));
    assert_eq!(p("a^2*r^4 - r^2").diff(&r), p("4*a^2*r^3 - 2*r"));
    assert_eq!(p("sinh(m*r/2)^2").diff(&r), p("m*sinh(m*r/2)*cosh(m*r/2)"));
    assert_eq!(p("sqrt(r)").diff(&r), p("1/(2*sqrt(r))"));
    assert_eq!(p("cos(a*r)").diff(&r), p("-a*sin(a*r)"));
}

#[test]
fn zero_tests() {
    assert_eq!(zt("(r^2 - a^2*r^4) - r^2*(1 - a^2*r^2)"), ZeroCertificate::ProvedZero);
    assert!(matches!(zt("2*a^2"), ZeroCertificate::ProvedNonzero { .. }));
    assert_eq!(zt("sinh(x)*cosh(x) - sinh(x)*cosh(x)"), ZeroCertificate::ProvedZero);
}

#[test]
fn evaluation() {
    let r = |n: i64| BigRational::from_integer(n.into());
    assert_eq!(eval_exact(&p("2*a^2"), &asg(&[("a", 3)])).unwrap(), r(18));
    assert_eq!(eval_exact(&p("-a^2*r^2"), &asg(&[("a", 1), ("r", 2)])).unwrap(), r(-4));
    let one = eval_numeric(&p("exp(m*x)"), &asg(&[("m", 1), ("x", 0)]), 50).unwrap();
    assert_eq!(one, curvlab_expr::BigFloat::from_i64(1, one.precision().unwrap()));
    assert!(eval_exact(&p("1/r"), &asg(&[("r", 0)])).is_err());
    assert!(eval_numeric(&p("sqrt(r)"), &asg(&[("r", -1)]), 30).is_err());
}
