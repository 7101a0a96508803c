//! The canonical expression type.
//!
//! An [`Expr`] is a reduced quotient of two polynomials whose variables are
//! symbols and kernel calls. Canonical form:
//!
//! * numerator and denominator are coprime;
//! * the denominator's greatest term has coefficient 1;
//! * zero is `0/1`;
//! * powers of `sqrt(u)` with polynomial `u` are reduced below 2 and such
//!   square roots never appear in a denominator.
//!
//! Structural equality therefore coincides with equality as rational
//! functions of the atoms.

use std::collections::BTreeSet;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::gcd::{div_exact, gcd};
use crate::poly::{Atom, Kernel, Monomial, Poly};
use crate::symbol::Symbol;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct RatFunc {
    num: Poly,
    den: Poly,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr(Arc<RatFunc>);

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn sqrt_radicand(atom: &Atom) -> Option<&Poly> {
    match atom {
        Atom::Call(Kernel::Sqrt, arg) if arg.den().is_one() => Some(arg.num()),
        _ => None,
    }
}

fn has_sqrt(p: &Poly) -> bool {
    p.terms()
        .any(|(m, _)| m.factors().iter().any(|(a, _)| sqrt_radicand(a).is_some()))
}

/// Rewrites `sqrt(u)^k` as `sqrt(u)^(k mod 2) * u^(k div 2)`.
fn reduce_sqrt(p: Poly) -> Poly {
    let mut current = p;
    for _ in 0..8 {
        let needs = current.terms().any(|(m, _)| {
            m.factors()
                .iter()
                .any(|(a, e)| *e >= 2 && sqrt_radicand(a).is_some())
        });
        if !needs {
            return current;
        }
        let mut out = Poly::zero();
        for (m, c) in current.terms() {
            let mut mono = Monomial::one();
            let mut extra = Poly::one();
            for (a, e) in m.factors() {
                match sqrt_radicand(a) {
                    Some(u) if *e >= 2 => {
                        extra = &extra * &u.pow(e / 2);
                        mono = mono.with_factor(a, e % 2);
                    }
                    _ => mono = mono.with_factor(a, *e),
                }
            }
            let term = Poly::term(mono, c.clone());
            out = &out + &(&term * &extra);
        }
        current = out;
    }
    current
}

fn first_sqrt_atom(p: &Poly) -> Option<Atom> {
    p.atoms().into_iter().find(|a| sqrt_radicand(a).is_some())
}

fn normalize(num: Poly, den: Poly) -> Expr {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return Expr::zero();
    }
    let mut num = reduce_sqrt(num);
    let mut den = reduce_sqrt(den);
    for _ in 0..8 {
        let Some(s) = first_sqrt_atom(&den) else { break };
        let u = sqrt_radicand(&s).unwrap().clone();
        let parts = den.to_univariate(&s);
        let a = parts[0].clone();
        let b = parts.get(1).cloned().unwrap_or_default();
        let conj = &a - &(&b * &Poly::from_atom(s.clone()));
        num = reduce_sqrt(&num * &conj);
        den = reduce_sqrt(&(&a * &a) - &(&(&b * &b) * &u));
        if den.is_zero() {
            panic!("zero denominator after rationalization");
        }
    }
    if num.is_zero() {
        return Expr::zero();
    }
    if !den.is_constant() {
        let g = gcd(&num, &den);
        if !g.is_constant() {
            num = div_exact(&num, &g).expect("gcd divides numerator");
            den = div_exact(&den, &g).expect("gcd divides denominator");
        }
    }
    monic(num, den)
}

fn monic(num: Poly, den: Poly) -> Expr {
    let lc = den.leading().expect("nonzero denominator").1.clone();
    if lc.is_one() {
        Expr::raw(num, den)
    } else {
        let inv = lc.recip();
        Expr::raw(num.scale(&inv), den.scale(&inv))
    }
}

fn extract_square(n: &BigInt) -> (BigInt, BigInt) {
    // n = k^2 * m with m squarefree over small primes
    let mut k = BigInt::one();
    let mut m = n.clone();
    let root = m.sqrt();
    if &root * &root == m {
        return (root, BigInt::one());
    }
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(2000u32);
    while p <= limit {
        let sq = &p * &p;
        while (&m % &sq).is_zero() {
            m /= &sq;
            k *= &p;
        }
        p += 1u32;
    }
    (k, m)
}

impl Expr {
    fn raw(num: Poly, den: Poly) -> Expr {
        Expr(Arc::new(RatFunc { num, den }))
    }

    pub fn zero() -> Expr {
        Expr::raw(Poly::zero(), Poly::one())
    }

    pub fn one() -> Expr {
        Expr::raw(Poly::one(), Poly::one())
    }

    pub fn rational(c: BigRational) -> Expr {
        Expr::raw(Poly::constant(c), Poly::one())
    }

    pub fn integer(n: i64) -> Expr {
        Expr::rational(q(n))
    }

    /// `n / d`; panics when `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::rational(BigRational::new(n.into(), d.into()))
    }

    pub fn symbol(s: &Symbol) -> Expr {
        Expr::raw(Poly::from_atom(Atom::Sym(s.clone())), Poly::one())
    }

    pub fn atom(a: Atom) -> Expr {
        match a {
            Atom::Sym(s) => Expr::symbol(&s),
            Atom::Call(k, arg) => Expr::call(k, arg),
        }
    }

    /// Polynomial as an expression.
    pub fn from_poly(p: Poly) -> Expr {
        if has_sqrt(&p) {
            normalize(p, Poly::one())
        } else {
            Expr::raw(p, Poly::one())
        }
    }

    /// `num / den`, or `None` when `den` is the zero polynomial.
    pub fn from_parts(num: Poly, den: Poly) -> Option<Expr> {
        if den.is_zero() {
            None
        } else {
            Some(normalize(num, den))
        }
    }

    pub fn num(&self) -> &Poly {
        &self.0.num
    }

    pub fn den(&self) -> &Poly {
        &self.0.den
    }

    pub fn is_zero(&self) -> bool {
        self.0.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.den.is_one() && self.0.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.den.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.0.den.is_one() {
            self.0.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Atoms of the numerator and denominator (not descending into kernels).
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = self.0.num.atoms();
        out.extend(self.0.den.atoms());
        out
    }

    /// Every symbol occurring anywhere, including inside kernel arguments.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        for a in self.atoms() {
            match a {
                Atom::Sym(s) => {
                    out.insert(s);
                }
                Atom::Call(_, arg) => arg.collect_symbols(out),
            }
        }
    }

    /// Kernel calls at any depth.
    pub fn kernel_atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_kernels(&mut out);
        out
    }

    fn collect_kernels(&self, out: &mut BTreeSet<Atom>) {
        for a in self.atoms() {
            if let Atom::Call(_, arg) = &a {
                arg.collect_kernels(out);
                out.insert(a);
            }
        }
    }

    pub fn is_kernel_free(&self) -> bool {
        self.0.num.is_kernel_free() && self.0.den.is_kernel_free()
    }

    pub fn depends_on(&self, s: &Symbol) -> bool {
        self.atoms().iter().any(|a| match a {
            Atom::Sym(t) => t == s,
            Atom::Call(_, arg) => arg.depends_on(s),
        })
    }

    pub fn scale(&self, c: &BigRational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr::raw(self.0.num.scale(c), self.0.den.clone())
    }

    pub fn recip(&self) -> Option<Expr> {
        if self.is_zero() {
            return None;
        }
        let (n, d) = (&self.0.num, &self.0.den);
        if has_sqrt(n) {
            return Some(normalize(d.clone(), n.clone()));
        }
        Some(monic(d.clone(), n.clone()))
    }

    pub fn checked_div(&self, other: &Expr) -> Option<Expr> {
        Some(self * &other.recip()?)
    }

    /// Integer power; `None` for a negative power of zero.
    pub fn checked_pow(&self, n: i32) -> Option<Expr> {
        if n < 0 {
            return self.recip()?.checked_pow(-n);
        }
        if n == 0 {
            return Some(Expr::one());
        }
        if n == 1 {
            return Some(self.clone());
        }
        let e = n as u32;
        let num = self.0.num.pow(e);
        let den = self.0.den.pow(e);
        if has_sqrt(&num) || has_sqrt(&den) {
            Some(normalize(num, den))
        } else {
            Some(Expr::raw(num, den))
        }
    }

    /// Integer power; panics on a negative power of zero.
    pub fn pow(&self, n: i32) -> Expr {
        self.checked_pow(n).expect("negative power of zero")
    }

    /// Rational content `c` and primitive part `w` with `self = c * w` and
    /// the greatest numerator term of `w` positive.
    pub fn split_content(&self) -> (BigRational, Expr) {
        if self.is_zero() {
            return (BigRational::zero(), Expr::one());
        }
        if let Some(c) = self.as_rational() {
            return (c, Expr::one());
        }
        let mut c = self.0.num.rational_content() / self.0.den.rational_content();
        if self.0.num.leading().unwrap().1.is_negative() {
            c = -c;
        }
        (c.clone(), self.scale(&c.recip()))
    }

    /// Kernel application with light normalization: zero arguments are
    /// evaluated, odd/even symmetries pull signs out, `exp` moves the
    /// rational content of its argument into an integer power and constant
    /// square roots have square factors extracted.
    pub fn call(k: Kernel, arg: Expr) -> Expr {
        if arg.is_zero() {
            return match k {
                Kernel::Exp | Kernel::Cosh | Kernel::Cos => Expr::one(),
                Kernel::Sinh | Kernel::Sin | Kernel::Sqrt => Expr::zero(),
            };
        }
        let negative = arg.0.num.leading().unwrap().1.is_negative();
        match k {
            Kernel::Exp => {
                let (c, w) = arg.split_content();
                let p = c.numer().to_i32().expect("exponent content too large");
                let inner = w.scale(&BigRational::new(BigInt::one(), c.denom().clone()));
                Expr::raw(Poly::from_atom(Atom::Call(Kernel::Exp, inner)), Poly::one()).pow(p)
            }
            Kernel::Sinh | Kernel::Sin => {
                if negative {
                    -Expr::raw(Poly::from_atom(Atom::Call(k, -&arg)), Poly::one())
                } else {
                    Expr::raw(Poly::from_atom(Atom::Call(k, arg)), Poly::one())
                }
            }
            Kernel::Cosh | Kernel::Cos => {
                let arg = if negative { -&arg } else { arg };
                Expr::raw(Poly::from_atom(Atom::Call(k, arg)), Poly::one())
            }
            Kernel::Sqrt => {
                if let Some(c) = arg.as_rational() {
                    if c.is_positive() {
                        let prod = c.numer() * c.denom();
                        let (kf, m) = extract_square(&prod);
                        let coeff = BigRational::new(kf, c.denom().clone());
                        if m.is_one() {
                            return Expr::rational(coeff);
                        }
                        let atom = Atom::Call(Kernel::Sqrt, Expr::rational(BigRational::from_integer(m)));
                        return Expr::raw(Poly::term(Monomial::atom(atom, 1), coeff), Poly::one());
                    }
                }
                Expr::raw(Poly::from_atom(Atom::Call(Kernel::Sqrt, arg)), Poly::one())
            }
        }
    }

    pub fn exp(&self) -> Expr {
        Expr::call(Kernel::Exp, self.clone())
    }

    pub fn sinh(&self) -> Expr {
        Expr::call(Kernel::Sinh, self.clone())
    }

    pub fn cosh(&self) -> Expr {
        Expr::call(Kernel::Cosh, self.clone())
    }

    pub fn sin(&self) -> Expr {
        Expr::call(Kernel::Sin, self.clone())
    }

    pub fn cos(&self) -> Expr {
        Expr::call(Kernel::Cos, self.clone())
    }

    pub fn sqrt(&self) -> Expr {
        Expr::call(Kernel::Sqrt, self.clone())
    }

    /// Number of polynomial terms, a cheap size measure.
    pub fn size(&self) -> usize {
        self.0.num.num_terms() + self.0.den.num_terms()
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::integer(n)
    }
}

impl From<BigRational> for Expr {
    fn from(c: BigRational) -> Self {
        Expr::rational(c)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Self {
        Expr::symbol(s)
    }
}

fn add_impl(a: &Expr, b: &Expr, negate_b: bool) -> Expr {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b } else { b.clone() };
    }
    let bn = if negate_b { -b.num() } else { b.num().clone() };
    if a.den() == b.den() {
        let num = a.num() + &bn;
        if a.den().is_one() {
            return Expr::raw(num, Poly::one());
        }
        return normalize(num, a.den().clone());
    }
    if b.den().is_one() {
        let num = a.num() + &(&bn * a.den());
        return normalize(num, a.den().clone());
    }
    if a.den().is_one() {
        let num = &(a.num() * b.den()) + &bn;
        return normalize(num, b.den().clone());
    }
    let g = gcd(a.den(), b.den());
    if g.is_constant() {
        let num = &(a.num() * b.den()) + &(&bn * a.den());
        normalize(num, a.den() * b.den())
    } else {
        let ea = div_exact(a.den(), &g).expect("gcd divides");
        let eb = div_exact(b.den(), &g).expect("gcd divides");
        let num = &(a.num() * &eb) + &(&bn * &ea);
        normalize(num, &(&g * &ea) * &eb)
    }
}

fn mul_impl(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    if let Some(c) = a.as_rational() {
        return b.scale(&c);
    }
    if let Some(c) = b.as_rational() {
        return a.scale(&c);
    }
    let sqrt_involved = has_sqrt(a.num()) && has_sqrt(b.num());
    if a.den().is_one() && b.den().is_one() {
        let num = a.num() * b.num();
        return if sqrt_involved {
            normalize(num, Poly::one())
        } else {
            Expr::raw(num, Poly::one())
        };
    }
    if sqrt_involved {
        return normalize(a.num() * b.num(), a.den() * b.den());
    }
    let (n1, d2) = cancel(a.num(), b.den());
    let (n2, d1) = cancel(b.num(), a.den());
    monic(&n1 * &n2, &d1 * &d2)
}

fn cancel(n: &Poly, d: &Poly) -> (Poly, Poly) {
    if d.is_constant() || n.is_constant() {
        return (n.clone(), d.clone());
    }
    let g = gcd(n, d);
    if g.is_constant() {
        (n.clone(), d.clone())
    } else {
        (
            div_exact(n, &g).expect("gcd divides"),
            div_exact(d, &g).expect("gcd divides"),
        )
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a Expr> for &'a Expr {
            type Output = Expr;
            fn $method(self, rhs: &'a Expr) -> Expr {
                $body(self, rhs)
            }
        }
        impl $trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $body(&self, &rhs)
            }
        }
        impl<'a> $trait<&'a Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &'a Expr) -> Expr {
                $body(&self, rhs)
            }
        }
        impl<'a> $trait<Expr> for &'a Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Expr, b: &Expr| add_impl(a, b, false));
forward_binop!(Sub, sub, |a: &Expr, b: &Expr| add_impl(a, b, true));
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, |a: &Expr, b: &Expr| a
    .checked_div(b)
    .expect("division by zero expression"));

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::raw(-self.num(), self.den().clone())
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        *self = add_impl(self, rhs, false);
    }
}

impl SubAssign<&Expr> for Expr {
    fn sub_assign(&mut self, rhs: &Expr) {
        *self = add_impl(self, rhs, true);
    }
}

impl MulAssign<&Expr> for Expr {
    fn mul_assign(&mut self, rhs: &Expr) {
        *self = mul_impl(self, rhs);
    }
}

impl Zero for Expr {
    fn zero() -> Self {
        Expr::zero()
    }
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
}

impl One for Expr {
    fn one() -> Self {
        Expr::one()
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: &str) -> Expr {
        Expr::symbol(&Symbol::new(n))
    }

    #[test]
    fn rational_function_identity_cancels() {
        let a = s("a");
        let r = s("r");
        let lhs = &r.pow(2) - &(&a.pow(2) * &r.pow(4));
        let rhs = &r.pow(2) * &(&Expr::one() - &(&a.pow(2) * &r.pow(2)));
        assert!((&lhs - &rhs).is_zero());
        let x = (&r.pow(2) - &Expr::one()) / (&r - &Expr::one());
        assert_eq!(x, &r + &Expr::one());
    }

    #[test]
    fn denominators_are_monic() {
        let r = s("r");
        let e = Expr::one() / (r.scale(&BigRational::new(3.into(), 2.into())));
        assert_eq!(e.den(), r.num());
        assert_eq!(e.num().as_constant().unwrap(), BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn exp_content_becomes_power() {
        let m = s("m");
        let x = s("x");
        let e2 = (&(&m * &x) * &Expr::integer(2)).exp();
        assert_eq!(e2, (&m * &x).exp().pow(2));
        let neg = (-(&m * &x)).exp();
        assert_eq!(&neg * &(&m * &x).exp(), Expr::one());
    }

    #[test]
    fn sqrt_constants_and_rationalization() {
        let two = Expr::integer(2).sqrt();
        assert_eq!(&two * &two, Expr::integer(2));
        assert_eq!(Expr::integer(8).sqrt(), &two * &Expr::integer(2));
        assert_eq!(Expr::integer(9).sqrt(), Expr::integer(3));
        let inv = Expr::one() / two.clone();
        assert_eq!(inv, two.scale(&BigRational::new(1.into(), 2.into())));
        let a = s("a");
        let e = Expr::one() / (&a + &two);
        let back = Expr::one() / e;
        assert_eq!(back, &a + &two);
    }

    #[test]
    fn parity_of_kernels() {
        let x = s("x");
        assert_eq!((-&x).sinh(), -x.sinh());
        assert_eq!((-&x).cosh(), x.cosh());
        assert_eq!(Expr::zero().cos(), Expr::one());
    }
}
