//! Evaluation: exact rationals, arbitrary-precision floats and symbolic
//! substitution, all driven by one polynomial walker.

use std::cell::RefCell;
use std::collections::BTreeMap;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::EvalError;
use crate::expr::Expr;
use crate::poly::{Atom, Kernel, Poly};
use crate::symbol::Symbol;

/// Symbol assignment used by the evaluators.
pub type Assignment = BTreeMap<Symbol, BigRational>;

/// A target domain for evaluating expressions.
pub(crate) trait Evaluator {
    type V: Clone;
    fn constant(&mut self, c: &BigRational) -> Result<Self::V, EvalError>;
    fn symbol(&mut self, s: &Symbol) -> Result<Self::V, EvalError>;
    fn kernel(&mut self, k: Kernel, arg: &Expr, atom: &Atom) -> Result<Self::V, EvalError>;
    fn add(&mut self, a: &Self::V, b: &Self::V) -> Self::V;
    fn mul(&mut self, a: &Self::V, b: &Self::V) -> Self::V;
    fn div(&mut self, a: &Self::V, b: &Self::V) -> Result<Self::V, EvalError>;
    fn zero(&mut self) -> Self::V;
    fn one(&mut self) -> Self::V;
}

pub(crate) fn powu<E: Evaluator>(ev: &mut E, base: &E::V, e: u32) -> E::V {
    let mut result = ev.one();
    let mut b = base.clone();
    let mut n = e;
    while n > 0 {
        if n & 1 == 1 {
            result = ev.mul(&result, &b);
        }
        n >>= 1;
        if n > 0 {
            b = ev.mul(&b, &b);
        }
    }
    result
}

pub(crate) fn atom_value<E: Evaluator>(
    ev: &mut E,
    atom: &Atom,
    cache: &mut BTreeMap<Atom, E::V>,
) -> Result<E::V, EvalError> {
    if let Some(v) = cache.get(atom) {
        return Ok(v.clone());
    }
    let v = match atom {
        Atom::Sym(s) => ev.symbol(s)?,
        Atom::Call(k, arg) => ev.kernel(*k, arg, atom)?,
    };
    cache.insert(atom.clone(), v.clone());
    Ok(v)
}

/// Value of each term of `p`, in storage order.
pub(crate) fn eval_terms<E: Evaluator>(
    ev: &mut E,
    p: &Poly,
    cache: &mut BTreeMap<Atom, E::V>,
) -> Result<Vec<E::V>, EvalError> {
    let mut out = Vec::with_capacity(p.num_terms());
    for (m, c) in p.terms() {
        let mut t = ev.constant(c)?;
        for (a, e) in m.factors() {
            let v = atom_value(ev, a, cache)?;
            let pv = powu(ev, &v, *e);
            t = ev.mul(&t, &pv);
        }
        out.push(t);
    }
    Ok(out)
}

pub(crate) fn eval_poly<E: Evaluator>(
    ev: &mut E,
    p: &Poly,
    cache: &mut BTreeMap<Atom, E::V>,
) -> Result<E::V, EvalError> {
    let terms = eval_terms(ev, p, cache)?;
    let mut acc = ev.zero();
    for t in &terms {
        acc = ev.add(&acc, t);
    }
    Ok(acc)
}

pub(crate) fn eval_with<E: Evaluator>(ev: &mut E, e: &Expr) -> Result<E::V, EvalError> {
    let mut cache = BTreeMap::new();
    let n = eval_poly(ev, e.num(), &mut cache)?;
    if e.den().is_one() {
        return Ok(n);
    }
    let d = eval_poly(ev, e.den(), &mut cache)?;
    ev.div(&n, &d)
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &n * &n == *c.numer() && &d * &d == *c.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

struct ExactEval<'a> {
    assignment: &'a Assignment,
}

impl Evaluator for ExactEval<'_> {
    type V = BigRational;
    fn constant(&mut self, c: &BigRational) -> Result<BigRational, EvalError> {
        Ok(c.clone())
    }
    fn symbol(&mut self, s: &Symbol) -> Result<BigRational, EvalError> {
        self.assignment
            .get(s)
            .cloned()
            .ok_or_else(|| EvalError::Unassigned(s.name().to_string()))
    }
    fn kernel(&mut self, k: Kernel, arg: &Expr, _atom: &Atom) -> Result<BigRational, EvalError> {
        let x = eval_with(self, arg)?;
        match k {
            Kernel::Sqrt => {
                if x.is_negative() {
                    return Err(EvalError::NegativeSqrt);
                }
                rational_sqrt(&x).ok_or_else(|| EvalError::NotRational(k.name().to_string()))
            }
            _ if x.is_zero() => Ok(match k {
                Kernel::Sinh | Kernel::Sin => BigRational::zero(),
                _ => BigRational::one(),
            }),
            _ => Err(EvalError::NotRational(k.name().to_string())),
        }
    }
    fn add(&mut self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&mut self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn div(&mut self, a: &BigRational, b: &BigRational) -> Result<BigRational, EvalError> {
        if b.is_zero() {
            Err(EvalError::DivisionByZero)
        } else {
            Ok(a / b)
        }
    }
    fn zero(&mut self) -> BigRational {
        BigRational::zero()
    }
    fn one(&mut self) -> BigRational {
        BigRational::one()
    }
}

/// Exact evaluation. Fails with [`EvalError::NotRational`] when a kernel
/// call does not have a rational value.
pub fn eval_exact(e: &Expr, assignment: &Assignment) -> Result<BigRational, EvalError> {
    eval_with(&mut ExactEval { assignment }, e)
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision in bits for `digits` decimal digits, with guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    (digits as usize * 3322).div_ceil(1000) + 64
}

/// Converts an integer to a float at precision `p`.
pub fn bigint_to_float(n: &BigInt, p: usize) -> BigFloat {
    if let Ok(small) = i64::try_from(n) {
        return BigFloat::from_i64(small, p);
    }
    CONSTS.with(|cc| BigFloat::parse(&n.to_string(), Radix::Dec, p, RM, &mut cc.borrow_mut()))
}

pub fn rational_to_float(c: &BigRational, p: usize) -> BigFloat {
    let n = bigint_to_float(c.numer(), p);
    if c.denom().is_one() {
        return n;
    }
    n.div(&bigint_to_float(c.denom(), p), p, RM)
}

/// Decimal rendering of a float with `digits` significant digits.
pub fn float_to_string(x: &BigFloat) -> String {
    CONSTS.with(|cc| {
        x.format(Radix::Dec, RM, &mut cc.borrow_mut())
            .unwrap_or_else(|_| "NaN".to_string())
    })
}

/// Parses a decimal float literal such as `1e-30`.
pub fn parse_float(s: &str, p: usize) -> BigFloat {
    CONSTS.with(|cc| BigFloat::parse(s, Radix::Dec, p, RM, &mut cc.borrow_mut()))
}

pub(crate) struct FloatEval<'a> {
    pub assignment: &'a Assignment,
    pub p: usize,
}

fn check(x: BigFloat) -> Result<BigFloat, EvalError> {
    if x.is_nan() || x.is_inf() {
        Err(EvalError::NonFinite)
    } else {
        Ok(x)
    }
}

impl Evaluator for FloatEval<'_> {
    type V = BigFloat;
    fn constant(&mut self, c: &BigRational) -> Result<BigFloat, EvalError> {
        Ok(rational_to_float(c, self.p))
    }
    fn symbol(&mut self, s: &Symbol) -> Result<BigFloat, EvalError> {
        let v = self
            .assignment
            .get(s)
            .ok_or_else(|| EvalError::Unassigned(s.name().to_string()))?;
        Ok(rational_to_float(v, self.p))
    }
    fn kernel(&mut self, k: Kernel, arg: &Expr, _atom: &Atom) -> Result<BigFloat, EvalError> {
        let x = eval_with(self, arg)?;
        let p = self.p;
        let y = CONSTS.with(|cc| {
            let cc = &mut cc.borrow_mut();
            match k {
                Kernel::Exp => Ok(x.exp(p, RM, cc)),
                Kernel::Sinh => Ok(x.sinh(p, RM, cc)),
                Kernel::Cosh => Ok(x.cosh(p, RM, cc)),
                Kernel::Sin => Ok(x.sin(p, RM, cc)),
                Kernel::Cos => Ok(x.cos(p, RM, cc)),
                Kernel::Sqrt => {
                    if x.is_negative() {
                        Err(EvalError::NegativeSqrt)
                    } else {
                        Ok(x.sqrt(p, RM))
                    }
                }
            }
        })?;
        check(y)
    }
    fn add(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }
    fn mul(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }
    fn div(&mut self, a: &BigFloat, b: &BigFloat) -> Result<BigFloat, EvalError> {
        if b.is_zero() {
            return Err(EvalError::DivisionByZero);
        }
        check(a.div(b, self.p, RM))
    }
    fn zero(&mut self) -> BigFloat {
        BigFloat::from_i64(0, self.p)
    }
    fn one(&mut self) -> BigFloat {
        BigFloat::from_i64(1, self.p)
    }
}

/// Evaluation to `digits` significant decimal digits. Kernel-free
/// expressions are computed exactly and rounded once.
pub fn eval_numeric(e: &Expr, assignment: &Assignment, digits: u32) -> Result<BigFloat, EvalError> {
    let p = bits_for_digits(digits);
    if e.is_kernel_free() {
        let exact = eval_exact(e, assignment)?;
        return Ok(rational_to_float(&exact, p));
    }
    eval_with(&mut FloatEval { assignment, p }, e)
}

struct SubstEval<'a> {
    map: &'a BTreeMap<Symbol, Expr>,
}

impl Evaluator for SubstEval<'_> {
    type V = Expr;
    fn constant(&mut self, c: &BigRational) -> Result<Expr, EvalError> {
        Ok(Expr::rational(c.clone()))
    }
    fn symbol(&mut self, s: &Symbol) -> Result<Expr, EvalError> {
        Ok(self.map.get(s).cloned().unwrap_or_else(|| Expr::symbol(s)))
    }
    fn kernel(&mut self, k: Kernel, arg: &Expr, _atom: &Atom) -> Result<Expr, EvalError> {
        Ok(Expr::call(k, eval_with(self, arg)?))
    }
    fn add(&mut self, a: &Expr, b: &Expr) -> Expr {
        a + b
    }
    fn mul(&mut self, a: &Expr, b: &Expr) -> Expr {
        a * b
    }
    fn div(&mut self, a: &Expr, b: &Expr) -> Result<Expr, EvalError> {
        a.checked_div(b).ok_or(EvalError::DivisionByZero)
    }
    fn zero(&mut self) -> Expr {
        Expr::zero()
    }
    fn one(&mut self) -> Expr {
        Expr::one()
    }
}

impl Expr {
    /// Replaces symbols by expressions. Fails only when a denominator
    /// becomes identically zero.
    pub fn substitute(&self, map: &BTreeMap<Symbol, Expr>) -> Result<Expr, EvalError> {
        if map.is_empty() {
            return Ok(self.clone());
        }
        eval_with(&mut SubstEval { map }, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn asg(pairs: &[(&str, i64)]) -> Assignment {
        pairs
            .iter()
            .map(|(n, v)| (Symbol::new(n), BigRational::from_integer((*v).into())))
            .collect()
    }

    #[test]
    fn exact_values() {
        let a = Expr::symbol(&Symbol::new("a"));
        let r = Expr::symbol(&Symbol::new("r"));
        let e = &a.pow(2) * &Expr::integer(2);
        assert_eq!(eval_exact(&e, &asg(&[("a", 3)])).unwrap(), BigRational::from_integer(18.into()));
        let e2 = -(&a.pow(2) * &r.pow(2));
        assert_eq!(
            eval_exact(&e2, &asg(&[("a", 1), ("r", 2)])).unwrap(),
            BigRational::from_integer((-4).into())
        );
    }

    #[test]
    fn kernel_values() {
        let m = Expr::symbol(&Symbol::new("m"));
        let x = Expr::symbol(&Symbol::new("x"));
        let e = (&m * &x).exp();
        let v = eval_numeric(&e, &asg(&[("m", 1), ("x", 0)]), 50).unwrap();
        assert_eq!(v, BigFloat::from_i64(1, bits_for_digits(50)));
        let s = x.sinh();
        let c = x.cosh();
        let id = &(&c * &c) - &(&s * &s);
        let v = eval_numeric(&id, &asg(&[("x", 3)]), 50).unwrap();
        let err = v.sub(&BigFloat::from_i64(1, 300), 300, RM).abs();
        assert!(err.cmp(&parse_float("1e-45", 300)).unwrap() < 0);
    }

    #[test]
    fn substitution_specializes() {
        let a = Symbol::new("a");
        let e = Expr::symbol(&a).pow(2) + Expr::one();
        let mut map = BTreeMap::new();
        map.insert(a, Expr::ratio(3, 2));
        assert_eq!(e.substitute(&map).unwrap(), Expr::ratio(13, 4));
    }
}
