//! Text rendering in the input grammar; `parse(display(e)) == e`.

use std::fmt::{self, Write};

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::expr::Expr;
use crate::poly::{Atom, Monomial, Poly};

fn write_rational(out: &mut String, c: &BigRational) {
    if c.denom().is_one() {
        write!(out, "{}", c.numer()).unwrap();
    } else {
        write!(out, "{}/{}", c.numer(), c.denom()).unwrap();
    }
}

fn write_atom(out: &mut String, a: &Atom) {
    match a {
        Atom::Sym(s) => out.push_str(s.name()),
        Atom::Call(k, arg) => {
            out.push_str(k.name());
            out.push('(');
            write_expr(out, arg);
            out.push(')');
        }
    }
}

fn write_monomial(out: &mut String, m: &Monomial) {
    for (i, (a, e)) in m.factors().iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        write_atom(out, a);
        if *e > 1 {
            write!(out, "^{e}").unwrap();
        }
    }
}

/// Term magnitude, without its sign.
fn write_term(out: &mut String, m: &Monomial, c: &BigRational) {
    let c = c.abs();
    if m.is_one() {
        write_rational(out, &c);
    } else if c.is_one() {
        write_monomial(out, m);
    } else {
        write_rational(out, &c);
        out.push('*');
        write_monomial(out, m);
    }
}

fn write_poly(out: &mut String, p: &Poly) {
    if p.is_zero() {
        out.push('0');
        return;
    }
    let mut terms: Vec<_> = p.terms().rev().collect();
    terms.sort_by_key(|(m, _)| std::cmp::Reverse(m.total_degree()));
    for (i, (m, c)) in terms.into_iter().enumerate() {
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        write_term(out, m, c);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    if e.den().is_one() {
        write_poly(out, e.num());
        return;
    }
    if e.num().num_terms() > 1 {
        out.push('(');
        write_poly(out, e.num());
        out.push(')');
    } else {
        write_poly(out, e.num());
    }
    out.push('/');
    let den = e.den();
    let single_factor = den.num_terms() == 1 && {
        let (m, c) = den.leading().unwrap();
        c.is_one() && m.factors().len() == 1
    };
    if single_factor {
        write_poly(out, den);
    } else {
        out.push('(');
        write_poly(out, den);
        out.push(')');
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self);
        f.write_str(&s)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
