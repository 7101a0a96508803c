//! Symbolic differentiation.

use std::collections::BTreeMap;

use crate::expr::Expr;
use crate::poly::{Atom, Kernel, Poly};
use crate::symbol::Symbol;

fn atom_derivative(atom: &Atom, v: &Symbol) -> Expr {
    match atom {
        Atom::Sym(s) => {
            if s == v {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Atom::Call(k, arg) => {
            if !arg.depends_on(v) {
                return Expr::zero();
            }
            let inner = differentiate(arg, v);
            let outer = match k {
                Kernel::Exp => Expr::atom(atom.clone()),
                Kernel::Sinh => arg.cosh(),
                Kernel::Cosh => arg.sinh(),
                Kernel::Sin => arg.cos(),
                Kernel::Cos => -arg.sin(),
                Kernel::Sqrt => Expr::one() / (Expr::atom(atom.clone()) * Expr::integer(2)),
            };
            outer * inner
        }
    }
}

fn poly_derivative(p: &Poly, v: &Symbol, cache: &mut BTreeMap<Atom, Expr>) -> Expr {
    let mut out = Expr::zero();
    for atom in p.atoms() {
        let d = cache
            .entry(atom.clone())
            .or_insert_with(|| atom_derivative(&atom, v))
            .clone();
        if d.is_zero() {
            continue;
        }
        out += &(Expr::from_poly(p.partial(&atom)) * d);
    }
    out
}

/// Partial derivative with respect to `v`, in canonical form.
pub fn differentiate(e: &Expr, v: &Symbol) -> Expr {
    if !e.depends_on(v) {
        return Expr::zero();
    }
    let mut cache = BTreeMap::new();
    let dn = poly_derivative(e.num(), v, &mut cache);
    if e.den().is_one() {
        return dn;
    }
    let dd = poly_derivative(e.den(), v, &mut cache);
    let n = Expr::from_poly(e.num().clone());
    let d = Expr::from_poly(e.den().clone());
    (dn * &d - n * dd) / d.pow(2)
}

impl Expr {
    pub fn diff(&self, v: &Symbol) -> Expr {
        differentiate(self, v)
    }
}
