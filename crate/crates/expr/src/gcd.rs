//! Multivariate polynomial gcd and exact division over the rationals.
//!
//! The gcd is computed recursively: strip monomial content, split off the
//! content with respect to a main atom, and run a primitive pseudo-remainder
//! sequence on the primitive parts.

use std::collections::BTreeSet;

use num_traits::{One, Signed};

use crate::poly::{Atom, Poly};

/// `p` divided by its rational content, with a positive leading coefficient.
pub fn primitive(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let mut c = p.rational_content();
    if p.leading().map(|(_, v)| v.is_negative()).unwrap_or(false) {
        c = -c;
    }
    if c.is_one() {
        p.clone()
    } else {
        p.scale(&c.recip())
    }
}

/// Quotient `a / b` when `b` divides `a` exactly, otherwise `None`.
pub fn div_exact(a: &Poly, b: &Poly) -> Option<Poly> {
    if b.is_zero() {
        return None;
    }
    if a.is_zero() {
        return Some(Poly::zero());
    }
    if let Some(c) = b.as_constant() {
        return Some(a.scale(&c.recip()));
    }
    if a == b {
        return Some(Poly::one());
    }
    if b.is_monomial() {
        let (m, c) = b.leading().unwrap();
        let mut out = Poly::zero();
        let inv = c.recip();
        for (am, ac) in a.terms() {
            if !m.divides(am) {
                return None;
            }
            out.add_term(am.div(m), ac * &inv);
        }
        return Some(out);
    }
    let x = b.atoms().into_iter().next_back().unwrap();
    let bu = b.to_univariate(&x);
    let mut rem = a.to_univariate(&x);
    if rem.len() < bu.len() {
        return None;
    }
    let db = bu.len() - 1;
    let lb = &bu[db];
    let mut q = vec![Poly::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        if rem[k + db].is_zero() {
            continue;
        }
        let qk = div_exact(&rem[k + db], lb)?;
        for (j, bj) in bu.iter().enumerate() {
            if !bj.is_zero() {
                rem[k + j] = &rem[k + j] - &(&qk * bj);
            }
        }
        q[k] = qk;
    }
    if rem.iter().any(|r| !r.is_zero()) {
        return None;
    }
    Some(Poly::from_univariate(&x, &q))
}

/// Greatest common divisor, normalized by [`primitive`]. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return primitive(b);
    }
    if b.is_zero() {
        return primitive(a);
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return primitive(a);
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    gcd_stripped(&a1, &b1).mul_monomial(&m)
}

fn gcd_stripped(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.num_terms() <= b.num_terms() {
        if div_exact(b, a).is_some() {
            return primitive(a);
        }
    } else if div_exact(a, b).is_some() {
        return primitive(b);
    }
    let atoms_a = a.atoms();
    let atoms_b = b.atoms();
    if let Some(x) = atoms_a.difference(&atoms_b).next() {
        return gcd(&content_wrt(a, x), b);
    }
    if let Some(x) = atoms_b.difference(&atoms_a).next() {
        return gcd(a, &content_wrt(b, x));
    }
    let x = main_atom(a, b, &atoms_a);
    let ca = content_wrt(a, &x);
    let cb = content_wrt(b, &x);
    let pa = div_exact(a, &ca).expect("content divides");
    let pb = div_exact(b, &cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = prs_gcd(&pa, &pb, &x);
    primitive(&(&c * &g))
}

fn main_atom(a: &Poly, b: &Poly, atoms: &BTreeSet<Atom>) -> Atom {
    atoms
        .iter()
        .min_by_key(|x| a.degree_in(x).max(b.degree_in(x)))
        .cloned()
        .unwrap()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content_wrt(p: &Poly, x: &Atom) -> Poly {
    let mut coeffs: Vec<Poly> = p.to_univariate(x).into_iter().filter(|c| !c.is_zero()).collect();
    coeffs.sort_by_key(|c| c.num_terms());
    let mut g = Poly::zero();
    for c in &coeffs {
        g = gcd(&g, c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn primitive_wrt(p: &Poly, x: &Atom) -> Poly {
    let c = content_wrt(p, x);
    primitive(&div_exact(p, &c).expect("content divides"))
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            if !c.is_zero() {
                *c = &*c * lb;
            }
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                let idx = j + dr - db;
                r[idx] = &r[idx] - &(&lr * bj);
            }
        }
        trim(&mut r);
    }
    r
}

fn prs_gcd(a: &Poly, b: &Poly, x: &Atom) -> Poly {
    let (mut a, mut b) = if a.degree_in(x) >= b.degree_in(x) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        let au = a.to_univariate(x);
        let bu = b.to_univariate(x);
        if bu.len() <= 1 {
            return Poly::one();
        }
        let r = prem(&au, &bu);
        if r.is_empty() {
            return primitive_wrt(&b, x);
        }
        if r.len() == 1 {
            return Poly::one();
        }
        let rp = primitive_wrt(&Poly::from_univariate(x, &r), x);
        a = b;
        b = rp;
    }
}

/// Least common multiple, normalized by [`primitive`].
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    primitive(&(&div_exact(a, &g).expect("gcd divides") * b))
}
