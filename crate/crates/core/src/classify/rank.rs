//! `rank(S − αg)` and the quasi-Einstein index.

use curvlab_expr::{
    mix_seed, poly_div_exact, BigRational, poly_gcd, zero_test, Atom, Expr, GenericPoint, Poly, Symbol, SymbolTable,
    ZeroCertificate,
};

use crate::curvature::CurvatureBundle;
use crate::linalg;
use num_traits::One;

use super::ClassifyConfig;

/// Certificate for `rank M = r`: an `r`-minor shown nonzero and every
/// `(r+1)`-minor zero-tested.
#[derive(Clone, Debug, PartialEq)]
pub struct RankCertificate {
    pub rank: usize,
    pub minor_rows: Vec<usize>,
    pub minor_cols: Vec<usize>,
    pub minor: Expr,
    pub minor_certificate: ZeroCertificate,
    /// `(r+1)`-minors examined, across all adjustments.
    pub higher_minors: usize,
}

impl RankCertificate {
    pub fn certified(&self) -> bool {
        !self.minor_certificate.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiEinstein {
    /// `k` with `rank(S − αg) = k`.
    pub k: usize,
    /// `None` when no exact α was found.
    pub alpha: Option<Expr>,
    /// Exact eigenvalue candidates tried, in order.
    pub candidates: Vec<Expr>,
    /// True when α could not be determined exactly and `k = n − 1`
    /// follows from the existence of some eigenvalue.
    pub numeric_only: bool,
    pub certificate: Option<RankCertificate>,
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Rank of a symbolic matrix. A rank read off at a generic point is the
/// starting guess; minors are then zero-tested until some `r`-minor is
/// nonzero and every `(r+1)`-minor vanishes.
pub fn certified_rank(m: &[Vec<Expr>], table: &SymbolTable, cfg: &ClassifyConfig) -> Option<RankCertificate> {
    let n = m.len();
    let point = (0..=cfg.zero.max_retries as u64).find_map(|s| {
        let p = GenericPoint::sample(table, m.iter().flatten(), mix_seed(cfg.zero.seed, 0x4a4e + s));
        let vals: Result<Vec<Vec<_>>, _> = m
            .iter()
            .map(|r| r.iter().map(|e| p.eval(e)).collect::<Result<Vec<_>, _>>())
            .collect();
        vals.ok()
    })?;
    let ech = linalg::rref(&point);
    let mut r = ech.rank();
    let mut rows = ech.pivot_rows.clone();
    rows.sort_unstable();
    let mut cols = ech.pivot_cols.clone();
    let nonzero_minor = |rs: &[usize], cs: &[usize]| {
        let d = linalg::det(&linalg::minor(m, rs, cs));
        let c = zero_test(&d, table, &cfg.zero);
        (d, c)
    };
    let mut higher = 0;
    loop {
        if r > 0 {
            let (d, c) = nonzero_minor(&rows, &cols);
            let found = if c.is_zero() {
                combinations(n, r).into_iter().find_map(|rs| {
                    combinations(n, r).into_iter().find_map(|cs| {
                        let (d, c) = nonzero_minor(&rs, &cs);
                        (!c.is_zero()).then(|| (rs.clone(), cs, d, c))
                    })
                })
            } else {
                Some((rows.clone(), cols.clone(), d, c))
            };
            let Some((rs, cs, _, _)) = found else {
                // Every r-minor vanishes, hence so does every larger one.
                r -= 1;
                rows = (0..r).collect();
                cols = (0..r).collect();
                continue;
            };
            rows = rs;
            cols = cs;
        }
        let mut failing = None;
        if r < n {
            'outer: for rs in combinations(n, r + 1) {
                for cs in combinations(n, r + 1) {
                    higher += 1;
                    let (d, c) = nonzero_minor(&rs, &cs);
                    if !c.is_zero() {
                        failing = Some((rs.clone(), cs, d));
                        break 'outer;
                    }
                }
            }
        }
        if let Some((rs, cs, _)) = failing {
            r += 1;
            rows = rs;
            cols = cs;
            continue;
        }
        let (minor, minor_certificate) = if r == 0 {
            (
                Expr::one(),
                ZeroCertificate::ProvedNonzero {
                    witness: Default::default(),
                    value: "1".into(),
                },
            )
        } else {
            nonzero_minor(&rows, &cols)
        };
        return Some(RankCertificate {
            rank: r,
            minor_rows: rows,
            minor_cols: cols,
            minor,
            minor_certificate,
            higher_minors: higher,
        });
    }
}

fn shifted(s: &[Vec<Expr>], g: &[Vec<Expr>], alpha: &Expr) -> Vec<Vec<Expr>> {
    s.iter()
        .zip(g)
        .map(|(sr, gr)| sr.iter().zip(gr).map(|(x, y)| x - &(alpha * y)).collect())
        .collect()
}

/// Linear roots of the squarefree part of `gcd(p, ∂p)`: eigenvalues of
/// multiplicity at least two.
fn repeated_linear_roots(p: &Poly, lambda: &Atom) -> Vec<Expr> {
    let d = poly_gcd(p, &p.partial(lambda));
    if d.degree_in(lambda) == 0 {
        return Vec::new();
    }
    let dd = poly_gcd(&d, &d.partial(lambda));
    let sqf = poly_div_exact(&d, &dd).unwrap_or(d);
    let mut roots = Vec::new();
    if sqf.degree_in(lambda) == 1 {
        let c = sqf.to_univariate(lambda);
        if let Some(root) = Expr::from_parts(c[0].scale(&-BigRational::one()), c[1].clone()) {
            roots.push(root);
        }
    }
    roots
}

/// Smallest `k` with `rank(S − αg) = k` over exact eigenvalue candidates.
pub fn quasi_einstein(bundle: &CurvatureBundle, cfg: &ClassifyConfig) -> QuasiEinstein {
    let table = bundle.metric().symbols();
    let n = bundle.dimension();
    let s = bundle.ricci().rows();
    let g = bundle.metric().g().rows();
    let lambda_sym = Symbol::new("λ");
    let lambda = Expr::symbol(&lambda_sym);
    let charpoly = linalg::det(&shifted(&s, &g, &lambda));
    let atom = Atom::Sym(lambda_sym);

    let mut candidates: Vec<Expr> = repeated_linear_roots(charpoly.num(), &atom);
    let det_s = linalg::det(&s);
    let mut heuristics = vec![Expr::zero()];
    let op = bundle.ricci_operator();
    heuristics.extend((0..n).map(|a| op.at2(a, a).clone()));
    for h in heuristics {
        if candidates.contains(&h) {
            continue;
        }
        let is_eigen = if h.is_zero() {
            zero_test(&det_s, table, &cfg.zero).is_zero()
        } else {
            zero_test(&linalg::det(&shifted(&s, &g, &h)), table, &cfg.zero).is_zero()
        };
        if is_eigen {
            candidates.push(h);
        }
    }

    let mut best: Option<(Expr, RankCertificate)> = None;
    for c in &candidates {
        let Some(cert) = certified_rank(&shifted(&s, &g, c), table, cfg) else { continue };
        if best.as_ref().is_none_or(|(_, b)| cert.rank < b.rank) {
            best = Some((c.clone(), cert));
        }
    }
    match best {
        Some((alpha, cert)) => QuasiEinstein {
            k: cert.rank,
            alpha: Some(alpha),
            candidates,
            numeric_only: false,
            certificate: Some(cert),
        },
        None => QuasiEinstein {
            k: n - 1,
            alpha: None,
            candidates,
            numeric_only: true,
            certificate: None,
        },
    }
}

/// `rank(S − αg)` for a given α.
pub fn rank_at(bundle: &CurvatureBundle, alpha: &Expr, cfg: &ClassifyConfig) -> Option<RankCertificate> {
    let s = bundle.ricci().rows();
    let g = bundle.metric().g().rows();
    certified_rank(&shifted(&s, &g, alpha), bundle.metric().symbols(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(4, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }
}
