//! Linear relations `Σ c_i F_i = Σ x_j U_j` among tensors with unknown
//! scalar coefficients `x_j`.

use std::sync::Arc;

use curvlab_expr::{mix_seed, BigRational, Expr, GenericPoint, SymbolTable};
use num_traits::Zero;
use rayon::prelude::*;

use crate::linalg;
use crate::tensor::{flat_index, tuples, Tensor};
use crate::verify::{combination_zero_test, TensorVerdict};

use super::ClassifyConfig;

/// Fixed terms on the left, unknown-coefficient terms on the right.
#[derive(Clone, Debug, Default)]
pub struct RelationQuery {
    pub fixed: Vec<(Expr, Arc<Tensor<Expr>>)>,
    pub unknowns: Vec<(String, Arc<Tensor<Expr>>)>,
}

impl RelationQuery {
    pub fn new() -> Self {
        RelationQuery::default()
    }

    pub fn fixed(mut self, c: Expr, t: Arc<Tensor<Expr>>) -> Self {
        self.fixed.push((c, t));
        self
    }

    pub fn unknown(mut self, name: impl Into<String>, t: Arc<Tensor<Expr>>) -> Self {
        self.unknowns.push((name.into(), t));
        self
    }

    fn tensors(&self) -> impl Iterator<Item = &Arc<Tensor<Expr>>> {
        self.fixed.iter().map(|(_, t)| t).chain(self.unknowns.iter().map(|(_, t)| t))
    }
}

/// The coefficient space of a consistent relation.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationSolution {
    /// Values of the unknowns with every free coefficient set to 0.
    pub particular: Vec<Expr>,
    /// Reduced-echelon basis of the homogeneous solutions.
    pub null_space: Vec<Vec<Expr>>,
    pub residual: TensorVerdict,
}

impl RelationSolution {
    pub fn dimension(&self) -> usize {
        self.null_space.len()
    }
}

/// Evidence that no relation exists.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationWitness {
    /// Symbol values of the sample point where the linear system is
    /// inconsistent.
    pub point: Vec<(String, BigRational)>,
    /// Index tuples of the inconsistent subsystem.
    pub rows: Vec<Vec<usize>>,
    /// Residual of the best candidate, with a nonzero component.
    pub residual: Option<TensorVerdict>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelationResult {
    pub names: Vec<String>,
    pub holds: bool,
    pub solution: Option<RelationSolution>,
    pub witness: Option<RelationWitness>,
    /// Rank of the unknown block at the sample points.
    pub rank: usize,
}

impl RelationResult {
    /// Value of a named unknown in the particular solution.
    pub fn coefficient(&self, name: &str) -> Option<&Expr> {
        let i = self.names.iter().position(|n| n == name)?;
        self.solution.as_ref().map(|s| &s.particular[i])
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RelationError {
    #[error("relation terms differ in dimension or order")]
    Shape,
    #[error("no sample point avoided the singular locus")]
    Singular,
}

struct Sampled {
    point: GenericPoint,
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
}

fn sample_system(
    q: &RelationQuery,
    rows: &[Vec<usize>],
    table: &SymbolTable,
    seed: u64,
) -> Option<Sampled> {
    let exprs: Vec<&Expr> = q
        .tensors()
        .flat_map(|t| rows.iter().map(move |i| t.get(i)))
        .chain(q.fixed.iter().map(|(c, _)| c))
        .filter(|e| !e.is_zero())
        .collect();
    let point = GenericPoint::sample(table, exprs, seed);
    let coeffs: Vec<BigRational> = q
        .fixed
        .iter()
        .map(|(c, _)| point.eval(c))
        .collect::<Result<_, _>>()
        .ok()?;
    let evaluated: Vec<(Vec<BigRational>, BigRational)> = rows
        .par_iter()
        .map(|i| {
            let eval = |e: &Expr| if e.is_zero() { Ok(BigRational::zero()) } else { point.eval(e) };
            let a = q
                .unknowns
                .iter()
                .map(|(_, t)| eval(t.get(i)))
                .collect::<Result<Vec<_>, _>>()?;
            let mut b = BigRational::zero();
            for ((_, t), c) in q.fixed.iter().zip(&coeffs) {
                b += c * eval(t.get(i))?;
            }
            Ok((a, b))
        })
        .collect::<Result<_, curvlab_expr::EvalError>>()
        .ok()?;
    let (a, b) = evaluated.into_iter().unzip();
    Some(Sampled { point, a, b })
}

/// Solves `A x = rhs_k` for each right-hand side, choosing pivots that
/// are nonzero at `point`.
fn solve_symbolic(mut a: Vec<Vec<Expr>>, mut rhs: Vec<Vec<Expr>>, point: &GenericPoint) -> Option<Vec<Vec<Expr>>> {
    let r = a.len();
    let nonzero_at = |e: &Expr| !e.is_zero() && point.eval(e).map(|v| !v.is_zero()).unwrap_or(false);
    for c in 0..r {
        let p = (c..r).find(|&i| nonzero_at(&a[i][c]))?;
        a.swap(c, p);
        rhs.swap(c, p);
        let piv = a[c][c].clone();
        for j in c..r {
            a[c][j] = a[c][j].checked_div(&piv)?;
        }
        for v in rhs[c].iter_mut() {
            *v = v.checked_div(&piv)?;
        }
        for i in 0..r {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..r {
                let t = &f * &a[c][j];
                a[i][j] -= &t;
            }
            for k in 0..rhs[i].len() {
                let t = &f * &rhs[c][k];
                rhs[i][k] -= &t;
            }
        }
    }
    Some(rhs)
}

fn shared_rows(q: &RelationQuery) -> Result<Vec<Vec<usize>>, RelationError> {
    let first = q.tensors().next().ok_or(RelationError::Shape)?;
    let (dim, order) = (first.dim(), first.order());
    if q.tensors().any(|t| t.dim() != dim || t.order() != order) {
        return Err(RelationError::Shape);
    }
    let same_symmetry = q.tensors().all(|t| t.symmetry() == first.symmetry());
    let candidates: Vec<Vec<usize>> = if same_symmetry {
        first
            .symmetry()
            .orbits(dim, order)
            .into_iter()
            .filter(|o| !o.vanishes)
            .map(|o| o.representative().to_vec())
            .collect()
    } else {
        tuples(dim, order).collect()
    };
    Ok(candidates
        .into_iter()
        .filter(|i| q.tensors().any(|t| !t.data()[flat_index(dim, i)].is_zero()))
        .collect())
}

/// Finds every coefficient vector `x` with `Σ c_i F_i = Σ x_j U_j`.
///
/// The system is sampled at generic points in exact arithmetic, solved
/// symbolically on the pivot rows, and the residual is zero-tested.
pub fn solve_relation(
    q: &RelationQuery,
    table: &SymbolTable,
    cfg: &ClassifyConfig,
) -> Result<RelationResult, RelationError> {
    let rows = shared_rows(q)?;
    let names: Vec<String> = q.unknowns.iter().map(|(n, _)| n.clone()).collect();
    let m = q.unknowns.len();

    let mut samples = Vec::new();
    let mut stream = 0u64;
    while samples.len() < cfg.points.max(1) {
        if stream as usize > cfg.points.max(1) + cfg.zero.max_retries {
            return Err(RelationError::Singular);
        }
        stream += 1;
        if let Some(s) = sample_system(q, &rows, table, mix_seed(cfg.zero.seed, 0xa11 + stream)) {
            samples.push(s);
        }
    }

    // Inconsistency at any exact sample point rules out a relation.
    let mut best: Option<(usize, linalg::Echelon<BigRational>)> = None;
    let mut inconsistent: Option<(usize, Vec<usize>)> = None;
    for (k, s) in samples.iter().enumerate() {
        let aug: Vec<Vec<BigRational>> = s
            .a
            .iter()
            .zip(&s.b)
            .map(|(r, b)| r.iter().cloned().chain(std::iter::once(b.clone())).collect())
            .collect();
        let ech = linalg::rref(&aug);
        if ech.pivot_cols.last() == Some(&m) && inconsistent.is_none() {
            inconsistent = Some((k, ech.pivot_rows.clone()));
        }
        let rank_a = ech.pivot_cols.iter().filter(|&&c| c < m).count();
        if best.as_ref().is_none_or(|(_, e)| e.pivot_cols.iter().filter(|&&c| c < m).count() < rank_a) {
            best = Some((k, ech));
        }
    }
    let (k, ech) = best.expect("at least one sample");
    let pivots: Vec<(usize, usize)> = ech
        .pivot_cols
        .iter()
        .zip(&ech.pivot_rows)
        .filter(|(&c, _)| c < m)
        .map(|(&c, &r)| (r, c))
        .collect();
    let rank = pivots.len();
    let point = &samples[k].point;

    let sym_a: Vec<Vec<Expr>> = pivots
        .iter()
        .map(|&(r, _)| pivots.iter().map(|&(_, c)| q.unknowns[c].1.get(&rows[r]).clone()).collect())
        .collect();
    let free: Vec<usize> = (0..m).filter(|c| !pivots.iter().any(|&(_, pc)| pc == *c)).collect();
    let sym_rhs: Vec<Vec<Expr>> = pivots
        .iter()
        .map(|&(r, _)| {
            let idx = &rows[r];
            let mut b = Expr::zero();
            for (c, t) in &q.fixed {
                b += &(c * t.get(idx));
            }
            let mut v = vec![b];
            for &f in &free {
                v.push(-q.unknowns[f].1.get(idx).clone());
            }
            v
        })
        .collect();
    let solved = solve_symbolic(sym_a, sym_rhs, point).ok_or(RelationError::Singular)?;

    let column = |j: usize| -> Vec<Expr> {
        let mut x = vec![Expr::zero(); m];
        for (p, &(_, c)) in pivots.iter().enumerate() {
            x[c] = solved[p][j].clone();
        }
        x
    };
    let particular = column(0);
    let residual = {
        let mut terms: Vec<(Expr, &Tensor<Expr>)> = q.fixed.iter().map(|(c, t)| (c.clone(), &**t)).collect();
        for (x, (_, t)) in particular.iter().zip(&q.unknowns) {
            if !x.is_zero() {
                terms.push((-x.clone(), &**t));
            }
        }
        if terms.is_empty() {
            TensorVerdict {
                zero: true,
                proved: true,
                counterexample: None,
                components_tested: 0,
            }
        } else {
            combination_zero_test(&terms, table, &cfg.zero)
        }
    };
    let null_space: Vec<Vec<Expr>> = free
        .iter()
        .enumerate()
        .map(|(j, &f)| {
            let mut v = column(j + 1);
            v[f] = Expr::one();
            v
        })
        .filter(|v| {
            let terms: Vec<(Expr, &Tensor<Expr>)> =
                v.iter().zip(&q.unknowns).map(|(x, (_, t))| (x.clone(), &**t)).collect();
            combination_zero_test(&terms, table, &cfg.zero).zero
        })
        .collect();

    if let Some((k, prow)) = inconsistent {
        let point = samples[k]
            .point
            .values()
            .iter()
            .map(|(s, v)| (s.name().to_string(), v.clone()))
            .collect();
        return Ok(RelationResult {
            names,
            holds: false,
            solution: None,
            witness: Some(RelationWitness {
                point,
                rows: prow.iter().map(|&r| rows[r].clone()).collect(),
                residual: Some(residual),
            }),
            rank,
        });
    }
    let holds = residual.zero;
    Ok(RelationResult {
        names,
        holds,
        witness: (!holds).then(|| RelationWitness {
            point: Vec::new(),
            rows: Vec::new(),
            residual: Some(residual.clone()),
        }),
        solution: holds.then_some(RelationSolution {
            particular,
            null_space,
            residual,
        }),
        rank,
    })
}

/// Zero-tests `Σ c_i T_i` with a confirming second pass.
pub fn verify_relation(
    terms: &[(Expr, Arc<Tensor<Expr>>)],
    table: &SymbolTable,
    cfg: &ClassifyConfig,
) -> TensorVerdict {
    let refs: Vec<(Expr, &Tensor<Expr>)> = terms.iter().map(|(c, t)| (c.clone(), &**t)).collect();
    combination_zero_test(&refs, table, &cfg.zero)
}
