use std::sync::Arc;

use curvlab_expr::{zero_test, Expr, ZeroCertificate};

use crate::catalog::GodelProfile;
use crate::curvature::{CurvatureBundle, CurvatureKind, Form, Product};
use crate::operators::kulkarni_nomizu;
use crate::symmetry::Symmetry;
use crate::tensor::Tensor;
use crate::verify::{tensor_zero_test_confirmed, TensorVerdict};

use super::rank::{quasi_einstein, QuasiEinstein};
use super::relation::{solve_relation, verify_relation, RelationQuery, RelationResult};
use super::{Check, ClassifyConfig};

/// A claimed decomposition of the Ricci tensor.
#[derive(Clone, Debug, PartialEq)]
pub enum Decomposition {
    /// `S = αg + βΠ⊗Π + γ(Π⊗Φ + Φ⊗Π)`, `Π ⟂ Φ`.
    Chaki {
        alpha: Expr,
        beta: Expr,
        gamma: Expr,
        pi: Vec<Expr>,
        phi: Vec<Expr>,
    },
    /// `S = αg + βΠ⊗Π + γΦ⊗Φ`, `Π ⟂ Φ`.
    DeGhosh {
        alpha: Expr,
        beta: Expr,
        gamma: Expr,
        pi: Vec<Expr>,
        phi: Vec<Expr>,
    },
    /// `S = αg + βΠ⊗Π + γE`, `E` trace free with `E(X, V) = 0`.
    Pseudo {
        alpha: Expr,
        beta: Expr,
        gamma: Expr,
        pi: Vec<Expr>,
        e: Vec<Vec<Expr>>,
    },
}

impl Decomposition {
    pub fn name(&self) -> &'static str {
        match self {
            Decomposition::Chaki { .. } => "chaki",
            Decomposition::DeGhosh { .. } => "de_ghosh",
            Decomposition::Pseudo { .. } => "pseudo",
        }
    }
}

/// Extra data a metric may carry into classification.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ingredients {
    pub decompositions: Vec<Decomposition>,
    /// 1-forms whose square is tested for compatibility.
    pub covectors: Vec<(String, Vec<Expr>)>,
    /// Profile of a Gödel-type metric, enabling the `τ` form of the
    /// generalized Roter check.
    pub profile: Option<GodelProfile>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RicciDerivativeOutcome {
    pub codazzi: TensorVerdict,
    pub cyclic_parallel: TensorVerdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EinOutcome {
    /// Smallest level with a relation, if any up to 4.
    pub level: Option<usize>,
    /// Per tried level, `S^k = Σ x_j S^j` (with `S^0 = g`).
    pub attempts: Vec<(usize, RelationResult)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionOutcome {
    pub name: &'static str,
    pub decomposes: TensorVerdict,
    /// Side conditions: label and certificate that the quantity vanishes.
    pub side_conditions: Vec<(String, TensorVerdict)>,
}

impl DecompositionOutcome {
    pub fn holds(&self) -> bool {
        self.decomposes.zero && self.side_conditions.iter().all(|(_, v)| v.zero)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PseudoOutcome {
    pub name: &'static str,
    pub lhs: Product,
    pub rhs: Product,
    pub result: RelationResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TauOutcome {
    pub tau: Expr,
    pub certificate: ZeroCertificate,
    /// `R = L1 S∧S + L2 S∧S² + L3 S²∧S²` solved on the chart.
    pub relation: Option<RelationResult>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoterOutcome {
    pub roter: RelationResult,
    pub generalized: RelationResult,
    pub tau: Option<TauOutcome>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityOutcome {
    /// Tensor label, curvature kind, verdict.
    pub entries: Vec<(String, CurvatureKind, TensorVerdict)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckOutcome {
    RicciDerivative(RicciDerivativeOutcome),
    QuasiEinstein(QuasiEinstein),
    Ein(EinOutcome),
    Decompositions(Vec<DecompositionOutcome>),
    Semisymmetric(TensorVerdict),
    Pseudosymmetry(Vec<PseudoOutcome>),
    Roter(RoterOutcome),
    RelationFamily(RelationResult),
    Compatibility(CompatibilityOutcome),
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub results: Vec<(Check, CheckOutcome)>,
}

impl StructureReport {
    pub fn get(&self, c: Check) -> Option<&CheckOutcome> {
        self.results.iter().find(|(k, _)| *k == c).map(|(_, o)| o)
    }
}

/// Codazzi: `(∇_{X1}S)(X2, X3) = (∇_{X2}S)(X1, X3)`; cyclic parallel: the
/// cyclic sum of `(∇_{X1}S)(X2, X3)` vanishes.
pub fn ricci_derivative(bundle: &CurvatureBundle, cfg: &ClassifyConfig) -> RicciDerivativeOutcome {
    let ds = bundle.nabla_ricci();
    let n = bundle.dimension();
    let table = bundle.metric().symbols();
    // ds[i, j, k] = (∇_k S)(i, j)
    let codazzi = Tensor::from_fn_sym(n, 3, Symmetry::skew(0, 1), |x| {
        ds.get(&[x[1], x[2], x[0]]).clone() - ds.get(&[x[0], x[2], x[1]])
    });
    let cyclic = Tensor::from_fn(n, 3, |x| {
        ds.get(&[x[1], x[2], x[0]]).clone() + ds.get(&[x[2], x[0], x[1]]) + ds.get(&[x[0], x[1], x[2]])
    });
    RicciDerivativeOutcome {
        codazzi: tensor_zero_test_confirmed(&codazzi, table, &cfg.zero),
        cyclic_parallel: tensor_zero_test_confirmed(&cyclic, table, &cfg.zero),
    }
}

/// Smallest `k ∈ {2, 3, 4}` with `S^k ∈ span{S^{k−1}, …, S, g}`.
pub fn ein(bundle: &CurvatureBundle, cfg: &ClassifyConfig) -> EinOutcome {
    let table = bundle.metric().symbols();
    let mut attempts = Vec::new();
    for k in 2..=4 {
        let mut q = RelationQuery::new().fixed(Expr::one(), bundle.ricci_power(k));
        for j in (0..k).rev() {
            q = q.unknown(power_label(j), bundle.ricci_power(j));
        }
        let Ok(res) = solve_relation(&q, table, cfg) else { continue };
        let holds = res.holds;
        attempts.push((k, res));
        if holds {
            return EinOutcome {
                level: Some(k),
                attempts,
            };
        }
    }
    EinOutcome { level: None, attempts }
}

fn power_label(j: usize) -> String {
    match j {
        0 => "g".into(),
        1 => "S".into(),
        j => format!("S^{j}"),
    }
}

fn covector_outer(p: &[Expr], q: &[Expr]) -> Tensor<Expr> {
    let n = p.len();
    Tensor::from_fn(n, 2, |i| &p[i[0]] * &q[i[1]])
}

fn inner(bundle: &CurvatureBundle, p: &[Expr], q: &[Expr]) -> Expr {
    let gi = bundle.metric().inverse();
    let mut acc = Expr::zero();
    for (i, pi) in p.iter().enumerate() {
        for (j, qj) in q.iter().enumerate() {
            if !pi.is_zero() && !qj.is_zero() && !gi.at2(i, j).is_zero() {
                acc += &(gi.at2(i, j) * &(pi * qj));
            }
        }
    }
    acc
}

fn scalar_verdict(e: Expr, bundle: &CurvatureBundle, cfg: &ClassifyConfig) -> TensorVerdict {
    let t = Tensor::covector(vec![e]);
    tensor_zero_test_confirmed(&t, bundle.metric().symbols(), &cfg.zero)
}

/// Checks `S` against a claimed decomposition and its side conditions.
pub fn decomposition(bundle: &CurvatureBundle, d: &Decomposition, cfg: &ClassifyConfig) -> DecompositionOutcome {
    let n = bundle.dimension();
    let g = bundle.metric().g();
    let table = bundle.metric().symbols();
    let (alpha, beta, gamma, pi) = match d {
        Decomposition::Chaki { alpha, beta, gamma, pi, .. }
        | Decomposition::DeGhosh { alpha, beta, gamma, pi, .. }
        | Decomposition::Pseudo { alpha, beta, gamma, pi, .. } => (alpha, beta, gamma, pi),
    };
    let pp = covector_outer(pi, pi);
    let extra = match d {
        Decomposition::Chaki { phi, .. } => covector_outer(pi, phi).add(&covector_outer(phi, pi)).expect("same shape"),
        Decomposition::DeGhosh { phi, .. } => covector_outer(phi, phi),
        Decomposition::Pseudo { e, .. } => Tensor::from_rows(e.clone()),
    };
    let rhs = Tensor::linear_combination(&[(alpha.clone(), g), (beta.clone(), &pp), (gamma.clone(), &extra)])
        .expect("same shape");
    let diff = bundle.ricci().sub(&rhs).expect("same shape");
    let decomposes = tensor_zero_test_confirmed(&diff, table, &cfg.zero);
    let mut side = Vec::new();
    match d {
        Decomposition::Chaki { phi, .. } | Decomposition::DeGhosh { phi, .. } => {
            side.push(("g(Pi, Phi)".to_string(), scalar_verdict(inner(bundle, pi, phi), bundle, cfg)));
        }
        Decomposition::Pseudo { e, .. } => {
            let et = Tensor::from_rows(e.clone());
            let trace = bundle.metric().contract(&et, 0, 1).expect("order 2");
            side.push(("tr E".to_string(), scalar_verdict(trace.data()[0].clone(), bundle, cfg)));
            // E(X, V) with V^k = g^{kl} Π_l
            let gi = bundle.metric().inverse();
            let ev = Tensor::from_fn(n, 1, |i| {
                let mut acc = Expr::zero();
                for k in 0..n {
                    for l in 0..n {
                        let c = gi.at2(k, l);
                        if !c.is_zero() && !pi[l].is_zero() && !e[i[0]][k].is_zero() {
                            acc += &(&e[i[0]][k] * &(c * &pi[l]));
                        }
                    }
                }
                acc
            });
            side.push(("E(X, V)".to_string(), tensor_zero_test_confirmed(&ev, table, &cfg.zero)));
        }
    }
    DecompositionOutcome {
        name: d.name(),
        decomposes,
        side_conditions: side,
    }
}

/// `Σ_cyc(X1, X2, X3) T(ℰX1, X, X2, X3)` with `ℰ` the endomorphism of `e`,
/// as a tensor in `(X1, X, X2, X3)`.
pub fn compatibility_tensor(bundle: &CurvatureBundle, e: &Tensor<Expr>, t: &Tensor<Expr>) -> Tensor<Expr> {
    let n = bundle.dimension();
    let gi = bundle.metric().inverse();
    let eup = Tensor::from_fn(n, 2, |lx| {
        let mut acc = Expr::zero();
        for m in 0..n {
            let c = gi.at2(lx[0], m);
            if !c.is_zero() && !e.at2(m, lx[1]).is_zero() {
                acc += &(c * e.at2(m, lx[1]));
            }
        }
        acc
    });
    let term = |x1: usize, x: usize, x2: usize, x3: usize| {
        let mut acc = Expr::zero();
        for l in 0..n {
            let c = eup.at2(l, x1);
            if c.is_zero() {
                continue;
            }
            let v = t.get(&[l, x, x2, x3]);
            if !v.is_zero() {
                acc += &(c * v);
            }
        }
        acc
    };
    Tensor::from_fn(n, 4, |i| {
        let (x1, x, x2, x3) = (i[0], i[1], i[2], i[3]);
        term(x1, x, x2, x3) + term(x2, x, x3, x1) + term(x3, x, x1, x2)
    })
}

pub fn compatibility(bundle: &CurvatureBundle, ingredients: &Ingredients, cfg: &ClassifyConfig) -> CompatibilityOutcome {
    let kinds = [
        CurvatureKind::Riemann,
        CurvatureKind::Weyl,
        CurvatureKind::Concircular,
        CurvatureKind::Conharmonic,
    ];
    let table = bundle.metric().symbols();
    let mut tensors: Vec<(String, Tensor<Expr>)> = vec![("S".into(), bundle.ricci().clone())];
    for (name, w) in &ingredients.covectors {
        tensors.push((name.clone(), covector_outer(w, w)));
    }
    let mut entries = Vec::new();
    for (name, e) in &tensors {
        for k in kinds {
            let t = compatibility_tensor(bundle, e, &bundle.curvature(k));
            entries.push((name.clone(), k, tensor_zero_test_confirmed(&t, table, &cfg.zero)));
        }
    }
    CompatibilityOutcome { entries }
}

/// `lhs = L·rhs` for the standard pseudosymmetry-type conditions.
pub fn pseudosymmetry(bundle: &CurvatureBundle, cfg: &ClassifyConfig) -> Vec<PseudoOutcome> {
    use CurvatureKind::*;
    let g = Form::Metric;
    let s = Form::Ricci(1);
    let list: [(&'static str, Product, Product); 7] = [
        ("deszcz", Product::endo(Riemann, Riemann), Product::tachibana(g, Riemann)),
        ("ricci_generalized", Product::endo(Riemann, Riemann), Product::tachibana(s, Riemann)),
        ("ricci", Product::endo_form(Riemann, s), Product::tachibana_form(g, s)),
        ("conformal", Product::endo(Riemann, Weyl), Product::tachibana(g, Weyl)),
        ("weyl", Product::endo(Weyl, Weyl), Product::tachibana(g, Weyl)),
        ("conharmonic", Product::endo(Conharmonic, Conharmonic), Product::tachibana(g, Conharmonic)),
        ("projective", Product::endo(Projective, Riemann), Product::tachibana(s, Riemann)),
    ];
    let table = bundle.metric().symbols();
    list.into_iter()
        .filter_map(|(name, lhs, rhs)| {
            let q = RelationQuery::new()
                .fixed(Expr::one(), bundle.product(lhs))
                .unknown("L", bundle.product(rhs));
            let result = solve_relation(&q, table, cfg).ok()?;
            Some(PseudoOutcome { name, lhs, rhs, result })
        })
        .collect()
}

/// `R` in the span of Kulkarni–Nomizu products of `{g, S}` and of `{g, S, S²}`.
pub fn roter(bundle: &CurvatureBundle, ingredients: &Ingredients, cfg: &ClassifyConfig) -> Option<RoterOutcome> {
    let table = bundle.metric().symbols();
    let g = bundle.metric().g();
    let s = bundle.ricci();
    let s2 = bundle.ricci_power(2);
    let kn = |a: &Tensor<Expr>, b: &Tensor<Expr>| Arc::new(kulkarni_nomizu(a, b).expect("order 2"));
    let gg = kn(g, g);
    let gs = kn(g, s);
    let ss = kn(s, s);
    let gs2 = kn(g, &s2);
    let ss2 = kn(s, &s2);
    let s2s2 = kn(&s2, &s2);
    let r = Arc::new(bundle.riemann().clone());

    let plain = RelationQuery::new()
        .fixed(Expr::one(), r.clone())
        .unknown("N1", gg.clone())
        .unknown("N2", gs.clone())
        .unknown("N3", ss.clone());
    let generalized = RelationQuery::new()
        .fixed(Expr::one(), r.clone())
        .unknown("L1", gg)
        .unknown("L2", gs)
        .unknown("L3", ss.clone())
        .unknown("L4", gs2)
        .unknown("L5", ss2.clone())
        .unknown("L6", s2s2.clone());
    let roter = solve_relation(&plain, table, cfg).ok()?;
    let generalized = solve_relation(&generalized, table, cfg).ok()?;
    let tau = ingredients.profile.as_ref().map(|p| {
        let tau = p.tau();
        let certificate = zero_test(&tau, table, &cfg.zero);
        let relation = if certificate.is_zero() {
            None
        } else {
            let q = RelationQuery::new()
                .fixed(Expr::one(), r.clone())
                .unknown("L1", ss.clone())
                .unknown("L2", ss2.clone())
                .unknown("L3", s2s2.clone());
            solve_relation(&q, table, cfg).ok()
        };
        TauOutcome {
            tau,
            certificate,
            relation,
        }
    });
    Some(RoterOutcome {
        roter,
        generalized,
        tau,
    })
}

/// The homogeneous relation
/// `x1 R·R + x2 R·C + x3 C·R + x4 C·C = y1 Q(S,R) + y2 Q(g,C) + y3 Q(S,C)`.
pub fn relation_family(bundle: &CurvatureBundle, cfg: &ClassifyConfig) -> Option<RelationResult> {
    use CurvatureKind::*;
    let g = Form::Metric;
    let s = Form::Ricci(1);
    let neg = |p: Product| Arc::new(bundle.product(p).neg());
    // Right-hand tensors first so that the free coefficients fall on the left.
    let q = RelationQuery::new()
        .unknown("Q(S,R)", neg(Product::tachibana(s, Riemann)))
        .unknown("Q(g,C)", neg(Product::tachibana(g, Weyl)))
        .unknown("Q(S,C)", neg(Product::tachibana(s, Weyl)))
        .unknown("R.R", bundle.product(Product::endo(Riemann, Riemann)))
        .unknown("R.C", bundle.product(Product::endo(Riemann, Weyl)))
        .unknown("C.R", bundle.product(Product::endo(Weyl, Riemann)))
        .unknown("C.C", bundle.product(Product::endo(Weyl, Weyl)));
    solve_relation(&q, bundle.metric().symbols(), cfg).ok()
}

/// Runs the selected checks in the order of [`Check::ALL`].
pub fn classify(
    bundle: &CurvatureBundle,
    ingredients: &Ingredients,
    checks: &[Check],
    cfg: &ClassifyConfig,
) -> StructureReport {
    let mut selected: Vec<Check> = checks.to_vec();
    selected.sort();
    selected.dedup();
    let table = bundle.metric().symbols();
    let results = selected
        .into_iter()
        .filter_map(|c| {
            let outcome = match c {
                Check::RicciDerivative => CheckOutcome::RicciDerivative(ricci_derivative(bundle, cfg)),
                Check::QuasiEinstein => CheckOutcome::QuasiEinstein(quasi_einstein(bundle, cfg)),
                Check::Ein => CheckOutcome::Ein(ein(bundle, cfg)),
                Check::Decompositions => CheckOutcome::Decompositions(
                    ingredients.decompositions.iter().map(|d| decomposition(bundle, d, cfg)).collect(),
                ),
                Check::Semisymmetric => {
                    let rr = bundle.product(Product::endo(CurvatureKind::Riemann, CurvatureKind::Riemann));
                    CheckOutcome::Semisymmetric(verify_relation(&[(Expr::one(), rr)], table, cfg))
                }
                Check::Pseudosymmetry => CheckOutcome::Pseudosymmetry(pseudosymmetry(bundle, cfg)),
                Check::Roter => CheckOutcome::Roter(roter(bundle, ingredients, cfg)?),
                Check::RelationFamily => CheckOutcome::RelationFamily(relation_family(bundle, cfg)?),
                Check::Compatibility => CheckOutcome::Compatibility(compatibility(bundle, ingredients, cfg)),
            };
            Some((c, outcome))
        })
        .collect();
    StructureReport { results }
}
