//! Gödel-type profiles `h(r)`, `f(r)` and their closed-form curvature.

use std::sync::Arc;

use curvlab_expr::{zero_test, Assumption, Expr, Symbol, SymbolTable, ZeroCertificate};

use crate::classify::{quasi_einstein, rank_at, ricci_derivative, verify_relation, ClassifyConfig};
use crate::curvature::{CurvatureBundle, CurvatureKind, Form, Product};
use crate::metric::{build_metric, MetricError, MetricSpec};
use crate::operators::kulkarni_nomizu;
use crate::verify::TensorVerdict;

/// `ds² = (dt + h dφ)² − f² dφ² − dr² − dz²`.
#[derive(Clone, Debug, PartialEq)]
pub struct GodelProfile {
    pub h: Expr,
    pub f: Expr,
    pub r: Symbol,
}

impl GodelProfile {
    pub fn new(h: Expr, f: Expr, r: Symbol) -> Self {
        GodelProfile { h, f, r }
    }

    /// `k`-th derivative of `h` with respect to `r`.
    pub fn dh(&self, k: usize) -> Expr {
        (0..k).fold(self.h.clone(), |e, _| e.diff(&self.r))
    }

    pub fn df(&self, k: usize) -> Expr {
        (0..k).fold(self.f.clone(), |e, _| e.diff(&self.r))
    }

    /// Chart `(t, φ, r, z)` with every other symbol of `h`, `f` a nonzero
    /// parameter.
    pub fn table(&self) -> SymbolTable {
        let coords = ["t", "phi", "r", "z"];
        let mut params: Vec<String> = Vec::new();
        for s in self.h.symbols().into_iter().chain(self.f.symbols()) {
            if s != self.r && !params.iter().any(|p| p == s.name()) {
                params.push(s.name().to_string());
            }
        }
        let mut t = SymbolTable::new(&coords.map(String::from), &params).expect("distinct names");
        for p in &params {
            t.assume(p, Assumption::Nonzero).expect("registered");
        }
        t
    }

    /// The metric on `table`, which must have `r` among its symbols.
    pub fn metric(&self, table: SymbolTable) -> Result<MetricSpec, MetricError> {
        let (h, f) = (&self.h, &self.f);
        let z = Expr::zero;
        let one = Expr::one;
        let m1 = || Expr::integer(-1);
        let rows = vec![
            vec![one(), h.clone(), z(), z()],
            vec![h.clone(), h * h - f * f, z(), z()],
            vec![z(), z(), m1(), z()],
            vec![z(), z(), z(), m1()],
        ];
        MetricSpec::new(table, rows)
    }

    /// `τ = (h′² − 2ff″)(f²h″² − 2ff′h′h″ − h′⁴ + 2ff″h′² + f′²h′²)`.
    pub fn tau(&self) -> Expr {
        let (f, f1, f2) = (self.f.clone(), self.df(1), self.df(2));
        let (h1, h2) = (self.dh(1), self.dh(2));
        let a = h1.pow(2) - Expr::integer(2) * &f * &f2;
        let b = f.pow(2) * h2.pow(2) - Expr::integer(2) * &f * &f1 * &h1 * &h2 - h1.pow(4)
            + Expr::integer(2) * &f * &f2 * h1.pow(2)
            + f1.pow(2) * h1.pow(2);
        a * b
    }

    /// `L₁, L₂, L₃` of `R = L₁ S∧S + L₂ S∧S² + L₃ S²∧S²`; `None` when `τ`
    /// vanishes identically.
    pub fn roter_coefficients(&self) -> Option<[Expr; 3]> {
        let tau = self.tau();
        if tau.is_zero() {
            return None;
        }
        let (f, f1, f2) = (self.f.clone(), self.df(1), self.df(2));
        let (h1, h2) = (self.dh(1), self.dh(2));
        let c = |n: i64| Expr::integer(n);
        let l1 = f.pow(2)
            * (c(2) * f.pow(2) * h2.pow(2) - c(4) * &f * &f1 * &h1 * &h2 - c(3) * h1.pow(4)
                + c(8) * &f * &f2 * h1.pow(2)
                + c(2) * f1.pow(2) * h1.pow(2)
                - c(8) * f.pow(2) * f2.pow(2));
        let l2 = c(2) * f.pow(4) * (h1.pow(2) - c(4) * &f * &f2);
        let l3 = -(c(4) * f.pow(6));
        Some([l1, l2, l3].map(|x| x.checked_div(&tau).expect("tau nonzero")))
    }

    /// `L = (ff″ − h′²)/(6f²)` of `C·C = L Q(g,C)`.
    pub fn weyl_coefficient(&self) -> Expr {
        let num = &self.f * &self.df(2) - self.dh(1).pow(2);
        num.checked_div(&(Expr::integer(6) * self.f.pow(2))).expect("f nonzero")
    }

    /// `f/h′` when it is constant in `r`.
    pub fn proportionality(&self, table: &SymbolTable, cfg: &ClassifyConfig) -> Option<Expr> {
        let c = self.f.checked_div(&self.dh(1))?;
        zero_test(&c.diff(&self.r), table, &cfg.zero).is_zero().then_some(c)
    }
}

/// A component given in closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    /// `R`, `S` or `C`.
    pub tensor: &'static str,
    /// 0-based index tuple.
    pub index: Vec<usize>,
    pub value: Expr,
}

/// The nonzero components of `R`, `S` and `C` of a Gödel-type metric,
/// written directly in terms of `h`, `f` and their derivatives.
pub fn godel_type_closed_forms(p: &GodelProfile) -> Vec<ClosedForm> {
    let (h, f) = (p.h.clone(), p.f.clone());
    let (f1, f2) = (p.df(1), p.df(2));
    let (h1, h2) = (p.dh(1), p.dh(2));
    let c = |n: i64| Expr::integer(n);
    let over = |num: Expr, den: Expr| num.checked_div(&den).expect("nonzero denominator");
    let f_sq = f.pow(2);
    let h1_sq = h1.pow(2);
    let idx = |s: &str| s.bytes().map(|b| (b - b'1') as usize).collect::<Vec<_>>();
    let mut out = Vec::new();
    let mut push = |tensor: &'static str, i: &str, value: Expr| {
        out.push(ClosedForm {
            tensor,
            index: idx(i),
            value,
        })
    };

    push("R", "1212", over(-h1_sq.clone(), c(4)));
    push("R", "1313", over(-h1_sq.clone(), c(4) * &f_sq));
    push(
        "R",
        "1323",
        over(
            -(c(2) * &f_sq * &h2 - c(2) * &f * &f1 * &h1 + &h * &h1_sq),
            c(4) * &f_sq,
        ),
    );
    push(
        "R",
        "2323",
        over(
            -(c(4) * &f_sq * &h * &h2) - c(3) * &f_sq * &h1_sq + c(4) * &f * &h * &f1 * &h1 + c(4) * f.pow(3) * &f2
                - h.pow(2) * &h1_sq,
            c(4) * &f_sq,
        ),
    );

    push("S", "11", over(-h1_sq.clone(), c(2) * &f_sq));
    push(
        "S",
        "12",
        over(-(&f_sq * &h2 - &f * &f1 * &h1 + &h * &h1_sq), c(2) * &f_sq),
    );
    push(
        "S",
        "22",
        over(
            -(c(2) * &f_sq * &h * &h2) - &f_sq * &h1_sq + c(2) * &f * &h * &f1 * &h1 + c(2) * f.pow(3) * &f2
                - h.pow(2) * &h1_sq,
            c(2) * &f_sq,
        ),
    );
    push("S", "33", over(c(2) * &f * &f2 - &h1_sq, c(2) * &f_sq));

    push("C", "1212", over(-(&h1_sq - &f * &f2), c(6)));
    let c1313 = over(&f * &f2 - &h1_sq, c(6) * &f_sq);
    push("C", "1313", c1313.clone());
    push("C", "1414", c(-2) * &c1313);
    push("C", "3434", -c1313);
    push(
        "C",
        "1323",
        over(
            -(c(3) * &f_sq * &h2 - c(2) * &f * &h * &f2 - c(3) * &f * &f1 * &h1 + c(2) * &h * &h1_sq),
            c(12) * &f_sq,
        ),
    );
    push(
        "C",
        "1424",
        over(
            c(3) * &f_sq * &h2 - c(4) * &f * &h * &f2 - c(3) * &f * &f1 * &h1 + c(4) * &h * &h1_sq,
            c(12) * &f_sq,
        ),
    );
    push(
        "C",
        "2323",
        over(
            -(c(3) * &f_sq * &h * &h2) + &f * h.pow(2) * &f2 - c(2) * &f_sq * &h1_sq
                + c(3) * &f * &h * &f1 * &h1
                + c(2) * f.pow(3) * &f2
                - h.pow(2) * &h1_sq,
            c(6) * &f_sq,
        ),
    );
    push(
        "C",
        "2424",
        over(
            -(-(c(3) * &f_sq * &h * &h2) + c(2) * &f * h.pow(2) * &f2 - &f_sq * &h1_sq
                + c(3) * &f * &h * &f1 * &h1
                + f.pow(3) * &f2
                - c(2) * h.pow(2) * &h1_sq),
            c(6) * &f_sq,
        ),
    );
    out
}

/// One conditional statement about Gödel-type metrics.
#[derive(Clone, Debug, PartialEq)]
pub struct Clause {
    pub name: &'static str,
    /// Human-readable hypothesis and conclusion.
    pub statement: &'static str,
    pub hypothesis: bool,
    /// Evaluated only when the hypothesis holds.
    pub conclusion: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub clauses: Vec<Clause>,
}

impl ConditionReport {
    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }

    /// No clause with a holding hypothesis has a failing conclusion.
    pub fn consistent(&self) -> bool {
        self.clauses.iter().all(|c| c.conclusion != Some(false))
    }
}

fn verdict_text(v: &TensorVerdict) -> String {
    match &v.counterexample {
        None if v.proved => "vanishes identically".into(),
        None => "vanishes at every sample".into(),
        Some(w) => format!("nonzero at component {:?}: {}", w.index, w.value),
    }
}

/// Evaluates each clause's hypothesis and, where it holds, checks the
/// conclusion on the metric itself.
pub fn godel_type_conditions(
    profile: &GodelProfile,
    cfg: &ClassifyConfig,
) -> Result<ConditionReport, MetricError> {
    let table = profile.table();
    let spec = profile.metric(table.clone())?;
    let bundle = CurvatureBundle::new(build_metric(spec, &cfg.zero)?);
    let zero = |e: &Expr| zero_test(e, &table, &cfg.zero);
    let (f, f1, f2) = (profile.f.clone(), profile.df(1), profile.df(2));
    let (h1, h2, h3, h4) = (profile.dh(1), profile.dh(2), profile.dh(3), profile.dh(4));
    let mut clauses = Vec::new();
    use CurvatureKind::*;

    let qe = quasi_einstein(&bundle, cfg);
    clauses.push(Clause {
        name: "i.3_quasi_einstein",
        statement: "always 3-quasi-Einstein",
        hypothesis: true,
        conclusion: Some(qe.k <= 3),
        detail: format!("k = {}", qe.k),
    });

    let hyp = zero(&(&f * &h2 - &f1 * &h1)).is_zero();
    clauses.push(Clause {
        name: "i.2_quasi_einstein",
        statement: "f h'' = f' h' implies 2-quasi-Einstein",
        hypothesis: hyp,
        conclusion: hyp.then_some(qe.k <= 2),
        detail: format!(
            "k = {}, alpha = {}",
            qe.k,
            qe.alpha.as_ref().map_or("none".into(), |a| a.to_string())
        ),
    });

    let hyp = zero(&(h1.pow(2) - Expr::integer(2) * &f * &f2)).is_zero();
    let simple = hyp.then(|| rank_at(&bundle, &Expr::zero(), cfg));
    clauses.push(Clause {
        name: "i.ricci_simple",
        statement: "h'^2 = 2 f f'' implies Ricci simple",
        hypothesis: hyp,
        conclusion: simple
            .as_ref()
            .map(|c| c.as_ref().is_some_and(|c| c.rank == 1 && c.certified())),
        detail: simple
            .flatten()
            .map_or(String::new(), |c| format!("rank S = {}", c.rank)),
    });

    let rr = bundle.product(Product::endo(Riemann, Riemann));
    let qsr = bundle.product(Product::tachibana(Form::Ricci(1), Riemann));
    let v = verify_relation(&[(Expr::one(), rr.clone()), (Expr::integer(-1), qsr)], &table, cfg);
    clauses.push(Clause {
        name: "ii.ricci_generalized_pseudosymmetric",
        statement: "R.R = Q(S,R)",
        hypothesis: true,
        conclusion: Some(v.zero),
        detail: verdict_text(&v),
    });

    let c = profile.proportionality(&table, cfg);
    let hyp = c
        .as_ref()
        .is_some_and(|c| zero(&(&h1 - &(c.pow(2) * &h3))).is_zero());
    let conclusion = hyp.then(|| verify_relation(&[(Expr::one(), rr.clone())], &table, cfg));
    clauses.push(Clause {
        name: "ii.semisymmetric",
        statement: "f = c h' and h' = c^2 h''' imply R.R = 0",
        hypothesis: hyp,
        conclusion: conclusion.as_ref().map(|v| v.zero),
        detail: conclusion.as_ref().map_or(String::new(), verdict_text),
    });

    let hyp = c.is_some() && zero(&(&h4 * &h1 - &h3 * &h2)).is_zero();
    let conclusion = hyp.then(|| ricci_derivative(&bundle, cfg).cyclic_parallel);
    clauses.push(Clause {
        name: "iii.cyclic_parallel",
        statement: "h'''' h' = h''' h'' and f = c h' imply cyclic parallel Ricci tensor",
        hypothesis: hyp,
        conclusion: conclusion.as_ref().map(|v| v.zero),
        detail: conclusion.as_ref().map_or(String::new(), verdict_text),
    });

    let l = profile.weyl_coefficient();
    let conclusion = c.as_ref().map(|_| {
        let cc = bundle.product(Product::endo(Weyl, Weyl));
        let qgc = bundle.product(Product::tachibana(Form::Metric, Weyl));
        verify_relation(&[(Expr::one(), cc), (-l.clone(), qgc)], &table, cfg)
    });
    clauses.push(Clause {
        name: "iv.weyl_pseudosymmetric",
        statement: "f = c h' implies C.C = L Q(g,C) with L = (f f'' - h'^2)/(6 f^2)",
        hypothesis: c.is_some(),
        conclusion: conclusion.as_ref().map(|v| v.zero),
        detail: format!(
            "L = {l}{}",
            conclusion.as_ref().map_or(String::new(), |v| format!("; residual {}", verdict_text(v)))
        ),
    });

    let tau = profile.tau();
    let tau_cert = zero(&tau);
    let hyp = matches!(tau_cert, ZeroCertificate::ProvedNonzero { .. });
    let mut detail = format!("tau = {tau}");
    let conclusion = if hyp {
        let [l1, l2, l3] = profile.roter_coefficients().expect("tau nonzero");
        let s = bundle.ricci();
        let s2 = bundle.ricci_power(2);
        let kn = |a: &crate::tensor::Tensor<Expr>, b: &crate::tensor::Tensor<Expr>| {
            Arc::new(kulkarni_nomizu(a, b).expect("order 2"))
        };
        let v = verify_relation(
            &[
                (Expr::one(), Arc::new(bundle.riemann().clone())),
                (-l1.clone(), kn(s, s)),
                (-l2.clone(), kn(s, &s2)),
                (-l3.clone(), kn(&s2, &s2)),
            ],
            &table,
            cfg,
        );
        detail = format!("L1 = {l1}, L2 = {l2}, L3 = {l3}; residual {}", verdict_text(&v));
        Some(v.zero)
    } else {
        None
    };
    clauses.push(Clause {
        name: "v.generalized_roter",
        statement: "tau != 0 implies R = L1 S^S + L2 S^S2 + L3 S2^S2",
        hypothesis: hyp,
        conclusion,
        detail,
    });

    Ok(ConditionReport { clauses })
}
