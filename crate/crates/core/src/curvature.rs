//! Riemann, Ricci and the derived curvature tensors of a metric, with
//! lazily computed and cached products.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use curvlab_expr::Expr;

use crate::metric::MetricField;
use crate::operators::{endo_action, gaussian, kulkarni_nomizu, matrix_product, raise_last, tachibana};
use crate::symmetry::Symmetry;
use crate::tensor::Tensor;

/// The (0,4) curvature-like tensors built from `R`, `S`, `κ` and `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvatureKind {
    /// Riemann–Christoffel `R`.
    Riemann,
    /// Weyl conformal `C`.
    Weyl,
    /// Projective `P`.
    Projective,
    /// Concircular `W`.
    Concircular,
    /// Conharmonic `K`.
    Conharmonic,
    /// Gaussian `G = ½ g ∧ g`.
    Gaussian,
}

impl CurvatureKind {
    pub const ALL: [CurvatureKind; 6] = [
        CurvatureKind::Riemann,
        CurvatureKind::Weyl,
        CurvatureKind::Projective,
        CurvatureKind::Concircular,
        CurvatureKind::Conharmonic,
        CurvatureKind::Gaussian,
    ];

    pub fn letter(self) -> &'static str {
        match self {
            CurvatureKind::Riemann => "R",
            CurvatureKind::Weyl => "C",
            CurvatureKind::Projective => "P",
            CurvatureKind::Concircular => "W",
            CurvatureKind::Conharmonic => "K",
            CurvatureKind::Gaussian => "G",
        }
    }

    pub fn from_letter(s: &str) -> Option<Self> {
        CurvatureKind::ALL.into_iter().find(|k| k.letter() == s)
    }
}

/// A symmetric (0,2) form used in Tachibana tensors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Form {
    Metric,
    /// `S^k` for `k >= 1`.
    Ricci(u8),
}

impl Form {
    fn label(self) -> String {
        match self {
            Form::Metric => "g".into(),
            Form::Ricci(1) => "S".into(),
            Form::Ricci(k) => format!("S^{k}"),
        }
    }
}

/// A tensor acted on by an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Curvature(CurvatureKind),
    Form(Form),
}

impl Target {
    fn label(self) -> String {
        match self {
            Target::Curvature(k) => k.letter().into(),
            Target::Form(f) => f.label(),
        }
    }
}

/// An operator producing a tensor of order `k + 2` from one of order `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    /// `H·T` with `H(X, Y)` a curvature operator.
    Endo(CurvatureKind),
    /// `Q(A, T)`.
    Tachibana(Form),
}

/// `op` applied to `target`, e.g. `R·S` or `Q(g, C)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Product {
    pub op: Operator,
    pub target: Target,
}

impl Product {
    pub fn endo(h: CurvatureKind, t: CurvatureKind) -> Self {
        Product {
            op: Operator::Endo(h),
            target: Target::Curvature(t),
        }
    }

    pub fn endo_form(h: CurvatureKind, f: Form) -> Self {
        Product {
            op: Operator::Endo(h),
            target: Target::Form(f),
        }
    }

    pub fn tachibana(a: Form, t: CurvatureKind) -> Self {
        Product {
            op: Operator::Tachibana(a),
            target: Target::Curvature(t),
        }
    }

    pub fn tachibana_form(a: Form, f: Form) -> Self {
        Product {
            op: Operator::Tachibana(a),
            target: Target::Form(f),
        }
    }
}

impl fmt::Display for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op {
            Operator::Endo(h) => write!(f, "{}.{}", h.letter(), self.target.label()),
            Operator::Tachibana(a) => write!(f, "Q({},{})", a.label(), self.target.label()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown tensor product `{0}`")]
pub struct ProductParseError(pub String);

fn parse_form(s: &str) -> Option<Form> {
    match s {
        "g" => Some(Form::Metric),
        "S" => Some(Form::Ricci(1)),
        _ => {
            let k: u8 = s.strip_prefix("S^")?.parse().ok()?;
            (k >= 1).then_some(Form::Ricci(k))
        }
    }
}

fn parse_target(s: &str) -> Option<Target> {
    CurvatureKind::from_letter(s)
        .map(Target::Curvature)
        .or_else(|| parse_form(s).map(Target::Form))
}

impl FromStr for Product {
    type Err = ProductParseError;

    /// Accepts `R.R`, `R·S`, `RR`, `Q(g,C)`, `QgC`, `Q(S^2,R)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ProductParseError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(inner) = t.strip_prefix("Q(").and_then(|r| r.strip_suffix(')')) {
            let (a, b) = inner.split_once(',').ok_or_else(err)?;
            let op = Operator::Tachibana(parse_form(a).ok_or_else(err)?);
            return Ok(Product { op, target: parse_target(b).ok_or_else(err)? });
        }
        if let Some(rest) = t.strip_prefix('Q') {
            let mut chars = rest.chars();
            let a = chars.next().ok_or_else(err)?.to_string();
            let op = Operator::Tachibana(parse_form(&a).ok_or_else(err)?);
            return Ok(Product { op, target: parse_target(chars.as_str()).ok_or_else(err)? });
        }
        let (h, target) = match t.split_once(['.', '·']) {
            Some(parts) => parts,
            None if t.chars().count() >= 2 => t.split_at(1),
            None => return Err(err()),
        };
        let h = CurvatureKind::from_letter(h).ok_or_else(err)?;
        Ok(Product {
            op: Operator::Endo(h),
            target: parse_target(target).ok_or_else(err)?,
        })
    }
}

/// All curvature quantities of one metric, computed on first use.
pub struct CurvatureBundle {
    metric: Arc<MetricField>,
    riemann: OnceLock<Tensor<Expr>>,
    ricci: OnceLock<Tensor<Expr>>,
    scalar: OnceLock<Expr>,
    ricci_operator: OnceLock<Tensor<Expr>>,
    ricci_powers: Mutex<Vec<Arc<Tensor<Expr>>>>,
    derived: Mutex<HashMap<CurvatureKind, Arc<Tensor<Expr>>>>,
    raised: Mutex<HashMap<CurvatureKind, Arc<Tensor<Expr>>>>,
    nabla_riemann: OnceLock<Tensor<Expr>>,
    nabla_ricci: OnceLock<Tensor<Expr>>,
    products: Mutex<HashMap<Product, Arc<Tensor<Expr>>>>,
}

impl fmt::Debug for CurvatureBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurvatureBundle")
            .field("dimension", &self.metric.dimension())
            .finish_non_exhaustive()
    }
}

fn cached<K, F>(map: &Mutex<HashMap<K, Arc<Tensor<Expr>>>>, key: K, make: F) -> Arc<Tensor<Expr>>
where
    K: std::hash::Hash + Eq + Copy,
    F: FnOnce() -> Tensor<Expr>,
{
    if let Some(t) = map.lock().expect("cache lock").get(&key) {
        return t.clone();
    }
    let t = Arc::new(make());
    map.lock().expect("cache lock").entry(key).or_insert(t).clone()
}

impl CurvatureBundle {
    pub fn new(metric: MetricField) -> Self {
        CurvatureBundle::from_arc(Arc::new(metric))
    }

    pub fn from_arc(metric: Arc<MetricField>) -> Self {
        CurvatureBundle {
            metric,
            riemann: OnceLock::new(),
            ricci: OnceLock::new(),
            scalar: OnceLock::new(),
            ricci_operator: OnceLock::new(),
            ricci_powers: Mutex::new(Vec::new()),
            derived: Mutex::new(HashMap::new()),
            raised: Mutex::new(HashMap::new()),
            nabla_riemann: OnceLock::new(),
            nabla_ricci: OnceLock::new(),
            products: Mutex::new(HashMap::new()),
        }
    }

    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn dimension(&self) -> usize {
        self.metric.dimension()
    }

    /// `R_ijkl = −Σ_m g_ml R^m_kij`, where
    /// `R^m_kij = ∂_i Γ^m_jk − ∂_j Γ^m_ik + Γ^m_ip Γ^p_jk − Γ^m_jp Γ^p_ik`.
    ///
    /// Every component is computed, so the algebraic symmetries can be
    /// checked rather than assumed.
    pub fn riemann(&self) -> &Tensor<Expr> {
        self.riemann.get_or_init(|| {
            let m = &*self.metric;
            let n = m.dimension();
            let coords = m.symbols().coordinates();
            let up = Tensor::from_fn(n, 4, |idx| {
                let (mm, k, i, j) = (idx[0], idx[1], idx[2], idx[3]);
                if i == j {
                    return Expr::zero();
                }
                let mut acc = m.gamma(mm, j, k).diff(&coords[i]) - m.gamma(mm, i, k).diff(&coords[j]);
                for p in 0..n {
                    let a = m.gamma(mm, i, p);
                    if !a.is_zero() {
                        let b = m.gamma(p, j, k);
                        if !b.is_zero() {
                            acc += &(a * b);
                        }
                    }
                    let c = m.gamma(mm, j, p);
                    if !c.is_zero() {
                        let d = m.gamma(p, i, k);
                        if !d.is_zero() {
                            acc -= &(c * d);
                        }
                    }
                }
                acc
            });
            Tensor::from_fn(n, 4, |idx| {
                let (i, j, k, l) = (idx[0], idx[1], idx[2], idx[3]);
                let mut acc = Expr::zero();
                for mm in 0..n {
                    let g = m.g().at2(mm, l);
                    if g.is_zero() {
                        continue;
                    }
                    let r = up.get(&[mm, k, i, j]);
                    if !r.is_zero() {
                        acc -= &(g * r);
                    }
                }
                acc
            })
            .with_symmetry(Symmetry::riemann(0))
        })
    }

    /// `S_ij = g^{pq} R_{p i j q}`.
    pub fn ricci(&self) -> &Tensor<Expr> {
        self.ricci.get_or_init(|| {
            let m = &*self.metric;
            let n = m.dimension();
            let r = self.riemann();
            Tensor::from_fn_sym(n, 2, Symmetry::symmetric(0, 1), |ij| {
                let mut acc = Expr::zero();
                for p in 0..n {
                    for q in 0..n {
                        let g = m.inverse().at2(p, q);
                        if g.is_zero() {
                            continue;
                        }
                        let v = r.get(&[p, ij[0], ij[1], q]);
                        if !v.is_zero() {
                            acc += &(g * v);
                        }
                    }
                }
                acc
            })
        })
    }

    /// `κ = g^{ij} S_ij`.
    pub fn scalar_curvature(&self) -> &Expr {
        self.scalar.get_or_init(|| {
            let m = &*self.metric;
            let n = m.dimension();
            let s = self.ricci();
            let mut acc = Expr::zero();
            for i in 0..n {
                for j in 0..n {
                    let g = m.inverse().at2(i, j);
                    if !g.is_zero() && !s.at2(i, j).is_zero() {
                        acc += &(g * s.at2(i, j));
                    }
                }
            }
            acc
        })
    }

    /// The Ricci operator `𝒮^a_b = g^{ac} S_cb`, stored as `[a, b]`.
    pub fn ricci_operator(&self) -> &Tensor<Expr> {
        self.ricci_operator.get_or_init(|| {
            let m = &*self.metric;
            let n = m.dimension();
            let s = self.ricci();
            Tensor::from_fn(n, 2, |ab| {
                let mut acc = Expr::zero();
                for c in 0..n {
                    let g = m.inverse().at2(ab[0], c);
                    if !g.is_zero() && !s.at2(c, ab[1]).is_zero() {
                        acc += &(g * s.at2(c, ab[1]));
                    }
                }
                acc
            })
        })
    }

    /// `S^k` with `S^1 = S` and `S^{k+1}_ij = S^k_ia g^{ab} S_bj`; `S^0 = g`.
    pub fn ricci_power(&self, k: usize) -> Arc<Tensor<Expr>> {
        if k == 0 {
            return Arc::new(self.metric.g().clone());
        }
        let mut powers = self.ricci_powers.lock().expect("cache lock");
        if powers.is_empty() {
            powers.push(Arc::new(self.ricci().clone()));
        }
        while powers.len() < k {
            let last = powers.last().expect("nonempty").clone();
            let next = matrix_product(&last, self.metric.inverse(), self.ricci());
            powers.push(Arc::new(next));
        }
        powers[k - 1].clone()
    }

    pub fn form(&self, f: Form) -> Arc<Tensor<Expr>> {
        match f {
            Form::Metric => self.ricci_power(0),
            Form::Ricci(k) => self.ricci_power(k as usize),
        }
    }

    /// `R`, `C`, `P`, `W`, `K` or `G`.
    pub fn curvature(&self, kind: CurvatureKind) -> Arc<Tensor<Expr>> {
        cached(&self.derived, kind, || self.build_derived(kind))
    }

    fn build_derived(&self, kind: CurvatureKind) -> Tensor<Expr> {
        let m = &*self.metric;
        let n = m.dimension() as i64;
        let g = m.g();
        let s = self.ricci();
        let kappa = self.scalar_curvature();
        let r = self.riemann();
        let combine = |terms: &[(Expr, &Tensor<Expr>)]| {
            Tensor::linear_combination(terms)
                .expect("shapes agree")
                .with_symmetry(Symmetry::riemann(0))
        };
        match kind {
            CurvatureKind::Riemann => r.clone(),
            CurvatureKind::Gaussian => gaussian(g),
            CurvatureKind::Weyl => {
                let gs = kulkarni_nomizu(g, s).expect("order 2");
                let gg = gaussian(g);
                combine(&[
                    (Expr::one(), r),
                    (Expr::ratio(-1, n - 2), &gs),
                    (kappa * &Expr::ratio(1, (n - 1) * (n - 2)), &gg),
                ])
            }
            CurvatureKind::Concircular => {
                let gg = gaussian(g);
                combine(&[(Expr::one(), r), (-(kappa * &Expr::ratio(1, n * (n - 1))), &gg)])
            }
            CurvatureKind::Conharmonic => {
                let gs = kulkarni_nomizu(g, s).expect("order 2");
                combine(&[(Expr::one(), r), (Expr::ratio(-1, n - 2), &gs)])
            }
            CurvatureKind::Projective => {
                let c = Expr::ratio(1, n - 1);
                // Only skew in the first pair.
                Tensor::from_fn_sym(m.dimension(), 4, Symmetry::skew(0, 1), |i| {
                    let t = s.at2(i[1], i[2]) * g.at2(i[0], i[3]) - s.at2(i[0], i[2]) * g.at2(i[1], i[3]);
                    r.get(i).clone() - t * &c
                })
            }
        }
    }

    /// The curvature tensor with its last slot raised.
    pub fn raised(&self, kind: CurvatureKind) -> Arc<Tensor<Expr>> {
        cached(&self.raised, kind, || {
            raise_last(&self.curvature(kind), self.metric.inverse()).expect("order 4")
        })
    }

    /// `∇R` with the derivative slot last.
    pub fn nabla_riemann(&self) -> &Tensor<Expr> {
        self.nabla_riemann
            .get_or_init(|| self.metric.covariant_derivative(self.riemann()).expect("same chart"))
    }

    /// `(∇S)_{ij,k}`.
    pub fn nabla_ricci(&self) -> &Tensor<Expr> {
        self.nabla_ricci
            .get_or_init(|| self.metric.covariant_derivative(self.ricci()).expect("same chart"))
    }

    pub fn target(&self, t: Target) -> Arc<Tensor<Expr>> {
        match t {
            Target::Curvature(k) => self.curvature(k),
            Target::Form(f) => self.form(f),
        }
    }

    /// `H·T` or `Q(A, T)`, cached.
    pub fn product(&self, p: Product) -> Arc<Tensor<Expr>> {
        cached(&self.products, p, || {
            let t = self.target(p.target);
            match p.op {
                Operator::Endo(h) => endo_action(&self.raised(h), &t).expect("same chart"),
                Operator::Tachibana(a) => tachibana(&self.form(a), &t).expect("same chart"),
            }
        })
    }

    /// Looks up a named tensor: `g`, `Gamma`, `R`, `S`, `S^k`, `kappa`,
    /// `C`, `P`, `W`, `K`, `G`, `nablaR`, `nablaS`, or a product such as
    /// `R.C` and `Q(S,R)`.
    pub fn named(&self, name: &str) -> Option<Arc<Tensor<Expr>>> {
        let trimmed = name.trim();
        match trimmed {
            "Gamma" | "christoffel" => return Some(Arc::new(self.metric.christoffel().clone())),
            "kappa" | "scalar" => return Some(Arc::new(Tensor::scalar(self.scalar_curvature().clone()))),
            "nablaR" | "DR" => return Some(Arc::new(self.nabla_riemann().clone())),
            "nablaS" | "DS" => return Some(Arc::new(self.nabla_ricci().clone())),
            _ => {}
        }
        if let Some(k) = CurvatureKind::from_letter(trimmed) {
            return Some(self.curvature(k));
        }
        if let Some(f) = parse_form(trimmed) {
            return Some(self.form(f));
        }
        trimmed.parse::<Product>().ok().map(|p| self.product(p))
    }
}
