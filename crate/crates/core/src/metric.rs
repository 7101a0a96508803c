//! Metrics, their inverses, Christoffel symbols and covariant derivatives.

use curvlab_expr::{zero_test, Expr, SymbolTable, ZeroCertificate, ZeroTestConfig};

use crate::linalg;
use crate::symmetry::Symmetry;
use crate::tensor::{Tensor, TensorError};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("metric matrix is {rows}x{cols} but the chart has {dim} coordinates")]
    Shape { rows: usize, cols: usize, dim: usize },
    #[error("dimension {0} is below 3")]
    TooSmall(usize),
    #[error("g_{i}{j} and g_{j}{i} differ")]
    NotSymmetric { i: usize, j: usize },
    #[error("metric is degenerate (determinant {0})")]
    Degenerate(String),
}

/// A symmetric matrix of expressions over a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    symbols: SymbolTable,
    g: Vec<Vec<Expr>>,
}

impl MetricSpec {
    pub fn new(symbols: SymbolTable, g: Vec<Vec<Expr>>) -> Result<Self, MetricError> {
        let dim = symbols.dimension();
        if g.len() != dim || g.iter().any(|r| r.len() != dim) {
            return Err(MetricError::Shape {
                rows: g.len(),
                cols: g.first().map_or(0, |r| r.len()),
                dim,
            });
        }
        if dim < 3 {
            return Err(MetricError::TooSmall(dim));
        }
        for i in 0..dim {
            for j in 0..i {
                if g[i][j] != g[j][i] {
                    return Err(MetricError::NotSymmetric { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(MetricSpec { symbols, g })
    }

    /// From lower-triangle entries `(i, j)` with `i >= j`, 0-based;
    /// missing entries are zero.
    pub fn from_lower(
        symbols: SymbolTable,
        entries: impl IntoIterator<Item = ((usize, usize), Expr)>,
    ) -> Result<Self, MetricError> {
        let n = symbols.dimension();
        let mut g = vec![vec![Expr::zero(); n]; n];
        for ((i, j), e) in entries {
            if i >= n || j >= n {
                return Err(MetricError::Shape { rows: i + 1, cols: j + 1, dim: n });
            }
            g[i][j] = e.clone();
            g[j][i] = e;
        }
        MetricSpec::new(symbols, g)
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn dimension(&self) -> usize {
        self.g.len()
    }

    pub fn component(&self, i: usize, j: usize) -> &Expr {
        &self.g[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Expr>] {
        &self.g
    }

    /// Replaces symbols by expressions in every component.
    pub fn map_components(
        &self,
        symbols: SymbolTable,
        f: impl Fn(&Expr) -> Expr,
    ) -> Result<Self, MetricError> {
        let g = self.g.iter().map(|r| r.iter().map(&f).collect()).collect();
        MetricSpec::new(symbols, g)
    }
}

/// A metric together with its inverse, determinant and Christoffel symbols.
#[derive(Clone, Debug)]
pub struct MetricField {
    spec: MetricSpec,
    g: Tensor<Expr>,
    inverse: Tensor<Expr>,
    det: Expr,
    det_certificate: ZeroCertificate,
    christoffel: Tensor<Expr>,
}

/// Inverts the metric and computes `Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij)`.
pub fn build_metric(spec: MetricSpec, cfg: &ZeroTestConfig) -> Result<MetricField, MetricError> {
    let n = spec.dimension();
    let det = linalg::det(spec.matrix());
    let det_certificate = zero_test(&det, spec.symbols(), cfg);
    if det_certificate.is_zero() {
        return Err(MetricError::Degenerate(det.to_string()));
    }
    let (inv, _) = linalg::inverse(spec.matrix()).ok_or_else(|| MetricError::Degenerate(det.to_string()))?;
    let coords = spec.symbols().coordinates().to_vec();
    // dg[l][i][j] = ∂_l g_ij
    let dg = Tensor::from_fn(n, 3, |idx| spec.g[idx[1]][idx[2]].diff(&coords[idx[0]]));
    let half = Expr::ratio(1, 2);
    let christoffel = Tensor::from_fn(n, 3, |idx| {
        let (k, i, j) = (idx[0], idx[1], idx[2]);
        let mut acc = Expr::zero();
        for (l, g_kl) in inv[k].iter().enumerate() {
            if g_kl.is_zero() {
                continue;
            }
            let s = dg.get(&[i, j, l]).clone() + dg.get(&[j, i, l]) - dg.get(&[l, i, j]);
            if !s.is_zero() {
                acc += &(g_kl * &s);
            }
        }
        acc * &half
    });
    let g = Tensor::from_rows(spec.g.clone()).with_symmetry(Symmetry::symmetric(0, 1));
    let inverse = Tensor::from_rows(inv).with_symmetry(Symmetry::symmetric(0, 1));
    Ok(MetricField {
        spec,
        g,
        inverse,
        det,
        det_certificate,
        christoffel,
    })
}

impl MetricField {
    pub fn spec(&self) -> &MetricSpec {
        &self.spec
    }

    pub fn symbols(&self) -> &SymbolTable {
        self.spec.symbols()
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    /// `g_ij` as a symmetric order-2 tensor.
    pub fn g(&self) -> &Tensor<Expr> {
        &self.g
    }

    /// `g^ij`.
    pub fn inverse(&self) -> &Tensor<Expr> {
        &self.inverse
    }

    pub fn determinant(&self) -> &Expr {
        &self.det
    }

    pub fn determinant_certificate(&self) -> &ZeroCertificate {
        &self.det_certificate
    }

    /// `Γ^k_ij`, stored as `[k, i, j]`.
    pub fn christoffel(&self) -> &Tensor<Expr> {
        &self.christoffel
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &Expr {
        self.christoffel.get(&[k, i, j])
    }

    /// `(∇T)_{i1..ik, j} = ∂_j T_{i1..ik} − Σ_s Γ^m_{j i_s} T_{..m..}`; the
    /// derivative slot is appended last.
    pub fn covariant_derivative(&self, t: &Tensor<Expr>) -> Result<Tensor<Expr>, TensorError> {
        let n = self.dimension();
        if t.dim() != n {
            return Err(TensorError::Dimension(n, t.dim()));
        }
        let k = t.order();
        let coords = self.symbols().coordinates();
        let sym = t.symmetry().clone();
        Ok(Tensor::from_fn_sym(n, k + 1, sym, |idx| {
            let j = idx[k];
            let base = &idx[..k];
            let mut acc = t.get(base).diff(&coords[j]);
            let mut m_idx = base.to_vec();
            for s in 0..k {
                for m in 0..n {
                    let gam = self.gamma(m, j, base[s]);
                    if gam.is_zero() {
                        continue;
                    }
                    m_idx[s] = m;
                    let tv = t.get(&m_idx);
                    if !tv.is_zero() {
                        acc -= &(gam * tv);
                    }
                }
                m_idx[s] = base[s];
            }
            acc
        }))
    }

    /// Raises slot `slot`: `T^{..a..} = Σ_b g^{ab} T_{..b..}`.
    pub fn raise_index(&self, t: &Tensor<Expr>, slot: usize) -> Result<Tensor<Expr>, TensorError> {
        t.transform_slot(slot, &self.inverse)
    }

    /// Lowers slot `slot` with `g_ab`.
    pub fn lower_index(&self, t: &Tensor<Expr>, slot: usize) -> Result<Tensor<Expr>, TensorError> {
        t.transform_slot(slot, &self.g)
    }

    /// Metric trace over slots `a` and `b`: `Σ g^{ij} T(.., i, .., j, ..)`.
    pub fn contract(&self, t: &Tensor<Expr>, a: usize, b: usize) -> Result<Tensor<Expr>, TensorError> {
        self.raise_index(t, a)?.trace(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use curvlab_expr::parse_expr;

    fn sr() -> MetricField {
        let t = SymbolTable::new(&["t", "phi", "r", "z"], &["a"]).unwrap();
        let p = |s: &str| parse_expr(s, &t).unwrap();
        let g = vec![
            vec![p("1"), p("a*r^2"), p("0"), p("0")],
            vec![p("a*r^2"), p("a^2*r^4 - r^2"), p("0"), p("0")],
            vec![p("0"), p("0"), p("-1"), p("0")],
            vec![p("0"), p("0"), p("0"), p("-1")],
        ];
        build_metric(MetricSpec::new(t.clone(), g).unwrap(), &ZeroTestConfig::default()).unwrap()
    }

    #[test]
    fn christoffel_and_inverse() {
        let m = sr();
        let t = m.symbols().clone();
        assert_eq!(m.determinant(), &parse_expr("-r^2", &t).unwrap());
        assert_eq!(m.gamma(2, 1, 1), &parse_expr("2*a^2*r^3 - r", &t).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Expr::zero();
                for k in 0..4 {
                    acc += &(m.inverse().at2(i, k) * m.g().at2(k, j));
                }
                assert_eq!(acc, if i == j { Expr::one() } else { Expr::zero() });
                for k in 0..4 {
                    assert_eq!(m.gamma(k, i, j), m.gamma(k, j, i));
                }
            }
        }
    }

    #[test]
    fn metric_is_parallel() {
        let m = sr();
        assert!(m.covariant_derivative(m.g()).unwrap().is_zero());
    }

    #[test]
    fn degenerate_and_asymmetric_rejected() {
        let t = SymbolTable::new(&["x", "y", "z"], &[] as &[&str]).unwrap();
        let one = Expr::one();
        let z = Expr::zero();
        let g = vec![vec![one.clone(), z.clone(), z.clone()], vec![z.clone(), z.clone(), z.clone()], vec![z.clone(), z.clone(), one.clone()]];
        let spec = MetricSpec::new(t.clone(), g).unwrap();
        assert!(matches!(build_metric(spec, &ZeroTestConfig::default()), Err(MetricError::Degenerate(_))));
        let g = vec![vec![one.clone(), one.clone(), z.clone()], vec![z.clone(), one.clone(), z.clone()], vec![z.clone(), z.clone(), one.clone()]];
        assert!(matches!(MetricSpec::new(t, g), Err(MetricError::NotSymmetric { .. })));
    }
}
