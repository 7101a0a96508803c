//! Zero tests lifted to tensors.

use curvlab_expr::{zero_test, Expr, SymbolTable, ZeroCertificate, ZeroTestConfig};
use rayon::prelude::*;

use crate::tensor::Tensor;

/// A component shown to be nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentWitness {
    /// 0-based index tuple.
    pub index: Vec<usize>,
    pub value: Expr,
    pub certificate: ZeroCertificate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorVerdict {
    /// No component was shown to be nonzero.
    pub zero: bool,
    /// Every component vanished canonically.
    pub proved: bool,
    /// The first nonzero component in index order.
    pub counterexample: Option<ComponentWitness>,
    /// Orbit representatives examined.
    pub components_tested: usize,
}

impl TensorVerdict {
    fn trivially_zero(count: usize) -> Self {
        TensorVerdict {
            zero: true,
            proved: true,
            counterexample: None,
            components_tested: count,
        }
    }
}

/// Zero-tests one representative per symmetry orbit of `t`.
pub fn tensor_zero_test(t: &Tensor<Expr>, table: &SymbolTable, cfg: &ZeroTestConfig) -> TensorVerdict {
    let reps: Vec<Vec<usize>> = t
        .symmetry()
        .orbits(t.dim(), t.order())
        .into_iter()
        .filter(|o| !o.vanishes)
        .map(|o| o.representative().to_vec())
        .collect();
    let live: Vec<&Vec<usize>> = reps.iter().filter(|i| !t.get(i).is_zero()).collect();
    if live.is_empty() {
        return TensorVerdict::trivially_zero(reps.len());
    }
    let certs: Vec<ZeroCertificate> = live.par_iter().map(|i| zero_test(t.get(i), table, cfg)).collect();
    let mut proved = true;
    for (idx, cert) in live.iter().zip(certs) {
        if !cert.is_zero() {
            return TensorVerdict {
                zero: false,
                proved: true,
                counterexample: Some(ComponentWitness {
                    index: idx.to_vec(),
                    value: t.get(idx).clone(),
                    certificate: cert,
                }),
                components_tested: reps.len(),
            };
        }
        proved &= cert.is_proved();
    }
    TensorVerdict {
        zero: true,
        proved,
        counterexample: None,
        components_tested: reps.len(),
    }
}

/// Seed for an independent second pass.
pub fn fresh_seed(cfg: &ZeroTestConfig) -> ZeroTestConfig {
    ZeroTestConfig {
        seed: cfg.seed.rotate_left(17) ^ 0x9e37_79b9_7f4a_7c15,
        ..cfg.clone()
    }
}

/// Like [`tensor_zero_test`], but a probabilistic verdict is confirmed at
/// fresh sample points.
pub fn tensor_zero_test_confirmed(t: &Tensor<Expr>, table: &SymbolTable, cfg: &ZeroTestConfig) -> TensorVerdict {
    let first = tensor_zero_test(t, table, cfg);
    if !first.zero || first.proved {
        return first;
    }
    tensor_zero_test(t, table, &fresh_seed(cfg))
}

/// Zero-tests `Σ c_i T_i`.
pub fn combination_zero_test(
    terms: &[(Expr, &Tensor<Expr>)],
    table: &SymbolTable,
    cfg: &ZeroTestConfig,
) -> TensorVerdict {
    match Tensor::linear_combination(terms) {
        Ok(t) => tensor_zero_test_confirmed(&t, table, cfg),
        Err(_) => TensorVerdict {
            zero: false,
            proved: true,
            counterexample: None,
            components_tested: 0,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::Symmetry;
    use curvlab_expr::parse_expr;

    #[test]
    fn first_nonzero_component_is_reported() {
        let t = SymbolTable::new(&["x", "y", "z"], &["m"]).unwrap();
        let mut a = Tensor::<Expr>::zeros(3, 2).with_symmetry(Symmetry::symmetric(0, 1));
        a.set(&[2, 1], parse_expr("x*m", &t).unwrap());
        a.set(&[1, 2], parse_expr("x*m", &t).unwrap());
        let v = tensor_zero_test(&a, &t, &ZeroTestConfig::default());
        assert!(!v.zero);
        assert_eq!(v.counterexample.unwrap().index, vec![1, 2]);
        assert_eq!(v.components_tested, 6);

        let mut b = Tensor::<Expr>::zeros(3, 1);
        b.set(&[0], parse_expr("cosh(x)^2 - sinh(x)^2 - 1", &t).unwrap());
        let v = tensor_zero_test_confirmed(&b, &t, &ZeroTestConfig::default());
        assert!(v.zero && !v.proved);
    }
}
