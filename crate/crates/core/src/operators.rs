//! Curvature operators acting as derivations, and Tachibana tensors.

use crate::scalar::Scalar;
use crate::symmetry::Symmetry;
use crate::tensor::{Tensor, TensorError};

/// Raises the last slot of an order-4 tensor with `ginv`:
/// `Hup[x, y, z, l] = Σ_m g^{lm} H[x, y, z, m]`.
pub fn raise_last<T: Scalar>(h: &Tensor<T>, ginv: &Tensor<T>) -> Result<Tensor<T>, TensorError> {
    if h.order() != 4 {
        return Err(TensorError::Order {
            expected: 4,
            found: h.order(),
        });
    }
    h.transform_slot(3, ginv)
}

fn result_symmetry(t: &Tensor<impl Scalar>) -> Symmetry {
    t.symmetry().clone().with_skew(t.order(), t.order() + 1)
}

/// `(H(X, Y)·T)(X1..Xk) = −Σ_s T(X1.., H(X, Y) Xs, ..Xk)` with `X, Y`
/// appended as the last two slots. `h_up` is the endomorphism-valued form
/// with its last slot raised, skew in its first two slots.
pub fn endo_action<T: Scalar>(h_up: &Tensor<T>, t: &Tensor<T>) -> Result<Tensor<T>, TensorError> {
    if h_up.order() != 4 {
        return Err(TensorError::Order {
            expected: 4,
            found: h_up.order(),
        });
    }
    if h_up.dim() != t.dim() {
        return Err(TensorError::Dimension(h_up.dim(), t.dim()));
    }
    let n = t.dim();
    let k = t.order();
    Ok(Tensor::from_fn_sym(n, k + 2, result_symmetry(t), |idx| {
        let (x, y) = (idx[k], idx[k + 1]);
        let mut acc = T::zero();
        let mut j = idx[..k].to_vec();
        for s in 0..k {
            for l in 0..n {
                let h = h_up.get(&[x, y, idx[s], l]);
                if h.is_zero() {
                    continue;
                }
                j[s] = l;
                let v = t.get(&j);
                if !v.is_zero() {
                    acc = acc - h.clone() * v;
                }
            }
            j[s] = idx[s];
        }
        acc
    }))
}

/// `Q(A, T)(X1..Xk, X, Y) = −Σ_s T(.., (X ∧_A Y) Xs, ..)` where
/// `(X ∧_A Y) Z = A(Y, Z) X − A(X, Z) Y`.
pub fn tachibana<T: Scalar>(a: &Tensor<T>, t: &Tensor<T>) -> Result<Tensor<T>, TensorError> {
    if a.order() != 2 {
        return Err(TensorError::Order {
            expected: 2,
            found: a.order(),
        });
    }
    if a.dim() != t.dim() {
        return Err(TensorError::Dimension(a.dim(), t.dim()));
    }
    let n = t.dim();
    let k = t.order();
    Ok(Tensor::from_fn_sym(n, k + 2, result_symmetry(t), |idx| {
        let (x, y) = (idx[k], idx[k + 1]);
        let mut acc = T::zero();
        let mut j = idx[..k].to_vec();
        for s in 0..k {
            let xs = idx[s];
            let ax = a.at2(x, xs);
            if !ax.is_zero() {
                j[s] = y;
                acc = acc + ax.clone() * t.get(&j);
            }
            let ay = a.at2(y, xs);
            if !ay.is_zero() {
                j[s] = x;
                acc = acc - ay.clone() * t.get(&j);
            }
            j[s] = xs;
        }
        acc
    }))
}

/// Kulkarni–Nomizu product of two symmetric forms:
/// `(A ∧ E)(X1, X2, X, Y) = A(X1, Y)E(X2, X) + A(X2, X)E(X1, Y) − A(X1, X)E(X2, Y) − A(X2, Y)E(X1, X)`.
pub fn kulkarni_nomizu<T: Scalar>(a: &Tensor<T>, e: &Tensor<T>) -> Result<Tensor<T>, TensorError> {
    for t in [a, e] {
        if t.order() != 2 {
            return Err(TensorError::Order {
                expected: 2,
                found: t.order(),
            });
        }
    }
    if a.dim() != e.dim() {
        return Err(TensorError::Dimension(a.dim(), e.dim()));
    }
    Ok(Tensor::from_fn_sym(a.dim(), 4, Symmetry::riemann(0), |i| {
        let (x1, x2, x, y) = (i[0], i[1], i[2], i[3]);
        a.at2(x1, y).clone() * e.at2(x2, x) + a.at2(x2, x).clone() * e.at2(x1, y)
            - a.at2(x1, x).clone() * e.at2(x2, y)
            - a.at2(x2, y).clone() * e.at2(x1, x)
    }))
}

/// `G(X1, X2, X, Y) = g(X2, X)g(X1, Y) − g(X1, X)g(X2, Y)`, so `g ∧ g = 2G`.
pub fn gaussian<T: Scalar>(g: &Tensor<T>) -> Tensor<T> {
    Tensor::from_fn_sym(g.dim(), 4, Symmetry::riemann(0), |i| {
        g.at2(i[1], i[2]).clone() * g.at2(i[0], i[3]) - g.at2(i[0], i[2]).clone() * g.at2(i[1], i[3])
    })
}

/// `Σ A_ia g^{ab} B_bj` for symmetric `A`, `B` that commute as operators.
pub fn matrix_product<T: Scalar>(a: &Tensor<T>, ginv: &Tensor<T>, b: &Tensor<T>) -> Tensor<T> {
    let n = a.dim();
    Tensor::from_fn_sym(n, 2, Symmetry::symmetric(0, 1), |ij| {
        let mut acc = T::zero();
        for p in 0..n {
            let x = a.at2(ij[0], p);
            if x.is_zero() {
                continue;
            }
            for q in 0..n {
                let y = ginv.at2(p, q);
                if y.is_zero() {
                    continue;
                }
                acc = acc + x.clone() * y * b.at2(q, ij[1]);
            }
        }
        acc
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_int(n)
    }

    fn diag(v: &[i64]) -> Tensor<BigRational> {
        let n = v.len();
        Tensor::from_fn(n, 2, |i| if i[0] == i[1] { q(v[i[0]]) } else { q(0) })
            .with_symmetry(Symmetry::symmetric(0, 1))
    }

    #[test]
    fn metric_wedge_is_twice_gaussian() {
        let g = diag(&[1, -1, -1, -1]);
        let gg = kulkarni_nomizu(&g, &g).unwrap();
        assert_eq!(gg, gaussian(&g).scale(&q(2)));
    }

    #[test]
    fn tachibana_of_metric_with_itself_vanishes() {
        let g = diag(&[1, 2, -1]);
        assert!(tachibana(&g, &g).unwrap().is_zero());
        let gg = gaussian(&g);
        assert!(tachibana(&g, &gg).unwrap().is_zero());
    }

    #[test]
    fn gaussian_acts_like_tachibana() {
        // G(X, Y) acts as X ∧_g Y, so G·T = Q(g, T).
        let g = diag(&[1, -1, 2, 3]);
        let ginv = Tensor::from_fn(4, 2, |i| {
            if i[0] == i[1] {
                BigRational::from_int(1) / g.at2(i[0], i[0])
            } else {
                q(0)
            }
        });
        let s = Tensor::from_fn(4, 2, |i| q((i[0] * i[1] + i[0] + i[1]) as i64))
            .with_symmetry(Symmetry::symmetric(0, 1));
        let gup = raise_last(&gaussian(&g), &ginv).unwrap();
        let lhs = endo_action(&gup, &s).unwrap();
        let rhs = tachibana(&g, &s).unwrap();
        assert_eq!(lhs.sub(&rhs).unwrap().data().iter().filter(|x| **x != q(0)).count(), 0);
    }
}
