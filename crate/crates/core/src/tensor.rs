//! Dense covariant tensors over a chart of dimension `n`.

use rayon::prelude::*;

use crate::scalar::Scalar;
use crate::symmetry::Symmetry;

/// Lexicographic iterator over `dim^order` index tuples (0-based).
pub fn tuples(dim: usize, order: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if dim == 0 && order > 0 { 0 } else { dim.pow(order as u32) };
    (0..total).map(move |flat| unflatten(dim, order, flat))
}

pub fn flat_index(dim: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

fn unflatten(dim: usize, order: usize, mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; order];
    for slot in (0..order).rev() {
        idx[slot] = flat % dim;
        flat /= dim;
    }
    idx
}

/// Renders a 0-based tuple in 1-based subscript form, e.g. `1212`.
pub fn subscript(idx: &[usize]) -> String {
    idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(if idx.iter().any(|&i| i >= 9) { "," } else { "" })
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TensorError {
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("expected a tensor of order {expected}, got order {found}")]
    Order { expected: usize, found: usize },
    #[error("slot {slot} out of range for a tensor of order {order}")]
    Slot { slot: usize, order: usize },
}

/// A `(0, order)` tensor with components stored densely in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<T> {
    dim: usize,
    order: usize,
    data: Vec<T>,
    symmetry: Symmetry,
}

impl<T: Scalar> Tensor<T> {
    pub fn zeros(dim: usize, order: usize) -> Self {
        Tensor {
            dim,
            order,
            data: vec![T::zero(); dim.pow(order as u32)],
            symmetry: Symmetry::none(),
        }
    }

    pub fn scalar(value: T) -> Self {
        Tensor {
            dim: 0,
            order: 0,
            data: vec![value],
            symmetry: Symmetry::none(),
        }
    }

    pub fn from_vec(dim: usize, order: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), dim.pow(order as u32), "component count");
        Tensor {
            dim,
            order,
            data,
            symmetry: Symmetry::none(),
        }
    }

    /// Every component from `f`, evaluated in parallel.
    pub fn from_fn<F>(dim: usize, order: usize, f: F) -> Self
    where
        F: Fn(&[usize]) -> T + Sync + Send,
    {
        let total = dim.pow(order as u32);
        let data = (0..total)
            .into_par_iter()
            .map(|flat| f(&unflatten(dim, order, flat)))
            .collect();
        Tensor {
            dim,
            order,
            data,
            symmetry: Symmetry::none(),
        }
    }

    /// Evaluates `f` once per orbit of `symmetry` and fills the rest by sign.
    pub fn from_fn_sym<F>(dim: usize, order: usize, symmetry: Symmetry, f: F) -> Self
    where
        F: Fn(&[usize]) -> T + Sync + Send,
    {
        let orbits = symmetry.orbits(dim, order);
        let values: Vec<Option<T>> = orbits
            .par_iter()
            .map(|o| (!o.vanishes).then(|| f(o.representative())))
            .collect();
        let mut data = vec![T::zero(); dim.pow(order as u32)];
        for (orbit, value) in orbits.iter().zip(values) {
            let Some(v) = value else { continue };
            if v.is_zero() {
                continue;
            }
            for (idx, sign) in &orbit.members {
                data[flat_index(dim, idx)] = if *sign < 0 { -v.clone() } else { v.clone() };
            }
        }
        Tensor {
            dim,
            order,
            data,
            symmetry,
        }
    }

    /// Declares index symmetries the components are known to satisfy.
    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        debug_assert!(symmetry.span() <= self.order);
        self.symmetry = symmetry;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn symmetry(&self) -> &Symmetry {
        &self.symmetry
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> &T {
        debug_assert_eq!(idx.len(), self.order);
        &self.data[flat_index(self.dim, idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: T) {
        let i = flat_index(self.dim, idx);
        self.data[i] = value;
    }

    /// Component access for order 2.
    pub fn at2(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> {
        tuples(self.dim, self.order)
    }

    /// Index tuple together with each component.
    pub fn components(&self) -> impl Iterator<Item = (Vec<usize>, &T)> {
        self.indices().zip(self.data.iter())
    }

    pub fn map<U: Scalar, F>(&self, f: F) -> Tensor<U>
    where
        F: Fn(&T) -> U + Sync + Send,
    {
        Tensor {
            dim: self.dim,
            order: self.order,
            data: self.data.par_iter().map(f).collect(),
            symmetry: self.symmetry.clone(),
        }
    }

    pub fn try_map<U: Scalar, E: Send, F>(&self, f: F) -> Result<Tensor<U>, E>
    where
        F: Fn(&T) -> Result<U, E> + Sync + Send,
    {
        let data = self.data.par_iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(Tensor {
            dim: self.dim,
            order: self.order,
            data,
            symmetry: self.symmetry.clone(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn check_shape(&self, other: &Tensor<T>) -> Result<(), TensorError> {
        if self.dim != other.dim {
            return Err(TensorError::Dimension(self.dim, other.dim));
        }
        if self.order != other.order {
            return Err(TensorError::Order {
                expected: self.order,
                found: other.order,
            });
        }
        Ok(())
    }

    /// Symmetries common to both operands survive.
    fn common_symmetry(&self, other: &Tensor<T>) -> Symmetry {
        if self.symmetry == other.symmetry {
            self.symmetry.clone()
        } else {
            Symmetry::none()
        }
    }

    pub fn add(&self, other: &Tensor<T>) -> Result<Tensor<T>, TensorError> {
        self.check_shape(other)?;
        Ok(Tensor {
            dim: self.dim,
            order: self.order,
            data: self
                .data
                .par_iter()
                .zip(other.data.par_iter())
                .map(|(a, b)| a.clone() + b)
                .collect(),
            symmetry: self.common_symmetry(other),
        })
    }

    pub fn sub(&self, other: &Tensor<T>) -> Result<Tensor<T>, TensorError> {
        self.check_shape(other)?;
        Ok(Tensor {
            dim: self.dim,
            order: self.order,
            data: self
                .data
                .par_iter()
                .zip(other.data.par_iter())
                .map(|(a, b)| a.clone() - b)
                .collect(),
            symmetry: self.common_symmetry(other),
        })
    }

    pub fn scale(&self, c: &T) -> Tensor<T> {
        if c.is_zero() {
            return Tensor::zeros(self.dim, self.order).with_symmetry(self.symmetry.clone());
        }
        self.map(|x| x.clone() * c)
    }

    pub fn neg(&self) -> Tensor<T> {
        self.map(|x| -x.clone())
    }

    /// `Σ c_i T_i`; all terms must share dimension and order.
    pub fn linear_combination(terms: &[(T, &Tensor<T>)]) -> Result<Tensor<T>, TensorError> {
        let Some((_, first)) = terms.first() else {
            return Ok(Tensor::scalar(T::zero()));
        };
        for (_, t) in terms {
            first.check_shape(t)?;
        }
        let symmetry = if terms.iter().all(|(_, t)| t.symmetry == first.symmetry) {
            first.symmetry.clone()
        } else {
            Symmetry::none()
        };
        let data = (0..first.data.len())
            .into_par_iter()
            .map(|i| {
                let mut acc = T::zero();
                for (c, t) in terms {
                    let x = &t.data[i];
                    if !x.is_zero() && !c.is_zero() {
                        acc = acc + c.clone() * x;
                    }
                }
                acc
            })
            .collect();
        Ok(Tensor {
            dim: first.dim,
            order: first.order,
            data,
            symmetry,
        })
    }

    /// Tensor product `(A ⊗ B)(x, y) = A(x) B(y)`.
    pub fn outer(&self, other: &Tensor<T>) -> Result<Tensor<T>, TensorError> {
        if self.dim != other.dim && self.order > 0 && other.order > 0 {
            return Err(TensorError::Dimension(self.dim, other.dim));
        }
        let dim = self.dim.max(other.dim);
        let k = self.order;
        Ok(Tensor::from_fn(dim, k + other.order, |idx| {
            self.get(&idx[..k]).clone() * other.get(&idx[k..])
        }))
    }

    /// Covector from its components.
    pub fn covector(components: Vec<T>) -> Self {
        let n = components.len();
        Tensor::from_vec(n, 1, components)
    }

    /// Order-2 tensor from rows.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        let data: Vec<T> = rows.into_iter().flat_map(|r| {
            assert_eq!(r.len(), n, "square matrix");
            r
        }).collect();
        Tensor::from_vec(n, 2, data)
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        assert_eq!(self.order, 2);
        self.data.chunks(self.dim).map(|c| c.to_vec()).collect()
    }

    /// Plain trace over slots `a < b` (no metric).
    pub fn trace(&self, a: usize, b: usize) -> Result<Tensor<T>, TensorError> {
        for s in [a, b] {
            if s >= self.order {
                return Err(TensorError::Slot {
                    slot: s,
                    order: self.order,
                });
            }
        }
        let (a, b) = (a.min(b), a.max(b));
        let k = self.order - 2;
        let dim = self.dim;
        let f = |idx: &[usize]| {
            let mut full = Vec::with_capacity(k + 2);
            let mut acc = T::zero();
            for i in 0..dim {
                full.clear();
                let mut rest = idx.iter();
                for slot in 0..k + 2 {
                    if slot == a || slot == b {
                        full.push(i);
                    } else {
                        full.push(*rest.next().unwrap());
                    }
                }
                acc = acc + self.get(&full);
            }
            acc
        };
        if k == 0 {
            let mut t = Tensor::scalar(f(&[]));
            t.dim = dim;
            return Ok(t);
        }
        Ok(Tensor::from_fn(dim, k, f))
    }

    /// Contracts slot `slot` with the first index of `m` (a mixed tensor
    /// `m[l][i]`), placing the result in the same slot:
    /// `T'(.., i, ..) = Σ_l m[l][i] T(.., l, ..)`.
    pub fn transform_slot(&self, slot: usize, m: &Tensor<T>) -> Result<Tensor<T>, TensorError> {
        if slot >= self.order {
            return Err(TensorError::Slot {
                slot,
                order: self.order,
            });
        }
        if m.order != 2 {
            return Err(TensorError::Order {
                expected: 2,
                found: m.order,
            });
        }
        if m.dim != self.dim {
            return Err(TensorError::Dimension(self.dim, m.dim));
        }
        Ok(Tensor::from_fn(self.dim, self.order, |idx| {
            let mut j = idx.to_vec();
            let mut acc = T::zero();
            for l in 0..self.dim {
                let c = m.at2(l, idx[slot]);
                if c.is_zero() {
                    continue;
                }
                j[slot] = l;
                acc = acc + c.clone() * self.get(&j);
            }
            acc
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_int(n)
    }

    #[test]
    fn tuples_are_lexicographic() {
        let all: Vec<_> = tuples(2, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(flat_index(3, &[2, 1]), 7);
        assert_eq!(subscript(&[0, 1, 0, 1]), "1212");
    }

    #[test]
    fn symmetric_fill_matches_full() {
        let f = |i: &[usize]| {
            let (a, b, c, d) = (i[0] as i64, i[1] as i64, i[2] as i64, i[3] as i64);
            // (a-b)(c-d) + (c-d)(a-b) has Riemann-type skew pairs and pair symmetry
            q((a - b) * (c - d) * (a + b + c + d + 1))
        };
        let full = Tensor::from_fn(3, 4, f);
        let sym = Tensor::from_fn_sym(3, 4, Symmetry::riemann(0), f);
        assert_eq!(full.data(), sym.data());
    }

    #[test]
    fn trace_and_outer() {
        let a = Tensor::covector(vec![q(1), q(2), q(3)]);
        let b = Tensor::covector(vec![q(4), q(5), q(6)]);
        let ab = a.outer(&b).unwrap();
        assert_eq!(ab.at2(1, 2), &q(12));
        let tr = ab.trace(0, 1).unwrap();
        assert_eq!(tr.data(), &[q(32)]);
    }

    #[test]
    fn floats_work_too() {
        let a: Tensor<f64> = Tensor::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let b = a.scale(&0.5).add(&a).unwrap();
        assert_eq!(b.at2(1, 1), &6.0);
    }
}
