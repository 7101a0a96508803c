//! Small dense linear algebra over any [`Scalar`].

use crate::scalar::Scalar;

pub type Matrix<T> = Vec<Vec<T>>;

/// Determinant by cofactor expansion along the sparsest row. Division
/// free, so symbolic entries never grow denominators.
pub fn det<T: Scalar>(m: &[Vec<T>]) -> T {
    let n = m.len();
    match n {
        0 => return T::one(),
        1 => return m[0][0].clone(),
        2 => return m[0][0].clone() * &m[1][1] - m[0][1].clone() * &m[1][0],
        _ => {}
    }
    let row = (0..n)
        .max_by_key(|&i| (m[i].iter().filter(|x| x.is_zero()).count(), std::cmp::Reverse(i)))
        .unwrap();
    let mut acc = T::zero();
    for col in 0..n {
        if m[row][col].is_zero() {
            continue;
        }
        let minor = minor(m, &except(n, row), &except(n, col));
        let term = m[row][col].clone() * det(&minor);
        if (row + col) % 2 == 0 {
            acc = acc + term;
        } else {
            acc = acc - term;
        }
    }
    acc
}

fn except(n: usize, skip: usize) -> Vec<usize> {
    (0..n).filter(|&i| i != skip).collect()
}

/// Submatrix on the given rows and columns.
pub fn minor<T: Scalar>(m: &[Vec<T>], rows: &[usize], cols: &[usize]) -> Matrix<T> {
    rows.iter()
        .map(|&r| cols.iter().map(|&c| m[r][c].clone()).collect())
        .collect()
}

/// Inverse via adjugate and determinant; `None` if singular.
pub fn inverse<T: Scalar>(m: &[Vec<T>]) -> Option<(Matrix<T>, T)> {
    let n = m.len();
    let d = det(m);
    if d.is_zero() {
        return None;
    }
    let mut inv = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = det(&minor(m, &except(n, j), &except(n, i)));
            let c = if (i + j) % 2 == 0 { c } else { -c };
            inv[i][j] = c.try_div(&d)?;
        }
    }
    Some((inv, d))
}

pub fn mat_mul<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> Matrix<T> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = T::zero();
                    for k in 0..inner {
                        if row[k].is_zero() || b[k][j].is_zero() {
                            continue;
                        }
                        acc = acc + row[k].clone() * &b[k][j];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn identity<T: Scalar>(n: usize) -> Matrix<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

/// Result of Gaussian elimination with exact zero tests.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<T> {
    /// Reduced row echelon form (only the first `rank` rows are nonzero).
    pub rref: Matrix<T>,
    /// Pivot column of each pivot row.
    pub pivot_cols: Vec<usize>,
    /// Original index of the row that supplied each pivot.
    pub pivot_rows: Vec<usize>,
}

impl<T> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

/// Reduced row echelon form. Pivots are taken in column order, each from
/// the first original row with a nonzero entry, so the result is
/// deterministic. Intended for exact scalars.
pub fn rref<T: Scalar>(m: &[Vec<T>]) -> Echelon<T> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Matrix<T> = m.to_vec();
    let mut origin: Vec<usize> = (0..rows).collect();
    let mut pivot_cols = Vec::new();
    let mut pivot_rows = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        origin.swap(r, p);
        let inv = T::one().try_div(&a[r][c]).expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = x.clone() * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - f.clone() * p;
                }
            }
        }
        pivot_cols.push(c);
        pivot_rows.push(origin[r]);
        r += 1;
    }
    Echelon {
        rref: a,
        pivot_cols,
        pivot_rows,
    }
}

pub fn rank<T: Scalar>(m: &[Vec<T>]) -> usize {
    rref(m).rank()
}

/// Basis of the right null space, one vector per free column, in the
/// reduced-echelon normalization (1 at its free column, 0 at the others).
pub fn null_space<T: Scalar>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, |r| r.len());
    let e = rref(m);
    (0..cols)
        .filter(|c| !e.pivot_cols.contains(c))
        .map(|free| {
            let mut v = vec![T::zero(); cols];
            v[free] = T::one();
            for (r, &pc) in e.pivot_cols.iter().enumerate() {
                v[pc] = -e.rref[r][free].clone();
            }
            v
        })
        .collect()
}

/// Characteristic polynomial `det(λI - M)` by Faddeev–LeVerrier,
/// coefficients from the constant term up.
pub fn charpoly<T: Scalar>(m: &[Vec<T>]) -> Vec<T> {
    let n = m.len();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut mk = identity::<T>(n);
    for k in 1..=n {
        let am = mat_mul(m, &mk);
        let tr = (0..n).fold(T::zero(), |acc, i| acc + &am[i][i]);
        let c = -(tr.try_div(&T::from_int(k as i64)).expect("k > 0"));
        coeffs[n - k] = c.clone();
        mk = am;
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] = row[i].clone() + &c;
        }
    }
    coeffs
}
