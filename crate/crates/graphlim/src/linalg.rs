//! Dense matrices over a generic scalar, exact PSD testing by symmetric
//! elimination, and a Jacobi eigensolver for the float path.

use num_traits::Float;

use crate::num::Scalar;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, other.rows);
        Mat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = S::zero();
            for k in 0..self.cols {
                if !self.get(i, k).is_zero() && !other.get(k, j).is_zero() {
                    acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
                }
            }
            acc
        })
    }

    pub fn transpose(&self) -> Mat<S> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Exact positive-semidefiniteness test by congruence elimination with
/// diagonal pivoting. A symmetric matrix is PSD iff the elimination never
/// meets a negative diagonal pivot and every zero-diagonal stage has a zero
/// active block.
pub fn is_psd_exact<S: Scalar>(a: &Mat<S>) -> bool {
    assert!(a.is_symmetric(), "PSD test needs a symmetric matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut active: Vec<usize> = (0..n).collect();

    while !active.is_empty() {
        if active.iter().any(|&i| *m.get(i, i) < S::zero()) {
            return false;
        }
        let pivot = active.iter().copied().find(|&i| *m.get(i, i) > S::zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                // all active diagonals are zero: PSD iff the block vanishes
                return active
                    .iter()
                    .all(|&i| active.iter().all(|&j| m.get(i, j).is_zero()));
            }
        };
        let d = m.get(p, p).clone();
        active.retain(|&i| i != p);
        for ii in 0..active.len() {
            let i = active[ii];
            let li = m.get(p, i).clone() / d.clone();
            if li.is_zero() {
                continue;
            }
            for jj in ii..active.len() {
                let j = active[jj];
                let v = m.get(i, j).clone() - li.clone() * m.get(p, j).clone();
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
    }
    true
}

/// Eigendecomposition of a symmetric float matrix by cyclic Jacobi
/// rotations. Returns `(eigenvalues, eigenvectors)` with eigenvectors in
/// columns, sorted by descending eigenvalue.
pub fn jacobi_eigh<F: Float + Scalar>(a: &Mat<F>) -> (Vec<F>, Mat<F>) {
    jacobi_core(a.clone(), Mat::identity(a.rows()))
}

/// Jacobi eigendecomposition warm-started with an orthogonal basis close to
/// the eigenbasis (for example from a previous, nearby matrix). The input is
/// rotated into that basis first, leaving it near-diagonal.
pub fn jacobi_eigh_warm<F: Float + Scalar>(a: &Mat<F>, warm: &Mat<F>) -> (Vec<F>, Mat<F>) {
    let rotated = warm.transpose().mul(&a.mul(warm));
    // symmetrize away the roundoff of the two products
    let n = rotated.rows();
    let sym = Mat::from_fn(n, n, |i, j| {
        (*rotated.get(i, j) + *rotated.get(j, i)) / F::from(2.0).unwrap()
    });
    jacobi_core(sym, warm.clone())
}

fn jacobi_core<F: Float + Scalar>(mut m: Mat<F>, mut v: Mat<F>) -> (Vec<F>, Mat<F>) {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let eps = F::epsilon() * F::from(n * n).unwrap();

    for _sweep in 0..100 {
        let mut off = F::zero();
        let mut scale = F::zero();
        for i in 0..n {
            scale = scale + m.get(i, i).abs();
            for j in (i + 1)..n {
                off = off + m.get(i, j).abs();
            }
        }
        if off <= eps * (scale + F::one()) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = *m.get(p, q);
                if apq.abs() <= F::epsilon() * (scale + F::one()) {
                    continue;
                }
                let app = *m.get(p, p);
                let aqq = *m.get(q, q);
                let theta = (aqq - app) / (F::from(2.0).unwrap() * apq);
                let t = {
                    let s = if theta >= F::zero() {
                        F::one()
                    } else {
                        -F::one()
                    };
                    s / (theta.abs() + (theta * theta + F::one()).sqrt())
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = *m.get(k, p);
                    let mkq = *m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = *m.get(p, k);
                    let mqk = *m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let vkp = *v.get(k, p);
                    let vkq = *v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m.get(j, j)
            .partial_cmp(m.get(i, i))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigvals: Vec<F> = order.iter().map(|&i| *m.get(i, i)).collect();
    let eigvecs = Mat::from_fn(n, n, |i, j| *v.get(i, order[j]));
    (eigvals, eigvecs)
}

/// Nearest PSD matrix in Frobenius norm: clip negative eigenvalues.
pub fn psd_project(a: &Mat<f64>) -> Mat<f64> {
    psd_project_warm(a, None).0
}

/// PSD projection that also returns the sorted spectrum and eigenbasis of
/// the input, optionally warm-started with a nearby eigenbasis.
pub fn psd_project_warm(
    a: &Mat<f64>,
    warm: Option<&Mat<f64>>,
) -> (Mat<f64>, Vec<f64>, Mat<f64>) {
    let n = a.rows();
    let (vals, vecs) = match warm {
        Some(w) => jacobi_eigh_warm(a, w),
        None => jacobi_eigh(a),
    };
    let mut out = Mat::zeros(n, n);
    for k in 0..n {
        if vals[k] <= 0.0 {
            continue;
        }
        for i in 0..n {
            let vi = vals[k] * *vecs.get(i, k);
            for j in 0..n {
                let cur = *out.get(i, j);
                out.set(i, j, cur + vi * *vecs.get(j, k));
            }
        }
    }
    (out, vals, vecs)
}

/// Solve a small dense linear system by Gaussian elimination with partial
/// pivoting. Returns `None` for a numerically singular matrix.
pub fn solve_dense(a: &Mat<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let n = a.rows();
    assert_eq!(a.cols(), n);
    assert_eq!(b.len(), n);
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m.get(i, col)
                    .abs()
                    .partial_cmp(&m.get(j, col).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if m.get(pivot, col).abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                let tmp = *m.get(col, j);
                m.set(col, j, *m.get(pivot, j));
                m.set(pivot, j, tmp);
            }
            rhs.swap(col, pivot);
        }
        let d = *m.get(col, col);
        for i in (col + 1)..n {
            let factor = *m.get(i, col) / d;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                let v = *m.get(i, j) - factor * *m.get(col, j);
                m.set(i, j, v);
            }
            rhs[i] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in (i + 1)..n {
            acc -= *m.get(i, j) * x[j];
        }
        x[i] = acc / *m.get(i, i);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat_of;
    use crate::Rat;
    use num_traits::Zero;

    fn rat_mat(entries: &[&[i64]]) -> Mat<Rat> {
        Mat::from_fn(entries.len(), entries[0].len(), |i, j| {
            rat_of(entries[i][j], 1)
        })
    }

    #[test]
    fn psd_exact_basic_cases() {
        assert!(is_psd_exact(&rat_mat(&[&[2, 1], &[1, 2]])));
        assert!(is_psd_exact(&rat_mat(&[&[1, 1], &[1, 1]])));
        assert!(!is_psd_exact(&rat_mat(&[&[1, 2], &[2, 1]])));
        assert!(!is_psd_exact(&rat_mat(&[&[0, 1], &[1, 0]])));
        assert!(is_psd_exact(&rat_mat(&[&[0, 0], &[0, 0]])));
        assert!(!is_psd_exact(&rat_mat(&[&[-1]])));
        assert!(is_psd_exact(&Mat::<Rat>::zeros(0, 0)));
        // PSD with a zero leading pivot
        assert!(is_psd_exact(&rat_mat(&[&[0, 0, 0], &[0, 1, 1], &[0, 1, 2]])));
    }

    /// Oracle: Gram matrices are PSD, and stay non-PSD after subtracting a
    /// large multiple of the identity.
    #[test]
    fn psd_exact_gram_oracle() {
        let g = Mat::from_fn(4, 3, |i, j| rat_of((i * 3 + j) as i64 % 5 - 2, 3));
        let gram = g.mul(&g.transpose());
        assert!(is_psd_exact(&gram));
        let shifted = Mat::from_fn(4, 4, |i, j| {
            gram.get(i, j).clone() - if i == j { rat_of(10, 1) } else { Rat::zero() }
        });
        assert!(!is_psd_exact(&shifted));
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // [[2,1],[1,2]] has eigenvalues 3 and 1
        let a = Mat::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 1.0 });
        let (vals, vecs) = jacobi_eigh(&a);
        assert!((vals[0] - 3.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        // reconstruct
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = 0.0;
                for k in 0..2 {
                    acc += vals[k] * vecs.get(i, k) * vecs.get(j, k);
                }
                assert!((acc - *a.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn solve_dense_small_systems() {
        // [[2,1],[1,3]] x = [5,10] -> x = [1, 3]
        let a = Mat::from_fn(2, 2, |i, j| [[2.0, 1.0], [1.0, 3.0]][i][j]);
        let x = solve_dense(&a, &[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12);
        let singular = Mat::from_fn(2, 2, |_, _| 1.0);
        assert!(solve_dense(&singular, &[1.0, 2.0]).is_none());
    }

    #[test]
    fn psd_project_fixes_negative_directions() {
        let a = Mat::from_fn(3, 3, |i, j| if i == j { [1.0, -2.0, 0.5][i] } else { 0.1 });
        let p = psd_project(&a);
        let (vals, _) = jacobi_eigh(&p);
        assert!(vals.iter().all(|&l| l >= -1e-12));
        // projection of an already-PSD matrix is the identity map
        let p2 = psd_project(&p);
        for i in 0..3 {
            for j in 0..3 {
                assert!((p.get(i, j) - p2.get(i, j)).abs() < 1e-9);
            }
        }
    }
}
