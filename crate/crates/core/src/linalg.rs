//! Small dense vectors and square matrices in `R^n`.
//!
//! Dimensions in this crate are tiny (typically 2 to 5), so everything is a
//! plain heap vector with row-major storage.

use std::ops::{Add, Deref, Index, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point of `R^n`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Vector<T>(Vec<T>);

impl<T: Scalar> Vector<T> {
    /// Builds a vector, requiring `n ≥ 2` and finite components.
    pub fn new(components: Vec<T>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::UnsupportedDimension(components.len()));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite vector component".into()));
        }
        Ok(Self(components))
    }

    /// Wraps components without validation.
    pub fn from_vec(components: Vec<T>) -> Self {
        Self(components)
    }

    pub fn from_slice(components: &[T]) -> Self {
        Self(components.to_vec())
    }

    pub fn from_f64(components: &[f64]) -> Self {
        Self(components.iter().map(|&c| T::of(c)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![T::zero(); n])
    }

    /// The `i`-th standard basis vector of `R^n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = T::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn norm(&self) -> T {
        norm(&self.0)
    }

    pub fn norm_sq(&self) -> T {
        norm_sq(&self.0)
    }

    pub fn scaled(&self, s: T) -> Self {
        Self(self.0.iter().map(|&c| c * s).collect())
    }

    /// Unit vector in the same direction; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let r = self.norm();
        (r > T::zero()).then(|| self.scaled(T::one() / r))
    }

    pub fn cast<U: Scalar>(&self) -> Vector<U> {
        Vector(self.0.iter().map(|c| U::of(c.to_f64_lossy())).collect())
    }
}

impl<T> Deref for Vector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> From<Vec<T>> for Vector<T> {
    fn from(v: Vec<T>) -> Self {
        Self(v)
    }
}

impl<T: Scalar> Add for &Vector<T> {
    type Output = Vector<T>;

    fn add(self, rhs: Self) -> Vector<T> {
        Vector(add(&self.0, &rhs.0))
    }
}

impl<T: Scalar> Sub for &Vector<T> {
    type Output = Vector<T>;

    fn sub(self, rhs: Self) -> Vector<T> {
        Vector(sub(&self.0, &rhs.0))
    }
}

impl<T: Scalar> Neg for &Vector<T> {
    type Output = Vector<T>;

    fn neg(self) -> Vector<T> {
        Vector(self.0.iter().map(|&c| -c).collect())
    }
}

impl<T: Scalar> Mul<T> for &Vector<T> {
    type Output = Vector<T>;

    fn mul(self, s: T) -> Vector<T> {
        self.scaled(s)
    }
}

#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn norm_sq<T: Scalar>(a: &[T]) -> T {
    dot(a, a)
}

#[inline]
pub fn norm<T: Scalar>(a: &[T]) -> T {
    norm_sq(a).sqrt()
}

#[inline]
pub fn dist_sq<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let d = x - y;
        acc + d * d
    })
}

#[inline]
pub fn dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    dist_sq(a, b).sqrt()
}

pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn max_abs_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()))
}

pub(crate) fn check_dim<T>(x: &[T], n: usize) -> Result<()> {
    if x.len() == n {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: n, got: x.len() })
    }
}

/// Square `n × n` matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn diagonal(d: &[T]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (i, &v) in d.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            check_dim(row, n)?;
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from a closure `(row, col) -> entry`.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Rotation by `theta` in the coordinate plane `(i, j)`.
    pub fn givens(n: usize, i: usize, j: usize, theta: T) -> Result<Self> {
        if i >= n || j >= n || i == j {
            return Err(Error::InvalidParameter(format!(
                "Givens plane ({i},{j}) invalid in dimension {n}"
            )));
        }
        let mut m = Self::identity(n);
        let (s, c) = theta.sin_cos();
        m.set(i, i, c);
        m.set(j, j, c);
        m.set(i, j, -s);
        m.set(j, i, s);
        Ok(m)
    }

    /// Product of Givens rotations applied in list order (left-most applied first).
    pub fn from_givens(n: usize, planes: &[(usize, usize, T)]) -> Result<Self> {
        planes.iter().try_fold(Self::identity(n), |acc, &(i, j, t)| {
            Ok(Self::givens(n, i, j, t)?.matmul(&acc))
        })
    }

    /// Householder reflection swapping the unit vectors `e_1` and `target`.
    ///
    /// `target` is normalized first; the identity is returned when it already equals `e_1`.
    pub fn reflector_from_e1(target: &[T]) -> Result<Self> {
        let n = target.len();
        let r = norm(target);
        if r <= T::zero() {
            return Err(Error::InvalidParameter("zero direction".into()));
        }
        let mut v: Vec<T> = target.iter().map(|&c| -c / r).collect();
        v[0] += T::one();
        let vv = norm_sq(&v);
        if vv <= T::of(1e-30) {
            return Ok(Self::identity(n));
        }
        let two = T::two();
        Ok(Self::from_fn(n, |i, j| {
            let delta = if i == j { T::one() } else { T::zero() };
            delta - two * v[i] * v[j] / vv
        }))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vector<T> {
        Vector::from_vec((0..self.n).map(|i| self.get(i, j)).collect())
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn mul_vec(&self, x: &[T]) -> Vector<T> {
        Vector::from_vec((0..self.n).map(|i| dot(self.row(i), x)).collect())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| (0..n).fold(T::zero(), |acc, k| acc + self.get(i, k) * rhs.get(k, j)))
    }

    pub fn scaled(&self, s: T) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self { n: self.n, data: sub(&self.data, &rhs.data) }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> T {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].abs().partial_cmp(&a[s * n + col].abs()).unwrap())
                .unwrap();
            if a[pivot * n + col] == T::zero() {
                return T::zero();
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                for k in col..n {
                    let v = a[col * n + k];
                    a[r * n + k] -= f * v;
                }
            }
        }
        det
    }

    /// Max entrywise deviation of `A·Aᵗ` from the identity.
    pub fn orthogonality_defect(&self) -> T {
        self.matmul(&self.transpose()).sub(&Self::identity(self.n)).max_abs()
    }

    pub fn is_orthogonal(&self, tol: T) -> bool {
        self.orthogonality_defect() <= tol
    }

    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix { n: self.n, data: self.data.iter().map(|v| U::of(v.to_f64_lossy())).collect() }
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}
