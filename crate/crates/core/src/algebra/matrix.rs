use std::fmt;
use std::ops::{Index, IndexMut};

use super::gaussian::GaussianRational;
use super::poly::MultiPoly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Structural shape claimed for a square matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeTag {
    General,
    UpperUnitriangular,
    LowerUnitriangular,
    Symmetric,
    Diagonal,
}

/// Dense row-major matrix over a [`Scalar`] ring.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience for tests and examples: integer entries.
    pub fn from_integers(rows: &[&[i64]]) -> Self {
        let data: Vec<Vec<T>> = rows.iter().map(|r| r.iter().map(|&v| T::from_integer(v)).collect()).collect();
        Self::from_rows(data).expect("ragged integer rows")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Scalar>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let a_is_one = a.is_one();
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    let prod = if a_is_one { b.clone() } else { a.mul(b) };
                    out.data[idx] = out.data[idx].add(&prod);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &Matrix<T>, what: &str, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot {} {}x{} and {}x{}",
                what, self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Result<Self> {
        self.zip_with(rhs, "add", |a, b| a.add(b))
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Result<Self> {
        self.zip_with(rhs, "subtract", |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|v| v.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map(|v| v.scale(c))
    }

    /// The `h x w` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of range");
        Self::from_fn(h, w, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// `[[a, b], [c, d]]` assembled from four blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("incompatible block shapes".into()));
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        Ok(Self::from_fn(rows, cols, |i, j| {
            let (top, left) = (i < a.rows, j < a.cols);
            match (top, left) {
                (true, true) => a.get(i, j).clone(),
                (true, false) => b.get(i, j - a.cols).clone(),
                (false, true) => c.get(i - a.rows, j).clone(),
                (false, false) => d.get(i - a.rows, j - a.cols).clone(),
            }
        }))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Triangular (not necessarily unit) in the given orientation.
    pub fn is_triangular(&self, upper: bool) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let outside = if upper { i > j } else { i < j };
                    !outside || self.get(i, j).is_zero()
                })
            })
    }

    pub fn is_unitriangular(&self, upper: bool) -> bool {
        self.is_triangular(upper) && (0..self.rows).all(|i| self.get(i, i).is_one())
    }

    /// Checks the shape predicate a [`ShapeTag`] claims.
    pub fn has_shape(&self, tag: ShapeTag) -> bool {
        match tag {
            ShapeTag::General => true,
            ShapeTag::UpperUnitriangular => self.is_unitriangular(true),
            ShapeTag::LowerUnitriangular => self.is_unitriangular(false),
            ShapeTag::Symmetric => self.is_symmetric(),
            ShapeTag::Diagonal => self.is_diagonal(),
        }
    }

    /// Exact inverse of a triangular matrix whose diagonal entries are units.
    ///
    /// Unitriangular input needs no division at all, so polynomial entries
    /// stay polynomial.
    pub fn invert_triangular(&self, tag: ShapeTag) -> Result<Self> {
        let upper = match tag {
            ShapeTag::UpperUnitriangular | ShapeTag::Diagonal => true,
            ShapeTag::LowerUnitriangular => false,
            ShapeTag::General | ShapeTag::Symmetric => {
                return Err(Error::ShapeViolation("triangular (tag must name a triangular shape)".into()))
            }
        };
        if !self.has_shape(tag) {
            return Err(Error::ShapeViolation(format!("{:?}", tag)));
        }
        if !upper {
            return Ok(self.transpose().invert_upper()?.transpose());
        }
        self.invert_upper()
    }

    /// Inverse of an upper triangular matrix with unit diagonal entries.
    fn invert_upper(&self) -> Result<Self> {
        let n = self.rows;
        let mut diag_inv = Vec::with_capacity(n);
        for i in 0..n {
            let d = self.get(i, i);
            if d.is_one() {
                diag_inv.push(T::one());
                continue;
            }
            let inv = d.unit_inverse().ok_or_else(|| Error::NonUnitDiagonal { index: i + 1, value: d.to_string() })?;
            diag_inv.push(inv);
        }
        let mut x = Self::zeros(n, n);
        for j in 0..n {
            x.set(j, j, diag_inv[j].clone());
            for i in (0..j).rev() {
                let mut acc = T::zero();
                for m in i + 1..=j {
                    let a = self.get(i, m);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(x.get(m, j)));
                }
                let v = if diag_inv[i].is_one() { acc.neg() } else { acc.mul(&diag_inv[i]).neg() };
                x.set(i, j, v);
            }
        }
        Ok(x)
    }

    /// Product of a sequence of equally sized square matrices; identity of
    /// size `n` when the sequence is empty.
    pub fn product<'a, I: IntoIterator<Item = &'a Matrix<T>>>(n: usize, factors: I) -> Result<Self> {
        let mut acc = Self::identity(n);
        for f in factors {
            acc = acc.mul(f)?;
        }
        Ok(acc)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols].iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols].iter().map(|v| format!("{:?}", v)).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix<MultiPoly> {
    pub fn evaluate(&self, point: &[GaussianRational]) -> Result<Matrix<GaussianRational>> {
        self.try_map(|p| p.evaluate(point))
    }

    pub fn from_constants(m: &Matrix<GaussianRational>) -> Self {
        m.map(|c| MultiPoly::constant(c.clone()))
    }

    /// The constant matrix, if no entry involves a variable.
    pub fn to_constants(&self) -> Option<Matrix<GaussianRational>> {
        let data = self.data.iter().map(|p| p.constant_value()).collect::<Option<Vec<_>>>()?;
        Some(Matrix { rows: self.rows, cols: self.cols, data })
    }
}

impl Matrix<GaussianRational> {
    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&factor * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Rank by exact Gaussian elimination over Q(i).
    pub fn exact_rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : self * v = 0}`, one vector per
    /// free column.
    pub fn nullspace(&self) -> Vec<Vec<GaussianRational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![GaussianRational::zero(); self.cols];
                v[f] = GaussianRational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<GaussianRational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = GaussianRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(GaussianRational::zero());
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c) * &inv;
                for j in c..n {
                    let v = m.get(i, j) - &(&factor * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// General inverse over Q(i), `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                GaussianRational::one()
            } else {
                GaussianRational::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<GaussianRational>;
    type P = Matrix<MultiPoly>;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(i)
    }

    #[test]
    fn mul_examples() {
        let i2 = M::identity(2);
        assert_eq!(i2.mul(&i2).unwrap(), i2);
        let omega = M::from_integers(&[&[0, 1], &[-1, 0]]);
        assert_eq!(omega.mul(&omega).unwrap(), M::from_integers(&[&[-1, 0], &[0, -1]]));

        let a = P::from_rows(vec![vec![MultiPoly::one(), x(0)], vec![MultiPoly::zero(), MultiPoly::one()]]).unwrap();
        let b = P::from_rows(vec![vec![MultiPoly::one(), x(1)], vec![MultiPoly::zero(), MultiPoly::one()]]).unwrap();
        let expect =
            P::from_rows(vec![vec![MultiPoly::one(), x(0).add(&x(1))], vec![MultiPoly::zero(), MultiPoly::one()]])
                .unwrap();
        assert_eq!(a.mul(&b).unwrap(), expect);
    }

    #[test]
    fn mul_dimension_mismatch() {
        let a = M::zeros(2, 3);
        assert!(matches!(a.mul(&a), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn invert_triangular_examples() {
        let a = M::from_integers(&[&[1, 5], &[0, 1]]);
        assert_eq!(a.invert_triangular(ShapeTag::UpperUnitriangular).unwrap(), M::from_integers(&[&[1, -5], &[0, 1]]));

        let d = M::from_integers(&[&[1, 0], &[0, 2]]);
        let expect = M::diagonal(&[GaussianRational::one(), GaussianRational::from_ratio(1, 2)]);
        assert_eq!(d.invert_triangular(ShapeTag::Diagonal).unwrap(), expect);

        let p = P::from_rows(vec![vec![MultiPoly::one(), x(0)], vec![MultiPoly::zero(), MultiPoly::one()]]).unwrap();
        let pinv = p.invert_triangular(ShapeTag::UpperUnitriangular).unwrap();
        assert_eq!(pinv.get(0, 1), &x(0).neg());

        let low = M::from_integers(&[&[1, 0, 0], &[2, 1, 0], &[3, 4, 1]]);
        let inv = low.invert_triangular(ShapeTag::LowerUnitriangular).unwrap();
        assert!(inv.mul(&low).unwrap().is_identity());
    }

    #[test]
    fn invert_triangular_rejects_non_units() {
        let p = P::from_rows(vec![vec![x(0), MultiPoly::zero()], vec![MultiPoly::zero(), MultiPoly::one()]]).unwrap();
        assert!(matches!(p.invert_triangular(ShapeTag::Diagonal), Err(Error::NonUnitDiagonal { .. })));
        let z = M::from_integers(&[&[0, 1], &[0, 1]]);
        assert!(z.invert_triangular(ShapeTag::UpperUnitriangular).is_err());
        assert!(z.invert_triangular(ShapeTag::General).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(M::identity(3).exact_rank(), 3);
        assert_eq!(M::zeros(2, 4).exact_rank(), 0);
        assert_eq!(M::from_integers(&[&[1, 2], &[2, 4]]).exact_rank(), 1);
    }

    #[test]
    fn predicates() {
        assert!(M::from_integers(&[&[1, 2], &[2, 3]]).is_symmetric());
        assert!(M::from_integers(&[&[1, 7], &[0, 1]]).is_unitriangular(true));
        assert!(!M::from_integers(&[&[2, 0], &[0, 1]]).is_unitriangular(true));
        assert!(!M::from_integers(&[&[1, 7], &[0, 1]]).is_unitriangular(false));
    }

    #[test]
    fn nullspace_and_inverse() {
        let a = M::from_integers(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = M::new(3, 1, v).unwrap();
            assert!(a.mul(&col).unwrap().is_zero());
        }
        let b = M::from_integers(&[&[2, 1], &[7, 4]]);
        assert!(b.inverse().unwrap().mul(&b).unwrap().is_identity());
        assert!(M::from_integers(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(b.determinant().unwrap(), GaussianRational::one());
    }
}
