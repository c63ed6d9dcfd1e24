use std::fmt;

use crate::algebra::{GaussianRational, Matrix, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Upper,
    Lower,
}

/// Pairwise distinct, nonzero constants `lambda_1 .. lambda_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Spectrum {
    lambdas: Vec<GaussianRational>,
}

impl Spectrum {
    pub fn new(lambdas: Vec<GaussianRational>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidSpectrum("empty".into()));
        }
        for (i, l) in lambdas.iter().enumerate() {
            if l.is_zero() {
                return Err(Error::InvalidSpectrum(format!("entry {} is zero", i + 1)));
            }
            if let Some(j) = lambdas[..i].iter().position(|m| m == l) {
                return Err(Error::RepeatedEigenvalue { first: j + 1, second: i + 1 });
            }
        }
        Ok(Spectrum { lambdas })
    }

    /// `diag(1, 2, ..., n)`.
    pub fn standard(n: usize) -> Self {
        Spectrum { lambdas: (1..=n as i64).map(GaussianRational::from_integer).collect() }
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambdas(&self) -> &[GaussianRational] {
        &self.lambdas
    }

    pub fn inverse(&self) -> Spectrum {
        Spectrum { lambdas: self.lambdas.iter().map(|l| l.inv().expect("nonzero")).collect() }
    }

    pub fn matrix<T: Scalar>(&self) -> Matrix<T> {
        let entries: Vec<T> = self.lambdas.iter().map(T::from_constant).collect();
        Matrix::diagonal(&entries)
    }
}

impl fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.lambdas.iter()).finish()
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lambdas.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `A = K * Lambda * K^{-1}` with `K` unitriangular.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalizationResult<T> {
    pub k: Matrix<T>,
    pub lambda: Spectrum,
}

/// Diagonalizes a triangular matrix with constant, pairwise distinct
/// diagonal by a unitriangular matrix of the same orientation.
///
/// Column `j` of `K` solves `(A - lambda_j) k_j = 0` with `k_jj = 1`; the
/// entries are filled one off-diagonal at a time, each by a single division
/// by `lambda_j - lambda_i`.
pub fn diagonalize_triangular<T: Scalar>(a: &Matrix<T>, orientation: Orientation) -> Result<DiagonalizationResult<T>> {
    let upper = orientation == Orientation::Upper;
    if !a.is_triangular(upper) {
        let shape = if upper { "upper triangular" } else { "lower triangular" };
        return Err(Error::ShapeViolation(shape.into()));
    }
    let n = a.rows();
    let mut lambdas = Vec::with_capacity(n);
    for i in 0..n {
        lambdas.push(a.get(i, i).as_constant().ok_or(Error::NonConstantDiagonal { index: i + 1 })?);
    }
    let lambda = Spectrum::new(lambdas)?;
    let ls = lambda.lambdas();

    let mut k = Matrix::<T>::identity(n);
    for d in 1..n {
        for j in 0..n {
            // upper: entry (j-d, j); lower: entry (j+d, j)
            let i = if upper {
                match j.checked_sub(d) {
                    Some(i) => i,
                    None => continue,
                }
            } else if j + d < n {
                j + d
            } else {
                continue;
            };
            let inner = if upper { i + 1..j + 1 } else { j..i };
            let mut acc = T::zero();
            for m in inner {
                let aim = a.get(i, m);
                if aim.is_zero() || k.get(m, j).is_zero() {
                    continue;
                }
                acc = acc.add(&aim.mul(k.get(m, j)));
            }
            let denom = (&ls[j] - &ls[i]).inv().expect("distinct eigenvalues");
            k.set(i, j, acc.scale(&denom));
        }
    }
    Ok(DiagonalizationResult { k, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiPoly;

    type M = Matrix<GaussianRational>;

    #[test]
    fn examples() {
        let d = diagonalize_triangular(&M::from_integers(&[&[1, 0], &[0, 2]]), Orientation::Upper).unwrap();
        assert!(d.k.is_identity());
        let d = diagonalize_triangular(&M::from_integers(&[&[1, 5], &[0, 2]]), Orientation::Upper).unwrap();
        assert_eq!(d.k, M::from_integers(&[&[1, 5], &[0, 1]]));
    }

    #[test]
    fn polynomial_upper() {
        let x = MultiPoly::var(0);
        let c = |v| MultiPoly::from_integer(v);
        let a = Matrix::from_rows(vec![
            vec![c(1), x.clone(), c(0)],
            vec![c(0), c(2), x.clone()],
            vec![c(0), c(0), c(3)],
        ])
        .unwrap();
        let d = diagonalize_triangular(&a, Orientation::Upper).unwrap();
        assert!(d.k.is_unitriangular(true));
        let lam: Matrix<MultiPoly> = d.lambda.matrix();
        assert_eq!(a.mul(&d.k).unwrap(), d.k.mul(&lam).unwrap());
        assert_eq!(d.k.get(0, 2).to_string(), "1/2*x1^2");
    }

    #[test]
    fn lower_orientation() {
        let a = M::from_integers(&[&[3, 0, 0], &[1, 1, 0], &[4, -2, 2]]);
        let d = diagonalize_triangular(&a, Orientation::Lower).unwrap();
        assert!(d.k.is_unitriangular(false));
        let lam: M = d.lambda.matrix();
        assert_eq!(a.mul(&d.k).unwrap(), d.k.mul(&lam).unwrap());
    }

    #[test]
    fn errors() {
        let rep = M::from_integers(&[&[1, 1], &[0, 1]]);
        assert!(matches!(diagonalize_triangular(&rep, Orientation::Upper), Err(Error::RepeatedEigenvalue { .. })));
        let x = MultiPoly::var(0);
        let nc = Matrix::from_rows(vec![vec![x, MultiPoly::zero()], vec![MultiPoly::zero(), MultiPoly::one()]]).unwrap();
        assert!(matches!(diagonalize_triangular(&nc, Orientation::Upper), Err(Error::NonConstantDiagonal { index: 1 })));
        assert!(diagonalize_triangular(&M::from_integers(&[&[1, 0], &[1, 2]]), Orientation::Upper).is_err());
    }
}
