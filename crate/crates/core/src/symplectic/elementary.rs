use std::fmt;

use crate::algebra::{Matrix, Scalar, ShapeTag};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    /// Sign of the 1-based chain position `k`: odd positions are `Minus`.
    pub fn at_position(k: usize) -> Sign {
        if k % 2 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "minus",
            Sign::Plus => "plus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Lower,
    Upper,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Lower => Side::Upper,
            Side::Upper => Side::Lower,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lower => "lower",
            Side::Upper => "upper",
        })
    }
}

/// `M^-(A,Z) = [[I,0],[Z,I]] * diag(A^{-T}, A)` or
/// `M^+(A,Z) = [[I,Z],[0,I]] * diag(A^{-1}, A^T)`, with `A` upper
/// unitriangular and `Z` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementarySymplectic<T> {
    sign: Sign,
    a: Matrix<T>,
    z: Matrix<T>,
}

impl<T: Scalar> ElementarySymplectic<T> {
    pub fn new(sign: Sign, a: Matrix<T>, z: Matrix<T>) -> Result<Self> {
        if !a.is_square() || a.rows() != z.rows() || !z.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "A is {}x{}, Z is {}x{}",
                a.rows(),
                a.cols(),
                z.rows(),
                z.cols()
            )));
        }
        if !a.is_unitriangular(true) {
            return Err(Error::ShapeViolation("upper unitriangular (A)".into()));
        }
        if !z.is_symmetric() {
            return Err(Error::ShapeViolation("symmetric (Z)".into()));
        }
        Ok(ElementarySymplectic { sign, a, z })
    }

    pub fn identity(sign: Sign, n: usize) -> Self {
        ElementarySymplectic { sign, a: Matrix::identity(n), z: Matrix::zeros(n, n) }
    }

    /// Entrywise ring change, e.g. evaluation at a point.
    pub fn try_map<U: Scalar>(&self, f: impl Fn(&T) -> Result<U>) -> Result<ElementarySymplectic<U>> {
        ElementarySymplectic::new(self.sign, self.a.try_map(&f)?, self.z.try_map(&f)?)
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn a(&self) -> &Matrix<T> {
        &self.a
    }

    pub fn z(&self) -> &Matrix<T> {
        &self.z
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn a_inverse(&self) -> Matrix<T> {
        self.a.invert_triangular(ShapeTag::UpperUnitriangular).expect("A is unitriangular")
    }

    /// Upper-left block of the block-diagonal part: `A^{-T}` for `Minus`,
    /// `A^{-1}` for `Plus`.
    pub fn diagonal_block(&self) -> Matrix<T> {
        match self.sign {
            Sign::Minus => self.a_inverse().transpose(),
            Sign::Plus => self.a_inverse(),
        }
    }

    pub fn materialize(&self) -> Matrix<T> {
        let inv = self.a_inverse();
        let zero = Matrix::zeros(self.n(), self.n());
        match self.sign {
            Sign::Minus => {
                let inv_t = inv.transpose();
                let lower = self.z.mul(&inv_t).expect("square");
                Matrix::from_blocks(&inv_t, &zero, &lower, &self.a).expect("square blocks")
            }
            Sign::Plus => {
                let a_t = self.a.transpose();
                let upper = self.z.mul(&a_t).expect("square");
                Matrix::from_blocks(&inv, &upper, &zero, &a_t).expect("square blocks")
            }
        }
    }
}

/// `[[I,0],[G,I]]` (lower) or `[[I,G],[0,I]]` (upper) with `G` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardFactor<T> {
    side: Side,
    g: Matrix<T>,
}

impl<T: Scalar> StandardFactor<T> {
    pub fn new(side: Side, g: Matrix<T>) -> Result<Self> {
        if !g.is_symmetric() {
            return Err(Error::ShapeViolation("symmetric (G)".into()));
        }
        Ok(StandardFactor { side, g })
    }

    pub fn try_map<U: Scalar>(&self, f: impl Fn(&T) -> Result<U>) -> Result<StandardFactor<U>> {
        StandardFactor::new(self.side, self.g.try_map(f)?)
    }

    pub fn lower(g: Matrix<T>) -> Result<Self> {
        Self::new(Side::Lower, g)
    }

    pub fn upper(g: Matrix<T>) -> Result<Self> {
        Self::new(Side::Upper, g)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn g(&self) -> &Matrix<T> {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.rows()
    }

    pub fn materialize(&self) -> Matrix<T> {
        let n = self.n();
        let (i, zero) = (Matrix::identity(n), Matrix::zeros(n, n));
        match self.side {
            Side::Lower => Matrix::from_blocks(&i, &zero, &self.g, &i),
            Side::Upper => Matrix::from_blocks(&i, &self.g, &zero, &i),
        }
        .expect("square blocks")
    }

    /// `m * self` without forming the factor: one block column of `m` is
    /// updated by an `n x n` product.
    pub fn apply_right(&self, m: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.n();
        if m.cols() != 2 * n {
            return Err(Error::DimensionMismatch(format!("{} columns against a {}x{} factor", m.cols(), 2 * n, 2 * n)));
        }
        let rows = m.rows();
        let (src, dst) = match self.side {
            Side::Lower => (n, 0),
            Side::Upper => (0, n),
        };
        let update = m.block(0, src, rows, n).mul(&self.g)?;
        let mut out = m.clone();
        for i in 0..rows {
            for j in 0..n {
                let v = out.get(i, dst + j).add(update.get(i, j));
                out.set(i, dst + j, v);
            }
        }
        Ok(out)
    }
}
