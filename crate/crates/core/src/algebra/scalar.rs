use std::fmt;

use super::gaussian::GaussianRational;

/// A commutative Q(i)-algebra used as matrix entries.
///
/// Implemented by [`GaussianRational`] (a field), [`MultiPoly`](super::MultiPoly)
/// and [`Dual`](super::Dual). Division is only ever by units, see
/// [`Scalar::unit_inverse`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_constant(c: &GaussianRational) -> Self;
    /// Multiplication by a constant of Q(i).
    fn scale(&self, c: &GaussianRational) -> Self;
    /// Inverse if `self` is a unit of the ring.
    fn unit_inverse(&self) -> Option<Self>;
    /// The value, if `self` is a constant of Q(i).
    fn as_constant(&self) -> Option<GaussianRational>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_integer(v: i64) -> Self {
        Self::from_constant(&GaussianRational::from_integer(v))
    }
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_constant(c: &GaussianRational) -> Self {
        c.clone()
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        self * c
    }
    fn unit_inverse(&self) -> Option<Self> {
        self.inv()
    }
    fn as_constant(&self) -> Option<GaussianRational> {
        Some(self.clone())
    }
    fn is_one(&self) -> bool {
        GaussianRational::is_one(self)
    }
}
