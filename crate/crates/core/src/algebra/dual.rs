use std::fmt;

use super::gaussian::GaussianRational;
use super::scalar::Scalar;

/// Dual number `value + deriv*eps` with `eps^2 = 0`, over Q(i).
///
/// Evaluating a polynomial map on duals seeded with `deriv = 1` in one
/// coordinate yields the exact partial derivative in that coordinate.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Dual {
    pub value: GaussianRational,
    pub deriv: GaussianRational,
}

impl Dual {
    pub fn new(value: GaussianRational, deriv: GaussianRational) -> Self {
        Dual { value, deriv }
    }

    pub fn constant(value: GaussianRational) -> Self {
        Dual { value, deriv: GaussianRational::zero() }
    }

    pub fn variable(value: GaussianRational) -> Self {
        Dual { value, deriv: GaussianRational::one() }
    }
}

impl fmt::Display for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})+({})eps", self.value, self.deriv)
    }
}

impl fmt::Debug for Dual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Scalar for Dual {
    fn zero() -> Self {
        Dual::default()
    }
    fn one() -> Self {
        Dual::constant(GaussianRational::one())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero() && self.deriv.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        Dual { value: &self.value + &rhs.value, deriv: &self.deriv + &rhs.deriv }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Dual { value: &self.value - &rhs.value, deriv: &self.deriv - &rhs.deriv }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let value = &self.value * &rhs.value;
        let deriv = match (self.deriv.is_zero(), rhs.deriv.is_zero()) {
            (true, true) => GaussianRational::zero(),
            (true, false) => &self.value * &rhs.deriv,
            (false, true) => &self.deriv * &rhs.value,
            (false, false) => &(&self.value * &rhs.deriv) + &(&self.deriv * &rhs.value),
        };
        Dual { value, deriv }
    }
    fn neg(&self) -> Self {
        Dual { value: -&self.value, deriv: -&self.deriv }
    }
    fn from_constant(c: &GaussianRational) -> Self {
        Dual::constant(c.clone())
    }
    fn scale(&self, c: &GaussianRational) -> Self {
        Dual { value: &self.value * c, deriv: &self.deriv * c }
    }
    fn unit_inverse(&self) -> Option<Self> {
        // (a + b eps)^-1 = 1/a - b/a^2 eps
        let inv = self.value.inv()?;
        let deriv = -&(&self.deriv * &(&inv * &inv));
        Some(Dual { value: inv, deriv })
    }
    fn as_constant(&self) -> Option<GaussianRational> {
        if self.deriv.is_zero() {
            Some(self.value.clone())
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_and_inverse() {
        let x = Dual::variable(GaussianRational::from_integer(3));
        let sq = x.mul(&x);
        assert_eq!(sq.deriv, GaussianRational::from_integer(6));
        let inv = x.unit_inverse().unwrap();
        assert_eq!(inv.deriv, GaussianRational::from_ratio(-1, 9));
        assert!(x.mul(&inv).is_one());
    }
}
