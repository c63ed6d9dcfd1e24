use crate::algebra::{Matrix, Scalar};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// `[[0, I], [-I, 0]]`
    Standard,
    /// `[[0, L], [-L, 0]]` with `L` the skew-identity.
    SkewDiag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    pub kind: FormKind,
    pub n: usize,
}

impl SymplecticForm {
    pub fn standard(n: usize) -> Self {
        SymplecticForm { kind: FormKind::Standard, n }
    }

    pub fn skew_diag(n: usize) -> Self {
        SymplecticForm { kind: FormKind::SkewDiag, n }
    }
}

/// `L_n`: ones on the anti-diagonal.
pub fn skew_identity<T: Scalar>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n, n, |i, j| if i + j + 1 == n { T::one() } else { T::zero() })
}

pub fn omega_matrix<T: Scalar>(form: SymplecticForm) -> Matrix<T> {
    let n = form.n;
    let top = match form.kind {
        FormKind::Standard => Matrix::identity(n),
        FormKind::SkewDiag => skew_identity(n),
    };
    let zero = Matrix::zeros(n, n);
    Matrix::from_blocks(&zero, &top, &top.neg(), &zero).expect("square blocks")
}

pub(crate) fn half_dim<T: Scalar>(m: &Matrix<T>) -> Result<usize> {
    if !m.is_square() || m.rows() % 2 != 0 {
        return Err(Error::NotEvenSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok(m.rows() / 2)
}

/// `H^T * Omega * H == Omega`, exactly. The half-dimension of `form` is
/// ignored in favour of the size of `h`.
pub fn is_symplectic<T: Scalar>(h: &Matrix<T>, form: FormKind) -> Result<bool> {
    let n = half_dim(h)?;
    let omega: Matrix<T> = omega_matrix(SymplecticForm { kind: form, n });
    let lhs = h.transpose().mul(&omega)?.mul(h)?;
    Ok(lhs == omega)
}

/// `C = diag(I_n, L_n)`, which satisfies `C^T Omega C = Omega~`.
pub fn basis_change<T: Scalar>(n: usize) -> Matrix<T> {
    let zero = Matrix::zeros(n, n);
    Matrix::from_blocks(&Matrix::identity(n), &zero, &zero, &skew_identity(n)).expect("square blocks")
}

/// `C^{-1} M C`. Carries `Omega`-symplectic matrices to `Omega~`-symplectic
/// ones; elementary matrices become unitriangular.
pub fn skew_basis_conjugate<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    let n = half_dim(m)?;
    // C is an involution, so C^{-1} = C; conjugation only permutes entries.
    let perm = |k: usize| if k < n { k } else { 3 * n - 1 - k };
    Ok(Matrix::from_fn(2 * n, 2 * n, |i, j| m.get(perm(i), perm(j)).clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GaussianRational;

    type M = Matrix<GaussianRational>;

    #[test]
    fn omega_examples() {
        let s: M = omega_matrix(SymplecticForm::standard(1));
        assert_eq!(s, M::from_integers(&[&[0, 1], &[-1, 0]]));
        let t: M = omega_matrix(SymplecticForm::skew_diag(1));
        assert_eq!(s, t);
        let t2: M = omega_matrix(SymplecticForm::skew_diag(2));
        assert_eq!(
            t2,
            M::from_integers(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[-1, 0, 0, 0]])
        );
    }

    #[test]
    fn symplectic_examples() {
        assert!(is_symplectic(&M::identity(4), FormKind::Standard).unwrap());
        let om: M = omega_matrix(SymplecticForm::standard(3));
        assert!(is_symplectic(&om, FormKind::Standard).unwrap());
        assert!(!is_symplectic(&M::from_integers(&[&[2, 0], &[0, 1]]), FormKind::Standard).unwrap());
        assert!(matches!(is_symplectic(&M::identity(3), FormKind::Standard), Err(Error::NotEvenSquare { .. })));
    }

    #[test]
    fn conjugation_matches_explicit_product() {
        for n in 1..=4 {
            let m = M::from_fn(2 * n, 2 * n, |i, j| GaussianRational::from_integer((i * 7 + j * 3) as i64 % 5));
            let c: M = basis_change(n);
            let explicit = c.transpose().mul(&m).unwrap().mul(&c).unwrap();
            assert_eq!(skew_basis_conjugate(&m).unwrap(), explicit);
            assert!(c.mul(&c).unwrap().is_identity());
        }
    }
}
