use crate::algebra::{Matrix, Scalar};
use crate::error::{Error, Result};

use super::elementary::{ElementarySymplectic, Side, Sign, StandardFactor};

/// Alternating product of standard factors.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorChain<T> {
    n: usize,
    factors: Vec<StandardFactor<T>>,
}

impl<T: Scalar> FactorChain<T> {
    pub fn new(n: usize, factors: Vec<StandardFactor<T>>) -> Result<Self> {
        for (k, f) in factors.iter().enumerate() {
            if f.n() != n {
                return Err(Error::DimensionMismatch(format!("factor {} has size {}, expected {}", k + 1, f.n(), n)));
            }
            if k > 0 && factors[k - 1].side() == f.side() {
                return Err(Error::ShapeViolation(format!("alternating (factors {} and {} share a side)", k, k + 1)));
            }
        }
        Ok(FactorChain { n, factors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[StandardFactor<T>] {
        &self.factors
    }

    pub fn into_factors(self) -> Vec<StandardFactor<T>> {
        self.factors
    }

    pub fn try_map<U: Scalar>(&self, f: impl Fn(&T) -> Result<U>) -> Result<FactorChain<U>> {
        let factors = self.factors.iter().map(|x| x.try_map(&f)).collect::<Result<Vec<_>>>()?;
        FactorChain::new(self.n, factors)
    }

    pub fn leading_side(&self) -> Option<Side> {
        self.factors.first().map(|f| f.side())
    }

    pub fn product(&self) -> Matrix<T> {
        let mut acc = Matrix::identity(2 * self.n);
        for f in &self.factors {
            acc = f.apply_right(&acc).expect("sizes checked at construction");
        }
        acc
    }
}

/// `M^-(A_1,Z_1) M^+(A_2,Z_2) ...`, signs alternating from `Minus`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementaryChain<T> {
    n: usize,
    factors: Vec<ElementarySymplectic<T>>,
}

impl<T: Scalar> ElementaryChain<T> {
    pub fn new(n: usize, factors: Vec<ElementarySymplectic<T>>) -> Result<Self> {
        for (k, e) in factors.iter().enumerate() {
            if e.n() != n {
                return Err(Error::DimensionMismatch(format!("factor {} has size {}, expected {}", k + 1, e.n(), n)));
            }
            if e.sign() != Sign::at_position(k + 1) {
                return Err(Error::ShapeViolation(format!(
                    "alternating from minus (factor {} is {})",
                    k + 1,
                    e.sign()
                )));
            }
        }
        Ok(ElementaryChain { n, factors })
    }

    /// Chain of `k` identity factors.
    pub fn identity(n: usize, k: usize) -> Self {
        let factors = (1..=k).map(|p| ElementarySymplectic::identity(Sign::at_position(p), n)).collect();
        ElementaryChain { n, factors }
    }

    /// Builds a chain from `(A_k, Z_k)` pairs, assigning signs by position.
    pub fn from_pairs(n: usize, pairs: Vec<(Matrix<T>, Matrix<T>)>) -> Result<Self> {
        let factors = pairs
            .into_iter()
            .enumerate()
            .map(|(k, (a, z))| ElementarySymplectic::new(Sign::at_position(k + 1), a, z))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, factors)
    }

    pub fn try_map<U: Scalar>(&self, f: impl Fn(&T) -> Result<U>) -> Result<ElementaryChain<U>> {
        let factors = self.factors.iter().map(|x| x.try_map(&f)).collect::<Result<Vec<_>>>()?;
        ElementaryChain::new(self.n, factors)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[ElementarySymplectic<T>] {
        &self.factors
    }
}

/// The last row `(P_f | P_s)` of a partial product.
#[derive(Debug, Clone, PartialEq)]
pub struct LastRowState<T> {
    pub pf: Vec<T>,
    pub ps: Vec<T>,
}

impl<T: Scalar> LastRowState<T> {
    /// Last row of the identity, `e_{2n}^T`.
    pub fn initial(n: usize) -> Self {
        let mut ps = vec![T::zero(); n];
        ps[n - 1] = T::one();
        LastRowState { pf: vec![T::zero(); n], ps }
    }

    pub fn n(&self) -> usize {
        self.pf.len()
    }

    /// Coordinates `P_1 .. P_2n` as one vector.
    pub fn to_vec(&self) -> Vec<T> {
        self.pf.iter().chain(self.ps.iter()).cloned().collect()
    }

    /// Right multiplication by one elementary factor.
    pub fn step(&self, e: &ElementarySymplectic<T>) -> Self {
        let inv = e.a_inverse();
        match e.sign() {
            Sign::Minus => {
                // (P_f + P_s Z) A^{-T} | P_s A
                let beta = add_vec(&self.pf, &row_times(&self.ps, e.z()));
                LastRowState { pf: row_times_transpose(&beta, &inv), ps: row_times(&self.ps, e.a()) }
            }
            Sign::Plus => {
                // P_f A^{-1} | (P_f Z + P_s) A^T
                let beta = add_vec(&row_times(&self.pf, e.z()), &self.ps);
                LastRowState { pf: row_times(&self.pf, &inv), ps: row_times_transpose(&beta, e.a()) }
            }
        }
    }
}

pub(crate) fn add_vec<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

/// `v * m` for a row vector `v`.
pub(crate) fn row_times<T: Scalar>(v: &[T], m: &Matrix<T>) -> Vec<T> {
    (0..m.cols())
        .map(|j| {
            let mut acc = T::zero();
            for (i, vi) in v.iter().enumerate() {
                let mij = m.get(i, j);
                if vi.is_zero() || mij.is_zero() {
                    continue;
                }
                acc = acc.add(&vi.mul(mij));
            }
            acc
        })
        .collect()
}

/// `v * m^T` for a row vector `v`.
pub(crate) fn row_times_transpose<T: Scalar>(v: &[T], m: &Matrix<T>) -> Vec<T> {
    (0..m.rows())
        .map(|j| {
            let mut acc = T::zero();
            for (i, vi) in v.iter().enumerate() {
                let mji = m.get(j, i);
                if vi.is_zero() || mji.is_zero() {
                    continue;
                }
                acc = acc.add(&vi.mul(mji));
            }
            acc
        })
        .collect()
}

/// Ordered product of the chain; the identity for an empty chain.
pub fn psi<T: Scalar>(chain: &ElementaryChain<T>) -> Matrix<T> {
    let mut acc = Matrix::identity(2 * chain.n());
    for e in chain.factors() {
        acc = acc.mul(&e.materialize()).expect("sizes checked at construction");
    }
    acc
}

/// Last row of `psi(chain)`, computed by the row recursion without forming
/// the product.
pub fn phi<T: Scalar>(chain: &ElementaryChain<T>) -> LastRowState<T> {
    chain.factors().iter().fold(LastRowState::initial(chain.n()), |p, e| p.step(e))
}
