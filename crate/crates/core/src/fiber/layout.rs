use crate::algebra::{GaussianRational, Matrix, MultiPoly, Scalar, ShapeTag};
use crate::error::Result;
use crate::symplectic::ElementaryChain;

/// Coordinates used for one level of a chain.
///
/// The `a` slots of a level hold either `A` or `D = A^{-1}`; the `z` slots
/// hold `Z` or a congruent symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelCoords {
    /// `(A, Z)`.
    Standard,
    /// `(D, Z~)` with `D = A^{-1}` and `Z~ = A^{-1} Z A^{-T}`.
    InverseConjugated,
    /// `(D, Z)` with `D = A^{-1}`.
    InverseA,
    /// `(A, Z')` with `Z' = A Z A^T`.
    Conjugated,
}

/// Flat numbering of the chain coordinates: per level, the strictly upper
/// entries `a_ij` in row-major order, then the entries `z_ij`, `i <= j`, in
/// row-major order. Level `k` (1-based) occupies `n^2` consecutive ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarLayout {
    pub n: usize,
    pub k: usize,
}

impl VarLayout {
    pub fn new(n: usize, k: usize) -> Self {
        VarLayout { n, k }
    }

    pub fn per_level(&self) -> usize {
        self.n * self.n
    }

    pub fn total(&self) -> usize {
        self.k * self.per_level()
    }

    fn base(&self, level: usize) -> usize {
        (level - 1) * self.per_level()
    }

    /// Id of `a_ij` (0-based, `i < j`) at `level`.
    pub fn a(&self, level: usize, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        let n = self.n;
        let before: usize = (0..i).map(|r| n - 1 - r).sum();
        self.base(level) + before + (j - i - 1)
    }

    /// Id of `z_ij = z_ji` at `level`.
    pub fn z(&self, level: usize, i: usize, j: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        let n = self.n;
        let before: usize = (0..i).map(|r| n - r).sum();
        self.base(level) + n * (n - 1) / 2 + before + (j - i)
    }

    /// Human-readable name, e.g. `a12@3` or `z22@4` (1-based indices).
    pub fn name(&self, id: usize) -> String {
        let level = id / self.per_level() + 1;
        for i in 0..self.n {
            for j in i..self.n {
                if i < j && self.a(level, i, j) == id {
                    return format!("a{}{}@{}", i + 1, j + 1, level);
                }
                if self.z(level, i, j) == id {
                    return format!("z{}{}@{}", i + 1, j + 1, level);
                }
            }
        }
        format!("v{}", id)
    }

    /// Unitriangular matrix whose strict upper part reads the `a` slots.
    pub fn a_matrix<T: Scalar>(&self, level: usize, get: &impl Fn(usize) -> T) -> Matrix<T> {
        Matrix::from_fn(self.n, self.n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => get(self.a(level, i, j)),
            std::cmp::Ordering::Equal => T::one(),
            std::cmp::Ordering::Greater => T::zero(),
        })
    }

    pub fn z_matrix<T: Scalar>(&self, level: usize, get: &impl Fn(usize) -> T) -> Matrix<T> {
        Matrix::from_fn(self.n, self.n, |i, j| get(self.z(level, i, j)))
    }

    pub fn symbolic_a(&self, level: usize) -> Matrix<MultiPoly> {
        self.a_matrix(level, &MultiPoly::var)
    }

    pub fn symbolic_z(&self, level: usize) -> Matrix<MultiPoly> {
        self.z_matrix(level, &MultiPoly::var)
    }

    /// Coordinates of a chain in standard `(A, Z)` form.
    pub fn values_of<T: Scalar>(&self, chain: &ElementaryChain<T>) -> Vec<T> {
        let mut out = vec![T::zero(); self.total()];
        for (idx, e) in chain.factors().iter().enumerate() {
            let level = idx + 1;
            for i in 0..self.n {
                for j in i..self.n {
                    if i < j {
                        out[self.a(level, i, j)] = e.a().get(i, j).clone();
                    }
                    out[self.z(level, i, j)] = e.z().get(i, j).clone();
                }
            }
        }
        out
    }

    /// Builds the chain from coordinate values, reading level `special`
    /// in the given coordinates and all other levels in standard form.
    pub fn assemble<T: Scalar>(&self, values: &[T], special: Option<(usize, LevelCoords)>) -> Result<ElementaryChain<T>> {
        let get = |id: usize| values[id].clone();
        let mut pairs = Vec::with_capacity(self.k);
        for level in 1..=self.k {
            let slots_a = self.a_matrix(level, &get);
            let slots_z = self.z_matrix(level, &get);
            let coords = match special {
                Some((l, c)) if l == level => c,
                _ => LevelCoords::Standard,
            };
            let inv = |m: &Matrix<T>| m.invert_triangular(ShapeTag::UpperUnitriangular);
            let (a, z) = match coords {
                LevelCoords::Standard => (slots_a, slots_z),
                LevelCoords::InverseA => (inv(&slots_a)?, slots_z),
                LevelCoords::InverseConjugated => {
                    let a = inv(&slots_a)?;
                    let z = a.mul(&slots_z)?.mul(&a.transpose())?;
                    (a, z)
                }
                LevelCoords::Conjugated => {
                    let d = inv(&slots_a)?;
                    let z = d.mul(&slots_z)?.mul(&d.transpose())?;
                    (slots_a, z)
                }
            };
            pairs.push((a, z));
        }
        ElementaryChain::from_pairs(self.n, pairs)
    }
}

/// Exact coordinates of a Gaussian chain.
pub fn chain_values(chain: &ElementaryChain<GaussianRational>) -> Vec<GaussianRational> {
    VarLayout::new(chain.n(), chain.len()).values_of(chain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_a_bijection() {
        let l = VarLayout::new(3, 2);
        let mut seen = vec![false; l.total()];
        for level in 1..=2 {
            for i in 0..3 {
                for j in i..3 {
                    if i < j {
                        assert!(!std::mem::replace(&mut seen[l.a(level, i, j)], true));
                    }
                    assert!(!std::mem::replace(&mut seen[l.z(level, i, j)], true));
                }
            }
        }
        assert!(seen.into_iter().all(|s| s));
        assert_eq!(l.name(l.a(2, 0, 2)), "a13@2");
        assert_eq!(l.name(l.z(1, 2, 1)), "z23@1");
    }
}
