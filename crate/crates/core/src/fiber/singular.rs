use std::collections::BTreeMap;

use rand::Rng;

use crate::algebra::{Dual, GaussianRational, Matrix, Scalar};
use crate::error::Result;
use crate::factor::rng_from_seed;
use crate::symplectic::{phi, ElementaryChain};

use super::layout::{chain_values, VarLayout};
use super::strata::{classify_stratum, Parity, StratumLabel};

/// Membership in the singular set: `Z_i e_n = 0` for `i < K` and
/// `A_j e_n = e_n` for `1 < j < K`.
pub fn in_singular_set<T: Scalar>(chain: &ElementaryChain<T>) -> bool {
    let (n, k) = (chain.n(), chain.len());
    let last = n - 1;
    chain.factors().iter().enumerate().all(|(idx, e)| {
        let level = idx + 1;
        let z_ok = level >= k || (0..n).all(|r| e.z().get(r, last).is_zero());
        let a_ok = level == 1 || level >= k || (0..last).all(|r| e.a().get(r, last).is_zero());
        z_ok && a_ok
    })
}

/// Exact `2n x K n^2` Jacobian of `phi` in the coordinates of
/// [`VarLayout`], one dual-number pass per coordinate.
pub fn jacobian_phi(chain: &ElementaryChain<GaussianRational>) -> Result<Matrix<GaussianRational>> {
    let layout = VarLayout::new(chain.n(), chain.len());
    let values = chain_values(chain);
    let mut jac = Matrix::zeros(2 * chain.n(), layout.total());
    for var in 0..layout.total() {
        let seeded: Vec<Dual> = values
            .iter()
            .enumerate()
            .map(|(id, v)| if id == var { Dual::variable(v.clone()) } else { Dual::constant(v.clone()) })
            .collect();
        let dual_chain = layout.assemble(&seeded, None)?;
        for (row, d) in phi(&dual_chain).to_vec().into_iter().enumerate() {
            jac.set(row, var, d.deriv);
        }
    }
    Ok(jac)
}

/// A chain whose entries are mostly zero, with small integers elsewhere.
pub fn sparse_random_chain<R: Rng>(rng: &mut R, n: usize, k: usize, density: f64) -> ElementaryChain<GaussianRational> {
    let layout = VarLayout::new(n, k);
    let values: Vec<GaussianRational> = (0..layout.total())
        .map(|_| {
            if rng.gen_bool(density) {
                GaussianRational::from_integer(rng.gen_range(-2..=2))
            } else {
                GaussianRational::zero()
            }
        })
        .collect();
    layout.assemble(&values, None).expect("standard coordinates always assemble")
}

/// Counts how often `phi` of a sparse random chain lands in each stratum.
/// Images equal to zero cannot occur since `phi` avoids the origin.
pub fn surjectivity_sample(n: usize, k: usize, samples: usize, seed: u64) -> BTreeMap<StratumLabel, usize> {
    let mut rng = rng_from_seed(seed);
    let parity = Parity::of(k);
    let mut hits: BTreeMap<StratumLabel, usize> = StratumLabel::all(n, parity).into_iter().map(|s| (s, 0)).collect();
    for _ in 0..samples {
        let chain = sparse_random_chain(&mut rng, n, k, 0.35);
        if let Ok(s) = classify_stratum(&phi(&chain).to_vec(), parity) {
            *hits.entry(s).or_default() += 1;
        }
    }
    hits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{ElementarySymplectic, Sign};

    type M = Matrix<GaussianRational>;

    #[test]
    fn single_variable_jacobian() {
        let e = ElementarySymplectic::new(Sign::Minus, M::identity(1), M::from_integers(&[&[4]])).unwrap();
        let chain = ElementaryChain::new(1, vec![e]).unwrap();
        assert_eq!(jacobian_phi(&chain).unwrap(), M::from_integers(&[&[1], &[0]]));
    }

    #[test]
    fn identity_chain_is_singular() {
        let chain = ElementaryChain::<GaussianRational>::identity(2, 3);
        assert!(in_singular_set(&chain));
        assert!(jacobian_phi(&chain).unwrap().exact_rank() < 4);
    }

    #[test]
    fn nonzero_corner_leaves_singular_set() {
        let mut z = M::zeros(2, 2);
        z.set(1, 1, GaussianRational::one());
        let layout = VarLayout::new(2, 3);
        let mut values = vec![GaussianRational::zero(); layout.total()];
        values[layout.z(1, 1, 1)] = GaussianRational::one();
        let chain = layout.assemble(&values, None).unwrap();
        assert!(!in_singular_set(&chain));
        let mut values = vec![GaussianRational::zero(); layout.total()];
        values[layout.a(2, 0, 1)] = GaussianRational::from_integer(3);
        assert!(!in_singular_set(&layout.assemble(&values, None).unwrap()));
    }
}
