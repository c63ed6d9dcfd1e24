use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{GaussianRational, Matrix, MultiPoly, Rational, Scalar};
use crate::io::Ring;
use crate::symplectic::{psi, ElementaryChain, ElementarySymplectic, Sign};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let num = rng.gen_range(-3..=3);
    if rng.gen_bool(0.25) {
        Rational::new(num, rng.gen_range(1..=4))
    } else {
        Rational::from_integer(num)
    }
}

fn small_gaussian<R: Rng>(rng: &mut R) -> GaussianRational {
    let re = small_rational(rng);
    let im = if rng.gen_bool(0.125) { small_rational(rng) } else { Rational::zero() };
    GaussianRational::new(re, im)
}

/// A small random entry: a Gaussian rational with small numerator and
/// denominator, plus (for polynomial rings) at most one linear term.
pub fn random_scalar<R: Rng>(rng: &mut R, ring: Ring) -> MultiPoly {
    let c = MultiPoly::constant(small_gaussian(rng));
    match ring {
        Ring::Gaussian | Ring::Poly(0) => c,
        Ring::Poly(m) => {
            if rng.gen_bool(0.5) {
                let coeff = GaussianRational::from_integer(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
                c.add(&MultiPoly::var(rng.gen_range(0..m)).scale(&coeff))
            } else {
                c
            }
        }
    }
}

pub fn random_unitriangular<R: Rng>(rng: &mut R, n: usize, ring: Ring) -> Matrix<MultiPoly> {
    Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => random_scalar(rng, ring),
        std::cmp::Ordering::Equal => MultiPoly::one(),
        std::cmp::Ordering::Greater => MultiPoly::zero(),
    })
}

pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, ring: Ring) -> Matrix<MultiPoly> {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = random_scalar(rng, ring);
            m.set(j, i, v.clone());
            m.set(i, j, v);
        }
    }
    m
}

pub fn random_elementary<R: Rng>(rng: &mut R, sign: Sign, n: usize, ring: Ring) -> ElementarySymplectic<MultiPoly> {
    let a = random_unitriangular(rng, n, ring);
    let z = random_symmetric(rng, n, ring);
    ElementarySymplectic::new(sign, a, z).expect("shapes hold by construction")
}

pub fn random_chain<R: Rng>(rng: &mut R, n: usize, k: usize, ring: Ring) -> ElementaryChain<MultiPoly> {
    let factors = (1..=k).map(|p| random_elementary(rng, Sign::at_position(p), n, ring)).collect();
    ElementaryChain::new(n, factors).expect("signs alternate by construction")
}

/// `psi` of a random chain of `k` elementary factors: symplectic, and a
/// product of unitriangular matrices, by construction.
pub fn random_symplectic(n: usize, k: usize, seed: u64, ring: Ring) -> Matrix<MultiPoly> {
    let mut rng = rng_from_seed(seed);
    psi(&random_chain(&mut rng, n, k, ring))
}
