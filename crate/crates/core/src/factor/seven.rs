use crate::algebra::{Matrix, Scalar, ShapeTag};
use crate::error::{Error, Result};
use crate::symplectic::{ElementarySymplectic, FactorChain, Side, Sign, StandardFactor};

use super::diag::{diagonalize_triangular, Orientation, Spectrum};

/// Seven alternating standard factors reassembling an elementary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SevenFactorResult<T> {
    pub chain: FactorChain<T>,
    pub leading_side: Side,
}

fn factor<T: Scalar>(side: Side, g: Matrix<T>) -> StandardFactor<T> {
    StandardFactor::new(side, g).expect("block is symmetric by construction")
}

/// Four factors with product `diag(Lambda, Lambda^{-1})`; every block is
/// diagonal.
pub fn factor_block_diag_constant<T: Scalar>(l: &Spectrum, leading: Side) -> FactorChain<T> {
    let n = l.len();
    let lam: Matrix<T> = l.matrix();
    let lam_inv: Matrix<T> = l.inverse().matrix();
    let id = Matrix::<T>::identity(n);
    let minus_one = |m: &Matrix<T>| m.sub(&id).expect("square");
    let blocks = match leading {
        Side::Lower => [lam_inv.neg(), minus_one(&lam), id.clone(), minus_one(&lam_inv)],
        Side::Upper => [minus_one(&lam), id.clone(), minus_one(&lam_inv), lam.neg()],
    };
    let factors = blocks
        .into_iter()
        .enumerate()
        .map(|(k, g)| factor(if k % 2 == 0 { leading } else { leading.flip() }, g))
        .collect();
    FactorChain::new(n, factors).expect("alternating")
}

/// Four factors with product `diag(C, C^{-T})` where `C = Lambda^{-1} B`.
///
/// `C` is diagonalized as `K D K^{-1}` by a unitriangular `K`; then
/// `C = P1 P2` with the symmetric `P1 = K K^T` and `P2 = K^{-T} D K^{-1}`.
/// All inverses that appear are products of `K^{-1}`, `K^T` and constant
/// diagonals, so polynomial input stays polynomial.
pub fn factor_block_diag_p1p2<T: Scalar>(b: &Matrix<T>, l: &Spectrum, leading: Side) -> Result<FactorChain<T>> {
    let n = b.rows();
    if !b.is_square() || l.len() != n {
        return Err(Error::DimensionMismatch(format!("{}x{} block against a spectrum of length {}", b.rows(), b.cols(), l.len())));
    }
    let lam_inv: Matrix<T> = l.inverse().matrix();
    let c = lam_inv.mul(b)?;
    let (orientation, tag) = if c.is_triangular(true) {
        (Orientation::Upper, ShapeTag::UpperUnitriangular)
    } else if c.is_triangular(false) {
        (Orientation::Lower, ShapeTag::LowerUnitriangular)
    } else {
        return Err(Error::ShapeViolation("triangular (Lambda^-1 B)".into()));
    };
    let diag = diagonalize_triangular(&c, orientation)?;
    let k = diag.k;
    let k_inv = k.invert_triangular(tag)?;
    let (k_t, k_inv_t) = (k.transpose(), k_inv.transpose());
    let d: Matrix<T> = diag.lambda.matrix();
    let d_inv: Matrix<T> = diag.lambda.inverse().matrix();
    let sandwich = |outer_l: &Matrix<T>, mid: &Matrix<T>, outer_r: &Matrix<T>| -> Matrix<T> {
        outer_l.mul(mid).and_then(|m| m.mul(outer_r)).expect("square")
    };

    let p1 = k.mul(&k_t)?;
    let p2 = sandwich(&k_inv_t, &d, &k_inv);
    let p1_inv = k_inv_t.mul(&k_inv)?;
    let p2_inv = sandwich(&k, &d_inv, &k_t);
    let blocks = match leading {
        Side::Upper => {
            // P2 P1 P2 = K^{-T} D^2 K^{-1}
            let d2 = d.mul(&d)?;
            let p2p1p2 = sandwich(&k_inv_t, &d2, &k_inv);
            [p1.neg(), p1_inv.sub(&p2)?, p2_inv, p2p1p2.sub(&p2)?]
        }
        Side::Lower => {
            // P1^{-1} P2^{-1} P1^{-1} = K^{-T} D^{-1} K^{-1}
            let x = sandwich(&k_inv_t, &d_inv, &k_inv);
            [x.sub(&p1_inv)?, p1, p2.sub(&p1_inv)?, p2_inv.neg()]
        }
    };
    let factors = blocks
        .into_iter()
        .enumerate()
        .map(|(i, g)| StandardFactor::new(if i % 2 == 0 { leading } else { leading.flip() }, g))
        .collect::<Result<Vec<_>>>()?;
    FactorChain::new(n, factors)
}

/// The unmerged nine-factor sequence: the leading shear carrying `Z`, the
/// constant block-diagonal part, and the `P1 P2` part.
pub fn nine_factor_sequence<T: Scalar>(e: &ElementarySymplectic<T>, l: &Spectrum) -> Result<Vec<StandardFactor<T>>> {
    let (lead, p1p2_lead) = match e.sign() {
        Sign::Minus => (Side::Lower, Side::Upper),
        Sign::Plus => (Side::Upper, Side::Lower),
    };
    let mut seq = vec![factor(lead, e.z().clone())];
    seq.extend(factor_block_diag_constant::<T>(l, lead).into_factors());
    seq.extend(factor_block_diag_p1p2(&e.diagonal_block(), l, p1p2_lead)?.into_factors());
    Ok(seq)
}

/// Joins neighbouring factors on the same side by adding their blocks.
pub fn merge_adjacent<T: Scalar>(n: usize, factors: Vec<StandardFactor<T>>) -> Result<FactorChain<T>> {
    let mut out: Vec<StandardFactor<T>> = Vec::with_capacity(factors.len());
    for f in factors {
        match out.last_mut() {
            Some(prev) if prev.side() == f.side() => {
                let g = prev.g().add(f.g())?;
                *prev = StandardFactor::new(f.side(), g)?;
            }
            _ => out.push(f),
        }
    }
    FactorChain::new(n, out)
}

pub fn factor_elementary_7<T: Scalar>(e: &ElementarySymplectic<T>) -> Result<SevenFactorResult<T>> {
    factor_elementary_7_with(e, &Spectrum::standard(e.n()))
}

/// Seven-factor decomposition with an explicit spectrum.
pub fn factor_elementary_7_with<T: Scalar>(e: &ElementarySymplectic<T>, l: &Spectrum) -> Result<SevenFactorResult<T>> {
    let seq = nine_factor_sequence(e, l)?;
    let chain = merge_adjacent(e.n(), seq)?;
    debug_assert_eq!(chain.len(), 7);
    let leading_side = chain.leading_side().expect("non-empty");
    Ok(SevenFactorResult { chain, leading_side })
}
