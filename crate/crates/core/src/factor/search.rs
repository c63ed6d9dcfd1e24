use rand::Rng;

use crate::algebra::{GaussianRational, Matrix};
use crate::error::{Error, Result};
use crate::symplectic::{is_symplectic, FactorChain, FormKind, Side, StandardFactor};

use super::numeric::{numeric_multistart, NumericConfig};
use super::random::rng_from_seed;

type Gq = GaussianRational;
type M = Matrix<Gq>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchStrategy {
    ExactElimination,
    NumericMultistart(NumericConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    NotFoundEvidence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub min_residual: f64,
    pub restarts: usize,
    pub restarts_run: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub factors: Option<FactorChain<Gq>>,
    pub residual: Option<ResidualReport>,
    /// Why no factorization was produced, when none was.
    pub note: String,
}

impl SearchOutcome {
    fn found(chain: FactorChain<Gq>) -> Self {
        SearchOutcome { status: SearchStatus::Found, factors: Some(chain), residual: None, note: String::new() }
    }

    fn not_found(note: impl Into<String>) -> Self {
        SearchOutcome { status: SearchStatus::NotFoundEvidence, factors: None, residual: None, note: note.into() }
    }
}

struct Blocks {
    t11: M,
    t12: M,
    t21: M,
    t22: M,
}

fn split(t: &M) -> Blocks {
    let n = t.rows() / 2;
    Blocks { t11: t.block(0, 0, n, n), t12: t.block(0, n, n, n), t21: t.block(n, 0, n, n), t22: t.block(n, n, n, n) }
}

/// `Omega^{-1} T Omega = [[T22, -T21], [-T12, T11]]`. Conjugation maps
/// lower factors `L(G)` to upper factors `U(-G)` and vice versa.
fn conjugate_by_omega(t: &M) -> M {
    let b = split(t);
    M::from_blocks(&b.t22, &b.t21.neg(), &b.t12.neg(), &b.t11).expect("square blocks")
}

fn chain_from(n: usize, leading: Side, blocks: Vec<M>) -> Option<FactorChain<Gq>> {
    let factors = blocks
        .into_iter()
        .enumerate()
        .map(|(i, g)| StandardFactor::new(if i % 2 == 0 { leading } else { leading.flip() }, g).ok())
        .collect::<Option<Vec<_>>>()?;
    FactorChain::new(n, factors).ok()
}

/// Candidate blocks `G_1..G_k` for `L(G_1) U(G_2) ...` (k <= 4), or `None`
/// when the construction hits a singular pivot.
fn lower_leading_blocks(t: &M, k: usize) -> Option<Vec<M>> {
    let n = t.rows() / 2;
    let b = split(t);
    let id = M::identity(n);
    match k {
        1 => Some(vec![b.t21]),
        2 => Some(vec![b.t21, b.t12]),
        3 => {
            // L(G1) U(G2) L(G3) = [[I + G2 G3, G2], [.., G1 G2 + I]]
            let g2_inv = b.t12.inverse()?;
            let g3 = g2_inv.mul(&b.t11.sub(&id).ok()?).ok()?;
            let g1 = b.t22.sub(&id).ok()?.mul(&g2_inv).ok()?;
            Some(vec![g1, b.t12, g3])
        }
        4 => four_factor_blocks(&b),
        _ => None,
    }
}

/// `L(G1) U(G2) L(G3) U(G4)` has upper-left block `I + G2 G3`. Writing
/// `T11 = P1 P2` with both factors symmetric, take `G2 = P1`,
/// `G3 = P2 - P1^{-1}`; the remaining blocks follow linearly.
fn four_factor_blocks(b: &Blocks) -> Option<Vec<M>> {
    let p = &b.t11;
    let p_inv = p.inverse()?;
    let s = b.t21.mul(&p_inv).ok()?;
    let t_prime = p_inv.mul(&b.t12).ok()?;
    for s_sym in symmetric_cofactors(p) {
        let Some(p2) = s_sym.inverse() else { continue };
        let p1 = p.mul(&s_sym).ok()?;
        let Some(p1_inv) = p1.inverse() else { continue };
        let p2_inv = s_sym;
        let x = p1_inv.mul(&p2_inv).ok()?.mul(&p1_inv).ok()?;
        let g1 = s.add(&x).ok()?.sub(&p1_inv).ok()?;
        let g3 = p2.sub(&p1_inv).ok()?;
        let g4 = t_prime.sub(&p2_inv).ok()?;
        if g1.is_symmetric() && g3.is_symmetric() && g4.is_symmetric() {
            return Some(vec![g1, p1, g3, g4]);
        }
    }
    None
}

/// Random invertible symmetric `S` with `P S` symmetric, drawn from the
/// solution space of the linear system `P S = S P^T`. A fixed internal seed
/// keeps the search deterministic.
fn symmetric_cofactors(p: &M) -> Vec<M> {
    let n = p.rows();
    let unknowns: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let index = |a: usize, b: usize| unknowns.iter().position(|&u| u == (a.min(b), a.max(b))).expect("pair");
    let eqs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut sys = M::zeros(eqs.len().max(1), unknowns.len());
    for (row, &(i, j)) in eqs.iter().enumerate() {
        for m in 0..n {
            // (P S)_ij - (S P^T)_ij = sum_m P_im S_mj - S_im P_jm
            let c = index(m, j);
            let v = sys.get(row, c) + p.get(i, m);
            sys.set(row, c, v);
            let c = index(i, m);
            let v = sys.get(row, c) - p.get(j, m);
            sys.set(row, c, v);
        }
    }
    let basis = sys.nullspace();
    let mut rng = rng_from_seed(0x5eed_f4c7);
    let mut out = Vec::new();
    for _ in 0..16 {
        let coeffs: Vec<i64> = basis.iter().map(|_| rng.gen_range(-3..=3)).collect();
        let mut s = M::zeros(n, n);
        for (vec, &c) in basis.iter().zip(&coeffs) {
            if c == 0 {
                continue;
            }
            let c = Gq::from_integer(c);
            for (u, &(a, b)) in unknowns.iter().enumerate() {
                let v = s.get(a, b) + &(&vec[u] * &c);
                s.set(a, b, v.clone());
                s.set(b, a, v);
            }
        }
        if !s.determinant().map(|d| d.is_zero()).unwrap_or(true) {
            out.push(s);
        }
    }
    out
}

fn exact_search(t: &M, k: usize) -> SearchOutcome {
    let n = t.rows() / 2;
    let core = k.min(4);
    for leading in [Side::Lower, Side::Upper] {
        let (src, negate) = match leading {
            Side::Lower => (t.clone(), false),
            Side::Upper => (conjugate_by_omega(t), true),
        };
        let Some(mut blocks) = lower_leading_blocks(&src, core) else { continue };
        if negate {
            blocks = blocks.into_iter().map(|g| g.neg()).collect();
        }
        blocks.extend((core..k).map(|_| M::zeros(n, n)));
        let Some(chain) = chain_from(n, leading, blocks) else { continue };
        if chain.product() == *t {
            return SearchOutcome::found(chain);
        }
    }
    SearchOutcome::not_found(format!("elimination found no {}-factor decomposition (singular pivot or inconsistent blocks)", k))
}

/// Looks for `k` alternating standard factors with product `target`.
///
/// `ExactElimination` returns a verified factorization or
/// `NotFoundEvidence`. `NumericMultistart` never returns `Found`; it reports
/// the smallest residual reached.
pub fn search_k_factor(target: &M, k: usize, strategy: SearchStrategy) -> Result<SearchOutcome> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if !is_symplectic(target, FormKind::Standard)? {
        return Err(Error::NotSymplectic);
    }
    match strategy {
        SearchStrategy::ExactElimination => Ok(exact_search(target, k)),
        SearchStrategy::NumericMultistart(cfg) => {
            if cfg.restarts == 0 {
                return Err(Error::InvalidArgument("at least one restart is required".into()));
            }
            let mut best: Option<ResidualReport> = None;
            for leading in [Side::Lower, Side::Upper] {
                if best.as_ref().is_some_and(|b| b.min_residual < cfg.stop_below) {
                    break;
                }
                let r = numeric_multistart(target, k, leading, &cfg);
                let run = r.restarts_run + best.as_ref().map_or(0, |b| b.restarts_run);
                if best.as_ref().map_or(true, |b| r.min_residual < b.min_residual) {
                    best = Some(ResidualReport { min_residual: r.min_residual, restarts: r.restarts, restarts_run: run });
                } else if let Some(b) = best.as_mut() {
                    b.restarts_run = run;
                }
            }
            let mut out = SearchOutcome::not_found("numeric evidence only");
            out.residual = best;
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::random::{random_elementary, rng_from_seed};
    use crate::io::{to_gaussian, Ring};
    use crate::symplectic::Sign;

    #[test]
    fn single_lower_factor() {
        let g = M::from_integers(&[&[1, 2], &[2, 5]]);
        let t = StandardFactor::lower(g.clone()).unwrap().materialize();
        let out = search_k_factor(&t, 1, SearchStrategy::ExactElimination).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
        let chain = out.factors.unwrap();
        assert_eq!(chain.factors()[0].side(), Side::Lower);
        assert_eq!(chain.factors()[0].g(), &g);
    }

    #[test]
    fn four_factors_for_elementary() {
        let mut rng = rng_from_seed(11);
        for n in [2, 3] {
            for sign in [Sign::Minus, Sign::Plus] {
                let e = random_elementary(&mut rng, sign, n, Ring::Gaussian);
                let t = to_gaussian(&e.materialize()).unwrap();
                let out = search_k_factor(&t, 4, SearchStrategy::ExactElimination).unwrap();
                assert_eq!(out.status, SearchStatus::Found, "{}", out.note);
                assert_eq!(out.factors.unwrap().product(), t);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let t = M::from_integers(&[&[2, 0], &[0, 1]]);
        assert_eq!(search_k_factor(&t, 2, SearchStrategy::ExactElimination).unwrap_err(), Error::NotSymplectic);
        assert!(search_k_factor(&M::identity(2), 0, SearchStrategy::ExactElimination).is_err());
    }

    #[test]
    fn two_factor_needs_identity_block() {
        let t = StandardFactor::lower(M::from_integers(&[&[1]])).unwrap().materialize();
        let t = t.mul(&StandardFactor::upper(M::from_integers(&[&[2]])).unwrap().materialize()).unwrap();
        let t = t.mul(&StandardFactor::lower(M::from_integers(&[&[3]])).unwrap().materialize()).unwrap();
        let out = search_k_factor(&t, 2, SearchStrategy::ExactElimination).unwrap();
        assert_eq!(out.status, SearchStatus::NotFoundEvidence);
        let out = search_k_factor(&t, 3, SearchStrategy::ExactElimination).unwrap();
        assert_eq!(out.status, SearchStatus::Found);
    }
}
