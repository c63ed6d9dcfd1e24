use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{GaussianRational, MultiPoly, Rational, Scalar, ShapeTag};
use crate::error::{Error, Result};
use crate::factor::rng_from_seed;
use crate::symplectic::chain::{add_vec, row_times, row_times_transpose};
use crate::symplectic::{phi, ElementaryChain};

use super::layout::{LevelCoords, VarLayout};
use super::strata::{classify_stratum, Family, Parity, StratumLabel};

type Gq = GaussianRational;
type P = MultiPoly;

#[derive(Debug, Clone, PartialEq)]
pub struct Substitution {
    pub var: usize,
    pub expr: MultiPoly,
}

/// `lhs = rhs`, with `lhs` a polynomial in the free variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub lhs: MultiPoly,
    pub rhs: GaussianRational,
}

/// Reduction of the `2n` equations `phi = target` to one equation.
///
/// Substitutions are listed in evaluation order. The residual is the pivot
/// coordinate of `P^{K-1}`, which on the fiber equals the pivot of the
/// target.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationPlan {
    pub n: usize,
    pub k: usize,
    pub target: Vec<GaussianRational>,
    pub stratum: StratumLabel,
    /// Coordinates of level `K - 1`; every other level is standard.
    pub coords: LevelCoords,
    pub substitutions: Vec<Substitution>,
    pub residual: Residual,
    /// Index into `P^{K-1}` (0-based, `0..2n`) of the residual.
    pub pivot: usize,
}

impl EliminationPlan {
    pub fn layout(&self) -> VarLayout {
        VarLayout::new(self.n, self.k)
    }

    pub fn eliminated(&self) -> BTreeSet<usize> {
        self.substitutions.iter().map(|s| s.var).collect()
    }

    pub fn free_variables(&self) -> Vec<usize> {
        let gone = self.eliminated();
        (0..self.layout().total()).filter(|v| !gone.contains(v)).collect()
    }

    /// Each expression may reference only free variables and variables
    /// eliminated earlier.
    pub fn check_acyclic(&self) -> Result<()> {
        let mut pending = self.eliminated();
        for s in &self.substitutions {
            pending.remove(&s.var);
            if let Some(bad) = s.expr.variables().into_iter().find(|v| pending.contains(v) || *v == s.var) {
                let l = self.layout();
                return Err(Error::SubstitutionCycle(format!("{} depends on {}", l.name(s.var), l.name(bad))));
            }
        }
        if let Some(bad) = self.residual.lhs.variables().into_iter().find(|v| self.eliminated().contains(v)) {
            return Err(Error::SubstitutionCycle(format!("residual depends on eliminated {}", self.layout().name(bad))));
        }
        Ok(())
    }

    /// Fills the eliminated coordinates of `values` from the free ones.
    pub fn apply(&self, values: &mut [Gq]) -> Result<()> {
        for s in &self.substitutions {
            values[s.var] = s.expr.evaluate(values)?;
        }
        Ok(())
    }

    pub fn assemble(&self, values: &[Gq]) -> Result<ElementaryChain<Gq>> {
        self.layout().assemble(values, Some((self.k - 1, self.coords)))
    }
}

impl fmt::Display for EliminationPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.layout();
        let target: Vec<String> = self.target.iter().map(|v| v.to_string()).collect();
        writeln!(f, "target {}", target.join(" "))?;
        writeln!(f, "stratum {}", self.stratum)?;
        writeln!(f, "level {} coordinates {:?}", self.k - 1, self.coords)?;
        for s in &self.substitutions {
            writeln!(f, "eliminate {} = {}", l.name(s.var), rename(&s.expr, &l))?;
        }
        writeln!(f, "residual {} = {}", rename(&self.residual.lhs, &l), self.residual.rhs)?;
        write!(f, "free {}", self.free_variables().len())
    }
}

/// Prints a polynomial in the layout's variable names.
fn rename(p: &P, l: &VarLayout) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (m, c) in p.terms() {
        let mut factors: Vec<String> = Vec::new();
        for (v, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(l.name(v)),
                _ => factors.push(format!("{}^{}", l.name(v), e)),
            }
        }
        let coeff = c.to_string();
        let term = match (factors.is_empty(), coeff.as_str()) {
            (true, _) => coeff.clone(),
            (false, "1") => factors.join("*"),
            (false, "-1") => format!("-{}", factors.join("*")),
            (false, _) => format!("({})*{}", coeff, factors.join("*")),
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out = format!("{} - {}", out, rest);
        } else {
            out = format!("{} + {}", out, term);
        }
    }
    out
}

fn c(v: &Gq) -> P {
    P::constant(v.clone())
}

fn inverse_of(v: &Gq) -> Gq {
    v.inv().expect("pivot is nonzero by classification")
}

struct Builder {
    layout: VarLayout,
    subs: Vec<Substitution>,
}

impl Builder {
    fn push(&mut self, var: usize, expr: P) {
        self.subs.push(Substitution { var, expr });
    }
}

/// Builds the elimination plan for `phi(chain) = target` over chains of
/// length `k`.
pub fn reduce_fiber(target: &[Gq], k: usize, n: usize) -> Result<EliminationPlan> {
    if n == 0 || target.len() != 2 * n {
        return Err(Error::DimensionMismatch(format!("target of length {} for n = {}", target.len(), n)));
    }
    if k < 3 {
        return Err(Error::Unsupported(format!("fiber reduction needs K >= 3, got {}", k)));
    }
    let stratum = classify_stratum(target, Parity::of(k))?;
    let layout = VarLayout::new(n, k);
    let prev_chain = ElementaryChain::from_pairs(n, (1..k - 1).map(|l| (layout.symbolic_a(l), layout.symbolic_z(l))).collect())?;
    let prev = phi(&prev_chain);
    let (a, b) = target.split_at(n);
    let mut bld = Builder { layout, subs: Vec::new() };
    let pos = stratum.pivot_position(n);
    let (coords, lhs, rhs, pivot) = match (stratum.parity, stratum.family) {
        (Parity::KEven, Family::G) => {
            let lhs = even_g(&mut bld, &prev.pf, &prev.ps, a, b, pos)?;
            (LevelCoords::Standard, lhs, a[pos].clone(), pos)
        }
        (Parity::KEven, Family::N) => {
            let lhs = even_n(&mut bld, &prev.pf, &prev.ps, b, pos);
            (LevelCoords::InverseConjugated, lhs, b[pos].clone(), n + pos)
        }
        (Parity::KOdd, Family::G) => {
            let lhs = odd_g(&mut bld, &prev.pf, &prev.ps, a, b, pos);
            (LevelCoords::InverseA, lhs, b[pos].clone(), n + pos)
        }
        (Parity::KOdd, Family::N) => {
            let lhs = odd_n(&mut bld, &prev.pf, &prev.ps, a, pos);
            (LevelCoords::Conjugated, lhs, a[pos].clone(), pos)
        }
    };
    let plan = EliminationPlan {
        n,
        k,
        target: target.to_vec(),
        stratum,
        coords,
        substitutions: bld.subs,
        residual: Residual { lhs, rhs },
        pivot,
    };
    plan.check_acyclic()?;
    let report = verify_reduction(&plan, 3, 0x0f1b_e4)?;
    if report.fail > 0 {
        return Err(Error::Unsupported(format!("derived plan for stratum {} failed verification", plan.stratum)));
    }
    Ok(plan)
}

/// Even `K`, first nonzero `a_p`. Level `K - 1` is `M^-` in standard
/// coordinates, level `K` is `M^+`.
fn even_g(bld: &mut Builder, pf: &[P], ps: &[P], a: &[Gq], b: &[Gq], p: usize) -> Result<P> {
    let l = bld.layout;
    let (n, k) = (l.n, l.k);
    let inv = inverse_of(&a[p]);
    let a1 = l.symbolic_a(k - 1);
    let z1 = l.symbolic_z(k - 1);
    let a2 = l.symbolic_a(k);
    let z2 = l.symbolic_z(k);
    // q = P^{K-1}_f solves q A_{K-1}^T = beta
    let beta = add_vec(pf, &row_times(ps, &z1));
    let mut q = vec![P::zero(); n];
    for j in (p..n).rev() {
        let mut v = beta[j].clone();
        for m in j + 1..n {
            v = v.sub(&q[m].mul(a1.get(j, m)));
        }
        q[j] = v;
    }
    // q = a A_K, row p of A_K
    for j in (p + 1..n).rev() {
        let mut v = q[j].sub(&c(&a[j]));
        for m in p + 1..j {
            v = v.sub(&a2.get(m, j).scale(&a[m]));
        }
        bld.push(l.a(k, p, j), v.scale(&inv));
    }
    // q_j = 0 for j < p, column p of A_{K-1}
    for j in 0..p {
        let mut v = beta[j].clone();
        for m in p + 1..n {
            v = v.sub(&q[m].mul(a1.get(j, m)));
        }
        bld.push(l.a(k - 1, j, p), v.scale(&inv));
    }
    // q Z_K = b A_K^{-T} - P^{K-1}_s, row p of Z_K
    let s = row_times(ps, &a1);
    let a2_inv = a2.invert_triangular(ShapeTag::UpperUnitriangular)?;
    let bv: Vec<P> = b.iter().map(c).collect();
    let alpha: Vec<P> = row_times_transpose(&bv, &a2_inv).iter().zip(&s).map(|(x, y)| x.sub(y)).collect();
    for j in (0..n).filter(|&j| j != p).chain(std::iter::once(p)) {
        let mut v = alpha[j].clone();
        for m in p + 1..n {
            v = v.sub(&q[m].mul(z2.get(m, j)));
        }
        bld.push(l.z(k, p, j), v.scale(&inv));
    }
    Ok(q[p].clone())
}

/// Even `K`, `a = 0`, last nonzero `b_c`. Level `K - 1` is read in
/// `(D, Z~)` coordinates, in which `P^{K-1}_s = p` solves `p D = P_s` and
/// `P^{K-1}_f = P_f D^T + p Z~`.
fn even_n(bld: &mut Builder, pf: &[P], ps: &[P], b: &[Gq], cpos: usize) -> P {
    let l = bld.layout;
    let (n, k) = (l.n, l.k);
    let inv = inverse_of(&b[cpos]);
    let d = l.symbolic_a(k - 1);
    let zt = l.symbolic_z(k - 1);
    let a2 = l.symbolic_a(k);
    let mut p = vec![P::zero(); n];
    for j in 0..=cpos {
        let mut v = ps[j].clone();
        for m in 0..j {
            v = v.sub(&p[m].mul(d.get(m, j)));
        }
        p[j] = v;
    }
    // p_j = 0 for j > c, row c of D
    for j in cpos + 1..n {
        let mut v = ps[j].clone();
        for m in 0..cpos {
            v = v.sub(&p[m].mul(d.get(m, j)));
        }
        bld.push(l.a(k - 1, cpos, j), v.scale(&inv));
    }
    // P^{K-1}_f = 0, row c of Z~
    let gamma: Vec<P> = row_times_transpose(pf, &d).iter().map(|x| x.neg()).collect();
    for j in (0..n).filter(|&j| j != cpos).chain(std::iter::once(cpos)) {
        let mut v = gamma[j].clone();
        for m in 0..cpos {
            v = v.sub(&p[m].mul(zt.get(m, j)));
        }
        bld.push(l.z(k - 1, cpos, j), v.scale(&inv));
    }
    // p A_K^T = b, column c of A_K
    for j in 0..cpos {
        let mut v = c(&b[j]).sub(&p[j]);
        for m in j + 1..cpos {
            v = v.sub(&p[m].mul(a2.get(j, m)));
        }
        bld.push(l.a(k, j, cpos), v.scale(&inv));
    }
    p[cpos].clone()
}

/// Odd `K`, first nonzero `b_p`. Level `K - 1` is `M^+` read in `(D, Z)`
/// coordinates: `P^{K-1}_f = P_f D` and `P^{K-1}_s = s` solves
/// `s D^T = P_f Z + P_s`.
fn odd_g(bld: &mut Builder, pf: &[P], ps: &[P], a: &[Gq], b: &[Gq], p: usize) -> P {
    let l = bld.layout;
    let (n, k) = (l.n, l.k);
    let inv = inverse_of(&b[p]);
    let d = l.symbolic_a(k - 1);
    let z1 = l.symbolic_z(k - 1);
    let a2 = l.symbolic_a(k);
    let z2 = l.symbolic_z(k);
    let beta = add_vec(&row_times(pf, &z1), ps);
    let mut s = vec![P::zero(); n];
    for j in (p..n).rev() {
        let mut v = beta[j].clone();
        for m in j + 1..n {
            v = v.sub(&s[m].mul(d.get(j, m)));
        }
        s[j] = v;
    }
    // s_j = 0 for j < p, column p of D
    for j in 0..p {
        let mut v = beta[j].clone();
        for m in p + 1..n {
            v = v.sub(&s[m].mul(d.get(j, m)));
        }
        bld.push(l.a(k - 1, j, p), v.scale(&inv));
    }
    // s A_K = b, row p of A_K
    for j in (p + 1..n).rev() {
        let mut v = c(&b[j]).sub(&s[j]);
        for m in p + 1..j {
            v = v.sub(&s[m].mul(a2.get(m, j)));
        }
        bld.push(l.a(k, p, j), v.scale(&inv));
    }
    // s Z_K = a A_K^T - P^{K-1}_f, row p of Z_K
    let f = row_times(pf, &d);
    let av: Vec<P> = a.iter().map(c).collect();
    let alpha: Vec<P> = row_times_transpose(&av, &a2).iter().zip(&f).map(|(x, y)| x.sub(y)).collect();
    for j in (0..n).filter(|&j| j != p).chain(std::iter::once(p)) {
        let mut v = alpha[j].clone();
        for m in p + 1..n {
            v = v.sub(&s[m].mul(z2.get(m, j)));
        }
        bld.push(l.z(k, p, j), v.scale(&inv));
    }
    s[p].clone()
}

/// Odd `K`, `b = 0`, last nonzero `a_c`. Level `K - 1` is `M^+` read in
/// `(A, Z')` coordinates: `P^{K-1}_f = g` solves `g A = P_f` and
/// `P^{K-1}_s = g Z' + P_s A^T`.
fn odd_n(bld: &mut Builder, pf: &[P], ps: &[P], a: &[Gq], cpos: usize) -> P {
    let l = bld.layout;
    let (n, k) = (l.n, l.k);
    let inv = inverse_of(&a[cpos]);
    let a1 = l.symbolic_a(k - 1);
    let zp = l.symbolic_z(k - 1);
    let a2 = l.symbolic_a(k);
    let mut g = vec![P::zero(); n];
    for j in 0..=cpos {
        let mut v = pf[j].clone();
        for m in 0..j {
            v = v.sub(&g[m].mul(a1.get(m, j)));
        }
        g[j] = v;
    }
    // g_j = 0 for j > c, row c of A_{K-1}
    for j in cpos + 1..n {
        let mut v = pf[j].clone();
        for m in 0..cpos {
            v = v.sub(&g[m].mul(a1.get(m, j)));
        }
        bld.push(l.a(k - 1, cpos, j), v.scale(&inv));
    }
    // P^{K-1}_s = 0, row c of Z'
    let gamma: Vec<P> = row_times_transpose(ps, &a1).iter().map(|x| x.neg()).collect();
    for j in (0..n).filter(|&j| j != cpos).chain(std::iter::once(cpos)) {
        let mut v = gamma[j].clone();
        for m in 0..cpos {
            v = v.sub(&g[m].mul(zp.get(m, j)));
        }
        bld.push(l.z(k - 1, cpos, j), v.scale(&inv));
    }
    // g = a A_K^T, column c of A_K
    for j in 0..cpos {
        let mut v = g[j].sub(&c(&a[j]));
        for m in j + 1..cpos {
            v = v.sub(&a2.get(j, m).scale(&a[m]));
        }
        bld.push(l.a(k, j, cpos), v.scale(&inv));
    }
    g[cpos].clone()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub index: usize,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub trials: Vec<TrialResult>,
    pub pass: usize,
    pub fail: usize,
}

impl ReductionReport {
    pub fn all_passed(&self) -> bool {
        self.fail == 0
    }
}

impl fmt::Display for ReductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.trials {
            writeln!(f, "TRIAL {} {} {}", t.index, if t.pass { "PASS" } else { "FAIL" }, t.detail)?;
        }
        write!(f, "SUMMARY pass={} fail={}", self.pass, self.fail)
    }
}

/// Seed for trial `t`, independent of execution order.
pub(crate) fn trial_seed(master: u64, t: usize) -> u64 {
    master ^ (t as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub(crate) fn random_value<R: Rng>(rng: &mut R) -> Gq {
    let num = rng.gen_range(-4..=4);
    let re = if rng.gen_bool(0.2) { Rational::new(num, rng.gen_range(2..=5)) } else { Rational::from_integer(num) };
    let im = if rng.gen_bool(0.1) { Rational::from_integer(rng.gen_range(-2..=2)) } else { Rational::zero() };
    Gq::new(re, im)
}

/// A random point of the fiber: random free values, then the residual
/// solved for one free variable with nonzero coefficient, then the
/// substitutions. `None` if no such variable exists at the drawn point.
pub(crate) fn fiber_point<R: Rng>(plan: &EliminationPlan, rng: &mut R) -> Result<Option<Vec<Gq>>> {
    let total = plan.layout().total();
    let mut values: Vec<Gq> = (0..total).map(|_| random_value(rng)).collect();
    let mut vars: Vec<usize> = plan.residual.lhs.variables().into_iter().collect();
    if vars.is_empty() {
        let constant = plan.residual.lhs.constant_value().unwrap_or_else(Gq::zero);
        if constant != plan.residual.rhs {
            return Ok(None);
        }
    }
    vars.shuffle(rng);
    let mut solved = vars.is_empty();
    for v in vars {
        let (coef, rest) = plan.residual.lhs.split_affine(v).ok_or_else(|| Error::Inconsistent("residual is not affine in a free variable".into()))?;
        let cv = coef.evaluate(&values)?;
        if cv.is_zero() {
            continue;
        }
        let rv = rest.evaluate(&values)?;
        values[v] = &(&plan.residual.rhs - &rv) / &cv;
        solved = true;
        break;
    }
    if !solved {
        return Ok(None);
    }
    plan.apply(&mut values)?;
    Ok(Some(values))
}

fn run_trial(plan: &EliminationPlan, rng: &mut impl Rng) -> Result<(bool, String)> {
    let total = plan.layout().total();
    // off the fiber: residual against the pivot of P^{K-1}
    let mut values: Vec<Gq> = (0..total).map(|_| random_value(rng)).collect();
    plan.apply(&mut values)?;
    let chain = plan.assemble(&values)?;
    let partial = ElementaryChain::new(plan.n, chain.factors()[..plan.k - 1].to_vec())?;
    let pivot_value = phi(&partial).to_vec()[plan.pivot].clone();
    let lhs_value = plan.residual.lhs.evaluate(&values)?;
    if pivot_value != lhs_value {
        return Ok((false, format!("residual {} differs from pivot coordinate {}", lhs_value, pivot_value)));
    }
    // on the fiber: every coordinate matches
    for _ in 0..8 {
        let Some(point) = fiber_point(plan, rng)? else { continue };
        let image = phi(&plan.assemble(&point)?).to_vec();
        if image != plan.target {
            let bad = (0..image.len()).filter(|&i| image[i] != plan.target[i]).map(|i| (i + 1).to_string()).collect::<Vec<_>>();
            return Ok((false, format!("fiber point misses coordinates {}", bad.join(","))));
        }
        return Ok((true, format!("residual={} fiber ok", lhs_value)));
    }
    Ok((false, "no fiber point found".into()))
}

/// Checks a plan on random points. Each trial compares the residual with
/// the pivot coordinate at an arbitrary point, then checks `phi = target`
/// exactly at a point of the fiber.
pub fn verify_reduction(plan: &EliminationPlan, trials: usize, seed: u64) -> Result<ReductionReport> {
    plan.check_acyclic()?;
    let mut out = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut rng = rng_from_seed(trial_seed(seed, t));
        let (pass, detail) = run_trial(plan, &mut rng)?;
        out.push(TrialResult { index: t + 1, pass, detail });
    }
    let pass = out.iter().filter(|t| t.pass).count();
    Ok(ReductionReport { fail: out.len() - pass, pass, trials: out })
}

#[cfg(test)]
pub(crate) fn matrix_of(plan: &EliminationPlan, values: &[Gq]) -> crate::algebra::Matrix<Gq> {
    crate::symplectic::psi(&plan.assemble(values).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Gq> {
        xs.iter().map(|&x| Gq::from_integer(x)).collect()
    }

    #[test]
    fn g1_plan_counts() {
        let plan = reduce_fiber(&v(&[1, 0, 0, 0]), 4, 2).unwrap();
        assert_eq!(plan.stratum.to_string(), "G1");
        assert_eq!(plan.substitutions.len(), 3);
        let l = plan.layout();
        let vars: Vec<usize> = plan.substitutions.iter().map(|s| s.var).collect();
        assert_eq!(vars, vec![l.a(4, 0, 1), l.z(4, 0, 1), l.z(4, 0, 0)]);
        assert!(plan.residual.lhs.is_multilinear());
        assert_eq!(plan.pivot, 0);
    }

    #[test]
    fn n0_plan_pivot() {
        let plan = reduce_fiber(&v(&[0, 0, 0, 1]), 4, 2).unwrap();
        assert_eq!(plan.stratum.to_string(), "N0");
        assert_eq!(plan.pivot, 3);
        assert_eq!(plan.residual.rhs, Gq::one());
        let r = verify_reduction(&plan, 10, 5).unwrap();
        assert!(r.all_passed(), "{}", r);
    }

    #[test]
    fn every_stratum_small() {
        for k in [3, 4] {
            for t in [[2, 1, 0, 1], [0, 3, 1, 0], [0, 0, 1, 2], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]] {
                let plan = reduce_fiber(&v(&t), k, 2).unwrap();
                assert_eq!(plan.substitutions.len(), 3);
                let r = verify_reduction(&plan, 6, 9).unwrap();
                assert!(r.all_passed(), "K={} {:?}\n{}\n{}", k, t, plan, r);
            }
        }
    }

    #[test]
    fn rejects_short_chains() {
        assert!(matches!(reduce_fiber(&v(&[1, 0]), 2, 1), Err(Error::Unsupported(_))));
        assert_eq!(reduce_fiber(&v(&[0, 0]), 3, 1), Err(Error::ZeroVector));
    }

    #[test]
    fn fiber_points_are_symplectic() {
        let plan = reduce_fiber(&v(&[0, 1, 1, 0]), 4, 2).unwrap();
        let mut rng = rng_from_seed(3);
        let pt = fiber_point(&plan, &mut rng).unwrap().unwrap();
        let m = matrix_of(&plan, &pt);
        assert_eq!(m.row(3).to_vec(), plan.target);
    }
}
