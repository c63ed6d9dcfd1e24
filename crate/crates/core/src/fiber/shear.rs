use std::collections::BTreeSet;

use crate::algebra::{GaussianRational, Matrix, MultiPoly, Scalar};
use crate::error::Result;
use crate::factor::rng_from_seed;

use super::reduce::{fiber_point, trial_seed, EliminationPlan};

/// `V_{ij,p} = (dp/dx_i) d/dx_j - (dp/dx_j) d/dx_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShearField {
    pub i: usize,
    pub j: usize,
    pub p: MultiPoly,
}

impl ShearField {
    /// The derivation `V(f)`.
    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        let pi = self.p.partial(self.i);
        let pj = self.p.partial(self.j);
        pi.mul(&f.partial(self.j)).sub(&pj.mul(&f.partial(self.i)))
    }
}

/// Fields for every pair `i < j` of free variables of the plan. Pairs where
/// neither variable occurs in the residual give the zero field and are
/// skipped.
pub fn shear_fields(plan: &EliminationPlan) -> Vec<ShearField> {
    let p = &plan.residual.lhs;
    let used = p.variables();
    let free = plan.free_variables();
    let mut out = Vec::new();
    for (x, &i) in free.iter().enumerate() {
        for &j in &free[x + 1..] {
            if used.contains(&i) || used.contains(&j) {
                out.push(ShearField { i, j, p: p.clone() });
            }
        }
    }
    out
}

pub fn check_tangency(field: &ShearField) -> bool {
    field.apply(&field.p).is_zero()
}

/// Degree at most one in every variable, checked by second derivatives.
pub fn check_multilinearity(p: &MultiPoly) -> bool {
    p.variables().into_iter().all(|v| p.partial(v).partial(v).is_zero())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanningReport {
    /// Tangent dimension of the residual hypersurface in the free
    /// variables.
    pub expected: usize,
    pub ranks: Vec<usize>,
}

impl SpanningReport {
    pub fn spans(&self) -> bool {
        !self.ranks.is_empty() && self.ranks.iter().all(|&r| r == self.expected)
    }
}

/// Rank of the field values at `samples` smooth fiber points. A point is
/// smooth when the residual gradient is nonzero there; other draws are
/// rejected.
pub fn spanning_check(plan: &EliminationPlan, samples: usize, seed: u64) -> Result<SpanningReport> {
    let free = plan.free_variables();
    let p = &plan.residual.lhs;
    let used: BTreeSet<usize> = p.variables();
    let grad: Vec<(usize, MultiPoly)> = used.iter().map(|&v| (v, p.partial(v))).collect();
    let fields = shear_fields(plan);
    let column = |v: usize| free.iter().position(|&f| f == v).expect("field variables are free");
    let mut ranks = Vec::with_capacity(samples);
    let mut draw = 0;
    while ranks.len() < samples && draw < samples * 20 {
        let mut rng = rng_from_seed(trial_seed(seed, draw));
        draw += 1;
        let Some(point) = fiber_point(plan, &mut rng)? else { continue };
        let mut g = std::collections::BTreeMap::new();
        for (v, d) in &grad {
            g.insert(*v, d.evaluate(&point)?);
        }
        if g.values().all(|x| x.is_zero()) {
            continue;
        }
        let zero = GaussianRational::zero();
        let mut m = Matrix::zeros(fields.len().max(1), free.len());
        for (row, f) in fields.iter().enumerate() {
            let pi = g.get(&f.i).unwrap_or(&zero);
            let pj = g.get(&f.j).unwrap_or(&zero);
            m.set(row, column(f.j), pi.clone());
            m.set(row, column(f.i), -pj);
        }
        ranks.push(m.exact_rank());
    }
    Ok(SpanningReport { expected: free.len().saturating_sub(1), ranks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiber::reduce_fiber;

    #[test]
    fn g1_fields() {
        let target: Vec<GaussianRational> = [1, 0, 0, 0].iter().map(|&x| GaussianRational::from_integer(x)).collect();
        let plan = reduce_fiber(&target, 4, 2).unwrap();
        assert!(check_multilinearity(&plan.residual.lhs));
        let fields = shear_fields(&plan);
        assert!(!fields.is_empty());
        assert!(fields.iter().all(check_tangency));
        let report = spanning_check(&plan, 3, 1).unwrap();
        assert!(report.spans(), "{:?}", report);
        assert_eq!(report.expected, 12);
    }

    #[test]
    fn multilinearity_detects_squares() {
        let x = MultiPoly::var(0);
        assert!(!check_multilinearity(&x.mul(&x)));
        assert!(check_multilinearity(&x.mul(&MultiPoly::var(1))));
    }
}
