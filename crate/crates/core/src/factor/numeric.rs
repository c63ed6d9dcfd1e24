//! Floating-point multistart least squares for `k`-factor decompositions.
//! Evidence only: a small residual suggests a factorization exists, a large
//! one proves nothing.

use nalgebra::{Complex, ComplexField, DMatrix, DVector};
use rand::Rng;

use crate::algebra::{GaussianRational, Matrix};
use crate::symplectic::Side;

use super::random::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericConfig {
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// Remaining restarts are skipped once the best residual drops below
    /// this value, since they cannot lower the minimum meaningfully.
    pub stop_below: f64,
}

impl NumericConfig {
    pub fn new(restarts: usize, seed: u64) -> Self {
        NumericConfig { restarts, seed, max_iterations: 200, stop_below: 1e-12 }
    }
}

/// Best point found by [`numeric_multistart`].
#[derive(Debug, Clone, PartialEq)]
pub struct NumericResult {
    /// Max-norm of `product - target` at the best point.
    pub min_residual: f64,
    pub restarts: usize,
    /// Restarts actually run.
    pub restarts_run: usize,
    /// Real and imaginary parts of the symmetric blocks at the best point.
    pub blocks: Vec<Vec<(f64, f64)>>,
}

/// Seed for restart `r`, independent of execution order.
fn restart_seed(master: u64, r: usize) -> u64 {
    master ^ (r as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

struct Problem<N: ComplexField<RealField = f64> + Copy> {
    n: usize,
    k: usize,
    leading: Side,
    target: DMatrix<N>,
}

impl<N: ComplexField<RealField = f64> + Copy> Problem<N> {
    fn params_per_block(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    fn side(&self, idx: usize) -> Side {
        if idx % 2 == 0 {
            self.leading
        } else {
            self.leading.flip()
        }
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a..self.n {
                out.push((a, b));
            }
        }
        out
    }

    fn factor(&self, idx: usize, x: &DVector<N>) -> DMatrix<N> {
        let n = self.n;
        let mut m = DMatrix::<N>::identity(2 * n, 2 * n);
        let base = idx * self.params_per_block();
        let (ro, co) = match self.side(idx) {
            Side::Lower => (n, 0),
            Side::Upper => (0, n),
        };
        for (p, (a, b)) in self.pairs().into_iter().enumerate() {
            let v = x[base + p];
            m[(ro + a, co + b)] = v;
            m[(ro + b, co + a)] = v;
        }
        m
    }

    /// Residual vector (row-major `product - target`) and its Jacobian.
    fn evaluate(&self, x: &DVector<N>, with_jacobian: bool) -> (DVector<N>, Option<DMatrix<N>>) {
        let n2 = 2 * self.n;
        let factors: Vec<DMatrix<N>> = (0..self.k).map(|i| self.factor(i, x)).collect();
        let mut prefix = vec![DMatrix::<N>::identity(n2, n2)];
        for f in &factors {
            let next = prefix.last().expect("non-empty") * f;
            prefix.push(next);
        }
        let prod = &prefix[self.k];
        let mut r = DVector::<N>::zeros(n2 * n2);
        for i in 0..n2 {
            for j in 0..n2 {
                r[i * n2 + j] = prod[(i, j)] - self.target[(i, j)];
            }
        }
        if !with_jacobian {
            return (r, None);
        }
        let mut suffix = vec![DMatrix::<N>::identity(n2, n2); self.k + 1];
        for i in (0..self.k).rev() {
            suffix[i] = &factors[i] * &suffix[i + 1];
        }
        let pairs = self.pairs();
        let per = pairs.len();
        let mut jac = DMatrix::<N>::zeros(n2 * n2, self.k * per);
        for idx in 0..self.k {
            let (pre, suf) = (&prefix[idx], &suffix[idx + 1]);
            // d(factor) has E_ab + E_ba in the off-diagonal block
            let (ro, co) = match self.side(idx) {
                Side::Lower => (self.n, 0),
                Side::Upper => (0, self.n),
            };
            for (p, &(a, b)) in pairs.iter().enumerate() {
                let col = idx * per + p;
                let mut terms = vec![(ro + a, co + b)];
                if a != b {
                    terms.push((ro + b, co + a));
                }
                for (u, v) in terms {
                    for i in 0..n2 {
                        let left = pre[(i, u)];
                        if left == N::zero() {
                            continue;
                        }
                        for j in 0..n2 {
                            jac[(i * n2 + j, col)] += left * suf[(v, j)];
                        }
                    }
                }
            }
        }
        (r, Some(jac))
    }

    fn cost(r: &DVector<N>) -> f64 {
        r.iter().map(|v| v.modulus_squared()).sum()
    }

    fn max_norm(r: &DVector<N>) -> f64 {
        r.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    /// Levenberg-Marquardt from `x0`; returns the final point.
    fn solve(&self, mut x: DVector<N>, max_iterations: usize) -> DVector<N> {
        let mut mu = 1e-3;
        let (mut r, _) = self.evaluate(&x, false);
        let mut cost = Self::cost(&r);
        for _ in 0..max_iterations {
            if Self::max_norm(&r) < 1e-14 {
                break;
            }
            let (_, jac) = self.evaluate(&x, true);
            let jac = jac.expect("requested");
            let jh = jac.adjoint();
            let h = &jh * &jac;
            let g = &jh * &r;
            let mut improved = false;
            while mu < 1e12 {
                let mut sys = h.clone();
                for d in 0..sys.nrows() {
                    sys[(d, d)] += N::from_real(mu);
                }
                let step = match sys.clone().cholesky() {
                    Some(ch) => ch.solve(&(-&g)),
                    None => match sys.lu().solve(&(-&g)) {
                        Some(s) => s,
                        None => {
                            mu *= 4.0;
                            continue;
                        }
                    },
                };
                let cand = &x + &step;
                let (rc, _) = self.evaluate(&cand, false);
                let cc = Self::cost(&rc);
                if cc < cost {
                    let rel = (cost - cc) / cost.max(1e-300);
                    x = cand;
                    r = rc;
                    cost = cc;
                    mu = (mu / 3.0).max(1e-15);
                    improved = rel > 1e-14;
                    break;
                }
                mu *= 4.0;
            }
            if !improved {
                break;
            }
        }
        x
    }
}

trait FromParts: ComplexField<RealField = f64> + Copy {
    fn from_parts(re: f64, im: f64) -> Self;
    fn parts(&self) -> (f64, f64);
}

impl FromParts for f64 {
    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }
    fn parts(&self) -> (f64, f64) {
        (*self, 0.0)
    }
}

impl FromParts for Complex<f64> {
    fn from_parts(re: f64, im: f64) -> Self {
        Complex::new(re, im)
    }
    fn parts(&self) -> (f64, f64) {
        (self.re, self.im)
    }
}

fn run<N: FromParts>(target: &Matrix<GaussianRational>, k: usize, leading: Side, cfg: &NumericConfig, complex: bool) -> NumericResult {
    let n2 = target.rows();
    let t = DMatrix::<N>::from_fn(n2, n2, |i, j| {
        let (re, im) = target.get(i, j).to_f64_pair();
        N::from_parts(re, im)
    });
    let problem = Problem { n: n2 / 2, k, leading, target: t };
    let dim = k * problem.params_per_block();
    let mut best: Option<(f64, DVector<N>)> = None;
    let mut restarts_run = 0;
    for r in 0..cfg.restarts {
        if best.as_ref().is_some_and(|(b, _)| *b < cfg.stop_below) {
            break;
        }
        restarts_run += 1;
        let mut rng = rng_from_seed(restart_seed(cfg.seed, r));
        let x0 = DVector::<N>::from_fn(dim, |_, _| {
            let re = rng.gen_range(-1.0..1.0);
            let im = if complex { rng.gen_range(-1.0..1.0) } else { 0.0 };
            N::from_parts(re, im)
        });
        let x = problem.solve(x0, cfg.max_iterations);
        let (res, _) = problem.evaluate(&x, false);
        let m = Problem::<N>::max_norm(&res);
        if best.as_ref().map_or(true, |(b, _)| m < *b) {
            best = Some((m, x));
        }
    }
    let per = problem.params_per_block();
    let (min_residual, blocks) = match best {
        Some((m, x)) => (m, (0..k).map(|i| (0..per).map(|p| x[i * per + p].parts()).collect()).collect()),
        None => (f64::INFINITY, Vec::new()),
    };
    NumericResult { min_residual, restarts: cfg.restarts, restarts_run, blocks }
}

/// Minimizes `|| F_1 ... F_k - target ||` over symmetric blocks from
/// `cfg.restarts` random starting points. Works in real arithmetic when the
/// target is real, complex otherwise.
pub fn numeric_multistart(target: &Matrix<GaussianRational>, k: usize, leading: Side, cfg: &NumericConfig) -> NumericResult {
    let real = target.entries().iter().all(|v| v.is_real());
    if real {
        run::<f64>(target, k, leading, cfg, false)
    } else {
        run::<Complex<f64>>(target, k, leading, cfg, true)
    }
}
