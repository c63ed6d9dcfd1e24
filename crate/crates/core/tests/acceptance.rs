//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines always reach the
//! test log. Exits nonzero when a criterion fails, except for criteria
//! listed in `KNOWN_UNATTAINABLE`, which are reported as FAIL but do not
//! fail the run.

use std::time::{Duration, Instant};

use rand::Rng;
use symfact::algebra::{GaussianRational, Matrix, MultiPoly, Scalar, ShapeTag};
use symfact::bounds::{k_bounds, k_recursion_upper, BoundInput};
use symfact::factor::{
    diagonalize_triangular, factor_elementary_7, random_elementary, random_scalar, rng_from_seed, search_k_factor, NumericConfig,
    Orientation, SearchStatus, SearchStrategy,
};
use symfact::fiber::{
    check_multilinearity, check_tangency, in_singular_set, jacobian_phi, reduce_fiber, shear_fields, spanning_check, verify_reduction,
    Family, Parity, StratumLabel, VarLayout,
};
use symfact::io::{to_gaussian, Ring};
use symfact::symplectic::{basis_change, is_symplectic, omega_matrix, skew_basis_conjugate, FormKind, Side, Sign, SymplecticForm};

type Gq = GaussianRational;

/// Exact arithmetic: every comparison below is equality, not a tolerance.
const EXACT: &str = "exact";
/// Residual threshold of criterion 3.
const FIVE_FACTOR_RESIDUAL: f64 = 1e-6;
/// Largest admissible share of degenerate draws in criterion 2.
const DEGENERATE_SHARE: f64 = 0.05;
const SEVEN_FACTOR_BUDGET: Duration = Duration::from_secs(60);
const NUMERIC_BUDGET: Duration = Duration::from_secs(300);

/// Criterion 3 asks for evidence that five factors do not suffice for
/// n = 4. Every elementary matrix has an invertible upper-left block, and
/// the exact search writes such matrices as four factors, so the residual
/// goes to zero. The criterion is run as stated and reported.
const KNOWN_UNATTAINABLE: &[u32] = &[3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: u32, name: &str, tol: &str, start: Instant, out: Outcome, failures: &mut Vec<u32>) {
    let status = if out.pass { "PASS" } else { "FAIL" };
    println!("criterion {} [{}] {} (tolerance: {}; {:.1}s): {}", id, name, status, tol, start.elapsed().as_secs_f64(), out.detail);
    if !out.pass && !KNOWN_UNATTAINABLE.contains(&id) {
        failures.push(id);
    }
}

fn seven_factor() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_from_seed(0xC1);
    let mut checked = 0;
    for n in 2..=5 {
        for ring in [Ring::Gaussian, Ring::Poly(2)] {
            for t in 0..200 {
                let sign = if t % 2 == 0 { Sign::Minus } else { Sign::Plus };
                let e = random_elementary(&mut rng, sign, n, ring);
                let r = match factor_elementary_7(&e) {
                    Ok(r) => r,
                    Err(err) => return Outcome { pass: false, detail: format!("n={} {}: {}", n, ring, err) },
                };
                let factors = r.chain.factors();
                let alternating = factors.windows(2).all(|w| w[0].side() != w[1].side());
                let symmetric = factors.iter().all(|f| f.g().is_symmetric());
                if factors.len() != 7 || !alternating || !symmetric || r.chain.product() != e.materialize() {
                    return Outcome { pass: false, detail: format!("n={} {} draw {} does not reassemble", n, ring, t) };
                }
                checked += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome { pass: elapsed < SEVEN_FACTOR_BUDGET, detail: format!("{} matrices reassembled, {:.1}s of {}s budget", checked, elapsed.as_secs_f64(), SEVEN_FACTOR_BUDGET.as_secs()) }
}

fn four_factor() -> Outcome {
    let mut rng = rng_from_seed(0xC2);
    let (mut found, mut degenerate, total) = (0, 0, 100);
    for t in 0..total {
        let n = 2 + t % 2;
        let sign = if (t / 2) % 2 == 0 { Sign::Minus } else { Sign::Plus };
        let e = random_elementary(&mut rng, sign, n, Ring::Gaussian);
        let target = to_gaussian(&e.materialize()).expect("constant entries");
        let out = search_k_factor(&target, 4, SearchStrategy::ExactElimination).expect("valid input");
        match (out.status, out.factors) {
            (SearchStatus::Found, Some(chain)) if chain.len() == 4 && chain.product() == target => found += 1,
            (SearchStatus::Found, _) => return Outcome { pass: false, detail: format!("draw {} reported Found without a valid chain", t) },
            (SearchStatus::NotFoundEvidence, _) => degenerate += 1,
        }
    }
    let share = degenerate as f64 / total as f64;
    Outcome { pass: share < DEGENERATE_SHARE, detail: format!("found {}/{}, degenerate {}", found, total, degenerate) }
}

fn five_factor_evidence() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_from_seed(0xC3);
    let mut residuals = Vec::new();
    let mut run = 0;
    let mut exact = 0;
    for t in 0..20 {
        let sign = if t % 2 == 0 { Sign::Minus } else { Sign::Plus };
        let e = random_elementary(&mut rng, sign, 4, Ring::Gaussian);
        let target = to_gaussian(&e.materialize()).expect("constant entries");
        let cfg = NumericConfig::new(200, 0xC3_00 + t as u64);
        let out = search_k_factor(&target, 5, SearchStrategy::NumericMultistart(cfg)).expect("valid input");
        let r = out.residual.expect("numeric search reports a residual");
        let witness = search_k_factor(&target, 5, SearchStrategy::ExactElimination).expect("valid input");
        if witness.factors.is_some_and(|c| c.product() == target) {
            exact += 1;
        }
        run += r.restarts_run;
        residuals.push(r.min_residual);
    }
    let above = residuals.iter().filter(|&&r| r > FIVE_FACTOR_RESIDUAL).count();
    let max = residuals.iter().cloned().fold(0.0, f64::max);
    let elapsed = start.elapsed();
    Outcome {
        pass: above == residuals.len() && elapsed < NUMERIC_BUDGET,
        detail: format!(
            "{}/{} residuals above {:e}; largest {:.3e}; {} restarts run (stop once a residual is below 1e-12); exact 5-factor witness for {}/20",
            above,
            residuals.len(),
            FIVE_FACTOR_RESIDUAL,
            max,
            run,
            exact
        ),
    }
}

fn random_triangular(rng: &mut impl Rng, n: usize, orientation: Orientation, ring: Ring) -> Matrix<MultiPoly> {
    let mut lambdas: Vec<i64> = Vec::new();
    while lambdas.len() < n {
        let v = rng.gen_range(-9..=9);
        if v != 0 && !lambdas.contains(&v) {
            lambdas.push(v);
        }
    }
    Matrix::from_fn(n, n, |i, j| {
        let off = match orientation {
            Orientation::Upper => i < j,
            Orientation::Lower => i > j,
        };
        if i == j {
            MultiPoly::from_integer(lambdas[i])
        } else if off {
            random_scalar(rng, ring)
        } else {
            MultiPoly::zero()
        }
    })
}

fn diagonalization() -> Outcome {
    let mut rng = rng_from_seed(0xC4);
    let mut count = 0;
    for t in 0..500 {
        let n = 1 + t % 6;
        let orientation = if t % 2 == 0 { Orientation::Upper } else { Orientation::Lower };
        let ring = if (t / 2) % 2 == 0 { Ring::Gaussian } else { Ring::Poly(2) };
        let a = random_triangular(&mut rng, n, orientation, ring);
        let r = match diagonalize_triangular(&a, orientation) {
            Ok(r) => r,
            Err(err) => return Outcome { pass: false, detail: format!("draw {}: {}", t, err) },
        };
        let lam: Matrix<MultiPoly> = r.lambda.matrix();
        let tag = match orientation {
            Orientation::Upper => ShapeTag::UpperUnitriangular,
            Orientation::Lower => ShapeTag::LowerUnitriangular,
        };
        if !r.k.has_shape(tag) || a.mul(&r.k).unwrap() != r.k.mul(&lam).unwrap() {
            return Outcome { pass: false, detail: format!("draw {}: A K != K Lambda", t) };
        }
        count += 1;
    }
    Outcome { pass: true, detail: format!("{} matrices with A K = K Lambda", count) }
}

fn dense_values(rng: &mut impl Rng, layout: &VarLayout) -> Vec<Gq> {
    (0..layout.total()).map(|_| Gq::from_integer(rng.gen_range(-3..=3))).collect()
}

fn singular_values(rng: &mut impl Rng, layout: &VarLayout) -> Vec<Gq> {
    let (n, k) = (layout.n, layout.k);
    let mut v = dense_values(rng, layout);
    for level in 1..k {
        for r in 0..n {
            v[layout.z(level, r, n - 1)] = Gq::zero();
        }
        if level > 1 {
            for r in 0..n - 1 {
                v[layout.a(level, r, n - 1)] = Gq::zero();
            }
        }
    }
    v
}

fn singularity() -> Outcome {
    let mut rng = rng_from_seed(0xC5);
    let mut errors = Vec::new();
    for (n, k) in [(2, 3), (2, 4), (3, 3)] {
        let layout = VarLayout::new(n, k);
        let mut off = 0;
        while off < 200 {
            let chain = layout.assemble(&dense_values(&mut rng, &layout), None).unwrap();
            if in_singular_set(&chain) {
                continue;
            }
            off += 1;
            if jacobian_phi(&chain).unwrap().exact_rank() != 2 * n {
                errors.push(format!("(n={},K={}) regular point with deficient rank", n, k));
            }
        }
        for _ in 0..50 {
            let chain = layout.assemble(&singular_values(&mut rng, &layout), None).unwrap();
            if !in_singular_set(&chain) || jacobian_phi(&chain).unwrap().exact_rank() >= 2 * n {
                errors.push(format!("(n={},K={}) singular point with full rank", n, k));
            }
        }
    }
    Outcome { pass: errors.is_empty(), detail: if errors.is_empty() { "750 points, 0 misclassified".into() } else { errors.join("; ") } }
}

/// One target per stratum: the defining coordinate, plus some entries of
/// the other half for the G strata.
fn stratum_targets(n: usize, parity: Parity) -> Vec<(StratumLabel, Vec<Gq>)> {
    StratumLabel::all(n, parity)
        .into_iter()
        .map(|s| {
            let mut v = vec![Gq::zero(); 2 * n];
            let pos = s.pivot_position(n);
            let (lead, tail) = match parity {
                Parity::KEven => (0, n),
                Parity::KOdd => (n, 0),
            };
            match s.family {
                Family::G => {
                    v[lead + pos] = Gq::from_integer(2);
                    for j in pos + 1..n {
                        v[lead + j] = Gq::from_integer(j as i64 - 1);
                    }
                    v[tail] = Gq::from_integer(-1);
                }
                Family::N => {
                    v[tail + pos] = Gq::from_integer(3);
                    for j in 0..pos {
                        v[tail + j] = Gq::from_integer(j as i64 + 1);
                    }
                }
            }
            (s, v)
        })
        .collect()
}

fn fiber_plans() -> Vec<(usize, StratumLabel, symfact::fiber::EliminationPlan)> {
    let mut plans = Vec::new();
    for n in [2, 3] {
        for (s, target) in stratum_targets(n, Parity::KEven) {
            plans.push((n, s, reduce_fiber(&target, 4, n).expect("plan")));
        }
    }
    plans
}

fn fiber_reduction(plans: &[(usize, StratumLabel, symfact::fiber::EliminationPlan)]) -> Outcome {
    let mut bad = Vec::new();
    for (n, s, plan) in plans {
        let report = verify_reduction(plan, 50, 0xC6).expect("acyclic plan");
        let eliminated = plan.substitutions.len() == 2 * n - 1;
        if report.pass != 50 || !eliminated || !check_multilinearity(&plan.residual.lhs) {
            bad.push(format!("n={} {}: {}/50", n, s, report.pass));
        }
    }
    Outcome { pass: bad.is_empty(), detail: if bad.is_empty() { format!("{} plans, 50/50 trials each", plans.len()) } else { bad.join("; ") } }
}

fn shear(plans: &[(usize, StratumLabel, symfact::fiber::EliminationPlan)]) -> Outcome {
    let mut bad = Vec::new();
    let mut fields_checked = 0;
    for (n, s, plan) in plans {
        let fields = shear_fields(plan);
        fields_checked += fields.len();
        if !fields.iter().all(check_tangency) {
            bad.push(format!("n={} {}: tangency", n, s));
        }
        let span = spanning_check(plan, 10, 0xC7).expect("plan evaluates");
        if span.ranks.len() != 10 || !span.spans() {
            bad.push(format!("n={} {}: ranks {:?} expected {}", n, s, span.ranks, span.expected));
        }
    }
    Outcome { pass: bad.is_empty(), detail: if bad.is_empty() { format!("{} fields tangent, spanning at 10 points per plan", fields_checked) } else { bad.join("; ") } }
}

fn bounds_table() -> Outcome {
    let rows = [((2, 1), (5, 16)), ((4, 1), (6, 28)), ((2, 2), (5, 20)), ((4, 2), (6, 35))];
    let mut bad = Vec::new();
    for ((n, d), (lo, hi)) in rows {
        let r = k_bounds(&BoundInput::new(n, d)).expect("valid input");
        if (r.lower, r.upper) != (lo, Some(hi)) {
            bad.push(format!("(n={},d={}) gave [{}, {:?}]", n, d, r.lower, r.upper));
        }
    }
    let rec: Vec<usize> = (2..=5).map(|n| k_recursion_upper(4, n)).collect();
    if rec != [7, 14, 21, 28] {
        bad.push(format!("recursion {:?}", rec));
    }
    Outcome { pass: bad.is_empty(), detail: if bad.is_empty() { "4 table rows and recursion 7,14,21,28 reproduced".into() } else { bad.join("; ") } }
}

fn form_transport() -> Outcome {
    for n in 1..=5 {
        let c: Matrix<Gq> = basis_change(n);
        let omega: Matrix<Gq> = omega_matrix(SymplecticForm::standard(n));
        let skew: Matrix<Gq> = omega_matrix(SymplecticForm::skew_diag(n));
        if c.transpose().mul(&omega).unwrap().mul(&c).unwrap() != skew {
            return Outcome { pass: false, detail: format!("C^T Omega C differs for n={}", n) };
        }
    }
    // the same draws as criterion 1
    let mut rng = rng_from_seed(0xC1);
    let mut count = 0;
    for n in 2..=5 {
        for ring in [Ring::Gaussian, Ring::Poly(2)] {
            for t in 0..200 {
                let sign = if t % 2 == 0 { Sign::Minus } else { Sign::Plus };
                let e = random_elementary(&mut rng, sign, n, ring);
                let m = skew_basis_conjugate(&e.materialize()).unwrap();
                let side = match sign {
                    Sign::Minus => Side::Lower,
                    Sign::Plus => Side::Upper,
                };
                if !m.is_unitriangular(side == Side::Upper) || !is_symplectic(&m, FormKind::SkewDiag).unwrap() {
                    return Outcome { pass: false, detail: format!("n={} {} draw {}", n, ring, t) };
                }
                count += 1;
            }
        }
    }
    Outcome { pass: true, detail: format!("forms agree for n<=5; {} conjugated elementary matrices unitriangular and skew-symplectic", count) }
}

fn main() {
    let mut failures = Vec::new();
    let t = Instant::now();
    report(1, "seven-factor reassembly", EXACT, t, seven_factor(), &mut failures);
    let t = Instant::now();
    report(2, "four-factor search", &format!("exact; degenerate share < {}", DEGENERATE_SHARE), t, four_factor(), &mut failures);
    let t = Instant::now();
    report(3, "five-factor evidence n=4", &format!("residual > {:e}", FIVE_FACTOR_RESIDUAL), t, five_factor_evidence(), &mut failures);
    let t = Instant::now();
    report(4, "diagonalization", EXACT, t, diagonalization(), &mut failures);
    let t = Instant::now();
    report(5, "singular set", EXACT, t, singularity(), &mut failures);
    let t = Instant::now();
    let plans = fiber_plans();
    report(6, "fiber reduction", EXACT, t, fiber_reduction(&plans), &mut failures);
    let t = Instant::now();
    report(7, "shear fields", EXACT, t, shear(&plans), &mut failures);
    let t = Instant::now();
    report(8, "bounds table", EXACT, t, bounds_table(), &mut failures);
    let t = Instant::now();
    report(9, "form transport", EXACT, t, form_transport(), &mut failures);
    for id in KNOWN_UNATTAINABLE {
        println!("note: criterion {} is expected to fail; see README", id);
    }
    if !failures.is_empty() {
        eprintln!("unexpected failures: {:?}", failures);
        std::process::exit(1);
    }
}
