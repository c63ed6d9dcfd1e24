use rand::Rng;
use symfact::algebra::{GaussianRational, MultiPoly};
use symfact::factor::rng_from_seed;
use symfact::fiber::{
    classify_stratum, jacobian_phi, reduce_fiber, shear_fields, surjectivity_sample, check_tangency, verify_reduction, Family, Parity,
    StratumLabel, VarLayout,
};
use symfact::symplectic::phi;

type Gq = GaussianRational;

#[test]
fn jacobian_agrees_with_symbolic_partials() {
    let mut rng = rng_from_seed(0x1ac0b1);
    for (n, k) in [(1, 3), (2, 2), (2, 3), (3, 2)] {
        let layout = VarLayout::new(n, k);
        let vars: Vec<MultiPoly> = (0..layout.total()).map(MultiPoly::var).collect();
        let symbolic = phi(&layout.assemble(&vars, None).unwrap()).to_vec();
        for _ in 0..5 {
            let point: Vec<Gq> = (0..layout.total()).map(|_| Gq::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))).collect();
            let chain = layout.assemble(&point, None).unwrap();
            let jac = jacobian_phi(&chain).unwrap();
            assert_eq!((jac.rows(), jac.cols()), (2 * n, k * n * n));
            for (row, f) in symbolic.iter().enumerate() {
                assert_eq!(f.evaluate(&point).unwrap(), phi(&chain).to_vec()[row]);
                for var in 0..layout.total() {
                    assert_eq!(jac.get(row, var), &f.partial(var).evaluate(&point).unwrap(), "n={} K={} row {} var {}", n, k, row, var);
                }
            }
        }
    }
}

#[test]
fn phi_is_multilinear_in_each_level() {
    let layout = VarLayout::new(2, 3);
    let vars: Vec<MultiPoly> = (0..layout.total()).map(MultiPoly::var).collect();
    for f in phi(&layout.assemble(&vars, None).unwrap()).to_vec() {
        assert!(f.is_multilinear());
    }
}

#[test]
fn surjectivity_hits_every_stratum() {
    let hits = surjectivity_sample(2, 3, 10_000, 0x5eed);
    assert_eq!(hits.len(), StratumLabel::all(2, Parity::KOdd).len());
    for (s, count) in &hits {
        assert!(*count > 0, "stratum {} never hit", s);
    }
    let even = surjectivity_sample(2, 4, 2_000, 0x5eee);
    assert!(even.values().all(|&c| c > 0), "{:?}", even);
}

#[test]
fn classification_by_first_nonzero_coordinate() {
    let v = |xs: &[i64]| xs.iter().map(|&x| Gq::from_integer(x)).collect::<Vec<_>>();
    let s = classify_stratum(&v(&[0, 5, 1, 1]), Parity::KEven).unwrap();
    assert_eq!((s.family, s.index), (Family::G, 2));
    let s = classify_stratum(&v(&[0, 0, 0, 7]), Parity::KEven).unwrap();
    assert_eq!(s.family, Family::N);
    assert!(classify_stratum(&v(&[0, 0, 0, 0]), Parity::KEven).is_err());
}

/// Targets with the pivot set and some later coordinates filled in.
fn target_for(s: StratumLabel, n: usize) -> Vec<Gq> {
    let mut v = vec![Gq::zero(); 2 * n];
    let pos = s.pivot_position(n);
    let (lead, tail) = match s.parity {
        Parity::KEven => (0, n),
        Parity::KOdd => (n, 0),
    };
    match s.family {
        Family::G => {
            v[lead + pos] = Gq::from_ratio(-3, 2);
            v[tail + n - 1] = Gq::from_integer(4);
        }
        Family::N => {
            v[tail + pos] = Gq::from_integer(5);
            if pos > 0 {
                v[tail] = Gq::from_integer(-2);
            }
        }
    }
    assert_eq!(classify_stratum(&v, s.parity).unwrap(), s);
    v
}

#[test]
fn reduction_for_n3_strata() {
    for k in [3, 4] {
        for s in StratumLabel::all(3, Parity::of(k)) {
            let plan = reduce_fiber(&target_for(s, 3), k, 3).unwrap();
            assert_eq!(plan.substitutions.len(), 5, "{}", s);
            plan.check_acyclic().unwrap();
            let report = verify_reduction(&plan, 8, 0xf1b3).unwrap();
            assert!(report.all_passed(), "K={} {}: {}", k, s, report);
        }
    }
}

#[test]
fn shear_fields_tangent_for_n3() {
    let s = StratumLabel::all(3, Parity::KEven)[1];
    let plan = reduce_fiber(&target_for(s, 3), 4, 3).unwrap();
    let fields = shear_fields(&plan);
    assert!(!fields.is_empty());
    assert!(fields.iter().all(check_tangency));
}

#[test]
fn reduction_rejects_bad_input() {
    assert!(reduce_fiber(&vec![Gq::zero(); 4], 4, 2).is_err());
    assert!(reduce_fiber(&vec![Gq::one(); 3], 4, 2).is_err());
}
