use proptest::prelude::*;
use starcone_core::duality::{evaluate, is_positive};
use starcone_core::gns::{commutant, decompose, gns_construct, intertwiner, is_irreducible, verify_star_rep};
use starcone_core::{ComplexMatrix, Error, GnsRepresentation, TolerancePolicy};
use starcone_testkit as tk;

fn conjugated(rep: &GnsRepresentation, w: &ComplexMatrix) -> GnsRepresentation {
    let mut out = rep.clone();
    out.matrices = rep.matrices.iter().map(|m| &(w * m) * &w.adjoint()).collect();
    out.cyclic_vector = w.mul_vec(&rep.cyclic_vector);
    out.embedding = w * &rep.embedding;
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gns_round_trip_and_dimension_law(seed in any::<u64>()) {
        let pol = TolerancePolicy::default();
        let mut rng = tk::rng(seed);
        let s = tk::random_algebra(&mut rng);
        let rho = tk::random_positive_functional(&mut rng, &s);
        let rep = gns_construct(&s.algebra, &rho, &pol).unwrap();
        let report = verify_star_rep(&rep, &pol);
        prop_assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
        prop_assert!(rep.reproduced_functional().max_abs_diff(&rho) < 1e-8);
        prop_assert_eq!(rep.rep_dim, is_positive(&s.algebra, &rho, &pol).unwrap().gram_rank);
    }

    #[test]
    fn intertwiner_recovers_hidden_unitary(seed in any::<u64>()) {
        let pol = TolerancePolicy::default();
        let mut rng = tk::rng(seed);
        let s = tk::random_algebra(&mut rng);
        let rho = tk::random_positive_functional(&mut rng, &s);
        let rep = gns_construct(&s.algebra, &rho, &pol).unwrap();
        let w = tk::random_unitary(&mut rng, rep.rep_dim);
        let other = conjugated(&rep, &w);
        let u = intertwiner(&rep, &other, &pol).unwrap();
        prop_assert!(u.max_abs_diff(&w) < 1e-8);
    }

    #[test]
    fn intertwiner_rejects_distinct_functionals(seed in any::<u64>()) {
        let pol = TolerancePolicy::default();
        let mut rng = tk::rng(seed);
        let s = tk::random_algebra(&mut rng);
        let rho = tk::random_positive_functional(&mut rng, &s);
        let bump = tk::random_positive_functional(&mut rng, &s);
        let rho2 = rho.add(&bump.scale(1e-3 / (1.0 + bump.values.iter().map(|z| z.norm()).fold(0.0, f64::max))));
        prop_assume!(rho2.max_abs_diff(&rho) > 1e-6);
        let r1 = gns_construct(&s.algebra, &rho, &pol).unwrap();
        let r2 = gns_construct(&s.algebra, &rho2, &pol).unwrap();
        let rejected = matches!(intertwiner(&r1, &r2, &pol), Err(Error::NotEquivalent { .. }));
        prop_assert!(rejected);
    }

    #[test]
    fn decomposition_is_sound(seed in any::<u64>()) {
        let pol = TolerancePolicy::default();
        let mut rng = tk::rng(seed);
        let s = tk::random_algebra(&mut rng);
        let rho = tk::random_positive_functional(&mut rng, &s);
        let dec = decompose(&s.algebra, &rho, &pol, seed).unwrap();
        prop_assert!(dec.reconstruction_error < 1e-8);
        let unit = s.algebra.unit();
        let mut total = 0.0;
        for c in &dec.components {
            prop_assert!(is_irreducible(&c.representation, &pol).unwrap());
            prop_assert_eq!(commutant(&c.representation, &pol).unwrap().dimension, 1);
            total += c.weight * evaluate(&s.algebra, &c.functional, &unit).unwrap().re;
        }
        let whole = evaluate(&s.algebra, &rho, &unit).unwrap().re;
        prop_assert!((total - whole).abs() < 1e-8 * (1.0 + whole));
        let mut seen: Vec<usize> = dec.multiplicity_classes.concat();
        seen.sort();
        prop_assert_eq!(seen, (0..dec.components.len()).collect::<Vec<_>>());
    }
}

#[test]
fn decomposition_is_seed_deterministic() {
    let pol = TolerancePolicy::default();
    let s = tk::sample_s3();
    let dec1 = decompose(&s.algebra, &s.trace, &pol, 5).unwrap();
    let dec2 = decompose(&s.algebra, &s.trace, &pol, 5).unwrap();
    assert_eq!(dec1, dec2);
    // S3 regular representation: 1 + 1 + 2·2 irreducible dimensions
    let mut dims: Vec<usize> = dec1.components.iter().map(|c| c.representation.rep_dim).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 1, 2, 2]);
    assert_eq!(dec1.multiplicity_classes.len(), 3);
}
