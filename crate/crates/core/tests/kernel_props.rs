use proptest::prelude::*;
use rand::Rng;
use starcone_core::duality::DualVector;
use starcone_core::kernels::{
    kernel_difference, kernel_leq, kernel_scale, kernel_sum, membership, min_dominating_scale, DominatingScale,
};
use starcone_core::numerics::{inner, psd_check};
use starcone_core::{Kernel, TolerancePolicy, C64};
use starcone_testkit as tk;

fn norm_sq(k: &Kernel, phi: &[C64]) -> Option<f64> {
    let pol = TolerancePolicy::default();
    membership(k, &DualVector::new(phi.to_vec()), &pol)
        .unwrap()
        .element
        .map(|e| e.norm_sq)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sup_formula_bounds_and_attains(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = tk::rng(seed);
        let rank = rng.gen_range(1..=n);
        let k = tk::random_kernel(&mut rng, n, rank);
        let x = tk::gaussian_vec(&mut rng, n);
        let phi = k.matrix().mul_vec(&x);
        let exact = norm_sq(&k, &phi).unwrap();
        let sampled = tk::sampled_sup(&mut rng, k.matrix(), &phi, 500);
        prop_assert!(sampled <= exact * (1.0 + 1e-7) + 1e-7);
        let at_x = tk::sup_ratio(k.matrix(), &phi, &x);
        prop_assert!((at_x - exact).abs() <= 1e-6 * exact);
    }

    #[test]
    fn sum_norm_is_the_infimum(seed in any::<u64>(), n in 1usize..7) {
        let pol = TolerancePolicy::default();
        let mut rng = tk::rng(seed);
        let k1 = tk::random_kernel_ranked(&mut rng, n, 1);
        let k2 = tk::random_kernel_ranked(&mut rng, n, 1);
        let sum = kernel_sum(&k1, &k2, &pol).unwrap();
        let x = tk::gaussian_vec(&mut rng, n);
        let xi = sum.matrix().mul_vec(&x);
        let ours = norm_sq(&sum, &xi).unwrap();
        let oracle = tk::infimum_norm_oracle(k1.matrix(), k2.matrix(), &xi);
        prop_assert!((ours - oracle).abs() <= 1e-6 * oracle.abs().max(1e-12), "{} vs {}", ours, oracle);
    }

    #[test]
    fn scaling_divides_the_norm(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = tk::rng(seed);
        let k = tk::random_kernel_ranked(&mut rng, n, 1);
        let phi = k.matrix().mul_vec(&tk::gaussian_vec(&mut rng, n));
        let base = norm_sq(&k, &phi).unwrap();
        for lambda in [0.5, 2.0, 10.0] {
            let scaled = norm_sq(&kernel_scale(lambda, &k).unwrap(), &phi).unwrap();
            prop_assert!((scaled - base / lambda).abs() <= 1e-12 * (1.0 + base / lambda) * 1e3);
        }
    }

    #[test]
    fn order_matches_element_norms(seed in any::<u64>(), n in 1usize..6) {
        let pol = TolerancePolicy::default();
        let mut rng = tk::rng(seed);
        let k1 = tk::random_kernel_ranked(&mut rng, n, 1);
        // half the draws are nested, half arbitrary
        let k2 = if rng.gen_bool(0.5) {
            kernel_sum(&k1, &tk::random_kernel_ranked(&mut rng, n, 0), &pol).unwrap()
        } else {
            tk::random_kernel_ranked(&mut rng, n, 1)
        };
        let leq = kernel_leq(&k1, &k2, &pol).unwrap();
        let mut all_ok = true;
        for _ in 0..200 {
            let phi = k1.matrix().mul_vec(&tk::gaussian_vec(&mut rng, n));
            let n1 = norm_sq(&k1, &phi).unwrap();
            match norm_sq(&k2, &phi) {
                Some(n2) if n2 <= n1 * (1.0 + 1e-8) + 1e-8 => {}
                _ => all_ok = false,
            }
        }
        if leq {
            prop_assert!(all_ok);
        }
        if !all_ok {
            prop_assert!(!leq);
        }
    }

    #[test]
    fn difference_is_unique(seed in any::<u64>(), n in 1usize..7) {
        let pol = TolerancePolicy::default();
        let mut rng = tk::rng(seed);
        let k1 = tk::random_kernel_ranked(&mut rng, n, 0);
        let k = kernel_sum(&k1, &tk::random_kernel_ranked(&mut rng, n, 0), &pol).unwrap();
        let d = kernel_difference(&k, &k1, &pol).unwrap();
        let back = kernel_sum(&k1, &d, &pol).unwrap();
        prop_assert!(back.matrix().max_abs_diff(k.matrix()) < 1e-12 * (1.0 + k.matrix().max_abs()));
    }

    #[test]
    fn min_scale_is_a_tight_certificate(seed in any::<u64>(), n in 1usize..7) {
        let pol = TolerancePolicy::default();
        let mut rng = tk::rng(seed);
        // range eigenvalues of H2 kept away from 0 so that the tolerance gap below is visible
        let rank = rng.gen_range(1..=n);
        let k2 = tk::conditioned_kernel(&mut rng, n, rank, 1.0, 3.0);
        // K1 with range inside range(K2)
        let c = tk::gaussian_matrix(&mut rng, n, n);
        let k1 = Kernel::new((&(&(k2.matrix() * &c) * &c.adjoint()) * k2.matrix()).hermitian_part(), &pol).unwrap();
        prop_assume!(!k1.is_zero());
        let lambda = match min_dominating_scale(&k1, &k2, &pol).unwrap() {
            DominatingScale::Scale(l) => l,
            other => return Err(TestCaseError::fail(format!("{other:?}"))),
        };
        let gap = |l: f64| psd_check(&(&k2.matrix().scale(l) - k1.matrix()), &pol).unwrap().is_psd;
        prop_assert!(gap(lambda));
        prop_assert!(!gap(lambda - 10.0 * pol.psd_tol * (1.0 + lambda)));
    }
}

#[test]
fn infimum_oracle_agrees_on_fixed_example() {
    // H1 = diag(1,0), H2 = diag(1,1): ξ = (1,1) splits optimally as ((1/2,0), (1/2,1))
    let h1 = starcone_core::ComplexMatrix::from_diag(&[1.0, 0.0]);
    let h2 = starcone_core::ComplexMatrix::from_diag(&[1.0, 1.0]);
    let xi = [C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
    let v = tk::infimum_norm_oracle(&h1, &h2, &xi);
    assert!((v - 1.5).abs() < 1e-12);
    assert!((inner(&xi, &xi).re - 2.0).abs() < 1e-15);
}
