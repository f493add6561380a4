//! Functional ↔ kernel ↔ GNS representation, *-invariance, and pullback of
//! kernels along *-homomorphisms.
//!
//! The reproducing operator attached to a positive functional is its Gram
//! matrix itself. Under that orientation `ρ(x) = ⟨e|H x⟩`, `H = T^†T` for the
//! orbit map `T: x ↦ π(x)ξ`, and `Π(x) H = H L_x` all hold as matrix identities.

use serde::Serialize;

use crate::algebra::FiniteStarAlgebra;
use crate::duality::{dual_regular_action, gram_matrix, require_positive, Functional};
use crate::error::{check_dim, Error, Result};
use crate::gns::{gns_construct, verify_star_rep, GnsRepresentation};
use crate::kernels::{kernel_leq, kernel_scale, kernel_sum, Kernel};
use crate::numerics::{C64, ComplexMatrix, TolerancePolicy};
use crate::report::ValidationReport;

/// Linear map `α: A1 → A2` (an `n2×n1` matrix on coordinates) that is
/// multiplicative, *-preserving and unital.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarHomomorphism {
    #[serde(skip)]
    source: FiniteStarAlgebra,
    #[serde(skip)]
    target: FiniteStarAlgebra,
    matrix: ComplexMatrix,
}

impl StarHomomorphism {
    pub fn new(
        source: FiniteStarAlgebra,
        target: FiniteStarAlgebra,
        matrix: ComplexMatrix,
        pol: &TolerancePolicy,
    ) -> Result<Self> {
        let (hom, report) = Self::check(source, target, matrix, pol)?;
        if !report.passed {
            let worst = report
                .failures()
                .map(|c| format!("{} violation {:e}", c.name, c.violation))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::InvalidHomomorphism(worst));
        }
        Ok(hom)
    }

    /// Shape-checks the matrix and returns it with its validation report, even when the report fails.
    pub fn check(
        source: FiniteStarAlgebra,
        target: FiniteStarAlgebra,
        matrix: ComplexMatrix,
        pol: &TolerancePolicy,
    ) -> Result<(Self, ValidationReport)> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::ShapeMismatch(format!(
                "homomorphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        let hom = Self {
            source,
            target,
            matrix,
        };
        let report = hom.validate(pol);
        Ok((hom, report))
    }

    pub fn identity(alg: &FiniteStarAlgebra) -> Self {
        Self {
            source: alg.clone(),
            target: alg.clone(),
            matrix: ComplexMatrix::identity(alg.dim()),
        }
    }

    pub fn source(&self) -> &FiniteStarAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteStarAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Checks `multiplicative`, `star` and `unital` on basis elements.
    pub fn validate(&self, pol: &TolerancePolicy) -> ValidationReport {
        let (a1, a2) = (&self.source, &self.target);
        let image = |x: &crate::algebra::AlgebraElement| {
            crate::algebra::AlgebraElement::new(self.matrix.mul_vec(&x.coords))
        };
        let mut mult: f64 = 0.0;
        let mut star: f64 = 0.0;
        for i in 0..a1.dim() {
            let ei = a1.basis(i);
            let ai = image(&ei);
            for j in 0..a1.dim() {
                let lhs = image(&a1.multiply(&ei, &a1.basis(j)).unwrap());
                let rhs = a2.multiply(&ai, &image(&a1.basis(j))).unwrap();
                mult = mult.max(crate::numerics::max_abs_diff(&lhs.coords, &rhs.coords));
            }
            let lhs = image(&a1.involute(&ei).unwrap());
            let rhs = a2.involute(&ai).unwrap();
            star = star.max(crate::numerics::max_abs_diff(&lhs.coords, &rhs.coords));
        }
        let unit = crate::numerics::max_abs_diff(&image(&a1.unit()).coords, &a2.unit().coords);
        let mut report = ValidationReport::new();
        report.push("multiplicative", mult, pol.match_tol);
        report.push("star", star, pol.match_tol);
        report.push("unital", unit, pol.match_tol);
        report
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &StarHomomorphism) -> Result<StarHomomorphism> {
        check_dim(self.target.dim(), outer.source.dim())?;
        Ok(StarHomomorphism {
            source: self.source.clone(),
            target: outer.target.clone(),
            matrix: &outer.matrix * &self.matrix,
        })
    }
}

/// The Gram matrix of `ρ` as a kernel on the anti-dual.
pub fn functional_to_kernel(alg: &FiniteStarAlgebra, rho: &Functional, pol: &TolerancePolicy) -> Result<Kernel> {
    require_positive(alg, rho, pol)?;
    Kernel::new(gram_matrix(alg, rho)?, pol)
}

/// Max deviation of `Π(e_i) H = H L_{e_i}` over basis elements.
pub fn star_invariance_deviation(alg: &FiniteStarAlgebra, k: &Kernel) -> Result<f64> {
    check_dim(alg.dim(), k.dim())?;
    let h = k.matrix();
    let mut dev: f64 = 0.0;
    for (i, l) in alg.left_mult_basis().iter().enumerate() {
        let pi = dual_regular_action(alg, &alg.basis(i))?;
        dev = dev.max((&pi * h).max_abs_diff(&(h * l)));
    }
    Ok(dev)
}

pub fn is_star_invariant(alg: &FiniteStarAlgebra, k: &Kernel, pol: &TolerancePolicy) -> Result<bool> {
    Ok(star_invariance_deviation(alg, k)? <= pol.match_tol * (1.0 + k.matrix().max_abs()))
}

fn require_star_invariant(alg: &FiniteStarAlgebra, k: &Kernel, pol: &TolerancePolicy) -> Result<()> {
    let dev = star_invariance_deviation(alg, k)?;
    if dev <= pol.match_tol * (1.0 + k.matrix().max_abs()) {
        Ok(())
    } else {
        Err(Error::NotStarInvariant { deviation: dev })
    }
}

/// `r_j = ⟨e|H e_j⟩ = Σ_i conj(e_i) H[i][j]`.
pub fn kernel_to_functional(alg: &FiniteStarAlgebra, k: &Kernel, pol: &TolerancePolicy) -> Result<Functional> {
    require_star_invariant(alg, k, pol)?;
    Ok(read_functional(alg, k.matrix()))
}

fn read_functional(alg: &FiniteStarAlgebra, h: &ComplexMatrix) -> Functional {
    let unit = alg.unit().coords;
    let n = alg.dim();
    Functional::new(
        (0..n)
            .map(|j| (0..n).map(|i| unit[i].conj() * h[(i, j)]).sum::<C64>())
            .collect(),
    )
}

/// GNS representation of the functional read off a *-invariant kernel.
pub fn kernel_to_rep(alg: &FiniteStarAlgebra, k: &Kernel, pol: &TolerancePolicy) -> Result<GnsRepresentation> {
    let rho = kernel_to_functional(alg, k, pol)?;
    gns_construct(alg, &rho, pol)
}

/// `H = T^†T` with `T` the orbit map `x ↦ π(x)ξ`.
pub fn rep_to_kernel(rep: &GnsRepresentation, pol: &TolerancePolicy) -> Result<Kernel> {
    let report = verify_star_rep(rep, pol);
    if !report.passed {
        let names = report.failures().map(|c| c.name.clone()).collect::<Vec<_>>().join(", ");
        return Err(Error::InvalidRepresentation(format!("fails {names}")));
    }
    let n = rep.algebra.dim();
    if rep.rep_dim == 0 {
        return Ok(Kernel::zero(n));
    }
    let t = rep.orbit_matrix();
    Kernel::new((&t.adjoint() * &t).hermitian_part(), pol)
}

/// `H1 = α^† H2 α`: the kernel of `ρ2 ∘ α` on the source algebra.
pub fn pullback(alpha: &StarHomomorphism, k2: &Kernel, pol: &TolerancePolicy) -> Result<Kernel> {
    require_star_invariant(&alpha.target, k2, pol)?;
    let a = &alpha.matrix;
    let h1 = (&(&a.adjoint() * k2.matrix()) * a).hermitian_part();
    let k1 = Kernel::new(h1, pol)?;
    let dev = star_invariance_deviation(&alpha.source, &k1)?;
    if dev > 10.0 * pol.match_tol * (1.0 + k1.matrix().max_abs()) {
        return Err(Error::PullbackInvarianceFailure { deviation: dev });
    }
    Ok(k1)
}

/// Checks that functional → kernel preserves sums, scaling and order.
///
/// Checks: `sum` and `scale` deviations between the two routes, and `order`
/// (0 when the functional order and the kernel order agree).
pub fn cone_morphism_audit(
    alg: &FiniteStarAlgebra,
    rho1: &Functional,
    rho2: &Functional,
    lambda: f64,
    pol: &TolerancePolicy,
) -> Result<ValidationReport> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::NegativeScalar(lambda));
    }
    let k1 = functional_to_kernel(alg, rho1, pol)?;
    let k2 = functional_to_kernel(alg, rho2, pol)?;

    let direct_sum = gram_matrix(alg, &rho1.add(rho2))?;
    let via_kernels = kernel_sum(&k1, &k2, pol)?;
    let sum_dev = direct_sum.max_abs_diff(via_kernels.matrix());

    let direct_scaled = gram_matrix(alg, &rho1.scale(lambda))?;
    let via_scale = kernel_scale(lambda, &k1)?;
    let scale_dev = direct_scaled.max_abs_diff(via_scale.matrix());

    // ρ1 ≤ ρ2 in the functional cone iff ρ2 − ρ1 is positive
    let functional_order = crate::duality::is_positive(alg, &rho2.sub(rho1), pol)?.positive;
    let kernel_order = kernel_leq(&k1, &k2, pol)?;
    let diff_dev = gram_matrix(alg, &rho2.sub(rho1))?.max_abs_diff(&(k2.matrix() - k1.matrix()));

    let mut report = ValidationReport::new();
    report.push("sum", sum_dev, pol.match_tol);
    report.push("scale", scale_dev, pol.match_tol);
    report.push("difference", diff_dev, pol.match_tol);
    report.push_flag("order", functional_order == kernel_order);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_matrix_algebra, complex_numbers, cyclic_group_algebra};
    use crate::numerics::c64;

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn z2_to_m2() -> StarHomomorphism {
        // e ↦ E11 + E22, g ↦ E11 − E22
        let m = ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 0.0], &[0.0, 0.0], &[1.0, -1.0]]);
        StarHomomorphism::new(cyclic_group_algebra(2), build_matrix_algebra(2), m, &pol()).unwrap()
    }

    #[test]
    fn functional_to_kernel_examples() {
        let c = complex_numbers();
        assert_eq!(
            functional_to_kernel(&c, &Functional::from_real(&[1.0]), &pol()).unwrap().matrix(),
            &ComplexMatrix::identity(1)
        );
        let z2 = cyclic_group_algebra(2);
        let k = functional_to_kernel(&z2, &Functional::from_real(&[1.0, -0.25]), &pol()).unwrap();
        assert_eq!(k.matrix(), &ComplexMatrix::from_real(&[&[1.0, -0.25], &[-0.25, 1.0]]));
        let m2 = build_matrix_algebra(2);
        let k = functional_to_kernel(&m2, &Functional::from_real(&[1.0, 0.0, 0.0, 1.0]), &pol()).unwrap();
        assert_eq!(k.matrix(), &ComplexMatrix::identity(4));
    }

    #[test]
    fn kernel_to_functional_examples() {
        let z2 = cyclic_group_algebra(2);
        let f = kernel_to_functional(&z2, &Kernel::identity(2), &pol()).unwrap();
        assert_eq!(f, Functional::from_real(&[1.0, 0.0]));
        let ones = Kernel::new(ComplexMatrix::from_real(&[&[1.0, 1.0], &[1.0, 1.0]]), &pol()).unwrap();
        assert_eq!(kernel_to_functional(&z2, &ones, &pol()).unwrap(), Functional::from_real(&[1.0, 1.0]));
        assert_eq!(kernel_to_functional(&z2, &Kernel::zero(2), &pol()).unwrap(), Functional::zero(2));
    }

    #[test]
    fn invariance_examples() {
        let z2 = cyclic_group_algebra(2);
        let g = functional_to_kernel(&z2, &Functional::from_real(&[1.0, 0.4]), &pol()).unwrap();
        assert!(is_star_invariant(&z2, &g, &pol()).unwrap());
        let d = Kernel::new(ComplexMatrix::from_diag(&[1.0, 0.0]), &pol()).unwrap();
        assert!(!is_star_invariant(&z2, &d, &pol()).unwrap());
        assert!(matches!(
            kernel_to_functional(&z2, &d, &pol()),
            Err(Error::NotStarInvariant { .. })
        ));
        assert!(is_star_invariant(&z2, &Kernel::zero(2), &pol()).unwrap());
    }

    #[test]
    fn mirrored_gram_orientation_is_rejected() {
        // H'[i][j] = ρ(e_i e_j*) is the right-regular orientation; for a non-tracial state it is not a
        // *-invariant kernel for the left dual action.
        let m2 = build_matrix_algebra(2);
        let rho = Functional::new(vec![c64(0.7, 0.0), c64(0.1, 0.2), c64(0.1, -0.2), c64(0.3, 0.0)]);
        let g = functional_to_kernel(&m2, &rho, &pol()).unwrap();
        assert!(is_star_invariant(&m2, &g, &pol()).unwrap());
        assert_eq!(kernel_to_functional(&m2, &g, &pol()).unwrap(), rho);

        let mirrored = ComplexMatrix::from_fn(4, 4, |i, j| {
            let ejs = m2.involute(&m2.basis(j)).unwrap();
            let p = m2.multiply(&m2.basis(i), &ejs).unwrap();
            crate::duality::evaluate(&m2, &rho, &p).unwrap()
        });
        let rejected = match Kernel::new(mirrored, &pol()) {
            Err(_) => true,
            Ok(k) => !is_star_invariant(&m2, &k, &pol()).unwrap(),
        };
        assert!(rejected);
    }

    #[test]
    fn kernel_rep_round_trips() {
        let z2 = cyclic_group_algebra(2);
        let kp = functional_to_kernel(&z2, &Functional::from_real(&[1.0, 1.0]), &pol()).unwrap();
        let rep = kernel_to_rep(&z2, &kp, &pol()).unwrap();
        assert_eq!(rep.rep_dim, 1);

        let m2 = build_matrix_algebra(2);
        let rep = kernel_to_rep(&m2, &Kernel::identity(4), &pol()).unwrap();
        assert_eq!(rep.rep_dim, 4);
        let back = rep_to_kernel(&rep, &pol()).unwrap();
        assert!(back.matrix().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);

        let rep = kernel_to_rep(&z2, &Kernel::zero(2), &pol()).unwrap();
        assert_eq!(rep.rep_dim, 0);
        assert_eq!(rep_to_kernel(&rep, &pol()).unwrap(), Kernel::zero(2));
    }

    #[test]
    fn rep_to_kernel_examples() {
        let z2 = cyclic_group_algebra(2);
        let rep = gns_construct(&z2, &Functional::from_real(&[1.0, 0.0]), &pol()).unwrap();
        assert!(rep_to_kernel(&rep, &pol()).unwrap().matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        let c = complex_numbers();
        let rep = gns_construct(&c, &Functional::from_real(&[1.0]), &pol()).unwrap();
        assert!(rep_to_kernel(&rep, &pol()).unwrap().matrix().max_abs_diff(&ComplexMatrix::identity(1)) < 1e-14);

        let mut broken = gns_construct(&z2, &Functional::from_real(&[1.0, 0.0]), &pol()).unwrap();
        broken.matrices[1] = broken.matrices[1].scale(2.0);
        assert!(matches!(rep_to_kernel(&broken, &pol()), Err(Error::InvalidRepresentation(_))));
    }

    #[test]
    fn pullback_examples() {
        let z2 = cyclic_group_algebra(2);
        let k = functional_to_kernel(&z2, &Functional::from_real(&[1.0, 0.5]), &pol()).unwrap();
        assert_eq!(pullback(&StarHomomorphism::identity(&z2), &k, &pol()).unwrap(), k);

        let m2 = build_matrix_algebra(2);
        let tr = functional_to_kernel(&m2, &Functional::from_real(&[1.0, 0.0, 0.0, 1.0]), &pol()).unwrap();
        let h1 = pullback(&z2_to_m2(), &tr, &pol()).unwrap();
        assert_eq!(h1.matrix(), &ComplexMatrix::from_diag(&[2.0, 2.0]));

        // ℂ → M2, 1 ↦ e
        let c = complex_numbers();
        let unit = ComplexMatrix::from_real(&[&[1.0], &[0.0], &[0.0], &[1.0]]);
        let alpha = StarHomomorphism::new(c, m2.clone(), unit, &pol()).unwrap();
        let rho = Functional::new(vec![c64(0.6, 0.0), c64(0.1, 0.3), c64(0.1, -0.3), c64(0.9, 0.0)]);
        let k = functional_to_kernel(&m2, &rho, &pol()).unwrap();
        let h1 = pullback(&alpha, &k, &pol()).unwrap();
        assert!((h1.matrix()[(0, 0)] - c64(1.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pullback_rejects_non_invariant_input() {
        let d = Kernel::new(ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]), &pol()).unwrap();
        assert!(matches!(pullback(&z2_to_m2(), &d, &pol()), Err(Error::NotStarInvariant { .. })));
    }

    #[test]
    fn invalid_homomorphisms_are_rejected() {
        // g ↦ E12 is not multiplicative (E12² = 0 ≠ e)
        let m = ComplexMatrix::from_real(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0], &[1.0, 0.0]]);
        let r = StarHomomorphism::new(cyclic_group_algebra(2), build_matrix_algebra(2), m, &pol());
        assert!(matches!(r, Err(Error::InvalidHomomorphism(_))));
    }

    #[test]
    fn cone_audit_z2_characters() {
        let z2 = cyclic_group_algebra(2);
        let r = cone_morphism_audit(
            &z2,
            &Functional::from_real(&[1.0, 1.0]),
            &Functional::from_real(&[1.0, -1.0]),
            2.0,
            &pol(),
        )
        .unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.checks.iter().all(|c| c.violation == 0.0));

        let r = cone_morphism_audit(&z2, &Functional::from_real(&[1.0, 0.2]), &Functional::zero(2), 0.0, &pol()).unwrap();
        assert!(r.passed, "{r:?}");
    }
}
