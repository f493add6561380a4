//! Functionals on an algebra, their Gram matrices, and the dual regular action.
//!
//! A functional is stored by its linear values `r_i = ρ(e_i)`. Dual vectors
//! pair with algebra elements through `⟨x|φ⟩ = Σ conj(x_i) φ_i`, antilinear in
//! the element. With this orientation the Gram matrix `G[i][j] = ρ(e_i* e_j)`
//! satisfies `ρ(y* x) = y^† G x`.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, FiniteStarAlgebra};
use crate::error::{check_dim, Error, Result};
use crate::numerics::{hermitian_eigen, inner, C64, ComplexMatrix, TolerancePolicy, ZERO};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Functional {
    pub values: Vec<C64>,
}

impl Functional {
    pub fn new(values: Vec<C64>) -> Self {
        Self { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![ZERO; dim])
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.values.iter().map(|z| z * s).collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        crate::numerics::max_abs_diff(&self.values, &other.values)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| *z == ZERO)
    }
}

/// A vector of the anti-dual, in coordinates dual to the algebra basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualVector {
    pub coords: Vec<C64>,
}

impl DualVector {
    pub fn new(coords: Vec<C64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `⟨x|φ⟩ = Σ conj(x_i) φ_i`.
    pub fn pair(&self, x: &AlgebraElement) -> Result<C64> {
        check_dim(self.dim(), x.dim())?;
        Ok(inner(&x.coords, &self.coords))
    }
}

/// `ρ(x) = Σ x_i r_i`.
pub fn evaluate(alg: &FiniteStarAlgebra, rho: &Functional, x: &AlgebraElement) -> Result<C64> {
    check_dim(alg.dim(), rho.dim())?;
    check_dim(alg.dim(), x.dim())?;
    Ok(x.coords.iter().zip(&rho.values).map(|(a, b)| a * b).sum())
}

/// `G[i][j] = ρ(e_i* e_j)`.
pub fn gram_matrix(alg: &FiniteStarAlgebra, rho: &Functional) -> Result<ComplexMatrix> {
    check_dim(alg.dim(), rho.dim())?;
    let n = alg.dim();
    let stars: Vec<AlgebraElement> = (0..n).map(|i| alg.involute(&alg.basis(i))).collect::<Result<_>>()?;
    let mut g = ComplexMatrix::zeros(n, n);
    for (i, si) in stars.iter().enumerate() {
        for j in 0..n {
            let prod = alg.multiply(si, &alg.basis(j))?;
            g[(i, j)] = evaluate(alg, rho, &prod)?;
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Positivity {
    pub positive: bool,
    pub gram_rank: usize,
    pub min_eigenvalue: f64,
    pub hermitian_deviation: f64,
}

/// Positive iff the Gram matrix is hermitian and PSD under `pol`.
pub fn is_positive(alg: &FiniteStarAlgebra, rho: &Functional, pol: &TolerancePolicy) -> Result<Positivity> {
    let g = gram_matrix(alg, rho)?;
    let dev = g.hermitian_deviation();
    if dev > pol.match_tol * (1.0 + g.max_abs()) {
        return Ok(Positivity {
            positive: false,
            gram_rank: 0,
            min_eigenvalue: f64::NAN,
            hermitian_deviation: dev,
        });
    }
    let eig = hermitian_eigen(&g, pol)?;
    Ok(Positivity {
        positive: eig.is_psd(pol),
        gram_rank: eig.rank(pol),
        min_eigenvalue: eig.lambda_min(),
        hermitian_deviation: dev,
    })
}

pub(crate) fn require_positive(alg: &FiniteStarAlgebra, rho: &Functional, pol: &TolerancePolicy) -> Result<Positivity> {
    let p = is_positive(alg, rho, pol)?;
    if p.positive {
        Ok(p)
    } else {
        Err(Error::NotPositive {
            min_eigenvalue: p.min_eigenvalue,
        })
    }
}

/// `‖ρ‖ = ρ(e)` for positive `ρ`.
pub fn hilbert_bound(alg: &FiniteStarAlgebra, rho: &Functional, pol: &TolerancePolicy) -> Result<f64> {
    require_positive(alg, rho, pol)?;
    let v = evaluate(alg, rho, &alg.unit())?;
    if v.im.abs() > pol.match_tol * (1.0 + v.re.abs()) {
        return Err(Error::NonRealUnitValue { imag: v.im });
    }
    Ok(v.re.max(0.0))
}

/// `Π(x) = (L_{x*})^†`, so that `⟨y|Π(x)φ⟩ = ⟨x* y|φ⟩`.
pub fn dual_regular_action(alg: &FiniteStarAlgebra, x: &AlgebraElement) -> Result<ComplexMatrix> {
    let xs = alg.involute(x)?;
    Ok(alg.left_mult_matrix(&xs)?.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_matrix_algebra, complex_numbers, cyclic_group_algebra};

    fn pol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn evaluate_examples() {
        let z2 = cyclic_group_algebra(2);
        let rho = Functional::from_real(&[1.0, 0.0]);
        assert_eq!(evaluate(&z2, &rho, &z2.unit()).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(evaluate(&z2, &rho, &z2.basis(1)).unwrap(), ZERO);
        let m2 = build_matrix_algebra(2);
        let tr = Functional::from_real(&[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(evaluate(&m2, &tr, &m2.unit()).unwrap(), C64::new(2.0, 0.0));
    }

    #[test]
    fn gram_examples() {
        let z2 = cyclic_group_algebra(2);
        let t = 0.3;
        let g = gram_matrix(&z2, &Functional::from_real(&[1.0, t])).unwrap();
        assert_eq!(g, ComplexMatrix::from_real(&[&[1.0, t], &[t, 1.0]]));

        let m2 = build_matrix_algebra(2);
        let g = gram_matrix(&m2, &Functional::from_real(&[1.0, 0.0, 0.0, 1.0])).unwrap();
        assert_eq!(g, ComplexMatrix::identity(4));

        let c = complex_numbers();
        let g = gram_matrix(&c, &Functional::from_real(&[2.5])).unwrap();
        assert_eq!(g, ComplexMatrix::from_real(&[&[2.5]]));
    }

    #[test]
    fn positivity_examples() {
        let z2 = cyclic_group_algebra(2);
        let p = is_positive(&z2, &Functional::from_real(&[1.0, 0.5]), &pol()).unwrap();
        assert!(p.positive);
        assert_eq!(p.gram_rank, 2);
        let p = is_positive(&z2, &Functional::from_real(&[1.0, 1.0]), &pol()).unwrap();
        assert!(p.positive);
        assert_eq!(p.gram_rank, 1);
        let p = is_positive(&z2, &Functional::from_real(&[1.0, 2.0]), &pol()).unwrap();
        assert!(!p.positive);
        assert!((p.min_eigenvalue + 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_functional_is_not_positive() {
        let z2 = cyclic_group_algebra(2);
        let rho = Functional::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.5)]);
        assert!(!is_positive(&z2, &rho, &pol()).unwrap().positive);
    }

    #[test]
    fn hilbert_bound_examples() {
        let z2 = cyclic_group_algebra(2);
        for t in [-1.0, -0.4, 0.0, 0.7, 1.0] {
            let b = hilbert_bound(&z2, &Functional::from_real(&[1.0, t]), &pol()).unwrap();
            assert!((b - 1.0).abs() < 1e-15);
        }
        let m2 = build_matrix_algebra(2);
        let b = hilbert_bound(&m2, &Functional::from_real(&[1.0, 0.0, 0.0, 1.0]), &pol()).unwrap();
        assert_eq!(b, 2.0);
        assert_eq!(hilbert_bound(&m2, &Functional::zero(4), &pol()).unwrap(), 0.0);
        assert!(matches!(
            hilbert_bound(&z2, &Functional::from_real(&[1.0, 2.0]), &pol()),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn dual_action_examples() {
        let z2 = cyclic_group_algebra(2);
        assert_eq!(dual_regular_action(&z2, &z2.unit()).unwrap(), ComplexMatrix::identity(2));
        let pg = dual_regular_action(&z2, &z2.basis(1)).unwrap();
        assert_eq!(pg, ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert_eq!(&pg * &pg, ComplexMatrix::identity(2));
    }

    #[test]
    fn dual_action_bracket_identity() {
        // ⟨y|Π(x)φ⟩ = ⟨x*y|φ⟩ on M2 with complex coefficients
        let m2 = build_matrix_algebra(2);
        let x = AlgebraElement::new(vec![C64::new(0.2, 1.0), C64::new(-1.0, 0.3), C64::new(0.5, 0.0), C64::new(0.0, -0.7)]);
        let y = AlgebraElement::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(-0.4, 0.1), C64::new(0.9, 0.9)]);
        let phi = DualVector::new(vec![C64::new(0.3, -0.2), C64::new(1.1, 0.0), C64::new(0.0, 0.6), C64::new(-0.8, 0.4)]);
        let pi_x = dual_regular_action(&m2, &x).unwrap();
        let lhs = DualVector::new(pi_x.mul_vec(&phi.coords)).pair(&y).unwrap();
        let xs_y = m2.multiply(&m2.involute(&x).unwrap(), &y).unwrap();
        let rhs = phi.pair(&xs_y).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn dim_mismatch() {
        let z2 = cyclic_group_algebra(2);
        assert!(matches!(
            gram_matrix(&z2, &Functional::zero(3)),
            Err(Error::DimMismatch { .. })
        ));
    }
}
