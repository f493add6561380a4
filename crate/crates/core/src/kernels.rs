//! Hilbert subspaces of the anti-dual, represented only by their reproducing
//! operators, and the cone operations on them.
//!
//! A kernel `H` (hermitian PSD) stands for the subspace `range(H)` with
//! `‖φ‖² = φ^† H⁺ φ`.

use serde::{Deserialize, Serialize};

use crate::duality::DualVector;
use crate::error::{check_dim, Error, Result};
use crate::numerics::{
    hermitian_eigen, inner, norm_sq, pseudo_inverse, pseudo_inverse_sqrt, psd_check, range_projector, ComplexMatrix,
    TolerancePolicy,
};

/// Reproducing operator of a Hilbert subspace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Kernel {
    matrix: ComplexMatrix,
    rank: usize,
}

impl Kernel {
    /// Validates that `matrix` is hermitian PSD under `pol`.
    pub fn new(matrix: ComplexMatrix, pol: &TolerancePolicy) -> Result<Self> {
        let report = psd_check(&matrix, pol)?;
        if !report.is_psd {
            return Err(Error::NotPsd {
                min_eigenvalue: report.min_eigenvalue,
            });
        }
        Ok(Self {
            matrix,
            rank: report.rank,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(n, n),
            rank: 0,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(n),
            rank: n,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    /// `x^† H y`.
    pub fn form(&self, x: &[crate::numerics::C64], y: &[crate::numerics::C64]) -> crate::numerics::C64 {
        inner(x, &self.matrix.mul_vec(y))
    }
}

impl<'de> Deserialize<'de> for Kernel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(deserializer)?;
        Kernel::new(m, &TolerancePolicy::default()).map_err(serde::de::Error::custom)
    }
}

/// A vector of `range(H)` together with its subspace norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceElement {
    pub vector: DualVector,
    pub norm_sq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Membership {
    /// Distance from `φ` to `range(H)`.
    pub residual: f64,
    pub element: Option<SubspaceElement>,
}

/// `φ ∈ range(H)` with norm `φ^† H⁺ φ`; borderline vectors are rejected.
pub fn membership(k: &Kernel, phi: &DualVector, pol: &TolerancePolicy) -> Result<Membership> {
    check_dim(k.dim(), phi.dim())?;
    let proj = range_projector(&k.matrix, pol)?;
    let projected = proj.mul_vec(&phi.coords);
    let residual = crate::numerics::norm_sq(
        &phi.coords.iter().zip(&projected).map(|(a, b)| a - b).collect::<Vec<_>>(),
    )
    .sqrt();
    let limit = pol.rel_rank_tol * (1.0 + norm_sq(&phi.coords).sqrt());
    let element = if residual < limit {
        let pinv = pseudo_inverse(&k.matrix, pol)?;
        let norm_sq = inner(&phi.coords, &pinv.mul_vec(&phi.coords)).re.max(0.0);
        Some(SubspaceElement {
            vector: phi.clone(),
            norm_sq,
        })
    } else {
        None
    };
    Ok(Membership { residual, element })
}

fn same_dim(a: &Kernel, b: &Kernel) -> Result<()> {
    check_dim(a.dim(), b.dim())
}

/// Sum of Hilbert subspaces: `H = H1 + H2`.
pub fn kernel_sum(k1: &Kernel, k2: &Kernel, pol: &TolerancePolicy) -> Result<Kernel> {
    same_dim(k1, k2)?;
    Kernel::new(&k1.matrix + &k2.matrix, pol)
}

/// `λH`; norms scale by `1/λ`, and `λ = 0` gives the zero subspace.
pub fn kernel_scale(lambda: f64, k: &Kernel) -> Result<Kernel> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::NegativeScalar(lambda));
    }
    if lambda == 0.0 {
        return Ok(Kernel::zero(k.dim()));
    }
    Ok(Kernel {
        matrix: k.matrix.scale(lambda),
        rank: k.rank,
    })
}

/// `K1 ≤ K2` iff `H2 − H1` is PSD.
pub fn kernel_leq(k1: &Kernel, k2: &Kernel, pol: &TolerancePolicy) -> Result<bool> {
    same_dim(k1, k2)?;
    Ok(psd_check(&(&k2.matrix - &k1.matrix), pol)?.is_psd)
}

/// `K − K1`, defined when `K1 ≤ K`.
pub fn kernel_difference(k: &Kernel, k1: &Kernel, pol: &TolerancePolicy) -> Result<Kernel> {
    same_dim(k, k1)?;
    let diff = &k.matrix - &k1.matrix;
    let report = psd_check(&diff, pol)?;
    if !report.is_psd {
        return Err(Error::NotDominated {
            min_eigenvalue: report.min_eigenvalue,
        });
    }
    Ok(Kernel {
        matrix: diff,
        rank: report.rank,
    })
}

/// Ranges intersect trivially, i.e. `rank(H1) + rank(H2) = rank(H1 + H2)`.
pub fn mutually_excluding(k1: &Kernel, k2: &Kernel, pol: &TolerancePolicy) -> Result<bool> {
    let sum = kernel_sum(k1, k2, pol)?;
    Ok(k1.rank + k2.rank == sum.rank)
}

/// Outcome of [`min_dominating_scale`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DominatingScale {
    /// Least `λ` with `H1 ≤ λ H2`.
    Scale(f64),
    /// `range(H1) ⊄ range(H2)`: no `λ` works.
    RangeNotContained { residual: f64 },
}

impl DominatingScale {
    pub fn value(&self) -> Option<f64> {
        match self {
            DominatingScale::Scale(l) => Some(*l),
            DominatingScale::RangeNotContained { .. } => None,
        }
    }
}

/// Least `λ` with `H1 ≤ λ H2`: the top eigenvalue of `(H2⁺)^{1/2} H1 (H2⁺)^{1/2}`.
///
/// A zero `K1` is reported as `ZeroKernel` since every `λ` works.
pub fn min_dominating_scale(k1: &Kernel, k2: &Kernel, pol: &TolerancePolicy) -> Result<DominatingScale> {
    same_dim(k1, k2)?;
    if k1.is_zero() {
        return Err(Error::ZeroKernel);
    }
    let proj = range_projector(&k2.matrix, pol)?;
    let n = k1.dim();
    let outside = &(&ComplexMatrix::identity(n) - &proj) * &k1.matrix;
    let residual = outside.max_abs();
    if residual > pol.rel_rank_tol.sqrt() * k1.matrix.max_abs() {
        return Ok(DominatingScale::RangeNotContained { residual });
    }
    let s = pseudo_inverse_sqrt(&k2.matrix, pol)?;
    let m = &(&s * &k1.matrix) * &s;
    let eig = hermitian_eigen(&m, pol)?;
    Ok(DominatingScale::Scale(eig.lambda_max()))
}

/// `K1` is an ordinary subrepresentation of `K`: `K1 ≤ K` and `K1`, `K − K1`
/// are mutually excluding.
pub fn ordinary_subrep_check(k1: &Kernel, k: &Kernel, pol: &TolerancePolicy) -> Result<bool> {
    same_dim(k1, k)?;
    if !kernel_leq(k1, k, pol)? {
        return Ok(false);
    }
    let rest = kernel_difference(k, k1, pol)?;
    mutually_excluding(k1, &rest, pol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainDirection {
    Decreasing,
    Increasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainOptions {
    pub max_steps: usize,
    /// Ceiling on the diagonal quadratic forms of an increasing chain.
    pub growth_ceiling: f64,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            max_steps: 1000,
            growth_ceiling: 1e12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainLimit {
    pub limit: Kernel,
    /// Number of terms generated.
    pub steps: usize,
}

/// Limit of a monotone chain `H_0, H_1, …` produced by `generator`.
///
/// Stops when consecutive terms agree entrywise within `match_tol`. An
/// increasing chain whose diagonal forms `e_k^† H_i e_k` pass the growth
/// ceiling is reported as not majorized.
pub fn chain_limit(
    generator: impl Fn(usize) -> Kernel,
    direction: ChainDirection,
    pol: &TolerancePolicy,
    options: ChainOptions,
) -> Result<ChainLimit> {
    let mut prev = generator(0);
    check_growth(&prev, direction, options, 0)?;
    for step in 1..options.max_steps {
        let next = generator(step);
        same_dim(&prev, &next)?;
        let monotone = match direction {
            ChainDirection::Decreasing => kernel_leq(&next, &prev, pol)?,
            ChainDirection::Increasing => kernel_leq(&prev, &next, pol)?,
        };
        if !monotone {
            return Err(Error::MonotonicityViolation { step });
        }
        check_growth(&next, direction, options, step)?;
        if next.matrix.max_abs_diff(&prev.matrix) < pol.match_tol {
            return Ok(ChainLimit {
                limit: next,
                steps: step + 1,
            });
        }
        prev = next;
    }
    Err(Error::NoConvergence {
        steps: options.max_steps,
    })
}

fn check_growth(k: &Kernel, direction: ChainDirection, options: ChainOptions, step: usize) -> Result<()> {
    if direction == ChainDirection::Decreasing {
        return Ok(());
    }
    let top = (0..k.dim()).map(|i| k.matrix[(i, i)].re).fold(0.0, f64::max);
    if top > options.growth_ceiling {
        return Err(Error::NotMajorized { step, value: top });
    }
    Ok(())
}

/// `H = Σ w_i H_i`; direct iff the ranks of the positively weighted terms add up to `rank(H)`.
///
/// With quadrature nodes and weights this is the finite form of an integral of kernels.
pub fn weighted_kernel_sum(terms: &[(f64, Kernel)], pol: &TolerancePolicy) -> Result<(Kernel, bool)> {
    let (_, first) = terms.first().ok_or(Error::EmptyInput("weighted sum needs at least one term"))?;
    let n = first.dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    let mut rank_total = 0;
    for (w, k) in terms {
        check_dim(n, k.dim())?;
        if !(w.is_finite() && *w >= 0.0) {
            return Err(Error::NegativeWeight(*w));
        }
        if *w > 0.0 {
            acc = &acc + &k.matrix.scale(*w);
            rank_total += k.rank;
        }
    }
    let sum = Kernel::new(acc, pol)?;
    let direct = rank_total == sum.rank;
    Ok((sum, direct))
}
