//! Seeded sample generators and independent oracles shared by the test suites.
//!
//! The oracles use nalgebra's decompositions so that they do not share a code
//! path with the Jacobi solver in `starcone-core`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use starcone_core::algebra::{
    build_matrix_algebra, complex_numbers, cyclic_group_algebra, direct_sum_algebra, s3_cayley_table,
    symmetric_group_s3,
};
use starcone_core::{
    AlgebraElement, ComplexMatrix, FiniteStarAlgebra, Functional, Kernel, StarHomomorphism, TolerancePolicy, C64,
};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// An algebra together with a faithful positive functional and a few
/// projections (or other elements `p` with `p* = p = p²`), all in the
/// algebra's own coordinates.
#[derive(Debug, Clone)]
pub struct SampleAlgebra {
    pub name: String,
    pub algebra: FiniteStarAlgebra,
    pub trace: Functional,
    pub projections: Vec<AlgebraElement>,
}

impl SampleAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

fn real_coords(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

pub fn sample_complex() -> SampleAlgebra {
    SampleAlgebra {
        name: "C".into(),
        algebra: complex_numbers(),
        trace: Functional::from_real(&[1.0]),
        projections: vec![],
    }
}

pub fn sample_matrix(m: usize) -> SampleAlgebra {
    let n = m * m;
    let mut trace = vec![0.0; n];
    let mut projections = Vec::new();
    for p in 0..m {
        trace[p * m + p] = 1.0;
        let mut e = vec![0.0; n];
        e[p * m + p] = 1.0;
        projections.push(AlgebraElement::new(real_coords(&e)));
    }
    SampleAlgebra {
        name: format!("M{m}"),
        algebra: build_matrix_algebra(m),
        trace: Functional::from_real(&trace),
        projections,
    }
}

/// Averages over the cyclic subgroups generated by each non-identity element.
fn subgroup_projections(table: &[Vec<usize>], identity: usize) -> Vec<AlgebraElement> {
    let n = table.len();
    let mut out = Vec::new();
    for g in 0..n {
        if g == identity {
            continue;
        }
        let mut powers = vec![identity];
        let mut cur = g;
        while cur != identity {
            powers.push(cur);
            cur = table[cur][g];
        }
        let mut v = vec![0.0; n];
        let w = 1.0 / powers.len() as f64;
        for p in powers {
            v[p] += w;
        }
        out.push(AlgebraElement::new(real_coords(&v)));
    }
    out
}

pub fn sample_cyclic(k: usize) -> SampleAlgebra {
    let table: Vec<Vec<usize>> = (0..k).map(|i| (0..k).map(|j| (i + j) % k).collect()).collect();
    let mut trace = vec![0.0; k];
    trace[0] = 1.0;
    SampleAlgebra {
        name: format!("Z{k}"),
        algebra: cyclic_group_algebra(k),
        trace: Functional::from_real(&trace),
        projections: subgroup_projections(&table, 0),
    }
}

pub fn sample_s3() -> SampleAlgebra {
    let mut trace = vec![0.0; 6];
    trace[0] = 1.0;
    SampleAlgebra {
        name: "S3".into(),
        algebra: symmetric_group_s3(),
        trace: Functional::from_real(&trace),
        projections: subgroup_projections(&s3_cayley_table(), 0),
    }
}

pub fn sample_direct_sum(a: &SampleAlgebra, b: &SampleAlgebra) -> SampleAlgebra {
    let (na, nb) = (a.dim(), b.dim());
    let lift_a = |x: &AlgebraElement| {
        let mut v = x.coords.clone();
        v.extend(std::iter::repeat_n(C64::new(0.0, 0.0), nb));
        AlgebraElement::new(v)
    };
    let lift_b = |x: &AlgebraElement| {
        let mut v = vec![C64::new(0.0, 0.0); na];
        v.extend(x.coords.iter().copied());
        AlgebraElement::new(v)
    };
    let mut projections: Vec<AlgebraElement> = a.projections.iter().map(lift_a).collect();
    projections.extend(b.projections.iter().map(lift_b));
    projections.push(lift_a(&a.algebra.unit()));
    projections.push(lift_b(&b.algebra.unit()));
    let mut trace = a.trace.values.clone();
    trace.extend(b.trace.values.iter().copied());
    SampleAlgebra {
        name: format!("{}+{}", a.name, b.name),
        algebra: direct_sum_algebra(&a.algebra, &b.algebra),
        trace: Functional::new(trace),
        projections,
    }
}

/// Same algebra in the basis `f_a = Σ_i B[i][a] e_i`.
pub fn sample_rebased(s: &SampleAlgebra, basis_change: &ComplexMatrix) -> SampleAlgebra {
    let algebra = s.algebra.rebased(basis_change).expect("invertible basis change");
    let inv = basis_change.inverse().unwrap();
    let trace = Functional::new(basis_change.transpose().mul_vec(&s.trace.values));
    let projections = s
        .projections
        .iter()
        .map(|p| AlgebraElement::new(inv.mul_vec(&p.coords)))
        .collect();
    SampleAlgebra {
        name: format!("{}~", s.name),
        algebra,
        trace,
        projections,
    }
}

/// All base algebras of dimension 1..=6 used by the random suites.
pub fn base_pool() -> Vec<SampleAlgebra> {
    let c = sample_complex();
    let z2 = sample_cyclic(2);
    let m2 = sample_matrix(2);
    let cc = sample_direct_sum(&c, &c);
    vec![
        c.clone(),
        cc.clone(),
        z2.clone(),
        sample_cyclic(3),
        sample_direct_sum(&cc, &c),
        sample_direct_sum(&c, &z2),
        m2.clone(),
        sample_cyclic(4),
        sample_direct_sum(&z2, &z2),
        sample_direct_sum(&c, &m2),
        sample_cyclic(5),
        sample_s3(),
        sample_cyclic(6),
        sample_direct_sum(&m2, &cc),
        sample_direct_sum(&sample_cyclic(3), &sample_cyclic(3)),
    ]
}

/// Random algebra of dim ≤ 6; half of the draws are presented in a random non-unitary basis.
pub fn random_algebra(rng: &mut ChaCha8Rng) -> SampleAlgebra {
    let pool = base_pool();
    let base = pool.choose(rng).unwrap().clone();
    if rng.gen_bool(0.5) {
        let n = base.dim();
        let scale = 0.4 / (n as f64).sqrt();
        let b = ComplexMatrix::from_fn(n, n, |r, c| {
            let g = gaussian(rng) * scale;
            if r == c {
                g + C64::new(1.0, 0.0)
            } else {
                g
            }
        });
        sample_rebased(&base, &b)
    } else {
        base
    }
}

pub fn random_element(rng: &mut ChaCha8Rng, dim: usize) -> AlgebraElement {
    AlgebraElement::new(gaussian_vec(rng, dim))
}

/// `ρ(x) = c Σ_m ψ(y_m* x y_m)` with `ψ` the faithful trace and `y_m = z_m p_m`;
/// positive by construction, often with a nontrivial Gelfand ideal.
pub fn random_positive_functional(rng: &mut ChaCha8Rng, s: &SampleAlgebra) -> Functional {
    let alg = &s.algebra;
    let n = alg.dim();
    let terms = rng.gen_range(1..=3);
    let mut values = vec![C64::new(0.0, 0.0); n];
    for _ in 0..terms {
        let z = random_element(rng, n);
        let y = if !s.projections.is_empty() && rng.gen_bool(0.6) {
            let p = s.projections.choose(rng).unwrap();
            alg.multiply(&z, p).unwrap()
        } else {
            z
        };
        let ys = alg.involute(&y).unwrap();
        for (i, v) in values.iter_mut().enumerate() {
            let inner = alg.multiply(&alg.multiply(&ys, &alg.basis(i)).unwrap(), &y).unwrap();
            *v += inner.coords.iter().zip(&s.trace.values).map(|(a, b)| a * b).sum::<C64>();
        }
    }
    let c: f64 = rng.gen_range(0.5..2.0);
    Functional::new(values.into_iter().map(|v| v * c).collect())
}

/// Random PSD `n×n` matrix `B B^†` with `B` of shape `n×rank`.
pub fn random_psd(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> ComplexMatrix {
    let b = gaussian_matrix(rng, n, rank);
    (&b * &b.adjoint()).hermitian_part()
}

pub fn random_kernel(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> Kernel {
    Kernel::new(random_psd(rng, n, rank), &TolerancePolicy::default()).unwrap()
}

/// Haar-ish random unitary via Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for j in 0..n {
        let mut v = g.column(j);
        for q in &cols {
            let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_columns(n, &cols)
}

/// Coordinates of an `m×m` matrix in the row-major matrix-unit basis.
pub fn matrix_unit_coords(x: &ComplexMatrix) -> Vec<C64> {
    x.as_slice().to_vec()
}

fn matrix_unit(m: usize, p: usize, q: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(m, m);
    e[(p, q)] = C64::new(1.0, 0.0);
    e
}

/// `M_m → M_m ⊕ … ⊕ M_m` (copies), `x ↦ (U_1 x U_1^†, …)`; the target is a direct sum of `copies` blocks.
pub fn conjugation_hom(m: usize, unitaries: &[ComplexMatrix], source: &FiniteStarAlgebra, target: &FiniteStarAlgebra) -> StarHomomorphism {
    let n = m * m;
    let cols: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let e = matrix_unit(m, j / m, j % m);
            unitaries
                .iter()
                .flat_map(|u| matrix_unit_coords(&(&(u * &e) * &u.adjoint())))
                .collect()
        })
        .collect();
    let mat = ComplexMatrix::from_columns(n * unitaries.len(), &cols);
    StarHomomorphism::new(source.clone(), target.clone(), mat, &TolerancePolicy::default()).unwrap()
}

/// A composable pair `α: A → B`, `β: B → C` with the sample algebra `C`.
pub struct ComposablePair {
    pub alpha: StarHomomorphism,
    pub beta: StarHomomorphism,
    pub target: SampleAlgebra,
}

pub fn random_composable_pair(rng: &mut ChaCha8Rng) -> ComposablePair {
    let pol = TolerancePolicy::default();
    let m2 = sample_matrix(2);
    let m2m2 = sample_direct_sum(&m2, &m2);
    let kind = rng.gen_range(0..4);
    match kind {
        0 => {
            // ℂ[ℤ/2] → M2, g ↦ U diag(1,-1) U^†; then M2 → M2 ⊕ M2
            let u = random_unitary(rng, 2);
            let z2 = cyclic_group_algebra(2);
            let g_img = &(&u * &ComplexMatrix::from_diag(&[1.0, -1.0])) * &u.adjoint();
            let mat = ComplexMatrix::from_columns(
                4,
                &[matrix_unit_coords(&ComplexMatrix::identity(2)), matrix_unit_coords(&g_img)],
            );
            let alpha = StarHomomorphism::new(z2, m2.algebra.clone(), mat, &pol).unwrap();
            let us = [random_unitary(rng, 2), random_unitary(rng, 2)];
            let beta = conjugation_hom(2, &us, &m2.algebra, &m2m2.algebra);
            ComposablePair {
                alpha,
                beta,
                target: m2m2,
            }
        }
        1 => {
            // ℂ → M2 (unit), then Ad V on M2
            let unit = ComplexMatrix::from_columns(4, &[matrix_unit_coords(&ComplexMatrix::identity(2))]);
            let alpha = StarHomomorphism::new(complex_numbers(), m2.algebra.clone(), unit, &pol).unwrap();
            let beta = conjugation_hom(2, &[random_unitary(rng, 2)], &m2.algebra, &m2.algebra);
            ComposablePair {
                alpha,
                beta,
                target: m2,
            }
        }
        2 => {
            // Ad U on M2, then M2 → M2 ⊕ M2
            let alpha = conjugation_hom(2, &[random_unitary(rng, 2)], &m2.algebra, &m2.algebra);
            let us = [random_unitary(rng, 2), random_unitary(rng, 2)];
            let beta = conjugation_hom(2, &us, &m2.algebra, &m2m2.algebra);
            ComposablePair {
                alpha,
                beta,
                target: m2m2,
            }
        }
        _ => {
            // ℂ ⊕ ℂ → M2, (a, b) ↦ U diag(a, b) U^†; then Ad V
            let cc = sample_direct_sum(&sample_complex(), &sample_complex());
            let u = random_unitary(rng, 2);
            let img = |d: [f64; 2]| matrix_unit_coords(&(&(&u * &ComplexMatrix::from_diag(&d)) * &u.adjoint()));
            let mat = ComplexMatrix::from_columns(4, &[img([1.0, 0.0]), img([0.0, 1.0])]);
            let alpha = StarHomomorphism::new(cc.algebra, m2.algebra.clone(), mat, &pol).unwrap();
            let beta = conjugation_hom(2, &[random_unitary(rng, 2)], &m2.algebra, &m2.algebra);
            ComposablePair {
                alpha,
                beta,
                target: m2,
            }
        }
    }
}

/// Real form of a complex matrix: `[[Re, −Im], [Im, Re]]`. Hermitian maps to
/// symmetric, each eigenvalue appearing twice. The oracles stay in real
/// arithmetic because nalgebra's complex eigen/SVD paths proved unreliable on
/// the degenerate spectra these problems produce.
fn realify(m: &ComplexMatrix) -> DMatrix<f64> {
    let (r, c) = (m.rows(), m.cols());
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

fn realify_vec(v: &[C64]) -> DVector<f64> {
    DVector::from_iterator(2 * v.len(), v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)))
}

/// Range basis (orthonormal columns) and positive eigenvalues of a PSD matrix.
fn na_range(h: &DMatrix<f64>, rel_tol: f64) -> (DMatrix<f64>, Vec<f64>) {
    let eig = SymmetricEigen::new(h.clone());
    let lmax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&k| lmax > 0.0 && eig.eigenvalues[k] > rel_tol * lmax)
        .collect();
    let basis = DMatrix::from_fn(h.nrows(), keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]);
    (basis, keep.iter().map(|&k| eig.eigenvalues[k]).collect())
}

/// Infimum of `‖ξ₁‖²_{K1} + ‖ξ₂‖²_{K2}` over `ξ₁ + ξ₂ = ξ`, `ξ_i ∈ range(H_i)`.
///
/// In real form, writes `ξ_i = B_i Λ_i^{1/2} c_i` on eigenbases of the ranges, so
/// the objective becomes `|c|²` and the answer is the squared norm of the
/// minimum-norm solution of `[B₁Λ₁^{1/2}, B₂Λ₂^{1/2}] c = ξ` (SVD). Panics if `ξ`
/// is not in the joint range.
pub fn infimum_norm_oracle(h1: &ComplexMatrix, h2: &ComplexMatrix, xi: &[C64]) -> f64 {
    let (b1, l1) = na_range(&realify(h1), 1e-10);
    let (b2, l2) = na_range(&realify(h2), 1e-10);
    let n = 2 * h1.rows();
    let mut m = DMatrix::<f64>::zeros(n, l1.len() + l2.len());
    let cols = b1.column_iter().zip(&l1).chain(b2.column_iter().zip(&l2));
    for (k, (col, l)) in cols.enumerate() {
        m.set_column(k, &(col * l.sqrt()));
    }
    let xi = realify_vec(xi);
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let c = svd.solve(&xi, 1e-12 * smax).expect("svd solve");
    let resid = (&m * &c - &xi).norm();
    assert!(resid <= 1e-8 * (1.0 + xi.norm()), "oracle constraint residual {resid}");
    c.norm_squared()
}

/// `|⟨y|φ⟩|² / ⟨y|Hy⟩` for one direction `y`.
pub fn sup_ratio(h: &ComplexMatrix, phi: &[C64], y: &[C64]) -> f64 {
    let num: C64 = y.iter().zip(phi).map(|(a, b)| a.conj() * b).sum();
    let hy = h.mul_vec(y);
    let den: C64 = y.iter().zip(&hy).map(|(a, b)| a.conj() * b).sum();
    num.norm_sqr() / den.re
}

/// Largest sup-formula ratio over `samples` random Gaussian directions.
pub fn sampled_sup(rng: &mut ChaCha8Rng, h: &ComplexMatrix, phi: &[C64], samples: usize) -> f64 {
    (0..samples)
        .map(|_| sup_ratio(h, phi, &gaussian_vec(rng, phi.len())))
        .filter(|r| r.is_finite())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a hermitian matrix via nalgebra, descending.
pub fn reference_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(realify(m)).eigenvalues.iter().cloned().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    // every eigenvalue of the real form is doubled
    v.into_iter().step_by(2).collect()
}

/// Random kernel on ℂ^n whose rank is drawn uniformly from `min_rank..=n`.
pub fn random_kernel_ranked(rng: &mut ChaCha8Rng, n: usize, min_rank: usize) -> Kernel {
    let rank = rng.gen_range(min_rank..=n);
    random_kernel(rng, n, rank)
}

/// PSD kernel of the given rank whose nonzero eigenvalues lie in `[lo, hi]`.
pub fn conditioned_kernel(rng: &mut ChaCha8Rng, n: usize, rank: usize, lo: f64, hi: f64) -> Kernel {
    let u = random_unitary(rng, n);
    let mut diag = vec![0.0; n];
    for d in diag.iter_mut().take(rank) {
        *d = rng.gen_range(lo..=hi);
    }
    let m = (&(&u * &ComplexMatrix::from_diag(&diag)) * &u.adjoint()).hermitian_part();
    Kernel::new(m, &TolerancePolicy::default()).unwrap()
}

