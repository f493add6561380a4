//! GNS representations of positive functionals, their commutants, and the
//! splitting of a cyclic representation into irreducible pieces.
//!
//! Inner products on representation spaces are antilinear in the first
//! argument; the cyclic vector reproduces the functional as
//! `ρ(x) = ⟨ξ, π(x)ξ⟩ = ξ^† π(x) ξ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{AlgebraElement, FiniteStarAlgebra};
use crate::duality::{gram_matrix, require_positive, Functional};
use crate::error::{check_dim, Error, Result};
use crate::numerics::{
    hermitian_eigen, inner, max_abs_diff, norm_sq, C64, ComplexMatrix, TolerancePolicy, ZERO,
};
use crate::report::ValidationReport;

/// A cyclic *-representation on ℂ^d obtained from a positive functional.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GnsRepresentation {
    #[serde(skip)]
    pub algebra: FiniteStarAlgebra,
    pub rep_dim: usize,
    /// `π(e_i)`, one `d×d` matrix per basis element.
    pub matrices: Vec<ComplexMatrix>,
    pub cyclic_vector: Vec<C64>,
    pub source_functional: Functional,
    /// `d×n` map from algebra coordinates to quotient coordinates.
    pub embedding: ComplexMatrix,
}

impl GnsRepresentation {
    /// `π(x) = Σ x_i π(e_i)`.
    pub fn pi(&self, x: &AlgebraElement) -> Result<ComplexMatrix> {
        check_dim(self.algebra.dim(), x.dim())?;
        Ok(combine(&self.matrices, &x.coords, self.rep_dim))
    }

    /// `ξ^† π(e_i) ξ` for each basis element.
    pub fn reproduced_functional(&self) -> Functional {
        vector_functional(&self.matrices, &self.cyclic_vector)
    }

    /// Columns `π(e_j) ξ`: the map `x ↦ π(x)ξ` as a `d×n` matrix.
    pub fn orbit_matrix(&self) -> ComplexMatrix {
        orbit_matrix(&self.matrices, &self.cyclic_vector)
    }
}

fn combine(mats: &[ComplexMatrix], coeffs: &[C64], d: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d, d);
    for (m, &c) in mats.iter().zip(coeffs) {
        if c != ZERO {
            out = &out + &m.scale_c(c);
        }
    }
    out
}

fn vector_functional(mats: &[ComplexMatrix], v: &[C64]) -> Functional {
    Functional::new(mats.iter().map(|m| inner(v, &m.mul_vec(v))).collect())
}

fn orbit_matrix(mats: &[ComplexMatrix], xi: &[C64]) -> ComplexMatrix {
    let cols: Vec<Vec<C64>> = mats.iter().map(|m| m.mul_vec(xi)).collect();
    ComplexMatrix::from_columns(xi.len(), &cols)
}

/// GNS construction on the quotient by the Gelfand ideal (the numerical
/// nullspace of the Gram matrix).
///
/// With `G = U Λ U^†` and the `d` nonzero eigenpairs kept, the quotient map is
/// `Q = Λ^{1/2} U^†`, `π(e_i) = Q L_{e_i} U Λ^{-1/2}` and `ξ = Q e`. The zero
/// functional gives the empty representation.
pub fn gns_construct(alg: &FiniteStarAlgebra, rho: &Functional, pol: &TolerancePolicy) -> Result<GnsRepresentation> {
    require_positive(alg, rho, pol)?;
    let n = alg.dim();
    let g = gram_matrix(alg, rho)?;
    let eig = hermitian_eigen(&g, pol)?;
    let d = eig.rank(pol);
    let sqrt_l: Vec<f64> = eig.values[..d].iter().map(|l| l.sqrt()).collect();

    let q = ComplexMatrix::from_fn(d, n, |k, j| eig.vectors[(j, k)].conj() * sqrt_l[k]);
    let lift = ComplexMatrix::from_fn(n, d, |j, k| eig.vectors[(j, k)] / sqrt_l[k]);
    let matrices = alg
        .left_mult_basis()
        .iter()
        .map(|l| &(&q * l) * &lift)
        .collect();
    let cyclic_vector = q.mul_vec(&alg.unit().coords);

    Ok(GnsRepresentation {
        algebra: alg.clone(),
        rep_dim: d,
        matrices,
        cyclic_vector,
        source_functional: rho.clone(),
        embedding: q,
    })
}

/// Checks `unit`, `multiplicativity`, `star`, `cyclicity` and `reproduction`.
pub fn verify_star_rep(rep: &GnsRepresentation, pol: &TolerancePolicy) -> ValidationReport {
    let alg = &rep.algebra;
    let n = alg.dim();
    let d = rep.rep_dim;
    let tol = pol.match_tol;
    let mut report = ValidationReport::new();

    let shapes_ok = rep.matrices.len() == n
        && rep.matrices.iter().all(|m| m.rows() == d && m.cols() == d)
        && rep.cyclic_vector.len() == d
        && rep.source_functional.dim() == n;
    report.push_flag("shape", shapes_ok);
    if !shapes_ok {
        return report;
    }

    let unit = combine(&rep.matrices, &alg.unit().coords, d);
    report.push("unit", unit.max_abs_diff(&ComplexMatrix::identity(d)), tol);

    let mut mult: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let lhs = &rep.matrices[i] * &rep.matrices[j];
            let rhs = combine(&rep.matrices, alg.product_coords(i, j), d);
            mult = mult.max(lhs.max_abs_diff(&rhs));
        }
    }
    report.push("multiplicativity", mult, tol);

    let mut star: f64 = 0.0;
    for i in 0..n {
        let si = alg.involute(&alg.basis(i)).expect("basis dim");
        let lhs = combine(&rep.matrices, &si.coords, d);
        star = star.max(lhs.max_abs_diff(&rep.matrices[i].adjoint()));
    }
    report.push("star", star, tol);

    let cyclic_rank = if d == 0 {
        0
    } else {
        let t = rep.orbit_matrix();
        hermitian_eigen(&(&t * &t.adjoint()), pol).map_or(0, |e| e.rank(pol))
    };
    report.push("cyclicity", (d - cyclic_rank.min(d)) as f64, 0.5);

    let repro = rep.reproduced_functional().max_abs_diff(&rep.source_functional);
    report.push("reproduction", repro, tol);
    report
}

/// Unitary `U` with `U π₁(x) ξ₁ = π₂(x) ξ₂` for GNS representations of the same functional.
///
/// Fails with `NotEquivalent` when the source functionals differ, since no
/// cyclic-vector-preserving unitary exists then.
pub fn intertwiner(rep1: &GnsRepresentation, rep2: &GnsRepresentation, pol: &TolerancePolicy) -> Result<ComplexMatrix> {
    check_dim(rep1.algebra.dim(), rep2.algebra.dim())?;
    let dev = rep1.source_functional.max_abs_diff(&rep2.source_functional);
    if dev > pol.match_tol {
        return Err(Error::NotEquivalent { deviation: dev });
    }
    if rep1.rep_dim != rep2.rep_dim {
        return Err(Error::NotEquivalent {
            deviation: rep1.rep_dim.abs_diff(rep2.rep_dim) as f64,
        });
    }
    let d = rep1.rep_dim;
    if d == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    let t1 = rep1.orbit_matrix();
    let t2 = rep2.orbit_matrix();
    let gram_inv = crate::numerics::pseudo_inverse(&(&t1 * &t1.adjoint()), pol)?;
    let u = &(&t2 * &t1.adjoint()) * &gram_inv;

    let mut residual = (&u * &t1).max_abs_diff(&t2);
    residual = residual.max((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(d)));
    for (p1, p2) in rep1.matrices.iter().zip(&rep2.matrices) {
        residual = residual.max((&u * p1).max_abs_diff(&(p2 * &u)));
    }
    if residual > pol.match_tol * (1.0 + t2.max_abs()) {
        return Err(Error::NotEquivalent { deviation: residual });
    }
    Ok(u)
}

/// Orthonormal (Frobenius) basis of `{T : T A_i = B_i T for all i}`, `T` of shape `dB×dA`.
pub fn intertwining_space(a: &[ComplexMatrix], b: &[ComplexMatrix], pol: &TolerancePolicy) -> Vec<ComplexMatrix> {
    assert_eq!(a.len(), b.len());
    let da = a.first().map_or(0, ComplexMatrix::rows);
    let db = b.first().map_or(0, ComplexMatrix::rows);
    let m = da * db;
    if m == 0 {
        return Vec::new();
    }
    // unknown T[r][c] sits at r * da + c
    let mut normal = ComplexMatrix::zeros(m, m);
    for (pa, pb) in a.iter().zip(b) {
        let mut k = ComplexMatrix::zeros(m, m);
        for r in 0..db {
            for c in 0..da {
                let row = r * da + c;
                for s in 0..da {
                    k[(row, r * da + s)] += pa[(s, c)];
                }
                for s in 0..db {
                    k[(row, s * da + c)] -= pb[(r, s)];
                }
            }
        }
        normal = &normal + &(&k.adjoint() * &k);
    }
    let eig = hermitian_eigen(&normal, pol).expect("normal matrix is hermitian");
    let lmax = eig.lambda_max();
    let cut = pol.rel_rank_tol * lmax;
    (0..m)
        .filter(|&k| lmax <= 0.0 || eig.values[k] <= cut)
        .map(|k| {
            let v = eig.vectors.column(k);
            ComplexMatrix::from_fn(db, da, |r, c| v[r * da + c])
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Commutant {
    pub basis: Vec<ComplexMatrix>,
    pub dimension: usize,
}

/// Commutant of a family of `d×d` matrices.
pub fn commutant_of(mats: &[ComplexMatrix], pol: &TolerancePolicy) -> Commutant {
    let basis = intertwining_space(mats, mats, pol);
    Commutant {
        dimension: basis.len(),
        basis,
    }
}

pub fn commutant(rep: &GnsRepresentation, pol: &TolerancePolicy) -> Result<Commutant> {
    require_nonempty(rep)?;
    Ok(commutant_of(&rep.matrices, pol))
}

fn require_nonempty(rep: &GnsRepresentation) -> Result<()> {
    if rep.rep_dim == 0 {
        Err(Error::InvalidRepresentation("empty representation".into()))
    } else {
        Ok(())
    }
}

/// Irreducible iff the commutant is one-dimensional (the scalars).
pub fn is_irreducible(rep: &GnsRepresentation, pol: &TolerancePolicy) -> Result<bool> {
    Ok(commutant(rep, pol)?.dimension == 1)
}

/// Extremal in the positive cone iff its GNS representation is irreducible.
pub fn is_extremal(alg: &FiniteStarAlgebra, rho: &Functional, pol: &TolerancePolicy) -> Result<bool> {
    let rep = gns_construct(alg, rho, pol)?;
    if rep.rep_dim == 0 {
        return Err(Error::ZeroFunctional);
    }
    is_irreducible(&rep, pol)
}

/// Unitary equivalence of two irreducible representations, ignoring cyclic vectors.
///
/// Returns a unitary `U` with `U π₁(e_i) = π₂(e_i) U`.
pub fn equivalence_intertwiner(
    rep1: &GnsRepresentation,
    rep2: &GnsRepresentation,
    pol: &TolerancePolicy,
) -> Result<ComplexMatrix> {
    check_dim(rep1.algebra.dim(), rep2.algebra.dim())?;
    unitary_intertwiner(&rep1.matrices, &rep2.matrices, pol)
}

fn unitary_intertwiner(a: &[ComplexMatrix], b: &[ComplexMatrix], pol: &TolerancePolicy) -> Result<ComplexMatrix> {
    let da = a.first().map_or(0, ComplexMatrix::rows);
    let db = b.first().map_or(0, ComplexMatrix::rows);
    if da != db || da == 0 {
        return Err(Error::NotEquivalent {
            deviation: da.abs_diff(db) as f64,
        });
    }
    let space = intertwining_space(a, b, pol);
    let t = space.first().ok_or(Error::NotEquivalent { deviation: 1.0 })?;
    // Schur: T^†T is scalar for irreducible families
    let tt = &t.adjoint() * t;
    let c = tt.trace().re / da as f64;
    if c <= 0.0 {
        return Err(Error::NotEquivalent { deviation: 1.0 });
    }
    let u = t.scale(1.0 / c.sqrt());
    let dev = (&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(da));
    if dev > pol.match_tol * 1e2 {
        return Err(Error::NotEquivalent { deviation: dev });
    }
    Ok(u)
}

/// One irreducible summand of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    /// `‖P_k ξ‖²`.
    pub weight: f64,
    /// Normalized so that `ρ_k(e) = 1`.
    pub functional: Functional,
    pub representation: GnsRepresentation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub components: Vec<Component>,
    /// Component indices grouped by unitary equivalence.
    pub multiplicity_classes: Vec<Vec<usize>>,
    /// `max |Σ λ_k ρ_k − ρ|`.
    pub reconstruction_error: f64,
    pub seed: u64,
}

pub const MAX_SPLIT_RETRIES: usize = 8;

struct Block {
    mats: Vec<ComplexMatrix>,
    xi: Vec<C64>,
}

/// Splits `ρ = Σ λ_k ρ_k` into extremal functionals.
///
/// Each round draws a random hermitian element of the commutant (seeded),
/// splits the space into its eigenspaces and recurses on every block with the
/// projected cyclic vector.
pub fn decompose(alg: &FiniteStarAlgebra, rho: &Functional, pol: &TolerancePolicy, seed: u64) -> Result<Decomposition> {
    let rep = gns_construct(alg, rho, pol)?;
    if rep.rep_dim == 0 {
        return Err(Error::ZeroFunctional);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xi_norm_sq = norm_sq(&rep.cyclic_vector);
    let mut leaves = Vec::new();
    split_block(
        Block {
            mats: rep.matrices.clone(),
            xi: rep.cyclic_vector.clone(),
        },
        xi_norm_sq,
        pol,
        &mut rng,
        &mut leaves,
    )?;

    let mut components = leaves
        .into_iter()
        .map(|leaf| {
            let weight = norm_sq(&leaf.xi);
            let functional = vector_functional(&leaf.mats, &leaf.xi).scale(1.0 / weight);
            let representation = gns_construct(alg, &functional, pol)?;
            Ok(Component {
                weight,
                functional,
                representation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    components.sort_by(|a, b| {
        round9(b.weight)
            .cmp(&round9(a.weight))
            .then_with(|| functional_key(&b.functional).cmp(&functional_key(&a.functional)))
    });

    let mut reconstructed = Functional::zero(alg.dim());
    for c in &components {
        reconstructed = reconstructed.add(&c.functional.scale(c.weight));
    }
    let reconstruction_error = reconstructed.max_abs_diff(rho);

    let multiplicity_classes = group_by_equivalence(&components, pol);
    Ok(Decomposition {
        components,
        multiplicity_classes,
        reconstruction_error,
        seed,
    })
}

fn split_block(
    block: Block,
    xi_norm_sq: f64,
    pol: &TolerancePolicy,
    rng: &mut ChaCha8Rng,
    leaves: &mut Vec<Block>,
) -> Result<()> {
    let comm = commutant_of(&block.mats, pol);
    if comm.dimension <= 1 {
        leaves.push(block);
        return Ok(());
    }
    let d = block.xi.len();
    let mut clusters = None;
    for _ in 0..=MAX_SPLIT_RETRIES {
        let coeffs: Vec<C64> = (0..comm.dimension)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0))
            .collect();
        let h = combine(&comm.basis, &coeffs, d).hermitian_part();
        let eig = hermitian_eigen(&h, pol)?;
        let spread = eig.values.iter().map(|l| l.abs()).fold(0.0, f64::max);
        let gap = 1e-6 * (1.0 + spread);
        let mut groups: Vec<Vec<usize>> = vec![vec![0]];
        for k in 1..d {
            if eig.values[k - 1] - eig.values[k] > gap {
                groups.push(Vec::new());
            }
            groups.last_mut().unwrap().push(k);
        }
        if groups.len() > 1 {
            clusters = Some((eig.vectors, groups));
            break;
        }
    }
    let (vectors, groups) = clusters.ok_or(Error::SplitFailure {
        attempts: MAX_SPLIT_RETRIES + 1,
    })?;

    for idx in groups {
        let v = vectors.select_columns(&idx);
        let vh = v.adjoint();
        let xi = vh.mul_vec(&block.xi);
        if norm_sq(&xi).sqrt() <= pol.rel_rank_tol * xi_norm_sq.sqrt() {
            return Err(Error::InvalidRepresentation(
                "cyclic vector has no component in an invariant block".into(),
            ));
        }
        let mats = block.mats.iter().map(|m| &(&vh * m) * &v).collect();
        split_block(Block { mats, xi }, xi_norm_sq, pol, rng, leaves)?;
    }
    Ok(())
}

fn round9(x: f64) -> i64 {
    (x * 1e9).round() as i64
}

fn functional_key(f: &Functional) -> Vec<(i64, i64)> {
    f.values.iter().map(|z| (round9(z.re), round9(z.im))).collect()
}

fn group_by_equivalence(components: &[Component], pol: &TolerancePolicy) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    'outer: for (i, c) in components.iter().enumerate() {
        for class in classes.iter_mut() {
            let rep = &components[class[0]].representation;
            let same_functional = max_abs_diff(&rep.source_functional.values, &c.functional.values) <= pol.match_tol;
            if same_functional || unitary_intertwiner(&rep.matrices, &c.representation.matrices, pol).is_ok() {
                class.push(i);
                continue 'outer;
            }
        }
        classes.push(vec![i]);
    }
    classes
}
