//! Finite-dimensional unital *-algebras given by structure constants.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::numerics::{c64, max_abs_diff, C64, ComplexMatrix, TolerancePolicy, ONE, ZERO};
use crate::report::ValidationReport;

/// Coordinates of an algebra element in the algebra's basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlgebraElement {
    pub coords: Vec<C64>,
}

impl AlgebraElement {
    pub fn new(coords: Vec<C64>) -> Self {
        Self { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![ZERO; dim])
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut coords = vec![ZERO; dim];
        coords[i] = ONE;
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coords.iter().map(|z| z * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }
}

/// An associative unital algebra over ℂ with an antilinear involution.
///
/// `e_i · e_j = Σ_k c[i][j][k] e_k` and `e_i* = Σ_j S[i][j] e_j`; the
/// involution of a general element conjugates its coefficients first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraRecord", into = "AlgebraRecord")]
pub struct FiniteStarAlgebra {
    dim: usize,
    /// Flat `c[i][j][k]` at index `(i * dim + j) * dim + k`.
    structure: Vec<C64>,
    involution: ComplexMatrix,
    unit: Vec<C64>,
    labels: Option<Vec<String>>,
}

/// Wire form: nested arrays, complex scalars as `[re, im]`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraRecord {
    dim: usize,
    structure_constants: Vec<Vec<Vec<C64>>>,
    involution: ComplexMatrix,
    unit: Vec<C64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<AlgebraRecord> for FiniteStarAlgebra {
    type Error = Error;

    fn try_from(r: AlgebraRecord) -> Result<Self> {
        let alg = FiniteStarAlgebra::new(r.structure_constants, r.involution, r.unit, r.labels)?;
        check_dim(r.dim, alg.dim).map_err(|_| {
            Error::ShapeMismatch(format!("declared dim {} but tables have dim {}", r.dim, alg.dim))
        })?;
        Ok(alg)
    }
}

impl From<FiniteStarAlgebra> for AlgebraRecord {
    fn from(a: FiniteStarAlgebra) -> Self {
        let n = a.dim;
        let structure_constants = (0..n)
            .map(|i| (0..n).map(|j| a.product_coords(i, j).to_vec()).collect())
            .collect();
        AlgebraRecord {
            dim: n,
            structure_constants,
            involution: a.involution,
            unit: a.unit,
            labels: a.labels,
        }
    }
}

impl FiniteStarAlgebra {
    /// Checks shapes and finiteness only; axioms are checked by [`validate`](Self::validate).
    pub fn new(
        structure_constants: Vec<Vec<Vec<C64>>>,
        involution: ComplexMatrix,
        unit: Vec<C64>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = structure_constants.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("algebra must have dim >= 1".into()));
        }
        let mut structure = Vec::with_capacity(n * n * n);
        for (i, plane) in structure_constants.into_iter().enumerate() {
            if plane.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "structure_constants[{i}] has {} rows, expected {n}",
                    plane.len()
                )));
            }
            for (j, row) in plane.into_iter().enumerate() {
                if row.len() != n {
                    return Err(Error::ShapeMismatch(format!(
                        "structure_constants[{i}][{j}] has {} entries, expected {n}",
                        row.len()
                    )));
                }
                if let Some(k) = row.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::ShapeMismatch(format!(
                        "structure_constants[{i}][{j}][{k}] is not finite"
                    )));
                }
                structure.extend(row);
            }
        }
        if involution.rows() != n || involution.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "involution is {}x{}, expected {n}x{n}",
                involution.rows(),
                involution.cols()
            )));
        }
        involution.check_finite()?;
        if unit.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "unit has {} entries, expected {n}",
                unit.len()
            )));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "{} labels for dim {n}",
                    l.len()
                )));
            }
        }
        Ok(Self {
            dim: n,
            structure,
            involution,
            unit,
            labels,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn involution_matrix(&self) -> &ComplexMatrix {
        &self.involution
    }

    /// `c[i][j][k]`.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> C64 {
        self.structure[(i * self.dim + j) * self.dim + k]
    }

    /// Coordinates of `e_i · e_j`.
    pub fn product_coords(&self, i: usize, j: usize) -> &[C64] {
        let start = (i * self.dim + j) * self.dim;
        &self.structure[start..start + self.dim]
    }

    pub fn unit(&self) -> AlgebraElement {
        AlgebraElement::new(self.unit.clone())
    }

    pub fn basis(&self, i: usize) -> AlgebraElement {
        AlgebraElement::basis(self.dim, i)
    }

    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        check_dim(self.dim, x.dim())?;
        check_dim(self.dim, y.dim())?;
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for (i, &xi) in x.coords.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for (j, &yj) in y.coords.iter().enumerate() {
                let w = xi * yj;
                if w == ZERO {
                    continue;
                }
                for (o, &c) in out.iter_mut().zip(self.product_coords(i, j)) {
                    *o += w * c;
                }
            }
        }
        Ok(AlgebraElement::new(out))
    }

    /// `(Σ x_i e_i)* = Σ conj(x_i) e_i*`.
    pub fn involute(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        check_dim(self.dim, x.dim())?;
        let n = self.dim;
        let mut out = vec![ZERO; n];
        for (i, xi) in x.coords.iter().enumerate() {
            let w = xi.conj();
            for (j, o) in out.iter_mut().enumerate() {
                *o += w * self.involution[(i, j)];
            }
        }
        Ok(AlgebraElement::new(out))
    }

    /// Matrix of `y ↦ x·y` on coordinates: `(L_x)[k][j] = Σ_i x_i c[i][j][k]`.
    pub fn left_mult_matrix(&self, x: &AlgebraElement) -> Result<ComplexMatrix> {
        check_dim(self.dim, x.dim())?;
        let n = self.dim;
        let mut l = ComplexMatrix::zeros(n, n);
        for (i, &xi) in x.coords.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for j in 0..n {
                for (k, &c) in self.product_coords(i, j).iter().enumerate() {
                    l[(k, j)] += xi * c;
                }
            }
        }
        Ok(l)
    }

    /// `L_{e_i}` for every basis element.
    pub fn left_mult_basis(&self) -> Vec<ComplexMatrix> {
        (0..self.dim)
            .map(|i| self.left_mult_matrix(&self.basis(i)).expect("basis has algebra dim"))
            .collect()
    }

    /// Checks the *-algebra axioms on basis elements.
    ///
    /// Reported checks: `associativity`, `unit`, `involutive`, `antimultiplicative`.
    pub fn validate(&self, pol: &TolerancePolicy) -> ValidationReport {
        let n = self.dim;
        let basis: Vec<AlgebraElement> = (0..n).map(|i| self.basis(i)).collect();
        let prod = |x: &AlgebraElement, y: &AlgebraElement| self.multiply(x, y).unwrap();
        let star = |x: &AlgebraElement| self.involute(x).unwrap();

        let mut assoc: f64 = 0.0;
        let mut anti: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let ij = AlgebraElement::new(self.product_coords(i, j).to_vec());
                for k in 0..n {
                    let left = prod(&ij, &basis[k]);
                    let jk = AlgebraElement::new(self.product_coords(j, k).to_vec());
                    let right = prod(&basis[i], &jk);
                    assoc = assoc.max(max_abs_diff(&left.coords, &right.coords));
                }
                let lhs = star(&ij);
                let rhs = prod(&star(&basis[j]), &star(&basis[i]));
                anti = anti.max(max_abs_diff(&lhs.coords, &rhs.coords));
            }
        }

        let e = self.unit();
        let mut unit: f64 = 0.0;
        let mut invol: f64 = 0.0;
        for b in &basis {
            unit = unit.max(max_abs_diff(&prod(&e, b).coords, &b.coords));
            unit = unit.max(max_abs_diff(&prod(b, &e).coords, &b.coords));
            invol = invol.max(max_abs_diff(&star(&star(b)).coords, &b.coords));
        }

        let tol = pol.match_tol;
        let mut report = ValidationReport::new();
        report.push("associativity", assoc, tol);
        report.push("unit", unit, tol);
        report.push("involutive", invol, tol);
        report.push("antimultiplicative", anti, tol);
        report
    }

    /// The same algebra presented in a new basis `f_a = Σ_i B[i][a] e_i`.
    pub fn rebased(&self, basis_change: &ComplexMatrix) -> Result<FiniteStarAlgebra> {
        let n = self.dim;
        if basis_change.rows() != n || basis_change.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "basis change is {}x{}, expected {n}x{n}",
                basis_change.rows(),
                basis_change.cols()
            )));
        }
        let inv = basis_change.inverse()?;
        let f: Vec<AlgebraElement> = (0..n).map(|a| AlgebraElement::new(basis_change.column(a))).collect();
        let to_new = |x: &AlgebraElement| inv.mul_vec(&x.coords);

        let structure = (0..n)
            .map(|a| (0..n).map(|b| to_new(&self.multiply(&f[a], &f[b]).unwrap())).collect())
            .collect();
        let involution = ComplexMatrix::from_columns(
            n,
            &(0..n).map(|a| to_new(&self.involute(&f[a]).unwrap())).collect::<Vec<_>>(),
        )
        .transpose();
        let unit = to_new(&self.unit());
        FiniteStarAlgebra::new(structure, involution, unit, None)
    }
}

/// Group algebra ℂ[G] from a Cayley table (`cayley[i][j]` is the index of `g_i g_j`).
///
/// Basis is the group elements in table order; `g* = g⁻¹`.
pub fn build_group_algebra(cayley: &[Vec<usize>], inverses: &[usize]) -> Result<FiniteStarAlgebra> {
    let n = cayley.len();
    if n == 0 {
        return Err(Error::NotAGroup("empty table".into()));
    }
    for (i, row) in cayley.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotAGroup(format!("row {i} has {} entries", row.len())));
        }
        if let Some(&bad) = row.iter().find(|&&k| k >= n) {
            return Err(Error::NotAGroup(format!("entry {bad} in row {i} out of range")));
        }
    }
    if inverses.len() != n {
        return Err(Error::NotAGroup(format!("{} inverses for {n} elements", inverses.len())));
    }
    let id = (0..n)
        .find(|&i| (0..n).all(|j| cayley[i][j] == j && cayley[j][i] == j))
        .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
    for (g, &h) in inverses.iter().enumerate() {
        if h >= n || cayley[g][h] != id || cayley[h][g] != id {
            return Err(Error::NotAGroup(format!("inverse of {g} given as {h} is wrong")));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                    return Err(Error::NotAGroup(format!("associativity fails at ({a}, {b}, {c})")));
                }
            }
        }
    }

    let structure = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = vec![ZERO; n];
                    v[cayley[i][j]] = ONE;
                    v
                })
                .collect()
        })
        .collect();
    let involution = ComplexMatrix::from_fn(n, n, |i, j| if inverses[i] == j { ONE } else { ZERO });
    let mut unit = vec![ZERO; n];
    unit[id] = ONE;
    FiniteStarAlgebra::new(structure, involution, unit, None)
}

/// ℂ[ℤ/k] with basis `g^0, …, g^{k-1}`.
pub fn cyclic_group_algebra(k: usize) -> FiniteStarAlgebra {
    assert!(k >= 1);
    let cayley: Vec<Vec<usize>> = (0..k).map(|i| (0..k).map(|j| (i + j) % k).collect()).collect();
    let inverses: Vec<usize> = (0..k).map(|i| (k - i) % k).collect();
    let labels = (0..k).map(|i| match i {
        0 => "e".to_string(),
        1 => "g".to_string(),
        _ => format!("g^{i}"),
    });
    with_labels(build_group_algebra(&cayley, &inverses).expect("cyclic group table"), labels)
}

/// Permutations of {0,1,2} in the fixed order used by [`symmetric_group_s3`].
pub const S3_PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 0, 2],
    [0, 2, 1],
    [2, 1, 0],
    [1, 2, 0],
    [2, 0, 1],
];

/// Cayley table of S₃ with `(σ·τ)(i) = σ(τ(i))`, elements ordered as [`S3_PERMUTATIONS`].
pub fn s3_cayley_table() -> Vec<Vec<usize>> {
    let p = &S3_PERMUTATIONS;
    let index = |q: [usize; 3]| p.iter().position(|&x| x == q).unwrap();
    (0..6)
        .map(|a| {
            (0..6)
                .map(|b| index([p[a][p[b][0]], p[a][p[b][1]], p[a][p[b][2]]]))
                .collect()
        })
        .collect()
}

pub fn symmetric_group_s3() -> FiniteStarAlgebra {
    let table = s3_cayley_table();
    let inverses: Vec<usize> = (0..6).map(|g| (0..6).find(|&h| table[g][h] == 0).unwrap()).collect();
    let labels = ["e", "(01)", "(12)", "(02)", "(012)", "(021)"].map(String::from);
    with_labels(build_group_algebra(&table, &inverses).expect("S3 table"), labels)
}

/// Full matrix algebra M_m with matrix units `E_pq` in row-major order.
pub fn build_matrix_algebra(m: usize) -> FiniteStarAlgebra {
    assert!(m >= 1, "matrix algebra needs m >= 1");
    let n = m * m;
    let idx = |p: usize, q: usize| p * m + q;
    let mut structure = vec![vec![vec![ZERO; n]; n]; n];
    for p in 0..m {
        for q in 0..m {
            for s in 0..m {
                // E_pq E_qs = E_ps
                structure[idx(p, q)][idx(q, s)][idx(p, s)] = ONE;
            }
        }
    }
    let involution = ComplexMatrix::from_fn(n, n, |a, b| {
        let (p, q) = (a / m, a % m);
        if b == idx(q, p) {
            ONE
        } else {
            ZERO
        }
    });
    let mut unit = vec![ZERO; n];
    for p in 0..m {
        unit[idx(p, p)] = ONE;
    }
    let labels = (0..n).map(|a| format!("E{}{}", a / m + 1, a % m + 1)).collect();
    FiniteStarAlgebra::new(structure, involution, unit, Some(labels)).expect("matrix algebra tables")
}

/// `A1 ⊕ A2` with the basis of `A1` followed by the basis of `A2`.
pub fn direct_sum_algebra(a1: &FiniteStarAlgebra, a2: &FiniteStarAlgebra) -> FiniteStarAlgebra {
    let (n1, n2) = (a1.dim, a2.dim);
    let n = n1 + n2;
    let mut structure = vec![vec![vec![ZERO; n]; n]; n];
    for i in 0..n1 {
        for j in 0..n1 {
            structure[i][j][..n1].copy_from_slice(a1.product_coords(i, j));
        }
    }
    for i in 0..n2 {
        for j in 0..n2 {
            structure[n1 + i][n1 + j][n1..].copy_from_slice(a2.product_coords(i, j));
        }
    }
    let involution = ComplexMatrix::from_fn(n, n, |r, c| match (r < n1, c < n1) {
        (true, true) => a1.involution[(r, c)],
        (false, false) => a2.involution[(r - n1, c - n1)],
        _ => ZERO,
    });
    let unit = a1.unit.iter().chain(&a2.unit).copied().collect();
    let labels = match (&a1.labels, &a2.labels) {
        (None, None) => None,
        _ => Some(
            side_labels(a1, "a")
                .into_iter()
                .chain(side_labels(a2, "b"))
                .collect(),
        ),
    };
    FiniteStarAlgebra::new(structure, involution, unit, labels).expect("direct sum tables")
}

/// The one-dimensional algebra ℂ.
pub fn complex_numbers() -> FiniteStarAlgebra {
    FiniteStarAlgebra::new(
        vec![vec![vec![ONE]]],
        ComplexMatrix::identity(1),
        vec![ONE],
        Some(vec!["1".into()]),
    )
    .unwrap()
}

fn side_labels(a: &FiniteStarAlgebra, prefix: &str) -> Vec<String> {
    match &a.labels {
        Some(l) => l.iter().map(|s| format!("{prefix}.{s}")).collect(),
        None => (0..a.dim).map(|i| format!("{prefix}.{i}")).collect(),
    }
}

fn with_labels(mut a: FiniteStarAlgebra, labels: impl IntoIterator<Item = String>) -> FiniteStarAlgebra {
    a.labels = Some(labels.into_iter().collect());
    a
}

/// `x = Σ_i re_i e_i` for real coefficient lists; handy in fixtures.
pub fn element(coords: &[f64]) -> AlgebraElement {
    AlgebraElement::new(coords.iter().map(|&x| c64(x, 0.0)).collect())
}
