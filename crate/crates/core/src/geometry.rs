//! Exact geometric realization: roots, element matrices, fixed subspaces
//! Fix(G) and pointwise stabilizers Gal(X).
//!
//! Everything is computed in the simple-root basis of an essential
//! realization (the simple roots span the ambient space, so the full group
//! fixes only the origin). Coordinate charts translate the classical
//! coordinate descriptions of type A/B/D subspace families into this basis.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use crate::coxeter::{ElemId, Group};
use crate::error::{Error, Result};
use crate::field::{NumberField, Scalar};
use crate::linalg::Matrix;

/// The root system of a finite Coxeter group, in simple-root coordinates.
pub struct RootSystem {
    field: Arc<NumberField>,
    gram: Matrix,
    positive: Vec<Vec<Scalar>>,
    rank: usize,
}

impl RootSystem {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// The bilinear form with (alpha_i, alpha_j) = -cos(pi / m(i,j)).
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    /// Total number of roots, |Phi| = 2 |Phi+|.
    pub fn num_roots(&self) -> usize {
        2 * self.positive.len()
    }

    pub fn positive_roots(&self) -> &[Vec<Scalar>] {
        &self.positive
    }

    /// The simple roots (the first `rank` positive roots, in generator order).
    pub fn simple_roots(&self) -> &[Vec<Scalar>] {
        &self.positive[..self.rank]
    }

    pub fn all_roots(&self) -> Vec<Vec<Scalar>> {
        let mut v = self.positive.clone();
        v.extend(
            self.positive
                .iter()
                .map(|r| r.iter().map(|c| -c).collect::<Vec<_>>()),
        );
        v
    }

    pub fn inner(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let gy = self.gram.mul_vec(y);
        let mut acc = self.field.zero();
        for (a, b) in x.iter().zip(&gy) {
            if !a.is_zero() && !b.is_zero() {
                acc = acc + a.clone() * b.clone();
            }
        }
        acc
    }
}

/// A linear subspace in canonical form: reduced-echelon basis rows with each
/// pivot normalized to 1. Equal subspaces have identical bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// The span of the given vectors.
    pub fn from_spanning(
        field: &Arc<NumberField>,
        vectors: &[Vec<Scalar>],
        ambient: usize,
    ) -> Subspace {
        let m = Matrix::from_rows(field, vectors.to_vec(), ambient);
        let (rr, pivots) = m.rref();
        let rows = (0..pivots.len()).map(|r| rr.row(r).to_vec()).collect();
        Subspace {
            basis: Matrix::from_rows(field, rows, ambient),
        }
    }

    /// The solution space of the given linear functionals.
    pub fn from_equations(
        field: &Arc<NumberField>,
        rows: &[Vec<Scalar>],
        ambient: usize,
    ) -> Subspace {
        let m = Matrix::from_rows(field, rows.to_vec(), ambient);
        Subspace::from_spanning(field, &m.right_kernel(), ambient)
    }

    pub fn whole(field: &Arc<NumberField>, ambient: usize) -> Subspace {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![field.zero(); ambient];
                v[i] = field.one();
                v
            })
            .collect::<Vec<_>>();
        Subspace::from_spanning(field, &rows, ambient)
    }

    pub fn origin(field: &Arc<NumberField>, ambient: usize) -> Subspace {
        Subspace {
            basis: Matrix::zero(field, 0, ambient),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    pub fn is_origin(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis_rows(&self) -> Vec<Vec<Scalar>> {
        self.basis.row_vecs()
    }

    /// Functionals cutting out the subspace (a basis of the annihilator).
    pub fn annihilator_rows(&self) -> Vec<Vec<Scalar>> {
        if self.dim() == 0 {
            let f = self.basis.field();
            return (0..self.ambient_dim())
                .map(|i| {
                    let mut v = vec![f.zero(); self.ambient_dim()];
                    v[i] = f.one();
                    v
                })
                .collect();
        }
        self.basis.right_kernel()
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        let f = self.basis.field();
        self.annihilator_rows().iter().all(|row| {
            let mut acc = f.zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a.clone() * b.clone();
                }
            }
            acc.is_zero()
        })
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis_rows().iter().all(|v| self.contains_vector(v))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim(), other.ambient_dim());
        let f = self.basis.field().clone();
        let mut rows = self.annihilator_rows();
        rows.extend(other.annihilator_rows());
        Subspace::from_equations(&f, &rows, self.ambient_dim())
    }

    /// Image of the subspace under a linear map.
    pub fn apply(&self, m: &Matrix) -> Subspace {
        let rows: Vec<Vec<Scalar>> = self.basis_rows().iter().map(|v| m.mul_vec(v)).collect();
        let f = self.basis.field().clone();
        Subspace::from_spanning(&f, &rows, self.ambient_dim())
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.codim().cmp(&other.codim()).then_with(|| {
            for (a, b) in self
                .basis_rows()
                .iter()
                .flatten()
                .zip(other.basis_rows().iter().flatten())
            {
                let c = a.cmp(b);
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

/// The group together with its exact matrix representation and root data.
pub struct Realization {
    group: Arc<Group>,
    roots: RootSystem,
    matrices: Vec<Matrix>,
    reflection_of_root: Vec<ElemId>,
    root_of_reflection: HashMap<ElemId, usize>,
}

impl Realization {
    pub fn new(group: Arc<Group>) -> Realization {
        let rep = group.rep();
        let n = group.rank();
        let field = Arc::clone(&rep.field);
        let roots = RootSystem {
            field: Arc::clone(&field),
            gram: rep.gram.clone(),
            positive: rep.positive_roots.clone(),
            rank: n,
        };

        // M_{w s} = M_w * S_s along the BFS tree.
        let mut matrices = Vec::with_capacity(group.order());
        matrices.push(Matrix::identity(&field, n));
        for e in 1..group.order() as ElemId {
            let (parent, letter) = group.bfs_parent(e).expect("non-identity");
            let m = matrices[parent as usize].mul(&rep.simple_reflections[letter as usize]);
            matrices.push(m);
        }

        // s_alpha for each positive root, located through its root action.
        let mut reflection_of_root = Vec::with_capacity(roots.num_positive());
        let mut root_of_reflection = HashMap::new();
        for (idx, alpha) in roots.positive.iter().enumerate() {
            let s = reflection_matrix(&roots, alpha);
            let perm = rep
                .perm_of_matrix(&s)
                .expect("reflection permutes the root system");
            let id = group
                .id_of_perm(&perm)
                .expect("reflection is a group element");
            reflection_of_root.push(id);
            root_of_reflection.insert(id, idx);
        }

        Realization {
            group,
            roots,
            matrices,
            reflection_of_root,
            root_of_reflection,
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn roots(&self) -> &RootSystem {
        &self.roots
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.roots.field
    }

    pub fn rank(&self) -> usize {
        self.roots.rank
    }

    pub fn element_matrix(&self, e: ElemId) -> &Matrix {
        &self.matrices[e as usize]
    }

    /// All reflections of W, as element ids sorted ascending.
    pub fn reflections(&self) -> Vec<ElemId> {
        let mut v = self.reflection_of_root.clone();
        v.sort_unstable();
        v
    }

    pub fn reflection_of_root(&self, root_idx: usize) -> ElemId {
        self.reflection_of_root[root_idx]
    }

    pub fn root_of_reflection(&self, e: ElemId) -> Option<usize> {
        self.root_of_reflection.get(&e).copied()
    }

    pub fn is_reflection(&self, e: ElemId) -> bool {
        self.root_of_reflection.contains_key(&e)
    }

    /// Fix of the generated subgroup: the common fixed space, as the kernel of the
    /// stacked matrices M_g - I.
    pub fn fix_subspace(&self, generators: &[ElemId]) -> Subspace {
        let n = self.rank();
        let f = self.field().clone();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for &g in generators {
            let m = self.element_matrix(g);
            for r in 0..n {
                let mut row: Vec<Scalar> = m.row(r).to_vec();
                let d = row[r].clone() - f.one();
                row[r] = d;
                if !row.iter().all(|c| c.is_zero()) {
                    rows.push(row);
                }
            }
        }
        Subspace::from_equations(&f, &rows, n)
    }

    /// The reflections fixing X pointwise (those whose root is orthogonal to
    /// X) and the subgroup they generate.
    pub fn galois_group(&self, x: &Subspace) -> (Vec<ElemId>, Vec<ElemId>) {
        let basis = x.basis_rows();
        let mut refl: Vec<ElemId> = Vec::new();
        for (idx, alpha) in self.roots.positive.iter().enumerate() {
            let orthogonal = basis.iter().all(|v| self.roots.inner(v, alpha).is_zero());
            if orthogonal {
                refl.push(self.reflection_of_root[idx]);
            }
        }
        refl.sort_unstable();
        let subgroup = self.group.subgroup_closure(&refl);
        (refl, subgroup)
    }

    /// Brute-force pointwise stabilizer over the whole group; verification
    /// oracle for `galois_group`.
    pub fn stabilizer_brute_force(&self, x: &Subspace) -> Vec<ElemId> {
        let basis = x.basis_rows();
        (0..self.group.order() as ElemId)
            .filter(|&e| {
                let m = self.element_matrix(e);
                basis.iter().all(|v| &m.mul_vec(v) == v)
            })
            .collect()
    }

    /// Image w . X of a subspace under a group element.
    pub fn transform_subspace(&self, w: ElemId, x: &Subspace) -> Subspace {
        x.apply(self.element_matrix(w))
    }

    /// Coordinate chart for the classical realization of an irreducible
    /// type A/B/D system with the standard generator numbering.
    pub fn coordinate_chart(&self) -> Result<CoordinateChart> {
        CoordinateChart::for_realization(self)
    }
}

/// Matrix of the reflection through the hyperplane orthogonal to a unit root.
fn reflection_matrix(roots: &RootSystem, alpha: &[Scalar]) -> Matrix {
    let f = &roots.field;
    let n = roots.rank;
    let g_alpha = roots.gram.mul_vec(alpha);
    let mut m = Matrix::identity(f, n);
    for k in 0..n {
        for j in 0..n {
            let t = alpha[k].clone() * g_alpha[j].clone();
            let cur = m.at(k, j).clone();
            *m.at_mut(k, j) = cur - (t.clone() + t);
        }
    }
    m
}

/// Which classical coordinate family a chart realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartFamily {
    /// Type A_n acting on the sum-zero hyperplane of R^{n+1}.
    TypeA,
    /// Type B_n on R^n; s1 flips x1, s_i swaps x_{i-1}, x_i.
    TypeB,
    /// Type D_n on R^n.
    TypeD,
}

/// Translates coordinate equations in the classical ambient space into
/// subspaces in the simple-root basis.
pub struct CoordinateChart {
    family: ChartFamily,
    /// ambient_coords x rank matrix of the unit simple roots in classical
    /// coordinates; pulls a functional row f back to f . E.
    embedding: Matrix,
    field: Arc<NumberField>,
    rank: usize,
}

impl CoordinateChart {
    fn for_realization(real: &Realization) -> Result<CoordinateChart> {
        let sys = real.group().system();
        let class = sys.classification();
        if class.components.len() != 1 {
            return Err(Error::BadParameter {
                name: "system",
                given: sys.describe(),
                reason: "coordinate charts need an irreducible type A/B/D system".into(),
            });
        }
        let n = sys.rank();
        let field = real.field();
        use crate::classify::IrreducibleType::*;
        let (family, label) = match &class.components[0].1 {
            A(k) => (ChartFamily::TypeA, format!("A{k}")),
            B(k) => (ChartFamily::TypeB, format!("B{k}")),
            D(k) => (ChartFamily::TypeD, format!("D{k}")),
            other => {
                return Err(Error::BadParameter {
                    name: "system",
                    given: other.to_string(),
                    reason: "coordinate charts exist for types A, B and D only".into(),
                })
            }
        };
        // The chart's column conventions assume the standard generator
        // numbering, not just the abstract isomorphism type.
        let (std_matrix, _) = crate::classify::standard_matrix(&label)?;
        if sys.coxeter_matrix() != &std_matrix {
            return Err(Error::BadParameter {
                name: "system",
                given: sys.describe(),
                reason: "generators are not numbered along the standard diagram".into(),
            });
        }

        let ambient = match family {
            ChartFamily::TypeA => n + 1,
            _ => n,
        };
        let mut embedding = Matrix::zero(field, ambient, n);
        match family {
            ChartFamily::TypeA | ChartFamily::TypeD => {
                // Uniform root length: scaling the whole basis does not move
                // kernels, so the integer root coordinates serve directly.
                for i in 0..n {
                    let last_is_fork = family == ChartFamily::TypeD && i == n - 1;
                    if last_is_fork {
                        *embedding.at_mut(n - 2, i) = field.one();
                        *embedding.at_mut(n - 1, i) = field.one();
                    } else {
                        *embedding.at_mut(i, i) = field.one();
                        *embedding.at_mut(i + 1, i) = -field.one();
                    }
                }
            }
            ChartFamily::TypeB => {
                // Mixed root lengths: unit normalization matters, and the
                // field contains 1/sqrt(2) = cos(pi/4).
                let inv_sqrt2 = field.cos_pi_over(4);
                *embedding.at_mut(0, 0) = field.one();
                for i in 1..n {
                    *embedding.at_mut(i, i) = inv_sqrt2.clone();
                    *embedding.at_mut(i - 1, i) = -inv_sqrt2.clone();
                }
            }
        }
        Ok(CoordinateChart {
            family,
            embedding,
            field: Arc::clone(field),
            rank: n,
        })
    }

    pub fn family(&self) -> ChartFamily {
        self.family
    }

    /// Rank of the underlying system (dimension of the essential space).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of classical coordinates (n, or n+1 for type A).
    pub fn ambient_coords(&self) -> usize {
        self.embedding.rows()
    }

    /// Subspace cut out by functional rows over the classical coordinates.
    pub fn subspace_from_equations(&self, rows: &[Vec<Scalar>]) -> Subspace {
        let pulled: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|f| {
                (0..self.rank)
                    .map(|c| {
                        let mut acc = self.field.zero();
                        for (r, coef) in f.iter().enumerate() {
                            if !coef.is_zero() {
                                acc = acc + coef.clone() * self.embedding.at(r, c).clone();
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Subspace::from_equations(&self.field, &pulled, self.rank)
    }

    /// Functional x_i - sign * x_j (cutting out x_i = sign * x_j).
    pub fn equality_row(&self, i: usize, j: usize, sign: i64) -> Vec<Scalar> {
        let mut row = vec![self.field.zero(); self.ambient_coords()];
        row[i] = self.field.one();
        row[j] = self.field.integer(-sign);
        row
    }

    /// Functional x_i (cutting out x_i = 0).
    pub fn zero_row(&self, i: usize) -> Vec<Scalar> {
        let mut row = vec![self.field.zero(); self.ambient_coords()];
        row[i] = self.field.one();
        row
    }
}
