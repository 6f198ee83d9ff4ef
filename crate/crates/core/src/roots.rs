//! The geometric reflection representation used internally.
//!
//! Simple roots are the standard basis of an n-dimensional space carrying the
//! bilinear form (alpha_i, alpha_j) = -cos(pi/m(i,j)); simple reflections act
//! by s_i(x) = x - 2(x, alpha_i) alpha_i. For a finite system the orbit of
//! the simple roots is the full root system, and each generator induces a
//! signed permutation of the positive roots. That permutation action is the
//! faithful, cheaply hashable element representation behind the Cayley BFS.

use std::collections::HashMap;
use std::sync::Arc;

use crate::classify::CoxeterMatrix;
use crate::error::{Error, Result};
use crate::field::{NumberField, Scalar};
use crate::linalg::Matrix;

/// Hard guard against runaway closures on matrices that slipped past the
/// finiteness check (defense in depth; the classifier rejects these first).
const ROOT_CAP: usize = 100_000;

#[derive(Debug)]
pub(crate) struct ReflectionRep {
    pub field: Arc<NumberField>,
    /// Bilinear form on the simple-root basis.
    pub gram: Matrix,
    /// Matrix of each simple reflection.
    pub simple_reflections: Vec<Matrix>,
    /// Coordinates of the positive roots; the first n entries are the simple
    /// roots in generator order, the rest follow closure discovery order.
    pub positive_roots: Vec<Vec<Scalar>>,
    /// Signed action of generator i on positive roots: entry j holds
    /// +-(k+1) meaning s_i(beta_j) = +-beta_k.
    pub simple_action: Vec<Vec<i32>>,
    root_lookup: HashMap<Vec<Scalar>, (usize, bool)>,
}

impl ReflectionRep {
    pub fn new(matrix: &CoxeterMatrix) -> Result<ReflectionRep> {
        let n = matrix.rank();
        let mut bonds = Vec::new();
        for i in 0..n {
            for j in 0..i {
                match matrix.bond(i, j) {
                    Some(m) => bonds.push(m),
                    None => {
                        return Err(Error::InfiniteSystem {
                            description: format!("infinite bond m(s{},s{})", j + 1, i + 1),
                        })
                    }
                }
            }
        }
        let field = NumberField::for_bonds(&bonds);

        let mut gram = Matrix::identity(&field, n);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let m = matrix.bond(i, j).expect("checked finite above");
                    *gram.at_mut(i, j) = -field.cos_pi_over(m);
                }
            }
        }

        // s_i(e_j) = e_j - 2 gram[j][i] e_i, so row i of S_i is
        // delta_{ij} - 2 gram[j][i] and all other rows are identity rows.
        let simple_reflections: Vec<Matrix> = (0..n)
            .map(|i| {
                let mut s = Matrix::identity(&field, n);
                for j in 0..n {
                    let two_g = gram.at(j, i).clone() + gram.at(j, i).clone();
                    let cur = s.at(i, j).clone();
                    *s.at_mut(i, j) = cur - two_g;
                }
                s
            })
            .collect();

        // Closure of the simple roots under the simple reflections.
        let mut rep = ReflectionRep {
            field: Arc::clone(&field),
            gram,
            simple_reflections,
            positive_roots: Vec::new(),
            simple_action: Vec::new(),
            root_lookup: HashMap::new(),
        };
        for i in 0..n {
            let mut e = vec![field.zero(); n];
            e[i] = field.one();
            rep.insert_root(e);
        }
        let mut next = 0;
        while next < rep.positive_roots.len() {
            let root = rep.positive_roots[next].clone();
            for i in 0..n {
                let image = rep.simple_reflections[i].mul_vec(&root);
                let (canon, _) = canonical_orientation(&image);
                if !rep.root_lookup.contains_key(&canon) {
                    rep.insert_root(canon);
                    if rep.positive_roots.len() > ROOT_CAP {
                        return Err(Error::CapExceeded {
                            what: "root system closure".into(),
                            cap: ROOT_CAP,
                        });
                    }
                }
            }
            next += 1;
        }

        // Signed permutation induced by each generator.
        rep.simple_action = (0..n)
            .map(|i| {
                (0..rep.positive_roots.len())
                    .map(|j| {
                        let image = rep.simple_reflections[i].mul_vec(&rep.positive_roots[j]);
                        rep.signed_index_of(&image)
                            .expect("root system closed under simple reflections")
                    })
                    .collect()
            })
            .collect();
        Ok(rep)
    }

    fn insert_root(&mut self, canon: Vec<Scalar>) {
        let idx = self.positive_roots.len();
        self.root_lookup.insert(canon.clone(), (idx, false));
        let neg: Vec<Scalar> = canon.iter().map(|c| -c).collect();
        self.root_lookup.insert(neg, (idx, true));
        self.positive_roots.push(canon);
    }

    /// +-(k+1) for a coordinate vector equal to +-positive_roots[k].
    pub fn signed_index_of(&self, coords: &[Scalar]) -> Option<i32> {
        self.root_lookup.get(coords).map(|&(k, neg)| {
            let v = (k + 1) as i32;
            if neg {
                -v
            } else {
                v
            }
        })
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// Signed permutation of the positive roots induced by a matrix that is
    /// known to permute the root system (a group element).
    pub fn perm_of_matrix(&self, m: &Matrix) -> Option<Vec<i32>> {
        (0..self.positive_roots.len())
            .map(|j| self.signed_index_of(&m.mul_vec(&self.positive_roots[j])))
            .collect()
    }
}

/// Orients a root so its first nonzero coordinate is positive in the real
/// embedding. Roots are sign-coherent over the simple basis, so this picks
/// the positive member of each +- pair. Returns (canonical vector, flipped?).
pub(crate) fn canonical_orientation(coords: &[Scalar]) -> (Vec<Scalar>, bool) {
    for c in coords {
        match c.sign() {
            std::cmp::Ordering::Greater => return (coords.to_vec(), false),
            std::cmp::Ordering::Less => {
                return (coords.iter().map(|x| -x).collect(), true);
            }
            std::cmp::Ordering::Equal => continue,
        }
    }
    (coords.to_vec(), false)
}

/// Composes a signed permutation with the signed action of one generator:
/// result[j] = perm applied to action[j].
pub(crate) fn compose_signed(perm: &[i32], action: &[i32]) -> Vec<i32> {
    action
        .iter()
        .map(|&a| {
            let idx = (a.unsigned_abs() - 1) as usize;
            let t = perm[idx];
            if a < 0 {
                -t
            } else {
                t
            }
        })
        .collect()
}
