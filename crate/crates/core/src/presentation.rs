//! Finitely presented groups: generators, relators, and abelianization.
//!
//! Relators are words over signed 1-based generator indices (negative means
//! the formal inverse). This is the exchange format between the spanning-tree
//! presentation of the discrete fundamental group, the Schreier rewriting of
//! the kernel subgroup, and coset enumeration.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::snf::{sparse_smith, SmithForm, SparseRow};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Vec<i32>>,
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Vec<i32>>) -> Presentation {
        let n = generator_names.len() as i32;
        for r in &relators {
            for &g in r {
                assert!(g != 0 && g.abs() <= n, "relator letter out of range");
            }
        }
        Presentation {
            generator_names,
            relators,
        }
    }

    pub fn num_generators(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Vec<i32>] {
        &self.relators
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    /// Free reduction (cancel adjacent g g^-1) of a word over the generators.
    pub fn free_reduce(word: &[i32]) -> Vec<i32> {
        let mut out: Vec<i32> = Vec::with_capacity(word.len());
        for &g in word {
            if out.last().map(|&l| l == -g).unwrap_or(false) {
                out.pop();
            } else {
                out.push(g);
            }
        }
        out
    }

    /// Exponent-sum rows of the relators (the abelianized boundary matrix).
    pub fn abelianization_rows(&self) -> Vec<SparseRow> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = SparseRow::new();
                for &g in r {
                    let col = g.unsigned_abs() - 1;
                    let e = row.entry(col).or_insert_with(BigInt::zero);
                    if g > 0 {
                        *e += 1;
                    } else {
                        *e -= 1;
                    }
                    if e.is_zero() {
                        row.remove(&col);
                    }
                }
                row
            })
            .collect()
    }

    /// Abelianization: free rank and torsion coefficients of G^ab.
    pub fn abelianization(&self) -> Abelianization {
        let rows = self.abelianization_rows();
        let SmithForm { rank, torsion } = sparse_smith(rows, self.num_generators());
        Abelianization {
            free_rank: self.num_generators() - rank,
            torsion,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abelianization {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Abelianization {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< ")?;
        write!(f, "{}", self.generator_names.join(", "))?;
        write!(f, " | ")?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if r.is_empty() {
                write!(f, "1")?;
            }
            for (j, &g) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                let name = &self.generator_names[(g.unsigned_abs() - 1) as usize];
                if g > 0 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^-1")?;
                }
            }
        }
        write!(f, " >")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn free_reduction() {
        assert_eq!(
            Presentation::free_reduce(&[1, 2, -2, -1, 3]),
            vec![3]
        );
        assert_eq!(Presentation::free_reduce(&[1, -1]), Vec::<i32>::new());
    }

    #[test]
    fn abelianization_free() {
        let p = Presentation::new(gens(3), vec![]);
        let ab = p.abelianization();
        assert_eq!(ab.free_rank, 3);
        assert!(ab.torsion.is_empty());
    }

    #[test]
    fn abelianization_with_torsion() {
        // < x | x^2 > = Z/2
        let p = Presentation::new(gens(1), vec![vec![1, 1]]);
        let ab = p.abelianization();
        assert_eq!(ab.free_rank, 0);
        assert_eq!(ab.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn abelianization_commutator_vanishes() {
        // < x, y | [x,y] > = Z^2
        let p = Presentation::new(gens(2), vec![vec![1, 2, -1, -2]]);
        let ab = p.abelianization();
        assert_eq!(ab.free_rank, 2);
        assert!(ab.torsion.is_empty());
    }

    #[test]
    fn display_form() {
        let p = Presentation::new(gens(2), vec![vec![1, 1], vec![1, -2]]);
        assert_eq!(p.to_string(), "< x1, x2 | x1 x1, x1 x2^-1 >");
    }
}
