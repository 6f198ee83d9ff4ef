//! Integer Smith normal form and homology-rank computations.
//!
//! Boundary matrices of the 2-complexes are very sparse with entries in
//! {-1, 0, 1}, so the main entry point eliminates unit pivots sparsely and
//! only hands a (small) dense remainder to the full Smith reduction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Outcome of an integer normal-form computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    /// Nonunit diagonal entries (each > 1), in divisibility order.
    pub torsion: Vec<BigInt>,
}

/// Dense Smith normal form; suitable for small matrices.
pub fn smith_normal_form(mut m: Vec<Vec<BigInt>>) -> SmithForm {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut k = 0;
    let mut diagonal: Vec<BigInt> = Vec::new();
    while k < rows.min(cols) {
        // Find a pivot of minimal absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !m[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        // Reduce the pivot row and column until they are clear.
        loop {
            let mut changed = false;
            for i in k + 1..rows {
                if !m[i][k].is_zero() {
                    let q = div_round(&m[i][k], &m[k][k]);
                    if !q.is_zero() {
                        for j in k..cols {
                            let t = &m[k][j] * &q;
                            m[i][j] -= t;
                        }
                    }
                    if !m[i][k].is_zero() {
                        m.swap(k, i);
                        changed = true;
                    }
                }
            }
            for j in k + 1..cols {
                if !m[k][j].is_zero() {
                    let q = div_round(&m[k][j], &m[k][k]);
                    if !q.is_zero() {
                        for i in k..rows {
                            let t = &m[i][k] * &q;
                            m[i][j] -= t;
                        }
                    }
                    if !m[k][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(k, j);
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // Divisibility: fold in any entry the pivot does not divide.
        let mut retry = false;
        'outer: for i in k + 1..rows {
            for j in k + 1..cols {
                if !(&m[i][j] % &m[k][k]).is_zero() {
                    for col in k..cols {
                        let t = m[i][col].clone();
                        m[k][col] += t;
                    }
                    retry = true;
                    break 'outer;
                }
            }
        }
        if retry {
            continue;
        }
        let d = m[k][k].abs();
        diagonal.push(d);
        k += 1;
    }
    let torsion = diagonal.iter().filter(|d| !d.is_one()).cloned().collect();
    SmithForm {
        rank: diagonal.len(),
        torsion,
    }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // Round-to-nearest division keeps coefficients small. Floor division
    // leaves a remainder with the sign of b, so the nearest quotient is
    // either q or q + 1.
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_mod_floor(a, b);
    if r.abs() * &two > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Sparse row representation: column -> entry.
pub type SparseRow = BTreeMap<u32, BigInt>;

/// Rank and torsion of a sparse integer matrix. Unit pivots are eliminated
/// sparsely; whatever remains goes through the dense Smith reduction.
pub fn sparse_smith(mut rows: Vec<SparseRow>, _num_cols: usize) -> SmithForm {
    let mut rank = 0usize;
    loop {
        // Choose a +-1 pivot from the shortest candidate row.
        let mut pivot: Option<(usize, u32)> = None;
        let mut best_len = usize::MAX;
        for (i, row) in rows.iter().enumerate() {
            if row.is_empty() || row.len() >= best_len {
                continue;
            }
            if let Some((&j, _)) = row.iter().find(|(_, v)| v.is_one() || (-(*v).clone()).is_one())
            {
                pivot = Some((i, j));
                best_len = row.len();
            }
        }
        let Some((pi, pj)) = pivot else { break };
        let pivot_row = rows[pi].clone();
        let pivot_val = pivot_row[&pj].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == pi || !row.contains_key(&pj) {
                continue;
            }
            // row -= (row[pj] / pivot_val) * pivot_row ; pivot_val is a unit.
            let factor = &row[&pj] * &pivot_val; // +-1 pivot: 1/pivot = pivot
            for (&j, v) in &pivot_row {
                let t = v * &factor;
                let e = row.entry(j).or_insert_with(BigInt::zero);
                *e -= t;
                if e.is_zero() {
                    row.remove(&j);
                }
            }
        }
        rows[pi].clear();
        rank += 1;
    }

    // Dense remainder on the surviving columns.
    let live_rows: Vec<&SparseRow> = rows.iter().filter(|r| !r.is_empty()).collect();
    if live_rows.is_empty() {
        return SmithForm {
            rank,
            torsion: Vec::new(),
        };
    }
    let mut cols: Vec<u32> = live_rows
        .iter()
        .flat_map(|r| r.keys().copied())
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let col_index: BTreeMap<u32, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense: Vec<Vec<BigInt>> = live_rows
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); cols.len()];
            for (&c, v) in r.iter() {
                row[col_index[&c]] = v.clone();
            }
            row
        })
        .collect();
    let tail = smith_normal_form(dense);
    SmithForm {
        rank: rank + tail.rank,
        torsion: tail.torsion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: Vec<Vec<i64>>) -> Vec<Vec<BigInt>> {
        rows.into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect()
    }

    #[test]
    fn dense_known_form() {
        // Classic example with invariant factors 1, 3, 21.
        let m = big(vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let s = smith_normal_form(m);
        assert_eq!(s.rank, 3);
        assert_eq!(s.torsion, vec![BigInt::from(3), BigInt::from(21)]);
    }

    #[test]
    fn dense_identity_and_zero() {
        let s = smith_normal_form(big(vec![vec![1, 0], vec![0, 1]]));
        assert_eq!(s.rank, 2);
        assert!(s.torsion.is_empty());
        let z = smith_normal_form(big(vec![vec![0, 0], vec![0, 0]]));
        assert_eq!(z.rank, 0);
    }

    #[test]
    fn torsion_z2() {
        let s = smith_normal_form(big(vec![vec![2]]));
        assert_eq!(s.rank, 1);
        assert_eq!(s.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn sparse_matches_dense() {
        let raw = vec![
            vec![1, -1, 0, 0, 2],
            vec![0, 1, -1, 0, 0],
            vec![3, 0, 1, -1, 6],
            vec![1, 0, 0, -1, 4],
        ];
        let dense = smith_normal_form(big(raw.clone()));
        let rows: Vec<SparseRow> = raw
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(j, &v)| (j as u32, BigInt::from(v)))
                    .collect()
            })
            .collect();
        let sparse = sparse_smith(rows, 5);
        assert_eq!(sparse.rank, dense.rank);
        assert_eq!(sparse.torsion, dense.torsion);
    }
}
