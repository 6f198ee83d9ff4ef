//! Coxeter matrices, standard type labels, and the classification of finite
//! Coxeter groups.
//!
//! Finiteness is decided by recognizing each connected component of the
//! Coxeter diagram against the Cartan-Killing list; the same recognizer
//! produces type labels for parabolic subgroups.

use std::fmt;

use crate::error::{Error, Result};

/// Symmetric matrix of bond orders m(s,t). The entry 0 encodes m = infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    rank: usize,
    entries: Vec<u32>,
}

pub const INFINITE: u32 = 0;

impl CoxeterMatrix {
    /// Validates and wraps a full rank x rank table of bond orders.
    pub fn new(rank: usize, entries: Vec<u32>) -> Result<Self> {
        if rank == 0 || entries.len() != rank * rank {
            return Err(Error::InvalidCoxeterMatrix {
                reason: format!("expected {rank}x{rank} entries"),
                row: 0,
                col: 0,
                entry: entries.len().to_string(),
            });
        }
        let m = CoxeterMatrix { rank, entries };
        for i in 0..rank {
            if m.entry(i, i) != 1 {
                return Err(Error::InvalidCoxeterMatrix {
                    reason: "diagonal entries must be 1".into(),
                    row: i,
                    col: i,
                    entry: show(m.entry(i, i)),
                });
            }
            for j in 0..i {
                let e = m.entry(i, j);
                if e != m.entry(j, i) {
                    return Err(Error::InvalidCoxeterMatrix {
                        reason: "matrix must be symmetric".into(),
                        row: i,
                        col: j,
                        entry: show(e),
                    });
                }
                if e == 1 {
                    return Err(Error::InvalidCoxeterMatrix {
                        reason: "off-diagonal entries must be >= 2 or infinite".into(),
                        row: i,
                        col: j,
                        entry: show(e),
                    });
                }
            }
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Raw entry; 0 means infinity.
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.rank + j]
    }

    pub fn bond(&self, i: usize, j: usize) -> Option<u32> {
        match self.entry(i, j) {
            INFINITE => None,
            m => Some(m),
        }
    }

    pub fn is_infinite_bond(&self, i: usize, j: usize) -> bool {
        self.entry(i, j) == INFINITE
    }

    /// All finite bond orders >= 3 appearing off the diagonal.
    pub fn heavy_bonds(&self) -> Vec<u32> {
        let mut v = Vec::new();
        for i in 0..self.rank {
            for j in 0..i {
                let e = self.entry(i, j);
                if e >= 3 {
                    v.push(e);
                }
            }
        }
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The principal submatrix on the given (strictly increasing) index set.
    pub fn submatrix(&self, idx: &[usize]) -> CoxeterMatrix {
        let r = idx.len();
        let mut entries = Vec::with_capacity(r * r);
        for &i in idx {
            for &j in idx {
                entries.push(self.entry(i, j));
            }
        }
        CoxeterMatrix { rank: r, entries }
    }

    /// Connected components of the diagram (edges where m(s,t) != 2).
    pub fn diagram_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.rank];
        let mut comps = Vec::new();
        for start in 0..self.rank {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in 0..self.rank {
                    if !seen[u] && v != u && self.entry(v, u) != 2 {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.diagram_components().len() == 1
    }
}

fn show(e: u32) -> String {
    if e == INFINITE {
        "inf".into()
    } else {
        e.to_string()
    }
}

/// An irreducible factor in the Cartan-Killing classification.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IrreducibleType {
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    F4,
    H3,
    H4,
    I2(u32),
    /// Connected diagram not on the finite list.
    InfiniteComponent,
}

impl IrreducibleType {
    pub fn order(&self) -> Option<u128> {
        let fact = |n: usize| -> u128 { (1..=n as u128).product() };
        match self {
            IrreducibleType::A(n) => Some(fact(n + 1)),
            IrreducibleType::B(n) => Some((1u128 << n) * fact(*n)),
            IrreducibleType::D(n) => Some((1u128 << (n - 1)) * fact(*n)),
            IrreducibleType::E(6) => Some(51_840),
            IrreducibleType::E(7) => Some(2_903_040),
            IrreducibleType::E(8) => Some(696_729_600),
            IrreducibleType::E(_) => None,
            IrreducibleType::F4 => Some(1152),
            IrreducibleType::H3 => Some(120),
            IrreducibleType::H4 => Some(14_400),
            IrreducibleType::I2(m) => Some(2 * *m as u128),
            IrreducibleType::InfiniteComponent => None,
        }
    }
}

impl fmt::Display for IrreducibleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrreducibleType::A(n) => write!(f, "A{n}"),
            IrreducibleType::B(n) => write!(f, "B{n}"),
            IrreducibleType::D(n) => write!(f, "D{n}"),
            IrreducibleType::E(n) => write!(f, "E{n}"),
            IrreducibleType::F4 => write!(f, "F4"),
            IrreducibleType::H3 => write!(f, "H3"),
            IrreducibleType::H4 => write!(f, "H4"),
            IrreducibleType::I2(m) => write!(f, "I2({m})"),
            IrreducibleType::InfiniteComponent => write!(f, "infinite"),
        }
    }
}

/// Decomposition of a Coxeter matrix into irreducible diagram components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    /// (vertex set, recognized type) per connected component, in vertex order.
    pub components: Vec<(Vec<usize>, IrreducibleType)>,
}

impl Classification {
    pub fn is_finite(&self) -> bool {
        self.components
            .iter()
            .all(|(_, t)| *t != IrreducibleType::InfiniteComponent)
    }

    pub fn order(&self) -> Option<u128> {
        self.components
            .iter()
            .map(|(_, t)| t.order())
            .try_fold(1u128, |acc, o| o.map(|o| acc * o))
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1 && self.is_finite()
    }

    /// `A2`, `A1 x A1`, `B2 x A1`, ... with factors sorted for determinism.
    pub fn label(&self) -> String {
        let mut names: Vec<String> = self.components.iter().map(|(_, t)| t.to_string()).collect();
        names.sort();
        names.join(" x ")
    }
}

/// Recognizes every diagram component of `m` against the finite list.
pub fn classify(m: &CoxeterMatrix) -> Classification {
    let components = m
        .diagram_components()
        .into_iter()
        .map(|comp| {
            let t = recognize_component(m, &comp);
            (comp, t)
        })
        .collect();
    Classification { components }
}

/// Recognizes one connected component. Vertices are given in increasing order.
fn recognize_component(m: &CoxeterMatrix, comp: &[usize]) -> IrreducibleType {
    use IrreducibleType::*;
    let n = comp.len();
    if n == 1 {
        return A(1);
    }
    // Collect the labeled edges of the component.
    let mut edges: Vec<(usize, usize, u32)> = Vec::new();
    let mut degree = vec![0usize; n];
    for a in 0..n {
        for b in 0..a {
            let e = m.entry(comp[a], comp[b]);
            if e != 2 {
                if e == INFINITE {
                    return InfiniteComponent;
                }
                edges.push((a, b, e));
                degree[a] += 1;
                degree[b] += 1;
            }
        }
    }
    if n == 2 {
        let bond = edges[0].2;
        return match bond {
            3 => A(2),
            4 => B(2),
            m => I2(m),
        };
    }
    // A connected finite diagram of rank >= 3 is a tree with n - 1 edges.
    if edges.len() != n - 1 {
        return InfiniteComponent;
    }
    let heavy: Vec<u32> = edges.iter().map(|e| e.2).filter(|&l| l > 3).collect();
    let max_degree = degree.iter().copied().max().unwrap();
    if max_degree > 3 {
        return InfiniteComponent;
    }
    let branch_nodes: Vec<usize> = (0..n).filter(|&v| degree[v] == 3).collect();

    if heavy.is_empty() {
        // Simply laced: A (path), D or E (single branch node).
        match branch_nodes.len() {
            0 => A(n),
            1 => {
                let mut arms = arm_lengths(&edges, branch_nodes[0], n);
                arms.sort_unstable();
                match arms.as_slice() {
                    [1, 1, _] => D(n),
                    [1, 2, 2] => E(6),
                    [1, 2, 3] => E(7),
                    [1, 2, 4] => E(8),
                    _ => InfiniteComponent,
                }
            }
            _ => InfiniteComponent,
        }
    } else if heavy.len() == 1 && branch_nodes.is_empty() {
        // A path with a single heavy bond: B, F4 or H.
        let label = heavy[0];
        let (a, b, _) = *edges.iter().find(|e| e.2 == label).unwrap();
        // Distance (in edges) from each endpoint of the heavy bond to the
        // far end of the path on its own side.
        let da = side_length(&edges, a, b, n);
        let db = side_length(&edges, b, a, n);
        let end = da.min(db) == 0;
        match (label, end) {
            (4, true) => B(n),
            (4, false) if n == 4 && da.max(db) == 1 => F4,
            (5, true) if n == 3 => H3,
            (5, true) if n == 4 => H4,
            _ => InfiniteComponent,
        }
    } else {
        InfiniteComponent
    }
}

/// Lengths (in edges) of the three arms hanging off a degree-3 node of a tree.
fn arm_lengths(edges: &[(usize, usize, u32)], center: usize, n: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj[center]
        .iter()
        .map(|&first| {
            let mut len = 1;
            let mut prev = center;
            let mut cur = first;
            while let Some(&next) = adj[cur].iter().find(|&&x| x != prev) {
                prev = cur;
                cur = next;
                len += 1;
            }
            len
        })
        .collect()
}

/// Number of edges strictly beyond `from` when walking away from `other` in a path.
fn side_length(edges: &[(usize, usize, u32)], from: usize, other: usize, n: usize) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut len = 0;
    let mut prev = other;
    let mut cur = from;
    while let Some(&next) = adj[cur].iter().find(|&&x| x != prev) {
        prev = cur;
        cur = next;
        len += 1;
    }
    len
}

/// Builds the standard Coxeter matrix for a type label such as `A3`, `B3`,
/// `D4`, `E6`, `F4`, `H3`, `H4` or `I2(7)`.
///
/// Conventions: generators are numbered 1..n along the diagram path; type B
/// carries its 4-bond between s1 and s2; type D forks at the far end
/// (m(s_{n-2}, s_n) = 3); types E fork at the third node from the far end.
pub fn standard_matrix(label: &str) -> Result<(CoxeterMatrix, String)> {
    let label = label.trim();
    let err = || Error::UnknownTypeLabel(label.to_string());
    let path = |n: usize, special: &[(usize, usize, u32)]| -> Result<CoxeterMatrix> {
        let mut entries = vec![2u32; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        let set = |i: usize, j: usize, v: u32, entries: &mut Vec<u32>| {
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        };
        for i in 0..n.saturating_sub(1) {
            set(i, i + 1, 3, &mut entries);
        }
        for &(i, j, v) in special {
            set(i, j, v, &mut entries);
        }
        CoxeterMatrix::new(n, entries)
    };

    if let Some(rest) = label.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
        let m: u32 = rest.parse().map_err(|_| err())?;
        if m < 3 {
            return Err(err());
        }
        let mat = CoxeterMatrix::new(2, vec![1, m, m, 1])?;
        return Ok((mat, format!("I2({m})")));
    }
    if label.len() < 2 || !label.is_char_boundary(1) {
        return Err(err());
    }
    let (family, num) = label.split_at(1);
    let n: usize = num.parse().map_err(|_| err())?;
    let mat = match (family, n) {
        ("A" | "a", n) if n >= 1 => path(n, &[])?,
        ("B" | "b", n) if n >= 2 => path(n, &[(0, 1, 4)])?,
        ("D" | "d", n) if n >= 4 => {
            // Chain s1..s_{n-1}, with s_n attached to s_{n-2}.
            let mut m = path(n, &[(n - 3, n - 1, 3)])?;
            let e = m.entries.as_mut_slice();
            e[(n - 2) * n + (n - 1)] = 2;
            e[(n - 1) * n + (n - 2)] = 2;
            CoxeterMatrix::new(n, m.entries)?
        }
        ("E" | "e", n @ 6..=8) => {
            // Chain s1..s_{n-1}, with s_n attached to s3.
            let mut m = path(n, &[(2, n - 1, 3)])?;
            let e = m.entries.as_mut_slice();
            e[(n - 2) * n + (n - 1)] = 2;
            e[(n - 1) * n + (n - 2)] = 2;
            CoxeterMatrix::new(n, m.entries)?
        }
        ("F" | "f", 4) => path(4, &[(1, 2, 4)])?,
        ("H" | "h", 3) => path(3, &[(0, 1, 5)])?,
        ("H" | "h", 4) => path(4, &[(0, 1, 5)])?,
        _ => return Err(err()),
    };
    Ok((mat, format!("{}{}", family.to_ascii_uppercase(), n)))
}
